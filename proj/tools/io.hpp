#pragma once

#include <string>

#include <json.hpp>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"

namespace wfkit::cli {

struct GridOptions {
    int n = 0;             // 0 keeps the input resolution (rounded up to a power of two)
    double extent = 0.0;   // 0 selects the per-dimension default
    bool has_origin = false;
    double origin = 0.0;
};

std::string read_text_file(const std::string& path);

// 1D: "x,value[,imag]" rows (optional header) or one value per line; 2D: square matrix.
// Matrices and images use image orientation: column -> x1, row (top to bottom) -> decreasing x2.
SampledField read_csv_field(const std::string& path, const GridOptions& opt);
SampledField read_pgm_field(const std::string& path, const GridOptions& opt);

// Linear (1D) or bilinear (2D) resampling onto a power-of-two grid.
SampledField resample(const SampledField& f, int n);

nlohmann::ordered_json sample_to_json(const WFSample& s, bool with_score);
ConicSet sampled_set_from_json(const nlohmann::json& j);
Tolerance tolerance_from_json(const nlohmann::json& j);

std::string format_number(double v);

}  // namespace wfkit::cli
