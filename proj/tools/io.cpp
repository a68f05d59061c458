#include "io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wfkit::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& v)
{
    std::istringstream in(trim(s));
    in.imbue(std::locale::classic());
    in >> v;
    return !in.fail() && in.eof() && std::isfinite(v);
}

int next_power_of_two(int n)
{
    int p = 8;
    while (p < n) p *= 2;
    return p;
}

double default_extent(int dim) { return dim == 1 ? 8.0 : 3.2; }

SampledField matrix_to_field(const std::vector<std::vector<double>>& rows, const GridOptions& opt)
{
    const int n_in = int(rows.size());
    for (const auto& r : rows)
        if (int(r.size()) != n_in) throw InputError("2D input must be a square matrix");
    const double extent = opt.extent > 0.0 ? opt.extent : default_extent(2);
    const double origin = opt.has_origin ? opt.origin : -0.5 * extent;
    // Native grid at the input resolution; resampled afterwards when needed.
    const int n_native = is_power_of_two(n_in) && n_in >= 8 ? n_in : 0;
    SampledField f;
    if (n_native) {
        f = SampledField(make_grid(2, origin, extent, n_native));
    } else {
        f.grid.dim = 2;
        f.grid.n = n_in;
        f.grid.origin = {origin, origin};
        f.grid.extent = {extent, extent};
        f.values.assign(std::size_t(n_in) * n_in, 0.0);
    }
    for (int r = 0; r < n_in; ++r)
        for (int c = 0; c < n_in; ++c) f.values[std::size_t(c) * n_in + (n_in - 1 - r)] = rows[r][c];
    int target = opt.n > 0 ? opt.n : next_power_of_two(n_in);
    if (!n_native || target != n_in) return resample(f, target);
    return f;
}

}  // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SampledField resample(const SampledField& f, int n)
{
    if (n < 8 || !is_power_of_two(n)) throw ParameterError("grid size must be a power of two >= 8");
    const Grid& src = f.grid;
    Grid dst = make_grid(src.dim, Vec{src.origin[0], src.origin[1]}, Vec{src.extent[0], src.extent[1]}, n);
    SampledField out(dst);
    auto sample_axis = [&](int axis, double x, int& i0, double& t) {
        double u = (x - src.origin[axis]) / src.spacing(axis);
        u = std::clamp(u, 0.0, double(src.n - 1));
        i0 = std::min(int(std::floor(u)), src.n - 2);
        t = u - i0;
    };
    if (src.dim == 1) {
        for (int i = 0; i < n; ++i) {
            int i0;
            double t;
            sample_axis(0, dst.coord(0, i), i0, t);
            out.values[i] = (1 - t) * f.values[i0] + t * f.values[i0 + 1];
        }
        return out;
    }
    const int m = src.n;
    for (int i = 0; i < n; ++i) {
        int i0;
        double a;
        sample_axis(0, dst.coord(0, i), i0, a);
        for (int j = 0; j < n; ++j) {
            int j0;
            double b;
            sample_axis(1, dst.coord(1, j), j0, b);
            auto v = [&](int p, int q) { return f.values[std::size_t(p) * m + q]; };
            out.values[dst.flat(i, j)] = (1 - a) * (1 - b) * v(i0, j0) + a * (1 - b) * v(i0 + 1, j0) +
                                         (1 - a) * b * v(i0, j0 + 1) + a * b * v(i0 + 1, j0 + 1);
        }
    }
    return out;
}

SampledField read_csv_field(const std::string& path, const GridOptions& opt)
{
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line, ',');
        std::vector<double> row;
        bool numeric = true;
        for (const auto& c : cells) {
            double v;
            if (!parse_double(c, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (rows.empty()) continue;  // header line
            throw InputError(fmt::format("non-numeric CSV cell on line {}", line_no));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError(fmt::format("inconsistent column count on line {}", line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("CSV input has no data rows");
    const std::size_t cols = rows.front().size();
    if (cols > 3 && cols == rows.size()) return matrix_to_field(rows, opt);
    if (cols > 3) throw InputError("2D CSV input must be a square matrix");

    const int n_in = int(rows.size());
    if (n_in < 2) throw InputError("1D CSV input needs at least two samples");
    std::vector<cplx> values;
    double origin, extent;
    if (cols == 1) {
        for (const auto& r : rows) values.emplace_back(r[0], 0.0);
        extent = opt.extent > 0.0 ? opt.extent : default_extent(1);
        origin = opt.has_origin ? opt.origin : -0.5 * extent;
    } else {
        for (const auto& r : rows) values.emplace_back(r[1], cols == 3 ? r[2] : 0.0);
        const double step = rows[1][0] - rows[0][0];
        if (!(step > 0.0)) throw InputError("x column must be strictly increasing");
        for (int i = 1; i < n_in; ++i)
            if (std::abs((rows[i][0] - rows[i - 1][0]) - step) > 1e-6 * std::abs(step))
                throw InputError("x column must be uniformly spaced");
        origin = rows[0][0];
        extent = step * n_in;
    }
    SampledField f;
    f.grid.dim = 1;
    f.grid.n = n_in;
    f.grid.origin = {origin, 0.0};
    f.grid.extent = {extent, extent};
    f.values = std::move(values);
    int target = opt.n > 0 ? opt.n : next_power_of_two(n_in);
    if (target == n_in && is_power_of_two(n_in) && n_in >= 8) {
        f.grid = make_grid(1, origin, extent, n_in);
        return f;
    }
    return resample(f, target);
}

SampledField read_pgm_field(const std::string& path, const GridOptions& opt)
{
    const std::string data = read_text_file(path);
    std::size_t pos = 0;
    auto next_token = [&]() {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        if (start == pos) throw InputError("truncated PGM header");
        return data.substr(start, pos - start);
    };
    auto next_int = [&]() {
        std::string t = next_token();
        try {
            std::size_t used = 0;
            int v = std::stoi(t, &used);
            if (used != t.size() || v <= 0) throw InputError("bad PGM header value '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw InputError("bad PGM header value '" + t + "'");
        }
    };
    std::string magic = next_token();
    if (magic != "P2" && magic != "P5") throw InputError("unsupported PGM magic '" + magic + "'");
    const int w = next_int(), h = next_int(), maxval = next_int();
    if (w != h) throw InputError("PGM image must be square");
    if (maxval > 65535) throw InputError("PGM maxval out of range");
    std::vector<std::vector<double>> rows(h, std::vector<double>(w));
    if (magic == "P2") {
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                int v = 0;
                std::string t = next_token();
                try {
                    v = std::stoi(t);
                } catch (const std::logic_error&) {
                    throw InputError("bad PGM pixel '" + t + "'");
                }
                if (v < 0 || v > maxval) throw InputError("PGM pixel out of range");
                rows[r][c] = double(v) / maxval;
            }
    } else {
        ++pos;  // single whitespace after maxval
        const int bytes = maxval < 256 ? 1 : 2;
        if (data.size() < pos + std::size_t(w) * h * bytes) throw InputError("truncated PGM raster");
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                std::size_t at = pos + (std::size_t(r) * w + c) * bytes;
                int v = bytes == 1 ? static_cast<unsigned char>(data[at])
                                   : (static_cast<unsigned char>(data[at]) << 8) | static_cast<unsigned char>(data[at + 1]);
                rows[r][c] = double(v) / maxval;
            }
    }
    return matrix_to_field(rows, opt);
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

nlohmann::ordered_json sample_to_json(const WFSample& s, bool with_score)
{
    nlohmann::ordered_json j;
    j["x"] = s.x;
    j["k"] = s.k;
    if (s.k.size() == 2) j["angle"] = std::atan2(s.k[1], s.k[0]);
    if (with_score) {
        if (std::isfinite(s.exponent))
            j["exponent"] = s.exponent;
        else
            j["exponent"] = nullptr;
        j["score"] = s.score;
        j["low_confidence"] = s.low_confidence;
    }
    if (s.flagged) j["flagged"] = true;
    return j;
}

ConicSet sampled_set_from_json(const nlohmann::json& j)
{
    try {
        if (!j.is_object() || !j.contains("samples") || !j.at("samples").is_array())
            throw InputError("WF JSON needs a \"samples\" array");
        int dim = 0;
        if (j.contains("dim")) dim = j.at("dim").get<int>();
        std::vector<WFSample> samples;
        for (const auto& s : j.at("samples")) {
            WFSample w;
            w.x = s.at("x").get<std::vector<double>>();
            w.k = s.at("k").get<std::vector<double>>();
            if (s.contains("score") && s.at("score").is_number()) w.score = s.at("score").get<double>();
            if (dim == 0) dim = int(w.x.size());
            if (int(w.x.size()) != dim || int(w.k.size()) != dim)
                throw InputError("WF JSON sample dimension mismatch");
            if (norm(w.k) == 0.0) throw InputError("WF JSON sample has a zero direction");
            samples.push_back(std::move(w));
        }
        if (dim == 0) throw InputError("WF JSON needs \"dim\" when there are no samples");
        return sampled_set(dim, std::move(samples), j.value("method", std::string("file")));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed WF JSON: ") + e.what());
    }
}

Tolerance tolerance_from_json(const nlohmann::json& j)
{
    Tolerance t;
    if (j.contains("tolerance") && j.at("tolerance").is_object()) {
        const auto& tj = j.at("tolerance");
        t.position = tj.value("position", t.position);
        t.angle = tj.value("angle", t.angle);
    }
    return t;
}

}  // namespace wfkit::cli
