#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "io.hpp"
#include "wfkit/catalog.hpp"
#include "wfkit/geometry.hpp"
#include "wfkit/oscillatory.hpp"
#include "wfkit/radon.hpp"
#include "wfkit/spectral.hpp"

namespace wfkit::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
    std::string catalog, csv, pgm, boundary;
    int n = 0;
    double extent = 0.0;
    double window_r1 = 0.0, window_r2 = 0.0;
    int directions = 0;
    double kmin = 0.0;
    int radii = 0;
    double pthr = 0.0;
    double epsilon = 0.0;
    std::string out;
    std::string format = "json";
    std::string points;
    int stride = 0;
    bool hard_edges = false;
};

struct LoadedField {
    SampledField field;
    std::string input;
};

void add_grid_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--n", o.n, "grid points per axis (power of two)");
    cmd->add_option("--extent", o.extent, "grid extent per axis");
    cmd->add_option("--epsilon", o.epsilon, "regularisation for catalog samples");
    cmd->add_flag("--hard-edges", o.hard_edges, "sample curved catalog indicators pointwise");
}

void add_input_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--catalog", o.catalog, "catalog id");
    cmd->add_option("--csv", o.csv, "CSV samples");
    cmd->add_option("--pgm", o.pgm, "PGM image (P2/P5)");
    cmd->add_option("--boundary", o.boundary, "boundary JSON of a domain indicator");
    add_grid_flags(cmd, o);
}

void add_output_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_estimator_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--window-r1", o.window_r1, "window plateau radius");
    cmd->add_option("--window-r2", o.window_r2, "window support radius");
    cmd->add_option("--directions", o.directions, "number of directions");
    cmd->add_option("--points", o.points, "base points as JSON, e.g. [[0,0],[1,0]]");
    cmd->add_option("--stride", o.stride, "lattice stride in grid cells for automatic base points");
}

double default_extent(int dim) { return dim == 1 ? 8.0 : 3.2; }
int default_n(int dim) { return dim == 1 ? 1024 : 256; }

LoadedField load_field(const Options& o)
{
    int sources = !o.catalog.empty() + !o.csv.empty() + !o.pgm.empty() + !o.boundary.empty();
    if (sources != 1) throw ParameterError("exactly one of --catalog, --csv, --pgm, --boundary is required");
    GridOptions gopt;
    gopt.n = o.n;
    gopt.extent = o.extent;
    if (!o.csv.empty()) return {read_csv_field(o.csv, gopt), "csv:" + o.csv};
    if (!o.pgm.empty()) return {read_pgm_field(o.pgm, gopt), "pgm:" + o.pgm};

    CatalogDistribution d;
    std::string input;
    if (!o.catalog.empty()) {
        d = parse_catalog_id(o.catalog);
        input = "catalog:" + o.catalog;
    } else {
        d = make_domain(boundary_from_json_text(read_text_file(o.boundary)));
        input = "boundary:" + o.boundary;
    }
    const int n = o.n > 0 ? o.n : default_n(d.dim);
    const double extent = o.extent > 0.0 ? o.extent : default_extent(d.dim);
    Grid g = make_grid(d.dim, -0.5 * extent, extent, n);
    SampledField f = o.hard_edges ? sample(d, g, o.epsilon) : sample_antialiased(d, g, o.epsilon);
    return {std::move(f), input};
}

std::vector<Vec> parse_points(const std::string& text, int dim)
{
    std::vector<Vec> pts;
    try {
        auto j = nlohmann::json::parse(text);
        if (!j.is_array()) throw InputError("--points must be a JSON array");
        for (const auto& e : j) {
            Vec p = e.is_number() ? Vec{e.get<double>()} : e.get<Vec>();
            if (int(p.size()) != dim) throw InputError("--points entry has the wrong dimension");
            pts.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed --points: ") + e.what());
    }
    return pts;
}

bool constant_near(const SampledField& f, const Vec& x, double radius)
{
    const Grid& g = f.grid;
    const double h = g.spacing();
    const int reach = int(std::ceil(radius / h));
    const std::size_t c = g.nearest_index(x);
    const int ci = g.dim == 1 ? int(c) : int(c / g.n);
    const int cj = g.dim == 1 ? 0 : int(c % g.n);
    const double scale = std::max(f.max_abs(), 1e-300);
    const cplx ref = f.values[c];
    for (int i = std::max(0, ci - reach); i <= std::min(g.n - 1, ci + reach); ++i) {
        if (g.dim == 1) {
            if (std::abs(f.values[i] - ref) > 1e-12 * scale) return false;
            continue;
        }
        for (int j = std::max(0, cj - reach); j <= std::min(g.n - 1, cj + reach); ++j)
            if (std::abs(f.at(i, j) - ref) > 1e-12 * scale) return false;
    }
    return true;
}

// Grid nodes on a lattice of the given stride whose window fits inside the grid.
// Nodes where the field is constant over the window are skipped: the windowed field is smooth there.
std::vector<Vec> lattice_points(const SampledField& f, int stride, double window_r2)
{
    const Grid& g = f.grid;
    const int mid = g.n / 2;
    std::vector<Vec> pts;
    auto keep = [&](const Vec& x) {
        return g.contains_ball(x, window_r2) && !constant_near(f, x, window_r2);
    };
    for (int i = mid % stride; i < g.n; i += stride) {
        if (g.dim == 1) {
            Vec x{g.coord(0, i)};
            if (keep(x)) pts.push_back(x);
            continue;
        }
        for (int j = mid % stride; j < g.n; j += stride) {
            Vec x{g.coord(0, i), g.coord(1, j)};
            if (keep(x)) pts.push_back(x);
        }
    }
    return pts;
}

std::vector<Vec> base_points(const Options& o, const SampledField& f, double window_r2)
{
    if (!o.points.empty()) return parse_points(o.points, f.grid.dim);
    int stride = o.stride > 0 ? o.stride : (f.grid.dim == 1 ? 1 : 8);
    return lattice_points(f, stride, window_r2);
}

ojson grid_json(const Grid& g)
{
    ojson j;
    j["dim"] = g.dim;
    j["n"] = g.n;
    j["origin"] = Vec(g.origin.begin(), g.origin.begin() + g.dim);
    j["extent"] = Vec(g.extent.begin(), g.extent.begin() + g.dim);
    j["spacing"] = g.spacing();
    return j;
}

std::string csv_number(double v)
{
    if (!std::isfinite(v)) return "nan";
    return fmt::format("{:.17e}", v);
}

std::string samples_csv(const std::vector<WFSample>& samples, int dim)
{
    std::vector<std::string> head;
    for (int i = 0; i < dim; ++i) head.push_back(fmt::format("x{}", i));
    for (int i = 0; i < dim; ++i) head.push_back(fmt::format("k{}", i));
    std::string s = fmt::format("{},exponent,score\n", fmt::join(head, ","));
    for (const auto& w : samples) {
        std::vector<std::string> cells;
        for (double v : w.x) cells.push_back(csv_number(v));
        for (double v : w.k) cells.push_back(csv_number(v));
        cells.push_back(csv_number(w.exponent));
        cells.push_back(csv_number(w.score));
        s += fmt::format("{}\n", fmt::join(cells, ","));
    }
    return s;
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    f << text;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

int cmd_estimate_wf(const Options& o, std::ostream& out, std::ostream& err)
{
    auto [field, input] = load_field(o);
    const Grid& g = field.grid;
    EstimatorParams p = default_params(g);
    if (o.window_r1 > 0.0) p.window_r1 = o.window_r1;
    if (o.window_r2 > 0.0) p.window_r2 = o.window_r2;
    if (o.directions > 0) p.directions = o.directions;
    if (o.kmin > 0.0) p.k_min = o.kmin;
    if (o.radii > 0) p.radius_count = o.radii;
    if (o.pthr > 0.0) p.p_thr = o.pthr;
    p.validate(g);

    auto pts = base_points(o, field, p.window_r2);
    err << fmt::format("estimate-wf: {} base points\n", pts.size());
    ConicSet wf = estimate_wf(field, pts, p);
    const DirectionSet dirs = uniform_directions(g.dim, g.dim == 1 ? 2 : p.directions);
    Tolerance tol = default_tolerance(g, dirs);

    if (o.format == "csv") {
        emit(o, samples_csv(wf.samples, g.dim), out);
        return kOk;
    }
    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "fourier";
    j["dim"] = g.dim;
    j["input"] = input;
    j["grid"] = grid_json(g);
    ojson pj;
    pj["window_r1"] = p.window_r1;
    pj["window_r2"] = p.window_r2;
    pj["directions"] = g.dim == 1 ? 2 : p.directions;
    pj["k_min"] = p.k_min;
    pj["radii"] = p.radii();
    pj["p_thr"] = p.p_thr;
    pj["floor_rel"] = p.floor_rel;
    j["params"] = pj;
    j["tolerance"] = {{"position", tol.position}, {"angle", tol.angle}};
    j["base_points"] = pts.size();
    ojson arr = ojson::array();
    for (const auto& s : wf.samples) arr.push_back(sample_to_json(s, true));
    j["samples"] = arr;
    emit(o, dump(j), out);
    return kOk;
}

int cmd_radon_wf(const Options& o, std::ostream& out, std::ostream& err)
{
    auto [field, input] = load_field(o);
    const Grid& g = field.grid;
    if (g.dim != 2) throw ParameterError("radon-wf needs 2D input");
    RadonWFParams p = default_radon_params(g);
    if (o.window_r1 > 0.0) p.window_r1 = o.window_r1;
    if (o.window_r2 > 0.0) p.window_r2 = o.window_r2;
    if (o.directions > 0) p.directions = o.directions;
    p.validate(g);

    auto pts = base_points(o, field, p.window_r2);
    err << fmt::format("radon-wf: {} base points\n", pts.size());
    ConicSet wf = estimate_wf_pm(field, pts, p);
    Tolerance tol = default_tolerance(g, uniform_directions(2, p.directions));

    if (o.format == "csv") {
        emit(o, samples_csv(wf.samples, g.dim), out);
        return kOk;
    }
    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "radon";
    j["dim"] = 2;
    j["input"] = input;
    j["grid"] = grid_json(g);
    ojson pj;
    pj["window_r1"] = p.window_r1;
    pj["window_r2"] = p.window_r2;
    pj["directions"] = p.directions;
    pj["offset_step"] = p.coarse_step;
    pj["locus"] = p.locus;
    pj["growth_factor"] = p.growth_factor;
    pj["relevance"] = p.relevance;
    pj["interpolation"] = p.interpolation == Interpolation::Sinc        ? "sinc"
                          : p.interpolation == Interpolation::Lagrange6 ? "lagrange6"
                                                                        : "bilinear";
    j["params"] = pj;
    j["tolerance"] = {{"position", tol.position}, {"angle", tol.angle}};
    j["base_points"] = pts.size();
    ojson arr = ojson::array();
    for (const auto& s : wf.samples) arr.push_back(sample_to_json(s, true));
    j["samples"] = arr;
    emit(o, dump(j), out);
    return kOk;
}

struct WFSource {
    ConicSet wf;
    SupportSet support;
    Tolerance tol;
};

WFSource resolve_source(const std::string& src)
{
    std::error_code ec;
    if (std::filesystem::is_regular_file(src, ec)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(src));
        } catch (const nlohmann::json::exception& e) {
            throw InputError("malformed WF JSON '" + src + "': " + e.what());
        }
        return {sampled_set_from_json(j), support_everywhere(), tolerance_from_json(j)};
    }
    CatalogDistribution d = parse_catalog_id(src);
    return {exact_wf(d), support_of(d), Tolerance{}};
}

int cmd_check_product(const Options& o, const std::string& a, const std::string& b, std::ostream& out)
{
    WFSource u = resolve_source(a), v = resolve_source(b);
    if (u.wf.dim != v.wf.dim) throw ParameterError("WF sources have different dimensions");
    Tolerance tol{std::max(u.tol.position, v.tol.position), std::max(u.tol.angle, v.tol.angle)};
    Verdict verdict = hormander_check(u.wf, v.wf, tol);

    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "product";
    j["dim"] = u.wf.dim;
    j["inputs"] = {a, b};
    j["ok"] = verdict.ok;
    std::vector<WFSample> bound;
    if (verdict.ok) {
        j["witness"] = nullptr;
        ConicSet s = product_wf_bound(u.wf, u.support, v.wf, v.support, tol);
        if (s.form == ConicSet::Form::Sampled) {
            bound = s.samples;
        } else {
            for (const auto& x : candidate_points(s))
                for (const auto& k : fiber(s, x, tol)) {
                    WFSample w;
                    w.x = x;
                    w.k = k;
                    bound.push_back(w);
                }
        }
        ojson arr = ojson::array();
        for (const auto& w : bound) arr.push_back(sample_to_json(w, false));
        j["bound"] = arr;
    } else {
        const auto& [x, k] = *verdict.witness;
        j["witness"] = {{"x", x}, {"k", k}};
    }

    if (o.format == "csv") {
        std::string s;
        if (verdict.ok) {
            s = samples_csv(bound, u.wf.dim);
        } else {
            const auto& [x, k] = *verdict.witness;
            std::vector<std::string> cells;
            for (double c : x) cells.push_back(csv_number(c));
            for (double c : k) cells.push_back(csv_number(c));
            s = fmt::format("witness\n{}\n", fmt::join(cells, ","));
        }
        emit(o, s, out);
    } else {
        emit(o, dump(j), out);
    }
    return verdict.ok ? kOk : kViolation;
}

struct IntersectOptions {
    int directions = 32;
    std::string offsets;
    std::string signature;
};

std::vector<double> parse_offsets(const std::string& spec, const Boundary2D& b)
{
    double lo, hi;
    int count;
    if (spec.empty()) {
        Box box = bounding_box(b);
        double r = 0.0;
        for (double x : {box.lo[0], box.hi[0]})
            for (double y : {box.lo[1], box.hi[1]}) r = std::max(r, std::hypot(x, y));
        lo = -1.25 * r;
        hi = 1.25 * r;
        count = 501;
    } else {
        std::vector<double> v;
        std::istringstream in(spec);
        in.imbue(std::locale::classic());
        std::string cell;
        while (std::getline(in, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::logic_error&) {
                throw ParameterError("--offsets expects lo,hi,count");
            }
        }
        if (v.size() != 3) throw ParameterError("--offsets expects lo,hi,count");
        lo = v[0];
        hi = v[1];
        count = int(v[2]);
        if (!(hi >= lo) || count < 1 || double(count) != v[2]) throw ParameterError("invalid --offsets range");
    }
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return out;
}

std::string signature_csv(const IntersectionSignature& sig)
{
    std::string s = "nu_angle,a,n\n";
    for (std::size_t d = 0; d < sig.directions.size(); ++d) {
        double ang = std::atan2(sig.directions[d][1], sig.directions[d][0]);
        for (std::size_t i = 0; i < sig.offsets.size(); ++i)
            s += fmt::format("{},{},{}\n", csv_number(ang), csv_number(sig.offsets[i]), sig.counts[d][i]);
    }
    return s;
}

int cmd_intersections(const Options& o, const IntersectOptions& io, std::ostream& out)
{
    if (o.boundary.empty()) throw ParameterError("intersections needs --boundary");
    if (io.directions < 4) throw ParameterError("--directions must be at least 4");
    Boundary2D b = boundary_from_json_text(read_text_file(o.boundary));
    auto offsets = parse_offsets(io.offsets, b);
    IntersectionSignature sig = intersection_signature(b, uniform_directions(2, io.directions), offsets);
    const std::string csv = signature_csv(sig);
    if (!io.signature.empty()) {
        std::ofstream f(io.signature, std::ios::binary);
        if (!f) throw InputError("cannot write '" + io.signature + "'");
        f << csv;
    }
    if (o.format == "csv") {
        emit(o, csv, out);
        return kOk;
    }
    ConicSet wf = wf_from_signature(sig, b);
    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "intersections";
    j["dim"] = 2;
    j["input"] = "boundary:" + o.boundary;
    j["offsets"] = {{"lo", offsets.front()}, {"hi", offsets.back()}, {"count", offsets.size()}};
    ojson jumps = ojson::array();
    for (std::size_t d = 0; d < sig.directions.size(); ++d) {
        ojson e;
        e["direction"] = sig.directions[d];
        e["angle"] = std::atan2(sig.directions[d][1], sig.directions[d][0]);
        e["max_count"] = sig.counts[d].empty() ? 0 : *std::max_element(sig.counts[d].begin(), sig.counts[d].end());
        e["jumps"] = sig.jump_offsets[d];
        jumps.push_back(e);
    }
    j["jumps"] = jumps;
    ojson arr = ojson::array();
    for (const auto& s : wf.samples) arr.push_back(sample_to_json(s, false));
    j["samples"] = arr;
    emit(o, dump(j), out);
    return kOk;
}

std::map<std::string, std::string> parse_kv(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParameterError("--x-grid expects key=value pairs");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double kv_number(const std::map<std::string, std::string>& kv, const std::string& key, double fallback)
{
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw ParameterError("");
        return v;
    } catch (const std::exception&) {
        throw ParameterError("bad value for '" + key + "' in --x-grid");
    }
}

// ring:r=1,n=64 | box:lo=-1.5,hi=1.5,n=16 | cone:n=100,seed=11 | points:[[...],...]
std::vector<Vec> parse_x_grid(const std::string& spec, int dim)
{
    auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "points") return parse_points(rest, dim);
    auto kv = parse_kv(rest);
    std::vector<Vec> xs;
    if (kind == "ring") {
        if (dim != 2) throw ParameterError("ring grids are 2D");
        const double r = kv_number(kv, "r", 1.0);
        const int n = int(kv_number(kv, "n", 64));
        if (n < 1 || !(r > 0.0)) throw ParameterError("ring grid needs r > 0 and n >= 1");
        for (int i = 0; i < n; ++i) {
            double t = 2.0 * kPi * i / n;
            xs.push_back({r * std::cos(t), r * std::sin(t)});
        }
    } else if (kind == "box") {
        const double lo = kv_number(kv, "lo", -1.5), hi = kv_number(kv, "hi", 1.5);
        const int n = int(kv_number(kv, "n", 16));
        if (n < 2 || !(hi > lo)) throw ParameterError("box grid needs hi > lo and n >= 2");
        if (dim > 2) throw ParameterError("box grids are 1D or 2D");
        for (int i = 0; i < n; ++i) {
            double a = lo + (hi - lo) * i / (n - 1);
            if (dim == 1) {
                xs.push_back({a});
                continue;
            }
            for (int k = 0; k < n; ++k) xs.push_back({a, lo + (hi - lo) * k / (n - 1)});
        }
    } else if (kind == "cone") {
        if (dim != 4) throw ParameterError("cone grids are 4D");
        const int n = int(kv_number(kv, "n", 100));
        if (n < 1) throw ParameterError("cone grid needs n >= 1");
        xs = light_cone_samples(n, unsigned(kv_number(kv, "seed", 11)));
    } else {
        throw ParameterError("unknown --x-grid kind '" + kind + "'");
    }
    return xs;
}

int cmd_oscillatory(const Options& o, const std::string& phase_id, const std::string& x_grid, std::ostream& out)
{
    PhaseFunction phase = phase_from_id(phase_id);
    std::string spec = x_grid;
    if (spec.empty()) spec = phase.n == 4 ? "cone:n=100" : "ring:r=1,n=64";
    auto xs = parse_x_grid(spec, phase.n);
    PhaseBound bound = wf_bound_from_phase(phase, xs);
    if (o.format == "csv") {
        emit(o, samples_csv(bound.set.samples, phase.n), out);
        return kOk;
    }
    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "oscillatory";
    j["dim"] = phase.n;
    j["phase"] = phase.name;
    j["x_grid"] = spec;
    j["base_points"] = xs.size();
    ojson arr = ojson::array();
    for (const auto& s : bound.set.samples) arr.push_back(sample_to_json(s, false));
    j["samples"] = arr;
    ojson deg = ojson::array();
    for (const auto& [x, xi] : bound.degenerate) deg.push_back({{"x", x}, {"xi", xi}});
    j["degenerate"] = deg;
    emit(o, dump(j), out);
    return kOk;
}

int cmd_catalog(const Options& o, std::ostream& out)
{
    auto entries = catalog_listing();
    if (o.format == "csv") {
        std::string s = "id,description,wf\n";
        auto quote = [](const std::string& t) {
            std::string q = "\"";
            for (char c : t) q += c == '"' ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        };
        for (const auto& e : entries) s += fmt::format("{},{},{}\n", quote(e.id), quote(e.description), quote(e.wf));
        emit(o, s, out);
        return kOk;
    }
    ojson j;
    j["schema"] = "wf/1";
    j["method"] = "catalog";
    ojson arr = ojson::array();
    for (const auto& e : entries) arr.push_back({{"id", e.id}, {"description", e.description}, {"wf", e.wf}});
    j["entries"] = arr;
    emit(o, dump(j), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical and symbolic wavefront-set toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* est = app.add_subcommand("estimate-wf", "windowed-Fourier wavefront estimate");
    add_input_flags(est, o);
    add_estimator_flags(est, o);
    est->add_option("--kmin", o.kmin, "smallest probe radius");
    est->add_option("--radii", o.radii, "number of probe radii");
    est->add_option("--pthr", o.pthr, "decay threshold exponent");
    add_output_flags(est, o);

    auto* rad = app.add_subcommand("radon-wf", "Radon-smoothness sign-symmetric wavefront estimate");
    add_input_flags(rad, o);
    add_estimator_flags(rad, o);
    add_output_flags(rad, o);

    std::string src_a, src_b;
    auto* chk = app.add_subcommand("check-product", "Hormander product condition and product bound");
    chk->add_option("u", src_a, "catalog id or WF JSON file")->required();
    chk->add_option("v", src_b, "catalog id or WF JSON file")->required();
    add_output_flags(chk, o);

    IntersectOptions io;
    auto* isc = app.add_subcommand("intersections", "line intersection counts of a boundary");
    isc->add_option("--boundary", o.boundary, "boundary JSON")->required();
    isc->add_option("--directions", io.directions, "directions over the full circle");
    isc->add_option("--offsets", io.offsets, "lo,hi,count");
    isc->add_option("--signature", io.signature, "also write the signature CSV here");
    add_output_flags(isc, o);

    std::string phase_id = "circle", x_grid;
    auto* osc = app.add_subcommand("oscillatory-wf", "wavefront bound from a phase function");
    osc->add_option("--phase", phase_id, "circle | wightman | linear:[[c0..c5],...]");
    osc->add_option("--x-grid", x_grid, "ring:r=,n= | box:lo=,hi=,n= | cone:n=,seed= | points:[...]");
    add_output_flags(osc, o);

    auto* cat = app.add_subcommand("catalog", "list catalog ids and their wavefront sets");
    add_output_flags(cat, o);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadParameter;
    }

    try {
        if (est->parsed()) return cmd_estimate_wf(o, out, err);
        if (rad->parsed()) return cmd_radon_wf(o, out, err);
        if (chk->parsed()) return cmd_check_product(o, src_a, src_b, out);
        if (isc->parsed()) return cmd_intersections(o, io, out);
        if (osc->parsed()) return cmd_oscillatory(o, phase_id, x_grid, out);
        if (cat->parsed()) return cmd_catalog(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kBadParameter;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadParameter;
}

}  // namespace wfkit::cli
