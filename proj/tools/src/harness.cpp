#include "gaussint_tools/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/local_time.hpp"
#include "gaussint/moments.hpp"
#include "gaussint/operator_config.hpp"
#include "gaussint/parallel.hpp"
#include "gaussint/self_intersection.hpp"
#include "gaussint/suites.hpp"
#include "gaussint/verify.hpp"

namespace gaussint::harness {
namespace {

constexpr unsigned long long kDefaultSeed = 42;

std::string fmt(double x) { return std::isfinite(x) ? format_double(x) : ""; }

int positive_int(const ParamTable& t, const std::string& key) {
    const long long v = t.require_int(key);
    if (v < 1 || v > (1 << 26)) throw ConfigError(key + " must be a positive integer, got " + std::to_string(v));
    return static_cast<int>(v);
}

int nonneg_int(const ParamTable& t, const std::string& key) {
    const long long v = t.require_int(key);
    if (v < 0 || v > (1 << 26)) throw ConfigError(key + " must be a non-negative integer, got " + std::to_string(v));
    return static_cast<int>(v);
}

double positive_double(const ParamTable& t, const std::string& key) {
    const double v = t.require_double(key);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive");
    return v;
}

std::uint64_t seed_of(const ParamTable& t) { return static_cast<std::uint64_t>(t.require_int("seed")); }

/// Operator section `prefix.*` on `grid`; the section must be fully consumed.
L2Operator section_operator(const ParamTable& t, const std::string& prefix, const GridSpec& grid) {
    const ParamTable sub = t.section(prefix);
    L2Operator op = make_operator(sub, grid);
    sub.require_all_consumed();
    return op;
}

// ---------------------------------------------------------------- simulate

RunResult run_simulate(const ParamTable& t) {
    const GridSpec grid(positive_int(t, "grid"));
    const int dim = positive_int(t, "dim");
    if (dim > 2) throw ConfigError("dim must be 1 or 2");
    const int paths = positive_int(t, "paths");
    const std::string process = t.require("process");
    const std::uint64_t seed = seed_of(t);
    std::optional<L2Operator> op;
    std::vector<double> a;
    if (process == "integrator") {
        op = section_operator(t, "operator", grid);
    } else if (process == "bridge") {
        // The bridge is built from Wiener noise; an operator section may only say so.
        const ParamTable sub = t.section("operator");
        if (!sub.entries().empty() && (sub.entries().size() != 1 || sub.require("kind") != "identity")) {
            throw ConfigError("process = bridge only supports operator.kind = identity");
        }
        a = t.require_double_list("a");
        if (static_cast<int>(a.size()) != dim) throw ConfigError("bridge endpoint a needs one value per dimension");
    } else {
        throw ConfigError("process must be integrator or bridge, got '" + process + "'");
    }
    t.require_all_consumed();

    std::vector<GaussPath> out(static_cast<std::size_t>(paths), GaussPath::zero(grid, dim));
    parallel_for(out.size(), [&](std::size_t p) {
        std::vector<NoiseSample> noises;
        for (int d = 0; d < dim; ++d) noises.push_back(sample_noise(grid, seed, p * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)));
        out[p] = op ? integrator_path(*op, noises) : bridge_path(a, noises);
    });

    RunResult r;
    r.csv = dim == 1 ? "path,t,x1\n" : "path,t,x1,x2\n";
    for (int p = 0; p < paths; ++p) {
        const GaussPath& path = out[static_cast<std::size_t>(p)];
        for (int k = 0; k <= grid.n_cells(); ++k) {
            r.csv += std::to_string(p) + "," + fmt(grid.node(k));
            for (int d = 0; d < dim; ++d) r.csv += "," + fmt(path.values[static_cast<std::size_t>(d)][k]);
            r.csv += "\n";
        }
    }
    r.log = "simulated " + std::to_string(paths) + " path(s) on " + std::to_string(grid.n_cells()) + " cells\n";
    return r;
}

// ---------------------------------------------------------------- verify

RunResult run_verify(const ParamTable& t) {
    const std::uint64_t seed = seed_of(t);
    const double scale = positive_double(t, "scale");
    if (scale > 1.0) throw ConfigError("scale must be in (0, 1]");
    t.require_all_consumed();

    RunResult r;
    r.csv = csv_header() + "\n";
    bool all = true;
    for (const auto& rep : run_lemma_suites(seed, scale)) {
        r.csv += csv_row(rep) + "\n";
        r.log += summary(rep) + "\n";
        all = all && rep.passed();
    }
    r.log += all ? "all checks passed\n" : "CHECK FAILURE\n";
    r.exit_code = all ? kSuccess : kCheckFailed;
    return r;
}

// ---------------------------------------------------------------- local time

RunResult run_lt_moments(const ParamTable& t) {
    const GridSpec grid(positive_int(t, "grid"));
    const GridSpec moment_grid(positive_int(t, "moment_grid"));
    const double eps = positive_double(t, "eps");
    const int reps = nonneg_int(t, "reps");
    const int refinement = nonneg_int(t, "refinement");
    const std::uint64_t seed = seed_of(t);
    const ParamTable op_table = t.section("operator");
    const L2Operator a_moment = make_operator(op_table, moment_grid);
    const L2Operator a_mc = make_operator(op_table, grid);
    op_table.require_all_consumed();
    t.require_all_consumed();
    if (reps > 0) require_bandwidth(grid, eps);

    const MomentQuadrature exact = second_moment_exact(a_moment, refinement);
    const double regularized = second_moment_regularized(a_moment, eps, refinement).value;
    const double bias = std::abs(regularized - exact.value) + grid.h() / std::sqrt(2.0 * std::numbers::pi * eps);
    MCEstimate mc{std::nan(""), std::nan(""), 0};
    if (reps > 0) mc = mc_selfoverlap(a_mc, eps, reps, seed);

    RunResult r;
    r.csv = "n,moment_grid,refinement,exact_value,refinement_error,eps,reps,mc_mean,mc_se,bias_bound\n";
    r.csv += std::to_string(grid.n_cells()) + "," + std::to_string(moment_grid.n_cells()) + "," +
             std::to_string(refinement) + "," + fmt(exact.value) + "," + fmt(exact.error_estimate) + "," + fmt(eps) +
             "," + std::to_string(reps) + "," + fmt(mc.mean) + "," + fmt(mc.se) + "," + fmt(bias) + "\n";
    r.log = "E int l^2 du = " + fmt(exact.value) + " (refinement error " + fmt(exact.error_estimate) + ")\n";
    return r;
}

RunResult run_lt_converge(const ParamTable& t) {
    const GridSpec grid(positive_int(t, "grid"));
    const GridSpec moment_grid(positive_int(t, "moment_grid"));
    const double eps = positive_double(t, "eps");
    const int reps = nonneg_int(t, "reps");
    const int refinement = nonneg_int(t, "refinement");
    const std::uint64_t seed = seed_of(t);
    std::vector<int> ns;
    for (double v : t.require_double_list("ns")) {
        if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("ns must be positive integers");
        ns.push_back(static_cast<int>(v));
    }
    const ParamTable a_table = t.section("operator");
    const ParamTable k_table = t.section("k");
    const L2Operator a_moment = make_operator(a_table, moment_grid);
    const L2Operator k_moment = make_operator(k_table, moment_grid);
    const L2Operator a_mc = make_operator(a_table, grid);
    const L2Operator k_mc = make_operator(k_table, grid);
    a_table.require_all_consumed();
    k_table.require_all_consumed();
    t.require_all_consumed();
    if (reps > 0) require_bandwidth(grid, eps);

    const auto points = lt_convergence_experiment(
        [&](int n) { return linear_combination(1.0, a_moment, 1.0 / n, k_moment); }, a_moment, ns, refinement);

    RunResult r;
    r.csv = "n,exact_value,refinement_error,inverse_norm,mc_mean,mc_se\n";
    bool decreasing = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        MCEstimate mc{std::nan(""), std::nan(""), 0};
        if (reps > 0) mc = mc_convergence_gap(linear_combination(1.0, a_mc, 1.0 / p.n, k_mc), a_mc, eps, reps, seed);
        r.csv += std::to_string(p.n) + "," + fmt(p.value) + "," + fmt(p.error_estimate) + "," + fmt(p.inverse_norm) +
                 "," + fmt(mc.mean) + "," + fmt(mc.se) + "\n";
        if (i > 0) decreasing = decreasing && p.value < points[i - 1].value;
    }
    r.log = std::string("E int (l_n - l)^2 du is ") + (decreasing ? "" : "NOT ") + "strictly decreasing in n\n";
    return r;
}

// ---------------------------------------------------------------- self-intersection

struct SelfxParams {
    T2Options t2;
    int p = 1;
    int refinement = 2;
    std::vector<double> a;
};

SelfxParams selfx_params(const ParamTable& t) {
    SelfxParams s;
    s.t2.n_cells = positive_int(t, "grid");
    s.t2.eps = positive_double(t, "eps");
    s.t2.reps = nonneg_int(t, "reps");
    s.t2.seed = seed_of(t);
    s.p = positive_int(t, "p");
    s.refinement = nonneg_int(t, "refinement");
    s.a = t.require_double_list("a");
    if (s.a.empty()) throw ConfigError("a needs at least one value");
    return s;
}

RunResult run_selfx(const ParamTable& t, int dim) {
    SelfxParams s = selfx_params(t);
    std::optional<double> beta;
    if (dim == 2) {
        s.t2.alpha = positive_double(t, "alpha");
    } else if (t.contains("beta")) {
        beta = positive_double(t, "beta");
    }
    t.require_all_consumed();
    if (s.t2.reps > 0) require_bandwidth(GridSpec(s.t2.n_cells), s.t2.eps);
    for (double a : s.a) {
        if (dim == 2) make_condition_triangle(std::abs(a), *s.t2.alpha);
        if (!std::isfinite(a)) throw ConfigError("a values must be finite");
    }

    const std::size_t m = s.a.size();
    std::vector<QuadResult> exact(m, QuadResult{std::nan(""), std::nan("")});
    if (s.p == 1) {
        parallel_for(m, [&](std::size_t i) {
            exact[i] = dim == 1 ? et2_1d_exact(s.a[i], s.refinement)
                                : et2_planar_exact(std::abs(s.a[i]), *s.t2.alpha, s.refinement);
        });
    }
    std::vector<T2Estimate> mc(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (s.t2.reps == 0) {
            mc[i].mc = {std::nan(""), std::nan(""), 0};
            mc[i].eps_bias = mc[i].grid_bias = std::nan("");
            continue;
        }
        std::vector<double> a{dim == 1 ? s.a[i] : std::abs(s.a[i])};
        if (dim == 2) a.push_back(0.0);
        mc[i] = mc_t2_conditional(a, s.p, s.t2);
    }

    std::string classification = to_string(LimitClass::inconclusive);
    if (s.p == 1) {
        std::vector<std::pair<double, double>> values;
        for (std::size_t i = 0; i < m; ++i) values.emplace_back(std::abs(s.a[i]), exact[i].value);
        classification = to_string(classify_values(dim == 2 ? *s.t2.alpha : 0.0, values).classified_limit);
    }

    RunResult r;
    std::string certificate;
    if (beta) {
        CertificateOptions opt;
        opt.n_cells = s.t2.n_cells;
        opt.eps = s.t2.eps;
        opt.reps = s.t2.reps;
        opt.seed = s.t2.seed;
        opt.refinement = s.refinement;
        if (s.p > 2) throw ConfigError("certificate needs p = 1 or 2");
        const VerifyReport rep = theorem10_bound_certificate(s.p, s.a, *beta, opt);
        certificate = to_string(rep.outcome);
        r.log += summary(rep) + "\n";
        if (rep.outcome == Outcome::fail) r.exit_code = kCheckFailed;
    }

    r.csv = "a_norm,alpha,p,exact,exact_error,mc_mean,mc_se,eps_bias,grid_bias,classification";
    r.csv += beta ? ",certificate\n" : "\n";
    for (std::size_t i = 0; i < m; ++i) {
        r.csv += fmt(std::abs(s.a[i])) + "," + (dim == 2 ? fmt(*s.t2.alpha) : std::string()) + "," +
                 std::to_string(s.p) + "," + fmt(exact[i].value) + "," + fmt(exact[i].error) + "," +
                 fmt(mc[i].mc.mean) + "," + fmt(mc[i].mc.se) + "," + fmt(mc[i].eps_bias) + "," +
                 fmt(mc[i].grid_bias) + "," + classification;
        r.csv += beta ? "," + certificate + "\n" : "\n";
    }
    r.log += "classification: " + classification + "\n";
    return r;
}

// ---------------------------------------------------------------- presets

struct PresetScale {
    int grid, reps, moment_grid;
    double eps, scale;
};

PresetScale preset_scale(const std::string& name) {
    if (name == "desk") return {4096, 2000, 256, 1e-3, 1.0};
    if (name == "smoke") return {256, 64, 32, 1e-2, 0.05};
    throw ConfigError("unknown preset '" + name + "' (expected desk or smoke)");
}

std::string itos(long long v) { return std::to_string(v); }

}  // namespace

const std::vector<std::string>& config_subcommands() {
    static const std::vector<std::string> names{"simulate", "verify", "lt-moments", "lt-converge", "selfx-1d",
                                                "selfx-planar"};
    return names;
}

ParamTable preset(const std::string& subcommand, const std::string& name) {
    const PresetScale s = preset_scale(name);
    ParamTable t;
    auto physics = [&] {
        t.set("grid", itos(s.grid));
        t.set("reps", itos(s.reps));
        t.set("eps", format_double(s.eps));
    };
    if (subcommand == "simulate") {
        t.set("grid", itos(s.grid));
        t.set("dim", "1");
        t.set("paths", "1");
        t.set("process", "integrator");
        t.set("operator.kind", "identity");
    } else if (subcommand == "verify") {
        t.set("scale", format_double(s.scale));
    } else if (subcommand == "lt-moments") {
        physics();
        t.set("moment_grid", itos(s.moment_grid));
        t.set("refinement", "2");
        t.set("operator.kind", "identity");
    } else if (subcommand == "lt-converge") {
        physics();
        // The exact quadrature carries the experiment; paired Monte Carlo at
        // desk scale would take hours, so it is opt-in there.
        if (name == "desk") t.set("reps", "0");
        t.set("moment_grid", itos(s.moment_grid));
        t.set("refinement", "2");
        t.set("ns", "1,2,4,8,16,32,64");
        t.set("operator.kind", "identity");
        t.set("k.kind", "volterra");
        t.set("k.kernel", "exp");
        t.set("k.kernel_value", "0.5");
        t.set("k.kernel_rate", "1");
    } else if (subcommand == "selfx-1d") {
        physics();
        t.set("p", "1");
        t.set("refinement", "2");
        t.set("a", "2,5,10,20,50");
    } else if (subcommand == "selfx-planar") {
        physics();
        t.set("p", "1");
        t.set("refinement", "2");
        t.set("alpha", "2");
        t.set("a", "10,100,1000");
    } else {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    return t;
}

ParamTable resolve_config(const std::string& subcommand, const ConfigSources& sources) {
    ParamTable t;
    if (sources.preset) t = preset(subcommand, *sources.preset);
    if (sources.config_path) {
        const ParamTable file = ParamTable::load(*sources.config_path);
        for (const auto& [k, v] : file.entries()) t.set(k, v);
    }
    for (const auto& [k, v] : sources.overrides) t.set(k, v);
    if (sources.seed) {
        t.set("seed", std::to_string(*sources.seed));
    } else if (!t.contains("seed")) {
        t.set("seed", std::to_string(kDefaultSeed));
    }
    // Resolution must not count as consumption.
    ParamTable fresh = ParamTable::parse(t.serialize(), sources.config_path.value_or("<config>"));
    return fresh;
}

std::string provenance_line(const std::string& subcommand, const ParamTable& config) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(config.serialize())));
    const auto seed = config.entries().count("seed") ? config.entries().at("seed") : std::string("?");
    return "# gaussint " GAUSSINT_VERSION " " + subcommand + " seed=" + seed + " config=" + hash;
}

RunResult run(const std::string& subcommand, const ParamTable& config) {
    RunResult r;
    if (subcommand == "simulate") {
        r = run_simulate(config);
    } else if (subcommand == "verify") {
        r = run_verify(config);
    } else if (subcommand == "lt-moments") {
        r = run_lt_moments(config);
    } else if (subcommand == "lt-converge") {
        r = run_lt_converge(config);
    } else if (subcommand == "selfx-1d") {
        r = run_selfx(config, 1);
    } else if (subcommand == "selfx-planar") {
        r = run_selfx(config, 2);
    } else {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    r.csv = provenance_line(subcommand, config) + "\n" + r.csv;
    return r;
}

// ---------------------------------------------------------------- plotdata

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::vector<PlotFile> plot_series(const std::string& csv_text, const std::string& stem, const std::string& out_dir) {
    std::istringstream in(csv_text);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = split_csv(line);
        } else {
            rows.push_back(split_csv(line));
        }
    }
    if (header.empty()) return {};

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    std::size_t x_col = 0;
    bool log_x = false;
    if (col.count("n")) {
        x_col = col["n"];
    } else if (col.count("a_norm")) {
        x_col = col["a_norm"];
        log_x = true;
    } else if (col.count("t")) {
        x_col = col["t"];
    } else {
        throw ConfigError("plotdata: no x column (n, a_norm or t)");
    }
    static const std::pair<const char*, const char*> kSeries[] = {
        {"exact_value", "refinement_error"}, {"exact", "exact_error"}, {"mc_mean", "mc_se"}, {"x1", ""}, {"x2", ""}};

    const std::filesystem::path dir(out_dir);
    std::vector<PlotFile> files;
    for (const auto& [y_name, err_name] : kSeries) {
        if (!col.count(y_name)) continue;
        const std::size_t y_col = col[y_name];
        const bool has_err = *err_name && col.count(err_name);
        const std::size_t e_col = has_err ? col[err_name] : 0;
        PlotFile f;
        f.path = (dir / (stem + "_" + y_name + ".dat")).string();
        for (const auto& row : rows) {
            auto cell = [&](std::size_t c) { return c < row.size() ? row[c] : std::string(); };
            if (cell(x_col).empty() || cell(y_col).empty()) continue;
            double x = parse_double(cell(x_col), header[x_col]);
            if (log_x) x = std::log(x);
            const double y = parse_double(cell(y_col), y_name);
            const double e = has_err && !cell(e_col).empty() ? parse_double(cell(e_col), err_name) : 0.0;
            f.content += format_double(x) + " " + format_double(y) + " " + format_double(e) + "\n";
        }
        files.push_back(std::move(f));
    }
    if (files.empty()) throw ConfigError("plotdata: no series columns (exact_value, exact, mc_mean, x1, x2)");
    return files;
}

// ---------------------------------------------------------------- command line

namespace {

struct SubcommandFlags {
    std::string config_path, preset_name, output;
    unsigned long long seed = 0;
    int threads = 0;
    bool emit_config = false;
    std::vector<std::string> sets;
    std::map<std::string, std::string> shorthand;  // key -> value
    CLI::Option* seed_opt = nullptr;
    CLI::Option* config_opt = nullptr;
    CLI::Option* preset_opt = nullptr;
};

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot open '" << path << "' for writing\n";
        return false;
    }
    f << content;
    f.close();
    if (!f) {
        err << "error: write to '" << path << "' failed\n";
        return false;
    }
    return true;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian integrators: simulation, local times, self-intersections"};
    app.require_subcommand(1);
    app.set_version_flag("--version", GAUSSINT_VERSION);

    std::map<std::string, SubcommandFlags> flags;
    static const std::pair<const char*, const char*> kShorthands[] = {
        {"--alpha", "alpha"}, {"--a", "a"},       {"--p", "p"},       {"--beta", "beta"},
        {"--eps", "eps"},     {"--reps", "reps"}, {"--grid", "grid"}, {"--refinement", "refinement"}};
    static const std::map<std::string, std::string> kDescriptions = {
        {"simulate", "sample integrator or bridge paths on the grid"},
        {"verify", "run the randomized Gram/density property suites"},
        {"lt-moments", "exact and Monte Carlo second moment of the local time"},
        {"lt-converge", "E int (l_n - l)^2 du along an operator sequence"},
        {"selfx-1d", "conditional self-intersection moments in dimension 1"},
        {"selfx-planar", "planar conditional self-intersection sweep and limit class"}};
    for (const auto& name : config_subcommands()) {
        CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
        SubcommandFlags& f = flags[name];
        f.config_opt = sub->add_option("--config", f.config_path, "key = value config file");
        f.preset_opt = sub->add_option("--preset", f.preset_name, "desk or smoke");
        f.seed_opt = sub->add_option("--seed", f.seed, "master seed (default 42)");
        sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("-o,--output", f.output, "output CSV (default stdout)");
        sub->add_option("--set", f.sets, "key=value override (repeatable)");
        sub->add_flag("--emit-config", f.emit_config, "print the resolved config and exit");
        for (const auto& [flag, key] : kShorthands) {
            const std::string k = key;
            sub->add_option_function<std::string>(
                flag, [&f, k](const std::string& v) { f.shorthand[k] = v; }, "sets " + k);
        }
    }
    std::string plot_input, plot_dir;
    CLI::App* plot = app.add_subcommand("plotdata", "split a harness CSV into x y err series files");
    plot->add_option("input", plot_input, "CSV produced by another subcommand")->required();
    plot->add_option("-o,--output", plot_dir, "output directory (default: next to the input)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    if (plot->parsed()) {
        std::ifstream in(plot_input, std::ios::binary);
        if (!in) {
            err << "error: cannot read '" << plot_input << "'\n";
            return kUsageError;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const std::filesystem::path input(plot_input);
        const std::string dir = plot_dir.empty() ? input.parent_path().string() : plot_dir;
        try {
            const auto files = plot_series(buf.str(), input.stem().string(), dir.empty() ? "." : dir);
            for (const auto& f : files) {
                if (!write_file(f.path, f.content, err)) return kUsageError;
                err << "wrote " << f.path << "\n";
            }
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kUsageError;
        }
        return kSuccess;
    }

    std::string name;
    for (const auto& n : config_subcommands()) {
        if (app.got_subcommand(n)) name = n;
    }
    SubcommandFlags& f = flags[name];
    try {
        ConfigSources src;
        if (f.preset_opt->count()) src.preset = f.preset_name;
        if (f.config_opt->count()) src.config_path = f.config_path;
        if (f.seed_opt->count()) src.seed = f.seed;
        for (const auto& [k, v] : f.shorthand) src.overrides.emplace_back(k, v);
        for (const auto& s : f.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
            auto trim = [](std::string x) {
                const auto b = x.find_first_not_of(" \t");
                const auto e = x.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
            };
            src.overrides.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        }
        const ParamTable config = resolve_config(name, src);
        if (f.emit_config) {
            const std::string text = config.serialize();
            if (f.output.empty()) {
                out << text;
            } else if (!write_file(f.output, text, err)) {
                return kUsageError;
            }
            return kSuccess;
        }
        if (f.threads > 0) set_thread_count(f.threads);

        const RunResult r = run(name, config);
        err << r.log;
        if (f.output.empty()) {
            out << r.csv;
        } else if (!write_file(f.output, r.csv, err)) {
            return kUsageError;
        }
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kUsageError;
}

}  // namespace gaussint::harness
