// Command-line front end: runs the simulators from a config document and
// the analysis passes on their CSV output.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyst/analysis.hpp"
#include "hyst/config.hpp"
#include "hyst/errors.hpp"
#include "hyst/hybrid.hpp"
#include "hyst/io.hpp"
#include "hyst/lz.hpp"
#include "hyst/meanfield.hpp"
#include "hyst/quantum.hpp"

namespace fs = std::filesystem;
using namespace hyst;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Globals {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

struct Context {
    Globals g;
    RunConfig cfg;

    void log(const std::string& msg) const {
        if (!g.quiet) std::cout << msg << '\n';
    }
    fs::path out(const std::string& name) const { return fs::path(cfg.output.dir) / name; }
};

Context make_context(const Globals& g) {
    Context c{g, {}};
    if (!g.config_path.empty()) c.cfg = load_config(g.config_path);
    if (!g.out_dir.empty()) c.cfg.output.dir = g.out_dir;
    if (g.seed) c.cfg.hybrid.seed = *g.seed;
    fs::create_directories(c.cfg.output.dir);
    std::ofstream(c.out("config.ini")) << dump_config(c.cfg);
    return c;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorKind::Validation, std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) fail(ErrorKind::Validation, std::string(what) + ": empty list");
    return out;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

// Turns a partial trace into the matching exit code after writing it out.
int finish_trace(const Context& ctx, const HysteresisTrace& trace, const std::string& name) {
    const fs::path p = ctx.out(name);
    write_trace_csv(trace, p.string());
    for (const auto& w : trace.warnings) std::cerr << "warning: " << w << '\n';
    if (trace.partial) {
        std::cerr << "error: run stopped early: " << trace.failure << " (partial trace in " << p.string() << ")\n";
        return trace.failure_numeric ? kExitNumeric : kExitValidation;
    }
    ctx.log("wrote " + p.string() + " (" + std::to_string(trace.records.size()) + " records)");
    return kExitOk;
}

void print_loop_summary(const Context& ctx, const HysteresisTrace& trace) {
    if (ctx.g.quiet || trace.partial) return;
    try {
        const LoopArea a = loop_area(trace);
        const auto onset = reversal_onset(trace);
        std::cout << "loop_area " << format_number(a.signed_area) << "\nreversal_onset "
                  << (onset ? format_number(*onset) : "none") << "\nbackward_upturn "
                  << (has_backward_upturn(trace) ? "yes" : "no") << '\n';
    } catch (const Error&) {
        // Custom protocols without both sweep directions have no loop.
    }
}

// Samples the state every sample_stride records while the driver runs.
struct Sampler : HybridProbe {
    const HybridConfig& hc;
    int every;
    std::size_t count;
    std::uint64_t seed;
    long calls = 0;
    SampleSet set;

    Sampler(const HybridConfig& c, int stride, std::size_t n, std::uint64_t s)
        : hc(c), every(stride * c.record_stride), count(n), seed(s) {}

    void on_state(double t, const QuantumState& psi) override {
        if (++calls % every != 0) return;
        const DriveSample d = drive_value(hc.drive, t);
        SampleEntry e = sample_configurations(psi, count, seed + set.entries.size(), hc.lattice.readout_sign);
        e.h = d.h;
        e.segment = hc.drive.tag(d.segment);
        set.entries.push_back(std::move(e));
    }
};

int cmd_simulate(const Globals& g, bool unitary) {
    Context ctx = make_context(g);
    if (unitary) ctx.cfg.hybrid.mode = "unitary";
    const HybridConfig hc = make_hybrid_config(ctx.cfg);
    const TauCheck tc = tau_check(hc);
    ctx.log("gamma " + format_number(hc.gamma) + ", min gap " + format_number(tc.min_gap) + ", dt/tau_LZ " +
            format_number(tc.ratio));

    std::optional<Sampler> sampler;
    if (!ctx.cfg.output.samples.empty())
        sampler.emplace(hc, ctx.cfg.output.sample_stride, std::size_t(ctx.cfg.output.sample_count), hc.seed);
    const HysteresisTrace trace = run_protocol(hc, sampler ? &*sampler : nullptr);

    if (sampler) {
        write_sampleset_csv(sampler->set, ctx.out(ctx.cfg.output.samples).string());
        ctx.log("wrote " + ctx.out(ctx.cfg.output.samples).string());
    }
    if (hc.record_populations) write_populations_csv(trace, ctx.out("populations.csv").string());
    const int rc = finish_trace(ctx, trace, ctx.cfg.output.trace);
    print_loop_summary(ctx, trace);
    return rc;
}

int cmd_mfa(const Globals& g) {
    Context ctx = make_context(g);
    const MfaParams p = make_mfa_params(ctx.cfg);
    const HysteresisTrace trace = run_mfa(p);
    const int rc = finish_trace(ctx, trace, ctx.cfg.output.trace);
    print_loop_summary(ctx, trace);
    return rc;
}

int cmd_ip(const Globals& g) {
    Context ctx = make_context(g);
    const ResolvedModel m = resolve_model(ctx.cfg);
    const HysteresisTrace trace =
        interaction_picture_trace(m.gamma, m.drive, ctx.cfg.hybrid.dt, ctx.cfg.hybrid.record_stride);
    return finish_trace(ctx, trace, ctx.cfg.output.trace);
}

struct ScanArgs {
    std::string sizes;
    std::string gammas;
    double h_min = -3.0;
    double h_max = 0.0;
    int points = 121;
};

int cmd_crossing(const Globals& g, const ScanArgs& a) {
    Context ctx = make_context(g);
    const ResolvedModel m = resolve_model(ctx.cfg);
    std::vector<double> sizes = a.sizes.empty() ? std::vector<double>{double(m.lattice.n_spins)} : parse_list(a.sizes, "--sizes");
    std::vector<double> gammas = a.gammas.empty() ? std::vector<double>{m.gamma} : parse_list(a.gammas, "--gammas");
    if (a.points < 3) fail(ErrorKind::Validation, "--points: need at least 3");
    const auto grid = linspace(a.h_min, a.h_max, a.points);

    std::ofstream f(ctx.out("crossings.csv"));
    f << "n,gamma,h_crossing,gap\n";
    for (double n : sizes) {
        for (double gamma : gammas) {
            LatticeSpec lat = build_ring(int(n), ctx.cfg.lattice.coupling);
            if (ctx.cfg.lattice.afm_gauge) lat = apply_afm_gauge(lat);
            const CrossingScan s = min_gap_scan(lat, gamma, grid);
            f << int(n) << ',' << format_number(gamma) << ',' << format_number(s.h_crossing) << ','
              << format_number(s.gap) << '\n';
            ctx.log("n=" + std::to_string(int(n)) + " gamma=" + format_number(gamma) +
                    " h_crossing=" + format_number(s.h_crossing) + " gap=" + format_number(s.gap));
        }
    }
    return kExitOk;
}

int cmd_lz(const Globals& g, double tolerance) {
    Context ctx = make_context(g);
    std::ofstream f(ctx.out("lz_check.csv"));
    f << "gamma,hdot,exponent,p_formula,p_numeric,abs_diff\n";
    double worst = 0.0;
    for (double x : linspace(0.1, 10.0, 5)) {
        for (double gamma : {0.1, 0.3, 0.5, 1.0, 2.0}) {
            // Choose hdot so that pi gamma^2 / (2 hdot) = x.
            const double hdot = std::numbers::pi * gamma * gamma / (2.0 * x);
            const double pf = lz_probability(gamma, hdot).p;
            const double pn = lz_numeric_oracle(LzParams::from_tfim(gamma, hdot)).p;
            worst = std::max(worst, std::abs(pf - pn));
            f << format_number(gamma) << ',' << format_number(hdot) << ',' << format_number(x) << ','
              << format_number(pf) << ',' << format_number(pn) << ',' << format_number(std::abs(pf - pn)) << '\n';
        }
    }
    ctx.log("max |p_formula - p_numeric| = " + format_number(worst));
    if (worst >= tolerance) {
        std::cerr << "error: LZ mismatch " << worst << " exceeds " << tolerance << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

HysteresisTrace load_trace_or_samples(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Validation, "cannot open '" + path + "'");
    std::string header;
    std::getline(f, header);
    if (header.rfind("h,segment,config", 0) == 0) return trace_from_samples(load_sampleset_csv(path));
    return load_trace_csv(path);
}

int cmd_analyze_loop(const Globals& g, const std::string& input) {
    Context ctx = make_context(g);
    const HysteresisTrace trace = load_trace_or_samples(input);
    const LoopArea a = loop_area(trace);
    const auto onset = reversal_onset(trace);
    std::ofstream f(ctx.out("loop.csv"));
    f << "signed_area,abs_area,reversal_onset,backward_upturn,max_kink_backward\n"
      << format_number(a.signed_area) << ',' << format_number(a.abs_area) << ','
      << (onset ? format_number(*onset) : "") << ',' << (has_backward_upturn(trace) ? 1 : 0) << ','
      << format_number(max_kink_density(trace, SegmentTag::Backward)) << '\n';
    ctx.log("loop_area " + format_number(a.signed_area) + " reversal_onset " + (onset ? format_number(*onset) : "none"));
    return kExitOk;
}

// One trace per sweep time: n_d from the backward segment, hdot from the
// first backward record.
int cmd_analyze_kinks(const Globals& g, const std::vector<std::string>& inputs) {
    Context ctx = make_context(g);
    const ResolvedModel m = resolve_model(ctx.cfg);
    std::vector<double> xs, ys;
    for (const auto& path : inputs) {
        const HysteresisTrace t = load_trace_csv(path);
        double hdot = 0.0;
        for (const auto& r : t.records)
            if (r.segment == SegmentTag::Backward && r.hdot != 0.0) {
                hdot = std::abs(r.hdot);
                break;
            }
        if (hdot == 0.0) fail(ErrorKind::Validation, path + ": no backward sweep");
        const double nd = max_kink_density(t, SegmentTag::Backward);
        if (nd >= 1.0) fail(ErrorKind::Validation, path + ": n_d = 1 has no logarithm");
        xs.push_back(1.0 / hdot);
        ys.push_back(std::log1p(-nd));
    }
    const FitResult fit = linear_fit(xs, ys);
    const double theory = theoretical_kink_slope(m.gamma, m.hbar);
    std::ofstream f(ctx.out("kinks.csv"));
    f << "inv_hdot,log_one_minus_nd\n";
    for (std::size_t i = 0; i < xs.size(); ++i) f << format_number(xs[i]) << ',' << format_number(ys[i]) << '\n';
    std::ofstream s(ctx.out("kinks_fit.csv"));
    s << "slope,intercept,r_squared,n_points,theoretical_slope\n"
      << format_number(fit.slope) << ',' << format_number(fit.intercept) << ',' << format_number(fit.r_squared) << ','
      << fit.n_points << ',' << format_number(theory) << '\n';
    ctx.log("slope " + format_number(fit.slope) + " R2 " + format_number(fit.r_squared) + " theory " +
            format_number(theory));
    return kExitOk;
}

// Either a gamma,area CSV or an MFA sweep over --gammas.
int cmd_analyze_area(const Globals& g, const std::string& input, const std::string& gamma_list) {
    Context ctx = make_context(g);
    std::vector<double> gammas, areas;
    if (!input.empty()) {
        std::ifstream f(input);
        if (!f) fail(ErrorKind::Validation, "cannot open '" + input + "'");
        std::string line;
        std::getline(f, line);
        if (line != "gamma,area") fail(ErrorKind::Parse, input + ": line 1: expected header 'gamma,area'");
        for (int no = 2; std::getline(f, line); ++no) {
            if (line.empty()) continue;
            const auto v = parse_list(line, (input + ": line " + std::to_string(no)).c_str());
            if (v.size() != 2) fail(ErrorKind::Parse, input + ": line " + std::to_string(no) + ": expected 2 columns");
            gammas.push_back(v[0]);
            areas.push_back(v[1]);
        }
    } else {
        if (gamma_list.empty()) fail(ErrorKind::Validation, "analyze area-scaling: give --input or --gammas");
        MfaParams base = make_mfa_params(ctx.cfg);
        for (double gamma : parse_list(gamma_list, "--gammas")) {
            MfaParams p = base;
            p.gamma = gamma;
            const HysteresisTrace t = run_mfa(p);
            gammas.push_back(gamma);
            areas.push_back(loop_area(t).abs_area);
        }
    }
    const PowerLawFit fit = power_law_fit(gammas, areas);
    std::ofstream f(ctx.out("area_scaling.csv"));
    f << "gamma,area\n";
    for (std::size_t i = 0; i < gammas.size(); ++i) f << format_number(gammas[i]) << ',' << format_number(areas[i]) << '\n';
    std::ofstream s(ctx.out("area_fit.csv"));
    s << "a,alpha,c,residual\n"
      << format_number(fit.a) << ',' << format_number(fit.alpha) << ',' << format_number(fit.c) << ','
      << format_number(fit.residual) << '\n';
    ctx.log("alpha " + format_number(fit.alpha) + " a " + format_number(fit.a) + " c " + format_number(fit.c));
    return kExitOk;
}

int cmd_ssf(const Globals& g, const std::string& input, int entry, int limit, int grid_n) {
    Context ctx = make_context(g);
    const SampleSet set = load_sampleset_csv(input);
    if (entry < 0 || entry >= int(set.entries.size()))
        fail(ErrorKind::Validation, "--entry: out of range (set has " + std::to_string(set.entries.size()) + " points)");
    const SampleEntry& e = set.entries[entry];
    const ResolvedModel m = resolve_model(ctx.cfg);
    if (std::size_t(m.lattice.n_spins) != e.configs.front().size())
        fail(ErrorKind::Validation, "lattice: configuration length does not match the configured lattice");
    std::vector<std::vector<int>> configs(e.configs.begin(),
                                          e.configs.begin() + std::min<std::size_t>(limit, e.configs.size()));
    QGrid grid;
    grid.nx = grid.ny = grid_n;
    const Eigen::MatrixXd S = structure_factor(configs, m.lattice.positions, grid);
    std::ofstream f(ctx.out("ssf.csv"));
    f << "qx,qy,s\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            f << format_number(grid.qx(i)) << ',' << format_number(grid.qy(j)) << ',' << format_number(S(j, i)) << '\n';
    ctx.log("wrote " + ctx.out("ssf.csv").string() + " from " + std::to_string(configs.size()) + " configurations at h=" +
            format_number(e.h));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum hysteresis simulator: hybrid quantum-kinetic, mean-field and analysis tools"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "Run configuration (INI)")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "Output directory (overrides output.dir)");
    app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { g.seed = s; }, "RNG seed");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");

    int rc = kExitOk;
    std::function<int()> action;

    auto* hyb = app.add_subcommand("simulate-hybrid", "Hybrid quantum-kinetic hysteresis run");
    hyb->callback([&] { action = [&] { return cmd_simulate(g, false); }; });
    auto* uni = app.add_subcommand("simulate-unitary", "Unitary-only run (kinetics and IPF off)");
    uni->callback([&] { action = [&] { return cmd_simulate(g, true); }; });
    auto* mfa = app.add_subcommand("simulate-mfa", "Mean-field magnetization dynamics");
    mfa->callback([&] { action = [&] { return cmd_mfa(g); }; });
    auto* ip = app.add_subcommand("simulate-ip", "Non-interacting interaction-picture baseline");
    ip->callback([&] { action = [&] { return cmd_ip(g); }; });

    ScanArgs scan;
    auto* cross = app.add_subcommand("crossing-scan", "Minimum aligned/single-flip gap location");
    cross->add_option("--sizes", scan.sizes, "Comma-separated ring sizes");
    cross->add_option("--gammas", scan.gammas, "Comma-separated transverse fields");
    cross->add_option("--h-min", scan.h_min, "Scan start")->capture_default_str();
    cross->add_option("--h-max", scan.h_max, "Scan end")->capture_default_str();
    cross->add_option("--points", scan.points, "Grid points")->capture_default_str();
    cross->callback([&] { action = [&] { return cmd_crossing(g, scan); }; });

    double lz_tol = 1e-2;
    auto* lz = app.add_subcommand("lz-check", "Landau-Zener formula against direct integration");
    lz->add_option("--tolerance", lz_tol, "Allowed |p_formula - p_numeric|")->capture_default_str();
    lz->callback([&] { action = [&] { return cmd_lz(g, lz_tol); }; });

    auto* an = app.add_subcommand("analyze", "Analysis of written traces");
    an->require_subcommand(1);
    std::string loop_in;
    auto* an_loop = an->add_subcommand("loop", "Loop area and reversal onset");
    an_loop->add_option("--input", loop_in, "Trace or sample-set CSV")->required()->check(CLI::ExistingFile);
    an_loop->callback([&] { action = [&] { return cmd_analyze_loop(g, loop_in); }; });
    std::vector<std::string> kink_in;
    auto* an_kinks = an->add_subcommand("kinks", "ln(1 - n_d) against 1/hdot over several traces");
    an_kinks->add_option("--input", kink_in, "Trace CSVs, one per sweep time")->required()->check(CLI::ExistingFile);
    an_kinks->callback([&] { action = [&] { return cmd_analyze_kinks(g, kink_in); }; });
    std::string area_in, area_gammas;
    auto* an_area = an->add_subcommand("area-scaling", "Power-law fit of loop area against gamma");
    an_area->add_option("--input", area_in, "gamma,area CSV")->check(CLI::ExistingFile);
    an_area->add_option("--gammas", area_gammas, "Comma-separated gammas for a mean-field sweep");
    an_area->callback([&] { action = [&] { return cmd_analyze_area(g, area_in, area_gammas); }; });

    std::string ssf_in;
    int ssf_entry = 0, ssf_limit = 100, ssf_grid = 200;
    auto* ssf = app.add_subcommand("ssf", "Spin structure factor heatmap from sampled configurations");
    ssf->add_option("--input", ssf_in, "Sample-set CSV")->required()->check(CLI::ExistingFile);
    ssf->add_option("--entry", ssf_entry, "Index of the drive point")->capture_default_str();
    ssf->add_option("--limit", ssf_limit, "Configurations to average")->capture_default_str();
    ssf->add_option("--grid", ssf_grid, "Points per q axis")->capture_default_str();
    ssf->callback([&] { action = [&] { return cmd_ssf(g, ssf_in, ssf_entry, ssf_limit, ssf_grid); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        rc = action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numeric() ? kExitNumeric : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return rc;
}
