#include "hyst/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "hyst/errors.hpp"
#include "hyst/io.hpp"

namespace hyst {

namespace {

namespace pt = boost::property_tree;

using Slot = std::variant<int*, double*, bool*, std::string*, std::uint64_t*, std::vector<DriveSegment>*>;

struct Field {
    const char* section;
    const char* key;
    Slot slot;
};

std::vector<Field> fields(RunConfig& c) {
    auto& l = c.lattice;
    auto& d = c.drive;
    auto& s = c.schedule;
    auto& h = c.hybrid;
    auto& m = c.mfa;
    auto& o = c.output;
    return {
        {"lattice", "topology", &l.topology},
        {"lattice", "n", &l.n},
        {"lattice", "width", &l.width},
        {"lattice", "height", &l.height},
        {"lattice", "coupling", &l.coupling},
        {"lattice", "afm_gauge", &l.afm_gauge},
        {"lattice", "max_spins", &l.max_spins},
        {"drive", "h_max", &d.h_max},
        {"drive", "t_total", &d.t_total},
        {"drive", "segments", &d.segments},
        {"schedule", "units", &s.units},
        {"schedule", "file", &s.file},
        {"schedule", "s_pause", &s.s_pause},
        {"schedule", "gamma", &s.gamma},
        {"schedule", "j_over_gamma", &s.j_over_gamma},
        {"schedule", "gamma_prime", &s.gamma_prime},
        {"hybrid", "mode", &h.mode},
        {"hybrid", "dt", &h.dt},
        {"hybrid", "k_sc", &h.k_sc},
        {"hybrid", "v0", &h.v0},
        {"hybrid", "omega", &h.omega},
        {"hybrid", "alpha0", &h.alpha0},
        {"hybrid", "kappa", &h.kappa},
        {"hybrid", "epsilon_floor", &h.epsilon_floor},
        {"hybrid", "gamma_sync", &h.gamma_sync},
        {"hybrid", "record_stride", &h.record_stride},
        {"hybrid", "freeze", &h.freeze},
        {"hybrid", "populations", &h.populations},
        {"hybrid", "tau_warn", &h.tau_warn},
        {"hybrid", "tau_abort", &h.tau_abort},
        {"hybrid", "seed", &h.seed},
        {"mfa", "variant", &m.variant},
        {"mfa", "lambda", &m.lambda},
        {"mfa", "beta", &m.beta},
        {"mfa", "coordination", &m.coordination},
        {"mfa", "dt", &m.dt},
        {"mfa", "drive", &m.drive},
        {"mfa", "h1", &m.h1},
        {"mfa", "omega", &m.omega},
        {"mfa", "periods", &m.periods},
        {"mfa", "record_stride", &m.record_stride},
        {"output", "dir", &o.dir},
        {"output", "trace", &o.trace},
        {"output", "samples", &o.samples},
        {"output", "sample_stride", &o.sample_stride},
        {"output", "sample_count", &o.sample_count},
    };
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(ErrorKind::Validation, path + ": " + what);
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    s = s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& path, const std::string& v) {
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        bad(path, "expected a finite number, got '" + v + "'");
    return x;
}

long long parse_integer(const std::string& path, const std::string& v, bool allow_negative) {
    char* end = nullptr;
    errno = 0;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || (!allow_negative && x < 0))
        bad(path, "expected an integer, got '" + v + "'");
    return x;
}

std::vector<DriveSegment> parse_segments(const std::string& path, const std::string& v) {
    std::vector<DriveSegment> out;
    if (v.empty()) return out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        std::istringstream parts(item);
        std::string a, b, c, extra;
        if (!std::getline(parts, a, ':') || !std::getline(parts, b, ':') || !std::getline(parts, c, ':') ||
            std::getline(parts, extra, ':'))
            bad(path, "expected fraction:h_start:h_end, got '" + item + "'");
        out.push_back({parse_double(path, trim(a)), parse_double(path, trim(b)), parse_double(path, trim(c))});
    }
    return out;
}

struct Assign {
    const std::string& path;
    const std::string& v;
    void operator()(int* p) const {
        const long long x = parse_integer(path, v, true);
        if (x < INT32_MIN || x > INT32_MAX) bad(path, "integer out of range");
        *p = static_cast<int>(x);
    }
    void operator()(double* p) const { *p = parse_double(path, v); }
    void operator()(bool* p) const {
        if (v == "true" || v == "1") *p = true;
        else if (v == "false" || v == "0") *p = false;
        else bad(path, "expected true or false, got '" + v + "'");
    }
    void operator()(std::string* p) const { *p = v; }
    void operator()(std::uint64_t* p) const { *p = static_cast<std::uint64_t>(parse_integer(path, v, false)); }
    void operator()(std::vector<DriveSegment>* p) const { *p = parse_segments(path, v); }
};

struct Print {
    std::ostream& os;
    void operator()(const int* p) const { os << *p; }
    void operator()(const double* p) const { os << format_number(*p); }
    void operator()(const bool* p) const { os << (*p ? "true" : "false"); }
    void operator()(const std::string* p) const { os << '"' << *p << '"'; }
    void operator()(const std::uint64_t* p) const { os << *p; }
    void operator()(const std::vector<DriveSegment>* p) const {
        os << '"';
        for (std::size_t i = 0; i < p->size(); ++i) {
            const auto& s = (*p)[i];
            os << (i ? ", " : "") << format_number(s.fraction) << ':' << format_number(s.h_start) << ':'
               << format_number(s.h_end);
        }
        os << '"';
    }
};

void one_of(const std::string& path, const std::string& v, std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (v == a) return;
        list += list.empty() ? a : std::string(" | ") + a;
    }
    bad(path, "expected " + list + ", got '" + v + "'");
}

void check(const RunConfig& c) {
    const auto& l = c.lattice;
    one_of("lattice.topology", l.topology, {"ring", "grid"});
    if (l.max_spins < 1 || l.max_spins > 20) bad("lattice.max_spins", "must be in [1, 20]");
    if (l.topology == "ring" && l.n < 2) bad("lattice.n", "ring needs at least 2 spins");
    if (l.topology == "grid" && (l.width < 1 || l.height < 1)) bad("lattice.width", "grid needs width, height >= 1");
    if (!(l.coupling != 0.0)) bad("lattice.coupling", "must be nonzero");

    if (!(c.drive.h_max > 0.0)) bad("drive.h_max", "must be > 0");
    if (!(c.drive.t_total > 0.0)) bad("drive.t_total", "must be > 0");
    if (!c.drive.segments.empty()) {
        DriveProtocol d;
        d.h_max = c.drive.h_max;
        d.t_total = c.drive.t_total;
        d.segments = c.drive.segments;
        d.validate();  // messages already start with drive.segments
    }

    const auto& s = c.schedule;
    one_of("schedule.units", s.units, {"natural", "device"});
    if (s.gamma < 0.0) bad("schedule.gamma", "must be >= 0");
    if (!(s.j_over_gamma > 0.0)) bad("schedule.j_over_gamma", "must be > 0");
    if (!s.file.empty() && s.gamma > 0.0) bad("schedule.gamma", "conflicts with schedule.file");
    if (s.units == "device" && s.file.empty()) bad("schedule.file", "required in device units");
    if (s.s_pause < 0.0 || s.s_pause > 1.0) bad("schedule.s_pause", "must be in [0, 1]");

    const auto& h = c.hybrid;
    one_of("hybrid.mode", h.mode, {"hybrid", "unitary"});
    one_of("hybrid.freeze", h.freeze, {"left", "midpoint"});
    if (!(h.dt > 0.0)) bad("hybrid.dt", "must be > 0");
    if (h.k_sc < 1) bad("hybrid.k_sc", "must be >= 1");
    if (h.v0 < 0.0) bad("hybrid.v0", "must be >= 0");
    if (h.omega < 0.0) bad("hybrid.omega", "must be >= 0");
    if (h.alpha0 < 0.0) bad("hybrid.alpha0", "must be >= 0");
    if (h.kappa < 0.0) bad("hybrid.kappa", "must be >= 0");
    if (!(h.epsilon_floor > 0.0)) bad("hybrid.epsilon_floor", "must be > 0");
    if (h.gamma_sync < 0.0 || h.gamma_sync > 1.0) bad("hybrid.gamma_sync", "must be in [0, 1]");
    if (h.record_stride < 1) bad("hybrid.record_stride", "must be >= 1");
    if (!(h.tau_warn > 0.0) || h.tau_abort < h.tau_warn) bad("hybrid.tau_abort", "must be >= hybrid.tau_warn > 0");

    const auto& m = c.mfa;
    one_of("mfa.variant", m.variant, {"weak", "full"});
    one_of("mfa.drive", m.drive, {"sine", "protocol"});
    if (!(m.dt > 0.0)) bad("mfa.dt", "must be > 0");
    if (m.lambda < 0.0) bad("mfa.lambda", "must be >= 0");
    if (m.coordination < 0) bad("mfa.coordination", "must be >= 0");
    if (!(m.omega > 0.0)) bad("mfa.omega", "must be > 0");
    if (!(m.periods > 0.0)) bad("mfa.periods", "must be > 0");
    if (m.record_stride < 1) bad("mfa.record_stride", "must be >= 1");

    const auto& o = c.output;
    if (o.sample_stride < 1) bad("output.sample_stride", "must be >= 1");
    if (o.sample_count < 1) bad("output.sample_count", "must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        std::ostringstream os;
        os << "line " << e.line() << ": " << e.message();
        fail(ErrorKind::Parse, os.str());
    }

    RunConfig c;
    auto table = fields(c);
    std::map<std::string, std::map<std::string, Slot>> index;
    for (const auto& f : table) index[f.section].emplace(f.key, f.slot);

    for (const auto& [section, body] : tree) {
        const auto sec = index.find(section);
        if (sec == index.end()) bad(section, "unknown section or key outside a section");
        if (!body.data().empty()) bad(section, "key outside a section");
        for (const auto& [key, node] : body) {
            const std::string path = section + "." + key;
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) bad(path, "unknown key");
            const std::string v = trim(node.data());
            std::visit(Assign{path, v}, it->second);
        }
    }
    check(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Validation, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    RunConfig c = parse_config(ss.str());
    c.base_dir = std::filesystem::path(path).parent_path().string();
    return c;
}

std::string dump_config(const RunConfig& config) {
    RunConfig copy = config;
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (section != f.section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        os << f.key << " = ";
        std::visit(Print{os}, f.slot);
        os << '\n';
    }
    return os.str();
}

ResolvedModel resolve_model(const RunConfig& c) {
    ResolvedModel r;
    const auto& s = c.schedule;
    const bool device = s.units == "device";
    double j = c.lattice.coupling;
    double h_scale = 1.0;
    double gamma = 0.0;

    if (!s.file.empty()) {
        std::filesystem::path p(s.file);
        if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
        const Schedule table = load_schedule_csv(p.string());
        const ScheduleValue v = schedule_lookup(table, s.s_pause);
        if (device) {
            gamma = v.A * s.gamma_prime / 2.0;
            j = v.B * c.lattice.coupling / 2.0;
            h_scale = v.B / 2.0;
        } else {
            if (!(v.B > 0.0)) bad("schedule.file", "B(s_pause) must be > 0 in natural units");
            gamma = v.A * s.gamma_prime / v.B;
        }
    } else if (s.gamma > 0.0) {
        gamma = s.gamma;
    } else {
        gamma = std::abs(j) / s.j_over_gamma;
    }
    r.gamma = gamma;
    r.j = j;
    r.hbar = UnitSystem{device ? EnergyUnit::Device : EnergyUnit::Natural}.hbar();

    if (c.lattice.topology == "ring") r.lattice = build_ring(c.lattice.n, j);
    else r.lattice = build_grid(c.lattice.width, c.lattice.height, j);
    if (r.lattice.n_spins > c.lattice.max_spins)
        fail(ErrorKind::Capacity, "lattice: " + std::to_string(r.lattice.n_spins) + " spins exceeds lattice.max_spins");
    if (c.lattice.afm_gauge) r.lattice = apply_afm_gauge(r.lattice);

    if (c.drive.segments.empty()) {
        r.drive = DriveProtocol::standard(c.drive.h_max * h_scale, c.drive.t_total, s.s_pause);
    } else {
        r.drive.h_max = c.drive.h_max * h_scale;
        r.drive.t_total = c.drive.t_total;
        r.drive.s_pause = s.s_pause;
        for (auto seg : c.drive.segments) {
            seg.h_start *= h_scale;
            seg.h_end *= h_scale;
            r.drive.segments.push_back(seg);
        }
    }
    r.drive.validate();
    return r;
}

HybridConfig make_hybrid_config(const RunConfig& c) {
    const ResolvedModel m = resolve_model(c);
    HybridConfig h;
    h.lattice = m.lattice;
    h.drive = m.drive;
    h.gamma = m.gamma;
    h.hbar = m.hbar;
    const auto& s = c.hybrid;
    h.dt = s.dt;
    h.k_sc = s.k_sc;
    h.v0 = s.v0;
    h.omega = s.omega;
    h.alpha0 = s.alpha0;
    h.kappa = s.kappa;
    h.epsilon_floor = s.epsilon_floor;
    h.gamma_sync = s.gamma_sync;
    h.mode = s.mode == "unitary" ? HybridMode::UnitaryOnly : HybridMode::Hybrid;
    h.freeze = s.freeze == "midpoint" ? FreezePoint::Midpoint : FreezePoint::Left;
    h.record_stride = s.record_stride;
    h.record_populations = s.populations;
    h.tau_warn = s.tau_warn;
    h.tau_abort = s.tau_abort;
    h.max_spins = c.lattice.max_spins;
    h.seed = s.seed;
    h.validate();
    return h;
}

MfaParams make_mfa_params(const RunConfig& c) {
    const ResolvedModel m = resolve_model(c);
    MfaParams p;
    p.gamma = m.gamma;
    p.j = m.j;
    p.hbar = m.hbar;
    const auto& s = c.mfa;
    p.coordination = s.coordination;
    p.lambda = s.lambda;
    p.beta = s.beta;
    p.dt = s.dt;
    p.variant = s.variant == "full" ? MfaVariant::Full : MfaVariant::WeakGamma;
    p.record_stride = s.record_stride;
    if (s.drive == "protocol") {
        p.drive.kind = MfaDrive::Kind::Protocol;
        p.drive.protocol = m.drive;
    } else {
        p.drive.kind = MfaDrive::Kind::Sine;
        p.drive.h1 = s.h1;
        p.drive.omega = s.omega;
        p.drive.periods = s.periods;
        p.drive.protocol.s_pause = c.schedule.s_pause;
    }
    p.validate();
    return p;
}

}  // namespace hyst
