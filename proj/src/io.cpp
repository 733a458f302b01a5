#include "hyst/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "hyst/errors.hpp"

namespace hyst {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": " << what;
    fail(ErrorKind::Parse, os.str());
}

double to_double(const std::string& s, std::size_t line, const char* col) {
    const std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        parse_fail(line, std::string("column ") + col + ": '" + t + "' is not a number");
    return v;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Validation, "cannot open '" + path + "'");
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Validation, "cannot write '" + path + "'");
    return f;
}

// Reads the header and returns the next data lines with their numbers.
std::vector<std::pair<std::size_t, std::string>> data_lines(std::istream& in, const std::string& header) {
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!trim(line).empty()) break;
    }
    if (trim(line) != header) parse_fail(no, "expected header '" + header + "'");
    std::vector<std::pair<std::size_t, std::string>> rows;
    while (std::getline(in, line)) {
        ++no;
        if (trim(line).empty()) continue;
        rows.emplace_back(no, line);
    }
    return rows;
}

}  // namespace

Schedule read_schedule_csv(std::istream& in) {
    Schedule s;
    for (const auto& [no, line] : data_lines(in, "s,A_GHz,B_GHz")) {
        const auto f = split(line, ',');
        if (f.size() != 3) parse_fail(no, "expected 3 columns");
        s.rows.push_back({to_double(f[0], no, "s"), to_double(f[1], no, "A_GHz"), to_double(f[2], no, "B_GHz")});
    }
    s.validate();
    return s;
}

Schedule load_schedule_csv(const std::string& path) {
    auto f = open_in(path);
    return read_schedule_csv(f);
}

void write_trace_csv(const HysteresisTrace& trace, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        const double v[] = {r.t, r.s, r.h, r.hdot, r.mx, r.my, r.mz, r.kink_total, r.nplus, r.nminus, r.energy};
        for (double x : v) out << format_number(x) << ',';
        out << segment_name(r.segment) << '\n';
    }
}

void write_trace_csv(const HysteresisTrace& trace, const std::string& path) {
    auto f = open_out(path);
    write_trace_csv(trace, f);
}

HysteresisTrace read_trace_csv(std::istream& in) {
    static const char* cols[] = {"t", "s", "h", "hdot", "mx", "my", "mz", "kink_total", "nplus", "nminus", "energy"};
    HysteresisTrace tr;
    for (const auto& [no, line] : data_lines(in, kTraceHeader)) {
        const auto f = split(line, ',');
        if (f.size() != 12) parse_fail(no, "expected 12 columns");
        double v[11];
        for (int i = 0; i < 11; ++i) v[i] = to_double(f[i], no, cols[i]);
        TraceRecord r;
        r.t = v[0], r.s = v[1], r.h = v[2], r.hdot = v[3], r.mx = v[4], r.my = v[5], r.mz = v[6];
        r.kink_total = v[7], r.nplus = v[8], r.nminus = v[9], r.energy = v[10];
        try {
            r.segment = parse_segment_name(trim(f[11]));
        } catch (const Error&) {
            parse_fail(no, "unknown segment '" + trim(f[11]) + "'");
        }
        if (!tr.records.empty() && !(r.t > tr.records.back().t)) parse_fail(no, "t not strictly increasing");
        tr.records.push_back(r);
    }
    return tr;
}

HysteresisTrace load_trace_csv(const std::string& path) {
    auto f = open_in(path);
    return read_trace_csv(f);
}

void write_populations_csv(const HysteresisTrace& trace, const std::string& path) {
    auto f = open_out(path);
    std::size_t D = 0;
    for (const auto& r : trace.records) D = std::max(D, r.populations.size());
    f << "t,h,mean_energy";
    for (std::size_t k = 0; k < D; ++k) f << ",p" << k;
    f << '\n';
    for (const auto& r : trace.records) {
        if (r.populations.empty()) continue;
        f << format_number(r.t) << ',' << format_number(r.h) << ',' << format_number(r.mean_energy);
        for (double p : r.populations) f << ',' << format_number(p);
        f << '\n';
    }
}

void write_sampleset_csv(const SampleSet& set, std::ostream& out) {
    out << "h,segment,config\n";
    for (const auto& e : set.entries)
        for (const auto& c : e.configs) {
            out << format_number(e.h) << ',' << segment_name(e.segment) << ',';
            for (int v : c) out << (v > 0 ? '0' : '1');
            out << '\n';
        }
}

void write_sampleset_csv(const SampleSet& set, const std::string& path) {
    auto f = open_out(path);
    write_sampleset_csv(set, f);
}

SampleSet read_sampleset_csv(std::istream& in) {
    SampleSet set;
    for (const auto& [no, line] : data_lines(in, "h,segment,config")) {
        const auto f = split(line, ',');
        if (f.size() != 3) parse_fail(no, "expected 3 columns");
        const double h = to_double(f[0], no, "h");
        SegmentTag tag;
        try {
            tag = parse_segment_name(trim(f[1]));
        } catch (const Error&) {
            parse_fail(no, "unknown segment '" + trim(f[1]) + "'");
        }
        std::vector<int> cfg;
        for (char ch : trim(f[2])) {
            if (ch == '0' || ch == '+') cfg.push_back(1);
            else if (ch == '1' || ch == '-') cfg.push_back(-1);
            else parse_fail(no, std::string("bad spin character '") + ch + "'");
        }
        if (cfg.empty()) parse_fail(no, "empty configuration");
        // Consecutive rows with the same (h, segment) form one entry.
        if (set.entries.empty() || set.entries.back().h != h || set.entries.back().segment != tag)
            set.entries.push_back({h, tag, {}});
        auto& e = set.entries.back();
        if (!e.configs.empty() && e.configs.front().size() != cfg.size())
            parse_fail(no, "configuration length differs from earlier rows");
        e.configs.push_back(std::move(cfg));
    }
    set.validate();
    return set;
}

SampleSet load_sampleset_csv(const std::string& path) {
    auto f = open_in(path);
    return read_sampleset_csv(f);
}

HysteresisTrace trace_from_samples(const SampleSet& set) {
    HysteresisTrace tr;
    double t = 0.0;
    for (const auto& e : set.entries) {
        TraceRecord r;
        r.t = t;
        t += 1.0;
        r.h = e.h;
        r.mz = e.magnetization();
        r.segment = e.segment;
        // Mean per-bond kink density with ring adjacency (site i to i+1 mod N).
        double k = 0.0;
        std::size_t nb = 0;
        for (const auto& c : e.configs)
            for (std::size_t i = 0; i < c.size(); ++i, ++nb) k += c[i] != c[(i + 1) % c.size()];
        r.kink_total = nb ? k / double(nb) : 0.0;
        tr.records.push_back(r);
    }
    return tr;
}

}  // namespace hyst
