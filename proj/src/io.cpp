#include "epinet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace epinet {

namespace {

// round-trippable decimal formatting for event times and draws
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": bad number '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& where) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(where + ": bad integer '" + s + "'");
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

} // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void write_trace(const std::string& path, const EventTrace& events) {
    std::ostringstream out;
    out << "time,kind,p1,p2\n";
    for (const Event& e : events) {
        const char* kind = e.kind == EventKind::Infection ? "INF"
                         : e.kind == EventKind::Recovery  ? "REC"
                         : e.kind == EventKind::LinkOn    ? "ON"
                                                          : "OFF";
        out << fmt(e.time) << ',' << kind << ',' << e.p1 << ',';
        if (is_network(e.kind)) out << e.p2;
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

EventTrace read_trace(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "time,kind,p1,p2")
        throw ParseError(path + ": missing 'time,kind,p1,p2' header");
    EventTrace events;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto f = split(line, ',');
        if (f.size() != 4) throw ParseError(where + ": expected 4 fields");
        Event e;
        e.time = parse_double(f[0], where);
        if (f[1] == "INF") e.kind = EventKind::Infection;
        else if (f[1] == "REC") e.kind = EventKind::Recovery;
        else if (f[1] == "ON") e.kind = EventKind::LinkOn;
        else if (f[1] == "OFF") e.kind = EventKind::LinkOff;
        else throw ParseError(where + ": unknown kind '" + f[1] + "'");
        e.p1 = parse_int(f[2], where);
        if (is_network(e.kind)) {
            e.p2 = parse_int(f[3], where);
            if (e.p1 >= e.p2) throw ParseError(where + ": network events need p1 < p2");
        } else if (!f[3].empty()) {
            throw ParseError(where + ": epidemic events take no p2");
        }
        events.push_back(e);
    }
    return events;
}

void write_initial_state(const std::string& path, const ProcessState& g0) {
    std::ostringstream out;
    out << "N " << g0.n() << '\n';
    out << "I";
    for (int p = 0; p < g0.n(); ++p)
        if (g0.status(p) == DiseaseStatus::Infectious) out << ' ' << p;
    out << '\n';
    for (const auto& [a, b] : g0.edges()) out << "E " << a << ' ' << b << '\n';
    write_text_atomic(path, out.str());
}

ProcessState read_initial_state(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    ProcessState g0;
    bool have_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(lineno);
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "N") {
            int n = 0;
            if (!(row >> n) || n <= 0) throw ParseError(where + ": bad population size");
            g0 = ProcessState(n);
            have_n = true;
        } else if (tag == "I") {
            if (!have_n) throw ParseError(where + ": 'I' before 'N'");
            int p;
            while (row >> p) {
                if (p < 0 || p >= g0.n()) throw ParseError(where + ": person out of range");
                g0.set_status(p, DiseaseStatus::Infectious);
            }
        } else if (tag == "E") {
            if (!have_n) throw ParseError(where + ": 'E' before 'N'");
            int a, b;
            if (!(row >> a >> b)) throw ParseError(where + ": bad edge");
            if (a < 0 || a >= g0.n() || b < 0 || b >= g0.n() || a == b)
                throw ParseError(where + ": bad edge endpoints");
            try {
                g0.add_edge(a, b);
            } catch (const IncompatibleEvent&) {
                throw ParseError(where + ": duplicate edge");
            }
        } else {
            throw ParseError(where + ": unknown tag '" + tag + "'");
        }
    }
    if (!have_n) throw ParseError(path + ": no 'N' line");
    return g0;
}

void write_reports(const std::string& path, const std::vector<StatusReport>& reports) {
    std::ostringstream out;
    out << "time,person,ill\n";
    for (const StatusReport& r : reports)
        for (std::size_t p = 0; p < r.ill.size(); ++p)
            out << fmt(r.time) << ',' << p << ',' << (r.ill[p] ? 1 : 0) << '\n';
    write_text_atomic(path, out.str());
}

std::vector<StatusReport> read_reports(const std::string& path, int n) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "time,person,ill")
        throw ParseError(path + ": missing 'time,person,ill' header");
    std::vector<StatusReport> reports;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto f = split(line, ',');
        if (f.size() != 3) throw ParseError(where + ": expected 3 fields");
        const double t = parse_double(f[0], where);
        const int p = parse_int(f[1], where);
        const int ill = parse_int(f[2], where);
        if (p < 0 || p >= n) throw ParseError(where + ": person out of range");
        if (reports.empty() || reports.back().time != t) {
            StatusReport r;
            r.time = t;
            r.ill.assign(static_cast<std::size_t>(n), false);
            reports.push_back(std::move(r));
        }
        reports.back().ill[static_cast<std::size_t>(p)] = ill != 0;
    }
    return reports;
}

void write_labels(const std::string& path, const EventTrace& events,
                  const std::vector<std::uint8_t>& internal) {
    std::ostringstream out;
    out << "time,person,internal\n";
    std::size_t k = 0;
    for (const Event& e : events) {
        if (e.kind != EventKind::Infection) continue;
        if (k >= internal.size()) throw std::runtime_error("fewer labels than infections");
        out << fmt(e.time) << ',' << e.p1 << ',' << int(internal[k]) << '\n';
        ++k;
    }
    if (k != internal.size()) throw std::runtime_error("more labels than infections");
    write_text_atomic(path, out.str());
}

std::vector<std::uint8_t> read_labels(const std::string& path, const EventTrace& events) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "time,person,internal")
        throw ParseError(path + ": missing 'time,person,internal' header");
    std::vector<std::uint8_t> internal;
    std::size_t lineno = 1, k = 0;
    std::size_t n_inf = 0;
    for (const Event& e : events)
        if (e.kind == EventKind::Infection) ++n_inf;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto f = split(line, ',');
        if (f.size() != 3) throw ParseError(where + ": expected 3 fields");
        internal.push_back(parse_int(f[2], where) != 0 ? 1 : 0);
        ++k;
    }
    if (k != n_inf)
        throw ParseError(path + ": " + std::to_string(k) + " labels for " +
                         std::to_string(n_inf) + " infections");
    return internal;
}

void write_hidden(const std::string& path, const std::vector<std::pair<int, double>>& hidden) {
    std::ostringstream out;
    out << "person,time\n";
    for (const auto& [p, t] : hidden) out << p << ',' << fmt(t) << '\n';
    write_text_atomic(path, out.str());
}

std::vector<std::pair<int, double>> read_hidden(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "person,time")
        throw ParseError(path + ": missing 'person,time' header");
    std::vector<std::pair<int, double>> hidden;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto f = split(line, ',');
        if (f.size() != 2) throw ParseError(where + ": expected 2 fields");
        hidden.emplace_back(parse_int(f[0], where), parse_double(f[1], where));
    }
    return hidden;
}

void write_chain_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t j = 0; j < names.size(); ++j)
        out << (j ? "," : "") << names[j];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != names.size())
            throw std::runtime_error("chain row width mismatch");
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << fmt(row[j]);
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

void read_chain_csv(const std::string& path, std::vector<std::string>& names,
                    std::vector<std::vector<double>>& rows) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty chain file");
    names = split(strip_cr(line), ',');
    rows.clear();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto f = split(line, ',');
        if (f.size() != names.size()) throw ParseError(where + ": row width mismatch");
        std::vector<double> row;
        row.reserve(f.size());
        for (const std::string& s : f) row.push_back(parse_double(s, where));
        rows.push_back(std::move(row));
    }
}

} // namespace epinet
