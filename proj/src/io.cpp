#include "subtraj/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace subtraj {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

Trajectory parse_trajectory_csv(const std::string& text) {
    std::vector<Point> pts;
    std::istringstream in(text);
    std::string line;
    bool first_content = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ' || sv.back() == '\t'))
            sv.remove_suffix(1);
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty()) continue;
        auto comma = sv.find(',');
        if (comma == std::string_view::npos)
            throw std::invalid_argument("csv: missing comma on line " + std::to_string(lineno));
        double x, y;
        bool ok = parse_double(sv.substr(0, comma), x) && parse_double(sv.substr(comma + 1), y);
        if (!ok) {
            if (first_content) {  // allow a single "x,y" style header
                first_content = false;
                continue;
            }
            throw std::invalid_argument("csv: bad number on line " + std::to_string(lineno));
        }
        first_content = false;
        pts.push_back({x, y});
    }
    if (pts.size() < 2) throw std::invalid_argument("csv: need at least 2 points");
    return Trajectory(std::move(pts));
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trajectory_csv(buf.str());
}

std::string trajectory_to_csv(const Trajectory& t) {
    std::string out = "x,y\n";
    for (const Point& p : t.vertices()) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << trajectory_to_csv(t);
}

Trajectory generate_trajectory(const std::string& kind, int n, unsigned seed, double gap) {
    if (n < 2) throw std::invalid_argument("gen: n must be >= 2");
    std::vector<Point> pts;
    pts.reserve(n);
    if (kind == "spiral") {
        // Archimedean r = theta/(2*pi), consecutive turns one unit apart,
        // sampled at roughly unit arc steps
        double theta = 2.0 * M_PI;
        for (int i = 0; i < n; ++i) {
            double r = theta / (2.0 * M_PI);
            pts.push_back({r * std::cos(theta), r * std::sin(theta)});
            theta += 1.0 / std::max(r, 0.25);
        }
    } else if (kind == "lawnmower") {
        const double width = 10.0;
        double y = 0.0;
        bool rightward = true;
        pts.push_back({0.0, 0.0});
        while (static_cast<int>(pts.size()) < n) {
            pts.push_back({rightward ? width : 0.0, y});
            if (static_cast<int>(pts.size()) >= n) break;
            y += gap;
            pts.push_back({rightward ? width : 0.0, y});
            rightward = !rightward;
        }
    } else if (kind == "walk") {
        std::mt19937 rng(seed);
        std::normal_distribution<double> turn(0.0, 0.35);
        double heading = 0.0;
        double x = 0.0, yy = 0.0;
        for (int i = 0; i < n; ++i) {
            pts.push_back({x, yy});
            heading += turn(rng);
            x += std::cos(heading);
            yy += std::sin(heading);
        }
    } else {
        throw std::invalid_argument("gen: unknown kind '" + kind + "'");
    }
    return Trajectory(std::move(pts));
}

nlohmann::json witness_to_json(const ClusterWitness& w) {
    nlohmann::json j;
    j["reference"] = {w.ref_lo, w.ref_hi};
    nlohmann::json members = nlohmann::json::array();
    for (const auto& [a, b] : w.members) members.push_back({a, b});
    j["members"] = members;
    return j;
}

nlohmann::json report_to_json(const ClusterQuery& q, const DecideResult& r,
                              double packedness_estimate) {
    nlohmann::json j;
    j["answer"] = r.yes ? "YES" : "NO";
    j["query"] = {{"m", q.m},
                  {"l", q.l},
                  {"d", q.d},
                  {"eps", q.eps},
                  {"mode", q.mode == Mode::vertex ? "vertex" : "arbitrary"}};
    j["perturbed"] = r.stats.perturbed;
    j["l_effective"] = r.stats.l_effective;
    j["packedness_estimate"] = packedness_estimate;
    j["counts"] = {{"cells", r.stats.cells},
                   {"graph_nodes", r.stats.graph_nodes},
                   {"graph_edges", r.stats.graph_edges},
                   {"windows", r.stats.windows},
                   {"critical_points",
                    {{"boundary", r.stats.boundary_points},
                     {"end_of_cell", r.stats.end_of_cell_points},
                     {"propagated", r.stats.propagated_points},
                     {"l_apart", r.stats.l_apart_points}}}};
    j["timings_ms"] = {{"simplify", r.stats.ms_simplify},
                       {"near_pairs", r.stats.ms_pairs},
                       {"cells", r.stats.ms_cells},
                       {"graph", r.stats.ms_graph},
                       {"sweep", r.stats.ms_sweep}};
    if (r.witness) j["witness"] = witness_to_json(*r.witness);
    return j;
}

}  // namespace subtraj
