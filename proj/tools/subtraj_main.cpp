#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subtraj/cluster.hpp"
#include "subtraj/io.hpp"
#include "subtraj/svg.hpp"

using namespace subtraj;

namespace {

Mode parse_mode(const std::string& s) {
    if (s == "vertex") return Mode::vertex;
    if (s == "arbitrary") return Mode::arbitrary;
    throw CLI::ValidationError("--mode must be vertex or arbitrary");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"subtrajectory cluster decision on packed trajectories"};
    app.require_subcommand(1);

    // decide
    auto* decide_cmd = app.add_subcommand("decide", "decide the cluster query on one trajectory");
    std::string in_path, mode_str, witness_path, report_path;
    int m = 0;
    double l = 0, d = 0, eps = 0;
    decide_cmd->add_option("--input", in_path, "trajectory CSV")->required();
    decide_cmd->add_option("--m", m, "cluster size")->required();
    decide_cmd->add_option("--l", l, "minimum reference length")->required();
    decide_cmd->add_option("--d", d, "target distance")->required();
    decide_cmd->add_option("--eps", eps, "approximation parameter")->required();
    decide_cmd->add_option("--mode", mode_str, "vertex|arbitrary")->required();
    decide_cmd->add_option("--witness", witness_path, "write the witness JSON here");
    decide_cmd->add_option("--report", report_path, "write the run report JSON here");

    // freespace
    auto* fs_cmd = app.add_subcommand("freespace", "render the simplified free space diagram");
    std::string p_path, q_path, svg_path;
    double fs_d = 0, fs_eps = 0;
    fs_cmd->add_option("--p", p_path, "first trajectory CSV")->required();
    fs_cmd->add_option("--q", q_path, "second trajectory CSV")->required();
    fs_cmd->add_option("--d", fs_d, "target distance")->required();
    fs_cmd->add_option("--eps", fs_eps, "approximation parameter")->required();
    fs_cmd->add_option("--svg", svg_path, "output SVG path")->required();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a packed test trajectory");
    std::string kind, out_path;
    int gen_n = 0;
    unsigned seed = 0;
    double gap = 1.0;
    gen_cmd->add_option("--kind", kind, "spiral|lawnmower|walk")->required();
    gen_cmd->add_option("--n", gen_n, "vertex count")->required();
    gen_cmd->add_option("--seed", seed, "random seed")->required();
    gen_cmd->add_option("--out", out_path, "output CSV path")->required();
    gen_cmd->add_option("--gap", gap, "row gap for lawnmower");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "timing table over generated sizes");
    std::string bench_kind = "spiral", sizes_str, bench_mode = "vertex";
    int bench_m = 2, reps = 3;
    double bench_l = 0, bench_d = 0, bench_eps = 0, bench_gap = 1.0;
    bench_cmd->add_option("--kind", bench_kind, "spiral|lawnmower|walk");
    bench_cmd->add_option("--sizes", sizes_str, "comma list of vertex counts")->required();
    bench_cmd->add_option("--m", bench_m, "cluster size")->required();
    bench_cmd->add_option("--l", bench_l, "minimum reference length")->required();
    bench_cmd->add_option("--d", bench_d, "target distance")->required();
    bench_cmd->add_option("--eps", bench_eps, "approximation parameter")->required();
    bench_cmd->add_option("--mode", bench_mode, "vertex|arbitrary");
    bench_cmd->add_option("--reps", reps, "repetitions per size");
    bench_cmd->add_option("--gap", bench_gap, "row gap for lawnmower");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (decide_cmd->parsed()) {
        Trajectory t = read_trajectory_csv(in_path);
        ClusterQuery q{m, l, d, eps, parse_mode(mode_str)};
        DecideResult res = decide(t, q);
        std::cout << (res.yes ? "YES" : "NO") << "\n";
        if (!witness_path.empty() && res.witness)
            write_file(witness_path, witness_to_json(*res.witness).dump(2) + "\n");
        if (!report_path.empty()) {
            double c_est = packedness_lower_bound(t, std::min(32, static_cast<int>(t.size())));
            write_file(report_path, report_to_json(q, res, c_est).dump(2) + "\n");
        }
        return res.yes ? 0 : 1;
    }
    if (fs_cmd->parsed()) {
        Trajectory p = read_trajectory_csv(p_path);
        Trajectory q = read_trajectory_csv(q_path);
        FreeSpaceDiagram fsd = build_diagram(p, q, FreeSpaceConfig(fs_d, fs_eps));
        write_file(svg_path, render_free_space_svg(fsd));
        return 0;
    }
    if (gen_cmd->parsed()) {
        write_trajectory_csv(generate_trajectory(kind, gen_n, seed, gap), out_path);
        return 0;
    }
    if (bench_cmd->parsed()) {
        std::vector<int> sizes;
        std::stringstream ss(sizes_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
        Mode bm = parse_mode(bench_mode);
        std::cout << "n,cells,critical_points,build_ms,graph_ms,sweep_ms,total_ms,answer\n";
        for (int n : sizes) {
            Trajectory t = generate_trajectory(bench_kind, n, 1, bench_gap);
            std::vector<DecideStats> stats;
            std::vector<double> totals;
            bool yes = false;
            for (int r = 0; r < reps; ++r) {
                auto t0 = std::chrono::steady_clock::now();
                DecideResult res = decide(t, ClusterQuery{bench_m, bench_l, bench_d, bench_eps, bm});
                auto t1 = std::chrono::steady_clock::now();
                totals.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
                stats.push_back(res.stats);
                yes = res.yes;
            }
            std::sort(totals.begin(), totals.end());
            auto med = [&](auto get) {
                std::vector<double> v;
                for (const auto& s : stats) v.push_back(get(s));
                std::sort(v.begin(), v.end());
                return v[v.size() / 2];
            };
            const DecideStats& s0 = stats.front();
            std::size_t crit = s0.boundary_points + s0.end_of_cell_points + s0.propagated_points +
                               s0.l_apart_points;
            std::cout << n << "," << s0.cells << "," << crit << ","
                      << med([](const DecideStats& s) {
                             return s.ms_simplify + s.ms_pairs + s.ms_cells;
                         })
                      << "," << med([](const DecideStats& s) { return s.ms_graph; }) << ","
                      << med([](const DecideStats& s) { return s.ms_sweep; }) << ","
                      << totals[totals.size() / 2] << "," << (yes ? "YES" : "NO") << "\n";
        }
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
