// rltqap: compute RLT dual-ascent lower bounds for QAP instances.
//   bound     run the dual ascent and write report + convergence CSV
//   estimate  print tensor memory requirements without allocating
//   verify    evaluate a permutation against an instance

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rltqap/engine.hpp"
#include "rltqap/transport.hpp"

using nlohmann::json;
using namespace rltqap;

namespace {

std::string instance_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::uint64_t parse_bytes(const std::string& text) {
    if (text.empty()) return 0;
    char suffix = static_cast<char>(std::toupper(text.back()));
    std::uint64_t mult = 1;
    std::string digits = text;
    switch (suffix) {
        case 'K': mult = 1ull << 10; break;
        case 'M': mult = 1ull << 20; break;
        case 'G': mult = 1ull << 30; break;
        case 'T': mult = 1ull << 40; break;
        default: suffix = 0;
    }
    if (suffix) digits.pop_back();
    return static_cast<std::uint64_t>(std::stod(digits) * static_cast<double>(mult));
}

std::string human_bytes(std::uint64_t bytes) {
    const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    double v = static_cast<double>(bytes);
    int u = 0;
    while (v >= 1024.0 && u < 4) {
        v /= 1024.0;
        ++u;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, u == 0 ? "%.0f %s" : "%.2f %s", v, units[u]);
    return buf;
}

std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const BoundReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open CSV for writing: " + path);
    out << "iteration,lb,spread_s,transfer_s,concentrate_s,comm_bytes\n";
    for (const auto& r : report.records)
        out << r.iteration << ',' << full_precision(r.lb) << ',' << r.spread_s << ','
            << r.transfer_s << ',' << r.concentrate_s << ',' << r.comm_bytes << '\n';
}

void write_report_json(const std::string& path, const std::string& name, const Instance& inst,
                       const EngineConfig& cfg, int workers, int precision,
                       const BoundReport& report) {
    json j;
    j["instance"] = name;
    j["n"] = inst.n;
    j["level"] = cfg.level;
    j["workers"] = workers;
    j["precision_bits"] = precision;
    j["final_lb"] = report.final_lb;
    if (report.gap_percent) j["gap_percent"] = *report.gap_percent;
    if (cfg.target) j["target"] = *cfg.target;
    j["iterations_run"] = report.iterations_run;
    j["stop_reason"] = stop_reason_name(report.stop_reason);
    j["wall_time_s"] = report.wall_time;
    auto& traj = j["lb_trajectory"] = json::array();
    for (auto [it, lb] : report.lb_trajectory) traj.push_back({{"iteration", it}, {"lb", lb}});
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open report for writing: " + path);
    out << j.dump(2) << '\n';
}

std::vector<std::string> read_hosts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read host list: " + path);
    std::vector<std::string> hosts;
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        hosts.push_back(line.substr(b, e - b + 1));
    }
    return hosts;
}

struct BoundOptions {
    std::string instance_path;
    bool swap_matrices = false;
    int level = 3;
    int workers = 1;
    std::string transport = "in-process";
    std::string hosts_path;
    int worker_id = 0;
    int max_iters = 300;
    double target = std::nan("");
    int precision = 64;
    std::string mem_budget;
    std::string out_path;
    std::string csv_path;
};

template <typename Scalar>
int run_bound(const BoundOptions& opt) {
    Instance inst = load_qaplib_file(opt.instance_path, opt.swap_matrices);
    std::string name = instance_stem(opt.instance_path);

    EngineConfig cfg;
    cfg.level = opt.level;
    cfg.max_iterations = opt.max_iters;
    cfg.memory_budget_bytes = parse_bytes(opt.mem_budget);
    if (!std::isnan(opt.target))
        cfg.target = opt.target;
    else if (auto known = known_optimum(name))
        cfg.target = *known;

    BoundReport report;
    int shown_worker = 0;
    if (opt.transport == "sockets") {
        auto hosts = read_hosts(opt.hosts_path);
        if (static_cast<int>(hosts.size()) != opt.workers)
            throw Error("host list has " + std::to_string(hosts.size()) + " entries for " +
                        std::to_string(opt.workers) + " workers");
        auto partition = build_partition(inst.n, opt.workers);
        auto state = init_costs<Scalar>(inst, cfg.level, partition, opt.worker_id,
                                        cfg.memory_budget_bytes);
        std::unique_ptr<SocketTransport> transport;
        if (opt.workers > 1)
            transport = std::make_unique<SocketTransport>(
                opt.worker_id, hosts, CostState<Scalar>::precision_bits(), inst.n);
        report = run_dual_ascent(state, cfg, transport.get());
        shown_worker = opt.worker_id;
    } else {
        auto reports = run_in_process<Scalar>(inst, cfg, opt.workers);
        report = reports.front();
    }

    std::printf("%s  n=%d  level=%d  workers=%d (worker %d)\n", name.c_str(), inst.n, cfg.level,
                opt.workers, shown_worker);
    std::printf("final LB      %.6f  (reported: %.0f)\n", report.final_lb,
                std::ceil(report.final_lb - 1e-6));
    if (cfg.target) std::printf("target        %.6f\n", *cfg.target);
    if (report.gap_percent) std::printf("gap           %.2f%%\n", *report.gap_percent);
    std::printf("iterations    %d\n", report.iterations_run);
    std::printf("stop reason   %s\n", stop_reason_name(report.stop_reason));
    std::printf("wall time     %.2f s\n", report.wall_time);

    if (!opt.csv_path.empty()) write_csv(opt.csv_path, report);
    if (!opt.out_path.empty())
        write_report_json(opt.out_path, name, inst, cfg, opt.workers,
                          CostState<Scalar>::precision_bits(), report);
    return 0;
}

int run_estimate(const std::string& instance_path, int level, int precision, int workers) {
    Instance inst = load_qaplib_file(instance_path);
    auto est = estimate_memory(inst.n, level, precision);
    std::printf("%s  n=%d  level=%d  precision=%d-bit\n", instance_stem(instance_path).c_str(),
                inst.n, level, precision);
    std::printf("%-8s %20s %16s\n", "tensor", "entries", "bytes");
    auto row = [&](const char* name, std::uint64_t entries) {
        std::printf("%-8s %20llu %16s\n", name, static_cast<unsigned long long>(entries),
                    human_bytes(est.bytes(entries)).c_str());
    };
    row("B", est.counts.b);
    row("C", est.counts.c);
    if (level >= 2) row("D", est.counts.d);
    if (level >= 3) row("E", est.counts.e);
    std::uint64_t total = est.counts.total(level);
    row("total", total);
    if (workers > 1)
        std::printf("per-worker share (%d workers): ~%s\n", workers,
                    human_bytes(est.bytes(total) / workers).c_str());
    return 0;
}

int run_verify(const std::string& instance_path, const std::string& perm_path, bool swap, int cap) {
    Instance inst = load_qaplib_file(instance_path, swap);
    std::ifstream in(perm_path);
    if (!in) throw Error("cannot read permutation file: " + perm_path);
    Permutation p;
    for (int v; in >> v;) p.assign.push_back(v);
    if (static_cast<int>(p.assign.size()) != inst.n)
        throw InvalidPermutation("permutation file has " + std::to_string(p.assign.size()) +
                                 " entries for n=" + std::to_string(inst.n));
    // Accept 1-based files (the QAPLIB solution convention).
    auto [lo, hi] = std::minmax_element(p.assign.begin(), p.assign.end());
    if (*lo == 1 && *hi == inst.n)
        for (int& v : p.assign) --v;
    if (!p.is_valid(inst.n)) throw InvalidPermutation("not a permutation of 0.." +
                                                      std::to_string(inst.n - 1));
    double cost = evaluate_permutation(inst, p);
    std::printf("cost %.6f\n", cost);
    if (inst.n <= cap) {
        auto bf = brute_force_optimum(inst, cap);
        std::printf("optimal: %s (brute-force optimum %.6f)\n",
                    cost <= bf.cost + 1e-9 ? "yes" : "no", bf.cost);
    } else {
        std::printf("optimal: unknown (N > cap)\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RLT dual-ascent lower bounds for the quadratic assignment problem"};
    app.require_subcommand(1);

    BoundOptions bopt;
    auto* bound = app.add_subcommand("bound", "Run the dual ascent on an instance");
    bound->add_option("--instance", bopt.instance_path, "QAPLIB-format instance file")
        ->required();
    bound->add_flag("--swap", bopt.swap_matrices, "Read the matrices in swapped roles");
    bound->add_option("--level", bopt.level, "RLT level (1-3)")->check(CLI::Range(1, 3));
    bound->add_option("--workers", bopt.workers, "Worker count")->check(CLI::PositiveNumber);
    bound->add_option("--transport", bopt.transport, "in-process or sockets")
        ->check(CLI::IsMember({"in-process", "sockets"}));
    bound->add_option("--hosts", bopt.hosts_path, "host:port list, one per worker (sockets)");
    bound->add_option("--worker-id", bopt.worker_id, "This process's worker id (sockets)");
    bound->add_option("--max-iters", bopt.max_iters, "Iteration limit")->check(CLI::PositiveNumber);
    bound->add_option("--target", bopt.target, "Stop once LB reaches this value");
    bound->add_option("--precision", bopt.precision, "Coefficient width in bits (32 or 64)")
        ->check(CLI::IsMember({32, 64}));
    bound->add_option("--mem-budget", bopt.mem_budget, "Whole-problem memory cap, e.g. 8G");
    bound->add_option("--out", bopt.out_path, "Write a JSON report here");
    bound->add_option("--csv", bopt.csv_path, "Write the convergence CSV here");

    std::string est_instance;
    int est_level = 3, est_precision = 64, est_workers = 1;
    auto* estimate = app.add_subcommand("estimate", "Print tensor memory requirements");
    estimate->add_option("--instance", est_instance, "QAPLIB-format instance file")->required();
    estimate->add_option("--level", est_level, "RLT level (1-3)")->check(CLI::Range(1, 3));
    estimate->add_option("--precision", est_precision, "Coefficient width in bits")
        ->check(CLI::IsMember({32, 64}));
    estimate->add_option("--workers", est_workers, "Worker count for the per-worker share");

    std::string ver_instance, ver_perm;
    bool ver_swap = false;
    int ver_cap = 9;
    auto* verify = app.add_subcommand("verify", "Evaluate a permutation file");
    verify->add_option("--instance", ver_instance, "QAPLIB-format instance file")->required();
    verify->add_option("--permutation", ver_perm, "File with N integers")->required();
    verify->add_flag("--swap", ver_swap, "Read the matrices in swapped roles");
    verify->add_option("--cap", ver_cap, "Brute-force size cap for the optimality check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bound->parsed())
            return bopt.precision == 32 ? run_bound<float>(bopt) : run_bound<double>(bopt);
        if (estimate->parsed())
            return run_estimate(est_instance, est_level, est_precision, est_workers);
        return run_verify(ver_instance, ver_perm, ver_swap, ver_cap);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
