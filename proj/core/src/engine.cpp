#include "rltqap/engine.hpp"

#include <chrono>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "rltqap/hungarian.hpp"
#include "rltqap/phases.hpp"

namespace rltqap {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::TargetReached: return "target-reached";
        case StopReason::IterationLimit: return "iteration-limit";
        case StopReason::Stalled: return "stalled";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

template <typename Scalar>
BoundReport run_dual_ascent(CostState<Scalar>& st, const EngineConfig& cfg, Transport* transport) {
    if (!transport && st.partition.workers > 1)
        throw WorkerFailure("multi-worker state needs a transport");
    if (cfg.level != st.level) throw LevelUnavailable("config level does not match the state");
    if (cfg.max_iterations < 1) throw Error("max_iterations must be >= 1");

    HungarianSolver solver;
    BoundReport report;
    IterationRecord rec;
    auto t_start = Clock::now();

    auto hook = [&](const char* phase, int iteration) {
        if (cfg.phase_hook) cfg.phase_hook(phase, iteration);
    };
    auto timed = [&](double& acc, auto&& fn) {
        auto t0 = Clock::now();
        fn();
        acc += seconds_since(t0);
    };
    // Comp(X) round: ship owned coefficients with cross-worker complementary
    // classes, then equalize every owned class.
    auto comp_round = [&](Phase phase, int arity, std::uint32_t iteration, const char* name) {
        timed(rec.transfer_s, [&] {
            IncomingValues incoming;
            if (transport && transport->workers() > 1) {
                auto outgoing = collect_outgoing(st, phase, iteration);
                incoming = index_incoming(
                    transport->exchange(phase, iteration, outgoing, &rec.comm_bytes));
            }
            mean_transfer(st, arity, incoming);
        });
        hook(name, static_cast<int>(iteration));
    };
    auto mens_round = [&](std::uint32_t iteration) {
        timed(rec.transfer_s, [&] {
            auto outgoing = collect_outgoing(st, Phase::MensB, iteration);
            if (transport && transport->workers() > 1) {
                auto received =
                    transport->exchange(Phase::MensB, iteration, outgoing, &rec.comm_bytes);
                apply_mens_b(st, received);
            }
            // Self-delivery: owned entries already are the replica.
        });
        hook("mens(B)", static_cast<int>(iteration));
    };
    auto record = [&](int iteration) {
        rec.iteration = iteration;
        rec.lb = st.lb;
        if (iteration % std::max(1, cfg.log_every) == 0) {
            report.lb_trajectory.emplace_back(iteration, st.lb);
            report.records.push_back(rec);
        }
        rec = IterationRecord{};
    };

    // Pre-loop: equalize the initial C, concentrate it into B and LB.
    comp_round(Phase::CompC, 2, 0, "mean(C)");
    timed(rec.concentrate_s, [&] { concentrate_up(st, ConcentrateStep::CtoB, solver); });
    hook("conc(C->B)", 0);
    mens_round(0);
    timed(rec.concentrate_s, [&] { concentrate_up(st, ConcentrateStep::BtoLB, solver); });
    hook("conc(B->LB)", 0);
    record(0);

    int cont = 0;
    int stall_count = 0;
    StopReason stop = StopReason::IterationLimit;
    auto target_hit = [&] { return cfg.target && st.lb >= *cfg.target - cfg.tolerance; };

    if (target_hit()) {
        stop = StopReason::TargetReached;
    } else {
        while (cont < cfg.max_iterations) {
            double prev_lb = st.lb;
            std::uint32_t it = static_cast<std::uint32_t>(++cont);

            timed(rec.spread_s, [&] { spread_down(st, SpreadStep::BtoC); });
            hook("spread(B->C)", cont);
            if (cfg.level >= 2) {
                timed(rec.spread_s, [&] { spread_down(st, SpreadStep::CtoD); });
                hook("spread(C->D)", cont);
            }
            if (cfg.level >= 3) {
                timed(rec.spread_s, [&] { spread_down(st, SpreadStep::DtoE); });
                hook("spread(D->E)", cont);
                comp_round(Phase::CompE, 4, it, "mean(E)");
                timed(rec.concentrate_s,
                      [&] { concentrate_up(st, ConcentrateStep::EtoD, solver); });
                hook("conc(E->D)", cont);
            }
            if (cfg.level >= 2) {
                comp_round(Phase::CompD, 3, it, "mean(D)");
                timed(rec.concentrate_s,
                      [&] { concentrate_up(st, ConcentrateStep::DtoC, solver); });
                hook("conc(D->C)", cont);
            }
            comp_round(Phase::CompC, 2, it, "mean(C)");
            timed(rec.concentrate_s, [&] { concentrate_up(st, ConcentrateStep::CtoB, solver); });
            hook("conc(C->B)", cont);
            mens_round(it);
            timed(rec.concentrate_s, [&] { concentrate_up(st, ConcentrateStep::BtoLB, solver); });
            hook("conc(B->LB)", cont);
            record(cont);

            if (target_hit()) {
                stop = StopReason::TargetReached;
                break;
            }
            double rel = (st.lb - prev_lb) / std::max(1.0, std::abs(st.lb));
            stall_count = rel < cfg.stall_rel_eps ? stall_count + 1 : 0;
            if (stall_count >= cfg.stall_window) {
                stop = StopReason::Stalled;
                break;
            }
        }
    }

    if (report.lb_trajectory.empty() || report.lb_trajectory.back().first != cont) {
        report.lb_trajectory.emplace_back(cont, st.lb);
        report.records.push_back(rec);
        report.records.back().iteration = cont;
        report.records.back().lb = st.lb;
    }
    report.final_lb = st.lb;
    report.iterations_run = cont;
    report.stop_reason = stop;
    report.wall_time = seconds_since(t_start);
    if (cfg.target && *cfg.target != 0.0)
        report.gap_percent = (*cfg.target - st.lb) / *cfg.target * 100.0;
    return report;
}

template BoundReport run_dual_ascent<float>(CostState<float>&, const EngineConfig&, Transport*);
template BoundReport run_dual_ascent<double>(CostState<double>&, const EngineConfig&, Transport*);

template <typename Scalar>
std::vector<BoundReport> run_in_process(const Instance& inst, const EngineConfig& cfg,
                                        int workers) {
    auto partition = build_partition(inst.n, workers);
    InProcessHub hub(workers, CostState<Scalar>::precision_bits(), inst.n);
    std::vector<BoundReport> reports(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                auto state =
                    init_costs<Scalar>(inst, cfg.level, partition, w, cfg.memory_budget_bytes);
                auto endpoint = workers > 1 ? hub.endpoint(w) : nullptr;
                reports[w] = run_dual_ascent(state, cfg, endpoint.get());
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (int w = 0; w < workers; ++w)
        if (errors[w]) {
            try {
                std::rethrow_exception(errors[w]);
            } catch (const std::exception& e) {
                throw WorkerFailure("worker " + std::to_string(w) + " failed: " + e.what());
            }
        }
    return reports;
}

template std::vector<BoundReport> run_in_process<float>(const Instance&, const EngineConfig&, int);
template std::vector<BoundReport> run_in_process<double>(const Instance&, const EngineConfig&,
                                                         int);

std::optional<double> known_optimum(const std::string& name) {
    static const std::unordered_map<std::string, double> table = {
        {"had14", 2724},    {"had16", 3720},   {"had18", 5358},    {"had20", 6922},
        {"kra30a", 88900},  {"nug12", 578},    {"nug15", 1150},    {"nug16a", 1610},
        {"nug16b", 1240},   {"nug18", 1930},   {"nug20", 2570},    {"nug22", 3596},
        {"nug24", 3488},    {"nug25", 3744},   {"nug28", 5166},    {"nug30", 6124},
        {"rou15", 354210},  {"rou20", 725520}, {"tai15a", 388214}, {"tai17a", 491812},
        {"tai20a", 703482}, {"tai25a", 1167256}, {"tai30a", 1818146}, {"tho30", 149936},
        {"chr12c", 11156},  {"chr18a", 11098}, {"chr20a", 2192},   {"chr20b", 2298},
        {"chr22a", 6156},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

}  // namespace rltqap
