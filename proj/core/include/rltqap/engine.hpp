#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rltqap/cost_state.hpp"
#include "rltqap/transport.hpp"

namespace rltqap {

enum class StopReason { TargetReached, IterationLimit, Stalled };
const char* stop_reason_name(StopReason r);

struct EngineConfig {
    int level = 3;
    int max_iterations = 300;  // symbol lim
    /// Stop once lb >= target - tolerance. Unset = run to lim or stall.
    std::optional<double> target;
    double tolerance = 1e-6;
    /// Stall: relative LB improvement below stall_rel_eps for stall_window
    /// consecutive iterations.
    double stall_rel_eps = 1e-9;
    int stall_window = 10;
    int log_every = 1;
    std::uint64_t memory_budget_bytes = 0;
    /// Called after each completed phase (instrumentation and tests).
    std::function<void(std::string_view phase, int iteration)> phase_hook;
};

struct IterationRecord {
    int iteration = 0;
    double lb = 0.0;
    double spread_s = 0.0;
    double transfer_s = 0.0;
    double concentrate_s = 0.0;
    std::uint64_t comm_bytes = 0;
};

struct BoundReport {
    std::vector<std::pair<int, double>> lb_trajectory;
    double final_lb = 0.0;
    std::optional<double> gap_percent;  // (optimal - LB)/optimal * 100
    int iterations_run = 0;             // symbol cont
    StopReason stop_reason = StopReason::IterationLimit;
    double wall_time = 0.0;
    std::vector<IterationRecord> records;
};

/// Runs the dual ascent to completion on one worker's state. `transport` may
/// be null only for a single worker. Every worker evaluates the same stop
/// test on the replicated LB, so all workers leave the loop together.
template <typename Scalar>
BoundReport run_dual_ascent(CostState<Scalar>& state, const EngineConfig& config,
                            Transport* transport = nullptr);

/// Spawns `workers` threads over an InProcessHub and runs them to completion.
/// Reports come back in worker order; a throwing worker aborts the run with
/// WorkerFailure.
template <typename Scalar>
std::vector<BoundReport> run_in_process(const Instance& inst, const EngineConfig& config,
                                        int workers);

/// Optimal (or best known) objective for bundled QAPLIB instance names;
/// used as the default stop target.
std::optional<double> known_optimum(const std::string& instance_name);

}  // namespace rltqap
