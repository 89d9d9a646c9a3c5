#pragma once

#include "powprofit/domain.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace powprofit::sim {

/// One independent random stream per (seed, run index); identical inputs give
/// bit-identical draws regardless of how runs are scheduled.
class RunRng {
public:
    RunRng(std::uint64_t seed, std::uint64_t run_index);

    double uniform01();
    double exponential(double mean);

private:
    std::mt19937_64 engine_;
};

struct SimConfig {
    MinerParams params{};
    ProtocolParams proto{};
    Strategy strategy = Strategy::SM;
    int n_periods = 20;
    int n_runs = 1;
    std::uint64_t seed = 0;
    bool record_delta = false;
    // Timestamp burst-published SM blocks at their mining time instead of the
    // publication time (alternative retarget reading).
    bool mining_time_stamps = false;
    // ANM: sample discrete BCH arrivals instead of continuous revenue accrual.
    bool discrete_bch = false;
    std::uint64_t max_events = 1'000'000'000;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct LagSummary {
    bool reached = false;        // mean path ends nonnegative
    double mean_path_seconds = 0.0; // last sign change of the mean Delta path
    double mean_path_periods = 0.0; // same, in chain-progress units
    Estimate per_path_seconds{};    // over paths whose Delta ends nonnegative
    double median_seconds = 0.0;
    double q10_seconds = 0.0;
    double q90_seconds = 0.0;
    int n_reached = 0;
};

struct SimOutcome {
    Estimate apparent_hashrate{};      // (revenue ratio) * tau0 / b, steady-state window
    Estimate revenue_ratio{};          // reward units per second, steady-state window
    Estimate official_fraction{};      // attacker share of official blocks (block count)
    Estimate revenue_per_block{};      // attacker revenue per official block, whole run;
                                       // free of the O(1/n0) retarget-time bias
    Estimate first_period_duration{};  // seconds until the first retarget
    DeltaTrajectory delta_path{};      // mean Delta at each retarget (record_delta)
    std::optional<LagSummary> profit_lag{};
    int n_runs = 0;
    std::uint64_t seed = 0;
};

struct EventRecord {
    int run_id;
    double time_s;
    char producer;    // 'a' attacker, 'h' honest
    char disposition; // 'o' official, 'x' orphaned
    long height;      // official chain height after the event
    double difficulty; // multiplier in force when the block was mined
};

using EventSink = std::function<void(const EventRecord&)>;

SimOutcome run(const SimConfig& config);
SimOutcome run(const SimConfig& config, const EventSink& sink);

void write_event_csv_header(std::ostream& os);
void write_event_csv(std::ostream& os, const EventRecord& rec);

/// One SM attack cycle. Times are relative to the cycle start; mean_block_time
/// is the current network mean inter-block time tau0 * d.
struct CycleOutcome {
    double revenue = 0.0;       // reward units
    double duration = 0.0;      // seconds
    int official_blocks = 0;
    int attacker_official = 0;  // attacker blocks in the official chain
    int orphans = 0;

    struct Block {
        double time;   // mining time within the cycle
        char producer; // 'a' or 'h'
        bool official;
    };
    std::vector<Block> blocks;
};

CycleOutcome sm_cycle_automaton(RunRng& rng, const MinerParams& params, double mean_block_time,
                                double b);

/// Per-path profit-lag summary from retarget-sampled Delta paths. All paths
/// must share the same number of breakpoints.
LagSummary estimate_profit_lag(const std::vector<std::vector<TrajectoryPoint>>& paths);

} // namespace powprofit::sim
