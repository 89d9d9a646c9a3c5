#pragma once

#include "powprofit/domain.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace powprofit::analytic {

// --- Selfish mining (SM) ------------------------------------------------

/// Expected revenue, duration and official-chain progress of one SM attack cycle.
CycleStats sm_cycle_stats(const MinerParams& params, const ProtocolParams& proto);

/// First-period difficulty drift E[delta] >= 1. The first difficulty period
/// under SM lasts E[delta] * n0 * tau0 seconds on average.
double sm_difficulty_drift(const MinerParams& params);

/// Expected duration of the first difficulty period, seconds.
double sm_first_period_duration(const MinerParams& params, const ProtocolParams& proto);

/// Long-run fraction q' of official blocks owned by the selfish miner.
/// The long-run revenue ratio after the first adjustment is q' * b / tau0.
double sm_apparent_hashrate(const MinerParams& params);

/// "Never profitable" is a legitimate analytic answer, not an error.
struct ProfitLag {
    bool profitable;  // false: the strategy never overtakes honest mining
    double seconds;   // expected date after which Delta stays nonnegative
    double periods;   // same date in chain-progress units (difficulty periods)
};

ProfitLag sm_profit_lag(const MinerParams& params, const ProtocolParams& proto);

/// Expected advantage Delta(t) over honest mining; breakpoints at t = 0, the
/// first adjustment, then every period boundary up to horizon_periods.
DeltaTrajectory sm_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                    int horizon_periods);

// --- Intermittent selfish mining (ISM) ----------------------------------

struct IsmCycleStats {
    CycleStats cycle;          // one attack cycle = one SM period + one honest period
    double sm_phase_ratio;     // revenue ratio during the SM phase, reward units / s
    double honest_phase_ratio; // revenue ratio during the honest phase
};

IsmCycleStats ism_cycle_stats(const MinerParams& params, const ProtocolParams& proto);

/// q'' = (q + q') / (E[delta] + 1/E[delta]).
double ism_apparent_hashrate(const MinerParams& params);

/// Same quantity via the closed-form rational function in (q, gamma); agrees
/// with ism_apparent_hashrate to machine precision and serves as a second route.
double ism_apparent_hashrate_closed_form(const MinerParams& params);

/// Sawtooth Delta(t): dips during each SM phase, recovers during each honest
/// phase; breakpoints at every period boundary. Requires horizon_periods >= 2.
DeltaTrajectory ism_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                     int horizon_periods);

ProfitLag ism_profit_lag(const MinerParams& params, const ProtocolParams& proto);

// --- Alternate network mining (ANM) --------------------------------------

struct AnmRevenue {
    double ratio;          // long-run revenue ratio, reward units per second
    double factor;         // ratio / (q b / tau0) = (1 + delta) / (delta + 1/delta), delta = 1/p
    double phase1_seconds; // expected duration of the away phase, n0 tau0 delta
    double phase2_seconds; // expected duration of the return phase, n0 tau0 / delta
};

AnmRevenue anm_revenue_ratio(const MinerParams& params, const ProtocolParams& proto);

/// Staircase Delta(t): flat during each away phase, rising during each return
/// phase; after n full cycles Delta = q^2 n n0 b exactly.
DeltaTrajectory anm_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                     int horizon_cycles);

/// ANM is never behind honest mining; the advantage becomes strictly positive
/// at the first retarget.
ProfitLag anm_profit_lag(const MinerParams& params, const ProtocolParams& proto);

// --- Strategy comparison --------------------------------------------------

/// Long-run revenue ratio of a strategy, reward units per second.
double revenue_ratio(Strategy strategy, const MinerParams& params, const ProtocolParams& proto);

struct ThresholdResult {
    double q_star;
    double gamma;
    std::pair<Strategy, Strategy> pair;
    double bracket_width;
};

/// Root of revenue_ratio(a) - revenue_ratio(b) in q at fixed gamma. When the
/// difference does not change sign on the search interval, root is empty and
/// dominant names the everywhere-better strategy of the pair.
struct ThresholdOutcome {
    std::optional<ThresholdResult> root;
    Strategy dominant;
};

ThresholdOutcome threshold(Strategy a, Strategy b, double gamma, double tol = 1e-6,
                           const ProtocolParams& proto = {});

struct DominanceMap {
    std::vector<double> q_grid;
    std::vector<double> gamma_grid;
    std::vector<Strategy> best; // row-major: best[gi * q_grid.size() + qi]

    struct Boundary {
        Strategy a, b;
        std::vector<std::pair<double, double>> points; // (q*, gamma), one per gamma row with a root
    };
    std::vector<Boundary> boundaries; // SM/HM, ISM/HM, SM/ISM
};

DominanceMap dominance_map(std::span<const double> q_grid, std::span<const double> gamma_grid,
                           const ProtocolParams& proto = {});

std::vector<double> default_q_grid();     // 0.005 .. 0.495 step 0.005
std::vector<double> default_gamma_grid(); // 0 .. 1 step 0.01

} // namespace powprofit::analytic
