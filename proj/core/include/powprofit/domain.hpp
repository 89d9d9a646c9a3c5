#pragma once

#include <string>
#include <utility>
#include <vector>

namespace powprofit {

/// Mining strategy tags used throughout the library.
enum class Strategy { HM, SM, ISM, ANM };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);  // throws std::invalid_argument

/// Attacker parameters: relative hashpower q and tie connectivity gamma.
struct MinerParams {
    double q;      // attacker's share of total hashpower, 0 < q < 0.5
    double gamma;  // fraction of honest hashpower mining on the attacker's block in a tie
};

/// Protocol constants. Defaults are Bitcoin's.
struct ProtocolParams {
    double tau0 = 600.0;  // target seconds per block
    int n0 = 2016;        // official blocks per difficulty period
    double b = 1.0;       // mean reward per block, coinbase units
};

// Throw std::invalid_argument naming the violated invariant.
void validate(const MinerParams& params);
void validate(const ProtocolParams& proto);

inline std::pair<MinerParams, ProtocolParams> validate(MinerParams params, ProtocolParams proto)
{
    validate(params);
    validate(proto);
    return {params, proto};
}

/// Expected statistics of one attack cycle.
struct CycleStats {
    double expected_revenue;  // E[R], reward units
    double expected_duration; // E[T], seconds
    double expected_progress; // E[L], official blocks added per cycle
};

struct TrajectoryPoint {
    double time_s;       // seconds since attack start
    double chain_height; // official blocks
    double delta;        // cumulative advantage over honest mining, reward units
};

/// Piecewise-linear expected advantage over honest mining. The first point is
/// always (0, 0, 0); the slope is constant between consecutive points.
struct DeltaTrajectory {
    Strategy strategy;
    MinerParams params;
    ProtocolParams proto;
    std::vector<TrajectoryPoint> points;
};

} // namespace powprofit
