#pragma once

#include "powprofit/domain.hpp"

#include <vector>

namespace powprofit::markov {

/// Truncated SM state chain. State indices: 0 -> lead 0, 1 -> tie ("0'"),
/// k >= 2 -> lead k - 1, truncated (reflecting) at lead n_max.
struct ChainSpec {
    MinerParams params;
    int n_max;
    std::vector<double> kernel; // row-major, size() x size(), rows sum to 1

    int size() const { return n_max + 2; }
    double at(int from, int to) const { return kernel[from * size() + to]; }
};

ChainSpec build_chain(const MinerParams& params, int n_max = 200);

struct StationaryResult {
    std::vector<double> pi;      // stationary distribution over chain states
    double expected_return_time; // E[nu] = 1 / pi[0], chain steps
    double r_pool;               // attacker official-block rate per chain step
    double r_others;             // honest official-block rate per chain step
    double truncation_mass;      // pi at the truncation state
};

/// Dense solve of pi P = pi, sum pi = 1. Throws std::runtime_error when the
/// truncation state still carries mass above 1e-12 (n_max too small).
StationaryResult stationary(const ChainSpec& chain);

} // namespace powprofit::markov
