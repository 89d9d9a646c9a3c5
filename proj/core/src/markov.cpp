#include "powprofit/markov.hpp"

#include <cmath>
#include <stdexcept>

namespace powprofit::markov {

ChainSpec build_chain(const MinerParams& params, int n_max)
{
    validate(params);
    if (n_max < 10) throw std::invalid_argument("n_max must be >= 10");

    ChainSpec chain{params, n_max, {}};
    int n = chain.size();
    chain.kernel.assign(std::size_t(n) * n, 0.0);
    double q = params.q, p = 1.0 - q;
    auto set = [&](int from, int to, double prob) { chain.kernel[from * n + to] = prob; };

    set(0, 0, p); // honest block, cycle of length one
    set(0, 2, q); // attacker takes a lead of 1
    set(1, 0, 1.0); // tie resolves with the next block, whoever mines it
    set(2, 1, p); // honest catches up: competition
    set(2, 3, q);
    set(3, 0, p); // lead 2 -> honest block -> attacker publishes all, cycle ends
    set(3, 4, q);
    for (int lead = 3; lead < n_max; ++lead) {
        set(lead + 1, lead, p);
        set(lead + 1, lead + 2, q);
    }
    set(n_max + 1, n_max, p);
    set(n_max + 1, n_max + 1, q); // reflecting truncation
    return chain;
}

namespace {

// Gaussian elimination with partial pivoting on an n x (n+1) augmented system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> rhs)
{
    int n = int(rhs.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (a[pivot * n + col] == 0.0) throw std::runtime_error("singular transition system");
        if (pivot != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(rhs[col], rhs[pivot]);
        }
        double d = a[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            double f = a[row * n + col] / d;
            if (f == 0.0) continue;
            for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (int row = n - 1; row >= 0; --row) {
        double s = rhs[row];
        for (int k = row + 1; k < n; ++k) s -= a[row * n + k] * x[k];
        x[row] = s / a[row * n + row];
    }
    return x;
}

} // namespace

StationaryResult stationary(const ChainSpec& chain)
{
    int n = chain.size();
    for (int row = 0; row < n; ++row) {
        double s = 0.0;
        for (int col = 0; col < n; ++col) s += chain.at(row, col);
        if (std::abs(s - 1.0) > 1e-12) throw std::runtime_error("kernel row does not sum to 1");
    }

    // (P^T - I) pi = 0 with the last equation replaced by sum pi = 1.
    std::vector<double> a(std::size_t(n) * n);
    std::vector<double> rhs(n, 0.0);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            a[row * n + col] = chain.at(col, row) - (row == col ? 1.0 : 0.0);
        }
    }
    for (int col = 0; col < n; ++col) a[(n - 1) * n + col] = 1.0;
    rhs[n - 1] = 1.0;

    StationaryResult r;
    r.pi = solve_dense(std::move(a), std::move(rhs));
    r.truncation_mass = r.pi.back();
    if (!(r.truncation_mass < 1e-12)) {
        throw std::runtime_error("n_max too small: truncation state mass above 1e-12");
    }
    r.expected_return_time = 1.0 / r.pi[0];

    // Official-block rates per chain step. Tie resolution (state 0'): the
    // attacker wins both blocks w.p. q, keeps his block w.p. gamma p, loses
    // both w.p. (1-gamma) p. Lead 2 -> 0 publishes the attacker's two blocks;
    // every further honest block behind a long lead finalizes one attacker
    // block.
    double q = chain.params.q, p = 1.0 - q, g = chain.params.gamma;
    double tail = 0.0;
    for (int lead = 3; lead <= chain.n_max; ++lead) tail += r.pi[lead + 1];
    r.r_pool = r.pi[1] * (2.0 * q + g * p) + r.pi[3] * 2.0 * p + tail * p;
    r.r_others = r.pi[0] * p + r.pi[1] * (g * p + 2.0 * (1.0 - g) * p);
    return r;
}

} // namespace powprofit::markov
