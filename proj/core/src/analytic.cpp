#include "powprofit/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace powprofit::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared building blocks of the SM cycle formulas, all in terms of p = 1 - q.
// A = (1+pq)(p-q) + pq appears in E[T]; D = p^2 q + p - q in E[L].
struct SmTerms {
    double p, q, A, D;
    explicit SmTerms(const MinerParams& m) : q(m.q)
    {
        p = 1.0 - q;
        A = (1.0 + p * q) * (p - q) + p * q;
        D = p * p * q + p - q;
    }
};

// Orphan-loss term of E[R]: (1-gamma) p^2 q, the probability-weighted block the
// attacker forfeits when the honest tie-breaker lands on the honest block.
double orphan_loss(const MinerParams& m)
{
    double p = 1.0 - m.q;
    return (1.0 - m.gamma) * p * p * m.q;
}

} // namespace

CycleStats sm_cycle_stats(const MinerParams& params, const ProtocolParams& proto)
{
    validate(params);
    validate(proto);
    SmTerms t(params);
    CycleStats s;
    s.expected_duration = t.A / (t.p - t.q) * proto.tau0;
    s.expected_revenue = t.A / (t.p - t.q) * t.q * proto.b - orphan_loss(params) * proto.b;
    s.expected_progress = t.D / (t.p - t.q);
    return s;
}

double sm_difficulty_drift(const MinerParams& params)
{
    validate(params);
    SmTerms t(params);
    return t.A / t.D;
}

double sm_first_period_duration(const MinerParams& params, const ProtocolParams& proto)
{
    validate(proto);
    return sm_difficulty_drift(params) * proto.n0 * proto.tau0;
}

double sm_apparent_hashrate(const MinerParams& params)
{
    validate(params);
    SmTerms t(params);
    return (t.A * t.q - orphan_loss(params) * (t.p - t.q)) / t.D;
}

ProfitLag sm_profit_lag(const MinerParams& params, const ProtocolParams& proto)
{
    validate(proto);
    double q = params.q;
    double qp = sm_apparent_hashrate(params);
    if (qp <= q) return {false, kInf, kInf};
    double drift = sm_difficulty_drift(params);
    double t0_periods = (q * drift - qp) / (qp - q);
    return {true, (drift + t0_periods) * proto.n0 * proto.tau0, 1.0 + t0_periods};
}

DeltaTrajectory sm_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                    int horizon_periods)
{
    validate(proto);
    if (horizon_periods < 1) throw std::invalid_argument("horizon_periods must be >= 1");
    double q = params.q;
    double qp = sm_apparent_hashrate(params);
    double drift = sm_difficulty_drift(params);
    double n0 = proto.n0, tau0 = proto.tau0, b = proto.b;

    DeltaTrajectory traj{Strategy::SM, params, proto, {}};
    traj.points.push_back({0.0, 0.0, 0.0});
    double dip = -(q * drift - qp) * n0 * b;
    traj.points.push_back({drift * n0 * tau0, n0, dip});
    for (int k = 2; k <= horizon_periods; ++k) {
        double t = (drift + (k - 1)) * n0 * tau0;
        traj.points.push_back({t, double(k) * n0, dip + (qp - q) * (k - 1) * n0 * b});
    }
    return traj;
}

IsmCycleStats ism_cycle_stats(const MinerParams& params, const ProtocolParams& proto)
{
    validate(proto);
    double drift = sm_difficulty_drift(params);
    double qp = sm_apparent_hashrate(params);
    IsmCycleStats s;
    s.cycle.expected_duration = (drift + 1.0 / drift) * proto.n0 * proto.tau0;
    s.cycle.expected_revenue = (qp + params.q) * proto.n0 * proto.b;
    s.cycle.expected_progress = 2.0 * proto.n0;
    s.sm_phase_ratio = qp / drift * proto.b / proto.tau0;
    s.honest_phase_ratio = params.q * drift * proto.b / proto.tau0;
    return s;
}

double ism_apparent_hashrate(const MinerParams& params)
{
    double drift = sm_difficulty_drift(params);
    return (params.q + sm_apparent_hashrate(params)) / (drift + 1.0 / drift);
}

double ism_apparent_hashrate_closed_form(const MinerParams& params)
{
    validate(params);
    double q = params.q, g = params.gamma;
    double q2 = q * q, q3 = q2 * q;
    double num = q * (1.0 - 4.0 * q2 + 2.0 * q3)
                 * (1.0 + g + (3.0 - 4.0 * g) * q + (5.0 * g - 11.0) * q2 + (5.0 - 2.0 * g) * q3);
    double den = 2.0 - 2.0 * q - 11.0 * q2 + 10.0 * q3 + 18.0 * q2 * q2 - 20.0 * q2 * q3
                 + 5.0 * q3 * q3;
    return num / den;
}

DeltaTrajectory ism_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                     int horizon_periods)
{
    validate(proto);
    if (horizon_periods < 2) throw std::invalid_argument("horizon_periods must be >= 2");
    double q = params.q;
    double qp = sm_apparent_hashrate(params);
    double drift = sm_difficulty_drift(params);
    double n0 = proto.n0, tau0 = proto.tau0, b = proto.b;
    double dip = (q * drift - qp) * n0 * b;                 // loss over one SM phase
    double gain = (qp + q - q * (drift + 1.0 / drift)) * n0 * b; // net advantage per full cycle

    DeltaTrajectory traj{Strategy::ISM, params, proto, {}};
    traj.points.push_back({0.0, 0.0, 0.0});
    double t = 0.0, h = 0.0;
    int period = 0, cycle = 0;
    while (period < horizon_periods) {
        // SM phase
        t += drift * n0 * tau0;
        h += n0;
        traj.points.push_back({t, h, cycle * gain - dip});
        if (++period >= horizon_periods) break;
        // honest phase
        t += n0 * tau0 / drift;
        h += n0;
        ++cycle;
        traj.points.push_back({t, h, cycle * gain});
        ++period;
    }
    return traj;
}

ProfitLag ism_profit_lag(const MinerParams& params, const ProtocolParams& proto)
{
    validate(proto);
    double q = params.q;
    double qpp = ism_apparent_hashrate(params);
    if (qpp <= q) return {false, kInf, kInf};
    double qp = sm_apparent_hashrate(params);
    double drift = sm_difficulty_drift(params);
    double dip = q * drift - qp;
    double gain = (qpp - q) * (drift + 1.0 / drift);
    // The dip at the end of the SM phase of cycle m is (m-1) gain - dip; the
    // first boundary after the last negative one is the end of cycle
    // ceil(dip/gain).
    double cycles = std::ceil(dip / gain);
    if (cycles < 0.0) cycles = 0.0;
    return {true, cycles * (drift + 1.0 / drift) * proto.n0 * proto.tau0, 2.0 * cycles};
}

AnmRevenue anm_revenue_ratio(const MinerParams& params, const ProtocolParams& proto)
{
    validate(params);
    validate(proto);
    double q = params.q, p = 1.0 - q;
    double delta = 1.0 / p;
    AnmRevenue r;
    r.factor = (1.0 + delta) / (delta + 1.0 / delta);
    r.ratio = q * r.factor * proto.b / proto.tau0;
    r.phase1_seconds = proto.n0 * proto.tau0 * delta;
    r.phase2_seconds = proto.n0 * proto.tau0 / delta;
    return r;
}

DeltaTrajectory anm_delta_trajectory(const MinerParams& params, const ProtocolParams& proto,
                                     int horizon_cycles)
{
    validate(params);
    validate(proto);
    if (horizon_cycles < 1) throw std::invalid_argument("horizon_cycles must be >= 1");
    double q = params.q;
    double delta = 1.0 / (1.0 - q);
    double n0 = proto.n0, tau0 = proto.tau0, b = proto.b;

    DeltaTrajectory traj{Strategy::ANM, params, proto, {}};
    traj.points.push_back({0.0, 0.0, 0.0});
    double t = 0.0, h = 0.0;
    for (int n = 1; n <= horizon_cycles; ++n) {
        t += delta * n0 * tau0; // away phase: flat
        h += n0;
        traj.points.push_back({t, h, q * q * (n - 1) * n0 * b});
        t += n0 * tau0 / delta; // return phase: rising
        h += n0;
        traj.points.push_back({t, h, q * q * n * n0 * b});
    }
    return traj;
}

ProfitLag anm_profit_lag(const MinerParams& params, const ProtocolParams& proto)
{
    validate(params);
    validate(proto);
    double delta = 1.0 / (1.0 - params.q);
    return {true, delta * proto.n0 * proto.tau0, 1.0};
}

double revenue_ratio(Strategy strategy, const MinerParams& params, const ProtocolParams& proto)
{
    validate(params);
    validate(proto);
    double unit = proto.b / proto.tau0;
    switch (strategy) {
    case Strategy::HM: return params.q * unit;
    case Strategy::SM: return sm_apparent_hashrate(params) * unit;
    case Strategy::ISM: return ism_apparent_hashrate(params) * unit;
    case Strategy::ANM: return anm_revenue_ratio(params, proto).ratio;
    }
    throw std::invalid_argument("unknown strategy");
}

ThresholdOutcome threshold(Strategy a, Strategy b, double gamma, double tol,
                           const ProtocolParams& proto)
{
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    auto diff = [&](double q) {
        MinerParams m{q, gamma};
        return revenue_ratio(a, m, proto) - revenue_ratio(b, m, proto);
    };
    double lo = 1e-4, hi = 0.5 - 1e-6;
    double flo = diff(lo), fhi = diff(hi);
    if (flo == 0.0) flo = diff(lo += tol);
    if ((flo > 0.0) == (fhi > 0.0)) {
        return {std::nullopt, fhi > 0.0 ? a : b};
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = diff(mid);
        if (fm == 0.0) {
            lo = mid - 0.5 * tol;
            hi = mid + 0.5 * tol;
            break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    ThresholdResult r{0.5 * (lo + hi), gamma, {a, b}, hi - lo};
    return {r, fhi > 0.0 ? a : b};
}

DominanceMap dominance_map(std::span<const double> q_grid, std::span<const double> gamma_grid,
                           const ProtocolParams& proto)
{
    DominanceMap map;
    map.q_grid.assign(q_grid.begin(), q_grid.end());
    map.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
    map.best.resize(q_grid.size() * gamma_grid.size());

    constexpr Strategy kAll[] = {Strategy::HM, Strategy::SM, Strategy::ISM, Strategy::ANM};
    for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
        for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
            MinerParams m{q_grid[qi], gamma_grid[gi]};
            Strategy best = Strategy::HM;
            double best_ratio = -1.0;
            for (Strategy s : kAll) {
                double r = revenue_ratio(s, m, proto);
                if (r > best_ratio) {
                    best_ratio = r;
                    best = s;
                }
            }
            map.best[gi * q_grid.size() + qi] = best;
        }
    }

    const std::pair<Strategy, Strategy> pairs[] = {{Strategy::SM, Strategy::HM},
                                                   {Strategy::ISM, Strategy::HM},
                                                   {Strategy::SM, Strategy::ISM}};
    for (auto [a, b] : pairs) {
        DominanceMap::Boundary boundary{a, b, {}};
        for (double g : gamma_grid) {
            auto out = threshold(a, b, g, 1e-6, proto);
            if (out.root) boundary.points.emplace_back(out.root->q_star, g);
        }
        map.boundaries.push_back(std::move(boundary));
    }
    return map;
}

std::vector<double> default_q_grid()
{
    std::vector<double> g;
    for (int i = 1; i <= 99; ++i) g.push_back(i * 0.005);
    return g;
}

std::vector<double> default_gamma_grid()
{
    std::vector<double> g;
    for (int i = 0; i <= 100; ++i) g.push_back(i * 0.01);
    return g;
}

} // namespace powprofit::analytic
