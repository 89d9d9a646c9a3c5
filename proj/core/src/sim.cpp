#include "powprofit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace powprofit::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

RunRng::RunRng(std::uint64_t seed, std::uint64_t run_index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(run_index + 1)))
{
}

double RunRng::uniform01()
{
    return double(engine_() >> 11) * 0x1.0p-53;
}

double RunRng::exponential(double mean)
{
    return -mean * std::log1p(-uniform01());
}

CycleOutcome sm_cycle_automaton(RunRng& rng, const MinerParams& params, double mean_block_time,
                                double b)
{
    double q = params.q;
    CycleOutcome c;
    double t = 0.0;
    auto next = [&]() -> char {
        t += rng.exponential(mean_block_time);
        return rng.uniform01() < q ? 'a' : 'h';
    };

    if (next() == 'h') {
        c.blocks.push_back({t, 'h', true});
        c.official_blocks = 1;
        c.duration = t;
        return c;
    }
    c.blocks.push_back({t, 'a', true});
    int lead = 1, attacker_blocks = 1;
    for (;;) {
        char who = next();
        if (who == 'a') {
            ++attacker_blocks;
            ++lead;
            c.blocks.push_back({t, 'a', true});
            continue;
        }
        if (lead == 1 && attacker_blocks == 1) {
            // Tie: the attacker publishes his block; the next block resolves
            // the competition.
            c.blocks.push_back({t, 'h', false});
            char resolver = next();
            if (resolver == 'a') {
                c.blocks.push_back({t, 'a', true});
                c.revenue = 2.0 * b;
                c.attacker_official = 2;
            } else if (rng.uniform01() < params.gamma) {
                // honest block mined on top of the attacker's block
                c.blocks.push_back({t, 'h', true});
                c.revenue = b;
                c.attacker_official = 1;
            } else {
                // honest block mined on top of the honest block
                c.blocks[0].official = false;
                c.blocks[1].official = true;
                c.blocks.push_back({t, 'h', true});
            }
            c.official_blocks = 2;
            c.orphans = 1;
            c.duration = t;
            return c;
        }
        c.blocks.push_back({t, 'h', false});
        if (--lead == 1) {
            // Honest miners are one behind: publish the whole secret fork.
            c.revenue = attacker_blocks * b;
            c.attacker_official = attacker_blocks;
            c.official_blocks = attacker_blocks;
            c.orphans = attacker_blocks - 1;
            c.duration = t;
            return c;
        }
    }
}

namespace {

struct RunResult {
    double window_revenue = 0.0; // reward units inside the steady-state window
    double window_time = 0.0;    // seconds
    long attacker_blocks = 0;    // attacker official blocks, whole run
    long total_blocks = 0;       // official blocks, whole run
    double total_revenue = 0.0;  // reward units, whole run
    double first_period = 0.0;
    std::vector<TrajectoryPoint> path;
};

// Per-run bookkeeping: clock, difficulty multiplier, retargets and Delta path.
struct RunAcc {
    const SimConfig& cfg;
    const EventSink* sink;
    int run_id;

    double d = 1.0;
    double now = 0.0;
    long height = 0;
    int in_period = 0;
    double period_start = 0.0;
    int periods_done = 0;
    double revenue = 0.0;
    long attacker_official = 0;
    double first_retarget_time = -1.0;
    double first_retarget_revenue = 0.0;
    double last_retarget_time = 0.0;
    std::uint64_t events = 0;
    std::vector<TrajectoryPoint> path;

    RunAcc(const SimConfig& c, const EventSink* s, int id) : cfg(c), sink(s), run_id(id) {}

    void count_event()
    {
        if (++events > cfg.max_events) {
            throw std::runtime_error("per-run event cap exceeded; check the configuration");
        }
    }

    void emit(double t, char producer, char disposition, double mined_d)
    {
        long h = height + (disposition == 'o' ? 1 : 0);
        if (sink) (*sink)({run_id, t, producer, disposition, h, mined_d});
    }

    double baseline(double t) const { return cfg.params.q * cfg.proto.b * t / cfg.proto.tau0; }

    // Append one block to the official chain; `stamp` is the timestamp the
    // retarget logic sees.
    void official(double stamp)
    {
        ++height;
        if (++in_period == cfg.proto.n0) {
            double elapsed = stamp - period_start;
            d *= (cfg.proto.n0 * cfg.proto.tau0) / elapsed;
            period_start = stamp;
            in_period = 0;
            ++periods_done;
            last_retarget_time = stamp;
            if (first_retarget_time < 0.0) {
                first_retarget_time = stamp;
                first_retarget_revenue = revenue;
            }
            path.push_back({stamp, double(height), revenue - baseline(stamp)});
        }
    }

    // One honestly-mined official block at the current difficulty, attacker
    // share q.
    void honest_step(RunRng& rng)
    {
        count_event();
        now += rng.exponential(cfg.proto.tau0 * d);
        bool attacker = rng.uniform01() < cfg.params.q;
        if (attacker) {
            revenue += cfg.proto.b;
            ++attacker_official;
        }
        emit(now, attacker ? 'a' : 'h', 'o', d);
        official(now);
    }

    // One full SM attack cycle; officials enter the chain as a burst at the
    // cycle end (publication-time stamps unless configured otherwise).
    void sm_cycle(RunRng& rng)
    {
        CycleOutcome c = sm_cycle_automaton(rng, cfg.params, cfg.proto.tau0 * d, cfg.proto.b);
        double start = now;
        now += c.duration;
        for (const auto& blk : c.blocks) {
            count_event();
            double mined_t = start + blk.time;
            emit(mined_t, blk.producer, blk.official ? 'o' : 'x', d);
            if (blk.official) {
                // credit revenue as blocks land so a run truncated at its
                // final retarget never counts unlanded blocks
                if (blk.producer == 'a') {
                    ++attacker_official;
                    revenue += cfg.proto.b;
                }
                official(cfg.mining_time_stamps ? mined_t : now);
                if (periods_done >= cfg.n_periods) break;
            }
        }
    }
};

RunResult simulate_run(const SimConfig& cfg, int run_id, const EventSink* sink)
{
    RunRng rng(cfg.seed, std::uint64_t(run_id));
    RunAcc acc(cfg, sink, run_id);
    double q = cfg.params.q, p = 1.0 - q;
    double rho = q * cfg.proto.b / cfg.proto.tau0; // honest-equivalent BCH revenue rate

    while (acc.periods_done < cfg.n_periods) {
        switch (cfg.strategy) {
        case Strategy::HM:
            acc.honest_step(rng);
            break;
        case Strategy::SM:
            acc.sm_cycle(rng);
            break;
        case Strategy::ISM:
            if (acc.periods_done % 2 == 0) {
                acc.sm_cycle(rng);
            } else {
                acc.honest_step(rng);
            }
            break;
        case Strategy::ANM:
            if (acc.periods_done % 2 == 0) {
                // Away phase: only honest miners on BTC; the attacker earns on
                // the other network.
                acc.count_event();
                if (cfg.discrete_bch) {
                    double t_btc = rng.exponential(cfg.proto.tau0 * acc.d / p);
                    double t_bch = rng.exponential(cfg.proto.tau0 / q);
                    if (t_bch < t_btc) {
                        acc.now += t_bch;
                        acc.revenue += cfg.proto.b;
                        break; // memoryless: redraw both next iteration
                    }
                    acc.now += t_btc;
                } else {
                    double dt = rng.exponential(cfg.proto.tau0 * acc.d / p);
                    acc.now += dt;
                    acc.revenue += rho * dt;
                }
                acc.emit(acc.now, 'h', 'o', acc.d);
                acc.official(acc.now);
            } else {
                acc.honest_step(rng);
            }
            break;
        }
    }

    RunResult res;
    res.first_period = acc.first_retarget_time;
    res.path = std::move(acc.path);
    res.attacker_blocks = acc.attacker_official;
    res.total_blocks = acc.height;
    res.total_revenue = acc.revenue;

    // Revenue window: SM and HM reach steady state after the first retarget;
    // ISM and ANM repeat their attack cycle from the start.
    double t0 = 0.0, r0 = 0.0;
    if ((cfg.strategy == Strategy::SM || cfg.strategy == Strategy::HM) && cfg.n_periods > 1) {
        t0 = acc.first_retarget_time;
        r0 = acc.first_retarget_revenue;
    }
    res.window_time = acc.last_retarget_time - t0;
    res.window_revenue = acc.revenue - r0;
    return res;
}

// Pooled ratio estimate sum(num)/sum(den) with a delta-method standard error;
// avoids the per-run Jensen bias of averaging ratios.
Estimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den)
{
    Estimate e;
    double sn = 0.0, sd = 0.0;
    for (double x : num) sn += x;
    for (double x : den) sd += x;
    if (sd == 0.0) return e;
    e.mean = sn / sd;
    std::size_t n = num.size();
    if (n > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = num[i] - e.mean * den[i];
            ss += r * r;
        }
        e.stderr_ = std::sqrt(ss * double(n) / double(n - 1)) / sd;
    }
    return e;
}

Estimate mean_stderr(const std::vector<double>& xs)
{
    Estimate e;
    std::size_t n = xs.size();
    if (n == 0) return e;
    double s = 0.0;
    for (double x : xs) s += x;
    e.mean = s / double(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - e.mean) * (x - e.mean);
        e.stderr_ = std::sqrt(ss / double(n - 1) / double(n));
    }
    return e;
}

double quantile(std::vector<double> xs, double prob)
{
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    double pos = prob * double(xs.size() - 1);
    std::size_t lo = std::size_t(pos);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    double frac = pos - double(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

// Last zero crossing of a retarget-sampled path; returns {seconds, periods,
// ended_nonnegative}.
struct Crossing {
    double seconds = 0.0;
    double periods = 0.0;
    bool reached = false;
};

Crossing last_crossing(const std::vector<TrajectoryPoint>& path)
{
    Crossing c;
    if (path.empty()) return c;
    if (path.back().delta < 0.0) return c; // horizon too short
    c.reached = true;
    int last_neg = -1;
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path[k].delta < 0.0) last_neg = int(k);
    }
    if (last_neg < 0) return c; // never below zero
    const auto& a = path[last_neg];
    const auto& b = path[last_neg + 1];
    double frac = -a.delta / (b.delta - a.delta);
    c.seconds = a.time_s + frac * (b.time_s - a.time_s);
    // breakpoint k sits at the end of period k+1
    c.periods = double(last_neg + 1) + frac;
    return c;
}

} // namespace

LagSummary estimate_profit_lag(const std::vector<std::vector<TrajectoryPoint>>& paths)
{
    LagSummary s;
    if (paths.empty()) return s;
    std::size_t n_points = paths.front().size();
    std::vector<TrajectoryPoint> mean_path(n_points, {0.0, 0.0, 0.0});
    for (const auto& path : paths) {
        if (path.size() != n_points) throw std::invalid_argument("ragged Delta paths");
        for (std::size_t k = 0; k < n_points; ++k) {
            mean_path[k].time_s += path[k].time_s;
            mean_path[k].chain_height = path[k].chain_height;
            mean_path[k].delta += path[k].delta;
        }
    }
    for (auto& pt : mean_path) {
        pt.time_s /= double(paths.size());
        pt.delta /= double(paths.size());
    }

    Crossing mean_cross = last_crossing(mean_path);
    s.reached = mean_cross.reached;
    s.mean_path_seconds = mean_cross.seconds;
    s.mean_path_periods = mean_cross.periods;

    std::vector<double> lags;
    for (const auto& path : paths) {
        Crossing c = last_crossing(path);
        if (c.reached) lags.push_back(c.seconds);
    }
    s.n_reached = int(lags.size());
    s.per_path_seconds = mean_stderr(lags);
    s.median_seconds = quantile(lags, 0.5);
    s.q10_seconds = quantile(lags, 0.1);
    s.q90_seconds = quantile(lags, 0.9);
    return s;
}

namespace {

SimOutcome run_impl(const SimConfig& cfg, const EventSink* sink)
{
    validate(cfg.params);
    validate(cfg.proto);
    if (cfg.n_periods < 1) throw std::invalid_argument("n_periods must be >= 1");
    if (cfg.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");

    std::vector<double> revenues, times, att_blocks, tot_blocks, total_revs, first_periods;
    std::vector<std::vector<TrajectoryPoint>> paths;
    revenues.reserve(cfg.n_runs);

    for (int run_id = 0; run_id < cfg.n_runs; ++run_id) {
        RunResult r = simulate_run(cfg, run_id, sink);
        revenues.push_back(r.window_revenue);
        times.push_back(r.window_time);
        att_blocks.push_back(double(r.attacker_blocks));
        tot_blocks.push_back(double(r.total_blocks));
        total_revs.push_back(r.total_revenue);
        first_periods.push_back(r.first_period);
        if (cfg.record_delta) paths.push_back(std::move(r.path));
    }

    SimOutcome out;
    out.revenue_ratio = ratio_estimate(revenues, times);
    out.apparent_hashrate = out.revenue_ratio;
    out.apparent_hashrate.mean *= cfg.proto.tau0 / cfg.proto.b;
    out.apparent_hashrate.stderr_ *= cfg.proto.tau0 / cfg.proto.b;
    out.official_fraction = ratio_estimate(att_blocks, tot_blocks);
    out.revenue_per_block = ratio_estimate(total_revs, tot_blocks);
    out.first_period_duration = mean_stderr(first_periods);
    out.n_runs = cfg.n_runs;
    out.seed = cfg.seed;

    if (cfg.record_delta) {
        LagSummary lag = estimate_profit_lag(paths);
        std::size_t n_points = paths.front().size();
        out.delta_path = DeltaTrajectory{cfg.strategy, cfg.params, cfg.proto, {}};
        out.delta_path.points.assign(n_points, {0.0, 0.0, 0.0});
        for (const auto& path : paths) {
            for (std::size_t k = 0; k < n_points; ++k) {
                out.delta_path.points[k].time_s += path[k].time_s;
                out.delta_path.points[k].chain_height = path[k].chain_height;
                out.delta_path.points[k].delta += path[k].delta;
            }
        }
        for (auto& pt : out.delta_path.points) {
            pt.time_s /= double(paths.size());
            pt.delta /= double(paths.size());
        }
        out.profit_lag = lag;
    }
    return out;
}

} // namespace

SimOutcome run(const SimConfig& config)
{
    return run_impl(config, nullptr);
}

SimOutcome run(const SimConfig& config, const EventSink& sink)
{
    return run_impl(config, &sink);
}

void write_event_csv_header(std::ostream& os)
{
    os << "run_id,time_s,producer,disposition,height,difficulty\n";
}

void write_event_csv(std::ostream& os, const EventRecord& rec)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%c,%c,%ld,%.9g\n", rec.run_id, rec.time_s,
                  rec.producer, rec.disposition, rec.height, rec.difficulty);
    os << buf;
}

} // namespace powprofit::sim
