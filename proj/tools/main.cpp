#include "powprofit/analytic.hpp"
#include "powprofit/domain.hpp"
#include "powprofit/sim.hpp"
#include "svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace powprofit;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kWeek = 7.0 * 86400.0;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainCondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Round through 9 significant digits so reports are stable and readable.
double sig9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

fs::path resolve_out(const std::string& path)
{
    fs::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("POWPROFIT_OUT_DIR")) p = fs::path(dir) / p;
    }
    return p;
}

void atomic_write(const fs::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
        os << content;
        if (!os) throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    json parameters;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write() const
    {
        if (outputs.empty()) return;
        json m;
        m["command"] = command;
        m["argv"] = argv;
        m["tool_version"] = kVersion;
        m["parameters"] = parameters;
        m["seed"] = seed;
        m["outputs"] = outputs;
        m["wall_clock_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        atomic_write(resolve_out(outputs.front()).string() + ".manifest.json", m.dump(2) + "\n");
    }
};

struct ProtoFlags {
    double tau0 = 600.0;
    int n0 = 2016;
    double b = 1.0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--proto-tau0", tau0, "Target seconds per block");
        cmd->add_option("--proto-n0", n0, "Official blocks per difficulty period");
        cmd->add_option("--proto-b", b, "Reward per block, coinbase units");
    }
    ProtocolParams proto() const { return {tau0, n0, b}; }
};

json estimate_json(const sim::Estimate& e)
{
    return {{"mean", sig9(e.mean)}, {"stderr", sig9(e.stderr_)}};
}

json lag_json(const analytic::ProfitLag& lag)
{
    if (!lag.profitable) return {{"profitable", false}, {"note", "never profitable"}};
    return {{"profitable", true},
            {"seconds", sig9(lag.seconds)},
            {"weeks", sig9(lag.seconds / kWeek)},
            {"periods", sig9(lag.periods)}};
}

json analyze_report(Strategy strategy, const MinerParams& m, const ProtocolParams& proto)
{
    json r;
    r["strategy"] = to_string(strategy);
    r["q"] = sig9(m.q);
    r["gamma"] = sig9(m.gamma);
    r["proto"] = {{"tau0_s", sig9(proto.tau0)}, {"n0", proto.n0}, {"b", sig9(proto.b)}};
    r["revenue_ratio_per_s"] = sig9(analytic::revenue_ratio(strategy, m, proto));

    switch (strategy) {
    case Strategy::HM:
        r["apparent_hashrate"] = sig9(m.q);
        r["profit_lag"] = {{"profitable", true}, {"seconds", 0.0}, {"weeks", 0.0}, {"periods", 0.0}};
        break;
    case Strategy::SM: {
        auto cs = analytic::sm_cycle_stats(m, proto);
        r["cycle"] = {{"expected_revenue", sig9(cs.expected_revenue)},
                      {"expected_duration_s", sig9(cs.expected_duration)},
                      {"expected_progress_blocks", sig9(cs.expected_progress)}};
        r["difficulty_drift"] = sig9(analytic::sm_difficulty_drift(m));
        double sp = analytic::sm_first_period_duration(m, proto);
        r["first_period"] = {{"seconds", sig9(sp)}, {"days", sig9(sp / 86400.0)}};
        r["apparent_hashrate"] = sig9(analytic::sm_apparent_hashrate(m));
        r["profit_lag"] = lag_json(analytic::sm_profit_lag(m, proto));
        break;
    }
    case Strategy::ISM: {
        auto cs = analytic::ism_cycle_stats(m, proto);
        r["cycle"] = {{"expected_revenue", sig9(cs.cycle.expected_revenue)},
                      {"expected_duration_s", sig9(cs.cycle.expected_duration)},
                      {"expected_progress_blocks", sig9(cs.cycle.expected_progress)},
                      {"sm_phase_ratio_per_s", sig9(cs.sm_phase_ratio)},
                      {"honest_phase_ratio_per_s", sig9(cs.honest_phase_ratio)}};
        r["difficulty_drift"] = sig9(analytic::sm_difficulty_drift(m));
        r["apparent_hashrate"] = sig9(analytic::ism_apparent_hashrate(m));
        r["profit_lag"] = lag_json(analytic::ism_profit_lag(m, proto));
        break;
    }
    case Strategy::ANM: {
        auto ar = analytic::anm_revenue_ratio(m, proto);
        r["anm_factor"] = sig9(ar.factor);
        r["phase1_s"] = sig9(ar.phase1_seconds);
        r["phase2_s"] = sig9(ar.phase2_seconds);
        r["apparent_hashrate"] = sig9(ar.ratio * proto.tau0 / proto.b);
        r["profit_lag"] = lag_json(analytic::anm_profit_lag(m, proto));
        break;
    }
    }
    return r;
}

DeltaTrajectory make_trajectory(Strategy strategy, const MinerParams& m,
                                const ProtocolParams& proto, int horizon_periods)
{
    switch (strategy) {
    case Strategy::SM: return analytic::sm_delta_trajectory(m, proto, horizon_periods);
    case Strategy::ISM: return analytic::ism_delta_trajectory(m, proto, horizon_periods);
    case Strategy::ANM:
        return analytic::anm_delta_trajectory(m, proto, std::max(1, (horizon_periods + 1) / 2));
    case Strategy::HM: {
        validate(m);
        DeltaTrajectory t{Strategy::HM, m, proto, {}};
        for (int k = 0; k <= horizon_periods; ++k) {
            t.points.push_back({k * proto.n0 * proto.tau0, double(k) * proto.n0, 0.0});
        }
        return t;
    }
    }
    throw std::invalid_argument("unknown strategy");
}

std::string trajectory_csv(const DeltaTrajectory& traj)
{
    std::string csv = "chain_progress_periods,delta_coinbase_units\n";
    char buf[80];
    for (const auto& pt : traj.points) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", pt.chain_height / traj.proto.n0,
                      pt.delta / traj.proto.b);
        csv += buf;
    }
    return csv;
}

const char* strategy_color(Strategy s)
{
    switch (s) {
    case Strategy::HM: return "#d9d9d9";
    case Strategy::SM: return "#ffd92f";
    case Strategy::ISM: return "#66c2a5";
    case Strategy::ANM: return "#fc8d62";
    }
    return "#ffffff";
}

// Analytic prediction matched to the empirical estimator of cmd_simulate.
struct Prediction {
    double apparent;      // target for the revenue-based apparent hashrate
    double fraction;      // target for the official-block fraction (NaN if n/a)
    double first_period;  // expected first retarget time, seconds
};

Prediction predict(Strategy strategy, const MinerParams& m, const ProtocolParams& proto)
{
    double nan = std::numeric_limits<double>::quiet_NaN();
    switch (strategy) {
    case Strategy::HM: return {m.q, m.q, proto.n0 * proto.tau0};
    case Strategy::SM: {
        double qp = analytic::sm_apparent_hashrate(m);
        return {qp, qp, analytic::sm_first_period_duration(m, proto)};
    }
    case Strategy::ISM:
        return {analytic::ism_apparent_hashrate(m), nan,
                analytic::sm_first_period_duration(m, proto)};
    case Strategy::ANM: {
        auto ar = analytic::anm_revenue_ratio(m, proto);
        return {ar.ratio * proto.tau0 / proto.b, nan, ar.phase1_seconds};
    }
    }
    throw std::invalid_argument("unknown strategy");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Proof-of-work mining strategy profitability engine"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string strategy_name, out_file, svg_file, events_file;
    double q = 0.1, gamma = 0.5;
    int horizon = 20;
    ProtoFlags proto_flags;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Closed-form report for one strategy");
    analyze->add_option("strategy", strategy_name, "hm, sm, ism or anm")->required();
    analyze->add_option("--q", q, "Attacker hashrate share")->required();
    analyze->add_option("--gamma", gamma, "Attacker connectivity");
    analyze->add_option("-o,--out", out_file, "Write the JSON report here");
    proto_flags.attach(analyze);

    // curve
    auto* curve = app.add_subcommand("curve", "Delta trajectory as CSV (and SVG)");
    curve->add_option("strategy", strategy_name, "hm, sm, ism or anm")->required();
    curve->add_option("--q", q, "Attacker hashrate share")->required();
    curve->add_option("--gamma", gamma, "Attacker connectivity");
    curve->add_option("--horizon", horizon, "Horizon in difficulty periods");
    curve->add_option("-o,--out", out_file, "CSV output path")->required();
    curve->add_option("--svg", svg_file, "Optional SVG plot path");
    proto_flags.attach(curve);

    // sweep
    double q_min = 0.005, q_max = 0.495, q_step = 0.005;
    double g_min = 0.0, g_max = 1.0, g_step = 0.01;
    auto* sweep = app.add_subcommand("sweep", "Dominance map over the (q, gamma) grid");
    sweep->add_option("--q-min", q_min);
    sweep->add_option("--q-max", q_max);
    sweep->add_option("--q-step", q_step);
    sweep->add_option("--gamma-min", g_min);
    sweep->add_option("--gamma-max", g_max);
    sweep->add_option("--gamma-step", g_step);
    sweep->add_option("-o,--out", out_file, "CSV output path")->required();
    sweep->add_option("--svg", svg_file, "Optional SVG region map path");
    proto_flags.attach(sweep);

    // simulate
    int runs = 1000, periods = 20;
    std::uint64_t seed = 0;
    bool record_delta = false, mining_time_stamps = false, discrete_bch = false;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates vs analytic");
    simulate->add_option("strategy", strategy_name, "hm, sm, ism or anm")->required();
    simulate->add_option("--q", q, "Attacker hashrate share")->required();
    simulate->add_option("--gamma", gamma, "Attacker connectivity");
    simulate->add_option("--runs", runs, "Independent runs");
    simulate->add_option("--periods", periods, "Difficulty periods per run");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_flag("--record-delta", record_delta, "Track Delta paths and profit lag");
    simulate->add_flag("--mining-time-stamps", mining_time_stamps,
                       "Stamp burst blocks at mining time for retargets");
    simulate->add_flag("--discrete-bch", discrete_bch, "Sample discrete BCH arrivals (ANM)");
    simulate->add_option("--events", events_file, "Dump the event log as CSV");
    simulate->add_option("-o,--out", out_file, "Write the JSON outcome here");
    proto_flags.attach(simulate);

    CLI11_PARSE(app, argc, argv);

    try {
        Manifest manifest;
        manifest.argv.assign(argv, argv + argc);
        manifest.seed = seed;

        if (*analyze) {
            MinerParams m{q, gamma};
            ProtocolParams proto = proto_flags.proto();
            validate(m, proto);
            Strategy s = strategy_from_string(strategy_name);
            json report = analyze_report(s, m, proto);
            std::string text = report.dump(2) + "\n";
            if (!out_file.empty()) {
                atomic_write(resolve_out(out_file), text);
                manifest.command = "analyze";
                manifest.parameters = {{"strategy", strategy_name}, {"q", q},   {"gamma", gamma},
                                       {"tau0", proto.tau0},        {"n0", proto.n0}, {"b", proto.b}};
                manifest.outputs = {out_file};
                manifest.write();
            } else {
                std::cout << text;
            }
        } else if (*curve) {
            MinerParams m{q, gamma};
            ProtocolParams proto = proto_flags.proto();
            validate(m, proto);
            Strategy s = strategy_from_string(strategy_name);
            DeltaTrajectory traj = make_trajectory(s, m, proto, horizon);
            atomic_write(resolve_out(out_file), trajectory_csv(traj));
            manifest.command = "curve";
            manifest.parameters = {{"strategy", strategy_name}, {"q", q},          {"gamma", gamma},
                                   {"horizon", horizon},        {"tau0", proto.tau0},
                                   {"n0", proto.n0},            {"b", proto.b}};
            manifest.outputs = {out_file};
            if (!svg_file.empty()) {
                svgplot::Series series;
                for (const auto& pt : traj.points) {
                    series.points.emplace_back(pt.chain_height / proto.n0, pt.delta / proto.b);
                }
                std::string title = std::string("Delta vs honest mining, ") + to_string(s);
                atomic_write(resolve_out(svg_file),
                             svgplot::line_chart({series}, "chain progress (difficulty periods)",
                                                 "advantage (coinbase units)", title));
                manifest.outputs.push_back(svg_file);
            }
            manifest.write();
        } else if (*sweep) {
            ProtocolParams proto = proto_flags.proto();
            validate(proto);
            if (!(q_min > 0.0) || !(q_max < 0.5) || q_min > q_max || q_step <= 0.0) {
                throw std::invalid_argument("q range must satisfy 0 < q-min <= q-max < 0.5");
            }
            if (g_min < 0.0 || g_max > 1.0 || g_min > g_max || g_step <= 0.0) {
                throw std::invalid_argument("gamma range must lie in [0,1]");
            }
            std::vector<double> qs, gs;
            for (double v = q_min; v <= q_max + 1e-12; v += q_step) qs.push_back(v);
            for (double v = g_min; v <= g_max + 1e-12; v += g_step) gs.push_back(v);
            auto map = analytic::dominance_map(qs, gs, proto);

            std::string csv = "q,gamma,best_strategy,ratio_hm,ratio_sm,ratio_ism,ratio_anm\n";
            char buf[160];
            double unit = proto.tau0 / proto.b; // report ratios in b per tau0
            for (std::size_t gi = 0; gi < gs.size(); ++gi) {
                for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                    MinerParams m{qs[qi], gs[gi]};
                    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%s,%.9g,%.9g,%.9g,%.9g\n", qs[qi],
                                  gs[gi], to_string(map.best[gi * qs.size() + qi]),
                                  analytic::revenue_ratio(Strategy::HM, m, proto) * unit,
                                  analytic::revenue_ratio(Strategy::SM, m, proto) * unit,
                                  analytic::revenue_ratio(Strategy::ISM, m, proto) * unit,
                                  analytic::revenue_ratio(Strategy::ANM, m, proto) * unit);
                    csv += buf;
                }
            }
            atomic_write(resolve_out(out_file), csv);
            manifest.command = "sweep";
            manifest.parameters = {{"q_min", q_min}, {"q_max", q_max}, {"q_step", q_step},
                                   {"gamma_min", g_min}, {"gamma_max", g_max},
                                   {"gamma_step", g_step}, {"tau0", proto.tau0},
                                   {"n0", proto.n0}, {"b", proto.b}};
            manifest.outputs = {out_file};
            if (!svg_file.empty()) {
                std::vector<std::string> colors;
                for (Strategy s : map.best) colors.emplace_back(strategy_color(s));
                std::vector<svgplot::Series> lines;
                const char* line_colors[] = {"black", "blue", "red"}; // SM/HM, ISM/HM, SM/ISM
                for (std::size_t i = 0; i < map.boundaries.size(); ++i) {
                    svgplot::Series s;
                    s.color = line_colors[i % 3];
                    s.points = map.boundaries[i].points;
                    lines.push_back(std::move(s));
                }
                atomic_write(resolve_out(svg_file),
                             svgplot::region_map(qs, gs, colors, lines, "Dominant strategy"));
                manifest.outputs.push_back(svg_file);
            }
            manifest.write();
        } else if (*simulate) {
            sim::SimConfig cfg;
            cfg.params = {q, gamma};
            cfg.proto = proto_flags.proto();
            cfg.strategy = strategy_from_string(strategy_name);
            cfg.n_periods = periods;
            cfg.n_runs = runs;
            cfg.seed = seed;
            cfg.record_delta = record_delta;
            cfg.mining_time_stamps = mining_time_stamps;
            cfg.discrete_bch = discrete_bch;
            validate(cfg.params, cfg.proto);

            sim::SimOutcome outcome;
            if (!events_file.empty()) {
                std::ostringstream events;
                sim::write_event_csv_header(events);
                outcome = sim::run(cfg, [&](const sim::EventRecord& rec) {
                    sim::write_event_csv(events, rec);
                });
                atomic_write(resolve_out(events_file), events.str());
            } else {
                outcome = sim::run(cfg);
            }

            Prediction pred = predict(cfg.strategy, cfg.params, cfg.proto);
            json r;
            r["config"] = {{"strategy", strategy_name}, {"q", q}, {"gamma", gamma},
                           {"runs", runs}, {"periods", periods}, {"seed", seed},
                           {"tau0", cfg.proto.tau0}, {"n0", cfg.proto.n0}, {"b", cfg.proto.b},
                           {"record_delta", record_delta},
                           {"mining_time_stamps", mining_time_stamps},
                           {"discrete_bch", discrete_bch}};
            r["empirical"] = {{"apparent_hashrate", estimate_json(outcome.apparent_hashrate)},
                              {"official_fraction", estimate_json(outcome.official_fraction)},
                              {"revenue_ratio_per_s", estimate_json(outcome.revenue_ratio)},
                              {"first_period_s", estimate_json(outcome.first_period_duration)}};
            r["analytic"] = {{"apparent_hashrate", sig9(pred.apparent)},
                             {"revenue_ratio_per_s",
                              sig9(pred.apparent * cfg.proto.b / cfg.proto.tau0)},
                             {"first_period_s", sig9(pred.first_period)}};
            // Block-count statistics are exact for HM and SM; revenue-based
            // estimates carry the O(1/n0) retarget discretization.
            bool use_fraction = cfg.strategy == Strategy::HM || cfg.strategy == Strategy::SM;
            const sim::Estimate& app_est =
                use_fraction ? outcome.official_fraction : outcome.apparent_hashrate;
            double target = use_fraction ? pred.fraction : pred.apparent;
            json z;
            z["apparent_hashrate"] =
                app_est.stderr_ > 0.0 ? sig9((app_est.mean - target) / app_est.stderr_) : 0.0;
            z["first_period"] = outcome.first_period_duration.stderr_ > 0.0
                                    ? sig9((outcome.first_period_duration.mean - pred.first_period) /
                                           outcome.first_period_duration.stderr_)
                                    : 0.0;
            r["z"] = z;

            bool lag_short = false;
            if (record_delta && outcome.profit_lag) {
                const auto& lag = *outcome.profit_lag;
                json lj;
                lj["reached"] = lag.reached;
                if (lag.reached) {
                    lj["mean_path_seconds"] = sig9(lag.mean_path_seconds);
                    lj["mean_path_periods"] = sig9(lag.mean_path_periods);
                    lj["per_path"] = {{"mean_s", sig9(lag.per_path_seconds.mean)},
                                      {"stderr_s", sig9(lag.per_path_seconds.stderr_)},
                                      {"median_s", sig9(lag.median_seconds)},
                                      {"q10_s", sig9(lag.q10_seconds)},
                                      {"q90_s", sig9(lag.q90_seconds)},
                                      {"n_reached", lag.n_reached}};
                } else {
                    lj["note"] = "horizon too short: mean Delta still negative";
                    lag_short = true;
                }
                r["profit_lag"] = lj;
                json path = json::array();
                for (const auto& pt : outcome.delta_path.points) {
                    path.push_back({sig9(pt.time_s), sig9(pt.chain_height), sig9(pt.delta)});
                }
                r["delta_path"] = path;
            }

            std::string text = r.dump(2) + "\n";
            if (!out_file.empty()) {
                atomic_write(resolve_out(out_file), text);
                manifest.command = "simulate";
                manifest.parameters = r["config"];
                manifest.outputs = {out_file};
                if (!events_file.empty()) manifest.outputs.push_back(events_file);
                manifest.write();
            } else {
                std::cout << text;
            }
            if (lag_short) return 4;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DomainCondition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
