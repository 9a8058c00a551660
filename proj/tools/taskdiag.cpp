// taskdiag: pre-training diagnostics for temporal taskifications of a stream.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "taskdiag/cl_metrics.hpp"
#include "taskdiag/distance.hpp"
#include "taskdiag/errors.hpp"
#include "taskdiag/profiles.hpp"
#include "taskdiag/report.hpp"
#include "taskdiag/stream.hpp"
#include "taskdiag/synthetic.hpp"
#include "taskdiag/taskify.hpp"

using namespace taskdiag;
using nlohmann::json;

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ChannelSelector make_selector(const std::string& channel) {
    return channel.empty() ? ChannelSelector::all() : ChannelSelector::single(channel);
}

Stream load_input(const std::string& path, const std::string& ts_col) {
    CsvSchema schema;
    schema.timestamp_column = ts_col;
    return load_csv(path, schema);
}

double param_or(const std::map<std::string, double>& p, const std::string& key,
                double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int cmd_synth(const std::string& kind, std::size_t steps, std::uint64_t seed,
              std::int64_t step_seconds, const std::vector<std::string>& kv,
              const std::string& out) {
    std::map<std::string, double> p;
    for (const auto& item : kv) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--params expects key=value, got '" + item + "'");
        p[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }

    SynthSpec spec;
    spec.t_steps = steps;
    spec.seed = seed;
    spec.step_seconds = step_seconds;
    if (kind == "changepoint") {
        ChangepointParams cp;
        cp.mu1 = param_or(p, "mu1", 0.0);
        cp.mu2 = param_or(p, "mu2", 1.0);
        cp.sigma = param_or(p, "sigma", 0.1);
        cp.t_star1 = static_cast<std::size_t>(param_or(p, "t_star1", steps / 3.0));
        cp.t_star2 = static_cast<std::size_t>(param_or(p, "t_star2", 2.0 * steps / 3));
        spec.params = cp;
    } else if (kind == "transient") {
        TransientParams tp;
        tp.amplitude = param_or(p, "amplitude", 1.0);
        tp.eta = param_or(p, "eta", 1.0);
        tp.t_star1 = static_cast<std::size_t>(param_or(p, "t_star1", steps / 3.0));
        tp.t_star2 = static_cast<std::size_t>(param_or(p, "t_star2", 2.0 * steps / 3));
        tp.background_constant = param_or(p, "background_constant", 0.0);
        tp.background_slope = param_or(p, "background_slope", 0.0);
        tp.noise_sigma = param_or(p, "noise_sigma", 0.0);
        spec.params = tp;
    } else if (kind == "periodic") {
        PeriodicParams pp;
        pp.omega = param_or(p, "omega", 2.0 * M_PI / 64.0);
        pp.noise_sigma = param_or(p, "noise_sigma", 0.0);
        spec.params = pp;
    } else if (kind == "iid_noise") {
        IidNoiseParams ip;
        ip.mean = param_or(p, "mean", 0.0);
        ip.sigma = param_or(p, "sigma", 1.0);
        spec.params = ip;
    } else if (kind == "piecewise_regimes") {
        // regimes via params: n_regimes, regime_len, mean_step (means 0, m, 2m, ...)
        PiecewiseRegimesParams rp;
        const std::size_t n = static_cast<std::size_t>(param_or(p, "n_regimes", 4));
        const std::size_t len = static_cast<std::size_t>(
            param_or(p, "regime_len", static_cast<double>(steps / std::max<std::size_t>(n, 1))));
        const double mean_step = param_or(p, "mean_step", 1.0);
        rp.sigma = param_or(p, "sigma", 0.1);
        std::size_t assigned = 0;
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t l = (r + 1 == n) ? steps - assigned : len;
            rp.means.push_back(mean_step * static_cast<double>(r % 2 == 0 ? r : n - r));
            rp.lengths.push_back(l);
            assigned += l;
        }
        spec.params = rp;
    } else {
        throw ConfigError("unknown kind '" + kind + "'");
    }
    const Stream s = generate(spec);
    write_csv(s, out);
    std::cout << "wrote " << out << " (" << s.t_steps << " steps)\n";
    return 0;
}

void print_summary(const StreamSummary& sum) {
    std::cout << "series:   " << sum.series_id << "\n"
              << "steps:    " << sum.t_steps << "\n"
              << "step:     " << sum.step_seconds << " s\n"
              << "start:    " << sum.start_time << "\n"
              << "duration: " << sum.duration_seconds << " s\n";
    for (const auto& c : sum.channels)
        std::cout << "channel " << c.name << ": min=" << fmt6(c.min)
                  << " max=" << fmt6(c.max) << " mean=" << fmt6(c.mean)
                  << " std=" << fmt6(c.std) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal taskification diagnostics for streaming data"};
    app.require_subcommand(1);

    std::string input, out, channel, ts_col = "id_time", kind, config_path;
    std::string fixtures = "data/fixtures.json";
    std::vector<std::string> params;
    std::vector<std::size_t> windows;
    std::size_t window_days = 0, n_perturb = 64, l_min = kDefaultLMin;
    std::size_t delta_days = 1, steps = 1000;
    std::int64_t shift_days = 0, step_seconds = 600;
    std::uint64_t seed = 0;
    double alpha = 0.5, beta = 0.5;
    bool emit_svg = false;
    std::vector<std::string> matrix_files;

    auto* inspect = app.add_subcommand("inspect", "Summarize a stream CSV");
    inspect->add_option("input", input)->required();
    inspect->add_option("--timestamp-col", ts_col);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic stream CSV");
    synth->add_option("--kind", kind)->required();
    synth->add_option("--steps", steps);
    synth->add_option("--seed", seed);
    synth->add_option("--step-seconds", step_seconds);
    synth->add_option("--params", params);
    synth->add_option("--out", out)->required();

    auto* taskify_cmd = app.add_subcommand("taskify", "Build a taskification");
    taskify_cmd->add_option("input", input)->required();
    taskify_cmd->add_option("--window-days", window_days)->required();
    taskify_cmd->add_option("--shift-days", shift_days);
    taskify_cmd->add_option("--timestamp-col", ts_col);
    taskify_cmd->add_option("--out", out);

    auto* matrix = app.add_subcommand("matrix", "Pairwise task distance matrix");
    matrix->add_option("input", input)->required();
    matrix->add_option("--window-days", window_days)->required();
    matrix->add_option("--shift-days", shift_days);
    matrix->add_option("--channel", channel);
    matrix->add_option("--timestamp-col", ts_col);
    matrix->add_option("--out", out)->required();
    matrix->add_flag("--svg", emit_svg);

    auto* profiles_cmd = app.add_subcommand("profiles", "Plasticity/stability profiles");
    profiles_cmd->add_option("input", input)->required();
    profiles_cmd->add_option("--window-days", window_days)->required();
    profiles_cmd->add_option("--shift-days", shift_days);
    profiles_cmd->add_option("--channel", channel);
    profiles_cmd->add_option("--lmin", l_min);
    profiles_cmd->add_option("--timestamp-col", ts_col);

    auto* dprof_cmd = app.add_subcommand("dprof", "Profile distance between window variants");
    dprof_cmd->add_option("input", input)->required();
    dprof_cmd->add_option("--windows", windows)->required()->delimiter(',');
    dprof_cmd->add_option("--shift-days", shift_days);
    dprof_cmd->add_option("--channel", channel);
    dprof_cmd->add_option("--alpha", alpha);
    dprof_cmd->add_option("--beta", beta);
    dprof_cmd->add_option("--lmin", l_min);
    dprof_cmd->add_option("--timestamp-col", ts_col);

    auto* bps_cmd = app.add_subcommand("bps", "Boundary-profile sensitivity");
    bps_cmd->add_option("input", input)->required();
    bps_cmd->add_option("--window-days", window_days)->required();
    bps_cmd->add_option("--shift-days", shift_days);
    bps_cmd->add_option("--channel", channel);
    bps_cmd->add_option("--delta-days", delta_days);
    bps_cmd->add_option("--n-perturb", n_perturb);
    bps_cmd->add_option("--seed", seed);
    bps_cmd->add_option("--alpha", alpha);
    bps_cmd->add_option("--beta", beta);
    bps_cmd->add_option("--lmin", l_min);
    bps_cmd->add_option("--timestamp-col", ts_col);
    bps_cmd->add_option("--out", out);

    auto* clm = app.add_subcommand("clmetrics", "Regression-adapted CL metrics");
    clm->add_option("matrices", matrix_files)->required();

    auto* report_cmd = app.add_subcommand("report", "Batch diagnostics over a corpus");
    report_cmd->add_option("--config", config_path);
    report_cmd->add_option("--input", input);
    report_cmd->add_option("--channel", channel);
    report_cmd->add_option("--windows", windows)->delimiter(',');
    report_cmd->add_option("--shift-days", shift_days);
    report_cmd->add_option("--delta-days", delta_days);
    report_cmd->add_option("--n-perturb", n_perturb);
    report_cmd->add_option("--seed", seed);
    report_cmd->add_option("--alpha", alpha);
    report_cmd->add_option("--beta", beta);
    report_cmd->add_option("--lmin", l_min);
    report_cmd->add_option("--timestamp-col", ts_col);
    report_cmd->add_option("--out-dir", out);
    report_cmd->add_flag("--svg", emit_svg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) {
            print_summary(summarize(load_input(input, ts_col)));
            return 0;
        }
        if (synth->parsed())
            return cmd_synth(kind, steps, seed, step_seconds, params, out);

        if (taskify_cmd->parsed()) {
            const Stream s = load_input(input, ts_col);
            Taskification tk = fixed_length(s, window_days);
            if (shift_days != 0) tk = shift(tk, shift_days, s);
            const std::string text = taskification_to_json(tk, steps_per_day(s));
            if (out.empty()) {
                std::cout << text << "\n";
            } else {
                std::ofstream o(out);
                o << text << "\n";
            }
            return 0;
        }
        if (matrix->parsed()) {
            const Stream s = load_input(input, ts_col);
            Taskification tk = fixed_length(s, window_days);
            if (shift_days != 0) tk = shift(tk, shift_days, s);
            const DistanceMatrix m = pairwise_matrix(s, tk, make_selector(channel));
            write_matrix_csv(m, out);
            if (emit_svg) {
                std::string svg = out;
                if (auto pos = svg.find_last_of('.'); pos != std::string::npos)
                    svg = svg.substr(0, pos);
                emit_heatmap(m, svg + ".svg");
            }
            std::cout << "wrote " << out << " (" << m.dims << "x" << m.dims << ")\n";
            return 0;
        }
        if (profiles_cmd->parsed()) {
            const Stream s = load_input(input, ts_col);
            Taskification tk = fixed_length(s, window_days);
            if (shift_days != 0) tk = shift(tk, shift_days, s);
            const auto sel = make_selector(channel);
            json j;
            j["label"] = tk.label;
            j["plasticity"] = plasticity_profile(s, tk, sel).values;
            j["stability"] = stability_profile(s, tk, sel, l_min).values;
            j["l_min"] = l_min;
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (dprof_cmd->parsed()) {
            const Stream s = load_input(input, ts_col);
            const auto sel = make_selector(channel);
            const ProfileDistanceWeights w{alpha, beta};
            std::vector<Taskification> tks;
            for (std::size_t wd : windows) {
                Taskification tk = fixed_length(s, wd);
                if (shift_days != 0) tk = shift(tk, shift_days, s);
                tks.push_back(std::move(tk));
            }
            json j = json::array();
            for (std::size_t a = 0; a < tks.size(); ++a)
                for (std::size_t b = a + 1; b < tks.size(); ++b) {
                    const double d = d_prof(s, tks[a], tks[b], w, sel, l_min);
                    json e;
                    e["a"] = tks[a].label;
                    e["b"] = tks[b].label;
                    e["d_prof"] = d;
                    j.push_back(e);
                    std::cout << tks[a].label << " vs " << tks[b].label << ": "
                              << fmt6(d) << "\n";
                }
            return 0;
        }
        if (bps_cmd->parsed()) {
            const Stream s = load_input(input, ts_col);
            Taskification tk = fixed_length(s, window_days);
            if (shift_days != 0) tk = shift(tk, shift_days, s);
            PerturbationSpec spec;
            spec.delta_steps = delta_days * steps_per_day(s);
            spec.n_samples = n_perturb;
            spec.seed = seed;
            const BpsReport r = bps(s, tk, spec, {alpha, beta}, make_selector(channel),
                                    l_min);
            std::cout << tk.label << "\n" << format_bps_table(r);
            if (!out.empty()) {
                std::ofstream o(out);
                o << bps_report_to_json(r) << "\n";
            }
            return 0;
        }
        if (clm->parsed()) {
            std::map<std::string, std::vector<double>> by_metric;
            for (const auto& path : matrix_files) {
                const ResultsMatrix rm = ResultsMatrix::load_csv(path);
                const double mse = average_mse(rm);
                const double bwt = backward_transfer(rm);
                const double fgt = forgetting(rm);
                std::cout << path << ": avg_mse=" << fmt6(mse) << " bwt=" << fmt6(bwt)
                          << " forgetting=" << fmt6(fgt) << "\n";
                by_metric["avg_mse"].push_back(mse);
                by_metric["bwt"].push_back(bwt);
                by_metric["forgetting"].push_back(fgt);
            }
            if (matrix_files.size() >= 2) {
                std::cout << "std across taskifications:";
                for (const auto& [name, vals] : by_metric)
                    std::cout << " " << name << "=" << fmt6(cross_taskification_std(vals));
                std::cout << "\n";
            }
            return 0;
        }
        if (report_cmd->parsed()) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = RunConfig::from_json_file(config_path);
            if (!input.empty()) cfg.input = input;
            if (!channel.empty()) cfg.channel = channel;
            if (!windows.empty()) cfg.windows = windows;
            if (report_cmd->count("--shift-days")) cfg.shift_days = shift_days;
            if (report_cmd->count("--delta-days")) cfg.delta_days = delta_days;
            if (report_cmd->count("--n-perturb")) cfg.perturbation.n_samples = n_perturb;
            if (report_cmd->count("--seed")) cfg.perturbation.seed = seed;
            if (report_cmd->count("--alpha")) cfg.weights.alpha = alpha;
            if (report_cmd->count("--beta")) cfg.weights.beta = beta;
            if (report_cmd->count("--lmin")) cfg.l_min = l_min;
            if (report_cmd->count("--timestamp-col")) cfg.timestamp_column = ts_col;
            if (!out.empty()) cfg.out_dir = out;
            if (emit_svg) cfg.emit_svg = true;
            if (cfg.input.empty()) throw ConfigError("report needs --input or --config");
            if (cfg.windows.empty()) throw ConfigError("report needs --windows");

            const CorpusReport rep = run_diagnostics(cfg);
            std::size_t failed = 0;
            for (const auto& s : rep.series) {
                if (!s.ok) {
                    ++failed;
                    std::cerr << "series " << s.series_id << " failed: " << s.error
                              << "\n";
                }
            }
            for (const auto& a : rep.aggregates)
                std::cout << a.name << ": " << fmt6(a.mean) << " ± " << fmt6(a.std)
                          << " (n=" << a.n << ")\n";
            std::cout << "report: " << cfg.out_dir << "/corpus_report.json\n";
            return failed == 0 ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
