#include "taskdiag/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "taskdiag/errors.hpp"

namespace taskdiag {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out;
    bool last_us = false;
    for (unsigned char ch : s) {
        if (std::isalnum(ch) || ch == '.' || ch == '-' || ch == '_') {
            out.push_back(static_cast<char>(ch));
            last_us = false;
        } else if (!last_us) {
            out.push_back('_');
            last_us = true;
        }
    }
    return out;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::size_t worker_limit() {
    if (const char* env = std::getenv("TASKDIAG_THREADS")) {
        const long n = std::atol(env);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

json bps_to_json_obj(const BpsReport& r) {
    json j;
    j["plasticity_mean"] = r.plasticity_mean;
    j["plasticity_std"] = r.plasticity_std;
    j["stability_mean"] = r.stability_mean;
    j["stability_std"] = r.stability_std;
    j["bps_mean"] = r.bps_mean;
    j["bps_std"] = r.bps_std;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["delta_steps"] = r.delta_steps;
    j["l_min"] = r.l_min;
    j["rejected_draws"] = r.rejected_draws;
    j["per_sample_plasticity"] = r.per_sample_plasticity;
    j["per_sample_stability"] = r.per_sample_stability;
    j["per_sample_bps"] = r.per_sample_bps;
    // implemented reading: the Plasticity/Stability rows are
    // perturbation-averaged profile-component distances
    j["component_semantics"] = "perturbation-averaged D_pl and D_st";
    return j;
}

BpsReport bps_from_json_obj(const json& j) {
    BpsReport r;
    r.plasticity_mean = j.at("plasticity_mean");
    r.plasticity_std = j.at("plasticity_std");
    r.stability_mean = j.at("stability_mean");
    r.stability_std = j.at("stability_std");
    r.bps_mean = j.at("bps_mean");
    r.bps_std = j.at("bps_std");
    r.n_samples = j.at("n_samples");
    r.seed = j.at("seed");
    r.delta_steps = j.at("delta_steps");
    r.l_min = j.at("l_min");
    r.rejected_draws = j.at("rejected_draws");
    r.per_sample_plasticity = j.at("per_sample_plasticity").get<std::vector<double>>();
    r.per_sample_stability = j.at("per_sample_stability").get<std::vector<double>>();
    r.per_sample_bps = j.at("per_sample_bps").get<std::vector<double>>();
    return r;
}

json diagnostic_config_json(const RunConfig& c) {
    // out_dir and emit_svg do not influence the computed numbers and are
    // excluded from the hash
    json j;
    j["input"] = fs::path(c.input).filename().string();
    j["channel"] = c.channel;
    j["windows"] = c.windows;
    j["shift_days"] = c.shift_days;
    j["delta_days"] = c.delta_days;
    j["delta_steps"] = c.perturbation.delta_steps;
    j["n_perturb"] = c.perturbation.n_samples;
    j["seed"] = c.perturbation.seed;
    j["alpha"] = c.weights.alpha;
    j["beta"] = c.weights.beta;
    j["l_min"] = c.l_min;
    return j;
}

struct SeriesInput {
    std::string series_id;
    std::string path;
};

std::vector<SeriesInput> resolve_inputs(const RunConfig& c) {
    std::vector<SeriesInput> out;
    const fs::path p(c.input);
    if (p.extension() == ".json") {
        std::ifstream in(p);
        if (!in) throw ConfigError("cannot open manifest " + c.input);
        json manifest = json::parse(in);
        const json& list = manifest.is_array() ? manifest : manifest.at("series");
        for (const auto& e : list) {
            SeriesInput si;
            si.series_id = e.at("series_id");
            fs::path sp = e.at("path").get<std::string>();
            if (sp.is_relative()) sp = p.parent_path() / sp;
            si.path = sp.string();
            out.push_back(si);
        }
        if (out.empty()) throw ConfigError("manifest lists no series");
    } else {
        out.push_back({p.stem().string(), c.input});
    }
    return out;
}

struct MeanStd {
    double mean = 0, std = 0;
};

MeanStd agg(const std::vector<double>& v) {
    MeanStd ms;
    if (v.empty()) return ms;
    for (double x : v) ms.mean += x;
    ms.mean /= static_cast<double>(v.size());
    if (v.size() < 2) return ms;
    double var = 0;
    for (double x : v) {
        const double d = x - ms.mean;
        var += d * d;
    }
    ms.std = std::sqrt(var / static_cast<double>(v.size() - 1));
    return ms;
}

std::vector<AggregateStat> compute_aggregates(const std::vector<SeriesResult>& series) {
    // stable key order: first-seen order of labels across ok series
    std::vector<std::string> stat_names;
    std::vector<std::vector<double>> stat_values;
    auto push = [&](const std::string& name, double v) {
        auto it = std::find(stat_names.begin(), stat_names.end(), name);
        std::size_t idx;
        if (it == stat_names.end()) {
            stat_names.push_back(name);
            stat_values.emplace_back();
            idx = stat_names.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - stat_names.begin());
        }
        stat_values[idx].push_back(v);
    };
    for (const auto& s : series) {
        if (!s.ok) continue;
        for (const auto& v : s.variants) {
            push("plasticity[" + v.label + "]", v.bps.plasticity_mean);
            push("stability[" + v.label + "]", v.bps.stability_mean);
            push("bps[" + v.label + "]", v.bps.bps_mean);
        }
        for (const auto& pr : s.pairs) {
            push("d_prof[" + pr.label_a + "," + pr.label_b + "]", pr.d_prof);
            push("matrix_mse[" + pr.label_a + "," + pr.label_b + "]", pr.matrix_mse);
        }
    }
    std::vector<AggregateStat> out;
    for (std::size_t i = 0; i < stat_names.size(); ++i) {
        const auto ms = agg(stat_values[i]);
        out.push_back({stat_names[i], ms.mean, ms.std, stat_values[i].size()});
    }
    return out;
}

SeriesResult process_series(const SeriesInput& si, const RunConfig& c) {
    SeriesResult res;
    res.series_id = si.series_id;
    try {
        CsvSchema schema;
        schema.timestamp_column = c.timestamp_column;
        Stream stream = load_csv(si.path, schema);
        stream.series_id = si.series_id;
        const ChannelSelector sel = c.channel.empty()
                                        ? ChannelSelector::all()
                                        : ChannelSelector::single(c.channel);
        const std::size_t spd = steps_per_day(stream);

        PerturbationSpec spec = c.perturbation;
        if (spec.delta_steps == 0) spec.delta_steps = c.delta_days * spd;

        struct Variant {
            Taskification tk;
            DistanceMatrix matrix;
        };
        std::vector<Variant> variants;
        for (std::size_t w : c.windows) {
            Taskification tk = fixed_length(stream, w);
            if (c.shift_days != 0) tk = shift(tk, c.shift_days, stream);
            Variant v;
            v.matrix = pairwise_matrix(stream, tk, sel);
            v.tk = std::move(tk);
            variants.push_back(std::move(v));
        }

        const fs::path series_dir = fs::path(c.out_dir) / sanitize(si.series_id);
        fs::create_directories(series_dir);

        for (const auto& v : variants) {
            const std::string base = sanitize(v.tk.label);
            write_matrix_csv(v.matrix, (series_dir / (base + "_matrix.csv")).string());
            if (c.emit_svg)
                emit_heatmap(v.matrix, (series_dir / (base + "_matrix.svg")).string());

            const Profile pl = plasticity_profile(stream, v.tk, sel);
            const Profile st = stability_profile(stream, v.tk, sel, c.l_min);
            json pj;
            pj["label"] = v.tk.label;
            pj["plasticity"] = pl.values;
            pj["stability"] = st.values;
            pj["l_min"] = c.l_min;
            std::ofstream pout(series_dir / (base + "_profiles.json"));
            pout << pj.dump(2) << '\n';

            VariantResult vr;
            vr.label = v.tk.label;
            vr.num_tasks = v.tk.num_tasks();
            vr.bps = bps(stream, v.tk, spec, c.weights, sel, c.l_min);
            std::ofstream bout(series_dir / (base + "_bps.json"));
            bout << bps_report_to_json(vr.bps) << '\n';
            res.variants.push_back(std::move(vr));
        }

        // pairwise profile distances and the upsampled-matrix MSE grid
        std::size_t max_dim = 0;
        for (const auto& v : variants) max_dim = std::max(max_dim, v.matrix.dims);
        for (std::size_t a = 0; a < variants.size(); ++a) {
            for (std::size_t b = a + 1; b < variants.size(); ++b) {
                PairResult pr;
                pr.label_a = variants[a].tk.label;
                pr.label_b = variants[b].tk.label;
                pr.d_prof = d_prof(stream, variants[a].tk, variants[b].tk, c.weights,
                                   sel, c.l_min);
                const DistanceMatrix ua = upsample_matrix(variants[a].matrix, max_dim);
                const DistanceMatrix ub = upsample_matrix(variants[b].matrix, max_dim);
                pr.matrix_mse = matrix_mse(ua, ub);
                if (c.emit_svg) {
                    const std::string name = "diff_" + sanitize(pr.label_a) + "_vs_" +
                                             sanitize(pr.label_b) + ".svg";
                    emit_heatmap(matrix_abs_diff(ua, ub), (series_dir / name).string());
                }
                res.pairs.push_back(std::move(pr));
            }
        }
        res.ok = true;
    } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
    }
    return res;
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    RunConfig c;
    c.input = j.at("input");
    c.channel = j.value("channel", std::string{});
    c.windows = j.at("windows").get<std::vector<std::size_t>>();
    c.shift_days = j.value("shift_days", std::int64_t{0});
    c.delta_days = j.value("delta_days", std::size_t{1});
    c.perturbation.delta_steps = j.value("delta_steps", std::size_t{0});
    c.perturbation.n_samples = j.value("n_perturb", std::size_t{64});
    c.perturbation.seed = j.value("seed", std::uint64_t{0});
    c.weights.alpha = j.value("alpha", 0.5);
    c.weights.beta = j.value("beta", 0.5);
    c.l_min = j.value("l_min", kDefaultLMin);
    c.timestamp_column = j.value("timestamp_column", std::string{"id_time"});
    c.out_dir = j.value("out_dir", std::string{"out"});
    c.emit_svg = j.value("emit_svg", false);
    if (c.windows.empty()) throw ConfigError("windows must be non-empty");
    return c;
}

CorpusReport run_diagnostics(const RunConfig& config) {
    const auto inputs = resolve_inputs(config);
    fs::create_directories(config.out_dir);

    std::vector<SeriesResult> results(inputs.size());
    const std::size_t workers = std::min(worker_limit(), inputs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i)
            results[i] = process_series(inputs[i], config);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < inputs.size(); i += workers)
                    results[i] = process_series(inputs[i], config);
            });
        }
        for (auto& t : pool) t.join();
    }

    CorpusReport report;
    report.tool_version = tool_version();
    report.config_hash = fnv1a_hex(diagnostic_config_json(config).dump());
    report.series = std::move(results);
    report.aggregates = compute_aggregates(report.series);

    write_corpus_report(report, (fs::path(config.out_dir) / "corpus_report.json").string());
    return report;
}

void write_corpus_report(const CorpusReport& report, const std::string& path) {
    json j;
    j["tool_version"] = report.tool_version;
    j["config_hash"] = report.config_hash;
    json series = json::array();
    for (const auto& s : report.series) {
        json sj;
        sj["series_id"] = s.series_id;
        sj["ok"] = s.ok;
        if (!s.ok) sj["error"] = s.error;
        json variants = json::array();
        for (const auto& v : s.variants) {
            json vj;
            vj["label"] = v.label;
            vj["num_tasks"] = v.num_tasks;
            vj["bps"] = bps_to_json_obj(v.bps);
            variants.push_back(vj);
        }
        sj["variants"] = variants;
        json pairs = json::array();
        for (const auto& p : s.pairs) {
            json pj;
            pj["label_a"] = p.label_a;
            pj["label_b"] = p.label_b;
            pj["d_prof"] = p.d_prof;
            pj["matrix_mse"] = p.matrix_mse;
            pairs.push_back(pj);
        }
        sj["pairs"] = pairs;
        series.push_back(sj);
    }
    j["series"] = series;
    json aggs = json::array();
    for (const auto& a : report.aggregates) {
        json aj;
        aj["name"] = a.name;
        aj["mean"] = a.mean;
        aj["std"] = a.std;
        aj["n"] = a.n;
        aggs.push_back(aj);
    }
    j["aggregates"] = aggs;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
}

CorpusReport load_corpus_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    const json j = json::parse(in);
    CorpusReport report;
    report.tool_version = j.at("tool_version");
    report.config_hash = j.at("config_hash");
    for (const auto& sj : j.at("series")) {
        SeriesResult s;
        s.series_id = sj.at("series_id");
        s.ok = sj.at("ok");
        if (!s.ok) s.error = sj.value("error", std::string{});
        for (const auto& vj : sj.at("variants")) {
            VariantResult v;
            v.label = vj.at("label");
            v.num_tasks = vj.at("num_tasks");
            v.bps = bps_from_json_obj(vj.at("bps"));
            s.variants.push_back(std::move(v));
        }
        for (const auto& pj : sj.at("pairs")) {
            PairResult p;
            p.label_a = pj.at("label_a");
            p.label_b = pj.at("label_b");
            p.d_prof = pj.at("d_prof");
            p.matrix_mse = pj.at("matrix_mse");
            s.pairs.push_back(std::move(p));
        }
        report.series.push_back(std::move(s));
    }
    for (const auto& aj : j.at("aggregates"))
        report.aggregates.push_back(
            {aj.at("name"), aj.at("mean"), aj.at("std"), aj.at("n")});

    // self-consistency: stored aggregates must match a recomputation
    const auto recomputed = compute_aggregates(report.series);
    if (recomputed.size() != report.aggregates.size())
        throw IoError(path + ": aggregate set does not match per-series values");
    for (std::size_t i = 0; i < recomputed.size(); ++i) {
        const auto& a = report.aggregates[i];
        const auto& b = recomputed[i];
        if (a.name != b.name || a.n != b.n || std::abs(a.mean - b.mean) > 1e-9 ||
            std::abs(a.std - b.std) > 1e-9)
            throw IoError(path + ": aggregate '" + a.name +
                          "' is inconsistent with per-series values");
    }
    return report;
}

void emit_heatmap(const DistanceMatrix& m, const std::string& path) {
    const std::size_t k = m.dims;
    double lo = m.entries.empty() ? 0.0 : m.entries[0];
    double hi = lo;
    for (double v : m.entries) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    constexpr int cell = 24;
    constexpr int margin = 4;
    constexpr int footer = 18;
    const int size = static_cast<int>(k) * cell + 2 * margin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size + footer << "\">\n";
    // linear ramp from dark blue (min) to warm yellow (max)
    const int lo_rgb[3] = {27, 42, 74};
    const int hi_rgb[3] = {245, 213, 72};
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            const double t = (m.at(r, c) - lo) / span;
            char color[8];
            std::snprintf(color, sizeof color, "#%02x%02x%02x",
                          static_cast<int>(std::lround(lo_rgb[0] + t * (hi_rgb[0] - lo_rgb[0]))),
                          static_cast<int>(std::lround(lo_rgb[1] + t * (hi_rgb[1] - lo_rgb[1]))),
                          static_cast<int>(std::lround(lo_rgb[2] + t * (hi_rgb[2] - lo_rgb[2]))));
            svg << "<rect x=\"" << margin + static_cast<int>(c) * cell << "\" y=\""
                << margin + static_cast<int>(r) * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << color << "\"/>\n";
        }
    }
    svg << "<text x=\"" << margin << "\" y=\"" << size + footer - 5
        << "\" font-size=\"10\" font-family=\"monospace\">min=" << fmt6(lo)
        << " max=" << fmt6(hi) << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << svg.str();
}

void write_matrix_csv(const DistanceMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[64];
    for (std::size_t r = 0; r < m.dims; ++r) {
        for (std::size_t c = 0; c < m.dims; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m.at(r, c));
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

std::string format_bps_table(const BpsReport& r) {
    std::ostringstream os;
    auto row = [&](const char* name, double mean, double std) {
        os << name << " " << fmt6(mean) << " ± " << fmt6(std) << "\n";
    };
    row("Plasticity", r.plasticity_mean, r.plasticity_std);
    row("Stability ", r.stability_mean, r.stability_std);
    row("BPS       ", r.bps_mean, r.bps_std);
    os << "(n_samples=" << r.n_samples << " delta_steps=" << r.delta_steps
       << " l_min=" << r.l_min << " seed=" << r.seed << ")\n";
    return os.str();
}

std::string taskification_to_json(const Taskification& tk, std::size_t steps_per_day) {
    json j;
    j["label"] = tk.label;
    j["boundaries"] = tk.boundaries;
    j["steps_per_day"] = steps_per_day;
    return j.dump(2);
}

Taskification taskification_from_json(const std::string& text) {
    const json j = json::parse(text);
    Taskification tk;
    tk.label = j.at("label");
    tk.boundaries = j.at("boundaries").get<std::vector<std::size_t>>();
    return tk;
}

std::string bps_report_to_json(const BpsReport& r) { return bps_to_json_obj(r).dump(2); }

std::string tool_version() { return "0.1.0"; }

}  // namespace taskdiag
