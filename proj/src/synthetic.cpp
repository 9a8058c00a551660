#include "taskdiag/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "taskdiag/errors.hpp"
#include "taskdiag/rng.hpp"

namespace taskdiag {

namespace {

using nlohmann::json;

Stream make_stream(std::vector<double> values, const SynthSpec& spec,
                   const std::string& id) {
    Stream s;
    s.values = std::move(values);
    s.t_steps = spec.t_steps;
    s.channels = 1;
    s.step_seconds = spec.step_seconds;
    s.start_time = 0;
    s.channel_names = {"x"};
    s.series_id = id;
    validate(s);
    return s;
}

json load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open fixtures file " + path);
    return json::parse(in);
}

Taskification tk_from_json(const json& j, const std::string& label) {
    Taskification tk;
    tk.label = label;
    for (const auto& b : j) tk.boundaries.push_back(b.get<std::size_t>());
    return tk;
}

}  // namespace

Stream generate(const SynthSpec& spec) {
    if (spec.t_steps < 2) throw InvalidSpec("t_steps must be at least 2");
    if (spec.step_seconds <= 0) throw InvalidSpec("step_seconds must be positive");
    std::vector<double> x(spec.t_steps);
    Rng rng(spec.seed);

    if (const auto* p = std::get_if<ChangepointParams>(&spec.params)) {
        if (!(p->t_star1 < p->t_star2 && p->t_star2 <= spec.t_steps) || p->sigma < 0)
            throw InvalidSpec("changepoint times must satisfy t1 < t2 <= T");
        for (std::size_t t = 0; t < spec.t_steps; ++t) {
            const double mu =
                (t >= p->t_star1 && t < p->t_star2) ? p->mu2 : p->mu1;
            x[t] = mu + p->sigma * rng.gaussian();
        }
        return make_stream(std::move(x), spec, "synth-changepoint");
    }
    if (const auto* p = std::get_if<TransientParams>(&spec.params)) {
        if (!(p->t_star1 < p->t_star2 && p->t_star2 < spec.t_steps) || p->eta <= 0)
            throw InvalidSpec("transient centers must satisfy 0 < t1 < t2 < T, eta > 0");
        for (std::size_t t = 0; t < spec.t_steps; ++t) {
            const double td = static_cast<double>(t);
            const double d1 = td - static_cast<double>(p->t_star1);
            const double d2 = td - static_cast<double>(p->t_star2);
            x[t] = p->background_constant + p->background_slope * td +
                   p->amplitude * std::exp(-d1 * d1 / (2 * p->eta * p->eta)) +
                   p->amplitude * std::exp(-d2 * d2 / (2 * p->eta * p->eta)) +
                   p->noise_sigma * rng.gaussian();
        }
        return make_stream(std::move(x), spec, "synth-transient");
    }
    if (const auto* p = std::get_if<PeriodicParams>(&spec.params)) {
        if (p->omega <= 0 || p->noise_sigma < 0)
            throw InvalidSpec("omega must be positive");
        for (std::size_t t = 0; t < spec.t_steps; ++t)
            x[t] = std::sin(p->omega * static_cast<double>(t)) +
                   p->noise_sigma * rng.gaussian();
        return make_stream(std::move(x), spec, "synth-periodic");
    }
    if (const auto* p = std::get_if<IidNoiseParams>(&spec.params)) {
        if (p->sigma < 0) throw InvalidSpec("sigma must be non-negative");
        for (std::size_t t = 0; t < spec.t_steps; ++t)
            x[t] = p->mean + p->sigma * rng.gaussian();
        return make_stream(std::move(x), spec, "synth-iid-noise");
    }
    const auto& p = std::get<PiecewiseRegimesParams>(spec.params);
    if (p.means.empty() || p.means.size() != p.lengths.size())
        throw InvalidSpec("means and lengths must be non-empty and equal-sized");
    const std::size_t total =
        std::accumulate(p.lengths.begin(), p.lengths.end(), std::size_t{0});
    if (total != spec.t_steps)
        throw InvalidSpec("regime lengths sum to " + std::to_string(total) +
                          ", expected t_steps = " + std::to_string(spec.t_steps));
    std::size_t t = 0;
    for (std::size_t r = 0; r < p.means.size(); ++r)
        for (std::size_t k = 0; k < p.lengths[r]; ++k, ++t)
            x[t] = p.means[r] + p.sigma * rng.gaussian();
    return make_stream(std::move(x), spec, "synth-regimes");
}

FragileFixture fragile_fixture(FixtureCase c, const std::string& fixtures_json_path) {
    const json root = load_fixtures(fixtures_json_path);
    FragileFixture f;
    const char* key = c == FixtureCase::changepoint ? "changepoint"
                      : c == FixtureCase::transient ? "transient"
                                                    : "periodic";
    const json& j = root.at(key);

    SynthSpec spec;
    spec.t_steps = j.at("t_steps").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.step_seconds = j.at("step_seconds").get<std::int64_t>();
    switch (c) {
        case FixtureCase::changepoint: {
            ChangepointParams p;
            p.mu1 = j.at("mu1");
            p.mu2 = j.at("mu2");
            p.sigma = j.at("sigma");
            p.t_star1 = j.at("t_star1");
            p.t_star2 = j.at("t_star2");
            spec.params = p;
            break;
        }
        case FixtureCase::transient: {
            TransientParams p;
            p.amplitude = j.at("amplitude");
            p.eta = j.at("eta");
            p.t_star1 = j.at("t_star1");
            p.t_star2 = j.at("t_star2");
            p.background_constant = j.at("background_constant");
            p.background_slope = j.at("background_slope");
            p.noise_sigma = j.at("noise_sigma");
            spec.params = p;
            break;
        }
        case FixtureCase::periodic: {
            PeriodicParams p;
            p.omega = 2.0 * M_PI / j.at("period_steps").get<double>();
            p.noise_sigma = j.at("noise_sigma");
            spec.params = p;
            break;
        }
    }
    f.stream = generate(spec);
    f.spec = spec;
    f.fragile = tk_from_json(j.at("fragile_boundaries"), std::string(key) + "-fragile");
    f.robust = tk_from_json(j.at("robust_boundaries"), std::string(key) + "-robust");
    f.min_task_len = j.at("min_task_len").get<std::size_t>();
    f.perturbation.delta_steps = j.at("delta_steps").get<std::size_t>();
    f.perturbation.n_samples = j.at("n_samples").get<std::size_t>();
    f.perturbation.seed = j.at("perturb_seed").get<std::uint64_t>();
    validate(f.fragile, f.stream.t_steps, f.min_task_len);
    validate(f.robust, f.stream.t_steps, f.min_task_len);
    return f;
}

Stream regimes_fixture(const std::string& fixtures_json_path) {
    const json root = load_fixtures(fixtures_json_path);
    const json& j = root.at("piecewise_regimes");
    SynthSpec spec;
    spec.t_steps = j.at("t_steps").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.step_seconds = j.at("step_seconds").get<std::int64_t>();
    PiecewiseRegimesParams p;
    p.sigma = j.at("sigma");
    for (const auto& m : j.at("means")) p.means.push_back(m.get<double>());
    const std::size_t spd = static_cast<std::size_t>(86400 / spec.step_seconds);
    for (const auto& d : j.at("lengths_days"))
        p.lengths.push_back(d.get<std::size_t>() * spd);
    spec.params = p;
    return generate(spec);
}

}  // namespace taskdiag
