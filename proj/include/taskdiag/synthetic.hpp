#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "taskdiag/stream.hpp"
#include "taskdiag/taskify.hpp"

namespace taskdiag {

struct ChangepointParams {
    double mu1 = 0, mu2 = 1, sigma = 0.1;
    std::size_t t_star1 = 0, t_star2 = 0;  // regime N(mu2) on [t_star1, t_star2)
};

struct TransientParams {
    double amplitude = 1, eta = 1;
    std::size_t t_star1 = 0, t_star2 = 0;
    double background_constant = 0;  // g(t) = c + slope * t
    double background_slope = 0;
    double noise_sigma = 0;
};

struct PeriodicParams {
    double omega = 0;  // x_t = sin(omega * t) + noise
    double noise_sigma = 0;
};

struct IidNoiseParams {
    double mean = 0, sigma = 1;
};

struct PiecewiseRegimesParams {
    std::vector<double> means;
    std::vector<std::size_t> lengths;  // per-regime step counts, same size as means
    double sigma = 0;
};

struct SynthSpec {
    std::size_t t_steps = 0;
    std::uint64_t seed = 0;
    std::int64_t step_seconds = 600;
    std::variant<ChangepointParams, TransientParams, PeriodicParams, IidNoiseParams,
                 PiecewiseRegimesParams>
        params;
};

/// Single-channel stream from the generator parameters. Deterministic given
/// the seed.
Stream generate(const SynthSpec& spec);

enum class FixtureCase { changepoint, transient, periodic };

/// A canonical seeded stream with one structurally fragile and one robust
/// taskification of it. Parameters come from the versioned fixtures JSON.
struct FragileFixture {
    Stream stream;
    SynthSpec spec;  // the generator inputs, for param-override experiments
    Taskification fragile;
    Taskification robust;
    std::size_t min_task_len = 0;
    PerturbationSpec perturbation;  // default delta/n/seed recorded in the JSON
};

FragileFixture fragile_fixture(FixtureCase c, const std::string& fixtures_json_path);

/// The 278-day piecewise-regimes corpus stream used for the window-length
/// sensitivity checks; parameters also live in the fixtures JSON.
Stream regimes_fixture(const std::string& fixtures_json_path);

}  // namespace taskdiag
