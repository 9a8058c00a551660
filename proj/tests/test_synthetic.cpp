#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "taskdiag/distance.hpp"
#include "taskdiag/errors.hpp"
#include "taskdiag/profiles.hpp"
#include "taskdiag/synthetic.hpp"

using namespace taskdiag;

static const std::string kFixtures = TASKDIAG_FIXTURES_JSON;

TEST_CASE("changepoint generator") {
    SynthSpec spec;
    spec.t_steps = 100;
    spec.seed = 1;
    ChangepointParams p{.mu1 = 1.0, .mu2 = 3.0, .sigma = 0.0, .t_star1 = 30, .t_star2 = 70};
    spec.params = p;
    const Stream s = generate(spec);
    for (std::size_t t = 0; t < 100; ++t) {
        const double expect = (t >= 30 && t < 70) ? 3.0 : 1.0;
        CHECK(s.at(t, 0) == expect);
    }
    SUBCASE("noise-free regimes have W1 exactly |mu2 - mu1|") {
        const auto pre = task_distribution(s, {0, 30}, ChannelSelector::all());
        const auto mid = task_distribution(s, {30, 70}, ChannelSelector::all());
        CHECK(wasserstein1(pre, mid) == 2.0);
    }
}

TEST_CASE("periodic generator is exactly periodic without noise") {
    SynthSpec spec;
    spec.t_steps = 256;
    spec.seed = 0;
    spec.params = PeriodicParams{2.0 * M_PI / 64.0, 0.0};
    const Stream s = generate(spec);
    for (std::size_t t = 0; t + 64 < 256; ++t)
        CHECK(s.at(t + 64, 0) == doctest::Approx(s.at(t, 0)).epsilon(1e-12));
    SUBCASE("integer-period tasks have pairwise W1 zero") {
        Taskification tk{{0, 64, 128, 192, 256}, "p"};
        const auto m = pairwise_matrix(s, tk, ChannelSelector::all());
        for (double v : m.entries) CHECK(v < 1e-9);
    }
}

TEST_CASE("transient generator") {
    SynthSpec spec;
    spec.t_steps = 200;
    spec.seed = 3;
    TransientParams p;
    p.amplitude = 5.0;
    p.eta = 2.0;
    p.t_star1 = 60;
    p.t_star2 = 140;
    p.noise_sigma = 0.0;
    spec.params = p;
    const Stream s = generate(spec);
    // peak height at the centers, decayed to < 1.2% of A beyond 3 eta
    CHECK(s.at(60, 0) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(s.at(140, 0) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(s.at(100, 0) < 0.012 * 5.0);

    SUBCASE("zero amplitude leaves only the background") {
        p.amplitude = 0.0;
        p.background_constant = 2.0;
        p.background_slope = 0.01;
        spec.params = p;
        const Stream bg = generate(spec);
        for (std::size_t t = 0; t < 200; ++t)
            CHECK(bg.at(t, 0) == doctest::Approx(2.0 + 0.01 * t).epsilon(1e-12));
    }
}

TEST_CASE("generators are seed-deterministic") {
    SynthSpec spec;
    spec.t_steps = 500;
    spec.seed = 12345;
    spec.params = IidNoiseParams{1.0, 2.0};
    const Stream a = generate(spec);
    const Stream b = generate(spec);
    CHECK(a.values == b.values);

    spec.seed = 54321;
    const Stream c = generate(spec);
    CHECK(a.values != c.values);
}

TEST_CASE("piecewise regimes lengths must sum to t_steps") {
    SynthSpec spec;
    spec.t_steps = 100;
    spec.seed = 0;
    PiecewiseRegimesParams p;
    p.means = {0.0, 1.0};
    p.lengths = {50, 40};
    spec.params = p;
    CHECK_THROWS_AS(generate(spec), InvalidSpec);
    p.lengths = {50, 50};
    spec.params = p;
    const Stream s = generate(spec);
    CHECK(s.at(0, 0) == 0.0);
    CHECK(s.at(99, 0) == 1.0);
}

TEST_CASE("invalid specs are rejected") {
    SynthSpec spec;
    spec.t_steps = 100;
    spec.seed = 0;
    spec.params = ChangepointParams{.mu1 = 0, .mu2 = 1, .sigma = 0.1, .t_star1 = 70, .t_star2 = 30};
    CHECK_THROWS_AS(generate(spec), InvalidSpec);
    spec.params = PeriodicParams{0.0, 0.0};
    CHECK_THROWS_AS(generate(spec), InvalidSpec);
}

TEST_CASE("fragile fixtures load and validate") {
    for (auto c : {FixtureCase::changepoint, FixtureCase::transient, FixtureCase::periodic}) {
        const auto f = fragile_fixture(c, kFixtures);
        CHECK(f.stream.t_steps >= 2);
        CHECK(f.fragile.num_tasks() >= 2);
        CHECK(f.robust.num_tasks() >= 2);
        CHECK(f.perturbation.n_samples >= 1);
        // the same call reproduces the stream bitwise
        const auto g = fragile_fixture(c, kFixtures);
        CHECK(f.stream.values == g.stream.values);
    }
}

TEST_CASE("periodic fixture: full-period tasks have a near-zero stability profile") {
    const auto f = fragile_fixture(FixtureCase::periodic, kFixtures);
    const auto st = stability_profile(f.stream, f.robust, ChannelSelector::all(), 2);
    for (double v : st.values) CHECK(v < 1e-9);
}

TEST_CASE("changepoint fixture: fragile BPS dwarfs robust BPS") {
    const auto f = fragile_fixture(FixtureCase::changepoint, kFixtures);
    const auto frag =
        bps(f.stream, f.fragile, f.perturbation, {}, ChannelSelector::all(), 2, f.min_task_len);
    const auto rob =
        bps(f.stream, f.robust, f.perturbation, {}, ChannelSelector::all(), 2, f.min_task_len);
    CHECK(frag.bps_mean >= 5.0 * rob.bps_mean);
}

TEST_CASE("transient fixture with zero amplitude: fragile and robust agree") {
    auto f = fragile_fixture(FixtureCase::transient, kFixtures);
    auto spec = f.spec;
    std::get<TransientParams>(spec.params).amplitude = 0.0;
    const Stream flat = generate(spec);
    const auto frag =
        bps(flat, f.fragile, f.perturbation, {}, ChannelSelector::all(), 2, f.min_task_len);
    const auto rob =
        bps(flat, f.robust, f.perturbation, {}, ChannelSelector::all(), 2, f.min_task_len);
    const double spread = 2.0 * std::max(frag.bps_std, rob.bps_std);
    CHECK(std::abs(frag.bps_mean - rob.bps_mean) <= spread);
}
