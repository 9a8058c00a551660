#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ot_oracle.hpp"
#include "taskdiag/distance.hpp"
#include "taskdiag/errors.hpp"
#include "taskdiag/rng.hpp"
#include "taskdiag/synthetic.hpp"

using namespace taskdiag;

namespace {

EmpiricalDist dist(std::vector<double> v) { return EmpiricalDist(std::move(v)); }

std::vector<double> random_samples(Rng& rng, std::size_t max_n) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_n)));
    std::vector<double> v(n);
    for (auto& x : v) x = 10.0 * (rng.uniform01() - 0.5);
    return v;
}

Stream single_channel(std::vector<double> values) {
    Stream s;
    s.t_steps = values.size();
    s.values = std::move(values);
    s.channels = 1;
    s.step_seconds = 600;
    s.channel_names = {"x"};
    s.series_id = "test";
    return s;
}

}  // namespace

TEST_CASE("task_distribution sorts the interval samples") {
    const Stream s = single_channel({3, 1, 2});
    const auto d = task_distribution(s, {0, 3}, ChannelSelector::all());
    CHECK(d.samples() == std::vector<double>{1, 2, 3});
    const auto d1 = task_distribution(s, {1, 2}, ChannelSelector::all());
    CHECK(d1.samples() == std::vector<double>{1});
    CHECK_THROWS_AS(task_distribution(s, {2, 2}, ChannelSelector::all()), EmptyInterval);
    CHECK_THROWS_AS(task_distribution(s, {0, 4}, ChannelSelector::all()), EmptyInterval);
}

TEST_CASE("wasserstein1 basics") {
    CHECK(wasserstein1(dist({1, 2, 3}), dist({1, 2, 3})) == 0.0);
    CHECK(wasserstein1(dist({0}), dist({2.5})) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(wasserstein1(dist({0}), dist({-2.5})) == doctest::Approx(2.5).epsilon(1e-12));
    // quantile-matching hand computation
    CHECK(wasserstein1(dist({0, 0, 4}), dist({1, 1, 1})) ==
          doctest::Approx(testing::transport_lp_w1({0, 0, 4}, {1, 1, 1})).epsilon(1e-12));
}

TEST_CASE("wasserstein1 equals the transport LP optimum on small instances") {
    Rng rng(42);
    for (int it = 0; it < 300; ++it) {
        auto a = random_samples(rng, 8);
        auto b = random_samples(rng, 8);
        // dyadic inputs keep the flow oracle's cost arithmetic exact
        for (auto& x : a) x = testing::snap(x);
        for (auto& x : b) x = testing::snap(x);
        const double w = wasserstein1(dist(a), dist(b));
        const double lp = testing::transport_lp_w1(a, b);
        CHECK(std::abs(w - lp) < 1e-9);
    }
}

TEST_CASE("wasserstein1 equals mean order-statistic gap for equal counts") {
    Rng rng(7);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 20));
        std::vector<double> a(n), b(n);
        for (auto& x : a) x = rng.gaussian();
        for (auto& x : b) x = rng.gaussian();
        const auto da = dist(a);
        const auto db = dist(b);
        double mean_gap = 0;
        for (std::size_t i = 0; i < n; ++i)
            mean_gap += std::abs(da.samples()[i] - db.samples()[i]);
        mean_gap /= static_cast<double>(n);
        CHECK(wasserstein1(da, db) == doctest::Approx(mean_gap).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein1 translation and scale equivariance") {
    Rng rng(11);
    for (int it = 0; it < 50; ++it) {
        const auto a = random_samples(rng, 12);
        const double c = 5.0 * (rng.uniform01() - 0.5);
        std::vector<double> shifted = a;
        for (auto& x : shifted) x += c;
        CHECK(std::abs(wasserstein1(dist(a), dist(shifted)) - std::abs(c)) < 1e-9);

        const auto b = random_samples(rng, 12);
        const double scale = 0.1 + 3.0 * rng.uniform01();
        std::vector<double> sa = a, sb = b;
        for (auto& x : sa) x *= scale;
        for (auto& x : sb) x *= scale;
        CHECK(std::abs(wasserstein1(dist(sa), dist(sb)) -
                       scale * wasserstein1(dist(a), dist(b))) < 1e-9);
    }
}

TEST_CASE("wasserstein1 metric axioms") {
    Rng rng(99);
    for (int it = 0; it < 200; ++it) {
        const auto a = random_samples(rng, 6);
        const auto b = random_samples(rng, 6);
        const auto c = random_samples(rng, 6);
        const double ab = wasserstein1(dist(a), dist(b));
        const double ba = wasserstein1(dist(b), dist(a));
        const double ac = wasserstein1(dist(a), dist(c));
        const double cb = wasserstein1(dist(c), dist(b));
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - ba) < 1e-12);
        CHECK(ab <= ac + cb + 1e-9);
        CHECK(wasserstein1(dist(a), dist(a)) == 0.0);
    }
}

TEST_CASE("sliced_w1") {
    const auto p1 = dist({0, 1, 2});
    const auto p2 = dist({5, 6});
    SUBCASE("identical channel lists give zero") {
        CHECK(sliced_w1({p1, p2}, {p1, p2}) == 0.0);
    }
    SUBCASE("single channel equals wasserstein1") {
        CHECK(sliced_w1({p1}, {p2}) == doctest::Approx(wasserstein1(p1, p2)));
    }
    SUBCASE("per-channel shifts average") {
        auto q1 = dist({2, 3, 4});   // +2
        auto q2 = dist({4, 5});      // -1
        CHECK(sliced_w1({p1, p2}, {q1, q2}) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("channel count mismatch throws") {
        CHECK_THROWS_AS(sliced_w1({p1}, {p1, p2}), ChannelMismatch);
    }
}

TEST_CASE("pairwise_matrix structure") {
    SUBCASE("constant stream gives all-zero matrix") {
        const Stream s = single_channel(std::vector<double>(40, 5.0));
        Taskification tk{{0, 20, 40}, "half"};
        const auto m = pairwise_matrix(s, tk, ChannelSelector::all());
        CHECK(m.dims == 2);
        for (double v : m.entries) CHECK(v == 0.0);
    }
    SUBCASE("changepoint off-diagonal approximates the mean gap") {
        SynthSpec spec;
        spec.t_steps = 2000;
        spec.seed = 5;
        ChangepointParams p;
        p.mu1 = 0;
        p.mu2 = 2;
        p.sigma = 0.1;
        p.t_star1 = 1000;
        p.t_star2 = 2000;  // shift persists to the end
        spec.params = p;
        const Stream s = generate(spec);
        Taskification tk{{0, 1000, 2000}, "cp"};
        const auto m = pairwise_matrix(s, tk, ChannelSelector::all());
        // translation property; sampling error within 3 sigma / sqrt(n)
        CHECK(m.at(0, 1) == doctest::Approx(2.0).epsilon(3 * 0.1 / std::sqrt(1000.0)));
    }
    SUBCASE("symmetric with zero diagonal") {
        Rng rng(3);
        std::vector<double> v(90);
        for (auto& x : v) x = rng.gaussian();
        const Stream s = single_channel(v);
        Taskification tk{{0, 30, 60, 90}, "t"};
        const auto m = pairwise_matrix(s, tk, ChannelSelector::all());
        for (std::size_t i = 0; i < m.dims; ++i) {
            CHECK(m.at(i, i) == 0.0);
            for (std::size_t j = 0; j < m.dims; ++j) CHECK(m.at(i, j) == m.at(j, i));
        }
    }
    SUBCASE("task relabeling permutes rows and columns consistently") {
        Rng rng(17);
        std::vector<double> v(120);
        for (std::size_t t = 0; t < v.size(); ++t)
            v[t] = rng.gaussian() + (t > 60 ? 1.0 : 0.0);
        const Stream s = single_channel(v);
        Taskification tk{{0, 30, 60, 90, 120}, "t"};
        const auto m = pairwise_matrix(s, tk, ChannelSelector::all());
        // reversing the stream reverses task order; distances must follow
        std::vector<double> rv(v.rbegin(), v.rend());
        const Stream sr = single_channel(rv);
        const auto mr = pairwise_matrix(sr, tk, ChannelSelector::all());
        const std::size_t k = m.dims;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                CHECK(mr.at(i, j) ==
                      doctest::Approx(m.at(k - 1 - i, k - 1 - j)).epsilon(1e-12));
    }
}

TEST_CASE("upsample_matrix") {
    SUBCASE("identity at equal dims") {
        DistanceMatrix m = DistanceMatrix::zeros(3);
        m.at(0, 1) = m.at(1, 0) = 1.5;
        const auto u = upsample_matrix(m, 3);
        CHECK(u.entries == m.entries);
    }
    SUBCASE("downsampling is rejected") {
        CHECK_THROWS_AS(upsample_matrix(DistanceMatrix::zeros(4), 3), Downsample);
    }
    SUBCASE("constant off-diagonal: corners exact, entries bounded") {
        const double c = 2.0;
        DistanceMatrix m = DistanceMatrix::zeros(2);
        m.at(0, 1) = m.at(1, 0) = c;
        const auto u = upsample_matrix(m, 4);
        CHECK(u.at(0, 3) == doctest::Approx(c).epsilon(1e-12));
        CHECK(u.at(3, 0) == doctest::Approx(c).epsilon(1e-12));
        for (double v : u.entries) {
            CHECK(v >= 0.0);
            CHECK(v <= c + 1e-12);
        }
    }
    SUBCASE("2x2 to 3x3 matches the hand-computed bilinear stencil") {
        DistanceMatrix m = DistanceMatrix::zeros(2);
        m.at(0, 1) = m.at(1, 0) = 1.0;
        const auto u = upsample_matrix(m, 3);
        // row 0 maps to source row 0; middle column sits halfway between cols
        CHECK(u.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(u.at(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(u.at(1, 1) == 0.0);  // diagonal re-zeroed
        // symmetry preserved
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(u.at(i, j) == u.at(j, i));
    }
}

TEST_CASE("matrix_mse") {
    DistanceMatrix a = DistanceMatrix::zeros(2);
    DistanceMatrix b = DistanceMatrix::zeros(2);
    CHECK(matrix_mse(a, a) == 0.0);
    const double c = 3.0;
    b.at(0, 1) = b.at(1, 0) = c;
    CHECK(matrix_mse(a, b) == doctest::Approx(2 * c * c / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(matrix_mse(a, DistanceMatrix::zeros(3)), DimMismatch);

    const auto d = matrix_abs_diff(a, b);
    CHECK(d.at(0, 1) == c);
    CHECK(d.at(0, 0) == 0.0);
}

TEST_CASE("window-length mismatch drives matrix MSE ordering") {
    // piecewise regimes whose length matches the 44-step scale: the 9-step
    // split fragments regimes, the 30-step split tracks them loosely
    SynthSpec spec;
    spec.t_steps = 880;
    spec.seed = 77;
    PiecewiseRegimesParams p;
    for (int r = 0; r < 20; ++r) {
        p.means.push_back(r % 2 == 0 ? 0.0 : 2.0);
        p.lengths.push_back(44);
    }
    p.sigma = 0.05;
    spec.params = p;
    const Stream s = generate(spec);

    auto matrix_for = [&](std::size_t w) {
        Taskification tk;
        for (std::size_t b = 0; b < s.t_steps; b += w) tk.boundaries.push_back(b);
        tk.boundaries.push_back(s.t_steps);
        if (tk.boundaries[tk.boundaries.size() - 2] == s.t_steps)
            tk.boundaries.pop_back();
        tk.label = std::to_string(w);
        return pairwise_matrix(s, tk, ChannelSelector::all());
    };
    const auto m9 = matrix_for(9);
    const auto m30 = matrix_for(30);
    const auto m44 = matrix_for(44);
    const std::size_t target = m9.dims;
    const double mse_9_44 = matrix_mse(upsample_matrix(m9, target), upsample_matrix(m44, target));
    const double mse_30_44 = matrix_mse(upsample_matrix(m30, target), upsample_matrix(m44, target));
    CHECK(mse_9_44 > mse_30_44);
}
