#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "taskdiag/errors.hpp"
#include "taskdiag/rng.hpp"
#include "taskdiag/taskify.hpp"

using namespace taskdiag;

namespace {

// days long stream at `spd` steps/day filled with zeros
Stream day_stream(std::size_t days, std::int64_t step_seconds = 600) {
    Stream s;
    s.step_seconds = step_seconds;
    const std::size_t spd = static_cast<std::size_t>(86400 / step_seconds);
    s.t_steps = days * spd;
    s.channels = 1;
    s.channel_names = {"x"};
    s.values.assign(s.t_steps, 0.0);
    s.series_id = "days";
    return s;
}

}  // namespace

TEST_CASE("fixed_length boundary arithmetic") {
    const Stream s = day_stream(280, 600);  // 144 steps/day
    const auto tk = fixed_length(s, 44);
    // oracle: boundaries at day multiples of 44, final partial day-16 window kept
    std::vector<std::size_t> expect;
    for (std::size_t d = 0; d < 280; d += 44) expect.push_back(d * 144);
    expect.push_back(280 * 144);
    CHECK(tk.boundaries == expect);
    CHECK(tk.num_tasks() == (280 + 43) / 44);
    CHECK(tk.label == "44d");
}

TEST_CASE("fixed_length simple splits and errors") {
    const Stream s = day_stream(18, 600);
    const auto tk = fixed_length(s, 9);
    CHECK(tk.boundaries == std::vector<std::size_t>{0, 9 * 144, 18 * 144});
    CHECK(tk.num_tasks() == 2);

    CHECK_THROWS_AS(fixed_length(day_stream(280), 300), WindowTooLong);
    CHECK_THROWS_AS(fixed_length(day_stream(280), 0), WindowTooShort);
}

TEST_CASE("fixed_length merges a sub-daily final partial window") {
    // 280 steps/day-ish: use 10 steps/day so partials are easy to force
    const Stream s = day_stream(19, 8640);  // 10 steps/day, 190 steps
    // window 9 days: full windows at 0,90,180; remainder 10 steps = 1 day = min
    const auto kept = fixed_length(s, 9);
    CHECK(kept.boundaries == std::vector<std::size_t>{0, 90, 180, 190});
    // with a larger min_task_len the final 1-day partial merges into the last task
    const auto merged = fixed_length(s, 9, 20);
    CHECK(merged.boundaries == std::vector<std::size_t>{0, 90, 190});
}

TEST_CASE("shift moves internal boundaries only") {
    const Stream s = day_stream(18, 600);
    const auto tk = fixed_length(s, 9);
    const auto shifted = shift(tk, 2, s);
    CHECK(shifted.boundaries == std::vector<std::size_t>{0, 11 * 144, 18 * 144});
    CHECK(shifted.label == "9d+Δ2d");

    const auto id = shift(tk, 0, s);
    CHECK(id.boundaries == tk.boundaries);
    CHECK(id.label == tk.label);

    // +d then -d returns to the original boundaries
    const auto back = shift(shift(tk, 2, s), -2, s);
    CHECK(back.boundaries == tk.boundaries);
}

TEST_CASE("shift that breaks ordering is rejected") {
    const Stream s = day_stream(20, 8640);  // 200 steps, 10/day
    Taskification tk{{0, 15, 100, 200}, "tight"};
    CHECK_THROWS_AS(shift(tk, -1, s, 10), InvalidShift);  // first task drops below min
    CHECK_THROWS_AS(shift(tk, 11, s, 5), InvalidShift);   // pushes past the end
}

TEST_CASE("task_intervals tile the stream") {
    Taskification tk{{0, 3, 7}, "t"};
    const auto iv = task_intervals(tk);
    REQUIRE(iv.size() == 2);
    CHECK(iv[0] == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(iv[1] == std::pair<std::size_t, std::size_t>{3, 7});

    Taskification single{{0, 7}, "s"};
    CHECK(task_intervals(single).size() == 1);
}

TEST_CASE("window lengths congruent to 2 mod 7 preserve weekday alignment") {
    const Stream s = day_stream(278, 600);
    for (std::size_t w : {9u, 30u, 44u}) {
        CHECK(w % 7 == 2);
        const auto tk = fixed_length(s, w);
        const std::size_t spd = steps_per_day(s);
        for (std::size_t k = 0; k + 1 < tk.boundaries.size(); ++k) {
            if (k + 2 == tk.boundaries.size() && tk.boundaries[k] % (w * spd) != 0)
                continue;  // short final task starts off-pattern
            const std::size_t start_day = tk.boundaries[k] / spd;
            CHECK(start_day % 7 == (2 * k) % 7);
        }
    }
}

TEST_CASE("sample_neighborhood determinism and displacement bound") {
    const Stream s = day_stream(30, 8640);  // 300 steps
    const auto tk = fixed_length(s, 10);    // boundaries 0,100,200,300
    PerturbationSpec spec{.delta_steps = 7, .n_samples = 32, .seed = 123};
    const auto a = sample_neighborhood(tk, spec, s);
    const auto b = sample_neighborhood(tk, spec, s);
    REQUIRE(a.size() == 32);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].boundaries == b[i].boundaries);
    for (const auto& sigma : a) {
        CHECK(sigma.boundaries.front() == 0);
        CHECK(sigma.boundaries.back() == 300);
        for (std::size_t k = 1; k + 1 < sigma.boundaries.size(); ++k) {
            const auto d = static_cast<std::int64_t>(sigma.boundaries[k]) -
                           static_cast<std::int64_t>(tk.boundaries[k]);
            CHECK(d >= -7);
            CHECK(d <= 7);
        }
        // intervals tile the stream
        const auto iv = task_intervals(sigma);
        std::size_t covered = 0;
        for (const auto& [lo, hi] : iv) {
            CHECK(lo == covered);
            covered = hi;
        }
        CHECK(covered == 300);
    }
}

TEST_CASE("sample_neighborhood offsets are uniform over [-1, 1]") {
    const Stream s = day_stream(20, 8640);  // 200 steps
    Taskification tk{{0, 100, 200}, "half"};
    PerturbationSpec spec{.delta_steps = 1, .n_samples = 3000, .seed = 9};
    const auto samples = sample_neighborhood(tk, spec, s, 5);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& sigma : samples) {
        const auto off = static_cast<std::int64_t>(sigma.boundaries[1]) - 100;
        ++counts[off + 1];
    }
    for (std::size_t c : counts) {
        const double freq = static_cast<double>(c) / 3000.0;
        CHECK(freq == doctest::Approx(1.0 / 3.0).epsilon(0.15));
    }
}

TEST_CASE("sample_neighborhood rejects impossible deltas") {
    const Stream s = day_stream(20, 8640);
    Taskification tk{{0, 66, 133, 200}, "thirds"};
    // a huge delta makes the valid region vanishingly small relative to the
    // draw box, so the bounded retry budget runs out
    PerturbationSpec spec{.delta_steps = 1000000, .n_samples = 1, .seed = 1};
    CHECK_THROWS_AS(sample_neighborhood(tk, spec, s, 66), NeighborhoodEmpty);
}

TEST_CASE("degenerate RNG check: all-zero offsets reproduce the base split") {
    // delta 1 with min_task_len leaving a single valid configuration
    const Stream s = day_stream(20, 8640);
    Taskification tk{{0, 100, 200}, "half"};
    PerturbationSpec spec{.delta_steps = 1, .n_samples = 16, .seed = 77};
    const auto samples = sample_neighborhood(tk, spec, s, 100);
    for (const auto& sigma : samples) CHECK(sigma.boundaries == tk.boundaries);
}

TEST_CASE("validate catches bad boundaries") {
    CHECK_THROWS_AS(validate(Taskification{{0, 5, 3, 10}, "bad"}, 10, 1),
                    InvalidTaskification);
    CHECK_THROWS_AS(validate(Taskification{{1, 5, 10}, "bad"}, 10, 1),
                    InvalidTaskification);
    CHECK_THROWS_AS(validate(Taskification{{0, 5, 9}, "bad"}, 10, 1),
                    InvalidTaskification);
    CHECK_NOTHROW(validate(Taskification{{0, 5, 10}, "ok"}, 10, 1));
}
