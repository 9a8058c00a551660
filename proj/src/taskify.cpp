#include "taskdiag/taskify.hpp"

#include <algorithm>

#include "taskdiag/errors.hpp"
#include "taskdiag/rng.hpp"

namespace taskdiag {

namespace {

bool boundaries_valid(const std::vector<std::size_t>& b, std::size_t t_steps,
                      std::size_t min_task_len) {
    if (b.size() < 2) return false;
    if (b.front() != 0 || b.back() != t_steps) return false;
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i] <= b[i - 1]) return false;
        if (b[i] - b[i - 1] < min_task_len) return false;
    }
    return true;
}

std::size_t resolve_min_len(const Stream& s, std::size_t min_task_len) {
    return min_task_len == 0 ? default_min_task_len(s) : min_task_len;
}

}  // namespace

void validate(const Taskification& tk, std::size_t t_steps, std::size_t min_task_len) {
    if (!boundaries_valid(tk.boundaries, t_steps, min_task_len))
        throw InvalidTaskification("boundaries of '" + tk.label +
                                   "' violate ordering, endpoints or min_task_len");
}

std::size_t default_min_task_len(const Stream& s) { return steps_per_day(s); }

Taskification fixed_length(const Stream& s, std::size_t window_days,
                           std::size_t min_task_len) {
    const std::size_t spd = steps_per_day(s);
    const std::size_t min_len = resolve_min_len(s, min_task_len);
    const std::size_t window = window_days * spd;
    if (window == 0 || window < min_len)
        throw WindowTooShort("window of " + std::to_string(window_days) +
                             " days is below the minimum task length");

    Taskification tk;
    tk.label = std::to_string(window_days) + "d";
    for (std::size_t b = 0; b < s.t_steps; b += window) tk.boundaries.push_back(b);
    tk.boundaries.push_back(s.t_steps);
    // merge a too-short final partial window into the preceding task
    const std::size_t k = tk.boundaries.size();
    if (k >= 3 && tk.boundaries[k - 1] - tk.boundaries[k - 2] < min_len)
        tk.boundaries.erase(tk.boundaries.end() - 2);
    if (tk.num_tasks() < 2)
        throw WindowTooLong("window of " + std::to_string(window_days) +
                            " days yields fewer than 2 tasks");
    validate(tk, s.t_steps, min_len);
    return tk;
}

Taskification shift(const Taskification& tk, std::int64_t shift_days,
                    const Stream& s, std::size_t min_task_len) {
    const std::size_t spd = steps_per_day(s);
    const std::size_t min_len = resolve_min_len(s, min_task_len);
    const std::int64_t offset = shift_days * static_cast<std::int64_t>(spd);

    Taskification out = tk;
    for (std::size_t i = 1; i + 1 < out.boundaries.size(); ++i) {
        const std::int64_t b = static_cast<std::int64_t>(tk.boundaries[i]) + offset;
        if (b <= 0 || b >= static_cast<std::int64_t>(s.t_steps))
            throw InvalidShift("boundary " + std::to_string(tk.boundaries[i]) +
                               " leaves (0, T) under a " + std::to_string(shift_days) +
                               "-day shift");
        out.boundaries[i] = static_cast<std::size_t>(b);
    }
    if (!boundaries_valid(out.boundaries, s.t_steps, min_len))
        throw InvalidShift("shift of " + std::to_string(shift_days) +
                           " days breaks ordering or min_task_len");
    if (shift_days != 0)
        out.label = tk.label + "+Δ" + std::to_string(shift_days) + "d";
    return out;
}

std::vector<Taskification> sample_neighborhood(const Taskification& tk,
                                               const PerturbationSpec& spec,
                                               const Stream& s,
                                               std::size_t min_task_len) {
    const std::size_t min_len = resolve_min_len(s, min_task_len);
    validate(tk, s.t_steps, min_len);
    const std::int64_t delta = static_cast<std::int64_t>(spec.delta_steps);
    constexpr std::size_t kMaxRetries = 1000;

    Rng rng(spec.seed);
    std::vector<Taskification> out;
    out.reserve(spec.n_samples);
    const std::size_t n_internal = tk.boundaries.size() - 2;

    for (std::size_t sample = 0; sample < spec.n_samples; ++sample) {
        bool accepted = false;
        for (std::size_t attempt = 0; attempt < kMaxRetries && !accepted; ++attempt) {
            Taskification cand = tk;
            for (std::size_t i = 1; i <= n_internal; ++i) {
                const std::int64_t off = rng.uniform_int(-delta, delta);
                const std::int64_t b = static_cast<std::int64_t>(tk.boundaries[i]) + off;
                cand.boundaries[i] =
                    b < 0 ? 0 : static_cast<std::size_t>(b);  // validity checked below
            }
            if (boundaries_valid(cand.boundaries, s.t_steps, min_len)) {
                cand.label = tk.label + "~" + std::to_string(sample);
                out.push_back(std::move(cand));
                accepted = true;
            }
        }
        if (!accepted)
            throw NeighborhoodEmpty("no valid perturbation of '" + tk.label +
                                    "' found with delta " +
                                    std::to_string(spec.delta_steps));
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> task_intervals(const Taskification& tk) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(tk.num_tasks());
    for (std::size_t k = 1; k < tk.boundaries.size(); ++k)
        out.emplace_back(tk.boundaries[k - 1], tk.boundaries[k]);
    return out;
}

}  // namespace taskdiag
