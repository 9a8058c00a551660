#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "taskdiag/stream.hpp"

namespace taskdiag {

/// An ordered partition of a stream into contiguous task intervals.
/// boundaries = (t_0,...,t_K) in step indices, t_0 = 0, t_K = T_steps.
struct Taskification {
    std::vector<std::size_t> boundaries;
    std::string label;

    std::size_t num_tasks() const { return boundaries.size() - 1; }
};

struct PerturbationSpec {
    std::size_t delta_steps = 1;   // max per-boundary displacement
    std::size_t n_samples = 64;    // perturbations drawn from the neighborhood
    std::uint64_t seed = 0;
};

/// Checks strict ordering, pinned endpoints and the minimum interval length;
/// throws InvalidTaskification.
void validate(const Taskification& tk, std::size_t t_steps, std::size_t min_task_len);

/// Default minimum task length: one day's worth of steps.
std::size_t default_min_task_len(const Stream& s);

/// Partitions the stream into windows of `window_days`. A final partial
/// window shorter than min_task_len is merged into the preceding task,
/// otherwise kept as a short final task. min_task_len = 0 means the default.
Taskification fixed_length(const Stream& s, std::size_t window_days,
                           std::size_t min_task_len = 0);

/// Moves every internal boundary by shift_days; endpoints stay pinned.
Taskification shift(const Taskification& tk, std::int64_t shift_days,
                    const Stream& s, std::size_t min_task_len = 0);

/// Draws spec.n_samples valid taskifications from the boundary neighborhood:
/// each internal boundary gets an independent uniform integer offset in
/// [-delta, +delta]; invalid draws are rejected and redrawn. Deterministic
/// given spec.seed.
std::vector<Taskification> sample_neighborhood(const Taskification& tk,
                                               const PerturbationSpec& spec,
                                               const Stream& s,
                                               std::size_t min_task_len = 0);

/// Half-open intervals [t_{k-1}, t_k) tiling [0, T_steps).
std::vector<std::pair<std::size_t, std::size_t>> task_intervals(const Taskification& tk);

}  // namespace taskdiag
