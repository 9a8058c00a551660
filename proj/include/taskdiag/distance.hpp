#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "taskdiag/stream.hpp"
#include "taskdiag/taskify.hpp"

namespace taskdiag {

/// Empirical distribution of a task interval: a sorted multiset of samples.
class EmpiricalDist {
public:
    explicit EmpiricalDist(std::vector<double> samples);

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

private:
    std::vector<double> samples_;  // non-decreasing, finite
};

/// Symmetric K x K matrix of pairwise task discrepancies.
struct DistanceMatrix {
    std::size_t dims = 0;
    std::vector<double> entries;  // row-major

    double at(std::size_t i, std::size_t j) const { return entries[i * dims + j]; }
    double& at(std::size_t i, std::size_t j) { return entries[i * dims + j]; }

    static DistanceMatrix zeros(std::size_t k) {
        return {k, std::vector<double>(k * k, 0.0)};
    }
};

/// Samples of the selected channel over [start, end).
EmpiricalDist task_distribution(const Stream& s,
                                std::pair<std::size_t, std::size_t> interval,
                                const ChannelSelector& sel);

/// One EmpiricalDist per channel over [start, end).
std::vector<EmpiricalDist> task_distribution_all(
    const Stream& s, std::pair<std::size_t, std::size_t> interval);

/// Exact 1-D Wasserstein-1 distance between empirical distributions,
/// computed by integrating |F_p - F_q| over the merged support. Handles
/// unequal sample counts exactly; reduces to the mean absolute difference of
/// order statistics when counts are equal.
double wasserstein1(const EmpiricalDist& p, const EmpiricalDist& q);

/// Mean of per-channel wasserstein1 (axis-sliced multivariate approximation).
double sliced_w1(const std::vector<EmpiricalDist>& p,
                 const std::vector<EmpiricalDist>& q);

/// M[i][j] = W1(P_i, P_j) over the taskification's intervals.
DistanceMatrix pairwise_matrix(const Stream& s, const Taskification& tk,
                               const ChannelSelector& sel);

/// Bilinear upsampling of the K x K grid to target_dim x target_dim, cell
/// centers mapped affinely; the result is re-symmetrized and the diagonal
/// re-zeroed.
DistanceMatrix upsample_matrix(const DistanceMatrix& m, std::size_t target_dim);

/// Mean over all K^2 entries of (a - b)^2.
double matrix_mse(const DistanceMatrix& a, const DistanceMatrix& b);

/// Entrywise |a - b|, the companion of matrix_mse for difference heatmaps.
DistanceMatrix matrix_abs_diff(const DistanceMatrix& a, const DistanceMatrix& b);

}  // namespace taskdiag
