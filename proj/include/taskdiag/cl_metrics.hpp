#pragma once

#include <optional>
#include <string>
#include <vector>

namespace taskdiag {

/// Externally supplied per-task results: m(i, j) is the MSE on task j after
/// training on task i (1-based in the math, 0-based here). The lower
/// triangle plus diagonal must be populated; upper-triangle cells may be
/// absent.
class ResultsMatrix {
public:
    ResultsMatrix(std::size_t t_tasks,
                  std::vector<std::optional<double>> entries);

    std::size_t t_tasks() const { return t_; }
    double at(std::size_t i, std::size_t j) const;  // throws MissingEntry
    bool present(std::size_t i, std::size_t j) const;

    /// CSV with header "after_task,task_1,...,task_T"; empty cells = absent.
    static ResultsMatrix load_csv(const std::string& path);

private:
    std::size_t t_;
    std::vector<std::optional<double>> m_;
};

/// Mean over past tasks of final-model MSE minus the best intermediate MSE:
/// f_j = m(T,j) - min_{k in {j..T-1}} m(k,j), averaged over j = 1..T-1.
/// May be negative.
double forgetting(const ResultsMatrix& rm);

/// BWT = mean over j = 1..T-1 of m(j,j) - m(T,j); positive means the final
/// model improved on earlier tasks.
double backward_transfer(const ResultsMatrix& rm);

/// Final-model mean MSE over all tasks. With full_triangle, averages the
/// whole populated lower triangle instead.
double average_mse(const ResultsMatrix& rm, bool full_triangle = false);

/// Sample (n-1) standard deviation of a metric across taskifications.
double cross_taskification_std(const std::vector<double>& values);

}  // namespace taskdiag
