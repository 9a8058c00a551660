#pragma once

#include <cstdint>
#include <vector>

#include "taskdiag/distance.hpp"
#include "taskdiag/stream.hpp"
#include "taskdiag/taskify.hpp"

namespace taskdiag {

enum class ProfileKind { plasticity, stability };

/// Multiset of non-negative transition discrepancies; order carries no
/// meaning, values are stored sorted.
struct Profile {
    ProfileKind kind = ProfileKind::plasticity;
    std::vector<double> values;
    std::size_t l_min = 0;  // stability only
};

struct ProfileDistanceWeights {
    double alpha = 0.5;
    double beta = 0.5;
};

/// Per-taskification boundary sensitivity summary. Per-sample component
/// values are retained so worst-case statistics stay recomputable.
struct BpsReport {
    double plasticity_mean = 0, plasticity_std = 0;
    double stability_mean = 0, stability_std = 0;
    double bps_mean = 0, bps_std = 0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::size_t delta_steps = 0;
    std::size_t l_min = 0;
    std::size_t rejected_draws = 0;
    std::vector<double> per_sample_plasticity;
    std::vector<double> per_sample_stability;
    std::vector<double> per_sample_bps;
};

constexpr std::size_t kDefaultLMin = 2;

/// {W1(P_k, P_{k+1})} over consecutive tasks; K-1 values.
Profile plasticity_profile(const Stream& s, const Taskification& tk,
                           const ChannelSelector& sel);

/// {W1(P_i, P_j) : j - i >= l_min} over non-adjacent task pairs.
Profile stability_profile(const Stream& s, const Taskification& tk,
                          const ChannelSelector& sel, std::size_t l_min = kDefaultLMin);

/// W1 between two profile value multisets of the same kind.
double profile_w1(const Profile& a, const Profile& b);

/// sqrt(alpha * D_pl^2 + beta * D_st^2) between two taskifications of the
/// same stream.
double d_prof(const Stream& s, const Taskification& tau, const Taskification& sigma,
              const ProfileDistanceWeights& w = {},
              const ChannelSelector& sel = ChannelSelector::all(),
              std::size_t l_min = kDefaultLMin);

/// Mean profile distance between tk and random perturbations of its internal
/// boundaries. Deterministic given spec.seed.
BpsReport bps(const Stream& s, const Taskification& tk, const PerturbationSpec& spec,
              const ProfileDistanceWeights& w = {},
              const ChannelSelector& sel = ChannelSelector::all(),
              std::size_t l_min = kDefaultLMin, std::size_t min_task_len = 0);

}  // namespace taskdiag
