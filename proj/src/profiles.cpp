#include "taskdiag/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "taskdiag/errors.hpp"

namespace taskdiag {

namespace {

std::vector<EmpiricalDist> all_task_distributions(const Stream& s,
                                                  const Taskification& tk,
                                                  const ChannelSelector& sel) {
    std::vector<EmpiricalDist> out;
    const auto intervals = task_intervals(tk);
    out.reserve(intervals.size());
    for (const auto& iv : intervals) out.push_back(task_distribution(s, iv, sel));
    return out;
}

Profile plasticity_from(const std::vector<EmpiricalDist>& dists) {
    Profile p;
    p.kind = ProfileKind::plasticity;
    for (std::size_t k = 0; k + 1 < dists.size(); ++k)
        p.values.push_back(wasserstein1(dists[k], dists[k + 1]));
    std::sort(p.values.begin(), p.values.end());
    return p;
}

Profile stability_from(const std::vector<EmpiricalDist>& dists, std::size_t l_min) {
    Profile p;
    p.kind = ProfileKind::stability;
    p.l_min = l_min;
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (std::size_t j = i + l_min; j < dists.size(); ++j)
            p.values.push_back(wasserstein1(dists[i], dists[j]));
    std::sort(p.values.begin(), p.values.end());
    return p;
}

struct MeanStd {
    double mean = 0, std = 0;
};

// Sample standard deviation (n-1 denominator); 0 for n < 2.
MeanStd mean_std(const std::vector<double>& v) {
    MeanStd ms;
    if (v.empty()) return ms;
    double acc = 0;
    for (double x : v) acc += x;
    ms.mean = acc / static_cast<double>(v.size());
    if (v.size() < 2) return ms;
    double var = 0;
    for (double x : v) {
        const double d = x - ms.mean;
        var += d * d;
    }
    ms.std = std::sqrt(var / static_cast<double>(v.size() - 1));
    return ms;
}

}  // namespace

Profile plasticity_profile(const Stream& s, const Taskification& tk,
                           const ChannelSelector& sel) {
    if (tk.num_tasks() < 2)
        throw TooFewTasks("plasticity profile needs at least 2 tasks");
    return plasticity_from(all_task_distributions(s, tk, sel));
}

Profile stability_profile(const Stream& s, const Taskification& tk,
                          const ChannelSelector& sel, std::size_t l_min) {
    if (l_min < 2) throw TooFewTasks("l_min must be at least 2");
    if (tk.num_tasks() < l_min + 1)
        throw TooFewTasks("stability profile needs at least l_min + 1 = " +
                          std::to_string(l_min + 1) + " tasks");
    return stability_from(all_task_distributions(s, tk, sel), l_min);
}

double profile_w1(const Profile& a, const Profile& b) {
    if (a.kind != b.kind) throw KindMismatch("profile kinds differ");
    if (a.values.empty() || b.values.empty()) throw EmptyProfile("empty profile");
    return wasserstein1(EmpiricalDist(a.values), EmpiricalDist(b.values));
}

double d_prof(const Stream& s, const Taskification& tau, const Taskification& sigma,
              const ProfileDistanceWeights& w, const ChannelSelector& sel,
              std::size_t l_min) {
    const double d_pl = profile_w1(plasticity_profile(s, tau, sel),
                                   plasticity_profile(s, sigma, sel));
    const double d_st = profile_w1(stability_profile(s, tau, sel, l_min),
                                   stability_profile(s, sigma, sel, l_min));
    return std::sqrt(w.alpha * d_pl * d_pl + w.beta * d_st * d_st);
}

BpsReport bps(const Stream& s, const Taskification& tk, const PerturbationSpec& spec,
              const ProfileDistanceWeights& w, const ChannelSelector& sel,
              std::size_t l_min, std::size_t min_task_len) {
    const auto base_dists = all_task_distributions(s, tk, sel);
    if (base_dists.size() < 2) throw TooFewTasks("need at least 2 tasks");
    if (base_dists.size() < l_min + 1)
        throw TooFewTasks("stability profile needs at least l_min + 1 tasks");
    const Profile base_pl = plasticity_from(base_dists);
    const Profile base_st = stability_from(base_dists, l_min);

    const auto neighborhood = sample_neighborhood(tk, spec, s, min_task_len);

    BpsReport r;
    r.n_samples = spec.n_samples;
    r.seed = spec.seed;
    r.delta_steps = spec.delta_steps;
    r.l_min = l_min;
    for (const auto& sigma : neighborhood) {
        const auto dists = all_task_distributions(s, sigma, sel);
        const double d_pl = profile_w1(base_pl, plasticity_from(dists));
        const double d_st = profile_w1(base_st, stability_from(dists, l_min));
        r.per_sample_plasticity.push_back(d_pl);
        r.per_sample_stability.push_back(d_st);
        r.per_sample_bps.push_back(
            std::sqrt(w.alpha * d_pl * d_pl + w.beta * d_st * d_st));
    }
    const auto pl = mean_std(r.per_sample_plasticity);
    const auto st = mean_std(r.per_sample_stability);
    const auto bp = mean_std(r.per_sample_bps);
    r.plasticity_mean = pl.mean;
    r.plasticity_std = pl.std;
    r.stability_mean = st.mean;
    r.stability_std = st.std;
    r.bps_mean = bp.mean;
    r.bps_std = bp.std;
    return r;
}

}  // namespace taskdiag
