#include "taskdiag/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "taskdiag/errors.hpp"

namespace taskdiag {

EmpiricalDist::EmpiricalDist(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) throw EmptyDistribution("no samples");
    for (double v : samples_)
        if (!std::isfinite(v)) throw EmptyDistribution("non-finite sample");
    std::sort(samples_.begin(), samples_.end());
}

EmpiricalDist task_distribution(const Stream& s,
                                std::pair<std::size_t, std::size_t> interval,
                                const ChannelSelector& sel) {
    const auto [start, end] = interval;
    if (start >= end || end > s.t_steps)
        throw EmptyInterval("[" + std::to_string(start) + ", " + std::to_string(end) +
                            ") is empty or outside the stream");
    const std::size_t c = resolve_channel(s, sel);
    std::vector<double> samples;
    samples.reserve(end - start);
    for (std::size_t t = start; t < end; ++t) samples.push_back(s.at(t, c));
    return EmpiricalDist(std::move(samples));
}

std::vector<EmpiricalDist> task_distribution_all(
    const Stream& s, std::pair<std::size_t, std::size_t> interval) {
    std::vector<EmpiricalDist> out;
    out.reserve(s.channels);
    for (std::size_t c = 0; c < s.channels; ++c)
        out.push_back(task_distribution(s, interval,
                                        ChannelSelector::single(s.channel_names[c])));
    return out;
}

double wasserstein1(const EmpiricalDist& p, const EmpiricalDist& q) {
    const auto& a = p.samples();
    const auto& b = q.samples();
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    // Walk the merged support, accumulating |F_p - F_q| * dx.
    std::size_t i = 0, j = 0;
    double w = 0.0;
    double prev = std::min(a.front(), b.front());
    while (i < a.size() || j < b.size()) {
        double x;
        if (i < a.size() && (j == b.size() || a[i] <= b[j]))
            x = a[i];
        else
            x = b[j];
        const double fp = static_cast<double>(i) / na;
        const double fq = static_cast<double>(j) / nb;
        w += std::abs(fp - fq) * (x - prev);
        prev = x;
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
    }
    return w;
}

double sliced_w1(const std::vector<EmpiricalDist>& p,
                 const std::vector<EmpiricalDist>& q) {
    if (p.size() != q.size() || p.empty())
        throw ChannelMismatch("channel counts differ or are zero");
    double acc = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) acc += wasserstein1(p[c], q[c]);
    return acc / static_cast<double>(p.size());
}

namespace {

std::size_t worker_count() {
    if (const char* env = std::getenv("TASKDIAG_THREADS")) {
        const long n = std::atol(env);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

DistanceMatrix pairwise_matrix(const Stream& s, const Taskification& tk,
                               const ChannelSelector& sel) {
    const auto intervals = task_intervals(tk);
    const std::size_t k = intervals.size();
    std::vector<EmpiricalDist> dists;
    dists.reserve(k);
    for (const auto& iv : intervals) dists.push_back(task_distribution(s, iv, sel));

    DistanceMatrix m = DistanceMatrix::zeros(k);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve(k * (k - 1) / 2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) cells.emplace_back(i, j);

    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(cells.size() / 16, 1));
    if (workers <= 1) {
        for (const auto& [i, j] : cells) {
            const double d = wasserstein1(dists[i], dists[j]);
            m.at(i, j) = d;
            m.at(j, i) = d;
        }
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t idx = w; idx < cells.size(); idx += workers) {
                    const auto [i, j] = cells[idx];
                    const double d = wasserstein1(dists[i], dists[j]);
                    m.at(i, j) = d;
                    m.at(j, i) = d;
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return m;
}

DistanceMatrix upsample_matrix(const DistanceMatrix& m, std::size_t target_dim) {
    if (target_dim < m.dims)
        throw Downsample("target dimension " + std::to_string(target_dim) +
                         " is below the matrix dimension " + std::to_string(m.dims));
    if (target_dim == m.dims) return m;

    const std::size_t k = m.dims;
    const std::size_t n = target_dim;
    DistanceMatrix out = DistanceMatrix::zeros(n);
    const double scale = static_cast<double>(k) / static_cast<double>(n);

    auto source_coord = [&](std::size_t t) {
        double u = (static_cast<double>(t) + 0.5) * scale - 0.5;
        return std::clamp(u, 0.0, static_cast<double>(k - 1));
    };

    for (std::size_t r = 0; r < n; ++r) {
        const double u = source_coord(r);
        const std::size_t r0 = static_cast<std::size_t>(u);
        const std::size_t r1 = std::min(r0 + 1, k - 1);
        const double fu = u - static_cast<double>(r0);
        for (std::size_t c = 0; c < n; ++c) {
            const double v = source_coord(c);
            const std::size_t c0 = static_cast<std::size_t>(v);
            const std::size_t c1 = std::min(c0 + 1, k - 1);
            const double fv = v - static_cast<double>(c0);
            out.at(r, c) = (1 - fu) * (1 - fv) * m.at(r0, c0) +
                           (1 - fu) * fv * m.at(r0, c1) +
                           fu * (1 - fv) * m.at(r1, c0) +
                           fu * fv * m.at(r1, c1);
        }
    }
    // re-symmetrize and re-zero the diagonal
    for (std::size_t r = 0; r < n; ++r) {
        out.at(r, r) = 0.0;
        for (std::size_t c = r + 1; c < n; ++c) {
            const double avg = 0.5 * (out.at(r, c) + out.at(c, r));
            out.at(r, c) = avg;
            out.at(c, r) = avg;
        }
    }
    return out;
}

double matrix_mse(const DistanceMatrix& a, const DistanceMatrix& b) {
    if (a.dims != b.dims)
        throw DimMismatch(std::to_string(a.dims) + " vs " + std::to_string(b.dims));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const double d = a.entries[i] - b.entries[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.entries.size());
}

DistanceMatrix matrix_abs_diff(const DistanceMatrix& a, const DistanceMatrix& b) {
    if (a.dims != b.dims)
        throw DimMismatch(std::to_string(a.dims) + " vs " + std::to_string(b.dims));
    DistanceMatrix out = DistanceMatrix::zeros(a.dims);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        out.entries[i] = std::abs(a.entries[i] - b.entries[i]);
    return out;
}

}  // namespace taskdiag
