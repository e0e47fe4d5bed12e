#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rr/matrix.hpp"
#include "rr/rng.hpp"
#include "rr/spaces.hpp"
#include "rr/step_function.hpp"

namespace rr {

/// Largest n for which full enumeration over S_n is offered (8! = 40320).
constexpr int kExhaustiveMax = 8;

constexpr double kQInf = std::numeric_limits<double>::infinity();

namespace detail {

inline double tq_value(const MatrixN& x, const std::vector<int>& perm, double q) {
    const int n = x.n();
    if (std::isinf(q)) {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, x.at(i, perm[static_cast<std::size_t>(i)]));
        return m;
    }
    // summation over the sorted addends: the value depends only on the
    // selected multiset, never on the row order, so relabelings are
    // invisible bit-for-bit
    double buf[kExhaustiveMax];
    std::vector<double> heap;
    double* a = n <= kExhaustiveMax ? buf : (heap.resize(static_cast<std::size_t>(n)), heap.data());
    for (int i = 0; i < n; ++i) {
        const double v = x.at(i, perm[static_cast<std::size_t>(i)]);
        a[i] = q == 1.0 ? v : (v > 0.0 ? std::pow(v, q) : 0.0);
    }
    std::sort(a, a + n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i];
    return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

template <typename Fn>
void for_each_permutation(int n, Fn&& fn) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
        fn(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

/// Deterministic slot-parallel map: out[i] = fn(i). Results do not depend
/// on the worker count.
template <typename Fn>
void parallel_fill(std::vector<double>& out, int workers, Fn&& fn) {
    const std::size_t n = out.size();
    if (workers <= 1 || n < 1024) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t per = (n + static_cast<std::size_t>(workers) - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = per * static_cast<std::size_t>(w);
        const std::size_t hi = std::min(n, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Exact law of ((sum_i x_{i,pi(i)}^q)^{1/q}) over uniformly random pi
/// (max for q = inf); masses are exact multiples of 1/n!.
inline ValueDistribution tq_distribution(const MatrixN& x, double q) {
    if (!(q >= 1.0)) throw std::domain_error("tq_distribution: q must be >= 1 or infinity");
    const int n = x.n();
    if (n > kExhaustiveMax)
        throw std::domain_error(
            "tq_distribution: n exceeds the exhaustive threshold; use the Monte Carlo norm mode");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(factorial64(n)));
    detail::for_each_permutation(n, [&](const std::vector<int>& p) {
        vals.push_back(detail::tq_value(x, p, q));
    });
    std::sort(vals.rbegin(), vals.rend());
    const std::int64_t nf = factorial64(n);
    std::vector<ValueDistribution::Atom> atoms;
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i;
        while (j < vals.size() && vals[j] == vals[i]) ++j;
        atoms.push_back({vals[i], Rat64(static_cast<std::int64_t>(j - i), nf)});
        i = j;
    }
    return ValueDistribution::from_atoms(std::move(atoms));
}

/// ||T_q x||_E by exact enumeration.
inline double tq_norm_exact(const MatrixN& x, double q, const SpaceSpec& e) {
    return e.norm(tq_distribution(x, q).to_step_decreasing());
}

struct McEstimate {
    double value;
    double std_error;  // bootstrap
    int samples;
};

/// ||T_q x||_E from seeded permutation sampling. Sample i is drawn from the
/// counter stream (seed, kTqSample, i), so estimates are bit-identical for
/// any worker count; the bootstrap uses its own streams.
inline McEstimate tq_norm_mc(const MatrixN& x, double q, const SpaceSpec& e, int samples,
                             std::uint64_t seed, int workers = 1, int bootstrap = 32) {
    if (samples < 1) throw std::invalid_argument("tq_norm_mc: need samples >= 1");
    const int n = x.n();
    std::vector<double> vals(static_cast<std::size_t>(samples));
    detail::parallel_fill(vals, workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, streams::kTqSample, static_cast<std::uint64_t>(i));
        std::vector<int> p;
        rng.fill_permutation(p, n);
        return detail::tq_value(x, p, q);
    });

    // empirical decreasing step function over sorted distinct values
    std::vector<double> sorted(vals);
    std::sort(sorted.rbegin(), sorted.rend());
    std::vector<double> dval;
    std::vector<std::size_t> dcount;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        dval.push_back(sorted[i]);
        dcount.push_back(j - i);
        i = j;
    }
    auto norm_of_counts = [&](const std::vector<std::size_t>& counts, std::size_t total) {
        std::vector<double> bp{0.0};
        std::vector<double> val;
        std::size_t cum = 0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] == 0) continue;
            cum += counts[k];
            val.push_back(dval[k]);
            bp.push_back(static_cast<double>(cum) / static_cast<double>(total));
        }
        if (val.empty()) return 0.0;
        bp.back() = 1.0;
        return e.norm(StepFunction(std::move(bp), std::move(val)));
    };
    const double estimate = norm_of_counts(dcount, static_cast<std::size_t>(samples));

    // map each sample to its distinct-value slot for multinomial resampling
    std::vector<std::uint32_t> slot(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto it = std::lower_bound(dval.begin(), dval.end(), vals[i], std::greater<double>());
        slot[i] = static_cast<std::uint32_t>(it - dval.begin());
    }
    double se = 0.0;
    if (bootstrap > 1) {
        std::vector<double> boots(static_cast<std::size_t>(bootstrap));
        std::vector<std::size_t> counts(dval.size());
        for (int b = 0; b < bootstrap; ++b) {
            Rng rng = Rng::stream(seed, streams::kBootstrap, static_cast<std::uint64_t>(b));
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < samples; ++i)
                counts[slot[rng.next_below(static_cast<std::uint32_t>(samples))]]++;
            boots[static_cast<std::size_t>(b)] = norm_of_counts(counts, static_cast<std::size_t>(samples));
        }
        double mean = 0.0;
        for (double v : boots) mean += v;
        mean /= bootstrap;
        double var = 0.0;
        for (double v : boots) var += (v - mean) * (v - mean);
        se = std::sqrt(var / (bootstrap - 1));
    }
    return {estimate, se, samples};
}

/// (1/n!) sum_pi ||(x_{i,pi(i)})_i||_X by exact enumeration.
inline double sequence_norm_avg_exact(const MatrixN& x, const SeqSpace& X) {
    const int n = x.n();
    if (n > kExhaustiveMax)
        throw std::domain_error("sequence_norm_avg: n exceeds the exhaustive threshold");
    double total = 0.0;
    std::vector<double> diag(static_cast<std::size_t>(n));
    detail::for_each_permutation(n, [&](const std::vector<int>& p) {
        for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = x.at(i, p[static_cast<std::size_t>(i)]);
        total += X.norm(diag);
    });
    return total / static_cast<double>(factorial64(n));
}

inline McEstimate sequence_norm_avg_mc(const MatrixN& x, const SeqSpace& X, int samples,
                                       std::uint64_t seed, int workers = 1) {
    const int n = x.n();
    std::vector<double> vals(static_cast<std::size_t>(samples));
    detail::parallel_fill(vals, workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, streams::kSeqSample, static_cast<std::uint64_t>(i));
        std::vector<int> p;
        rng.fill_permutation(p, n);
        std::vector<double> diag(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = x.at(k, p[static_cast<std::size_t>(k)]);
        return X.norm(diag);
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double se = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
    return {mean, se, samples};
}

/// (1/(n!)^2) sum_{pi,sigma} max_i |y_{i,pi(i),sigma(i)}|.
inline double double_mean_max_exact(const Array3N& y) {
    const int n = y.n;
    if (n > 5) throw std::domain_error("double_mean_max: exact mode requires n <= 5");
    double total = 0.0;
    detail::for_each_permutation(n, [&](const std::vector<int>& pi) {
        detail::for_each_permutation(n, [&](const std::vector<int>& sg) {
            double m = 0.0;
            for (int i = 0; i < n; ++i)
                m = std::max(m, std::abs(y.at(i, pi[static_cast<std::size_t>(i)],
                                              sg[static_cast<std::size_t>(i)])));
            total += m;
        });
    });
    const double nf = static_cast<double>(factorial64(n));
    return total / (nf * nf);
}

inline McEstimate double_mean_max_mc(const Array3N& y, int samples, std::uint64_t seed,
                                   int workers = 1) {
    const int n = y.n;
    std::vector<double> vals(static_cast<std::size_t>(samples));
    detail::parallel_fill(vals, workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, streams::kArraySample, static_cast<std::uint64_t>(i));
        std::vector<int> pi, sg;
        rng.fill_permutation(pi, n);
        rng.fill_permutation(sg, n);
        double m = 0.0;
        for (int k = 0; k < n; ++k)
            m = std::max(m, std::abs(y.at(k, pi[static_cast<std::size_t>(k)],
                                          sg[static_cast<std::size_t>(k)])));
        return m;
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double se = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
    return {mean, se, samples};
}

}  // namespace rr
