#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rr/rat.hpp"

namespace rr {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    BigRat q(num, den);
    q.canonicalize();
    return q;
}

/// Cached n! as big integers (n up to a few thousand).
inline const BigInt& factorial_big(int n) {
    if (n < 0) throw std::domain_error("factorial_big: negative argument");
    static std::vector<BigInt> cache{1_mpz, 1_mpz};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n)
        cache.push_back(cache.back() * static_cast<unsigned long>(cache.size()));
    return cache[static_cast<std::size_t>(n)];
}

/// Derangement numbers D_m = m D_{m-1} + (-1)^m.
inline const BigInt& derangements_big(int m) {
    if (m < 0) throw std::domain_error("derangements_big: negative argument");
    static std::vector<BigInt> cache{1_mpz};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= m) {
        const int k = static_cast<int>(cache.size());
        BigInt d = cache.back() * k;
        if (k % 2 == 0)
            d += 1;
        else
            d -= 1;
        cache.push_back(d);
    }
    return cache[static_cast<std::size_t>(m)];
}

inline BigInt binomial_big(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

namespace detail {

/// Number of permutations of S_m with no fixed point among the first r
/// positions. Small m goes through the subtraction-recurrence table; large
/// m through the alternating inclusion-exclusion sum (terms decrease, so
/// intermediate sizes stay below m!).
class PrefixDerangements {
public:
    static constexpr int kTableMax = 220;

    static BigInt count(int m, int r) {
        if (r < 0 || m < 0 || r > m) throw std::domain_error("prefix derangements: bad indices");
        if (m <= kTableMax) return table().get(m, r);
        BigInt acc = 0;
        BigInt binom = 1;  // C(r, i)
        for (int i = 0; i <= r; ++i) {
            const BigInt term = binom * factorial_big(m - i);
            if (i % 2 == 0)
                acc += term;
            else
                acc -= term;
            binom *= (r - i);
            binom /= (i + 1);
        }
        return acc;
    }

private:
    class Table {
    public:
        BigInt get(int m, int r) {
            std::lock_guard<std::mutex> lock(mu_);
            while (static_cast<int>(rows_.size()) <= m) {
                const int mm = static_cast<int>(rows_.size());
                std::vector<BigInt> row(static_cast<std::size_t>(mm) + 1);
                row[0] = factorial_big(mm);
                for (int rr = 1; rr <= mm; ++rr)
                    row[static_cast<std::size_t>(rr)] =
                        row[static_cast<std::size_t>(rr - 1)] -
                        rows_[static_cast<std::size_t>(mm - 1)][static_cast<std::size_t>(rr - 1)];
                rows_.push_back(std::move(row));
            }
            return rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
        }

    private:
        std::mutex mu_;
        std::vector<std::vector<BigInt>> rows_ = {{1_mpz}};
    };

    static Table& table() {
        static Table t;
        return t;
    }
};

}  // namespace detail

/// Exact probability that a uniform permutation of S_n fixes exactly j of
/// the first k positions.
inline BigRat mu_exact(int n, int k, int j) {
    if (n < 1 || k < 0 || k > n || j < 0 || j > k)
        throw std::domain_error("mu_exact: need 0 <= j <= k <= n, n >= 1");
    const BigInt ways = binomial_big(k, j) * detail::PrefixDerangements::count(n - j, k - j);
    return make_rat(ways, factorial_big(n));
}

inline double to_double(const BigRat& q) { return mpq_get_d(q.get_mpq_t()); }

/// Exact law of the coincidence count: s_j = P(exactly j fixed points),
/// tau_j = P(at least j fixed points) for a uniform permutation of S_n.
struct BreakpointProfile {
    int n;
    std::vector<BigRat> s;    // s[j], j = 0..n
    std::vector<BigRat> tau;  // tau[j] = sum_{i>=j} s[i], j = 0..n+1 (tau[n+1] = 0)
};

inline BreakpointProfile fixed_point_distribution(int n) {
    if (n < 1) throw std::domain_error("fixed_point_distribution: n must be >= 1");
    BreakpointProfile out;
    out.n = n;
    out.s.resize(static_cast<std::size_t>(n) + 1);
    out.tau.assign(static_cast<std::size_t>(n) + 2, BigRat(0));
    const BigInt& nf = factorial_big(n);
    for (int j = 0; j <= n; ++j)
        out.s[static_cast<std::size_t>(j)] = make_rat(binomial_big(n, j) * derangements_big(n - j), nf);
    for (int j = n; j >= 0; --j)
        out.tau[static_cast<std::size_t>(j)] =
            out.tau[static_cast<std::size_t>(j) + 1] + out.s[static_cast<std::size_t>(j)];
    return out;
}

/// Exact integer-arithmetic check of the proof inequalities
/// tau_j <= 3 s_j and sum_{i>=j} i s_i <= 3 j s_j for all j in 1..n except
/// j = n-1 (where s_{n-1} = 0 makes them void).
inline bool coincidence_tail_inequalities(int n) {
    const BigInt& nf = factorial_big(n);
    std::vector<BigInt> num(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j)
        num[static_cast<std::size_t>(j)] = binomial_big(n, j) * derangements_big(n - j);
    BigInt tail = 0, weighted_tail = 0;
    (void)nf;
    for (int j = n; j >= 1; --j) {
        tail += num[static_cast<std::size_t>(j)];
        weighted_tail += j * num[static_cast<std::size_t>(j)];
        if (j == n - 1) continue;
        if (tail > 3 * num[static_cast<std::size_t>(j)]) return false;
        if (weighted_tail > 3 * j * num[static_cast<std::size_t>(j)]) return false;
    }
    return true;
}

struct HeadRatioResult {
    double max_ratio;            // over breakpoints and interior fill points
    double max_ratio_breakpoints;
    double tau_witness;
};

/// Ratio tau^(1-a) (int_0^tau f*)^a / int_0^tau (f*)^a for the coincidence
/// profile f = T_1 I_n, maximized over the breakpoint grid plus interior
/// fill; exact profile masses, binary64 powers.
inline HeadRatioResult coincidence_head_ratio(int n, double alpha) {
    if (n < 2) throw std::domain_error("coincidence_head_ratio: n must be >= 2");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::domain_error("coincidence_head_ratio: alpha in (0,1)");
    const BreakpointProfile pr = fixed_point_distribution(n);
    // f* takes value j on a piece of width s_j, ordered j = n..1, then 0
    std::vector<double> width(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) width[static_cast<std::size_t>(j)] = to_double(pr.s[static_cast<std::size_t>(j)]);
    HeadRatioResult res{0.0, 0.0, 0.0};
    auto ratio_at = [&](double tau, double head, double head_alpha) {
        if (!(tau > 0.0) || !(head_alpha > 0.0)) return 0.0;
        return std::pow(tau, 1.0 - alpha) * std::pow(head, alpha) / head_alpha;
    };
    double tau = 0.0, head = 0.0, head_alpha = 0.0;
    for (int j = n; j >= 1; --j) {
        const double w = width[static_cast<std::size_t>(j)];
        if (w == 0.0) continue;
        // interior fill within [tau, tau + w)
        for (int g = 1; g <= 7; ++g) {
            const double lam = static_cast<double>(g) / 8.0;
            const double t = tau + lam * w;
            const double r = ratio_at(t, head + lam * w * j, head_alpha + lam * w * std::pow(j, alpha));
            res.max_ratio = std::max(res.max_ratio, r);
        }
        tau += w;
        head += w * j;
        head_alpha += w * std::pow(j, alpha);
        const double r = ratio_at(tau, head, head_alpha);
        res.max_ratio_breakpoints = std::max(res.max_ratio_breakpoints, r);
        if (r > res.max_ratio) {
            res.max_ratio = r;
            res.tau_witness = tau;
        }
    }
    // beyond tau_1 the head integrals are constant and tau^(1-alpha) grows
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        if (t <= tau) continue;
        const double r = ratio_at(t, head, head_alpha);
        if (r > res.max_ratio) {
            res.max_ratio = r;
            res.tau_witness = t;
        }
    }
    res.max_ratio = std::max(res.max_ratio, res.max_ratio_breakpoints);
    return res;
}

/// The exact probability of no fixed point among the first r of m
/// positions next to its product-form approximation (1 - 1/m)^r. The
/// approximation is not an identity; the relative gap is reported and
/// vanishes in the scaling limit, which is all the limit statement needs.
struct ZeroCoincidenceGap {
    double exact;
    double display;
    double rel_gap;
};

inline ZeroCoincidenceGap zero_coincidence_display_gap(int m, int r) {
    if (m < 1 || r < 0 || r > m) throw std::domain_error("zero_coincidence_display_gap: bad indices");
    const double exact = to_double(make_rat(detail::PrefixDerangements::count(m, r), factorial_big(m)));
    const double display = std::pow(1.0 - 1.0 / m, r);
    return {exact, display, exact > 0.0 ? (display - exact) / exact : 0.0};
}

struct CoincidenceSupScan {
    double sup_estimate;
    double upper;        // s^j / j!
    double lower;        // s^j / (e j!)
    int n_at_sup;
    int k_at_sup;
};

/// Scan of sup mu_{n,k,j} over k <= n s, n <= n_max. Every n is scanned up
/// to 64; beyond that only k in {floor(ns)-1, floor(ns)} (the scan is a
/// lower bound for the true sup; the upper bound is exact for every term).
inline CoincidenceSupScan coincidence_sup_scan(double s, int j, int n_max) {
    if (!(s > 0.0) || !(s < 1.0)) throw std::domain_error("coincidence_sup_scan: s in (0,1)");
    if (j < 1) throw std::domain_error("coincidence_sup_scan: j must be >= 1");
    const double fj = static_cast<double>(factorial64(std::min(j, 20)));
    CoincidenceSupScan res{0.0, std::pow(s, j) / fj, std::pow(s, j) / (std::exp(1.0) * fj), 0, 0};
    for (int n = j; n <= n_max; ++n) {
        const int kmax = static_cast<int>(std::floor(s * n));
        if (kmax < j) continue;
        const int klo = n <= 64 ? j : std::max(j, kmax - 1);
        for (int k = klo; k <= kmax; ++k) {
            const double v = to_double(mu_exact(n, k, j));
            if (v > res.sup_estimate) {
                res.sup_estimate = v;
                res.n_at_sup = n;
                res.k_at_sup = k;
            }
        }
    }
    return res;
}

}  // namespace rr
