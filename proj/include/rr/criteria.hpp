#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rr/matrix.hpp"
#include "rr/permops.hpp"
#include "rr/phi.hpp"
#include "rr/spaces.hpp"
#include "rr/step_function.hpp"

namespace rr {

struct GammaResult {
    double value;                // sup over the grid of truncated sums
    bool diverged;               // some partial sum crossed the 1e3 flag
    double log_t_witness;        // argmax location (log scale)
    long j_used;                 // terms summed at the witness
    double truncation_estimate;  // increment from doubling j_max at the witness
};

inline std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 40; ++i) g.push_back(std::pow(2.0, -i));
    return g;
}

namespace detail {

/// Truncated ratio sum (1/phi(t)) sum_{j<=jmax} j^{1/q-1} phi(t^j/j!),
/// evaluated at log scale so the factorially small arguments keep their
/// phi-mass. Sets *crossed when a partial sum passes the divergence flag.
inline double gamma_ratio_sum(const PhiSpec& phi, double q, double log_t, long j_max,
                              bool* crossed = nullptr, long* terms_used = nullptr) {
    const double log_phi_t = phi.log_eval(log_t);
    double sum = 0.0;
    double lgam = 0.0;  // log j!
    long used = 0;
    for (long j = 1; j <= j_max; ++j) {
        lgam += std::log(static_cast<double>(j));
        const double arg = j * log_t - lgam;
        const double lterm = phi.log_eval(arg) - log_phi_t;
        const double weight = q == 1.0 ? 1.0 : std::pow(static_cast<double>(j), 1.0 / q - 1.0);
        const double term = weight * std::exp(lterm);
        sum += term;
        used = j;
        if (crossed && sum > 1e3) *crossed = true;
        if (term < 1e-16 && j > 8 && term < 1e-12 * sum) break;  // convergent tail is spent
    }
    if (terms_used) *terms_used = used;
    return sum;
}

}  // namespace detail

/// Gamma_{phi,q}: sup over the t-grid (with log-midpoint refinement around
/// the running argmax) of the truncated series ratio.
inline GammaResult gamma(const PhiSpec& phi, double q, std::vector<double> t_grid, long j_max) {
    if (!(q >= 1.0) || std::isinf(q)) throw std::domain_error("gamma: q must be finite >= 1");
    if (j_max < 2) throw std::domain_error("gamma: j_max must be >= 2");
    if (t_grid.empty()) throw std::domain_error("gamma: empty t grid");
    std::vector<double> logs;
    for (double t : t_grid) {
        if (!(t > 0.0) || t > 1.0) throw std::domain_error("gamma: grid point outside (0,1]");
        logs.push_back(std::log(t));
    }
    std::sort(logs.begin(), logs.end());
    logs.erase(std::unique(logs.begin(), logs.end()), logs.end());

    GammaResult res{0.0, false, 0.0, 0, 0.0};
    auto consider = [&](double lt) {
        bool crossed = false;
        long used = 0;
        const double v = detail::gamma_ratio_sum(phi, q, lt, j_max, &crossed, &used);
        if (crossed) res.diverged = true;
        if (v > res.value) {
            res.value = v;
            res.log_t_witness = lt;
            res.j_used = used;
        }
    };
    for (double lt : logs) consider(lt);
    for (int round = 0; round < 3; ++round) {
        const auto it = std::lower_bound(logs.begin(), logs.end(), res.log_t_witness);
        const std::size_t idx = static_cast<std::size_t>(it - logs.begin());
        std::vector<double> extra;
        if (idx > 0) extra.push_back(0.5 * (logs[idx - 1] + res.log_t_witness));
        if (idx + 1 < logs.size()) extra.push_back(0.5 * (logs[idx + 1] + res.log_t_witness));
        for (double lt : extra) {
            consider(lt);
            logs.insert(std::lower_bound(logs.begin(), logs.end(), lt), lt);
        }
    }
    const double doubled =
        detail::gamma_ratio_sum(phi, q, res.log_t_witness, 2 * j_max, nullptr, nullptr);
    res.truncation_estimate = std::max(0.0, doubled - res.value);
    return res;
}

inline GammaResult gamma(const PhiSpec& phi, double q, long j_max = 400) {
    return gamma(phi, q, default_gamma_grid(), j_max);
}

/// Minimal constant in tau^(1-a) (int_0^tau f)^a <= C int_0^tau f^a over
/// the breakpoint grid with interior fill.
inline double head_ratio_min_constant(const StepFunction& f, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::domain_error("head_ratio_min_constant: alpha in (0,1)");
    if (f.is_zero()) throw std::domain_error("head_ratio_min_constant: f vanishes identically");
    const auto pieces = f.rearranged_pieces();
    double best = 0.0;
    double tau = 0.0, head = 0.0, head_a = 0.0;
    auto ratio_at = [&](double t, double h, double ha) {
        if (!(t > 0.0) || !(ha > 0.0)) return 0.0;
        return std::pow(t, 1.0 - alpha) * std::pow(h, alpha) / ha;
    };
    for (const auto& [v, w] : pieces) {
        const double va = std::pow(v, alpha);
        for (int g = 1; g <= 8; ++g) {
            const double lam = g / 8.0;
            best = std::max(best, ratio_at(tau + lam * w, head + lam * w * v, head_a + lam * w * va));
        }
        tau += w;
        head += w * v;
        head_a += w * va;
    }
    best = std::max(best, ratio_at(1.0, head, head_a));
    return best;
}

struct ScaleFamilyBound {
    double bound;      // 5a/alpha
    double measured;   // max over the scale family at its critical point
    double s_witness;
};

/// Sweep of the scale family phi_s at the critical argument t = a s^alpha.
inline ScaleFamilyBound scale_family_bound(double a, double alpha, double q, int s_points = 40,
                                    long j_max = 2000) {
    if (!(a >= 1.0) || !(alpha > 0.0) || !(alpha <= 1.0))
        throw std::domain_error("scale_family_bound: need a >= 1, 0 < alpha <= 1");
    ScaleFamilyBound res{5.0 * a / alpha, 0.0, 0.0};
    const double s_cap = std::pow(a, -1.0 / alpha);
    auto consider = [&](double s) {
        if (!(s > 0.0) || !(s < s_cap)) return;
        const PhiSpec phi = PhiSpec::scale_family(a, alpha, s);
        const double t_crit = a * std::pow(s, alpha);
        const double v = detail::gamma_ratio_sum(phi, q, std::log(t_crit), j_max);
        if (v > res.measured) {
            res.measured = v;
            res.s_witness = s;
        }
    };
    // geometric sweep toward 0 and toward the admissible cap
    for (int k = 1; k <= s_points; ++k) consider(s_cap * std::pow(2.0, -k));
    for (int k = 1; k <= 20; ++k) consider(s_cap * (1.0 - std::pow(2.0, -k)));
    return res;
}

struct DivergenceWitness {
    bool accepted;                      // false: a power bound was detected at some step
    int reject_step;                    // the n where selection failed (accepted = false)
    std::vector<double> log_t;          // log t_n, starting at log t_1 = 0
    std::vector<double> log_s;          // log s_n (index 0 unused)
    PhiSpec psi;                        // the flat/linear staircase below phi
    std::vector<double> gamma_partials; // partial ratio sums at s_n, n = 2..N
    std::vector<double> harmonic;       // sum_{k<=n} 1/k, same indexing
};

/// Greedy construction of the sequence t_n and the staircase psi <= phi
/// whose series partial sums dominate the harmonic numbers. Works entirely
/// in log scale; the selection grid reaches log t = -2^60, and failure to
/// select certifies (on that grid) that phi admits a power bound.
inline DivergenceWitness divergence_witness(const PhiSpec& phi, int n_terms, double q = 1.0) {
    if (n_terms < 2) throw std::domain_error("divergence_witness: need n_terms >= 2");
    std::vector<double> log_t{0.0};
    std::vector<double> log_v{phi.log_eval(0.0)};
    std::vector<double> log_s{0.0};
    int reject_step = 0;
    for (int n = 2; n <= n_terms; ++n) {
        const double prev_lt = log_t.back();
        const double prev_lv = log_v.back();
        bool found = false;
        // need log phi(t) >= log n + prev_lv + (log t)/n - prev_lt
        for (double lt = prev_lt - 1.0; lt > -std::pow(2.0, 60); lt *= 2.0) {
            const double lhs = phi.log_eval(lt);
            const double rhs = std::log(static_cast<double>(n)) + prev_lv + lt / n - prev_lt;
            if (lhs >= rhs) {
                const double ls = prev_lt + lhs - prev_lv;  // s_n = t_{n-1} phi(t_n)/phi(t_{n-1})
                log_t.push_back(lt);
                log_v.push_back(lhs);
                log_s.push_back(ls);
                found = true;
                break;
            }
        }
        if (!found) {
            reject_step = n;
            break;
        }
    }
    if (reject_step) {
        DivergenceWitness w{false, reject_step, {}, {}, PhiSpec::power(1.0, 1.0), {}, {}};
        return w;
    }
    DivergenceWitness w{true, 0, log_t, log_s, PhiSpec::staircase(log_t, log_s, log_v), {}, {}};
    for (std::size_t n = 1; n < log_t.size(); ++n) {
        const double ls = log_s[n];
        // on the flat stretch psi(s_n^k/k!) = psi(s_n) for k <= n
        double sum = 0.0, harm = 0.0, lgam = 0.0;
        const double log_psi_s = w.psi.log_eval(ls);
        for (std::size_t k = 1; k <= n + 1; ++k) {
            lgam += std::log(static_cast<double>(k));
            const double arg = static_cast<double>(k) * ls - lgam;
            const double weight =
                q == 1.0 ? 1.0 : std::pow(static_cast<double>(k), 1.0 / q - 1.0);
            sum += weight * std::exp(std::min(0.0, w.psi.log_eval(arg) - log_psi_s));
            harm += 1.0 / static_cast<double>(k);
        }
        w.gamma_partials.push_back(sum);
        w.harmonic.push_back(harm);
    }
    return w;
}

struct AlmostConvexCensus {
    double a, b;
    int p;
    int n_lo, n_hi;
    std::vector<int> m_values;
    std::vector<long> violations;  // per m
    std::vector<double> budget;    // b^m per m
    bool pass;
};

/// Counts, for each m, the integers n with M(a^{n+m}) < a^{m-p} M(a^n);
/// passes when every count stays under b^m. Arguments above domain_cap_log
/// (log scale) are treated as undefined and never count as violations.
inline AlmostConvexCensus almost_convex_census(const MFunc& m, double a, double b, int p, int n_lo,
                                               int n_hi, int m_lo, int m_hi,
                                               double domain_cap_log =
                                                   std::numeric_limits<double>::infinity()) {
    if (!(a > 1.0) || !(b > 1.0) || p < 1)
        throw std::domain_error("almost_convex_census: need a > 1, b > 1, p >= 1");
    AlmostConvexCensus out{a, b, p, n_lo, n_hi, {}, {}, {}, true};
    const double la = std::log(a);
    for (int mm = m_lo; mm <= m_hi; ++mm) {
        long count = 0;
        for (int n = n_lo; n <= n_hi; ++n) {
            const double lu_hi = (n + mm) * la;
            const double lu_lo = n * la;
            if (lu_hi > domain_cap_log || lu_lo > domain_cap_log) continue;  // undefined: holds
            const double lhs = m.log_eval_of_exp(lu_hi);
            const double rhs = (mm - p) * la + m.log_eval_of_exp(lu_lo);
            if (lhs < rhs - 1e-9 * std::max(1.0, std::abs(rhs))) ++count;
        }
        out.m_values.push_back(mm);
        out.violations.push_back(count);
        out.budget.push_back(std::pow(b, mm));
        if (static_cast<double>(count) >= out.budget.back()) out.pass = false;
    }
    return out;
}

struct ConvexityProbeReport {
    std::string family;
    double constant;           // measured over the corpus
    std::size_t witness_index;
    int samples;
};

/// Measured constant in ||C(x_1..x_n)||_E vs max_k ||x_k||_E (dilation
/// direction) or inf_k ||x_k||_E vs ||C||_E (the dstar direction).
inline ConvexityProbeReport dconvex_probe(const SpaceSpec& e,
                                          const std::vector<std::vector<StepFunction>>& corpus,
                                          bool dstar = false) {
    if (corpus.empty()) throw std::domain_error("dconvex_probe: empty corpus");
    ConvexityProbeReport rep{e.str(), 0.0, 0, static_cast<int>(corpus.size())};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& tuple = corpus[i];
        if (tuple.empty()) continue;
        const double nc = e.norm(dilated_disjoint_sum(tuple));
        double ratio = 0.0;
        if (dstar) {
            double mn = std::numeric_limits<double>::infinity();
            for (const auto& x : tuple) mn = std::min(mn, e.norm(x));
            if (nc > 0.0) ratio = mn / nc;
        } else {
            double mx = 0.0;
            for (const auto& x : tuple) mx = std::max(mx, e.norm(x));
            if (mx > 0.0) ratio = nc / mx;
        }
        if (ratio > rep.constant) {
            rep.constant = ratio;
            rep.witness_index = i;
        }
    }
    return rep;
}

/// Measured constant against the q-mean (dilation direction) or the p-mean
/// lower bound (dstar direction).
inline ConvexityProbeReport dilation_mean_probe(const SpaceSpec& e, double p, double q,
                                              const std::vector<std::vector<StepFunction>>& corpus,
                                              bool dstar = false) {
    if (corpus.empty()) throw std::domain_error("dilation_mean_probe: empty corpus");
    ConvexityProbeReport rep{e.str(), 0.0, 0, static_cast<int>(corpus.size())};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& tuple = corpus[i];
        if (tuple.empty()) continue;
        const double nc = e.norm(dilated_disjoint_sum(tuple));
        const std::size_t n = tuple.size();
        double ratio = 0.0;
        if (dstar) {
            double mean = 0.0;
            for (const auto& x : tuple) mean += std::pow(e.norm(x), p);
            mean = std::pow(mean / static_cast<double>(n), 1.0 / p);
            if (nc > 0.0) ratio = mean / nc;
        } else {
            double mean = 0.0;
            for (const auto& x : tuple) mean += std::pow(e.norm(x), q);
            mean = std::pow(mean / static_cast<double>(n), 1.0 / q);
            if (mean > 0.0) ratio = nc / mean;
        }
        if (ratio > rep.constant) {
            rep.constant = ratio;
            rep.witness_index = i;
        }
    }
    return rep;
}

struct SequenceAverageCheck {
    double lhs;    // mean sequence norm over permutations
    double rhs;    // (1/n) sum_{k<=n} x*_k + ||(x*_{kn})_k||_X
    double ratio;  // lhs / rhs
};

inline SequenceAverageCheck sequence_average_check(const MatrixN& x, const SeqSpace& X) {
    const double lhs = sequence_norm_avg_exact(x, X);
    const auto star = matrix_rearrangement(x);
    const int n = x.n();
    double head = 0.0;
    for (int k = 0; k < n; ++k) head += star[static_cast<std::size_t>(k)];
    head /= n;
    std::vector<double> sub(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) sub[static_cast<std::size_t>(k - 1)] = star[static_cast<std::size_t>(k * n - 1)];
    const double rhs = head + X.norm(sub);
    return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 1.0};
}

/// Partial sums of sum_j (e^{(eps j^{1/q})^p} - 1)/j!; divergence of this
/// series for every eps rules the exponential family out of the q-class.
inline bool exp_series_diverges(double p, double q, double eps, long j_max = 400,
                                double flag = 1e6) {
    double sum = 0.0;
    double lgam = 0.0;
    for (long j = 1; j <= j_max; ++j) {
        lgam += std::log(static_cast<double>(j));
        const double u = eps * std::pow(static_cast<double>(j), 1.0 / q);
        const double up = std::pow(u, p);
        const double lterm = (up > 700.0 ? up : std::log(std::expm1(up))) - lgam;
        if (lterm > 700.0) return true;
        sum += std::exp(lterm);
        if (sum > flag) return true;
    }
    return false;
}

}  // namespace rr
