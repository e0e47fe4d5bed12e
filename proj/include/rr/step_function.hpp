#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rr/rat.hpp"

namespace rr {

/// Finitely-valued nonnegative step function on [0,1].
///
/// Pieces are left-closed right-open; breakpoints are strictly increasing
/// with first 0 and last 1. Canonical form (enforced on construction):
/// no zero-measure pieces, no adjacent pieces with equal values.
///
/// Two regimes. Functions produced by exact enumeration (all breakpoints
/// and values rational) carry an exact Rat64 representation alongside the
/// binary64 one and comparisons on them are exact; functions produced by
/// analysis are binary64 only. Instances are immutable after construction.
class StepFunction {
public:
    StepFunction() : StepFunction(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0}) {}

    StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
        init_float(std::move(breakpoints), std::move(values));
    }

    static StepFunction exact(std::vector<Rat64> breakpoints, std::vector<Rat64> values) {
        StepFunction f;
        f.init_exact(std::move(breakpoints), std::move(values));
        return f;
    }

    static StepFunction zero() { return StepFunction(); }

    static StepFunction constant(double c) {
        return StepFunction({0.0, 1.0}, {c});
    }

    /// Indicator of (0,s).
    static StepFunction indicator(double s) {
        if (s <= 0.0 || s > 1.0) throw std::domain_error("indicator: s outside (0,1]");
        if (s == 1.0) return constant(1.0);
        return StepFunction({0.0, s, 1.0}, {1.0, 0.0});
    }

    static StepFunction indicator_exact(const Rat64& s) {
        if (s <= Rat64(0) || s > Rat64(1)) throw std::domain_error("indicator: s outside (0,1]");
        if (s == Rat64(1)) return exact({Rat64(0), Rat64(1)}, {Rat64(1)});
        return exact({Rat64(0), s, Rat64(1)}, {Rat64(1), Rat64(0)});
    }

    bool is_exact() const { return exact_; }
    std::size_t piece_count() const { return val_.size(); }
    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<double>& values() const { return val_; }
    const std::vector<Rat64>& exact_breakpoints() const { require_exact(); return ebp_; }
    const std::vector<Rat64>& exact_values() const { require_exact(); return eval_; }

    double operator()(double t) const {
        if (t < 0.0 || t > 1.0) throw std::domain_error("StepFunction: t outside [0,1]");
        const auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - bp_.begin());
        if (k == 0) return val_.front();
        if (k >= bp_.size()) return val_.back();
        return val_[k - 1];
    }

    double max_value() const { return *std::max_element(val_.begin(), val_.end()); }

    bool is_zero() const {
        return std::all_of(val_.begin(), val_.end(), [](double v) { return v == 0.0; });
    }

    bool non_increasing() const {
        for (std::size_t i = 0; i + 1 < val_.size(); ++i)
            if (val_[i] < val_[i + 1]) return false;
        return true;
    }

    /// Plain integral of x over [a,b] (not of the rearrangement).
    double integral(double a, double b) const {
        if (a < 0.0 || b > 1.0 || a > b) throw std::domain_error("integral: bad interval");
        double acc = 0.0;
        for (std::size_t i = 0; i < val_.size(); ++i) {
            const double lo = std::max(a, bp_[i]);
            const double hi = std::min(b, bp_[i + 1]);
            if (hi > lo) acc += val_[i] * (hi - lo);
        }
        return acc;
    }

    double l1_norm() const { return integral(0.0, 1.0); }

    /// Pieces of the decreasing rearrangement as (value, width), value
    /// descending, one entry per distinct value. Stable left-to-right
    /// width summation keeps the result reproducible.
    std::vector<std::pair<double, double>> rearranged_pieces() const {
        std::vector<std::pair<double, double>> p;
        p.reserve(val_.size());
        for (std::size_t i = 0; i < val_.size(); ++i)
            p.emplace_back(val_[i], bp_[i + 1] - bp_[i]);
        std::stable_sort(p.begin(), p.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<std::pair<double, double>> merged;
        for (const auto& [v, w] : p) {
            if (!merged.empty() && merged.back().first == v)
                merged.back().second += w;
            else
                merged.emplace_back(v, w);
        }
        return merged;
    }

    bool operator==(const StepFunction& o) const { return bp_ == o.bp_ && val_ == o.val_; }
    bool operator!=(const StepFunction& o) const { return !(*this == o); }

    friend StepFunction decreasing_rearrangement(const StepFunction& x);
    friend StepFunction dilated_disjoint_sum(const std::vector<StepFunction>& xs);

private:
    void require_exact() const {
        if (!exact_) throw std::logic_error("StepFunction: exact representation not available");
    }

    void init_float(std::vector<double> bp, std::vector<double> val) {
        validate_shapes(bp.size(), val.size());
        if (bp.front() != 0.0 || bp.back() != 1.0)
            throw std::invalid_argument("StepFunction: breakpoints must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (bp[i] > bp[i + 1])
                throw std::invalid_argument("StepFunction: breakpoints must be non-decreasing");
        for (double v : val)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("StepFunction: values must be finite and >= 0");
        // zero-measure pieces are dropped, adjacent equal values merged
        bp_.clear();
        val_.clear();
        bp_.push_back(bp.front());
        for (std::size_t i = 0; i < val.size(); ++i) {
            if (bp[i] == bp[i + 1]) continue;
            if (!val_.empty() && val_.back() == val[i]) {
                bp_.back() = bp[i + 1];
            } else {
                val_.push_back(val[i]);
                bp_.push_back(bp[i + 1]);
            }
        }
        if (val_.empty()) throw std::invalid_argument("StepFunction: all pieces have zero measure");
        exact_ = false;
        ebp_.clear();
        eval_.clear();
    }

    void init_exact(std::vector<Rat64> bp, std::vector<Rat64> val) {
        validate_shapes(bp.size(), val.size());
        if (bp.front() != Rat64(0) || bp.back() != Rat64(1))
            throw std::invalid_argument("StepFunction: breakpoints must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (bp[i + 1] < bp[i])
                throw std::invalid_argument("StepFunction: breakpoints must be non-decreasing");
        for (const Rat64& v : val)
            if (v < Rat64(0)) throw std::invalid_argument("StepFunction: values must be >= 0");
        ebp_.clear();
        eval_.clear();
        ebp_.push_back(bp.front());
        for (std::size_t i = 0; i < val.size(); ++i) {
            if (bp[i] == bp[i + 1]) continue;
            if (!eval_.empty() && eval_.back() == val[i]) {
                ebp_.back() = bp[i + 1];
            } else {
                eval_.push_back(val[i]);
                ebp_.push_back(bp[i + 1]);
            }
        }
        if (eval_.empty()) throw std::invalid_argument("StepFunction: all pieces have zero measure");
        exact_ = true;
        bp_.resize(ebp_.size());
        val_.resize(eval_.size());
        for (std::size_t i = 0; i < ebp_.size(); ++i) bp_[i] = ebp_[i].to_double();
        for (std::size_t i = 0; i < eval_.size(); ++i) val_[i] = eval_[i].to_double();
    }

    static void validate_shapes(std::size_t nbp, std::size_t nval) {
        if (nbp < 2 || nval + 1 != nbp)
            throw std::invalid_argument("StepFunction: need k+1 breakpoints for k values");
    }

    std::vector<double> bp_;
    std::vector<double> val_;
    bool exact_ = false;
    std::vector<Rat64> ebp_;
    std::vector<Rat64> eval_;
};

/// Law of a step function or of an enumerated operator value: atoms
/// (value, exact mass), value descending, masses summing to exactly 1.
struct ValueDistribution {
    struct Atom {
        double value;
        Rat64 mass;
    };

    std::vector<Atom> atoms;

    static ValueDistribution from_atoms(std::vector<Atom> raw) {
        std::stable_sort(raw.begin(), raw.end(),
                         [](const Atom& a, const Atom& b) { return a.value > b.value; });
        ValueDistribution d;
        Rat64 total(0);
        for (const Atom& a : raw) {
            if (a.mass.is_zero()) continue;
            if (a.mass < Rat64(0)) throw std::invalid_argument("ValueDistribution: negative mass");
            if (!d.atoms.empty() && d.atoms.back().value == a.value)
                d.atoms.back().mass += a.mass;
            else
                d.atoms.push_back(a);
            total += a.mass;
        }
        if (total != Rat64(1))
            throw std::invalid_argument("ValueDistribution: masses must sum to 1, got " + total.str());
        return d;
    }

    bool operator==(const ValueDistribution& o) const {
        if (atoms.size() != o.atoms.size()) return false;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i].value != o.atoms[i].value || atoms[i].mass != o.atoms[i].mass)
                return false;
        return true;
    }

    /// Mean value (exact masses, binary64 values).
    double mean() const {
        double m = 0.0;
        for (const Atom& a : atoms) m += a.value * a.mass.to_double();
        return m;
    }

    /// Decreasing step function carrying this law (binary64 regime).
    StepFunction to_step_decreasing() const {
        if (atoms.empty()) return StepFunction::zero();
        std::vector<double> bp{0.0};
        std::vector<double> val;
        Rat64 cum(0);
        for (const Atom& a : atoms) {
            cum += a.mass;
            val.push_back(a.value);
            bp.push_back(cum == Rat64(1) ? 1.0 : cum.to_double());
        }
        return StepFunction(std::move(bp), std::move(val));
    }
};

/// Exact law of an exact-regime step function.
inline ValueDistribution value_distribution(const StepFunction& x) {
    const auto& bp = x.exact_breakpoints();
    const auto& val = x.exact_values();
    std::vector<std::pair<Rat64, Rat64>> pieces;
    for (std::size_t i = 0; i < val.size(); ++i)
        pieces.emplace_back(val[i], bp[i + 1] - bp[i]);
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const auto& a, const auto& b) { return b.first < a.first; });
    std::vector<ValueDistribution::Atom> atoms;
    atoms.reserve(pieces.size());
    for (auto& [v, w] : pieces) atoms.push_back({v.to_double(), w});
    return ValueDistribution::from_atoms(std::move(atoms));
}

/// Law with binary64 masses; works in both regimes.
inline std::vector<std::pair<double, double>> distribution_pairs(const StepFunction& x) {
    return x.rearranged_pieces();
}

inline StepFunction decreasing_rearrangement(const StepFunction& x) {
    if (x.exact_) {
        std::vector<std::pair<Rat64, Rat64>> p;
        for (std::size_t i = 0; i < x.eval_.size(); ++i)
            p.emplace_back(x.eval_[i], x.ebp_[i + 1] - x.ebp_[i]);
        std::stable_sort(p.begin(), p.end(),
                         [](const auto& a, const auto& b) { return b.first < a.first; });
        std::vector<Rat64> bp{Rat64(0)};
        std::vector<Rat64> val;
        Rat64 cum(0);
        for (const auto& [v, w] : p) {
            cum += w;
            val.push_back(v);
            bp.push_back(cum);
        }
        return StepFunction::exact(std::move(bp), std::move(val));
    }
    if (x.non_increasing()) return x;  // keeps rearrangement exactly idempotent
    auto pieces = x.rearranged_pieces();
    std::vector<double> bp{0.0};
    std::vector<double> val;
    double cum = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        cum = std::min(cum + pieces[i].second, 1.0);
        val.push_back(pieces[i].first);
        bp.push_back(i + 1 == pieces.size() ? 1.0 : cum);
    }
    return StepFunction(std::move(bp), std::move(val));
}

/// Integral of the decreasing rearrangement over [0, tau].
inline double head_integral(const StepFunction& x, double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::domain_error("head_integral: tau outside [0,1]");
    double acc = 0.0;
    double t = 0.0;
    for (const auto& [v, w] : x.rearranged_pieces()) {
        if (t + w >= tau) {
            acc += v * (tau - t);
            return acc;
        }
        acc += v * w;
        t += w;
    }
    return acc;
}

inline Rat64 head_integral_exact(const StepFunction& x, const Rat64& tau) {
    if (tau < Rat64(0) || tau > Rat64(1)) throw std::domain_error("head_integral: tau outside [0,1]");
    const auto& bp = x.exact_breakpoints();
    const auto& val = x.exact_values();
    std::vector<std::pair<Rat64, Rat64>> p;
    for (std::size_t i = 0; i < val.size(); ++i)
        p.emplace_back(val[i], bp[i + 1] - bp[i]);
    std::stable_sort(p.begin(), p.end(),
                     [](const auto& a, const auto& b) { return b.first < a.first; });
    Rat64 acc(0);
    Rat64 t(0);
    for (const auto& [v, w] : p) {
        if (tau <= t + w) {
            acc += v * (tau - t);
            return acc;
        }
        acc += v * w;
        t += w;
    }
    return acc;
}

/// Hardy-Littlewood order: does y dominate x (x < y in head integrals of
/// the rearrangements at every tau)? Piecewise linearity makes checking at
/// the merged rearrangement breakpoints sufficient. Exact comparison when
/// both operands are exact; otherwise slack 1e-12 * max(1, scale).
inline bool majorizes(const StepFunction& y, const StepFunction& x) {
    if (x.is_exact() && y.is_exact()) {
        const auto px = [&] {
            std::vector<std::pair<Rat64, Rat64>> p;
            const auto& bp = x.exact_breakpoints();
            const auto& val = x.exact_values();
            for (std::size_t i = 0; i < val.size(); ++i)
                p.emplace_back(val[i], bp[i + 1] - bp[i]);
            std::stable_sort(p.begin(), p.end(),
                             [](const auto& a, const auto& b) { return b.first < a.first; });
            return p;
        }();
        const auto py = [&] {
            std::vector<std::pair<Rat64, Rat64>> p;
            const auto& bp = y.exact_breakpoints();
            const auto& val = y.exact_values();
            for (std::size_t i = 0; i < val.size(); ++i)
                p.emplace_back(val[i], bp[i + 1] - bp[i]);
            std::stable_sort(p.begin(), p.end(),
                             [](const auto& a, const auto& b) { return b.first < a.first; });
            return p;
        }();
        std::size_t ix = 0, iy = 0;
        Rat64 hx(0), hy(0);
        Rat64 rx = px.empty() ? Rat64(0) : px[0].second;
        Rat64 ry = py.empty() ? Rat64(0) : py[0].second;
        while (ix < px.size() && iy < py.size()) {
            const Rat64 step = rx < ry ? rx : ry;
            hx += px[ix].first * step;
            hy += py[iy].first * step;
            if (hy < hx) return false;
            rx -= step;
            ry -= step;
            if (rx.is_zero() && ++ix < px.size()) rx = px[ix].second;
            if (ry.is_zero() && ++iy < py.size()) ry = py[iy].second;
        }
        return true;
    }
    const auto px = x.rearranged_pieces();
    const auto py = y.rearranged_pieces();
    const double scale = std::max(x.max_value(), y.max_value());
    const double slack = 1e-12 * std::max(1.0, scale);
    std::size_t ix = 0, iy = 0;
    double hx = 0.0, hy = 0.0;
    double rx = px.empty() ? 0.0 : px[0].second;
    double ry = py.empty() ? 0.0 : py[0].second;
    while (ix < px.size() && iy < py.size()) {
        const double step = std::min(rx, ry);
        hx += px[ix].first * step;
        hy += py[iy].first * step;
        if (hx > hy + slack) return false;
        rx -= step;
        ry -= step;
        if (rx <= 0.0 && ++ix < px.size()) rx = px[ix].second;
        if (ry <= 0.0 && ++iy < py.size()) ry = py[iy].second;
    }
    return true;
}

/// Dilated disjoint sum C(x_1,...,x_n): each input compressed onto its own
/// 1/n-slot; the distribution function of the result is the average of the
/// inputs' distribution functions.
inline StepFunction dilated_disjoint_sum(const std::vector<StepFunction>& xs) {
    if (xs.empty()) throw std::domain_error("dilated_disjoint_sum: empty input");
    const std::size_t n = xs.size();
    const bool exact = std::all_of(xs.begin(), xs.end(),
                                   [](const StepFunction& f) { return f.is_exact(); });
    if (exact) {
        const Rat64 inv(1, static_cast<std::int64_t>(n));
        std::vector<Rat64> bp{Rat64(0)};
        std::vector<Rat64> val;
        Rat64 cum(0);
        for (const StepFunction& f : xs) {
            const auto& fb = f.exact_breakpoints();
            const auto& fv = f.exact_values();
            for (std::size_t i = 0; i < fv.size(); ++i) {
                cum += (fb[i + 1] - fb[i]) * inv;
                val.push_back(fv[i]);
                bp.push_back(cum);
            }
        }
        return StepFunction::exact(std::move(bp), std::move(val));
    }
    std::vector<double> bp{0.0};
    std::vector<double> val;
    std::size_t total_pieces = 0;
    for (const StepFunction& f : xs) total_pieces += f.piece_count();
    std::size_t done = 0;
    double cum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& f = xs[k];
        for (std::size_t i = 0; i < f.piece_count(); ++i) {
            cum = std::min(cum + (f.breakpoints()[i + 1] - f.breakpoints()[i]) / static_cast<double>(n), 1.0);
            ++done;
            val.push_back(f.values()[i]);
            bp.push_back(done == total_pieces ? 1.0 : cum);
        }
    }
    return StepFunction(std::move(bp), std::move(val));
}

inline StepFunction scale(const StepFunction& x, double c) {
    if (!(c >= 0.0)) throw std::domain_error("scale: negative factor");
    std::vector<double> val;
    val.reserve(x.piece_count());
    for (double v : x.values()) val.push_back(v * c);
    return StepFunction(x.breakpoints(), std::move(val));
}

/// Pointwise sum on the merged breakpoint grid (binary64 regime).
inline StepFunction pointwise_sum(const StepFunction& a, const StepFunction& b) {
    std::vector<double> bp(a.breakpoints());
    bp.insert(bp.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> val;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) val.push_back(a(bp[i]) + b(bp[i]));
    return StepFunction(std::move(bp), std::move(val));
}

/// K(t, x; L1, Linf) = integral of x* over [0, min(t,1)].
inline double k_functional_l1_linf(double t, const StepFunction& x) {
    if (!(t > 0.0)) throw std::domain_error("k_functional_l1_linf: t must be > 0");
    return head_integral(x, std::min(t, 1.0));
}

/// Distribution function d_x(t) = mes{ x > t }.
inline double distribution_function(const StepFunction& x, double t) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.piece_count(); ++i)
        if (x.values()[i] > t) m += x.breakpoints()[i + 1] - x.breakpoints()[i];
    return m;
}

/// Exact head-sum dominance between integer-valued laws (used for the
/// rational-regime majorization checks on enumerated operator values).
inline bool majorizes_int(const ValueDistribution& y, const ValueDistribution& x) {
    auto as_int = [](double v) {
        const auto r = static_cast<std::int64_t>(std::llround(v));
        if (static_cast<double>(r) != v)
            throw std::domain_error("majorizes_int: non-integer value");
        return r;
    };
    std::size_t ix = 0, iy = 0;
    Rat64 hx(0), hy(0);
    Rat64 rx = x.atoms.empty() ? Rat64(0) : x.atoms[0].mass;
    Rat64 ry = y.atoms.empty() ? Rat64(0) : y.atoms[0].mass;
    while (ix < x.atoms.size() && iy < y.atoms.size()) {
        const Rat64 step = rx < ry ? rx : ry;
        hx += Rat64(as_int(x.atoms[ix].value)) * step;
        hy += Rat64(as_int(y.atoms[iy].value)) * step;
        if (hy < hx) return false;
        rx -= step;
        ry -= step;
        if (rx.is_zero() && ++ix < x.atoms.size()) rx = x.atoms[ix].mass;
        if (ry.is_zero() && ++iy < y.atoms.size()) ry = y.atoms[iy].mass;
    }
    return true;
}

/// Head-sum dominance for plain vectors (equal length, both padded onto
/// the same uniform grid).
inline bool majorizes_vec(const std::vector<double>& y, const std::vector<double>& x,
                          double slack = 1e-12) {
    if (x.size() != y.size()) throw std::invalid_argument("majorizes_vec: size mismatch");
    std::vector<double> xs(x), ys(y);
    std::sort(xs.rbegin(), xs.rend());
    std::sort(ys.rbegin(), ys.rend());
    double hx = 0.0, hy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        hx += xs[i];
        hy += ys[i];
        if (hx > hy + slack * std::max(1.0, std::max(hx, hy))) return false;
    }
    return true;
}

}  // namespace rr
