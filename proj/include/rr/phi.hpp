#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rr/step_function.hpp"

namespace rr {

/// Parametric quasi-concave function on [0,1] with phi(0)=0, phi(1)=1,
/// normalized as the parameter of Lorentz and Marcinkiewicz functionals.
///
/// Evaluation has two entry points: eval(t) for ordinary arguments and
/// log_eval(log t) returning log(phi) for arguments far below the binary64
/// range (series terms t^j/j! live at log scale for large j).
class PhiSpec {
public:
    enum class Kind { Power, LogFamily, Tabulated, ScaleFamily, Staircase };

    /// min(1, a t^alpha), a >= 1, alpha in (0,1].
    static PhiSpec power(double a, double alpha) {
        if (!(a >= 1.0) || !(alpha > 0.0) || !(alpha <= 1.0))
            throw std::invalid_argument("PhiSpec::power: need a >= 1, alpha in (0,1]");
        PhiSpec f;
        f.kind_ = Kind::Power;
        f.a_ = a;
        f.alpha_ = alpha;
        return f;
    }

    /// (log(1+1/t)/log 2)^(-1/p), p > 0.
    static PhiSpec log_family(double p) {
        if (!(p > 0.0)) throw std::invalid_argument("PhiSpec::log_family: need p > 0");
        PhiSpec f;
        f.kind_ = Kind::LogFamily;
        f.p_ = p;
        return f;
    }

    /// Piecewise-linear interpolation through (0,0), given knots, ending at (1,1).
    static PhiSpec tabulated(std::vector<std::pair<double, double>> knots) {
        if (knots.empty()) throw std::invalid_argument("PhiSpec::tabulated: empty knot list");
        std::sort(knots.begin(), knots.end());
        if (knots.front().first <= 0.0)
            throw std::invalid_argument("PhiSpec::tabulated: knots must have t > 0 ((0,0) is implicit)");
        if (knots.back().first != 1.0 || std::abs(knots.back().second - 1.0) > 1e-12)
            throw std::invalid_argument("PhiSpec::tabulated: last knot must be (1,1)");
        for (std::size_t i = 0; i + 1 < knots.size(); ++i)
            if (!(knots[i].first < knots[i + 1].first))
                throw std::invalid_argument("PhiSpec::tabulated: duplicate knot abscissae");
        for (const auto& [t, v] : knots)
            if (!(v >= 0.0)) throw std::invalid_argument("PhiSpec::tabulated: negative value");
        PhiSpec f;
        f.kind_ = Kind::Tabulated;
        f.knots_ = std::move(knots);
        if (!f.quasi_concave_on_knots())
            throw std::invalid_argument("PhiSpec::tabulated: knots are not quasi-concave");
        return f;
    }

    /// The scale family used to bound the series criterion for power-dominated
    /// phi: a t^alpha up to s, flat to a s^alpha, then the identity.
    static PhiSpec scale_family(double a, double alpha, double s) {
        if (!(a >= 1.0) || !(alpha > 0.0) || !(alpha <= 1.0))
            throw std::invalid_argument("PhiSpec::scale_family: need a >= 1, alpha in (0,1]");
        if (!(s > 0.0) || !(s < std::pow(a, -1.0 / alpha)))
            throw std::invalid_argument("PhiSpec::scale_family: need 0 < s < a^(-1/alpha)");
        PhiSpec f;
        f.kind_ = Kind::ScaleFamily;
        f.a_ = a;
        f.alpha_ = alpha;
        f.s_ = s;
        return f;
    }

    /// Flat/linear staircase given by interval endpoints in log scale:
    /// flat at value_n on [t_n, s_n], linear (slope through the origin of the
    /// previous linear piece) on [s_n, t_{n-1}]. Used by the divergence
    /// witness construction; arguments and values may both live far outside
    /// the binary64 range, hence the log representation.
    static PhiSpec staircase(std::vector<double> log_t, std::vector<double> log_s,
                             std::vector<double> log_value) {
        // log_t[0] = 0 (t_1 = 1); for i >= 1: log_t[i] < log_s[i] < log_t[i-1]
        if (log_t.size() < 2 || log_s.size() != log_t.size() || log_value.size() != log_t.size())
            throw std::invalid_argument("PhiSpec::staircase: inconsistent arrays");
        PhiSpec f;
        f.kind_ = Kind::Staircase;
        f.log_t_ = std::move(log_t);
        f.log_s_ = std::move(log_s);
        f.log_v_ = std::move(log_value);
        return f;
    }

    Kind kind() const { return kind_; }

    double eval(double t) const {
        if (t < 0.0 || t > 1.0) throw std::domain_error("PhiSpec: t outside [0,1]");
        if (t == 0.0) return 0.0;
        switch (kind_) {
            case Kind::Power:
                return std::min(1.0, a_ * std::pow(t, alpha_));
            case Kind::LogFamily:
                return std::pow(std::log1p(1.0 / t) / kLn2, -1.0 / p_);
            case Kind::Tabulated:
                return tab_eval(t);
            case Kind::ScaleFamily: {
                const double knee = a_ * std::pow(s_, alpha_);
                if (t <= s_) return a_ * std::pow(t, alpha_);
                if (t <= knee) return knee;
                return t;
            }
            case Kind::Staircase:
                return std::exp(log_eval(std::log(t)));
        }
        return 0.0;
    }

    /// log(phi(e^lt)) for lt <= 0; tolerates lt far below log(DBL_MIN).
    double log_eval(double lt) const {
        if (lt > 0.0) throw std::domain_error("PhiSpec: log argument above 1");
        switch (kind_) {
            case Kind::Power:
                return std::min(0.0, std::log(a_) + alpha_ * lt);
            case Kind::LogFamily: {
                // log(1 + 1/t) = log1p(t) - log t
                const double l = std::log1p(lt < -700.0 ? 0.0 : std::exp(lt)) - lt;
                return (-1.0 / p_) * std::log(l / kLn2);
            }
            case Kind::Tabulated: {
                const double t0 = knots_.front().first;
                if (lt >= std::log(t0)) return std::log(tab_eval(std::exp(lt)));
                // below the first knot the interpolant is linear through 0
                return std::log(knots_.front().second / t0) + lt;
            }
            case Kind::ScaleFamily: {
                const double ls = std::log(s_);
                const double lknee = std::log(a_) + alpha_ * ls;
                if (lt <= ls) return std::log(a_) + alpha_ * lt;
                if (lt <= lknee) return lknee;
                return lt;
            }
            case Kind::Staircase: {
                if (lt >= log_t_.front()) return log_v_.front();
                for (std::size_t i = 1; i < log_t_.size(); ++i) {
                    if (lt >= log_t_[i]) {
                        if (lt >= log_s_[i]) return lt + (log_v_[i - 1] - log_t_[i - 1]);  // linear piece
                        return log_v_[i];                                                  // flat piece
                    }
                }
                // below the last constructed interval: linear continuation
                return lt + (log_v_.back() - log_t_.back());
            }
        }
        return -std::numeric_limits<double>::infinity();
    }

    /// Abscissae where the analytic expression changes (Marcinkiewicz
    /// suprema are evaluated on these plus the rearrangement breakpoints).
    std::vector<double> piece_points() const {
        switch (kind_) {
            case Kind::Power:
                return a_ > 1.0 ? std::vector<double>{std::pow(a_, -1.0 / alpha_)} : std::vector<double>{};
            case Kind::LogFamily:
                return {};
            case Kind::Tabulated: {
                std::vector<double> p;
                for (const auto& [t, v] : knots_) p.push_back(t);
                return p;
            }
            case Kind::ScaleFamily:
                return {s_, a_ * std::pow(s_, alpha_)};
            case Kind::Staircase: {
                std::vector<double> p;
                for (double l : log_t_)
                    if (l > -700.0) p.push_back(std::exp(l));
                for (double l : log_s_)
                    if (l > -700.0) p.push_back(std::exp(l));
                return p;
            }
        }
        return {};
    }

    /// phi nondecreasing with phi(0)=0 and phi(1)=1 on a validation grid;
    /// the minimum a Lorentz/Marcinkiewicz parameter must satisfy.
    bool increasing_normalized(int grid = 257) const {
        double prev = 0.0;
        for (int i = 1; i <= grid; ++i) {
            const double p = eval(static_cast<double>(i) / grid);
            if (p < prev - 1e-12) return false;
            prev = p;
        }
        return std::abs(eval(1.0) - 1.0) <= 1e-12;
    }

    /// phi and t/phi(t) nondecreasing on a validation grid. Not required of
    /// every parameter (the log family with small p fails it near t=1 while
    /// still generating a Lorentz functional); asserted where a family
    /// guarantees it.
    bool quasi_concave(int grid = 257) const {
        double prev_phi = 0.0;
        double prev_ratio = 0.0;
        for (int i = 1; i <= grid; ++i) {
            const double t = static_cast<double>(i) / grid;
            const double p = eval(t);
            if (p < prev_phi - 1e-12) return false;
            const double r = t / p;
            if (r < prev_ratio - 1e-12) return false;
            prev_phi = p;
            prev_ratio = r;
        }
        return std::abs(eval(1.0) - 1.0) <= 1e-12;
    }

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    std::string str() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Power:
                os << "power:" << a_ << ":" << alpha_;
                break;
            case Kind::LogFamily:
                os << "phi_p:" << p_;
                break;
            case Kind::Tabulated:
                os << "tabulated[" << knots_.size() << "]";
                break;
            case Kind::ScaleFamily:
                os << "scale:" << a_ << ":" << alpha_ << ":" << s_;
                break;
            case Kind::Staircase:
                os << "staircase[" << log_t_.size() << "]";
                break;
        }
        return os.str();
    }

    /// Parse the CLI syntax: "phi_p:P" | "power:A:ALPHA" | "scale:A:ALPHA:S".
    static PhiSpec parse(const std::string& text);
    static PhiSpec parse_tokens(const std::vector<std::string>& tok, std::size_t& pos);

private:
    static constexpr double kLn2 = 0.6931471805599453;

    bool quasi_concave_on_knots() const {
        double prev_phi = 0.0, prev_ratio = 0.0;
        for (const auto& [t, v] : knots_) {
            if (v < prev_phi - 1e-12) return false;
            if (v > 0.0) {
                const double r = t / v;
                if (r < prev_ratio - 1e-12) return false;
                prev_ratio = r;
            }
            prev_phi = v;
        }
        return true;
    }

    double tab_eval(double t) const {
        double t0 = 0.0, v0 = 0.0;
        for (const auto& [t1, v1] : knots_) {
            if (t <= t1) return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            t0 = t1;
            v0 = v1;
        }
        return knots_.back().second;
    }

    Kind kind_ = Kind::Power;
    double a_ = 1.0, alpha_ = 1.0, p_ = 1.0, s_ = 0.1;
    std::vector<std::pair<double, double>> knots_;
    std::vector<double> log_t_, log_s_, log_v_;
};

inline std::vector<std::string> split_colons(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline PhiSpec PhiSpec::parse_tokens(const std::vector<std::string>& tok, std::size_t& pos) {
    auto need = [&](std::size_t k) {
        if (pos + k > tok.size()) throw std::invalid_argument("PhiSpec: truncated spec");
    };
    need(1);
    const std::string kind = tok[pos++];
    if (kind == "phi_p") {
        need(1);
        return log_family(std::stod(tok[pos++]));
    }
    if (kind == "power") {
        need(2);
        const double a = std::stod(tok[pos]);
        const double al = std::stod(tok[pos + 1]);
        pos += 2;
        return power(a, al);
    }
    if (kind == "scale") {
        need(3);
        const double a = std::stod(tok[pos]);
        const double al = std::stod(tok[pos + 1]);
        const double s = std::stod(tok[pos + 2]);
        pos += 3;
        return scale_family(a, al, s);
    }
    throw std::invalid_argument("PhiSpec: unknown kind '" + kind + "'");
}

inline PhiSpec PhiSpec::parse(const std::string& text) {
    const auto tok = split_colons(text);
    std::size_t pos = 0;
    PhiSpec f = parse_tokens(tok, pos);
    if (pos != tok.size()) throw std::invalid_argument("PhiSpec: trailing tokens in '" + text + "'");
    return f;
}

/// Upper concave envelope of a tabulated quasi-concave function; the result
/// satisfies psi <= phi <= 2 psi pointwise on the knot set (verified).
inline PhiSpec concave_majorant(const PhiSpec& psi) {
    if (psi.kind() != PhiSpec::Kind::Tabulated)
        throw std::invalid_argument("concave_majorant: expects a tabulated function");
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    for (const auto& kv : psi.knots()) pts.push_back(kv);
    // upper hull, left to right (monotone chain)
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            const double cross = (b.first - a.first) * (p.second - a.second) -
                                 (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();  // b below chord a-p: not on the upper hull
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<std::pair<double, double>> knots(hull.begin() + 1, hull.end());
    PhiSpec phi = PhiSpec::tabulated(std::move(knots));
    for (const auto& [t, v] : psi.knots()) {
        const double e = phi.eval(t);
        if (v > e + 1e-12 || 0.5 * e > v + 1e-12)
            throw std::invalid_argument("concave_majorant: envelope bound psi <= phi <= 2 psi failed");
    }
    return phi;
}

/// psi_y(t) = (int_0^t y*(s) ds + t) / (||y||_1 + 1); piecewise linear with
/// knots at the rearrangement breakpoints, represented exactly.
inline double psi_y(const StepFunction& y, double t) {
    if (t < 0.0 || t > 1.0) throw std::domain_error("psi_y: t outside [0,1]");
    return (head_integral(y, t) + t) / (y.l1_norm() + 1.0);
}

inline PhiSpec psi_y_phi(const StepFunction& y) {
    const double denom = y.l1_norm() + 1.0;
    std::vector<std::pair<double, double>> knots;
    double cum = 0.0, head = 0.0;
    for (const auto& [v, w] : y.rearranged_pieces()) {
        cum += w;
        head += v * w;
        if (cum >= 1.0) break;
        knots.emplace_back(cum, (head + cum) / denom);
    }
    knots.emplace_back(1.0, 1.0);
    return PhiSpec::tabulated(std::move(knots));
}

}  // namespace rr
