#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rr/phi.hpp"

namespace rr {

/// Strictly increasing bijection [0,inf) -> [0,inf) with M(0)=0, the
/// generator of Orlicz-type functionals. exp_p means e^{u^p} - 1.
class MFunc {
public:
    enum class Kind { Power, ExpP, Tabulated };

    static MFunc power(double r) {
        if (!(r > 0.0)) throw std::invalid_argument("MFunc::power: need r > 0");
        MFunc m;
        m.kind_ = Kind::Power;
        m.r_ = r;
        return m;
    }

    static MFunc exp_p(double p) {
        if (!(p > 0.0)) throw std::invalid_argument("MFunc::exp_p: need p > 0");
        MFunc m;
        m.kind_ = Kind::ExpP;
        m.r_ = p;
        return m;
    }

    /// Piecewise-linear through (0,0) and the given strictly increasing
    /// knots; continues with the last slope beyond the table.
    static MFunc tabulated(std::vector<std::pair<double, double>> knots) {
        if (knots.empty()) throw std::invalid_argument("MFunc::tabulated: empty knots");
        std::sort(knots.begin(), knots.end());
        double pu = 0.0, pv = 0.0;
        bool first = true;
        for (const auto& [u, v] : knots) {
            if (!(u > (first ? 0.0 : pu)) || !(v > (first ? 0.0 : pv)))
                throw std::invalid_argument("MFunc::tabulated: knots must strictly increase");
            pu = u;
            pv = v;
            first = false;
        }
        MFunc m;
        m.kind_ = Kind::Tabulated;
        m.knots_ = std::move(knots);
        return m;
    }

    Kind kind() const { return kind_; }

    double eval(double u) const {
        if (u < 0.0) u = -u;
        switch (kind_) {
            case Kind::Power:
                return std::pow(u, r_);
            case Kind::ExpP:
                return std::expm1(std::pow(u, r_));
            case Kind::Tabulated: {
                double pu = 0.0, pv = 0.0;
                for (const auto& [ku, kv] : knots_) {
                    if (u <= ku) return pv + (kv - pv) * (u - pu) / (ku - pu);
                    pu = ku;
                    pv = kv;
                }
                const auto& [u1, v1] = knots_.back();
                double u0 = 0.0, v0 = 0.0;
                if (knots_.size() >= 2) {
                    u0 = knots_[knots_.size() - 2].first;
                    v0 = knots_[knots_.size() - 2].second;
                }
                return v1 + (v1 - v0) / (u1 - u0) * (u - u1);
            }
        }
        return 0.0;
    }

    double inverse(double y) const {
        if (y < 0.0) throw std::domain_error("MFunc::inverse: negative argument");
        if (y == 0.0) return 0.0;
        switch (kind_) {
            case Kind::Power:
                return std::pow(y, 1.0 / r_);
            case Kind::ExpP:
                return std::pow(std::log1p(y), 1.0 / r_);
            case Kind::Tabulated: {
                double pu = 0.0, pv = 0.0;
                for (const auto& [ku, kv] : knots_) {
                    if (y <= kv) return pu + (ku - pu) * (y - pv) / (kv - pv);
                    pu = ku;
                    pv = kv;
                }
                const auto& [u1, v1] = knots_.back();
                double u0 = 0.0, v0 = 0.0;
                if (knots_.size() >= 2) {
                    u0 = knots_[knots_.size() - 2].first;
                    v0 = knots_[knots_.size() - 2].second;
                }
                return u1 + (u1 - u0) / (v1 - v0) * (y - v1);
            }
        }
        return 0.0;
    }

    /// log(M(e^lu)) without overflow; the census comparisons run at log scale.
    double log_eval_of_exp(double lu) const {
        switch (kind_) {
            case Kind::Power:
                return r_ * lu;
            case Kind::ExpP: {
                const double x = std::exp(r_ * lu);  // u^p
                if (x > 700.0) return x;             // log(e^x - 1) = x to double precision
                return std::log(std::expm1(x));
            }
            case Kind::Tabulated: {
                const double u = std::exp(lu);
                if (!std::isfinite(u)) throw std::domain_error("MFunc::tabulated: argument overflow");
                return std::log(eval(u));
            }
        }
        return -std::numeric_limits<double>::infinity();
    }

    std::string str() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Power:
                os << "power:" << r_;
                break;
            case Kind::ExpP:
                os << "exp_p:" << r_;
                break;
            case Kind::Tabulated:
                os << "tabulated[" << knots_.size() << "]";
                break;
        }
        return os.str();
    }

    static MFunc parse_tokens(const std::vector<std::string>& tok, std::size_t& pos) {
        if (pos >= tok.size()) throw std::invalid_argument("MFunc: truncated spec");
        const std::string kind = tok[pos++];
        if (pos >= tok.size()) throw std::invalid_argument("MFunc: missing parameter");
        const double v = std::stod(tok[pos++]);
        if (kind == "power") return power(v);
        if (kind == "exp_p") return exp_p(v);
        throw std::invalid_argument("MFunc: unknown kind '" + kind + "'");
    }

    static MFunc parse(const std::string& text) {
        const auto tok = split_colons(text);
        std::size_t pos = 0;
        MFunc m = parse_tokens(tok, pos);
        if (pos != tok.size()) throw std::invalid_argument("MFunc: trailing tokens in '" + text + "'");
        return m;
    }

private:
    Kind kind_ = Kind::Power;
    double r_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
};

}  // namespace rr
