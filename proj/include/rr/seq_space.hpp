#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rr/phi.hpp"

namespace rr {

/// Symmetric sequence space norm on R^n, normalized so that the first
/// coordinate vector has norm 1. head_sum(m) is the top-m partial sum norm.
class SeqSpace {
public:
    enum class Kind { Lp, HeadSum, Weighted };

    static SeqSpace lp(double p) {
        if (!(p >= 1.0)) throw std::invalid_argument("SeqSpace::lp: need p >= 1 (inf allowed)");
        SeqSpace s;
        s.kind_ = Kind::Lp;
        s.p_ = p;
        return s;
    }

    static SeqSpace linf() { return lp(std::numeric_limits<double>::infinity()); }

    static SeqSpace head_sum(int m) {
        if (m < 1) throw std::invalid_argument("SeqSpace::head_sum: need m >= 1");
        SeqSpace s;
        s.kind_ = Kind::HeadSum;
        s.m_ = m;
        return s;
    }

    /// Weighted top-sum with nonincreasing weights, rescaled so w1 = 1.
    static SeqSpace weighted(std::vector<double> w) {
        if (w.empty() || !(w.front() > 0.0))
            throw std::invalid_argument("SeqSpace::weighted: need w1 > 0");
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i + 1] > w[i] || w[i + 1] < 0.0)
                throw std::invalid_argument("SeqSpace::weighted: weights must be nonincreasing >= 0");
        const double w1 = w.front();
        for (double& x : w) x /= w1;
        SeqSpace s;
        s.kind_ = Kind::Weighted;
        s.w_ = std::move(w);
        return s;
    }

    double norm(const std::vector<double>& z) const {
        std::vector<double> a;
        a.reserve(z.size());
        for (double v : z) a.push_back(std::abs(v));
        std::sort(a.rbegin(), a.rend());
        switch (kind_) {
            case Kind::Lp: {
                if (std::isinf(p_)) return a.empty() ? 0.0 : a.front();
                double s = 0.0;
                for (double v : a) s += std::pow(v, p_);
                return std::pow(s, 1.0 / p_);
            }
            case Kind::HeadSum: {
                double s = 0.0;
                for (std::size_t i = 0; i < a.size() && i < static_cast<std::size_t>(m_); ++i)
                    s += a[i];
                return s;
            }
            case Kind::Weighted: {
                double s = 0.0;
                for (std::size_t i = 0; i < a.size() && i < w_.size(); ++i) s += a[i] * w_[i];
                return s;
            }
        }
        return 0.0;
    }

    std::string str() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Lp:
                if (std::isinf(p_))
                    os << "linf";
                else
                    os << "lp:" << p_;
                break;
            case Kind::HeadSum:
                os << "head_sum:" << m_;
                break;
            case Kind::Weighted:
                os << "weighted[" << w_.size() << "]";
                break;
        }
        return os.str();
    }

    static SeqSpace parse_tokens(const std::vector<std::string>& tok, std::size_t& pos) {
        if (pos >= tok.size()) throw std::invalid_argument("SeqSpace: truncated spec");
        const std::string kind = tok[pos++];
        if (kind == "linf") return linf();
        if (kind == "l1") return lp(1.0);
        if (kind == "l2") return lp(2.0);
        if (kind == "lp") {
            if (pos >= tok.size()) throw std::invalid_argument("SeqSpace: missing p");
            return lp(std::stod(tok[pos++]));
        }
        if (kind == "head_sum") {
            if (pos >= tok.size()) throw std::invalid_argument("SeqSpace: missing m");
            return head_sum(std::stoi(tok[pos++]));
        }
        throw std::invalid_argument("SeqSpace: unknown kind '" + kind + "'");
    }

private:
    Kind kind_ = Kind::Lp;
    double p_ = 1.0;
    int m_ = 1;
    std::vector<double> w_;
};

}  // namespace rr
