#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rr/mfunc.hpp"
#include "rr/phi.hpp"
#include "rr/rng.hpp"
#include "rr/seq_space.hpp"
#include "rr/step_function.hpp"

namespace rr {

enum class ExConvention { Average, Literal };

/// A concrete rearrangement-invariant norm on step functions over [0,1].
///
/// Families: Lp, Lorentz (int (x*)^r d(phi^r))^(1/r), Marcinkiewicz
/// sup head/phi, Orlicz (Luxemburg functional), exp Lp, Orlicz-Lorentz,
/// and the block space induced by a symmetric sequence norm.
///
/// On construction every family except the block space is rescaled so the
/// constant-1 function has norm exactly 1; the block space keeps its
/// sequence-space normalization ||e_1|| = 1. Construction may precompute,
/// evaluation is const and thread-safe.
class SpaceSpec {
public:
    enum class Family { Lp, Lorentz, Marcinkiewicz, Orlicz, ExpLp, OrliczLorentz, EX };

    static SpaceSpec lp(double p) {
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("SpaceSpec::lp: need finite p >= 1");
        SpaceSpec e;
        e.family_ = Family::Lp;
        e.p_ = p;
        e.finish();
        return e;
    }

    static SpaceSpec lorentz(double r, PhiSpec phi) {
        if (!(r >= 1.0)) throw std::invalid_argument("SpaceSpec::lorentz: need r >= 1");
        if (!phi.increasing_normalized())
            throw std::invalid_argument("SpaceSpec::lorentz: phi must increase from 0 to 1");
        SpaceSpec e;
        e.family_ = Family::Lorentz;
        e.r_ = r;
        e.phi_ = std::make_shared<PhiSpec>(std::move(phi));
        e.finish();
        return e;
    }

    static SpaceSpec marcinkiewicz(PhiSpec phi) {
        if (!phi.increasing_normalized())
            throw std::invalid_argument("SpaceSpec::marcinkiewicz: phi must increase from 0 to 1");
        SpaceSpec e;
        e.family_ = Family::Marcinkiewicz;
        e.phi_ = std::make_shared<PhiSpec>(std::move(phi));
        e.finish();
        return e;
    }

    static SpaceSpec orlicz(MFunc m) {
        SpaceSpec e;
        e.family_ = Family::Orlicz;
        e.m_ = std::make_shared<MFunc>(std::move(m));
        e.finish();
        return e;
    }

    static SpaceSpec exp_lp(double p) {
        if (!(p > 0.0)) throw std::invalid_argument("SpaceSpec::exp_lp: need p > 0");
        SpaceSpec e;
        e.family_ = Family::ExpLp;
        e.p_ = p;
        e.m_ = std::make_shared<MFunc>(MFunc::exp_p(p));
        e.finish();
        return e;
    }

    static SpaceSpec orlicz_lorentz(MFunc m, MFunc n) {
        SpaceSpec e;
        e.family_ = Family::OrliczLorentz;
        e.m_ = std::make_shared<MFunc>(std::move(m));
        e.n_ = std::make_shared<MFunc>(std::move(n));
        e.finish();
        return e;
    }

    static SpaceSpec ex(SeqSpace x, int n, ExConvention conv) {
        if (n < 1) throw std::invalid_argument("SpaceSpec::ex: need n >= 1");
        SpaceSpec e;
        e.family_ = Family::EX;
        e.seq_ = std::make_shared<SeqSpace>(std::move(x));
        e.exn_ = n;
        e.conv_ = conv;
        e.unit_norm_ = 1.0;  // block spaces keep the sequence normalization
        return e;
    }

    Family family() const { return family_; }

    double norm(const StepFunction& x) const {
        if (x.is_zero()) return 0.0;
        return raw_norm(x) / unit_norm_;
    }

    /// norm of the indicator of (0,s).
    double fundamental(double s) const {
        if (!(s > 0.0) || s > 1.0) throw std::domain_error("fundamental: s outside (0,1]");
        return norm(StepFunction::indicator(s));
    }

    std::string str() const {
        std::ostringstream os;
        switch (family_) {
            case Family::Lp:
                os << "lp:" << p_;
                break;
            case Family::Lorentz:
                os << "lorentz:" << r_ << ":" << phi_->str();
                break;
            case Family::Marcinkiewicz:
                os << "marcinkiewicz:" << phi_->str();
                break;
            case Family::Orlicz:
                os << "orlicz:" << m_->str();
                break;
            case Family::ExpLp:
                os << "explp:" << p_;
                break;
            case Family::OrliczLorentz:
                os << "ol:" << m_->str() << ":" << n_->str();
                break;
            case Family::EX:
                os << "ex:" << seq_->str() << ":" << exn_ << ":"
                   << (conv_ == ExConvention::Average ? "average" : "literal");
                break;
        }
        return os.str();
    }

    static SpaceSpec parse(const std::string& text) {
        const auto tok = split_colons(text);
        std::size_t pos = 0;
        if (tok.empty()) throw std::invalid_argument("SpaceSpec: empty spec");
        const std::string fam = tok[pos++];
        auto num = [&]() {
            if (pos >= tok.size()) throw std::invalid_argument("SpaceSpec: missing number");
            return std::stod(tok[pos++]);
        };
        SpaceSpec out = [&]() {
            if (fam == "lp") return lp(num());
            if (fam == "lorentz") {
                const double r = num();
                return lorentz(r, PhiSpec::parse_tokens(tok, pos));
            }
            if (fam == "marcinkiewicz") return marcinkiewicz(PhiSpec::parse_tokens(tok, pos));
            if (fam == "orlicz") return orlicz(MFunc::parse_tokens(tok, pos));
            if (fam == "explp") return exp_lp(num());
            if (fam == "ol") {
                MFunc m = MFunc::parse_tokens(tok, pos);
                MFunc n = MFunc::parse_tokens(tok, pos);
                return orlicz_lorentz(std::move(m), std::move(n));
            }
            if (fam == "ex") {
                SeqSpace x = SeqSpace::parse_tokens(tok, pos);
                if (pos + 2 > tok.size()) throw std::invalid_argument("SpaceSpec: ex needs n and convention");
                const int n = std::stoi(tok[pos++]);
                const std::string conv = tok[pos++];
                if (conv != "average" && conv != "literal")
                    throw std::invalid_argument("SpaceSpec: ex convention must be average|literal");
                return ex(std::move(x), n,
                          conv == "average" ? ExConvention::Average : ExConvention::Literal);
            }
            throw std::invalid_argument("SpaceSpec: unknown family '" + fam + "'");
        }();
        if (pos != tok.size())
            throw std::invalid_argument("SpaceSpec: trailing tokens in '" + text + "'");
        return out;
    }

    const PhiSpec& phi() const {
        if (!phi_) throw std::logic_error("SpaceSpec: no phi parameter");
        return *phi_;
    }

    double lp_exponent() const {
        if (family_ != Family::Lp && family_ != Family::ExpLp)
            throw std::logic_error("SpaceSpec: no exponent parameter");
        return p_;
    }

private:
    void finish() { unit_norm_ = raw_norm(StepFunction::constant(1.0)); }

    double raw_norm(const StepFunction& x) const {
        switch (family_) {
            case Family::Lp: {
                double s = 0.0;
                for (std::size_t i = 0; i < x.piece_count(); ++i)
                    s += std::pow(x.values()[i], p_) *
                         (x.breakpoints()[i + 1] - x.breakpoints()[i]);
                return std::pow(s, 1.0 / p_);
            }
            case Family::Lorentz: {
                double s = 0.0;
                double c = 0.0;
                double prev = 0.0;  // phi(c)^r
                for (const auto& [v, w] : x.rearranged_pieces()) {
                    c = std::min(c + w, 1.0);
                    const double cur = std::pow(phi_->eval(c), r_);
                    s += std::pow(v, r_) * (cur - prev);
                    prev = cur;
                }
                return std::pow(s, 1.0 / r_);
            }
            case Family::Marcinkiewicz:
                return marcinkiewicz_norm(x);
            case Family::Orlicz:
            case Family::ExpLp:
                return luxemburg(x.values(), widths(x), *m_);
            case Family::OrliczLorentz:
                return orlicz_lorentz_norm(x);
            case Family::EX: {
                const StepFunction xs = decreasing_rearrangement(x);
                std::vector<double> blocks(static_cast<std::size_t>(exn_));
                for (int i = 0; i < exn_; ++i) {
                    const double a = static_cast<double>(i) / exn_;
                    const double b = static_cast<double>(i + 1) / exn_;
                    const double mean = xs.integral(a, b) * exn_;
                    blocks[static_cast<std::size_t>(i)] =
                        conv_ == ExConvention::Average ? mean : mean / (exn_ * static_cast<double>(exn_));
                }
                return seq_->norm(blocks);
            }
        }
        return 0.0;
    }

    static std::vector<double> widths(const StepFunction& x) {
        std::vector<double> w(x.piece_count());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = x.breakpoints()[i + 1] - x.breakpoints()[i];
        return w;
    }

    double marcinkiewicz_norm(const StepFunction& x) const {
        const auto pieces = x.rearranged_pieces();
        std::vector<double> grid;
        double c = 0.0;
        for (const auto& [v, w] : pieces) {
            c = std::min(c + w, 1.0);
            grid.push_back(c);
        }
        for (double t : phi_->piece_points())
            if (t > 0.0 && t <= 1.0) grid.push_back(t);
        for (int k = 0; k <= 64; ++k) grid.push_back(std::exp(-14.0 * (64 - k) / 64.0));
        grid.push_back(1.0);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        double best = 0.0;
        for (double s : grid) {
            if (!(s > 0.0)) continue;
            double head = 0.0, t = 0.0;
            for (const auto& [v, w] : pieces) {
                const double step = std::min(w, s - t);
                if (step <= 0.0) break;
                head += v * step;
                t += step;
            }
            best = std::max(best, head / phi_->eval(s));
        }
        return best;
    }

    /// Luxemburg functional inf{lambda : sum w_i M(v_i/lambda) <= 1},
    /// bracket by doubling/halving from max|x| then bisect.
    static double luxemburg(const std::vector<double>& val, const std::vector<double>& w,
                            const MFunc& m) {
        double vmax = 0.0;
        for (double v : val) vmax = std::max(vmax, v);
        if (vmax == 0.0) return 0.0;
        auto modular = [&](double lam) {
            double s = 0.0;
            for (std::size_t i = 0; i < val.size(); ++i)
                if (val[i] > 0.0) s += w[i] * m.eval(val[i] / lam);
            return s;
        };
        double lo, hi;
        if (modular(vmax) > 1.0) {
            hi = vmax;
            int it = 0;
            do {
                hi *= 2.0;
                if (++it > 200) throw std::runtime_error("luxemburg: bracket expansion failed");
            } while (modular(hi) > 1.0);
            lo = hi / 2.0;
        } else {
            lo = vmax;
            int it = 0;
            while (modular(lo / 2.0) <= 1.0) {
                lo /= 2.0;
                if (++it > 200) throw std::runtime_error("luxemburg: bracket shrink failed");
            }
            hi = lo;
            lo = hi / 2.0;
        }
        for (int it = 0; it < 500; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = modular(mid);
            if (std::abs(g - 1.0) <= 1e-10) return mid;
            if (g > 1.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-15 * hi) break;
        }
        return hi;  // steep modular: lambda is pinned far tighter than the modular target
    }

    /// ||x* o Mt o Nt^{-1}||_{L_N} with Mt(t) = 1/M(1/t): substitute the
    /// rearrangement breakpoints through the composition.
    double orlicz_lorentz_norm(const StepFunction& x) const {
        const auto pieces = x.rearranged_pieces();
        auto substitute = [&](double s) {  // Nt(Mt^{-1}(s)) = 1/N(M^{-1}(1/s))
            if (s <= 0.0) return 0.0;
            return 1.0 / n_->eval(m_->inverse(1.0 / s));
        };
        std::vector<double> val;
        std::vector<double> w;
        double c = 0.0;
        double prev = 0.0;
        for (const auto& [v, width] : pieces) {
            c = std::min(c + width, 1.0);
            const double cur = substitute(c);
            val.push_back(v);
            w.push_back(cur - prev);
            prev = cur;
        }
        return luxemburg(val, w, *n_);
    }

    Family family_ = Family::Lp;
    double p_ = 1.0;
    double r_ = 1.0;
    std::shared_ptr<PhiSpec> phi_;
    std::shared_ptr<MFunc> m_;
    std::shared_ptr<MFunc> n_;
    std::shared_ptr<SeqSpace> seq_;
    int exn_ = 1;
    ExConvention conv_ = ExConvention::Average;
    double unit_norm_ = 1.0;
};

/// ||x|| in the Lorentz functional generated by an arbitrary phi
/// (no construction-time normalization; used by the sampled dual probe).
inline double lorentz_norm_raw(const PhiSpec& phi, const StepFunction& x) {
    double s = 0.0;
    double c = 0.0;
    double prev = 0.0;
    for (const auto& [v, w] : x.rearranged_pieces()) {
        c = std::min(c + w, 1.0);
        const double cur = phi.eval(c);
        s += v * (cur - prev);
        prev = cur;
    }
    return s;
}

/// Associate-space norm where it has a closed desk-scale form: L_p' for
/// L_p, and the Marcinkiewicz functional for Lorentz(1, phi).
inline double associate_norm(const SpaceSpec& e, const StepFunction& y);

/// Sampled lower bound for sup over ||y||_{E'}=1 of ||x||_{Lambda(psi_y)}.
/// Supported for Lp and Lorentz(1, .) families.
struct NormOneProbe {
    double value;
    int samples;
};

inline NormOneProbe norm_one_probe(const SpaceSpec& e, const StepFunction& x, int samples,
                                   std::uint64_t seed) {
    if (x.is_zero()) return {0.0, samples};
    double best = 0.0;
    auto consider = [&](const StepFunction& y) {
        const double ny = associate_norm(e, y);
        if (!(ny > 0.0)) return;
        const StepFunction yn = scale(y, 1.0 / ny);
        best = std::max(best, lorentz_norm_raw(psi_y_phi(yn), x));
    };
    consider(StepFunction::constant(1.0));
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::stream(seed, streams::kNormProbe, static_cast<std::uint64_t>(i));
        const int m = 1 + static_cast<int>(rng.next_below(6));
        std::vector<double> bp{0.0};
        for (int k = 0; k + 1 < m; ++k) bp.push_back(rng.next_unit());
        bp.push_back(1.0);
        std::sort(bp.begin(), bp.end());
        std::vector<double> val;
        for (int k = 0; k < m; ++k) val.push_back(4.0 * rng.next_unit());
        try {
            consider(StepFunction(bp, val));
        } catch (const std::invalid_argument&) {
            continue;  // degenerate random breakpoints
        }
    }
    return {best, samples};
}

inline double associate_norm(const SpaceSpec& e, const StepFunction& y) {
    switch (e.family()) {
        case SpaceSpec::Family::Lp: {
            const double p = e.lp_exponent();
            if (p <= 1.0 + 1e-9) return y.max_value();  // L_1' = L_inf
            const double q = p / (p - 1.0);
            double s = 0.0;
            for (std::size_t i = 0; i < y.piece_count(); ++i)
                s += std::pow(y.values()[i], q) * (y.breakpoints()[i + 1] - y.breakpoints()[i]);
            return std::pow(s, 1.0 / q);
        }
        case SpaceSpec::Family::Lorentz: {
            // Lambda(phi)' = M(phi): sup head/phi on the merged grid
            const PhiSpec& phi = e.phi();
            const auto pieces = y.rearranged_pieces();
            std::vector<double> grid;
            double c = 0.0;
            for (const auto& [v, w] : pieces) {
                c = std::min(c + w, 1.0);
                grid.push_back(c);
            }
            for (double t : phi.piece_points())
                if (t > 0.0 && t <= 1.0) grid.push_back(t);
            for (int k = 0; k <= 64; ++k) grid.push_back(std::exp(-14.0 * (64 - k) / 64.0));
            grid.push_back(1.0);
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            double best = 0.0;
            for (double s : grid) {
                if (!(s > 0.0)) continue;
                double head = 0.0, t = 0.0;
                for (const auto& [v, w] : pieces) {
                    const double step = std::min(w, s - t);
                    if (step <= 0.0) break;
                    head += v * step;
                    t += step;
                }
                best = std::max(best, head / phi.eval(s));
            }
            return best;
        }
        default:
            throw std::invalid_argument("norm_one_probe: unsupported family " + e.str());
    }
}

}  // namespace rr
