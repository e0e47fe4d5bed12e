#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rr/coincidence.hpp"
#include "rr/corpus.hpp"
#include "rr/criteria.hpp"
#include "rr/json_io.hpp"
#include "rr/permops.hpp"
#include "rr/report.hpp"

namespace rr {

/// Default space grid: two Lebesgue, two Lorentz, one Marcinkiewicz, one
/// exponential Orlicz space. All six carry genuine rearrangement-invariant
/// norms (concave or quasi-concave parameters, convex generator): the
/// zero-violation inequalities are theorems only on such spaces. The
/// p < 1 log-family functionals are exercised by the series-criterion
/// checks instead.
inline std::vector<std::string> default_space_grid() {
    return {"lp:1",
            "lorentz:1:power:1:0.5",
            "lp:2",
            "lorentz:1:phi_p:1",
            "marcinkiewicz:phi_p:1",
            "orlicz:exp_p:1"};
}

struct SuiteConfig {
    std::uint64_t seed = 20240601;
    std::string out_dir = "reports";
    double rel_slack = 1e-9;

    int a_n_lo = 2, a_n_hi = 7, a_trials = 200;

    int b_n_lo = 2, b_n_hi = 6, b_trials = 100;
    std::vector<std::pair<double, double>> b_pairs = {{1, 1}, {1, 2}, {2, 4}, {2, 2}};

    int i123_n_lo = 2, i123_n_hi = 6, i123_trials = 30;
    std::vector<double> i123_q = {1.0, 2.0};
    std::vector<std::string> spaces = default_space_grid();

    int t7_n_lo = 2, t7_n_hi = 6, t7_trials = 25;
    std::vector<double> t7_q = {1.0, 2.0};

    int t1019_n_hi = 8;
    long t1019_jmax = 400;

    int t27_n_lo = 2, t27_n_hi = 7, t27_trials = 10;
    int td_n_hi = 5, td_trials = 8;
    // regression pins for the equivalence constants (drift budget 20%)
    double t27_lower_pin = 4.00;    // max rhs/lhs over the pinned corpus
    double t27_upper_pin = 1.00;    // max lhs/rhs
    double td_lower_pin = 1.1776;   // max rhs/lhs for the cubic mean
    double td_upper_pin = 1.00;

    static SuiteConfig from_json(const json& j) {
        SuiteConfig c;
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        if (j.contains("rel_slack")) c.rel_slack = j.at("rel_slack").get<double>();
        auto get = [&](const char* suite, const char* key, auto& slot) {
            if (j.contains(suite) && j.at(suite).contains(key))
                slot = j.at(suite).at(key).get<std::decay_t<decltype(slot)>>();
        };
        get("mean_max", "n_lo", c.a_n_lo);
        get("mean_max", "n_hi", c.a_n_hi);
        get("mean_max", "trials", c.a_trials);
        get("moment_bounds", "n_lo", c.b_n_lo);
        get("moment_bounds", "n_hi", c.b_n_hi);
        get("moment_bounds", "trials", c.b_trials);
        if (j.contains("moment_bounds") && j.at("moment_bounds").contains("pairs")) {
            c.b_pairs.clear();
            for (const auto& pq : j.at("moment_bounds").at("pairs"))
                c.b_pairs.emplace_back(pq.at(0).get<double>(), pq.at(1).get<double>());
        }
        get("operator_bounds", "n_lo", c.i123_n_lo);
        get("operator_bounds", "n_hi", c.i123_n_hi);
        get("operator_bounds", "trials", c.i123_trials);
        get("operator_bounds", "q_list", c.i123_q);
        get("operator_bounds", "spaces", c.spaces);
        get("diagonal_reduction", "n_lo", c.t7_n_lo);
        get("diagonal_reduction", "n_hi", c.t7_n_hi);
        get("diagonal_reduction", "trials", c.t7_trials);
        get("diagonal_reduction", "q_list", c.t7_q);
        get("series_criterion", "n_hi", c.t1019_n_hi);
        get("series_criterion", "j_max", c.t1019_jmax);
        get("sequence_averages", "n_lo", c.t27_n_lo);
        get("sequence_averages", "n_hi", c.t27_n_hi);
        get("sequence_averages", "trials", c.t27_trials);
        get("sequence_averages", "d_n_hi", c.td_n_hi);
        get("sequence_averages", "d_trials", c.td_trials);
        get("sequence_averages", "lower_pin", c.t27_lower_pin);
        get("sequence_averages", "upper_pin", c.t27_upper_pin);
        get("sequence_averages", "d_lower_pin", c.td_lower_pin);
        get("sequence_averages", "d_upper_pin", c.td_upper_pin);
        return c;
    }

    /// Echoed verbatim into every report; the output directory is not part
    /// of the mathematical configuration so it stays out (reports must be
    /// byte-identical for a fixed seed wherever they are written).
    json to_json() const {
        json pairs = json::array();
        for (const auto& [p, q] : b_pairs) pairs.push_back(json::array({p, q}));
        return json{
            {"seed", seed},
            {"rel_slack", rel_slack},
            {"mean_max", {{"n_lo", a_n_lo}, {"n_hi", a_n_hi}, {"trials", a_trials}}},
            {"moment_bounds",
             {{"n_lo", b_n_lo}, {"n_hi", b_n_hi}, {"trials", b_trials}, {"pairs", pairs}}},
            {"operator_bounds",
             {{"n_lo", i123_n_lo},
              {"n_hi", i123_n_hi},
              {"trials", i123_trials},
              {"q_list", i123_q},
              {"spaces", spaces}}},
            {"diagonal_reduction",
             {{"n_lo", t7_n_lo}, {"n_hi", t7_n_hi}, {"trials", t7_trials}, {"q_list", t7_q}}},
            {"series_criterion", {{"n_hi", t1019_n_hi}, {"j_max", t1019_jmax}}},
            {"sequence_averages",
             {{"n_lo", t27_n_lo},
              {"n_hi", t27_n_hi},
              {"trials", t27_trials},
              {"d_n_hi", td_n_hi},
              {"d_trials", td_trials},
              {"lower_pin", t27_lower_pin},
              {"upper_pin", t27_upper_pin},
              {"d_lower_pin", td_lower_pin},
              {"d_upper_pin", td_upper_pin}}}};
    }
};

/// Mean of max |x_{i,pi(i)}| sits between the scaled head sums, with the
/// exact 1/(2n) and 1/n constants; the identity cross-checks against the
/// exact coincidence law.
inline SuiteReport suite_mean_max(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "mean_max";
    rep.config_echo = cfg.to_json();
    const double slack = 1e-12;
    for (int n = cfg.a_n_lo; n <= cfg.a_n_hi; ++n) {
        const MatrixCorpus corpus = standard_corpus(cfg.seed, n, cfg.a_trials);
        for (std::size_t ci = 0; ci < corpus.matrices.size(); ++ci) {
            const MatrixN& x = corpus.matrices[ci];
            const double mean_max = tq_distribution(x, kQInf).mean();
            const auto star = matrix_rearrangement(x);
            double head = 0.0;
            for (int k = 0; k < n; ++k) head += star[static_cast<std::size_t>(k)];
            const double lo = head / (2.0 * n);
            const double hi = head / n;
            const double scale = std::max(1.0, hi);
            const bool pass = lo <= mean_max + slack * scale && mean_max <= hi + slack * scale;
            rep.check("n=" + std::to_string(n) + "/" + corpus.labels[ci], digest_matrix(x), lo, hi,
                      hi > 0 ? mean_max / hi : 0.0, pass);
        }
        // identity: mean of max equals P(at least one fixed point)
        const double mm = tq_distribution(MatrixN::identity(n), kQInf).mean();
        const double tau1 = to_double(fixed_point_distribution(n).tau[1]);
        rep.check("n=" + std::to_string(n) + "/identity-vs-rencontres",
                  digest_matrix(MatrixN::identity(n)), mm, tau1, std::abs(mm - tau1),
                  std::abs(mm - tau1) <= 1e-12, "mean-max equals 1 - P(no fixed point)");
    }
    return rep;
}

/// Moment form of the two-sided estimate with the constant 1/10.
inline SuiteReport suite_moment_bounds(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "moment_bounds";
    rep.config_echo = cfg.to_json();
    const double slack = cfg.rel_slack;
    for (const auto& [p, q] : cfg.b_pairs) {
        if (p > q) throw std::invalid_argument("suite_moment_bounds: pairs must have p <= q");
        for (int n = cfg.b_n_lo; n <= cfg.b_n_hi; ++n) {
            const MatrixCorpus corpus = standard_corpus(cfg.seed + 1, n, cfg.b_trials);
            for (std::size_t ci = 0; ci < corpus.matrices.size(); ++ci) {
                const MatrixN& x = corpus.matrices[ci];
                const auto dist = tq_distribution(x, q);
                double moment = 0.0;
                for (const auto& a : dist.atoms) moment += std::pow(a.value, p) * a.mass.to_double();
                const double middle = std::pow(moment, 1.0 / p);
                const auto star = matrix_rearrangement(x);
                double hp = 0.0;
                for (int k = 0; k < n; ++k) hp += std::pow(star[static_cast<std::size_t>(k)], p);
                const double a_term = std::pow(hp / n, 1.0 / p);
                const double b_term = tail_lq_term(x, q);
                const double bound = a_term + b_term;
                const double scale = std::max(1.0, bound);
                const bool pass =
                    middle <= bound + slack * scale && middle >= bound / 10.0 - slack * scale;
                std::string note;
                if (corpus.labels[ci] == "all-ones" && p == 1.0 && q == 1.0)
                    note = "equality case: middle = n = bound";
                rep.check("p=" + std::to_string(p) + "/q=" + std::to_string(q) + "/n=" +
                              std::to_string(n) + "/" + corpus.labels[ci],
                          digest_matrix(x), middle, bound, bound > 0 ? middle / bound : 0.0, pass,
                          note);
            }
        }
    }
    return rep;
}

/// The three operator inequalities: the 1/12 lower bound for finite q, the
/// exact [1/2, 1] band at q = inf, and the measured inverse constants,
/// including the unbounded growth on the sup-norm proxy family.
inline SuiteReport suite_operator_bounds(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "operator_bounds";
    rep.config_echo = cfg.to_json();
    const double slack = cfg.rel_slack;
    std::vector<SpaceSpec> spaces;
    for (const auto& s : cfg.spaces) spaces.push_back(SpaceSpec::parse(s));
    // spaces with a predicted uniform inverse constant: Lebesgue spaces
    // contain some L_p (every q), the power Lorentz space is dominated by
    // a power (every q), the log family and the exponential family only
    // sit in the class when their exponent stays below q
    auto predicted = [&](const std::string& s, double q) {
        if (s == "lp:1" || s == "lp:2" || s == "lorentz:1:power:1:0.5") return true;
        if (s == "lorentz:1:phi_p:1" || s == "orlicz:exp_p:1") return q > 1.0;
        return false;
    };

    std::map<std::string, std::map<int, double>> inverse_constant;  // space -> n -> max ratio
    for (int n = cfg.i123_n_lo; n <= cfg.i123_n_hi; ++n) {
        const MatrixCorpus corpus = standard_corpus(cfg.seed + 2, n, cfg.i123_trials);
        for (std::size_t ci = 0; ci < corpus.matrices.size(); ++ci) {
            const MatrixN& x = corpus.matrices[ci];
            const StepFunction ux = u_function(x);
            const StepFunction tinf = tq_distribution(x, kQInf).to_step_decreasing();
            for (std::size_t si = 0; si < spaces.size(); ++si) {
                const double nu = spaces[si].norm(ux);
                const double nt = spaces[si].norm(tinf);
                const double scale = std::max(1.0, nu);
                const bool pass2 = 0.5 * nu <= nt + slack * scale && nt <= nu + slack * scale;
                rep.check("max_form/n=" + std::to_string(n) + "/" + corpus.labels[ci] + "/" +
                              cfg.spaces[si],
                          digest_matrix(x), 0.5 * nu, nu, nu > 0 ? nt / nu : 0.0, pass2);
            }
            for (double q : cfg.i123_q) {
                const StepFunction tq = tq_distribution(x, q).to_step_decreasing();
                const double tail = tail_lq_term(x, q);
                for (std::size_t si = 0; si < spaces.size(); ++si) {
                    const double nu = spaces[si].norm(ux);
                    const double nt = spaces[si].norm(tq);
                    const double lhs = (nu + tail) / 12.0;
                    const double scale = std::max(1.0, nu + tail);
                    rep.check("lower_bound/q=" + std::to_string(q) + "/n=" + std::to_string(n) + "/" +
                                  corpus.labels[ci] + "/" + cfg.spaces[si],
                              digest_matrix(x), lhs, nt, lhs > 0 ? nt / lhs : 0.0,
                              lhs <= nt + slack * scale);
                    if (nu + tail > 1e-12) {
                        auto& slot = inverse_constant[cfg.spaces[si] + "/q=" + std::to_string(q)][n];
                        slot = std::max(slot, nt / (nu + tail));
                    }
                }
            }
        }
    }
    // tightness witness: identity at n = 2 in L_1 meets the 1/2 bound exactly
    {
        const MatrixN i2 = MatrixN::identity(2);
        const SpaceSpec l1 = SpaceSpec::lp(1.0);
        const double nt = l1.norm(tq_distribution(i2, kQInf).to_step_decreasing());
        const double nu = l1.norm(u_function(i2));
        rep.check("max_form/tightness/I2/lp:1", digest_matrix(i2), nt, 0.5 * nu,
                  std::abs(nt - 0.5 * nu), std::abs(nt - 0.5 * nu) <= 1e-12,
                  "left bound attained");
    }
    // (3): stability of the measured constants on the predicted spaces
    for (const auto& [key, by_n] : inverse_constant) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& [n, c] : by_n) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const std::string space = key.substr(0, key.find("/q="));
        const double q = std::stod(key.substr(key.find("/q=") + 3));
        const bool stable = hi <= 2.0 * lo + slack;
        rep.check("inverse/stability/" + key, 0, lo, hi, hi,
                  predicted(space, q) ? stable : true,
                  predicted(space, q) ? "asserted: max/min <= 2 across n"
                                      : "measured only (no uniform prediction)");
    }
    // (3) fails without a lower function-norm bound: the Lorentz proxy of
    // the sup norm sees the full coincidence count
    {
        const SpaceSpec proxy = SpaceSpec::lorentz(
            1.0, PhiSpec::tabulated({{1e-6, 1.0}, {1.0, 1.0}}));  // min(1, 10^6 t)
        double prev = 0.0;
        bool growing = true;
        for (int n = 2; n <= 8; n += 2) {
            const MatrixN in = MatrixN::identity(n);
            const double c =
                proxy.norm(tq_distribution(in, 1.0).to_step_decreasing()) / proxy.norm(u_function(in));
            growing = growing && c >= prev * 1.3;
            rep.check("inverse/proxy-growth/n=" + std::to_string(n), digest_matrix(in), prev, c, c,
                      true, "measured inverse constant on the sup-norm proxy");
            prev = c;
        }
        rep.check("inverse/proxy-growth/asserted", 0, 0.0, prev, prev, growing,
                  "constant grows by >= 1.3x per step of n");
    }
    return rep;
}

/// Factor 7 between the general bound and the diagonal bound.
inline SuiteReport suite_diagonal_reduction(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "diagonal_reduction";
    rep.config_echo = cfg.to_json();
    const double slack = cfg.rel_slack;
    std::vector<SpaceSpec> spaces;
    for (const auto& s : cfg.spaces) spaces.push_back(SpaceSpec::parse(s));
    for (std::size_t si = 0; si < spaces.size(); ++si) {
        for (double q : cfg.t7_q) {
            double c_diag = 0.0, c_full = 0.0;
            std::string diag_witness, full_witness;
            for (int n = cfg.t7_n_lo; n <= cfg.t7_n_hi; ++n) {
                // diagonal corpus: identity prefixes plus random diagonals
                std::vector<std::pair<MatrixN, std::string>> diags;
                for (int k = 1; k <= n; ++k)
                    diags.emplace_back(MatrixN::identity_k(n, k), "identity-prefix-" + std::to_string(k));
                for (int t = 0; t < cfg.t7_trials; ++t) {
                    Rng rng = Rng::stream(cfg.seed + 3, streams::kMatrixCorpus,
                                          (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(t));
                    diags.emplace_back(random_diagonal_matrix(rng, n), "diagonal-" + std::to_string(t));
                }
                for (const auto& [y, label] : diags) {
                    const double nu = spaces[si].norm(u_function(y));
                    if (nu < 1e-12) continue;
                    const double nt = spaces[si].norm(tq_distribution(y, q).to_step_decreasing());
                    if (nt / nu > c_diag) {
                        c_diag = nt / nu;
                        diag_witness = "n=" + std::to_string(n) + "/" + label;
                    }
                }
                const MatrixCorpus corpus = standard_corpus(cfg.seed + 4, n, cfg.t7_trials);
                for (std::size_t ci = 0; ci < corpus.matrices.size(); ++ci) {
                    const MatrixN& x = corpus.matrices[ci];
                    const double denom =
                        spaces[si].norm(u_function(x)) + tail_lq_term(x, q);
                    if (denom < 1e-12) continue;
                    const double nt = spaces[si].norm(tq_distribution(x, q).to_step_decreasing());
                    if (nt / denom > c_full) {
                        c_full = nt / denom;
                        full_witness = "n=" + std::to_string(n) + "/" + corpus.labels[ci];
                    }
                }
            }
            rep.check("q=" + std::to_string(q) + "/" + cfg.spaces[si], 0, c_full, 7.0 * c_diag,
                      c_diag > 0 ? c_full / c_diag : 0.0,
                      c_full <= 7.0 * c_diag * (1.0 + slack),
                      "diag witness " + diag_witness + "; full witness " + full_witness);
        }
    }
    return rep;
}

/// The series criterion against measured diagonal constants, the growth of
/// the critical family, the Lebesgue containment constant, and the
/// exponential split.
inline SuiteReport suite_series_criterion(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "series_criterion";
    rep.config_echo = cfg.to_json();
    const double slack = cfg.rel_slack;

    auto diag_constant = [&](const SpaceSpec& e, double q, int n_hi, double* per_n = nullptr,
                             int per_n_stride = 0) {
        double best = 0.0;
        for (int n = 2; n <= n_hi; ++n) {
            double best_n = 0.0;
            for (int k = 1; k <= n; ++k) {
                const MatrixN y = MatrixN::identity_k(n, k);
                const double nu = e.norm(u_function(y));
                if (nu < 1e-12) continue;
                const double r = e.norm(tq_distribution(y, q).to_step_decreasing()) / nu;
                best_n = std::max(best_n, r);
            }
            for (int t = 0; t < 20; ++t) {
                Rng rng = Rng::stream(cfg.seed + 5, streams::kMatrixCorpus,
                                      (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(t));
                const MatrixN y = random_diagonal_matrix(rng, n);
                const double nu = e.norm(u_function(y));
                if (nu < 1e-12) continue;
                const double r = e.norm(tq_distribution(y, q).to_step_decreasing()) / nu;
                best_n = std::max(best_n, r);
            }
            if (per_n && per_n_stride && n % per_n_stride == 0) per_n[n / per_n_stride - 1] = best_n;
            best = std::max(best, best_n);
        }
        return best;
    };

    // finite-series spaces: measured constant below the truncated series value
    for (double p : {0.25, 0.5}) {
        const PhiSpec phi = PhiSpec::log_family(p);
        const auto g = gamma(phi, 1.0, cfg.t1019_jmax);
        const SpaceSpec lam = SpaceSpec::lorentz(1.0, phi);
        const double measured = diag_constant(lam, 1.0, cfg.t1019_n_hi);
        const double budget = g.value + g.truncation_estimate;
        rep.check("gamma-bound/phi_p=" + std::to_string(p) + "/q=1", 0, measured, budget,
                  budget > 0 ? measured / budget : 0.0, measured <= budget + slack,
                  "reported reverse direction: q*e*measured*1.5 = " +
                      std::to_string(std::exp(1.0) * measured * 1.5) +
                      " vs series value " + std::to_string(g.value));
    }

    // closed form: the identity weight gives e - 1
    {
        const auto g = gamma(PhiSpec::power(1.0, 1.0), 1.0, cfg.t1019_jmax);
        rep.check("gamma-closed-form/identity-weight", 0, g.value, std::exp(1.0) - 1.0,
                  std::abs(g.value - (std::exp(1.0) - 1.0)),
                  std::abs(g.value - (std::exp(1.0) - 1.0)) <= 1e-6);
    }

    // report both diagonal-norm quantities side by side: the exact norm
    // uses tail measures of the coincidence law; the display form plugs the
    // point masses into phi directly (reported, never asserted equal)
    {
        const PhiSpec phi = PhiSpec::log_family(1.0);
        const SpaceSpec lam = SpaceSpec::lorentz(1.0, phi);
        for (const auto& [n, k] : std::vector<std::pair<int, int>>{{6, 3}, {8, 5}}) {
            const MatrixN y = MatrixN::identity_k(n, k);
            const double exact_tails = lam.norm(tq_distribution(y, 1.0).to_step_decreasing());
            double display = 0.0;
            for (int j = 1; j <= k; ++j) display += phi.eval(to_double(mu_exact(n, k, j)));
            rep.check("diagonal-norm-forms/n=" + std::to_string(n) + "/k=" + std::to_string(k),
                      digest_matrix(y), exact_tails, display,
                      display > 0 ? exact_tails / display : 0.0, true,
                      "exact tail-measure norm vs point-mass display form (reported)");
        }
    }

    // critical family: the measured diagonal constant keeps growing in n
    {
        const SpaceSpec lam = SpaceSpec::lorentz(1.0, PhiSpec::log_family(1.0));
        double per_n[4] = {0, 0, 0, 0};
        diag_constant(lam, 1.0, 8, per_n, 2);
        bool growing = true;
        for (int i = 1; i < 4; ++i) growing = growing && per_n[i] > per_n[i - 1] + 1e-9;
        rep.check("divergent-trend/phi_p=1/q=1", 0, per_n[0], per_n[3], per_n[3], growing,
                  "constants at n=2,4,6,8: " + std::to_string(per_n[0]) + ", " +
                      std::to_string(per_n[1]) + ", " + std::to_string(per_n[2]) + ", " +
                      std::to_string(per_n[3]));
    }

    // Lebesgue containment: constant at most 20(a+1)p with a = 1
    for (double p : {2.0, 4.0}) {
        const SpaceSpec e = SpaceSpec::lp(p);
        for (double q : cfg.t7_q) {
            const double measured = diag_constant(e, q, std::min(cfg.t1019_n_hi, 7));
            const double bound = 20.0 * 2.0 * p;
            rep.check("lebesgue-containment/p=" + std::to_string(p) + "/q=" + std::to_string(q), 0,
                      measured, bound, measured / bound, measured <= bound + slack);
        }
    }

    // exponential split: the series test rules out p > q and spares p < q
    for (double eps : {0.25, 0.5, 1.0}) {
        rep.check("exp-split/diverges/p=2/q=1/eps=" + std::to_string(eps), 0, 0.0, 0.0, 0.0,
                  exp_series_diverges(2.0, 1.0, eps, 5000));
        rep.check("exp-split/converges/p=0.5/q=1/eps=" + std::to_string(eps), 0, 0.0, 0.0, 0.0,
                  !exp_series_diverges(0.5, 1.0, eps, 5000));
    }

    // block averaging never expands a norm on the grid
    {
        std::vector<SpaceSpec> spaces;
        for (const auto& s : cfg.spaces) spaces.push_back(SpaceSpec::parse(s));
        bool ok = true;
        for (std::uint64_t i = 0; i < 20; ++i) {
            Rng rng = Rng::stream(cfg.seed + 6, streams::kStepCorpus, i);
            const StepFunction x = random_step_function(rng);
            for (int n : {2, 4, 8})
                for (const auto& e : spaces)
                    ok = ok && e.norm(u_function(bn_operator(x, n))) <= e.norm(x) + 1e-9;
        }
        rep.check("block-averaging-contraction", 0, 0.0, 0.0, 0.0, ok,
                  "||U B_n x|| <= ||x|| across the grid");
    }
    return rep;
}

/// Sequence-space averages against the head-mean plus subsampled-norm form,
/// and the cubic double-average equivalence.
inline SuiteReport suite_sequence_averages(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "sequence_averages";
    rep.config_echo = cfg.to_json();
    const std::vector<std::pair<SeqSpace, std::string>> xgrid = {
        {SeqSpace::lp(1.0), "l1"},
        {SeqSpace::lp(2.0), "l2"},
        {SeqSpace::linf(), "linf"},
        {SeqSpace::head_sum(2), "head_sum:2"},
        {SeqSpace::head_sum(3), "head_sum:3"}};
    double worst_lower = 0.0, worst_upper = 0.0;
    for (int n = cfg.t27_n_lo; n <= cfg.t27_n_hi; ++n) {
        const MatrixCorpus corpus = standard_corpus(cfg.seed + 7, n, cfg.t27_trials);
        for (std::size_t ci = 0; ci < corpus.matrices.size(); ++ci) {
            const MatrixN& x = corpus.matrices[ci];
            for (const auto& [X, xname] : xgrid) {
                const auto chk = sequence_average_check(x, X);
                if (chk.rhs < 1e-12) continue;
                worst_lower = std::max(worst_lower, chk.rhs / std::max(chk.lhs, 1e-300));
                worst_upper = std::max(worst_upper, chk.lhs / chk.rhs);
            }
            // the l1 case is the mean coincidence sum itself
            const double via_seq = sequence_norm_avg_exact(x, SeqSpace::lp(1.0));
            const double via_tq = tq_distribution(x, 1.0).mean();
            rep.check("reduction-to-mean/n=" + std::to_string(n) + "/" + corpus.labels[ci],
                      digest_matrix(x), via_seq, via_tq, std::abs(via_seq - via_tq),
                      std::abs(via_seq - via_tq) <= 1e-9 * std::max(1.0, via_tq));
        }
    }
    rep.check("two-sided/lower-constant", 0, worst_lower, cfg.t27_lower_pin * 1.2, worst_lower,
              worst_lower <= cfg.t27_lower_pin * 1.2,
              "pinned " + std::to_string(cfg.t27_lower_pin) + ", drift budget 20%");
    rep.check("two-sided/upper-constant", 0, worst_upper, cfg.t27_upper_pin * 1.2, worst_upper,
              worst_upper <= cfg.t27_upper_pin * 1.2,
              "pinned " + std::to_string(cfg.t27_upper_pin) + ", drift budget 20%");

    double d_lo = 0.0, d_hi = 0.0;
    for (int n = 1; n <= cfg.td_n_hi; ++n) {
        for (int t = 0; t < cfg.td_trials; ++t) {
            Rng rng = Rng::stream(cfg.seed + 8, streams::kArraySample,
                                  (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(t));
            std::vector<double> e(static_cast<std::size_t>(n) * n * n);
            for (auto& v : e) v = rng.next_unit();
            const Array3N y(n, e);
            const double lhs = double_mean_max_exact(y);
            std::vector<double> star(y.e);
            std::sort(star.rbegin(), star.rend());
            double mean = 0.0;
            for (int k = 0; k < n * n; ++k) mean += star[static_cast<std::size_t>(k)];
            mean /= (n * n);
            if (mean < 1e-12) continue;
            d_lo = std::max(d_lo, mean / std::max(lhs, 1e-300));
            d_hi = std::max(d_hi, lhs / mean);
            if (n == 1)
                rep.check("cubic/n=1", digest_array(y), lhs, mean, std::abs(lhs - mean),
                          std::abs(lhs - mean) <= 1e-12, "single entry: both sides coincide");
        }
    }
    rep.check("cubic/lower-constant", 0, d_lo, cfg.td_lower_pin * 1.2, d_lo,
              d_lo <= cfg.td_lower_pin * 1.2,
              "pinned " + std::to_string(cfg.td_lower_pin) + ", drift budget 20%");
    rep.check("cubic/upper-constant", 0, d_hi, cfg.td_upper_pin * 1.2, d_hi,
              d_hi <= cfg.td_upper_pin * 1.2,
              "pinned " + std::to_string(cfg.td_upper_pin) + ", drift budget 20%");
    return rep;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"mean_max",      "moment_bounds",
                                                   "operator_bounds",     "diagonal_reduction",
                                                   "series_criterion",  "sequence_averages"};
    return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "mean_max") return suite_mean_max(cfg);
    if (name == "moment_bounds") return suite_moment_bounds(cfg);
    if (name == "operator_bounds") return suite_operator_bounds(cfg);
    if (name == "diagonal_reduction") return suite_diagonal_reduction(cfg);
    if (name == "series_criterion") return suite_series_criterion(cfg);
    if (name == "sequence_averages") return suite_sequence_averages(cfg);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

/// Runs every requested suite and writes <out>/<suite>.json and .csv plus a
/// summary. Returns true when every asserted case passed.
inline bool run_all(const SuiteConfig& cfg, const std::vector<std::string>& which = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const auto& names = which.empty() ? suite_names() : which;
    json summary;
    bool all_pass = true;
    for (const auto& name : names) {
        const SuiteReport rep = run_suite(name, cfg);
        write_text_file(cfg.out_dir + "/" + name + ".json", rep.to_json().dump(2) + "\n");
        write_text_file(cfg.out_dir + "/" + name + ".csv", rep.to_csv());
        summary[name] = {{"cases", rep.cases.size()}, {"failures", rep.failures()}};
        all_pass = all_pass && rep.passed();
    }
    summary["pass"] = all_pass;
    summary["version"] = kVersion;
    write_text_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
    return all_pass;
}

}  // namespace rr
