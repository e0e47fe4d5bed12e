#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rr/step_function.hpp"

namespace rr {

/// Square matrix of nonnegative reals, the domain of the rearrangement
/// operators. Row-major storage.
class MatrixN {
public:
    MatrixN(int n, std::vector<double> entries) : n_(n), e_(std::move(entries)) {
        if (n < 1) throw std::invalid_argument("MatrixN: n must be >= 1");
        if (e_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
            throw std::invalid_argument("MatrixN: wrong entry count");
        for (double v : e_)
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("MatrixN: entries must be finite and >= 0");
    }

    explicit MatrixN(int n) : MatrixN(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)) {}

    static MatrixN identity(int n) {
        MatrixN m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    /// diag(1,...,1,0,...,0) with k ones.
    static MatrixN identity_k(int n, int k) {
        if (k < 0 || k > n) throw std::invalid_argument("identity_k: k outside [0,n]");
        MatrixN m(n);
        for (int i = 0; i < k; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static MatrixN diagonal(const std::vector<double>& d) {
        MatrixN m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int n() const { return n_; }
    double& at(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& entries() const { return e_; }

    bool is_diagonal() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j && at(i, j) != 0.0) return false;
        return true;
    }

    /// 0/1 entries with exactly n ones.
    bool is_qn() const {
        int ones = 0;
        for (double v : e_) {
            if (v == 1.0)
                ++ones;
            else if (v != 0.0)
                return false;
        }
        return ones == n_;
    }

    /// entries in [0,1] with total sum <= n (tolerance for float corpora).
    bool is_pn(double eps = 1e-12) const {
        double total = 0.0;
        for (double v : e_) {
            if (v > 1.0 + eps) return false;
            total += v;
        }
        return total <= n_ + eps;
    }

    bool is_permutation() const {
        if (!is_qn()) return false;
        for (int i = 0; i < n_; ++i) {
            int row = 0, col = 0;
            for (int j = 0; j < n_; ++j) {
                if (at(i, j) == 1.0) ++row;
                if (at(j, i) == 1.0) ++col;
            }
            if (row != 1 || col != 1) return false;
        }
        return true;
    }

    bool operator==(const MatrixN& o) const { return n_ == o.n_ && e_ == o.e_; }

private:
    int n_;
    std::vector<double> e_;
};

/// Cubic array, the domain of the double-rearrangement mean.
struct Array3N {
    int n;
    std::vector<double> e;  // e[(i*n + j)*n + k]

    Array3N(int n_, std::vector<double> entries) : n(n_), e(std::move(entries)) {
        if (n < 1) throw std::invalid_argument("Array3N: n must be >= 1");
        const std::size_t want =
            static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        if (e.size() != want) throw std::invalid_argument("Array3N: wrong entry count");
        for (double v : e)
            if (!std::isfinite(v)) throw std::invalid_argument("Array3N: entries must be finite");
    }

    double at(int i, int j, int k) const {
        return e[(static_cast<std::size_t>(i) * n + j) * static_cast<std::size_t>(n) + k];
    }
    double& at(int i, int j, int k) {
        return e[(static_cast<std::size_t>(i) * n + j) * static_cast<std::size_t>(n) + k];
    }
};

/// All n^2 entries in decreasing order.
inline std::vector<double> matrix_rearrangement(const MatrixN& x) {
    std::vector<double> v(x.entries());
    std::sort(v.rbegin(), v.rend());
    return v;
}

/// Ux: the top n entries laid out on the uniform n-grid.
inline StepFunction u_function(const MatrixN& x) {
    const auto star = matrix_rearrangement(x);
    const int n = x.n();
    std::vector<double> bp{0.0};
    std::vector<double> val;
    for (int k = 0; k < n; ++k) {
        val.push_back(star[static_cast<std::size_t>(k)]);
        bp.push_back(static_cast<double>(k + 1) / n);
    }
    bp.back() = 1.0;
    return StepFunction(std::move(bp), std::move(val));
}

/// ((1/n) sum_{k>n} (x*_k)^q)^(1/q); the below-diagonal tail term.
inline double tail_lq_term(const MatrixN& x, double q) {
    if (std::isinf(q)) throw std::domain_error("tail_lq_term: q must be finite");
    if (!(q >= 1.0)) throw std::domain_error("tail_lq_term: q must be >= 1");
    const auto star = matrix_rearrangement(x);
    const int n = x.n();
    double s = 0.0;
    for (std::size_t k = static_cast<std::size_t>(n); k < star.size(); ++k)
        s += std::pow(star[k], q);
    return std::pow(s / n, 1.0 / q);
}

/// Diagonal matrix of block means: the composition with U is the
/// conditional expectation onto the uniform n-grid.
inline MatrixN bn_operator(const StepFunction& x, int n) {
    if (n < 1) throw std::domain_error("bn_operator: n must be >= 1");
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        d[static_cast<std::size_t>(k)] =
            n * x.integral(static_cast<double>(k) / n, static_cast<double>(k + 1) / n);
    return MatrixN::diagonal(d);
}

/// The elementary move u -> v: the (1,1) entry slides along its row into
/// the empty second column. Precondition (validated): u11 > 0 and column 2
/// is identically zero.
inline MatrixN elementary_shift(const MatrixN& u) {
    if (!(u.n() >= 2)) throw std::domain_error("elementary_shift: need n >= 2");
    if (!(u.at(0, 0) > 0.0)) throw std::domain_error("elementary_shift: u11 must be positive");
    for (int i = 0; i < u.n(); ++i)
        if (u.at(i, 1) != 0.0) throw std::domain_error("elementary_shift: column 2 must vanish");
    MatrixN v(u);
    v.at(0, 1) = v.at(0, 0);
    v.at(0, 0) = 0.0;
    return v;
}

/// Repeated single-entry moves carrying a 0/1 matrix with n ones to a
/// permutation matrix. Each move slides one 1 from a column holding two or
/// more of them into an empty column (staying in its row), or the
/// transposed move for rows; either direction is an instance of the
/// elementary shift up to relabeling, so the enumerated operator values
/// only ever move up in the head-sum order.
///
/// Tie-break: columns are scanned left-to-right for the first doubled one,
/// rows top-down for the moved entry and the target chosen first in scan
/// order; the row case mirrors this. Returns the permutation matrix and
/// the number of moves (at most 2n-2: every move fills an empty line).
inline std::pair<MatrixN, int> reduce_to_permutation(const MatrixN& x0,
                                                     std::vector<MatrixN>* chain = nullptr) {
    if (!x0.is_qn()) throw std::domain_error("reduce_to_permutation: input must be 0/1 with n ones");
    MatrixN x(x0);
    const int n = x.n();
    int steps = 0;
    if (chain) chain->push_back(x);
    while (!x.is_permutation()) {
        int from_col = -1;
        for (int j = 0; j < n && from_col < 0; ++j) {
            int cnt = 0;
            for (int i = 0; i < n; ++i) cnt += x.at(i, j) == 1.0;
            if (cnt >= 2) from_col = j;
        }
        if (from_col >= 0) {
            int to_col = -1;
            for (int j = 0; j < n && to_col < 0; ++j) {
                int cnt = 0;
                for (int i = 0; i < n; ++i) cnt += x.at(i, j) == 1.0;
                if (cnt == 0) to_col = j;
            }
            if (to_col < 0) throw std::logic_error("reduce_to_permutation: no empty column");
            int row = -1;
            for (int i = 0; i < n && row < 0; ++i)
                if (x.at(i, from_col) == 1.0) row = i;
            x.at(row, from_col) = 0.0;
            x.at(row, to_col) = 1.0;
        } else {
            int from_row = -1;
            for (int i = 0; i < n && from_row < 0; ++i) {
                int cnt = 0;
                for (int j = 0; j < n; ++j) cnt += x.at(i, j) == 1.0;
                if (cnt >= 2) from_row = i;
            }
            if (from_row < 0) throw std::logic_error("reduce_to_permutation: stuck without doubled line");
            int to_row = -1;
            for (int i = 0; i < n && to_row < 0; ++i) {
                int cnt = 0;
                for (int j = 0; j < n; ++j) cnt += x.at(i, j) == 1.0;
                if (cnt == 0) to_row = i;
            }
            if (to_row < 0) throw std::logic_error("reduce_to_permutation: no empty row");
            int col = -1;
            for (int j = 0; j < n && col < 0; ++j)
                if (x.at(from_row, j) == 1.0) col = j;
            x.at(from_row, col) = 0.0;
            x.at(to_row, col) = 1.0;
        }
        ++steps;
        if (chain) chain->push_back(x);
        if (steps > 2 * n) throw std::logic_error("reduce_to_permutation: move budget exceeded");
    }
    return {x, steps};
}

}  // namespace rr
