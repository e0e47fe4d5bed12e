#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rr/matrix.hpp"
#include "rr/rng.hpp"
#include "rr/step_function.hpp"

namespace rr {

/// Seeded matrix corpus: the structured shapes every suite exercises plus
/// i.i.d.-uniform draws. Fully determined by (seed, n, trials).
struct MatrixCorpus {
    std::vector<MatrixN> matrices;
    std::vector<std::string> labels;

    void add(MatrixN m, std::string label) {
        matrices.push_back(std::move(m));
        labels.push_back(std::move(label));
    }
};

inline MatrixN random_uniform_matrix(Rng& rng, int n, double scale = 1.0) {
    std::vector<double> e(static_cast<std::size_t>(n) * n);
    for (auto& v : e) v = scale * rng.next_unit();
    return MatrixN(n, e);
}

inline MatrixN random_diagonal_matrix(Rng& rng, int n, double scale = 1.0) {
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& v : d) v = scale * rng.next_unit();
    return MatrixN::diagonal(d);
}

inline MatrixN random_permutation_matrix(Rng& rng, int n) {
    std::vector<int> p;
    rng.fill_permutation(p, n);
    MatrixN m(n);
    for (int i = 0; i < n; ++i) m.at(i, p[static_cast<std::size_t>(i)]) = 1.0;
    return m;
}

inline MatrixN random_qn_matrix(Rng& rng, int n) {
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
    for (std::size_t i = cells.size() - 1; i > 0; --i)
        std::swap(cells[i], cells[rng.next_below(static_cast<std::uint32_t>(i + 1))]);
    MatrixN m(n);
    for (int k = 0; k < n; ++k)
        m.at(cells[static_cast<std::size_t>(k)] / n, cells[static_cast<std::size_t>(k)] % n) = 1.0;
    return m;
}

inline MatrixN random_pn_matrix(Rng& rng, int n) {
    MatrixN m = random_uniform_matrix(rng, n);
    double total = 0.0;
    for (double v : m.entries()) total += v;
    if (total > n) {
        std::vector<double> e(m.entries());
        for (auto& v : e) v *= n / total;
        return MatrixN(n, e);
    }
    return m;
}

inline MatrixN rank_one_rows_matrix(Rng& rng, int n) {
    MatrixN m(n);
    for (int i = 0; i < n; ++i) {
        const double a = rng.next_unit();
        for (int j = 0; j < n; ++j) m.at(i, j) = a;
    }
    return m;
}

inline MatrixN single_entry_matrix(Rng& rng, int n) {
    MatrixN m(n);
    const int cell = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n * n)));
    m.at(cell / n, cell % n) = 0.25 + rng.next_unit();
    return m;
}

/// The default mixed corpus: diagonal, permutation, Q_n, P_n, rank-one,
/// all-ones, single-entry, identity prefixes, and uniform draws.
inline MatrixCorpus standard_corpus(std::uint64_t seed, int n, int random_trials) {
    MatrixCorpus c;
    c.add(MatrixN(n), "zero");
    c.add(MatrixN::identity(n), "identity");
    c.add(MatrixN(n, std::vector<double>(static_cast<std::size_t>(n) * n, 1.0)), "all-ones");
    for (int k = 1; k < n; ++k)
        c.add(MatrixN::identity_k(n, k), "identity-prefix-" + std::to_string(k));
    std::uint64_t idx = 0;
    auto rng_at = [&](std::uint64_t salt) {
        return Rng::stream(seed ^ salt, streams::kMatrixCorpus, (static_cast<std::uint64_t>(n) << 32) | idx++);
    };
    for (int t = 0; t < random_trials; ++t) {
        switch (t % 7) {
            case 0: {
                auto r = rng_at(0xD1A6);
                c.add(random_diagonal_matrix(r, n), "diagonal");
                break;
            }
            case 1: {
                auto r = rng_at(0x9E49);
                c.add(random_permutation_matrix(r, n), "permutation");
                break;
            }
            case 2: {
                auto r = rng_at(0x0151);
                c.add(random_qn_matrix(r, n), "qn");
                break;
            }
            case 3: {
                auto r = rng_at(0x9123);
                c.add(random_pn_matrix(r, n), "pn");
                break;
            }
            case 4: {
                auto r = rng_at(0x4A4B);
                c.add(rank_one_rows_matrix(r, n), "rank-one-rows");
                break;
            }
            case 5: {
                auto r = rng_at(0x51E1);
                c.add(single_entry_matrix(r, n), "single-entry");
                break;
            }
            default: {
                auto r = rng_at(0x33FD);
                c.add(random_uniform_matrix(r, n), "uniform");
                break;
            }
        }
    }
    return c;
}

inline StepFunction random_step_function(Rng& rng, int max_pieces = 6, double vmax = 3.0) {
    const int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(max_pieces)));
    std::vector<double> bp{0.0};
    for (int i = 0; i + 1 < m; ++i) bp.push_back(rng.next_unit());
    bp.push_back(1.0);
    std::sort(bp.begin(), bp.end());
    std::vector<double> val;
    for (int i = 0; i < m; ++i) val.push_back(vmax * rng.next_unit());
    return StepFunction(bp, val);
}

/// Tuple corpus for the dilation probes: random sizes, indicator spikes,
/// plains, and duplicated entries.
inline std::vector<std::vector<StepFunction>> tuple_corpus(std::uint64_t seed, int tuples,
                                                           int max_arity = 6) {
    std::vector<std::vector<StepFunction>> out;
    for (int t = 0; t < tuples; ++t) {
        Rng rng = Rng::stream(seed, streams::kStepCorpus, static_cast<std::uint64_t>(t));
        const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(max_arity)));
        std::vector<StepFunction> tuple;
        for (int k = 0; k < n; ++k) {
            switch (rng.next_below(4)) {
                case 0:
                    tuple.push_back(StepFunction::indicator(std::max(1e-3, rng.next_unit())));
                    break;
                case 1:
                    tuple.push_back(StepFunction::constant(0.25 + 2.0 * rng.next_unit()));
                    break;
                case 2:
                    tuple.push_back(scale(StepFunction::indicator(std::max(1e-3, rng.next_unit() * 0.2)),
                                          1.0 + 8.0 * rng.next_unit()));
                    break;
                default:
                    tuple.push_back(random_step_function(rng));
                    break;
            }
        }
        if (rng.next_below(3) == 0 && !tuple.empty()) tuple.push_back(tuple.front());
        out.push_back(std::move(tuple));
    }
    return out;
}

}  // namespace rr
