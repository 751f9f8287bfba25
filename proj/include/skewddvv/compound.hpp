#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "skewddvv/skew.hpp"

namespace skewddvv {

// Second compound of a matrix: entry at (rank(i<j), rank(k<l)) is the 2 x 2
// minor on rows {i,j} and columns {k,l}. Multiplicative on square matrices
// and transpose-compatible: phi(A B) = phi(A) phi(B), phi(A^t) = phi(A)^t,
// phi(I) = I.
inline Matrix second_compound(const Matrix& a) {
    const int r = a.rows(), c = a.cols();
    if (r < 2 || c < 2)
        throw unsupported_dimension("second_compound: need at least 2 rows and columns");
    const std::int64_t out_rows = pair_count(r), out_cols = pair_count(c);
    if (out_rows * out_cols > 20'000'000)
        throw unsupported_dimension("second_compound: result too large to materialize");
    Matrix out(static_cast<int>(out_rows), static_cast<int>(out_cols));
    int row = 0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j, ++row) {
            int col = 0;
            for (int k = 0; k < c; ++k)
                for (int l = k + 1; l < c; ++l, ++col)
                    out(row, col) = a(i, k) * a(j, l) - a(i, l) * a(j, k);
        }
    return out;
}

// Nonzero entry of the Gram matrix of standard basis commutators.
// Row and column are 0-based ranks over pairs of basis ranks.
struct GramEntry {
    int row;
    int col;
    double value;
};

namespace detail {

// Coefficient c with [E_alpha, E_gamma] = c * E_tau, where tau is the
// symmetric difference of the index pairs of alpha and gamma. Computed on the
// 3 x 3 restriction to the participating indices. Requires exactly one shared
// index.
inline double basis_commutator_coefficient(PairIndex alpha, PairIndex gamma, PairIndex tau) {
    int idx[3];
    {
        int all[4] = {alpha.first, alpha.second, gamma.first, gamma.second};
        int k = 0;
        for (int x : all) {
            bool seen = false;
            for (int t = 0; t < k; ++t) seen = seen || idx[t] == x;
            if (!seen) idx[k++] = x;
        }
        if (k != 3) throw std::invalid_argument("basis_commutator_coefficient: need one shared index");
        std::sort(idx, idx + 3);
    }
    auto local = [&](int x) {
        for (int t = 0; t < 3; ++t)
            if (idx[t] == x) return t;
        throw std::invalid_argument("basis_commutator_coefficient: index outside triple");
    };
    const double s = 1.0 / std::sqrt(2.0);
    auto restrict3 = [&](PairIndex p, double (&m)[3][3]) {
        for (auto& row : m)
            for (double& x : row) x = 0.0;
        m[local(p.first)][local(p.second)] = s;
        m[local(p.second)][local(p.first)] = -s;
    };
    double ma[3][3], mg[3][3], mt[3][3];
    restrict3(alpha, ma);
    restrict3(gamma, mg);
    restrict3(tau, mt);
    double coeff = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double comm = 0.0;
            for (int k = 0; k < 3; ++k) comm += ma[i][k] * mg[k][j] - mg[i][k] * ma[k][j];
            coeff += comm * mt[i][j];
        }
    return coeff;
}

}  // namespace detail

// All nonzero entries of the Gram matrix of standard basis commutators,
// indexed over pairs of basis ranks. Entry (rank(a<b), rank(c<d)) is
// <[E_a, E_b], [E_c, E_d]>. Each nonzero appears once.
inline std::vector<GramEntry> standard_commutator_gram_sparse(int n) {
    if (n < 3) throw unsupported_dimension("standard_commutator_gram_sparse: need n >= 3");
    const int big_n = pair_count(n);
    std::vector<GramEntry> out;
    // Rows: basis pairs sharing exactly one index, grouped by index triple.
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                const PairIndex pairs[3] = {{i, j}, {i, k}, {j, k}};
                for (int u = 0; u < 3; ++u)
                    for (int v = u + 1; v < 3; ++v) {
                        const PairIndex alpha = pairs[u], gamma = pairs[v];
                        const PairIndex tau = pairs[3 - u - v];  // symmetric difference
                        const double c_row =
                            detail::basis_commutator_coefficient(alpha, gamma, tau);
                        const int row = pair_rank(
                            big_n, PairIndex{pair_rank(n, alpha), pair_rank(n, gamma)});
                        // Columns: pairs whose commutator is also a multiple
                        // of E_tau, one per outside index w.
                        for (int w = 1; w <= n; ++w) {
                            if (w == tau.first || w == tau.second) continue;
                            PairIndex beta{std::min(w, tau.first), std::max(w, tau.first)};
                            PairIndex delta{std::min(w, tau.second), std::max(w, tau.second)};
                            int rb = pair_rank(n, beta), rd = pair_rank(n, delta);
                            if (rb > rd) std::swap(beta, delta), std::swap(rb, rd);
                            const double c_col =
                                detail::basis_commutator_coefficient(beta, delta, tau);
                            out.push_back(GramEntry{row - 1,
                                                    pair_rank(big_n, PairIndex{rb, rd}) - 1,
                                                    c_row * c_col});
                        }
                    }
            }
    return out;
}

// Dense form of the standard basis commutator Gram matrix.
inline Matrix standard_commutator_gram(int n) {
    const std::int64_t dim = pair_count(pair_count(n));
    if (dim * dim > 20'000'000)
        throw unsupported_dimension("standard_commutator_gram: too large, use the sparse form");
    Matrix out(static_cast<int>(dim), static_cast<int>(dim));
    for (const GramEntry& e : standard_commutator_gram_sparse(n)) out(e.row, e.col) = e.value;
    return out;
}

// Gram matrix of the pairwise commutators of a tuple, indexed over member
// pair ranks: entry (rank(r<s), rank(p<q)) is <[B_r, B_s], [B_p, B_q]>.
struct CommutatorGram {
    int members;
    Matrix entries;
};

inline CommutatorGram gram_of_commutators(const SkewTuple& t) {
    const int m = t.size();
    if (m < 2) throw unsupported_dimension("gram_of_commutators: need at least 2 members");
    const int p = pair_count(m);
    std::vector<Matrix> comms;
    comms.reserve(p);
    for (int r = 1; r <= m; ++r)
        for (int s = r + 1; s <= m; ++s) comms.push_back(commutator(t.member(r), t.member(s)).mat());
    CommutatorGram g{m, Matrix(p, p)};
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) {
            const double v = frobenius_inner(comms[a], comms[b]);
            g.entries(a, b) = v;
            g.entries(b, a) = v;
        }
    return g;
}

// Sum of ||[B_r, B_s]||^2 over all ordered member pairs, computed directly.
inline double commutator_sum_direct(const SkewTuple& t) {
    const int m = t.size();
    double total = 0.0;
    for (int r = 1; r <= m; ++r)
        for (int s = r + 1; s <= m; ++s)
            total += 2.0 * frobenius_norm_sq(commutator(t.member(r), t.member(s)));
    return total;
}

// Same sum via the trace identity: with G the Gram matrix of the coefficient
// rows and C the standard basis commutator Gram, the sum equals
// 2 Tr(phi(G) C). Only the minors of phi(G) hit by nonzeros of C are formed.
inline double trace_commutator_sum(const Matrix& coeff_gram,
                                   const std::vector<GramEntry>& c_std) {
    const int big_n = coeff_gram.rows();
    double total = 0.0;
    for (const GramEntry& e : c_std) {
        const PairIndex rho = rank_pair(big_n, e.row + 1);
        const PairIndex sig = rank_pair(big_n, e.col + 1);
        const int p1 = rho.first - 1, p2 = rho.second - 1;
        const int q1 = sig.first - 1, q2 = sig.second - 1;
        const double minor = coeff_gram(p1, q1) * coeff_gram(p2, q2) -
                             coeff_gram(p1, q2) * coeff_gram(p2, q1);
        total += minor * e.value;
    }
    return 2.0 * total;
}

inline double commutator_sum_via_trace(const SkewTuple& t) {
    const Matrix coeff = coefficients_of(t);
    const Matrix gram = coeff * coeff.transpose();
    return trace_commutator_sum(gram, standard_commutator_gram_sparse(t.dim()));
}

}  // namespace skewddvv
