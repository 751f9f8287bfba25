#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "skewddvv/jacobi.hpp"
#include "skewddvv/skew.hpp"

namespace skewddvv {

// P A P^t = blockdiag([0, l_1; -l_1, 0], ..., [0, l_K; -l_K, 0], (0)) with
// l_1 >= ... >= l_K >= 0 and K = floor(n/2); a trailing 1 x 1 zero block when
// n is odd. P is orthogonal, rows ordered block by block.
struct CanonicalForm {
    Matrix p;
    std::vector<double> lambdas;
};

// Builds the block-diagonal matrix with the given block parameters.
inline Matrix canonical_matrix(const std::vector<double>& lambdas, int n) {
    if (static_cast<int>(lambdas.size()) != n / 2)
        throw std::invalid_argument("canonical_matrix: need floor(n/2) block parameters");
    Matrix m(n, n);
    for (int k = 0; k < n / 2; ++k) {
        m(2 * k, 2 * k + 1) = lambdas[k];
        m(2 * k + 1, 2 * k) = -lambdas[k];
    }
    return m;
}

// Canonical block-diagonal form of a skew matrix via the spectral
// decomposition of A A^t. Deterministic: within an eigenvalue cluster, blocks
// are anchored to the lexicographically smallest participating standard basis
// direction, and each block is oriented so that the (2k-1, 2k) entry is +l_k.
inline CanonicalForm canonical_form(const SkewMatrix& a) {
    const int n = a.dim();
    const Matrix& am = a.mat();
    const double norm_sq = frobenius_norm_sq(am);

    Matrix s = am * am.transpose();  // equals -A^2, symmetric PSD
    SymmetricEigen eig = jacobi_symmetric_eigen(s, 1e-14 * norm_sq);

    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = std::sqrt(std::max(eig.values[i], 0.0));
    const double lam_max = lam.empty() ? 0.0 : lam[0];
    const double zero_tol = 1e-9 * lam_max;
    const double cluster_gap = 1e-8 * lam_max;

    auto column = [&](int j) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, j);
        return v;
    };

    // Accepted rows of P, in order.
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    std::vector<double> block_lambdas;
    std::vector<std::vector<double>> kernel;

    auto orthogonalize = [&](std::vector<double>& v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& r : rows) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += r[i] * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * r[i];
            }
    };
    auto norm_of = [&](const std::vector<double>& v) {
        double t = 0.0;
        for (double x : v) t += x * x;
        return std::sqrt(t);
    };
    auto apply_a = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double t = 0.0;
            for (int j = 0; j < n; ++j) t += am(i, j) * v[j];
            out[i] = t;
        }
        return out;
    };

    int idx = 0;
    while (idx < n && lam[idx] > zero_tol) {
        // One cluster of near-equal nonzero spectral values.
        int end = idx + 1;
        while (end < n && lam[end] > zero_tol && lam[end - 1] - lam[end] <= cluster_gap) ++end;
        const double lam_mean =
            std::accumulate(lam.begin() + idx, lam.begin() + end, 0.0) / (end - idx);

        std::vector<std::vector<double>> w;
        for (int j = idx; j < end; ++j) w.push_back(column(j));

        while (!w.empty()) {
            // Anchor: smallest standard basis index with significant presence
            // in the remaining span.
            int anchor = -1;
            std::vector<double> proj(n, 0.0);
            for (int k = 0; k < n && anchor < 0; ++k) {
                double p2 = 0.0;
                for (const auto& col : w) p2 += col[k] * col[k];
                if (std::sqrt(p2) >= 1e-3) anchor = k;
            }
            if (anchor < 0) throw numeric_failure("canonical_form: lost cluster span");

            std::vector<double> v(n, 0.0);
            for (const auto& col : w) {
                const double c = col[anchor];
                for (int i = 0; i < n; ++i) v[i] += c * col[i];
            }
            orthogonalize(v);
            double nv = norm_of(v);
            if (nv < 1e-8) throw numeric_failure("canonical_form: degenerate anchor vector");
            for (double& x : v) x /= nv;

            std::vector<double> av = apply_a(v);
            const double anorm = norm_of(av);
            bool is_kernel = anorm < 0.5 * lam_mean;
            std::vector<double> wv(n);
            if (!is_kernel) {
                for (int i = 0; i < n; ++i) wv[i] = -av[i] / anorm;
                orthogonalize(wv);
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += v[i] * wv[i];
                for (int i = 0; i < n; ++i) wv[i] -= dot * v[i];
                double nw = norm_of(wv);
                if (nw < 0.5) {
                    is_kernel = true;  // A maps v essentially outside the working space
                } else {
                    for (double& x : wv) x /= nw;
                }
            }

            if (is_kernel) {
                kernel.push_back(v);
                // Deflate v only.
                std::vector<std::vector<double>> next;
                for (auto& col : w) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += v[i] * col[i];
                    for (int i = 0; i < n; ++i) col[i] -= dot * v[i];
                    for (const auto& kept : next) {
                        double d2 = 0.0;
                        for (int i = 0; i < n; ++i) d2 += kept[i] * col[i];
                        for (int i = 0; i < n; ++i) col[i] -= d2 * kept[i];
                    }
                    double nc = norm_of(col);
                    if (nc > 1e-6) {
                        for (double& x : col) x /= nc;
                        next.push_back(col);
                    }
                }
                if (static_cast<int>(next.size()) != static_cast<int>(w.size()) - 1)
                    throw numeric_failure("canonical_form: cluster deflation failed");
                w = std::move(next);
                continue;
            }

            // Orientation: row pair (v, w) gives (P A P^t) entry v^t A w > 0.
            double lam_block = 0.0;
            {
                std::vector<double> aw = apply_a(wv);
                for (int i = 0; i < n; ++i) lam_block += v[i] * aw[i];
            }
            rows.push_back(v);
            rows.push_back(wv);
            block_lambdas.push_back(lam_block);

            std::vector<std::vector<double>> next;
            for (auto& col : w) {
                for (const auto& r : {v, wv}) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += r[i] * col[i];
                    for (int i = 0; i < n; ++i) col[i] -= dot * r[i];
                }
                for (const auto& kept : next) {
                    double d2 = 0.0;
                    for (int i = 0; i < n; ++i) d2 += kept[i] * col[i];
                    for (int i = 0; i < n; ++i) col[i] -= d2 * kept[i];
                }
                double nc = norm_of(col);
                if (nc > 1e-6) {
                    for (double& x : col) x /= nc;
                    next.push_back(col);
                }
            }
            if (static_cast<int>(next.size()) != static_cast<int>(w.size()) - 2)
                throw numeric_failure("canonical_form: cluster deflation failed");
            w = std::move(next);
        }
        idx = end;
    }

    // Remaining eigenvectors and reclassified directions span the kernel.
    for (int j = idx; j < n; ++j) kernel.push_back(column(j));
    for (auto& v : kernel) {
        orthogonalize(v);
        double nv = norm_of(v);
        if (nv < 1e-6) continue;  // already represented
        for (double& x : v) x /= nv;
        rows.push_back(v);
    }
    if (static_cast<int>(rows.size()) != n)
        throw numeric_failure("canonical_form: row assembly failed");

    CanonicalForm cf;
    cf.p = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cf.p(i, j) = rows[i][j];
    cf.lambdas = std::move(block_lambdas);
    cf.lambdas.resize(n / 2, 0.0);

    const double res_tol = 1e-8 * std::max(1.0, lam_max);
    if (!is_orthogonal(cf.p, 1e-10))
        throw numeric_failure("canonical_form: frame is not orthogonal");
    Matrix residual = conjugate_by(cf.p, am) - canonical_matrix(cf.lambdas, n);
    if (max_abs(residual) > res_tol)
        throw numeric_failure("canonical_form: residual exceeds tolerance");
    return cf;
}

// Nonincreasing, nonnegative spectral parameters normalized to
// sum of squares 1/2 (the norm-1 convention for the underlying matrix).
class LambdaVector {
  public:
    explicit LambdaVector(std::vector<double> v) : v_(std::move(v)) {
        if (v_.empty()) throw std::invalid_argument("LambdaVector: empty");
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (v_[i] < -1e-12) throw std::invalid_argument("LambdaVector: negative entry");
            v_[i] = std::max(v_[i], 0.0);
            if (i > 0 && v_[i] > v_[i - 1] + 1e-12)
                throw std::invalid_argument("LambdaVector: entries must be nonincreasing");
            sum_sq += v_[i] * v_[i];
        }
        if (std::abs(sum_sq - 0.5) > 1e-10)
            throw std::invalid_argument("LambdaVector: sum of squares must be 1/2");
    }

    int size() const { return static_cast<int>(v_.size()); }
    const std::vector<double>& values() const { return v_; }
    double operator[](int i) const { return v_[i]; }  // 0-based

  private:
    std::vector<double> v_;
};

// Spectral parameters of a nonzero skew matrix rescaled to the norm-1
// convention.
inline LambdaVector normalized_lambdas(const CanonicalForm& cf) {
    double sum_sq = 0.0;
    for (double l : cf.lambdas) sum_sq += l * l;
    if (sum_sq <= 0.0)
        throw std::invalid_argument("normalized_lambdas: zero matrix has no normalized spectrum");
    const double scale = std::sqrt(0.5 / sum_sq);
    std::vector<double> v(cf.lambdas);
    for (double& x : v) x *= scale;
    return LambdaVector(std::move(v));
}

// Random spectral parameter vector: absolute standard normals, sorted
// nonincreasing, rescaled to sum of squares 1/2.
inline LambdaVector random_lambda_vector(int k, std::mt19937_64& rng) {
    if (k < 1) throw std::invalid_argument("random_lambda_vector: need k >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(k);
    double sum_sq = 0.0;
    for (double& x : v) {
        x = std::abs(gauss(rng));
        sum_sq += x * x;
    }
    if (sum_sq <= 0.0) v[0] = sum_sq = 1.0;
    const double scale = std::sqrt(0.5 / sum_sq);
    for (double& x : v) x *= scale;
    std::sort(v.begin(), v.end(), std::greater<double>());
    return LambdaVector(std::move(v));
}

// Pairs (i,j), i < j, with (l_i + l_j)^2 > 2/3. For a valid LambdaVector the
// result, when nonempty, is {1} x {2, ..., n0 + 1}; that structure is checked
// as a postcondition.
inline std::vector<PairIndex> excess_pairs(const LambdaVector& v) {
    const int k = v.size();
    std::vector<PairIndex> out;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            const double s = v[i - 1] + v[j - 1];
            if (s * s > 2.0 / 3.0) out.push_back(PairIndex{i, j});
        }
    for (std::size_t t = 0; t < out.size(); ++t)
        if (out[t].first != 1 || out[t].second != static_cast<int>(t) + 2)
            throw numeric_failure("excess_pairs: structure postcondition violated");
    return out;
}

// Sum of (l_i + l_j)^2 - 2/3 over the excess pairs; bounded by 1/3, with
// equality exactly at (1/2, 1/2, 0, ..., 0).
inline double pair_excess_sum(const LambdaVector& v) {
    double total = 0.0;
    for (const PairIndex& p : excess_pairs(v)) {
        const double s = v[p.first - 1] + v[p.second - 1];
        total += s * s - 2.0 / 3.0;
    }
    if (total > 1.0 / 3.0 + 1e-12)
        throw numeric_failure("pair_excess_sum: bound postcondition violated");
    return total;
}

// Diagonal of the unitarily diagonalized form: (l_1, -l_1, ..., l_K, -l_K)
// plus a trailing zero when n is odd.
inline std::vector<double> complex_diagonal(const CanonicalForm& cf) {
    const int n = cf.p.rows();
    std::vector<double> u(n, 0.0);
    for (int k = 0; k < n / 2; ++k) {
        u[2 * k] = cf.lambdas[k];
        u[2 * k + 1] = -cf.lambdas[k];
    }
    return u;
}

struct ComplexEntries {
    Matrix re;
    Matrix im;
};

// Entries of U^* (i * P B P^t) U for the fixed block unitary U that
// diagonalizes the canonical form of A; its columns are
// (e_{2k-1} - i e_{2k}) / sqrt(2), (e_{2k} - i e_{2k-1}) / sqrt(2), and e_n
// when n is odd. Computed by closed-form identities in the entries of
// P B P^t, no complex arithmetic. The result is Hermitian with real diagonal
// and zero (2k-1, 2k) block entries.
inline ComplexEntries conjugated_complex_entries(const CanonicalForm& cf, const SkewMatrix& b) {
    const int n = cf.p.rows();
    if (b.dim() != n)
        throw std::invalid_argument("conjugated_complex_entries: dimension mismatch");
    const Matrix bt = conjugate_by(cf.p, b.mat());
    auto e = [&](int i, int j) { return bt(i - 1, j - 1); };  // 1-based view

    ComplexEntries out{Matrix(n, n), Matrix(n, n)};
    auto set = [&](int i, int j, double x, double y) {
        out.re(i - 1, j - 1) = x;
        out.im(i - 1, j - 1) = y;
    };

    const int kmax = n / 2;
    for (int k = 1; k <= kmax; ++k) {
        set(2 * k - 1, 2 * k - 1, e(2 * k - 1, 2 * k), 0.0);
        set(2 * k, 2 * k, -e(2 * k - 1, 2 * k), 0.0);
        set(2 * k - 1, 2 * k, 0.0, 0.0);
    }
    for (int k = 1; k <= kmax; ++k) {
        for (int l = k + 1; l <= kmax; ++l) {
            const double a1 = e(2 * k - 1, 2 * l);
            const double a2 = e(2 * k, 2 * l - 1);
            const double a3 = e(2 * k - 1, 2 * l - 1);
            const double a4 = e(2 * k, 2 * l);
            set(2 * k - 1, 2 * l - 1, 0.5 * (a1 - a2), 0.5 * (a3 + a4));
            set(2 * k, 2 * l, -0.5 * (a1 - a2), 0.5 * (a3 + a4));
            set(2 * k - 1, 2 * l, 0.5 * (a3 - a4), 0.5 * (a2 + a1));
            set(2 * k, 2 * l - 1, -0.5 * (a3 - a4), 0.5 * (a2 + a1));
        }
    }
    if (n % 2 == 1) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int k = 1; k <= kmax; ++k) {
            set(2 * k - 1, n, -e(2 * k, n) * inv_sqrt2, e(2 * k - 1, n) * inv_sqrt2);
            set(2 * k, n, -e(2 * k - 1, n) * inv_sqrt2, e(2 * k, n) * inv_sqrt2);
        }
        set(n, n, 0.0, 0.0);
    }
    // Hermitian mirror.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            out.re(j, i) = out.re(i, j);
            out.im(j, i) = -out.im(i, j);
        }
    return out;
}

// Pairwise commutator bound ||[A,B]||^2 <= c(n) ||A||^2 ||B||^2 with
// c(3) = 1/2 and c(n) = 1 for n >= 4.
struct PairBoundReport {
    double lhs;
    double bound;
    double c;
    bool equality;
};

inline PairBoundReport pair_bound_report(const SkewMatrix& a, const SkewMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("pair_bound_report: dimension mismatch");
    const int n = a.dim();
    if (n == 2) throw unsupported_dimension("pair_bound_report: n = 2 is not supported");
    const double c = (n == 3) ? 0.5 : 1.0;
    const double lhs = frobenius_norm_sq(commutator(a, b));
    const double bound = c * frobenius_norm_sq(a) * frobenius_norm_sq(b);
    if (lhs > bound + 1e-9 * std::max(1.0, bound))
        throw numeric_failure("pair_bound_report: bound postcondition violated");
    PairBoundReport rep{lhs, bound, c, false};
    rep.equality = (bound - lhs) <= 1e-9 * std::max(1.0, bound);
    return rep;
}

// Frame realizing the equality normal form of the pairwise bound:
// P A P^t = c_form(1, l) and P B P^t = a * c_form(2, l) + b * c_form(3, l)
// for n = 3; P A P^t = d_form(1, l) and P B P^t in span{d_form(2, l),
// d_form(3, l)} for n >= 4. Returns nothing when B does not fit the normal
// form within 1e-7 (relative to max(1, ||B||)).
struct PairFrame {
    Matrix p;
    double a;
    double b;
};

inline std::optional<PairFrame> pair_equality_frame(const SkewMatrix& a, const SkewMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("pair_equality_frame: dimension mismatch");
    const int n = a.dim();
    if (n == 2) throw unsupported_dimension("pair_equality_frame: n = 2 is not supported");
    const double na = frobenius_norm(a.mat());
    const double nb = frobenius_norm(b.mat());
    if (na <= 1e-300) {
        if (nb <= 1e-300) return PairFrame{Matrix::identity(n), 0.0, 0.0};
        return std::nullopt;  // zero A admits only zero B in the normal form
    }
    const double fit_tol = 1e-7 * std::max(1.0, nb);

    CanonicalForm cf = canonical_form(a);
    const Matrix bt = conjugate_by(cf.p, b.mat());

    if (n == 3) {
        const double lambda = cf.lambdas[0];
        if (std::sqrt(2.0) * std::abs(bt(0, 1)) > fit_tol) return std::nullopt;
        return PairFrame{cf.p, bt(0, 2) / lambda, bt(1, 2) / lambda};
    }

    const double lambda = 0.5 * na;
    const double spec_tol = 1e-6 * std::max(1.0, na);
    if (std::abs(cf.lambdas[0] - lambda) > spec_tol) return std::nullopt;
    if (std::abs(cf.lambdas[1] - lambda) > spec_tol) return std::nullopt;
    for (std::size_t k = 2; k < cf.lambdas.size(); ++k)
        if (cf.lambdas[k] > spec_tol) return std::nullopt;

    const Matrix d2 = d_form(2, lambda, n).mat();
    const Matrix d3 = d_form(3, lambda, n).mat();
    const double denom = 4.0 * lambda * lambda;
    const double av = frobenius_inner(bt, d2) / denom;
    const double bv = frobenius_inner(bt, d3) / denom;
    Matrix resid = bt - av * d2 - bv * d3;
    if (frobenius_norm(resid) > fit_tol) return std::nullopt;
    return PairFrame{cf.p, av, bv};
}

// Orthogonal R with A = B R, recovered when the row Gram matrices agree:
// ||A A^t - B B^t|| < 1e-8 relative to max(1, norms). Returns nothing
// otherwise.
inline std::optional<Matrix> orthogonal_factor(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("orthogonal_factor: shape mismatch");
    const int m = a.cols();
    Matrix ga = a * a.transpose();
    Matrix gb = b * b.transpose();
    const double gate =
        1e-8 * std::max({1.0, frobenius_norm(ga), frobenius_norm(gb)});
    if (frobenius_norm(ga - gb) > gate) return std::nullopt;

    // Orthogonal Procrustes on B^t A; exact by construction when the Gram
    // matrices agree, including rank-deficient cases.
    Matrix cross = b.transpose() * a;  // m x m
    Matrix ctc = cross.transpose() * cross;
    SymmetricEigen eig = jacobi_symmetric_eigen(ctc, 1e-14 * std::max(trace(ctc), 0.0));
    std::vector<double> sigma(m);
    for (int i = 0; i < m; ++i) sigma[i] = std::sqrt(std::max(eig.values[i], 0.0));

    // Rank gate in the eigenvalue scale; the square root would lift the
    // noise floor of a zero eigenvalue far above any sensible sigma gate.
    const double eig_gate = 1e-13 * std::max(1.0, m > 0 ? eig.values[0] : 0.0);
    int rank = 0;
    while (rank < m && eig.values[rank] > eig_gate) ++rank;

    Matrix u(m, rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < m; ++i) {
            double t = 0.0;
            for (int k = 0; k < m; ++k) t += cross(i, k) * eig.vectors(k, j);
            u(i, j) = t / sigma[j];
        }
    Matrix u_full(m, m);
    if (rank > 0) u = orthonormalized_columns(std::move(u));
    Matrix tail = orthonormal_completion(u, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < rank; ++j) u_full(i, j) = u(i, j);
        for (int j = rank; j < m; ++j) u_full(i, j) = tail(i, j - rank);
    }
    return u_full * eig.vectors.transpose();
}

}  // namespace skewddvv
