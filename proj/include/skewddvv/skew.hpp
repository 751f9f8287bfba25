#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "skewddvv/matrix.hpp"

namespace skewddvv {

// Unordered index pair, 1-based with first < second. Pairs over {1,...,n} are
// ordered lexicographically: (i,j) before (k,l) iff i < k, or i = k and j < l.
struct PairIndex {
    int first = 0;
    int second = 0;
};

inline int pair_count(int n) { return n * (n - 1) / 2; }

// Rank of a pair in the lexicographic order, 1-based.
inline int pair_rank(int n, PairIndex p) {
    if (p.first < 1 || p.second <= p.first || p.second > n)
        throw std::invalid_argument("pair_rank: pair out of range");
    return (p.first - 1) * (2 * n - p.first) / 2 + (p.second - p.first);
}

inline PairIndex rank_pair(int n, int rank) {
    if (rank < 1 || rank > pair_count(n))
        throw std::invalid_argument("rank_pair: rank out of range");
    int i = 1;
    int remaining = rank;
    while (remaining > n - i) {
        remaining -= n - i;
        ++i;
    }
    return PairIndex{i, i + remaining};
}

// Skew-symmetric matrix, n >= 2. Construction symmetrizes (A - A^t)/2 when
// the defect max|A + A^t| is within 1e-12 * max(1, max|A|) and rejects
// anything larger.
class SkewMatrix {
  public:
    explicit SkewMatrix(const Matrix& a) : a_(checked(a)) {}

    static SkewMatrix zero(int n) { return SkewMatrix(Matrix(n, n), unchecked_tag{}); }

    // Caller guarantees exact skew-symmetry (used where it holds by
    // construction, e.g. commutators and basis elements).
    static SkewMatrix unchecked(Matrix a) { return SkewMatrix(std::move(a), unchecked_tag{}); }

    int dim() const { return a_.rows(); }
    const Matrix& mat() const { return a_; }
    double operator()(int i, int j) const { return a_(i, j); }  // 0-based entry

  private:
    struct unchecked_tag {};
    SkewMatrix(Matrix a, unchecked_tag) : a_(std::move(a)) {}

    static Matrix checked(const Matrix& a) {
        if (a.rows() != a.cols() || a.rows() < 2)
            throw std::invalid_argument("SkewMatrix: need a square matrix with n >= 2");
        double defect = 0.0;
        for (int i = 0; i < a.rows(); ++i)
            for (int j = i; j < a.cols(); ++j)
                defect = std::max(defect, std::abs(a(i, j) + a(j, i)));
        if (defect > 1e-12 * std::max(1.0, max_abs(a)))
            throw std::invalid_argument("SkewMatrix: input is not skew-symmetric");
        Matrix s(a.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) - a(j, i));
        return s;
    }

    Matrix a_;
};

// Ordered tuple (B_1, ..., B_m) of skew matrices sharing one dimension, m >= 1.
class SkewTuple {
  public:
    explicit SkewTuple(std::vector<SkewMatrix> members) : members_(std::move(members)) {
        if (members_.empty()) throw std::invalid_argument("SkewTuple: need m >= 1");
        for (const SkewMatrix& b : members_)
            if (b.dim() != members_.front().dim())
                throw std::invalid_argument("SkewTuple: mixed dimensions");
    }

    int dim() const { return members_.front().dim(); }
    int size() const { return static_cast<int>(members_.size()); }

    // 1-based member access matching the B_r notation.
    const SkewMatrix& member(int r) const {
        if (r < 1 || r > size()) throw std::invalid_argument("SkewTuple::member: out of range");
        return members_[r - 1];
    }

    const std::vector<SkewMatrix>& members() const { return members_; }

  private:
    std::vector<SkewMatrix> members_;
};

inline SkewMatrix commutator(const SkewMatrix& a, const SkewMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator: dimension mismatch");
    Matrix ab = a.mat() * b.mat();
    Matrix ba = b.mat() * a.mat();
    return SkewMatrix::unchecked(ab - ba);
}

inline double frobenius_inner(const SkewMatrix& a, const SkewMatrix& b) {
    return frobenius_inner(a.mat(), b.mat());
}

inline double frobenius_norm_sq(const SkewMatrix& a) { return frobenius_norm_sq(a.mat()); }

// Orthonormal basis of the skew matrices: element of rank (i,j) has entries
// 1/sqrt(2) at (i,j) and -1/sqrt(2) at (j,i). Position k in the result holds
// the element of rank k + 1.
inline std::vector<SkewMatrix> standard_basis(int n) {
    if (n < 2) throw std::invalid_argument("standard_basis: need n >= 2");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<SkewMatrix> basis;
    basis.reserve(pair_count(n));
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            Matrix e(n, n);
            e(i - 1, j - 1) = inv_sqrt2;
            e(j - 1, i - 1) = -inv_sqrt2;
            basis.push_back(SkewMatrix::unchecked(std::move(e)));
        }
    }
    return basis;
}

// Two-sided action: member s of the result is sum_r R(r,s) * P B_r P^t.
// P must be n x n orthogonal and R m x m orthogonal, both within 1e-10.
inline SkewTuple apply_k_action(const Matrix& p, const Matrix& r, const SkewTuple& t) {
    const int n = t.dim(), m = t.size();
    if (p.rows() != n || !is_orthogonal(p, 1e-10))
        throw std::invalid_argument("apply_k_action: P is not n x n orthogonal");
    if (r.rows() != m || !is_orthogonal(r, 1e-10))
        throw std::invalid_argument("apply_k_action: R is not m x m orthogonal");
    std::vector<Matrix> conj;
    conj.reserve(m);
    for (const SkewMatrix& b : t.members()) conj.push_back(conjugate_by(p, b.mat()));
    std::vector<SkewMatrix> out;
    out.reserve(m);
    for (int s = 0; s < m; ++s) {
        Matrix acc(n, n);
        for (int q = 0; q < m; ++q) {
            const double w = r(q, s);
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < acc.data().size(); ++k)
                acc.data()[k] += w * conj[q].data()[k];
        }
        // Conjugation and mixing preserve skewness up to roundoff; symmetrize
        // so downstream exact-skewness assumptions hold.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = 0.5 * (acc(i, j) - acc(j, i));
                acc(i, j) = v;
                acc(j, i) = -v;
            }
        for (int i = 0; i < n; ++i) acc(i, i) = 0.0;
        out.push_back(SkewMatrix::unchecked(std::move(acc)));
    }
    return SkewTuple(std::move(out));
}

// Coefficient matrix: entry (rank(i,j) - 1, r - 1) = <B_r, E~_(i,j)>
// = sqrt(2) * (B_r)_(i,j). Shape N x m with N = n(n-1)/2.
inline Matrix coefficients_of(const SkewTuple& t) {
    const int n = t.dim(), m = t.size();
    const double sqrt2 = std::sqrt(2.0);
    Matrix coeff(pair_count(n), m);
    for (int r = 0; r < m; ++r) {
        const SkewMatrix& b = t.members()[r];
        int row = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) coeff(row++, r) = sqrt2 * b(i, j);
    }
    return coeff;
}

inline SkewTuple tuple_from_coefficients(int n, const Matrix& coeff) {
    if (coeff.rows() != pair_count(n))
        throw std::invalid_argument("tuple_from_coefficients: row count != n(n-1)/2");
    if (coeff.cols() < 1) throw std::invalid_argument("tuple_from_coefficients: need m >= 1");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<SkewMatrix> members;
    members.reserve(coeff.cols());
    for (int r = 0; r < coeff.cols(); ++r) {
        Matrix b(n, n);
        int row = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = inv_sqrt2 * coeff(row++, r);
                b(i, j) = v;
                b(j, i) = -v;
            }
        members.push_back(SkewMatrix::unchecked(std::move(b)));
    }
    return SkewTuple(std::move(members));
}

// The 3 x 3 extremal generators: c_form(k, lambda) is lambda * (E_ij - E_ji)
// with (i,j) the pair of rank k, i.e. (1,2), (1,3), (2,3).
inline SkewMatrix c_form(int k, double lambda) {
    if (k < 1 || k > 3) throw std::invalid_argument("c_form: k must be 1, 2 or 3");
    PairIndex p = rank_pair(3, k);
    Matrix m(3, 3);
    m(p.first - 1, p.second - 1) = lambda;
    m(p.second - 1, p.first - 1) = -lambda;
    return SkewMatrix::unchecked(std::move(m));
}

// The 4 x 4 extremal generators embedded as the leading block of an n x n
// matrix (n >= 4). The triple multiplies like quaternion units:
// [d_form(r), d_form(s)] = -2 lambda * d_form(t) for cyclic (r,s,t).
inline SkewMatrix d_form(int k, double lambda, int n = 4) {
    if (k < 1 || k > 3) throw std::invalid_argument("d_form: k must be 1, 2 or 3");
    if (n < 4) throw std::invalid_argument("d_form: need n >= 4");
    Matrix m(n, n);
    auto set = [&](int i, int j, double v) {
        m(i - 1, j - 1) = v;
        m(j - 1, i - 1) = -v;
    };
    switch (k) {
        case 1:
            set(1, 2, lambda);
            set(3, 4, lambda);
            break;
        case 2:
            set(1, 3, lambda);
            set(2, 4, -lambda);
            break;
        default:
            set(1, 4, lambda);
            set(2, 3, lambda);
            break;
    }
    return SkewMatrix::unchecked(std::move(m));
}

}  // namespace skewddvv
