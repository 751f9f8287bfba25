#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "skewddvv/canonical.hpp"
#include "skewddvv/compound.hpp"
#include "skewddvv/skew.hpp"

namespace skewddvv {

// Optimal constant: 1/3 in dimension 3, 2/3 in dimension 4 and above.
inline double d_constant(int n) {
    if (n < 3) throw unsupported_dimension("d_constant: need n >= 3");
    return n == 3 ? 1.0 / 3.0 : 2.0 / 3.0;
}

inline double norm_sum_sq(const SkewTuple& t) {
    double s = 0.0;
    for (int r = 1; r <= t.size(); ++r) s += frobenius_norm_sq(t.member(r));
    return s;
}

// Commutator-sum inequality for a tuple:
// sum_{r,s} ||[B_r, B_s]||^2 <= d(n) (sum_r ||B_r||^2)^2.
struct InequalityReport {
    double lhs;
    double rhs;
    double ratio;  // lhs / (sum of squared norms)^2; 0 for the zero tuple
    double d;
    bool equality;
};

inline InequalityReport inequality_report(const SkewTuple& t) {
    const double d = d_constant(t.dim());
    const double lhs = commutator_sum_direct(t);
    const double s = norm_sum_sq(t);
    InequalityReport rep{lhs, d * s * s, 0.0, d, false};
    if (s > 0.0) {
        rep.ratio = lhs / (s * s);
        rep.equality = (rep.rhs - lhs) <= 1e-9 * std::max(1.0, rep.rhs);
    }
    return rep;
}

// Orthonormal basis of the skew matrices transported by an orthogonal matrix:
// member alpha is sum_beta q(beta, alpha) E_beta over the standard basis.
inline SkewTuple basis_from_orthogonal(int n, const Matrix& q) {
    if (n < 3) throw unsupported_dimension("basis_from_orthogonal: need n >= 3");
    const int big_n = pair_count(n);
    if (q.rows() != big_n || q.cols() != big_n)
        throw std::invalid_argument("basis_from_orthogonal: matrix must be N x N");
    if (!is_orthogonal(q, 1e-10))
        throw std::invalid_argument("basis_from_orthogonal: matrix is not orthogonal");
    return tuple_from_coefficients(n, q);
}

// Quadratic form data for the simplex deficit: M_ab = ||[Q_a, Q_b]||^2 over
// the transported orthonormal basis, f(x) = x^t M x - d (sum x)^2.
struct SimplexQuadratic {
    int n;
    Matrix q;
    Matrix m;
    double d;
};

inline SimplexQuadratic simplex_quadratic(int n, const Matrix& q) {
    SkewTuple basis = basis_from_orthogonal(n, q);
    const int big_n = basis.size();
    SimplexQuadratic sq{n, q, Matrix(big_n, big_n), d_constant(n)};
    for (int a = 1; a <= big_n; ++a)
        for (int b = a + 1; b <= big_n; ++b) {
            const double v = frobenius_norm_sq(commutator(basis.member(a), basis.member(b)));
            sq.m(a - 1, b - 1) = v;
            sq.m(b - 1, a - 1) = v;
        }
    // Entry range and row sums are basis-independent invariants.
    const double hi = (n == 3 ? 0.5 : 1.0) + 1e-9;
    for (int a = 0; a < big_n; ++a) {
        double row = 0.0;
        for (int b = 0; b < big_n; ++b) {
            const double v = sq.m(a, b);
            if (v < -1e-12 || v > hi)
                throw numeric_failure("simplex_quadratic: entry range invariant violated");
            row += v;
        }
        if (std::abs(row - (n - 2)) > 1e-9)
            throw numeric_failure("simplex_quadratic: row sum invariant violated");
    }
    return sq;
}

inline double simplex_form_value(const SimplexQuadratic& sq, const std::vector<double>& x) {
    const int big_n = sq.m.rows();
    if (static_cast<int>(x.size()) != big_n)
        throw std::invalid_argument("simplex_form_value: wrong vector length");
    double total = 0.0, quad = 0.0;
    for (int a = 0; a < big_n; ++a) {
        if (x[a] < 0.0) throw std::invalid_argument("simplex_form_value: negative component");
        total += x[a];
        double row = 0.0;
        for (int b = 0; b < big_n; ++b) row += sq.m(a, b) * x[b];
        quad += x[a] * row;
    }
    return quad - sq.d * total * total;
}

// Row sum of M; equals n - 2 for every row and every orthogonal Q.
inline double commutator_row_sum(const SimplexQuadratic& sq, int alpha) {
    const int big_n = sq.m.rows();
    if (alpha < 1 || alpha > big_n)
        throw std::invalid_argument("commutator_row_sum: index out of range");
    double row = 0.0;
    for (int b = 0; b < big_n; ++b) row += sq.m(alpha - 1, b);
    if (std::abs(row - (sq.n - 2)) > 1e-9)
        throw numeric_failure("commutator_row_sum: row sum postcondition violated");
    return row;
}

// Sum of (M_ab - 2/3) over b in the subset; bounded by 2/3 for any subset.
inline double subset_excess_sum(const SimplexQuadratic& sq, int alpha,
                                const std::vector<int>& subset) {
    const int big_n = sq.m.rows();
    if (alpha < 1 || alpha > big_n)
        throw std::invalid_argument("subset_excess_sum: index out of range");
    std::vector<bool> seen(big_n, false);
    double total = 0.0;
    for (int b : subset) {
        if (b < 1 || b > big_n)
            throw std::invalid_argument("subset_excess_sum: subset index out of range");
        if (seen[b - 1]) throw std::invalid_argument("subset_excess_sum: duplicate subset index");
        seen[b - 1] = true;
        total += sq.m(alpha - 1, b - 1) - 2.0 / 3.0;
    }
    if (total > 2.0 / 3.0 + 1e-9)
        throw numeric_failure("subset_excess_sum: bound postcondition violated");
    return total;
}

namespace detail {

// Generator r of the extremal triple at scale lambda: the 3 x 3 rotation
// generators for n = 3, the two-block quaternion forms for n >= 4.
inline SkewMatrix extremal_generator(int n, int r, double lambda) {
    return n == 3 ? c_form(r, lambda) : d_form(r, lambda, n);
}

// Squared norm of one generator at scale lambda.
inline double extremal_generator_norm_sq(int n, double lambda) {
    return (n == 3 ? 2.0 : 4.0) * lambda * lambda;
}

// Top three principal members of a tuple: the orthogonal member mix given by
// the eigenvectors of the coefficient Gram matrix, largest norms first.
struct PrincipalMembers {
    Matrix mix;  // m x m orthogonal
    std::vector<Matrix> members;
};

inline PrincipalMembers principal_members(const SkewTuple& t) {
    const int n = t.dim(), m = t.size();
    const Matrix coeff = coefficients_of(t);
    Matrix gram = coeff.transpose() * coeff;
    SymmetricEigen eig = jacobi_symmetric_eigen(gram, 1e-14 * std::max(trace(gram), 1e-300));
    PrincipalMembers out{eig.vectors, {}};
    const int count = std::min(m, 3);
    for (int i = 0; i < count; ++i) {
        Matrix a(n, n);
        for (int r = 0; r < m; ++r) {
            const double w = eig.vectors(r, i);
            if (w == 0.0) continue;
            a += w * t.member(r + 1).mat();
        }
        out.members.push_back(std::move(a));
    }
    return out;
}

}  // namespace detail

// Reconstruction of the normal form at equality: orthogonal P, R and a scale
// lambda > 0 such that apply_k_action(p, r, t) has first three members equal
// to the extremal generator triple at that scale and all further members
// zero, within 1e-6. Empty when the tuple does not satisfy the equality flag
// or is zero.
struct EqualityCanonicalization {
    Matrix p;
    Matrix r;
    double lambda;
    char form;  // 'C' for n = 3, 'D' for n >= 4
    double residual;
};

inline std::optional<EqualityCanonicalization> equality_canonicalize(const SkewTuple& t) {
    const InequalityReport rep = inequality_report(t);
    const int n = t.dim(), m = t.size();
    const double s = norm_sum_sq(t);
    if (!rep.equality || s <= 0.0 || m < 3) return std::nullopt;

    detail::PrincipalMembers pm = detail::principal_members(t);
    CanonicalForm cf = canonical_form(SkewMatrix::unchecked(pm.members[0]));

    const double lambda = std::sqrt(s / (n == 3 ? 6.0 : 12.0));
    const double gen_norm_sq = detail::extremal_generator_norm_sq(n, lambda);
    const Matrix g2 = detail::extremal_generator(n, 2, lambda).mat();
    const Matrix g3 = detail::extremal_generator(n, 3, lambda).mat();

    // Components of the second and third principal members in the span of
    // the matching generators; orthogonal at equality, with signs and the
    // residual rotation absorbed into the member mix.
    Matrix v(2, 2);
    for (int i = 0; i < 2; ++i) {
        const Matrix conj = conjugate_by(cf.p, pm.members[i + 1]);
        v(i, 0) = frobenius_inner(conj, g2) / gen_norm_sq;
        v(i, 1) = frobenius_inner(conj, g3) / gen_norm_sq;
    }
    Matrix w2 = orthogonal_factor(v, Matrix::identity(2)).value_or(Matrix::identity(2));

    Matrix r = Matrix(m, m);
    for (int row = 0; row < m; ++row) {
        r(row, 0) = pm.mix(row, 0);
        for (int c = 0; c < 2; ++c)
            r(row, 1 + c) = pm.mix(row, 1) * w2(0, c) + pm.mix(row, 2) * w2(1, c);
        for (int c = 3; c < m; ++c) r(row, c) = pm.mix(row, c);
    }

    SkewTuple form = apply_k_action(cf.p, r, t);
    double residual = 0.0;
    for (int i = 1; i <= m; ++i) {
        Matrix target = i <= 3 ? detail::extremal_generator(n, i, lambda).mat()
                               : Matrix(n, n);
        residual = std::max(residual, max_abs_diff(form.member(i).mat(), target));
    }
    if (residual > 1e-6)
        throw numeric_failure("equality_canonicalize: reconstruction residual too large");
    return EqualityCanonicalization{cf.p, r, lambda, n == 3 ? 'C' : 'D', residual};
}

// Nearest-style snap of a tuple onto the equality configuration: an exactly
// extremal tuple with the same total squared norm, built from the input's
// principal frame. Requires at least 3 members and a nonzero tuple.
inline SkewTuple round_to_equality(const SkewTuple& t) {
    const int n = t.dim(), m = t.size();
    if (n < 3) throw unsupported_dimension("round_to_equality: need n >= 3");
    if (m < 3) throw unsupported_input("round_to_equality: need at least 3 members");
    const double s = norm_sum_sq(t);
    if (s <= 0.0) throw unsupported_input("round_to_equality: zero tuple");

    detail::PrincipalMembers pm = detail::principal_members(t);
    const double unit_lambda = n == 3 ? 1.0 / std::sqrt(2.0) : 0.5;

    // Unit generator triple aligned with the principal members: generator 1
    // through the canonical frame of the leading member, generators 2 and 3
    // by orthonormalizing the projections onto their span.
    CanonicalForm cf = canonical_form(SkewMatrix::unchecked(pm.members[0]));
    const Matrix g2 = detail::extremal_generator(n, 2, unit_lambda).mat();
    const Matrix g3 = detail::extremal_generator(n, 3, unit_lambda).mat();
    Matrix coords(2, 2);
    for (int i = 0; i < 2; ++i) {
        const Matrix conj = conjugate_by(cf.p, pm.members[i + 1]);
        coords(i, 0) = frobenius_inner(conj, g2);
        coords(i, 1) = frobenius_inner(conj, g3);
    }
    // Rows of coords orthonormalized; deterministic fallback on degeneracy.
    {
        double n0 = std::sqrt(coords(0, 0) * coords(0, 0) + coords(0, 1) * coords(0, 1));
        if (n0 < 1e-8 * std::sqrt(s)) {
            coords(0, 0) = 1.0;
            coords(0, 1) = 0.0;
        } else {
            coords(0, 0) /= n0;
            coords(0, 1) /= n0;
        }
        double dot = coords(1, 0) * coords(0, 0) + coords(1, 1) * coords(0, 1);
        coords(1, 0) -= dot * coords(0, 0);
        coords(1, 1) -= dot * coords(0, 1);
        double n1 = std::sqrt(coords(1, 0) * coords(1, 0) + coords(1, 1) * coords(1, 1));
        if (n1 < 1e-8) {
            coords(1, 0) = -coords(0, 1);
            coords(1, 1) = coords(0, 0);
        } else {
            coords(1, 0) /= n1;
            coords(1, 1) /= n1;
        }
    }
    const Matrix pt = cf.p.transpose();
    std::vector<Matrix> gen(3);
    gen[0] = conjugate_by(pt, detail::extremal_generator(n, 1, unit_lambda).mat());
    for (int i = 0; i < 2; ++i)
        gen[1 + i] = conjugate_by(pt, coords(i, 0) * g2 + coords(i, 1) * g3);

    // Coefficient matrix sqrt(s/3) * sum_i gen_i w_i^t: an orthogonal member
    // mix of the exact triple padded with zeros, so exactly extremal.
    const double scale = std::sqrt(s / 3.0);
    Matrix coeff(pair_count(n), m);
    for (int i = 0; i < 3; ++i) {
        SkewTuple single(std::vector<SkewMatrix>{SkewMatrix::unchecked(gen[i])});
        const Matrix gi = coefficients_of(single);
        for (int a = 0; a < coeff.rows(); ++a)
            for (int r = 0; r < m; ++r) coeff(a, r) += scale * gi(a, 0) * pm.mix(r, i);
    }
    return tuple_from_coefficients(n, coeff);
}

}  // namespace skewddvv
