#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "skewddvv/compound.hpp"
#include "skewddvv/inequality.hpp"
#include "skewddvv/jacobi.hpp"
#include "skewddvv/skew.hpp"

namespace skewddvv {

// Pointwise data of a Riemannian submersion with n-dimensional horizontal
// and m-dimensional vertical space. The integrability tensor is the tuple of
// skew matrices A^r (entries A^r_ij); the second fundamental form of the
// fibres T^i_rs is one symmetric m x m matrix per horizontal index i, empty
// meaning totally geodesic fibres. The three scalars are pointwise spectral
// bounds: mu_hat the largest fiber Ricci eigenvalue, kappa_check the largest
// base curvature-operator eigenvalue, lambda_check the lowest base Ricci
// eigenvalue.
struct SubmersionPointData {
    int n;
    int m;
    SkewTuple a;
    std::vector<Matrix> t;  // per horizontal index; empty means T = 0
    // Derivative terms T^i_rri needed by the mixed sectional curvature when
    // T != 0; not computable from pointwise data, so supplied explicitly.
    std::optional<Matrix> t_mixed_derivative;  // n x m
    Matrix fiber_ricci;      // m x m
    Matrix fiber_sectional;  // m x m, zero diagonal
    Matrix base_sectional;   // n x n, zero diagonal
    Matrix base_ricci;       // n x n
    double mu_hat;
    double kappa_check;
    double lambda_check;
};

inline double a_norm_sq(const SubmersionPointData& d) { return norm_sum_sq(d.a); }

namespace detail {

inline void require_symmetric(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": not square");
    const double tol = 1e-12 * std::max(1.0, max_abs(m));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw std::invalid_argument(std::string(what) + ": not symmetric");
}

inline void require_zero_diagonal(const Matrix& m, const char* what) {
    const double tol = 1e-12 * std::max(1.0, max_abs(m));
    for (int i = 0; i < m.rows(); ++i)
        if (std::abs(m(i, i)) > tol)
            throw std::invalid_argument(std::string(what) + ": nonzero diagonal");
}

inline bool has_t(const SubmersionPointData& d) {
    for (const Matrix& ti : d.t)
        if (max_abs(ti) != 0.0) return true;
    return false;
}

}  // namespace detail

inline void validate(const SubmersionPointData& d) {
    if (d.n < 2 || d.m < 1)
        throw std::invalid_argument("SubmersionPointData: need n >= 2 and m >= 1");
    if (d.a.dim() != d.n || d.a.size() != d.m)
        throw std::invalid_argument("SubmersionPointData: tuple shape mismatch");
    if (!d.t.empty()) {
        if (static_cast<int>(d.t.size()) != d.n)
            throw std::invalid_argument("SubmersionPointData: need one T matrix per horizontal index");
        for (const Matrix& ti : d.t) {
            if (ti.rows() != d.m || ti.cols() != d.m)
                throw std::invalid_argument("SubmersionPointData: T matrices must be m x m");
            detail::require_symmetric(ti, "SubmersionPointData T");
        }
    }
    if (d.t_mixed_derivative &&
        (d.t_mixed_derivative->rows() != d.n || d.t_mixed_derivative->cols() != d.m))
        throw std::invalid_argument("SubmersionPointData: derivative table must be n x m");
    if (d.fiber_ricci.rows() != d.m || d.fiber_sectional.rows() != d.m)
        throw std::invalid_argument("SubmersionPointData: fiber tables must be m x m");
    if (d.base_ricci.rows() != d.n || d.base_sectional.rows() != d.n)
        throw std::invalid_argument("SubmersionPointData: base tables must be n x n");
    detail::require_symmetric(d.fiber_ricci, "fiber_ricci");
    detail::require_symmetric(d.fiber_sectional, "fiber_sectional");
    detail::require_symmetric(d.base_sectional, "base_sectional");
    detail::require_symmetric(d.base_ricci, "base_ricci");
    detail::require_zero_diagonal(d.fiber_sectional, "fiber_sectional");
    detail::require_zero_diagonal(d.base_sectional, "base_sectional");
}

// Sectional curvature tables of the total space. The mixed table K_ir needs
// the derivative terms T^i_rri when T != 0; without them it is omitted
// rather than reported wrong.
struct SectionalTables {
    Matrix vertical;               // K_rs, m x m
    std::optional<Matrix> mixed;   // K_ir, n x m
    Matrix horizontal;             // K_ij, n x n
};

inline SectionalTables sectional_curvatures(const SubmersionPointData& d) {
    validate(d);
    const bool with_t = detail::has_t(d);
    SectionalTables out{Matrix(d.m, d.m), std::nullopt, Matrix(d.n, d.n)};

    for (int r = 0; r < d.m; ++r)
        for (int s = 0; s < d.m; ++s) {
            if (r == s) continue;
            double v = d.fiber_sectional(r, s);
            if (with_t)
                for (int i = 0; i < d.n; ++i)
                    v += d.t[i](r, s) * d.t[i](r, s) - d.t[i](r, r) * d.t[i](s, s);
            out.vertical(r, s) = v;
        }

    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) {
            if (i == j) continue;
            double corr = 0.0;
            for (int r = 1; r <= d.m; ++r) {
                const double aij = d.a.member(r)(i, j);
                corr += aij * aij;
            }
            out.horizontal(i, j) = d.base_sectional(i, j) - 3.0 * corr;
        }

    if (!with_t || d.t_mixed_derivative) {
        Matrix mixed(d.n, d.m);
        for (int i = 0; i < d.n; ++i)
            for (int r = 0; r < d.m; ++r) {
                double v = 0.0;
                for (int j = 0; j < d.n; ++j) {
                    const double aij = d.a.member(r + 1)(i, j);
                    v += aij * aij;
                }
                if (with_t) {
                    v += (*d.t_mixed_derivative)(i, r);
                    for (int s = 0; s < d.m; ++s) v -= d.t[i](r, s) * d.t[i](r, s);
                }
                mixed(i, r) = v;
            }
        out.mixed = std::move(mixed);
    }
    return out;
}

// Ricci curvature tables of the total space; requires totally geodesic
// fibres. The mixed block vanishes under the Yang-Mills assumption on A.
struct RicciTables {
    Matrix vertical;    // R_rs, m x m
    Matrix mixed;       // R_ir, n x m, zero
    Matrix horizontal;  // R_ij, n x n
};

inline RicciTables ricci_curvatures(const SubmersionPointData& d) {
    validate(d);
    if (detail::has_t(d))
        throw unsupported_input("ricci_curvatures: needs totally geodesic fibres (T = 0)");
    RicciTables out{Matrix(d.m, d.m), Matrix(d.n, d.m), Matrix(d.n, d.n)};
    for (int r = 0; r < d.m; ++r)
        for (int s = r; s < d.m; ++s) {
            const double v =
                d.fiber_ricci(r, s) + frobenius_inner(d.a.member(r + 1).mat(), d.a.member(s + 1).mat());
            out.vertical(r, s) = v;
            out.vertical(s, r) = v;
        }
    for (int i = 0; i < d.n; ++i)
        for (int j = i; j < d.n; ++j) {
            double corr = 0.0;
            for (int r = 1; r <= d.m; ++r)
                for (int k = 0; k < d.n; ++k)
                    corr += d.a.member(r)(i, k) * d.a.member(r)(j, k);
            const double v = d.base_ricci(i, j) - 2.0 * corr;
            out.horizontal(i, j) = v;
            out.horizontal(j, i) = v;
        }
    return out;
}

// Pointwise integrand of the Simons-type integral inequality; the case id
// selects the dimensional regime: 1 for n = 2, 2 for m = 1, 3 for m >= 2 and
// n = 3, 4 for m >= 2 and n >= 4. Also carries the raw combination it was
// derived from.
struct SimonsIntegrand {
    double value;
    double raw;
};

inline SimonsIntegrand simons_integrand(int case_id, const SubmersionPointData& d) {
    validate(d);
    const double a2 = a_norm_sq(d);
    const double spread = d.kappa_check - d.lambda_check;
    double value = 0.0;
    switch (case_id) {
        case 1:
            if (d.n != 2) throw std::invalid_argument("simons_integrand: case 1 needs n = 2");
            value = a2 * d.mu_hat;
            break;
        case 2:
            if (d.m != 1) throw std::invalid_argument("simons_integrand: case 2 needs m = 1");
            value = a2 * spread;
            break;
        case 3:
            if (d.m < 2 || d.n != 3)
                throw std::invalid_argument("simons_integrand: case 3 needs m >= 2, n = 3");
            value = a2 * (a2 / 6.0 + 2.0 * d.mu_hat + spread);
            break;
        case 4:
            if (d.m < 2 || d.n < 4)
                throw std::invalid_argument("simons_integrand: case 4 needs m >= 2, n >= 4");
            value = a2 * (a2 / 3.0 + 2.0 * d.mu_hat + spread);
            break;
        default:
            throw std::invalid_argument("simons_integrand: case id must be 1..4");
    }
    const double comm = commutator_sum_direct(d.a);
    if (d.n >= 3) {
        const double rhs = d_constant(d.n) * a2 * a2;
        if (comm > rhs + 1e-9 * std::max(1.0, rhs))
            throw numeric_failure("simons_integrand: commutator sum exceeded the proven bound");
    }
    const double raw =
        comm + 4.0 * d.mu_hat * a2 + 2.0 * d.kappa_check * a2 - 2.0 * d.lambda_check * a2;
    return SimonsIntegrand{value, raw};
}

// One-sided consistency checks of the spectral scalars against the supplied
// tables; discrepancies are reported, never fatal, because the scalars may
// come from richer data than the tables.
inline std::vector<std::string> consistency_warnings(const SubmersionPointData& d) {
    validate(d);
    std::vector<std::string> out;
    const double tol = 1e-9 * std::max(1.0, std::abs(d.mu_hat) + std::abs(d.kappa_check) +
                                                std::abs(d.lambda_check));
    {
        SymmetricEigen eig = jacobi_symmetric_eigen(d.fiber_ricci, 1e-14 * std::max(1.0, max_abs(d.fiber_ricci)));
        if (d.mu_hat < eig.values.front() - tol)
            out.push_back("mu_hat is below the largest fiber Ricci eigenvalue");
    }
    {
        SymmetricEigen eig = jacobi_symmetric_eigen(d.base_ricci, 1e-14 * std::max(1.0, max_abs(d.base_ricci)));
        if (d.lambda_check > eig.values.back() + tol)
            out.push_back("lambda_check is above the lowest base Ricci eigenvalue");
    }
    {
        double max_sec = 0.0;
        for (int i = 0; i < d.n; ++i)
            for (int j = 0; j < d.n; ++j)
                if (i != j) max_sec = std::max(max_sec, d.base_sectional(i, j));
        if (d.kappa_check < max_sec - tol)
            out.push_back("kappa_check is below the largest base sectional value");
    }
    return out;
}

namespace detail {

inline Matrix constant_sectional(int dim, double value) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j) m(i, j) = value;
    return m;
}

inline Matrix scaled_identity(int dim, double value) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = value;
    return m;
}

}  // namespace detail

// Equality model over a 3-dimensional base: fibre of constant curvature a,
// base of constant curvature 8a, integrability tensor 2 sqrt(a) times the
// rotation generator triple. The case-3 integrand vanishes identically.
inline SubmersionPointData equality_model_case3(double a) {
    if (a <= 0.0) throw std::invalid_argument("equality_model_case3: need a > 0");
    const double scale = 2.0 * std::sqrt(a);
    std::vector<SkewMatrix> members;
    for (int r = 1; r <= 3; ++r) members.push_back(c_form(r, scale));
    return SubmersionPointData{3,
                               3,
                               SkewTuple(std::move(members)),
                               {},
                               std::nullopt,
                               detail::scaled_identity(3, 2.0 * a),
                               detail::constant_sectional(3, a),
                               detail::constant_sectional(3, 8.0 * a),
                               detail::scaled_identity(3, 16.0 * a),
                               2.0 * a,
                               8.0 * a,
                               16.0 * a};
}

// Equality model over a base of dimension n >= 4: fibre of constant
// curvature a, integrability tensor sqrt(a) times the two-block quaternion
// triple. Base tables are the constant-curvature ones for n = 4 (4a) and
// n = 5 (8a/3); beyond n = 5 no constant-curvature base realizes the
// equality and only the A-tuple is meaningful, so base data is zero.
inline SubmersionPointData equality_model_case4(double a, int n) {
    if (a <= 0.0) throw std::invalid_argument("equality_model_case4: need a > 0");
    if (n < 4) throw std::invalid_argument("equality_model_case4: need n >= 4");
    const double scale = std::sqrt(a);
    std::vector<SkewMatrix> members;
    for (int r = 1; r <= 3; ++r) members.push_back(d_form(r, scale, n));
    double base_curv = 0.0;
    if (n == 4) base_curv = 4.0 * a;
    if (n == 5) base_curv = 8.0 * a / 3.0;
    return SubmersionPointData{n,
                               3,
                               SkewTuple(std::move(members)),
                               {},
                               std::nullopt,
                               detail::scaled_identity(3, 2.0 * a),
                               detail::constant_sectional(3, a),
                               detail::constant_sectional(n, base_curv),
                               detail::scaled_identity(n, (n - 1) * base_curv),
                               2.0 * a,
                               base_curv,
                               (n - 1) * base_curv};
}

// Point model of the quaternionic Hopf fibration of curvature scale a: the
// integrability tensor is built from the quaternion left-multiplication
// table and must coincide with the n = 4 equality model exactly.
inline SubmersionPointData hopf_point_model(double a) {
    if (a <= 0.0) throw std::invalid_argument("hopf_point_model: need a > 0");
    // Left multiplication by the imaginary units on (1, i, j, k):
    // column q of L_u holds the coordinates of u * e_q.
    static const int table[3][4][2] = {
        // i * (1, i, j, k) = (i, -1, k, -j)
        {{2, 1}, {1, -1}, {4, 1}, {3, -1}},
        // j * (1, i, j, k) = (j, -k, -1, i)
        {{3, 1}, {4, -1}, {1, -1}, {2, 1}},
        // k * (1, i, j, k) = (k, j, -i, -1)
        {{4, 1}, {3, 1}, {2, -1}, {1, -1}},
    };
    const double scale = std::sqrt(a);
    std::vector<SkewMatrix> members;
    for (int r = 0; r < 3; ++r) {
        Matrix l(4, 4);
        for (int q = 0; q < 4; ++q) l(table[r][q][0] - 1, q) = table[r][q][1];
        members.push_back(SkewMatrix::unchecked(-scale * l));
    }
    SubmersionPointData model = equality_model_case4(a, 4);
    for (int r = 1; r <= 3; ++r)
        if (max_abs_diff(members[r - 1].mat(), model.a.member(r).mat()) != 0.0)
            throw numeric_failure("hopf_point_model: quaternion construction mismatch");
    return SubmersionPointData{4,
                               3,
                               SkewTuple(std::move(members)),
                               {},
                               std::nullopt,
                               model.fiber_ricci,
                               model.fiber_sectional,
                               model.base_sectional,
                               model.base_ricci,
                               model.mu_hat,
                               model.kappa_check,
                               model.lambda_check};
}

// Point model of the circle Hopf fibration over the round 2-sphere: single
// vertical direction, flat fibre Ricci, base of constant curvature 4a. Both
// low-dimensional integrands vanish on it.
inline SubmersionPointData hopf_s3_model(double a) {
    if (a <= 0.0) throw std::invalid_argument("hopf_s3_model: need a > 0");
    Matrix gen(2, 2);
    gen(0, 1) = std::sqrt(a);
    gen(1, 0) = -std::sqrt(a);
    std::vector<SkewMatrix> members{SkewMatrix::unchecked(std::move(gen))};
    return SubmersionPointData{2,
                               1,
                               SkewTuple(std::move(members)),
                               {},
                               std::nullopt,
                               Matrix(1, 1),
                               Matrix(1, 1),
                               detail::constant_sectional(2, 4.0 * a),
                               detail::scaled_identity(2, 4.0 * a),
                               0.0,
                               4.0 * a,
                               4.0 * a};
}

}  // namespace skewddvv
