#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <skewddvv/skewddvv.hpp>

using namespace skewddvv;

namespace {

Matrix off_diag(int n, double v) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m(i, j) = v;
    return m;
}

Matrix diag(int n, double v) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = v;
    return m;
}

void require_close(const Matrix& got, const Matrix& want, double scale) {
    REQUIRE(max_abs_diff(got, want) <= 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("three-dimensional equality model reproduces its curvature tables") {
    for (double a : {0.5, 1.0, 2.0}) {
        SubmersionPointData d = equality_model_case3(a);
        REQUIRE(a_norm_sq(d) == Catch::Approx(24.0 * a).epsilon(1e-13));

        SectionalTables sect = sectional_curvatures(d);
        REQUIRE(sect.mixed.has_value());
        require_close(sect.vertical, off_diag(3, a), a);
        require_close(sect.horizontal, off_diag(3, -4.0 * a), 4.0 * a);

        Matrix k_ir(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int r = 0; r < 3; ++r) k_ir(i, r) = 4.0 * a;
        k_ir(0, 2) = 0.0;
        k_ir(1, 1) = 0.0;
        k_ir(2, 0) = 0.0;
        require_close(*sect.mixed, k_ir, 4.0 * a);

        RicciTables ricci = ricci_curvatures(d);
        require_close(ricci.vertical, diag(3, 10.0 * a), 10.0 * a);
        require_close(ricci.horizontal, Matrix(3, 3), a);
        require_close(ricci.mixed, Matrix(3, 3), a);

        REQUIRE(commutator_sum_direct(d.a) ==
                Catch::Approx(192.0 * a * a).epsilon(1e-13));
        REQUIRE(consistency_warnings(d).empty());
    }
}

TEST_CASE("five-dimensional equality model reproduces its curvature tables") {
    for (double a : {0.5, 1.0, 2.0}) {
        SubmersionPointData d = equality_model_case4(a, 5);

        SectionalTables sect = sectional_curvatures(d);
        require_close(sect.vertical, off_diag(3, a), a);

        Matrix k_ij(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                if (i == j) continue;
                k_ij(i, j) = (i < 4 && j < 4) ? -a / 3.0 : 8.0 * a / 3.0;
            }
        require_close(sect.horizontal, k_ij, 3.0 * a);

        REQUIRE(sect.mixed.has_value());
        Matrix k_ir(5, 3);
        for (int i = 0; i < 4; ++i)
            for (int r = 0; r < 3; ++r) k_ir(i, r) = a;
        require_close(*sect.mixed, k_ir, a);

        RicciTables ricci = ricci_curvatures(d);
        require_close(ricci.vertical, diag(3, 6.0 * a), 6.0 * a);
        Matrix r_ij = diag(5, 14.0 * a / 3.0);
        r_ij(4, 4) = 32.0 * a / 3.0;
        require_close(ricci.horizontal, r_ij, 11.0 * a);

        REQUIRE(consistency_warnings(d).empty());
    }
}

TEST_CASE("four-dimensional equality model is the constant-curvature point") {
    const double a = 1.0;
    SubmersionPointData d = equality_model_case4(a, 4);
    SectionalTables sect = sectional_curvatures(d);
    require_close(sect.vertical, off_diag(3, a), a);
    require_close(sect.horizontal, off_diag(4, a), a);
    Matrix ones(4, 3);
    for (int i = 0; i < 4; ++i)
        for (int r = 0; r < 3; ++r) ones(i, r) = a;
    require_close(*sect.mixed, ones, a);

    RicciTables ricci = ricci_curvatures(d);
    require_close(ricci.vertical, diag(3, 6.0 * a), 6.0 * a);
    require_close(ricci.horizontal, diag(4, 6.0 * a), 6.0 * a);

    REQUIRE_THROWS_AS(equality_model_case4(1.0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(equality_model_case4(0.0, 4), std::invalid_argument);
}

TEST_CASE("quaternion construction matches the four-dimensional model exactly") {
    for (double a : {0.5, 1.0, 2.0}) {
        SubmersionPointData hopf = hopf_point_model(a);
        SubmersionPointData model = equality_model_case4(a, 4);
        for (int r = 1; r <= 3; ++r)
            REQUIRE(max_abs_diff(hopf.a.member(r).mat(), model.a.member(r).mat()) == 0.0);

        SectionalTables sect = sectional_curvatures(hopf);
        require_close(sect.vertical, off_diag(3, a), a);
        require_close(sect.horizontal, off_diag(4, a), a);
        require_close(hopf.base_sectional, off_diag(4, 4.0 * a), 4.0 * a);
    }
}

TEST_CASE("circle fibration model gives the round sphere of curvature a") {
    const double a = 1.0;
    SubmersionPointData d = hopf_s3_model(a);
    REQUIRE(a_norm_sq(d) == Catch::Approx(2.0 * a));

    SectionalTables sect = sectional_curvatures(d);
    REQUIRE(sect.horizontal(0, 1) == Catch::Approx(a).margin(1e-14));
    REQUIRE(sect.mixed.has_value());
    REQUIRE((*sect.mixed)(0, 0) == Catch::Approx(a).margin(1e-14));
    REQUIRE((*sect.mixed)(1, 0) == Catch::Approx(a).margin(1e-14));

    RicciTables ricci = ricci_curvatures(d);
    REQUIRE(ricci.vertical(0, 0) == Catch::Approx(2.0 * a).margin(1e-14));
    require_close(ricci.horizontal, diag(2, 2.0 * a), 2.0 * a);
}

TEST_CASE("integrands vanish on the equality models") {
    for (double a : {0.5, 1.0, 2.0}) {
        SubmersionPointData c3 = equality_model_case3(a);
        SimonsIntegrand i3 = simons_integrand(3, c3);
        REQUIRE(std::abs(i3.value) <= 1e-10);
        REQUIRE(std::abs(i3.raw) <= 1e-10);

        for (int n : {4, 5}) {
            SubmersionPointData c4 = equality_model_case4(a, n);
            SimonsIntegrand i4 = simons_integrand(4, c4);
            REQUIRE(std::abs(i4.value) <= 1e-10);
            REQUIRE(std::abs(i4.raw) <= 1e-10);
        }

        SubmersionPointData s3 = hopf_s3_model(a);
        REQUIRE(std::abs(simons_integrand(1, s3).value) <= 1e-10);
        REQUIRE(std::abs(simons_integrand(2, s3).value) <= 1e-10);
    }
}

TEST_CASE("single-fibre data with matching spectral bounds has zero integrand") {
    auto rng = seeded_engine(801);
    SkewMatrix gen = random_skew(3, rng);
    SubmersionPointData d{3,
                          1,
                          SkewTuple(std::vector<SkewMatrix>{gen}),
                          {},
                          std::nullopt,
                          Matrix(1, 1),
                          Matrix(1, 1),
                          off_diag(3, 2.0),
                          diag(3, 4.0),
                          0.0,
                          3.0,
                          3.0};
    SimonsIntegrand i2 = simons_integrand(2, d);
    REQUIRE(i2.value == 0.0);
    REQUIRE(consistency_warnings(d).empty());
}

TEST_CASE("integrand case selection is validated") {
    SubmersionPointData c3 = equality_model_case3(1.0);
    REQUIRE_THROWS_AS(simons_integrand(1, c3), std::invalid_argument);
    REQUIRE_THROWS_AS(simons_integrand(2, c3), std::invalid_argument);
    REQUIRE_THROWS_AS(simons_integrand(4, c3), std::invalid_argument);
    REQUIRE_THROWS_AS(simons_integrand(5, c3), std::invalid_argument);
    SubmersionPointData c4 = equality_model_case4(1.0, 4);
    REQUIRE_THROWS_AS(simons_integrand(3, c4), std::invalid_argument);
}

TEST_CASE("second fundamental form terms enter the sectional tables") {
    Matrix t1(2, 2), t2(2, 2);
    t1(0, 0) = 1.0;
    t1(0, 1) = 0.5;
    t1(1, 0) = 0.5;
    t1(1, 1) = 2.0;
    t2(0, 0) = 0.5;
    t2(1, 1) = 1.0;
    SubmersionPointData d{2,
                          2,
                          SkewTuple(std::vector<SkewMatrix>{SkewMatrix::zero(2),
                                                            SkewMatrix::zero(2)}),
                          {t1, t2},
                          std::nullopt,
                          Matrix(2, 2),
                          off_diag(2, 3.0),
                          off_diag(2, 1.0),
                          diag(2, 1.0),
                          0.0,
                          1.0,
                          1.0};

    SectionalTables sect = sectional_curvatures(d);
    // K_rs = fiber value + sum_i (T^i_rs^2 - T^i_rr T^i_ss).
    REQUIRE(sect.vertical(0, 1) == Catch::Approx(3.0 + (0.25 - 2.0) + (0.0 - 0.5)));
    // Without the derivative table the mixed block is omitted, not guessed.
    REQUIRE_FALSE(sect.mixed.has_value());
    REQUIRE_THROWS_AS(ricci_curvatures(d), unsupported_input);

    Matrix deriv(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int r = 0; r < 2; ++r) deriv(i, r) = 5.0;
    d.t_mixed_derivative = deriv;
    SectionalTables with_deriv = sectional_curvatures(d);
    REQUIRE(with_deriv.mixed.has_value());
    REQUIRE((*with_deriv.mixed)(0, 0) == Catch::Approx(5.0 - 1.25));
    REQUIRE((*with_deriv.mixed)(0, 1) == Catch::Approx(5.0 - 4.25));
    REQUIRE((*with_deriv.mixed)(1, 0) == Catch::Approx(5.0 - 0.25));
    REQUIRE((*with_deriv.mixed)(1, 1) == Catch::Approx(5.0 - 1.0));
}

TEST_CASE("point data validation rejects malformed tables") {
    SubmersionPointData good = equality_model_case3(1.0);
    REQUIRE_NOTHROW(validate(good));

    SubmersionPointData bad = good;
    bad.base_sectional(0, 1) = 99.0;  // breaks symmetry
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);

    bad = good;
    bad.fiber_sectional(1, 1) = 1.0;  // nonzero diagonal
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);

    bad = good;
    bad.base_ricci = Matrix(2, 2);  // wrong size
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);

    bad = good;
    bad.n = 4;  // tuple no longer matches
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);

    bad = good;
    bad.t = {Matrix(3, 3)};  // one matrix instead of n
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);

    bad = good;
    bad.t = {Matrix(2, 2), Matrix(2, 2), Matrix(2, 2)};  // wrong block size
    REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("spectral consistency warnings flag understated bounds") {
    SubmersionPointData d = equality_model_case3(1.0);
    REQUIRE(consistency_warnings(d).empty());

    SubmersionPointData low_mu = d;
    low_mu.mu_hat = 1.0;  // below the fiber Ricci top eigenvalue 2
    REQUIRE(consistency_warnings(low_mu).size() == 1);

    SubmersionPointData high_lambda = d;
    high_lambda.lambda_check = 17.0;  // above the lowest base Ricci eigenvalue 16
    REQUIRE(consistency_warnings(high_lambda).size() == 1);

    SubmersionPointData low_kappa = d;
    low_kappa.kappa_check = 7.0;  // below the largest base sectional value 8
    REQUIRE(consistency_warnings(low_kappa).size() == 1);
}

TEST_CASE("model tables scale linearly with the curvature parameter") {
    SubmersionPointData one = equality_model_case3(1.0);
    SubmersionPointData three = equality_model_case3(3.0);
    SectionalTables s1 = sectional_curvatures(one);
    SectionalTables s3 = sectional_curvatures(three);
    REQUIRE(max_abs_diff(s3.horizontal, 3.0 * s1.horizontal) < 1e-12);
    REQUIRE(max_abs_diff(*s3.mixed, 3.0 * *s1.mixed) < 1e-12);
    RicciTables r1 = ricci_curvatures(one);
    RicciTables r3 = ricci_curvatures(three);
    REQUIRE(max_abs_diff(r3.vertical, 3.0 * r1.vertical) < 1e-12);
    // The raw integrand combination is quadratic in the scale.
    REQUIRE(simons_integrand(3, three).raw ==
            Catch::Approx(9.0 * simons_integrand(3, one).raw).margin(1e-10));
}
