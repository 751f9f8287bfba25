#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <skewddvv/skewddvv.hpp>

using namespace skewddvv;

namespace {

double canonical_residual(const SkewMatrix& a, const CanonicalForm& cf) {
    return max_abs_diff(conjugate_by(cf.p, a.mat()), canonical_matrix(cf.lambdas, a.dim()));
}

// Independent transform oracle: entries of U^* (i * Bt) U for the block
// unitary with columns (e_{2k-1} - i e_{2k}) / sqrt(2), (e_{2k} - i e_{2k-1})
// / sqrt(2), and e_n when n is odd, computed with complex arithmetic.
std::vector<std::vector<std::complex<double>>> unitary_conjugate_oracle(const Matrix& bt) {
    const int n = bt.rows();
    const std::complex<double> iu(0.0, 1.0);
    std::vector<std::vector<std::complex<double>>> u(n, std::vector<std::complex<double>>(n));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n / 2; ++k) {
        u[2 * k][2 * k] = inv_sqrt2;
        u[2 * k + 1][2 * k] = -iu * inv_sqrt2;
        u[2 * k + 1][2 * k + 1] = inv_sqrt2;
        u[2 * k][2 * k + 1] = -iu * inv_sqrt2;
    }
    if (n % 2 == 1) u[n - 1][n - 1] = 1.0;

    std::vector<std::vector<std::complex<double>>> out(n,
                                                       std::vector<std::complex<double>>(n));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            std::complex<double> total = 0.0;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    total += std::conj(u[x][p]) * (iu * bt(x, y)) * u[y][q];
            out[p][q] = total;
        }
    return out;
}

}  // namespace

TEST_CASE("canonical matrix builder places the block parameters") {
    Matrix m = canonical_matrix({2.0, 0.5}, 5);
    REQUIRE(m(0, 1) == 2.0);
    REQUIRE(m(1, 0) == -2.0);
    REQUIRE(m(2, 3) == 0.5);
    REQUIRE(m(3, 2) == -0.5);
    REQUIRE(frobenius_norm_sq(m) == Catch::Approx(2.0 * (4.0 + 0.25)));
    REQUIRE_THROWS_AS(canonical_matrix({1.0}, 5), std::invalid_argument);
}

TEST_CASE("canonical form of a plain rotation block") {
    Matrix a(2, 2);
    a(0, 1) = 2.0;
    a(1, 0) = -2.0;
    CanonicalForm cf = canonical_form(SkewMatrix(a));
    REQUIRE(cf.lambdas.size() == 1);
    REQUIRE(cf.lambdas[0] == Catch::Approx(2.0));
    REQUIRE(is_orthogonal(cf.p, 1e-12));
    REQUIRE(canonical_residual(SkewMatrix(a), cf) < 1e-12);
    REQUIRE(conjugate_by(cf.p, a)(0, 1) > 0.0);
}

TEST_CASE("canonical form of a full 3 x 3 matrix has one block and a kernel line") {
    Matrix a(3, 3);
    a(0, 1) = 1.0;
    a(0, 2) = 2.0;
    a(1, 2) = 2.0;
    a(1, 0) = -1.0;
    a(2, 0) = -2.0;
    a(2, 1) = -2.0;
    CanonicalForm cf = canonical_form(SkewMatrix(a));
    REQUIRE(cf.lambdas.size() == 1);
    REQUIRE(cf.lambdas[0] == Catch::Approx(3.0));
    REQUIRE(canonical_residual(SkewMatrix(a), cf) < 1e-8);
}

TEST_CASE("canonical form round-trips random matrices") {
    auto rng = seeded_engine(401);
    for (int n = 2; n <= 9; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            SkewMatrix a = random_skew(n, rng);
            CanonicalForm cf = canonical_form(a);
            REQUIRE(is_orthogonal(cf.p, 1e-10));
            const double lam_max = cf.lambdas.empty() ? 0.0 : cf.lambdas[0];
            REQUIRE(canonical_residual(a, cf) <= 1e-8 * std::max(1.0, lam_max));
            double sum_sq = 0.0;
            for (std::size_t k = 0; k < cf.lambdas.size(); ++k) {
                REQUIRE(cf.lambdas[k] >= 0.0);
                if (k > 0) REQUIRE(cf.lambdas[k] <= cf.lambdas[k - 1] + 1e-12);
                sum_sq += cf.lambdas[k] * cf.lambdas[k];
            }
            REQUIRE(2.0 * sum_sq == Catch::Approx(frobenius_norm_sq(a)).epsilon(1e-10));
        }
    }
}

TEST_CASE("canonical form resolves repeated spectral values") {
    auto rng = seeded_engine(402);
    // Two equal blocks, hidden by a random frame.
    Matrix base = canonical_matrix({1.5, 1.5}, 4);
    Matrix q = random_orthogonal(4, rng);
    SkewMatrix a(conjugate_by(q, base));
    CanonicalForm cf = canonical_form(a);
    REQUIRE(cf.lambdas[0] == Catch::Approx(1.5).margin(1e-9));
    REQUIRE(cf.lambdas[1] == Catch::Approx(1.5).margin(1e-9));
    REQUIRE(canonical_residual(a, cf) < 1e-8 * 1.5);

    // Quaternion-type spectrum in dimension 5 with a kernel direction.
    Matrix base5 = canonical_matrix({2.0, 2.0}, 5);
    Matrix q5 = random_orthogonal(5, rng);
    SkewMatrix a5(conjugate_by(q5, base5));
    CanonicalForm cf5 = canonical_form(a5);
    REQUIRE(cf5.lambdas[0] == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(cf5.lambdas[1] == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(canonical_residual(a5, cf5) < 1e-8 * 2.0);
}

TEST_CASE("canonical form of the zero matrix and of a padded kernel") {
    CanonicalForm cf = canonical_form(SkewMatrix::zero(4));
    REQUIRE(cf.lambdas == std::vector<double>{0.0, 0.0});
    REQUIRE(is_orthogonal(cf.p, 1e-12));

    auto rng = seeded_engine(403);
    Matrix base = canonical_matrix({3.0, 0.0}, 5);
    Matrix q = random_orthogonal(5, rng);
    SkewMatrix a(conjugate_by(q, base));
    CanonicalForm cf5 = canonical_form(a);
    REQUIRE(cf5.lambdas[0] == Catch::Approx(3.0).margin(1e-9));
    REQUIRE(cf5.lambdas[1] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("lambda vector validation") {
    REQUIRE_NOTHROW(LambdaVector({0.5, 0.5}));
    REQUIRE_NOTHROW(LambdaVector({std::sqrt(0.5)}));
    REQUIRE_THROWS_AS(LambdaVector({0.5, 0.6}), std::invalid_argument);   // increasing
    REQUIRE_THROWS_AS(LambdaVector({0.7, -0.7}), std::invalid_argument);  // negative
    REQUIRE_THROWS_AS(LambdaVector({0.9, 0.1}), std::invalid_argument);   // wrong scale
    REQUIRE_THROWS_AS(LambdaVector(std::vector<double>{}), std::invalid_argument);

    auto rng = seeded_engine(404);
    for (int k = 1; k <= 5; ++k) {
        LambdaVector v = random_lambda_vector(k, rng);
        double sum_sq = 0.0;
        for (int i = 0; i < v.size(); ++i) sum_sq += v[i] * v[i];
        REQUIRE(sum_sq == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("normalized spectral parameters rescale to the unit convention") {
    auto rng = seeded_engine(405);
    SkewMatrix a = random_skew(6, rng);
    CanonicalForm cf = canonical_form(a);
    LambdaVector v = normalized_lambdas(cf);
    REQUIRE(v.size() == 3);
    const double scale = std::sqrt(0.5 / (frobenius_norm_sq(a) / 2.0));
    REQUIRE(v[0] == Catch::Approx(cf.lambdas[0] * scale));
    REQUIRE_THROWS_AS(normalized_lambdas(canonical_form(SkewMatrix::zero(4))),
                      std::invalid_argument);
}

TEST_CASE("excess pairs structure and bounded excess sum") {
    LambdaVector peak({0.5, 0.5});
    std::vector<PairIndex> pairs = excess_pairs(peak);
    REQUIRE(pairs.size() == 1);
    REQUIRE(pairs[0].first == 1);
    REQUIRE(pairs[0].second == 2);
    REQUIRE(pair_excess_sum(peak) == Catch::Approx(1.0 / 3.0).margin(1e-15));

    // A spread-out vector has no excess pairs at all.
    const double quarter = std::sqrt(0.5 / 4.0);
    LambdaVector flat({quarter, quarter, quarter, quarter});
    REQUIRE(excess_pairs(flat).empty());
    REQUIRE(pair_excess_sum(flat) == 0.0);

    auto rng = seeded_engine(406);
    for (int k = 1; k <= 6; ++k)
        for (int rep = 0; rep < 200; ++rep) {
            LambdaVector v = random_lambda_vector(k, rng);
            REQUIRE(pair_excess_sum(v) <= 1.0 / 3.0 + 1e-12);
        }
}

TEST_CASE("complex diagonal alternates the block parameters") {
    std::vector<double> u = complex_diagonal(CanonicalForm{Matrix::identity(5),
                                                           {2.0, 0.5}});
    REQUIRE(u == std::vector<double>{2.0, -2.0, 0.5, -0.5, 0.0});
}

TEST_CASE("closed-form complex entries match the unitary conjugation oracle") {
    auto rng = seeded_engine(407);
    for (int n : {4, 5, 6, 7}) {
        SkewMatrix a = random_skew(n, rng);
        SkewMatrix b = random_skew(n, rng);
        CanonicalForm cf = canonical_form(a);
        ComplexEntries got = conjugated_complex_entries(cf, b);

        const Matrix bt = conjugate_by(cf.p, b.mat());
        auto want = unitary_conjugate_oracle(bt);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                REQUIRE(got.re(p, q) == Catch::Approx(want[p][q].real()).margin(1e-12));
                REQUIRE(got.im(p, q) == Catch::Approx(want[p][q].imag()).margin(1e-12));
            }

        // Hermitian with real diagonal and zero in-block off-diagonal slots.
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                REQUIRE(got.re(p, q) == got.re(q, p));
                REQUIRE(got.im(p, q) == -got.im(q, p));
            }
        for (int k = 0; k < n / 2; ++k) {
            REQUIRE(got.im(2 * k, 2 * k) == 0.0);
            REQUIRE(got.re(2 * k, 2 * k + 1) == 0.0);
            REQUIRE(got.im(2 * k, 2 * k + 1) == 0.0);
        }
    }
}

TEST_CASE("spectral weight identity for the commutator norm") {
    auto rng = seeded_engine(408);
    for (int n : {4, 5, 6}) {
        SkewMatrix a = random_skew(n, rng);
        SkewMatrix b = random_skew(n, rng);
        CanonicalForm cf = canonical_form(a);
        ComplexEntries checked = conjugated_complex_entries(cf, b);
        std::vector<double> u = complex_diagonal(cf);

        double weighted = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                const double mod_sq = checked.re(p, q) * checked.re(p, q) +
                                      checked.im(p, q) * checked.im(p, q);
                weighted += (u[p] - u[q]) * (u[p] - u[q]) * mod_sq;
            }

        const Matrix exact = canonical_matrix(cf.lambdas, n);
        const Matrix bt = conjugate_by(cf.p, b.mat());
        const double direct = frobenius_norm_sq(exact * bt - bt * exact);
        REQUIRE(weighted == Catch::Approx(direct).epsilon(1e-11).margin(1e-11));
    }
}

TEST_CASE("pairwise commutator bound") {
    auto rng = seeded_engine(409);
    for (int n : {3, 4, 5, 6}) {
        for (int rep = 0; rep < 50; ++rep) {
            SkewMatrix a = random_skew(n, rng);
            SkewMatrix b = random_skew(n, rng);
            PairBoundReport rep_ab = pair_bound_report(a, b);
            REQUIRE(rep_ab.c == (n == 3 ? 0.5 : 1.0));
            REQUIRE(rep_ab.lhs <= rep_ab.bound + 1e-9 * std::max(1.0, rep_ab.bound));
        }
    }
    REQUIRE_THROWS_AS(pair_bound_report(SkewMatrix::zero(2), SkewMatrix::zero(2)),
                      unsupported_dimension);

    // Equality holds exactly at the generator pairs.
    PairBoundReport c12 = pair_bound_report(c_form(1, 1.0), c_form(2, 1.0));
    REQUIRE(c12.lhs == Catch::Approx(2.0));
    REQUIRE(c12.bound == Catch::Approx(2.0));
    REQUIRE(c12.equality);

    PairBoundReport d12 = pair_bound_report(d_form(1, 1.0), d_form(2, 1.0));
    REQUIRE(d12.lhs == Catch::Approx(16.0));
    REQUIRE(d12.bound == Catch::Approx(16.0));
    REQUIRE(d12.equality);

    auto rng2 = seeded_engine(410);
    SkewMatrix generic_a = random_skew(4, rng2);
    SkewMatrix generic_b = random_skew(4, rng2);
    REQUIRE_FALSE(pair_bound_report(generic_a, generic_b).equality);
}

TEST_CASE("pair equality frame recovers the rotation normal form") {
    auto rng = seeded_engine(411);
    Matrix q = random_orthogonal(3, rng);
    const double lambda = 2.0;
    SkewMatrix a(conjugate_by(q, c_form(1, lambda).mat()));
    Matrix b_plane = 0.3 * c_form(2, lambda).mat() + 0.4 * c_form(3, lambda).mat();
    SkewMatrix b(conjugate_by(q, b_plane));

    std::optional<PairFrame> frame = pair_equality_frame(a, b);
    REQUIRE(frame.has_value());
    const Matrix bt = conjugate_by(frame->p, b.mat());
    const Matrix fit = frame->a * c_form(2, lambda).mat() + frame->b * c_form(3, lambda).mat();
    REQUIRE(max_abs_diff(bt, fit) < 1e-7);
    REQUIRE(frame->a * frame->a + frame->b * frame->b == Catch::Approx(0.25).epsilon(1e-9));

    // A component along the first generator direction breaks the normal form.
    SkewMatrix bad(conjugate_by(q, c_form(1, 1.0).mat()));
    REQUIRE_FALSE(pair_equality_frame(a, bad).has_value());
}

TEST_CASE("pair equality frame recovers the two-block normal form") {
    auto rng = seeded_engine(412);
    for (int n : {4, 5}) {
        Matrix q = random_orthogonal(n, rng);
        const double lambda = 1.5;
        SkewMatrix a(conjugate_by(q, d_form(1, lambda, n).mat()));
        Matrix b_plane =
            0.6 * d_form(2, lambda, n).mat() - 0.8 * d_form(3, lambda, n).mat();
        SkewMatrix b(conjugate_by(q, b_plane));

        std::optional<PairFrame> frame = pair_equality_frame(a, b);
        REQUIRE(frame.has_value());
        const Matrix bt = conjugate_by(frame->p, b.mat());
        const Matrix fit =
            frame->a * d_form(2, lambda, n).mat() + frame->b * d_form(3, lambda, n).mat();
        REQUIRE(max_abs_diff(bt, fit) < 1e-6);
        REQUIRE(frame->a * frame->a + frame->b * frame->b == Catch::Approx(1.0).epsilon(1e-9));
    }

    // Distinct block parameters cannot carry the equality normal form.
    auto rng2 = seeded_engine(413);
    Matrix q2 = random_orthogonal(4, rng2);
    SkewMatrix lopsided(conjugate_by(q2, canonical_matrix({2.0, 1.0}, 4)));
    SkewMatrix probe(conjugate_by(q2, d_form(2, 1.5, 4).mat()));
    REQUIRE_FALSE(pair_equality_frame(lopsided, probe).has_value());
}

TEST_CASE("orthogonal factor recovery") {
    auto rng = seeded_engine(414);
    Matrix b = random_gaussian(6, 4, rng);
    Matrix r = random_orthogonal(4, rng);
    Matrix a = b * r;
    std::optional<Matrix> got = orthogonal_factor(a, b);
    REQUIRE(got.has_value());
    REQUIRE(is_orthogonal(*got, 1e-9));
    REQUIRE(frobenius_norm(a - b * *got) < 1e-7);

    // Rank-deficient inputs still factor exactly.
    Matrix thin = random_gaussian(5, 3, rng);
    for (int i = 0; i < 5; ++i) thin(i, 2) = 0.0;
    Matrix a_thin = thin * random_orthogonal(3, rng);
    std::optional<Matrix> got_thin = orthogonal_factor(a_thin, thin);
    REQUIRE(got_thin.has_value());
    REQUIRE(is_orthogonal(*got_thin, 1e-9));
    REQUIRE(frobenius_norm(a_thin - thin * *got_thin) < 1e-7);

    // Mismatched row Gram matrices are rejected.
    REQUIRE_FALSE(orthogonal_factor(2.0 * b, b).has_value());
    REQUIRE_THROWS_AS(orthogonal_factor(b, thin), std::invalid_argument);
}
