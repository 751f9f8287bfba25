// Command line front end. Exit status contract: 0 clean run, 1 when the
// requested checks found violations, 2 on usage, parse, or numeric errors.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <skewddvv/io.hpp>
#include <skewddvv/skewddvv.hpp>

namespace {

using namespace skewddvv;

constexpr int kExitClean = 0;
constexpr int kExitViolations = 1;
constexpr int kExitError = 2;

// Writes the whole report at once so output ordering never depends on
// worker scheduling.
int write_csv(const std::string& body, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(body.c_str(), stdout);
        return kExitClean;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n", out_path.c_str());
        return kExitError;
    }
    f << body;
    f.flush();
    if (!f.good()) {
        std::fprintf(stderr, "error: failed while writing '%s'\n", out_path.c_str());
        return kExitError;
    }
    return kExitClean;
}

struct VerifyArgs {
    int n = 3;
    int m = 3;
    long trials = 1000;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    std::string out;
};

int cmd_verify(const VerifyArgs& args) {
    VerifyOptions opt;
    opt.n = args.n;
    opt.m = args.m;
    opt.trials = args.trials;
    opt.seed = args.seed;
    opt.tolerance = args.tolerance;
    opt.check_trace = true;
    opt.keep_rows = true;
    const VerifyReport rep = run_verify(opt);

    std::ostringstream csv;
    csv << "trial,ratio,commutator_sum,norm_sq_sum,trace_dev\n";
    for (const VerifyRow& row : rep.rows)
        csv << row.trial << ',' << g17(row.ratio) << ',' << g17(row.commutator_sum) << ','
            << g17(row.norm_sq_sum) << ',' << g17(row.trace_dev) << '\n';

    std::fprintf(stderr,
                 "verify: n=%d m=%d trials=%ld d=%s max_ratio=%s max_trace_dev=%s violations=%ld\n",
                 args.n, args.m, args.trials, g17(rep.d).c_str(), g17(rep.max_ratio).c_str(),
                 g17(rep.max_trace_dev).c_str(), rep.violations);

    const int rc = write_csv(csv.str(), args.out);
    if (rc != kExitClean) return rc;
    return rep.violations > 0 ? kExitViolations : kExitClean;
}

int cmd_canonical(const std::string& input_path, const std::string& out) {
    const std::vector<Matrix> loaded = load_matrices(input_path);
    if (loaded.size() != 1) {
        std::fprintf(stderr, "error: '%s' holds %zu matrices, canonical expects exactly one\n",
                     input_path.c_str(), loaded.size());
        return kExitError;
    }
    const SkewMatrix a(loaded[0]);
    const CanonicalForm cf = canonical_form(a);
    const int n = a.dim();
    const Matrix transformed = conjugate_by(cf.p, a.mat());
    const double residual = max_abs_diff(transformed, canonical_matrix(cf.lambdas, n));

    std::ostringstream csv;
    csv << "kind,i,j,value\n";
    for (std::size_t k = 0; k < cf.lambdas.size(); ++k)
        csv << "lambda," << k + 1 << ",0," << g17(cf.lambdas[k]) << '\n';
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            csv << "p," << i + 1 << ',' << j + 1 << ',' << g17(cf.p(i, j)) << '\n';
    csv << "residual,0,0," << g17(residual) << '\n';

    std::ostringstream lam;
    for (std::size_t k = 0; k < cf.lambdas.size(); ++k) {
        if (k > 0) lam << ' ';
        lam << g17(cf.lambdas[k]);
    }
    std::fprintf(stderr, "canonical: n=%d blocks=%zu lambdas=[%s] residual=%s\n", n,
                 cf.lambdas.size(), lam.str().c_str(), g17(residual).c_str());
    return write_csv(csv.str(), out);
}

struct SharpnessArgs {
    int n = 3;
    int m = 3;
    int restarts = 32;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_sharpness(const SharpnessArgs& args) {
    OptimizerConfig cfg;
    cfg.seed = args.seed;
    cfg.restarts = args.restarts;
    const SharpnessResult res = sharpness_search(args.n, args.m, cfg);

    bool rounded_equality = false;
    double canonical_residual = 0.0;
    bool have_residual = false;
    if (args.m >= 3) {
        const SkewTuple rounded = round_to_equality(res.tuple);
        const std::optional<EqualityCanonicalization> ec = equality_canonicalize(rounded);
        rounded_equality = ec.has_value();
        if (ec) {
            canonical_residual = ec->residual;
            have_residual = true;
        }
    }

    std::ostringstream csv;
    csv << "key,index,value\n";
    for (std::size_t r = 0; r < res.history.size(); ++r)
        csv << "restart_ratio," << r << ',' << g17(res.history[r]) << '\n';
    csv << "best_ratio,0," << g17(res.ratio) << '\n';
    csv << "d,0," << g17(d_constant(args.n)) << '\n';
    csv << "gap,0," << g17(res.gap) << '\n';
    csv << "iterations,0," << res.iterations << '\n';
    csv << "budget_exhausted,0," << (res.budget_exhausted ? 1 : 0) << '\n';
    csv << "low_member_warning,0," << (res.low_member_warning ? 1 : 0) << '\n';
    csv << "rounded_equality,0," << (rounded_equality ? 1 : 0) << '\n';
    if (have_residual) csv << "canonical_residual,0," << g17(canonical_residual) << '\n';

    if (res.low_member_warning)
        std::fprintf(stderr, "warning: fewer than 3 members, the bound cannot be attained\n");
    std::fprintf(stderr,
                 "sharpness: n=%d m=%d restarts=%d best_ratio=%s gap=%s rounded_equality=%s%s%s\n",
                 args.n, args.m, args.restarts, g17(res.ratio).c_str(), g17(res.gap).c_str(),
                 rounded_equality ? "yes" : "no",
                 have_residual ? " canonical_residual=" : "",
                 have_residual ? g17(canonical_residual).c_str() : "");
    return write_csv(csv.str(), args.out);
}

struct ExpectedTables {
    Matrix k_rs;    // vertical sectional, m x m, off diagonal
    Matrix k_ir;    // mixed sectional, n x m
    Matrix k_ij;    // horizontal sectional, n x n, off diagonal
    Matrix r_rs;    // vertical Ricci, m x m
    Matrix r_ij;    // horizontal Ricci, n x n
    Matrix base_k;  // base sectional, n x n, off diagonal
    Matrix base_r;  // base Ricci, n x n
};

Matrix off_diagonal_constant(int n, double v) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m(i, j) = v;
    return m;
}

Matrix constant_matrix(int rows, int cols, double v) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = v;
    return m;
}

Matrix scaled_identity_matrix(int n, double v) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = v;
    return m;
}

ExpectedTables expected_case3(double a) {
    ExpectedTables e{off_diagonal_constant(3, a),  constant_matrix(3, 3, 4.0 * a),
                     off_diagonal_constant(3, -4.0 * a), scaled_identity_matrix(3, 10.0 * a),
                     Matrix(3, 3),                  off_diagonal_constant(3, 8.0 * a),
                     scaled_identity_matrix(3, 16.0 * a)};
    e.k_ir(0, 2) = 0.0;
    e.k_ir(1, 1) = 0.0;
    e.k_ir(2, 0) = 0.0;
    return e;
}

ExpectedTables expected_case4(double a, int n) {
    if (n == 4)
        return ExpectedTables{off_diagonal_constant(3, a), constant_matrix(4, 3, a),
                              off_diagonal_constant(4, a), scaled_identity_matrix(3, 6.0 * a),
                              scaled_identity_matrix(4, 6.0 * a),
                              off_diagonal_constant(4, 4.0 * a),
                              scaled_identity_matrix(4, 12.0 * a)};
    ExpectedTables e{off_diagonal_constant(3, a),
                     constant_matrix(5, 3, a),
                     Matrix(5, 5),
                     scaled_identity_matrix(3, 6.0 * a),
                     Matrix(5, 5),
                     off_diagonal_constant(5, 8.0 * a / 3.0),
                     scaled_identity_matrix(5, 32.0 * a / 3.0)};
    for (int r = 0; r < 3; ++r) e.k_ir(4, r) = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i == j) continue;
            e.k_ij(i, j) = (i < 4 && j < 4) ? -a / 3.0 : 8.0 * a / 3.0;
        }
    for (int i = 0; i < 4; ++i) e.r_ij(i, i) = 14.0 * a / 3.0;
    e.r_ij(4, 4) = 32.0 * a / 3.0;
    return e;
}

ExpectedTables expected_hopf_s3(double a) {
    return ExpectedTables{Matrix(1, 1),
                          constant_matrix(2, 1, a),
                          off_diagonal_constant(2, a),
                          scaled_identity_matrix(1, 2.0 * a),
                          scaled_identity_matrix(2, 2.0 * a),
                          off_diagonal_constant(2, 4.0 * a),
                          scaled_identity_matrix(2, 4.0 * a)};
}

struct SubmersionArgs {
    std::string case_tag;
    double a = 1.0;
    int n = 0;  // 0 picks the default dimension of the chosen case
    std::string out;
};

int cmd_submersion(const SubmersionArgs& args) {
    const std::string& tag = args.case_tag;
    int n_eff = args.n;
    std::vector<int> case_ids;
    if (tag == "case3") {
        if (n_eff == 0) n_eff = 3;
        if (n_eff != 3) {
            std::fprintf(stderr, "error: case3 is defined for n=3\n");
            return kExitError;
        }
        case_ids = {3};
    } else if (tag == "case4") {
        if (n_eff == 0) n_eff = 4;
        if (n_eff != 4 && n_eff != 5) {
            std::fprintf(stderr, "error: case4 reference tables cover n=4 and n=5\n");
            return kExitError;
        }
        case_ids = {4};
    } else if (tag == "hopf") {
        if (n_eff == 0) n_eff = 4;
        if (n_eff != 4) {
            std::fprintf(stderr, "error: hopf is defined for n=4\n");
            return kExitError;
        }
        case_ids = {4};
    } else if (tag == "hopf_s3") {
        if (n_eff == 0) n_eff = 2;
        if (n_eff != 2) {
            std::fprintf(stderr, "error: hopf_s3 is defined for n=2\n");
            return kExitError;
        }
        case_ids = {1, 2};
    } else {
        std::fprintf(stderr, "error: unknown case '%s' (case3, case4, hopf, hopf_s3)\n",
                     tag.c_str());
        return kExitError;
    }

    const SubmersionPointData data = [&]() -> SubmersionPointData {
        if (tag == "case3") return equality_model_case3(args.a);
        if (tag == "case4") return equality_model_case4(args.a, n_eff);
        if (tag == "hopf") return hopf_point_model(args.a);
        return hopf_s3_model(args.a);
    }();
    const ExpectedTables expected = [&]() -> ExpectedTables {
        if (tag == "case3") return expected_case3(args.a);
        if (tag == "case4" || tag == "hopf") return expected_case4(args.a, n_eff);
        return expected_hopf_s3(args.a);
    }();

    const SectionalTables sect = sectional_curvatures(data);
    const RicciTables ricci = ricci_curvatures(data);

    double scale = 1.0;
    for (const Matrix* t : {&expected.k_rs, &expected.k_ir, &expected.k_ij, &expected.r_rs,
                            &expected.r_ij, &expected.base_k, &expected.base_r})
        scale = std::max(scale, max_abs(*t));

    double dev = 0.0;
    auto track = [&](double computed, double want) {
        dev = std::max(dev, std::abs(computed - want));
    };
    std::ostringstream csv;
    csv << "table,i,j,value\n";
    auto emit = [&](const char* name, const Matrix& computed, const Matrix& want,
                    bool off_diagonal_only) {
        for (int i = 0; i < computed.rows(); ++i)
            for (int j = 0; j < computed.cols(); ++j) {
                if (off_diagonal_only && i == j) continue;
                csv << name << ',' << i + 1 << ',' << j + 1 << ',' << g17(computed(i, j)) << '\n';
                track(computed(i, j), want(i, j));
            }
    };
    emit("K_rs", sect.vertical, expected.k_rs, true);
    emit("K_ir", *sect.mixed, expected.k_ir, false);
    emit("K_ij", sect.horizontal, expected.k_ij, true);
    emit("R_rs", ricci.vertical, expected.r_rs, false);
    emit("R_ir", ricci.mixed, Matrix(data.n, data.m), false);
    emit("R_ij", ricci.horizontal, expected.r_ij, false);
    emit("base_K_ij", data.base_sectional, expected.base_k, true);
    emit("base_R_ij", data.base_ricci, expected.base_r, false);
    const double rel_dev = dev / scale;

    csv << "a_norm_sq,0,0," << g17(a_norm_sq(data)) << '\n';
    csv << "mu_hat,0,0," << g17(data.mu_hat) << '\n';
    csv << "kappa_check,0,0," << g17(data.kappa_check) << '\n';
    csv << "lambda_check,0,0," << g17(data.lambda_check) << '\n';

    long violations = rel_dev > 1e-12 ? 1 : 0;
    std::ostringstream human;
    for (int id : case_ids) {
        const SimonsIntegrand integrand = simons_integrand(id, data);
        csv << "integrand," << id << ",0," << g17(integrand.value) << '\n';
        csv << "integrand_raw," << id << ",0," << g17(integrand.raw) << '\n';
        if (std::abs(integrand.value) > 1e-10) ++violations;
        human << " integrand[" << id << "]=" << g17(integrand.value);
    }
    csv << "max_deviation,0,0," << g17(rel_dev) << '\n';

    for (const std::string& w : consistency_warnings(data))
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::fprintf(stderr, "submersion: case=%s n=%d m=%d a=%s max_deviation=%s%s\n", tag.c_str(),
                 data.n, data.m, g17(args.a).c_str(), g17(rel_dev).c_str(), human.str().c_str());

    const int rc = write_csv(csv.str(), args.out);
    if (rc != kExitClean) return rc;
    return violations > 0 ? kExitViolations : kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skew-symmetric commutator inequality toolkit"};
    app.require_subcommand(1);

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "sample random tuples and check the commutator norm bound");
    verify->add_option("--n", verify_args.n, "matrix dimension")->capture_default_str();
    verify->add_option("--m", verify_args.m, "tuple size")->capture_default_str();
    verify->add_option("--trials", verify_args.trials, "number of random tuples")
        ->capture_default_str();
    verify->add_option("--seed", verify_args.seed, "root seed")->capture_default_str();
    verify->add_option("--tolerance", verify_args.tolerance, "allowed excess over the constant")
        ->capture_default_str();
    verify->add_option("--out", verify_args.out, "CSV output path (default: stdout)");

    std::string canonical_input;
    std::string canonical_out;
    CLI::App* canonical = app.add_subcommand(
        "canonical", "block-diagonalize one skew-symmetric matrix from a file");
    canonical->add_option("input", canonical_input, "matrix file (JSON array of rows)")
        ->required();
    canonical->add_option("--out", canonical_out, "CSV output path (default: stdout)");

    SharpnessArgs sharp_args;
    CLI::App* sharpness = app.add_subcommand(
        "sharpness", "maximize the commutator ratio and canonicalize the optimum");
    sharpness->add_option("--n", sharp_args.n, "matrix dimension")->capture_default_str();
    sharpness->add_option("--m", sharp_args.m, "tuple size")->capture_default_str();
    sharpness->add_option("--restarts", sharp_args.restarts, "random restarts")
        ->capture_default_str();
    sharpness->add_option("--seed", sharp_args.seed, "root seed")->capture_default_str();
    sharpness->add_option("--out", sharp_args.out, "CSV output path (default: stdout)");

    SubmersionArgs sub_args;
    CLI::App* submersion = app.add_subcommand(
        "submersion", "curvature tables and integrand checks for the model submersions");
    submersion->add_option("--case", sub_args.case_tag, "case3, case4, hopf, or hopf_s3")
        ->required();
    submersion->add_option("--a", sub_args.a, "curvature scale, must be positive")
        ->capture_default_str();
    submersion->add_option("--n", sub_args.n, "total-space horizontal dimension (case4)")
        ->capture_default_str();
    submersion->add_option("--out", sub_args.out, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitClean : kExitError;
    }

    try {
        if (verify->parsed()) return cmd_verify(verify_args);
        if (canonical->parsed()) return cmd_canonical(canonical_input, canonical_out);
        if (sharpness->parsed()) return cmd_sharpness(sharp_args);
        if (submersion->parsed()) return cmd_submersion(sub_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
