#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "skewddvv/inequality.hpp"
#include "skewddvv/parallel.hpp"
#include "skewddvv/random.hpp"

namespace skewddvv {

// Sampling campaign: random tuples, ratio against the proven constant, and
// (optionally) the trace-identity cross-check of the commutator sum.
struct VerifyOptions {
    int n = 3;
    int m = 3;
    long trials = 1000;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    bool check_trace = true;
    bool keep_rows = false;
};

struct VerifyRow {
    long trial;
    double ratio;
    double commutator_sum;
    double norm_sq_sum;
    double trace_dev;  // relative deviation of the trace-identity value
};

struct VerifyReport {
    VerifyOptions options;
    double d = 0.0;
    double max_ratio = 0.0;
    double max_trace_dev = 0.0;
    long violations = 0;
    std::vector<VerifyRow> rows;  // filled when options.keep_rows
};

// Deterministic for a fixed seed regardless of worker count: trial i always
// uses the engine seeded by mix_seed(seed, i).
inline VerifyReport run_verify(const VerifyOptions& opt) {
    const double d = d_constant(opt.n);
    if (opt.m < 1) throw std::invalid_argument("run_verify: need m >= 1");
    if (opt.trials < 1) throw std::invalid_argument("run_verify: need trials >= 1");
    if (opt.tolerance <= 0.0) throw std::invalid_argument("run_verify: tolerance must be positive");

    const std::vector<GramEntry> c_std =
        opt.check_trace ? standard_commutator_gram_sparse(opt.n) : std::vector<GramEntry>{};

    VerifyReport rep;
    rep.options = opt;
    rep.d = d;
    if (opt.keep_rows) rep.rows.resize(opt.trials);

    const int threads = resolve_threads();
    const long chunks = std::min<long>(opt.trials, std::max(8L * threads, 1L));
    struct Partial {
        double max_ratio = 0.0;
        double max_dev = 0.0;
        long violations = 0;
    };
    std::vector<Partial> partial(chunks);

    parallel_for_index(chunks, threads, [&](long c) {
        const long lo = opt.trials * c / chunks;
        const long hi = opt.trials * (c + 1) / chunks;
        Partial p;
        for (long i = lo; i < hi; ++i) {
            auto rng = seeded_engine(mix_seed(opt.seed, static_cast<std::uint64_t>(i)));
            const SkewTuple t = random_skew_tuple(opt.n, opt.m, rng);
            const double lhs = commutator_sum_direct(t);
            const double s = norm_sum_sq(t);
            const double ratio = s > 0.0 ? lhs / (s * s) : 0.0;
            double dev = 0.0;
            if (opt.check_trace) {
                const Matrix coeff = coefficients_of(t);
                const Matrix gram = coeff * coeff.transpose();
                const double lhs_tr = trace_commutator_sum(gram, c_std);
                dev = std::abs(lhs - lhs_tr) / std::max(1.0, std::abs(lhs));
            }
            const bool violation = ratio > d + opt.tolerance || dev > 1e-8;
            if (violation) ++p.violations;
            p.max_ratio = std::max(p.max_ratio, ratio);
            p.max_dev = std::max(p.max_dev, dev);
            if (opt.keep_rows) rep.rows[i] = VerifyRow{i, ratio, lhs, s, dev};
        }
        partial[c] = p;
    });

    for (const Partial& p : partial) {
        rep.max_ratio = std::max(rep.max_ratio, p.max_ratio);
        rep.max_trace_dev = std::max(rep.max_trace_dev, p.max_dev);
        rep.violations += p.violations;
    }
    return rep;
}

}  // namespace skewddvv
