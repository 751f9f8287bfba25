#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "skewddvv/inequality.hpp"
#include "skewddvv/parallel.hpp"
#include "skewddvv/random.hpp"

namespace skewddvv {

struct OptimizerConfig {
    std::uint64_t seed = 0;
    int restarts = 32;
    long max_iterations = 10000;
    double step_tolerance = 1e-10;
    double value_tolerance = 1e-9;
};

inline void validate(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iterations < 1)
        throw std::invalid_argument("OptimizerConfig: counts must be positive");
    if (cfg.step_tolerance <= 0.0 || cfg.value_tolerance <= 0.0)
        throw std::invalid_argument("OptimizerConfig: tolerances must be positive");
}

// Euclidean projection onto the standard simplex; output is exactly
// nonnegative and sums to 1 up to roundoff.
inline std::vector<double> project_to_simplex(std::vector<double> y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> u(y);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - 1.0) / (i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& v : y) v = std::max(v - theta, 0.0);
    return y;
}

struct SimplexMaximum {
    std::vector<double> x_star;
    double value = 0.0;
    long iterations = 0;
    bool budget_exhausted = false;
};

namespace detail {

struct SimplexRun {
    std::vector<double> x;
    double value;
    long iterations;
    bool budget_exhausted;
};

inline double quad_value(const Matrix& m, const std::vector<double>& x) {
    const int n = m.rows();
    double q = 0.0;
    for (int a = 0; a < n; ++a) {
        double row = 0.0;
        for (int b = 0; b < n; ++b) row += m(a, b) * x[b];
        q += x[a] * row;
    }
    return q;
}

// One maximization run from a fixed start: multiplicative replicator updates
// on the shifted form, then projected-gradient polishing with backtracking.
// The objective never decreases across accepted iterates.
inline SimplexRun simplex_run(const SimplexQuadratic& sq, std::vector<double> x,
                              const OptimizerConfig& cfg) {
    const int big_n = sq.m.rows();
    // Shift by a constant multiple of the all-ones matrix: adds the constant
    // to the form on the simplex, so maximizers are unchanged and payoffs
    // stay positive for the multiplicative update.
    double shift = 0.0;
    for (int a = 0; a < big_n; ++a)
        for (int b = 0; b < big_n; ++b) shift = std::max(shift, std::abs(sq.m(a, b)));
    shift += 1.0;

    auto objective = [&](const std::vector<double>& v) {
        double total = 0.0;
        for (double t : v) total += t;
        return quad_value(sq.m, v) - sq.d * total * total;
    };

    long iter = 0;
    double value = objective(x);
    std::vector<double> payoff(big_n), next_x(big_n);
    while (iter < cfg.max_iterations) {
        ++iter;
        double mean = 0.0;
        for (int a = 0; a < big_n; ++a) {
            double row = 0.0;
            for (int b = 0; b < big_n; ++b) row += sq.m(a, b) * x[b];
            payoff[a] = row + shift;
            mean += x[a] * payoff[a];
        }
        for (int a = 0; a < big_n; ++a) next_x[a] = x[a] * payoff[a] / mean;
        const double next = objective(next_x);
        if (next <= value) break;  // roundoff plateau; keep the better iterate
        const double gain = next - value;
        x = next_x;
        value = next;
        if (gain <= cfg.step_tolerance * std::max(1.0, std::abs(value))) break;
    }

    // Polish: ascent along the Euclidean-projected gradient, accepting only
    // improvements.
    double step = 0.1;
    while (iter < cfg.max_iterations && step > 1e-14) {
        ++iter;
        std::vector<double> grad(big_n);
        double total = 0.0;
        for (double t : x) total += t;
        for (int a = 0; a < big_n; ++a) {
            double row = 0.0;
            for (int b = 0; b < big_n; ++b) row += sq.m(a, b) * x[b];
            grad[a] = 2.0 * row - 2.0 * sq.d * total;
        }
        bool improved = false;
        while (step > 1e-14) {
            std::vector<double> trial(big_n);
            for (int a = 0; a < big_n; ++a) trial[a] = x[a] + step * grad[a];
            trial = project_to_simplex(std::move(trial));
            const double tv = objective(trial);
            if (tv > value) {
                const double gain = tv - value;
                x = std::move(trial);
                value = tv;
                improved = true;
                if (gain <= cfg.step_tolerance * std::max(1.0, std::abs(value))) step = 0.0;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return SimplexRun{std::move(x), value, iter, iter >= cfg.max_iterations};
}

}  // namespace detail

// Multi-restart maximization of the simplex form. Restart 0 starts at the
// barycenter; the rest draw uniform (flat Dirichlet) starts from per-restart
// sub-seeds. The winner is the highest value, ties broken by lowest restart
// index, so results are independent of the worker count.
inline SimplexMaximum simplex_maximize(const SimplexQuadratic& sq, const OptimizerConfig& cfg) {
    validate(cfg);
    const int big_n = sq.m.rows();
    std::vector<detail::SimplexRun> runs(cfg.restarts);
    parallel_for_index(cfg.restarts, resolve_threads(), [&](long r) {
        std::vector<double> x(big_n, 1.0 / big_n);
        if (r > 0) {
            auto rng = seeded_engine(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            std::exponential_distribution<double> expo(1.0);
            double total = 0.0;
            for (double& v : x) {
                v = expo(rng);
                total += v;
            }
            for (double& v : x) v /= total;
        }
        runs[r] = detail::simplex_run(sq, std::move(x), cfg);
    });
    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (runs[r].value > runs[best].value) best = r;
    SimplexMaximum out{std::move(runs[best].x), runs[best].value, 0,
                       runs[best].budget_exhausted};
    for (const detail::SimplexRun& run : runs) out.iterations += run.iterations;
    // The simplex sum is 1 up to projection roundoff; renormalize it away.
    double total = 0.0;
    for (double v : out.x_star) total += v;
    for (double& v : out.x_star) v /= total;
    out.value = simplex_form_value(sq, out.x_star);
    return out;
}

// Deterministic grid maximum over the simplex at the given resolution
// (all points with coordinates k/resolution). A lower bound on the true
// maximum, used as a quality floor.
struct GridMaximum {
    std::vector<double> x;
    double value;
};

inline GridMaximum simplex_grid_max(const SimplexQuadratic& sq, int resolution) {
    if (resolution < 1) throw std::invalid_argument("simplex_grid_max: resolution must be >= 1");
    const int big_n = sq.m.rows();
    std::vector<int> counts(big_n, 0);
    GridMaximum best{{}, -std::numeric_limits<double>::infinity()};
    std::vector<double> x(big_n);
    auto walk = [&](auto&& self, int pos, int left) -> void {
        if (pos == big_n - 1) {
            counts[pos] = left;
            for (int i = 0; i < big_n; ++i) x[i] = static_cast<double>(counts[i]) / resolution;
            const double v = simplex_form_value(sq, x);
            if (v > best.value) best = GridMaximum{x, v};
            return;
        }
        for (int k = left; k >= 0; --k) {
            counts[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    walk(walk, 0, resolution);
    return best;
}

// Stationarity certificate at a simplex point: sigma_a = (M x)_a - 2 d. At an
// interior-support maximum the support values agree; off-support values must
// not exceed them.
struct KktCertificate {
    double a = 0.0;
    std::vector<int> support;          // 1-based coordinate indices
    std::vector<double> inactive_values;
    double max_violation = 0.0;
};

inline KktCertificate kkt_certificate(const SimplexQuadratic& sq, const std::vector<double>& x) {
    const int big_n = sq.m.rows();
    if (static_cast<int>(x.size()) != big_n)
        throw std::invalid_argument("kkt_certificate: wrong vector length");
    KktCertificate cert;
    std::vector<double> sigma(big_n);
    for (int a = 0; a < big_n; ++a) {
        double row = 0.0;
        for (int b = 0; b < big_n; ++b) row += sq.m(a, b) * x[b];
        sigma[a] = row - 2.0 * sq.d;
        if (x[a] > 1e-10) cert.support.push_back(a + 1);
    }
    if (cert.support.empty()) throw std::invalid_argument("kkt_certificate: empty support");
    double mean = 0.0;
    for (int a : cert.support) mean += sigma[a - 1];
    cert.a = mean / static_cast<double>(cert.support.size());
    for (int a = 1; a <= big_n; ++a) {
        const bool on = x[a - 1] > 1e-10;
        if (on) {
            cert.max_violation = std::max(cert.max_violation, std::abs(sigma[a - 1] - cert.a));
        } else {
            cert.inactive_values.push_back(sigma[a - 1]);
            cert.max_violation = std::max(cert.max_violation, sigma[a - 1] - cert.a);
        }
    }
    return cert;
}

// Multi-restart projected ascent of the commutator-sum ratio over tuples
// with unit squared-norm sum. The ratio is checked against d(n) + 1e-9 at
// every accepted iterate.
struct SharpnessResult {
    SkewTuple tuple;
    double ratio = 0.0;
    double gap = 0.0;  // d(n) - ratio
    std::vector<double> history;  // best ratio per restart
    long iterations = 0;
    bool budget_exhausted = false;
    bool low_member_warning = false;
};

namespace detail {

struct SharpnessRun {
    std::vector<Matrix> members;
    double ratio;
    long iterations;
    bool budget_exhausted;
};

inline double tuple_lhs(const std::vector<Matrix>& b) {
    const int m = static_cast<int>(b.size());
    double total = 0.0;
    for (int r = 0; r < m; ++r)
        for (int s = r + 1; s < m; ++s) {
            Matrix c = b[r] * b[s] - b[s] * b[r];
            total += 2.0 * frobenius_norm_sq(c);
        }
    return total;
}

inline void normalize_members(std::vector<Matrix>& b) {
    double s = 0.0;
    for (const Matrix& x : b) s += frobenius_norm_sq(x);
    const double inv = 1.0 / std::sqrt(s);
    for (Matrix& x : b) x *= inv;
}

inline SharpnessRun sharpness_run(int n, int m, std::uint64_t sub_seed,
                                  const OptimizerConfig& cfg, double d) {
    auto rng = seeded_engine(sub_seed);
    std::vector<Matrix> b(m);
    for (Matrix& x : b) x = random_skew(n, rng).mat();
    normalize_members(b);

    double ratio = tuple_lhs(b);  // norm sum is 1
    auto check = [&](double r) {
        if (r > d + 1e-9)
            throw numeric_failure("sharpness_run: ratio exceeded the proven bound");
    };
    check(ratio);

    long iter = 0;
    double step = 0.1;
    bool converged = false;
    while (!converged && iter < cfg.max_iterations) {
        ++iter;
        // Gradient of the commutator sum, projected onto the unit sphere of
        // the norm constraint.
        std::vector<Matrix> grad(m, Matrix(n, n));
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) {
                if (s == r) continue;
                Matrix inner = b[r] * b[s] - b[s] * b[r];
                grad[r] += 4.0 * (b[s] * inner - inner * b[s]);
            }
        const double lhs = ratio;
        for (int r = 0; r < m; ++r) grad[r] -= (4.0 * lhs) * b[r];

        bool improved = false;
        while (step > 1e-14) {
            std::vector<Matrix> trial(m);
            for (int r = 0; r < m; ++r) trial[r] = b[r] + step * grad[r];
            normalize_members(trial);
            const double tv = tuple_lhs(trial);
            if (tv > ratio) {
                check(tv);
                const double gain = tv - ratio;
                b = std::move(trial);
                ratio = tv;
                improved = true;
                step *= 2.0;
                converged = gain <= cfg.step_tolerance * std::max(1.0, ratio);
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return SharpnessRun{std::move(b), ratio, iter, !converged && iter >= cfg.max_iterations};
}

}  // namespace detail

inline SharpnessResult sharpness_search(int n, int m, const OptimizerConfig& cfg) {
    validate(cfg);
    if (n < 3) throw unsupported_dimension("sharpness_search: need n >= 3");
    if (m < 1) throw std::invalid_argument("sharpness_search: need m >= 1");
    const double d = d_constant(n);

    std::vector<detail::SharpnessRun> runs(cfg.restarts);
    parallel_for_index(cfg.restarts, resolve_threads(), [&](long r) {
        runs[r] = detail::sharpness_run(n, m, mix_seed(cfg.seed, static_cast<std::uint64_t>(r)),
                                        cfg, d);
    });
    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (runs[r].ratio > runs[best].ratio) best = r;

    std::vector<SkewMatrix> members;
    members.reserve(m);
    for (const Matrix& x : runs[best].members) members.push_back(SkewMatrix::unchecked(x));
    SharpnessResult out{SkewTuple(std::move(members)),
                        runs[best].ratio,
                        d - runs[best].ratio,
                        {},
                        runs[best].iterations,
                        runs[best].budget_exhausted,
                        m < 3};
    out.history.reserve(cfg.restarts);
    for (const detail::SharpnessRun& run : runs) out.history.push_back(run.ratio);
    return out;
}

}  // namespace skewddvv
