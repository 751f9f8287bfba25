#pragma once

#include <cstdint>
#include <random>

#include "skewddvv/skew.hpp"

namespace skewddvv {

// splitmix64 step; decorrelates per-item seeds derived from one root seed so
// that sampling loops can be chunked without changing the stream per item.
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t counter) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (double& v : m.data()) v = gauss(rng);
    return m;
}

// Haar-distributed orthogonal matrix: orthonormalized standard normal sample.
inline Matrix random_orthogonal(int n, std::mt19937_64& rng) {
    for (;;) {
        try {
            return orthonormalized_columns(random_gaussian(n, n, rng));
        } catch (const numeric_failure&) {
            // Rank-deficient Gaussian sample has probability zero; retry.
        }
    }
}

// Independent standard normal entries above the diagonal.
inline SkewMatrix random_skew(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = gauss(rng);
            m(i, j) = v;
            m(j, i) = -v;
        }
    return SkewMatrix::unchecked(std::move(m));
}

inline SkewTuple random_skew_tuple(int n, int m, std::mt19937_64& rng) {
    std::vector<SkewMatrix> members;
    members.reserve(m);
    for (int r = 0; r < m; ++r) members.push_back(random_skew(n, rng));
    return SkewTuple(std::move(members));
}

}  // namespace skewddvv
