#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "skewddvv/matrix.hpp"

namespace skewddvv {

struct SymmetricEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // columns aligned with values
};

// Cyclic-by-row Jacobi for symmetric matrices. off_tol is an absolute bound
// on the largest off-diagonal magnitude at convergence. Deterministic for a
// fixed input: rotation order and tie-breaks are fixed.
inline SymmetricEigen jacobi_symmetric_eigen(Matrix s, double off_tol, int max_sweeps = 100) {
    const int n = s.rows();
    if (n < 1 || s.cols() != n)
        throw std::invalid_argument("jacobi_symmetric_eigen: need a square matrix");
    // Tolerate roundoff-level asymmetry in the input.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    Matrix v = Matrix::identity(n);

    auto off_max = [&]() {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m = std::max(m, std::abs(s(i, j)));
        return m;
    };

    int sweeps = 0;
    while (off_max() > off_tol) {
        if (++sweeps > max_sweeps)
            throw numeric_failure("jacobi_symmetric_eigen: no convergence");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double app = s(p, p), aqq = s(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                s(p, p) = app - t * apq;
                s(q, q) = aqq + t * apq;
                s(p, q) = 0.0;
                s(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return s(a, a) > s(b, b); });
    SymmetricEigen eig;
    eig.values.resize(n);
    eig.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        eig.values[j] = s(order[j], order[j]);
        for (int i = 0; i < n; ++i) eig.vectors(i, j) = v(i, order[j]);
    }
    return eig;
}

}  // namespace skewddvv
