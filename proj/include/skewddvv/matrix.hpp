#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skewddvv/errors.hpp"

namespace skewddvv {

// Dense row-major matrix of doubles. Entry access through operator() is
// 0-based; the 1-based indexing used elsewhere in the API applies to pair
// ranks and reported indices, never to raw storage.
class Matrix {
  public:
    Matrix() = default;

    Matrix(int rows, int cols)
        : rows_(rows),
          cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        int r = static_cast<int>(rows.size());
        int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
        Matrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            int j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

  private:
    void require_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("Matrix: shape mismatch in ") + op);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= s; }
inline Matrix operator-(const Matrix& a) {
    Matrix r = a;
    return r *= -1.0;
}

inline void multiply_into(Matrix& out, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows() || out.rows() != a.rows() || out.cols() != b.cols())
        throw std::invalid_argument("multiply_into: shape mismatch");
    const int n = a.rows(), k = a.cols(), m = b.cols();
    double* o = out.data().data();
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    for (int i = 0; i < n; ++i) {
        double* orow = o + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) orow[j] = 0.0;
        for (int p = 0; p < k; ++p) {
            const double aip = ad[static_cast<std::size_t>(i) * k + p];
            if (aip == 0.0) continue;
            const double* brow = bd + static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) orow[j] += aip * brow[j];
        }
    }
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    multiply_into(out, a, b);
    return out;
}

inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_inner: shape mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
    return s;
}

inline double frobenius_norm_sq(const Matrix& a) { return frobenius_inner(a, a); }
inline double frobenius_norm(const Matrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

inline double trace(const Matrix& a) {
    double t = 0.0;
    const int n = std::min(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) t += a(i, i);
    return t;
}

// P A P^t.
inline Matrix conjugate_by(const Matrix& p, const Matrix& a) {
    return p * a * p.transpose();
}

inline bool is_orthogonal(const Matrix& q, double tol) {
    if (q.rows() != q.cols()) return false;
    Matrix g = q * q.transpose();
    for (int i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return max_abs(g) <= tol;
}

// Orthonormalizes the columns in place with two passes of modified
// Gram-Schmidt. Throws numeric_failure on (near) rank deficiency.
inline Matrix orthonormalized_columns(Matrix a) {
    const int n = a.rows(), k = a.cols();
    if (k > n) throw std::invalid_argument("orthonormalized_columns: more columns than rows");
    for (int j = 0; j < k; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int p = 0; p < j; ++p) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += a(i, p) * a(i, j);
                for (int i = 0; i < n; ++i) a(i, j) -= dot * a(i, p);
            }
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12)
            throw numeric_failure("orthonormalized_columns: rank deficient input");
        for (int i = 0; i < n; ++i) a(i, j) /= norm;
    }
    return a;
}

// Extends k orthonormal columns (n x k) to an orthonormal basis of R^n,
/// returning the n - k new columns. Deterministic: candidates are taken from
// the standard basis in index order.
inline Matrix orthonormal_completion(const Matrix& cols, int n) {
    const int k = cols.cols();
    if (cols.rows() != n || k > n)
        throw std::invalid_argument("orthonormal_completion: bad shape");
    Matrix out(n, n - k);
    int added = 0;
    std::vector<double> v(n);
    for (int cand = 0; cand < n && added < n - k; ++cand) {
        for (int i = 0; i < n; ++i) v[i] = (i == cand) ? 1.0 : 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int p = 0; p < k; ++p) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += cols(i, p) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * cols(i, p);
            }
            for (int p = 0; p < added; ++p) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += out(i, p) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * out(i, p);
            }
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += v[i] * v[i];
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (int i = 0; i < n; ++i) out(i, added) = v[i] / norm;
        ++added;
    }
    if (added != n - k)
        throw numeric_failure("orthonormal_completion: could not complete basis");
    return out;
}

}  // namespace skewddvv
