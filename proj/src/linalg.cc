#include "fpsvqe/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fpsvqe {

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n);
    for (size_t k = 0; k < n; k++) {
        m(k, k) = 1;
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix Matrix::operator*(const Matrix &other) const {
    if (cols_ != other.rows_) {
        throw std::invalid_argument("matrix product: shape mismatch");
    }
    Matrix out(rows_, other.cols_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t k = 0; k < cols_; k++) {
            double a = (*this)(r, k);
            if (a == 0) {
                continue;
            }
            for (size_t c = 0; c < other.cols_; c++) {
                out(r, c) += a * other(k, c);
            }
        }
    }
    return out;
}

std::vector<double> Matrix::operator*(std::span<const double> v) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("matrix-vector product: shape mismatch");
    }
    std::vector<double> out(rows_, 0.0);
    for (size_t r = 0; r < rows_; r++) {
        auto rw = row(r);
        out[r] = std::inner_product(rw.begin(), rw.end(), v.begin(), 0.0);
    }
    return out;
}

double Matrix::asymmetry() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("asymmetry: matrix is not square");
    }
    double worst = 0;
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = r + 1; c < cols_; c++) {
            worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
        }
    }
    return worst;
}

Matrix Matrix::leading_block(size_t n) const {
    if (n > rows_ || n > cols_) {
        throw std::invalid_argument("leading_block: block larger than matrix");
    }
    Matrix out(n, n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            out(r, c) = (*this)(r, c);
        }
    }
    return out;
}

double max_abs_difference(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_difference: shape mismatch");
    }
    double worst = 0;
    auto da = a.data();
    auto db = b.data();
    for (size_t k = 0; k < da.size(); k++) {
        worst = std::max(worst, std::abs(da[k] - db[k]));
    }
    return worst;
}

EigenSystem jacobi_eigen(const Matrix &symmetric, JacobiOptions options) {
    if (symmetric.rows() != symmetric.cols()) {
        throw std::invalid_argument("jacobi_eigen: matrix is not square");
    }
    const size_t n = symmetric.rows();
    Matrix a = symmetric;
    Matrix v = Matrix::identity(n);

    double total = 0;
    for (double x : a.data()) {
        total += x * x;
    }
    double threshold = options.tolerance * std::max(std::sqrt(total), 1e-300);

    auto off_norm = [&]() {
        double s = 0;
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                s += 2 * a(p, q) * a(p, q);
            }
        }
        return std::sqrt(s);
    };

    size_t sweep = 0;
    while (off_norm() > threshold) {
        if (sweep++ >= options.max_sweeps) {
            throw std::runtime_error("jacobi_eigen: failed to converge");
        }
        for (size_t p = 0; p + 1 < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double apq = a(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                // Rotation angle that zeroes a(p, q).
                double tau = (a(q, q) - a(p, p)) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                for (size_t k = 0; k < n; k++) {
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; k++) {
                    double apk = a(p, k);
                    double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; k++) {
                    double vkp = v(k, p);
                    double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) { return a(i, i) < a(j, j); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (size_t k = 0; k < n; k++) {
        out.values[k] = a(order[k], order[k]);
        // Sign convention: largest-magnitude component positive.
        size_t lead = 0;
        for (size_t r = 0; r < n; r++) {
            if (std::abs(v(r, order[k])) > std::abs(v(lead, order[k])) + 1e-12) {
                lead = r;
            }
        }
        double sign = v(lead, order[k]) < 0 ? -1.0 : 1.0;
        for (size_t r = 0; r < n; r++) {
            out.vectors(r, k) = sign * v(r, order[k]);
        }
    }
    return out;
}

}  // namespace fpsvqe
