#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpsvqe {

/// Dense row-major real matrix.
class Matrix {
   public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    }
    static Matrix square(size_t n) {
        return Matrix(n, n);
    }
    static Matrix identity(size_t n);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    double &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    double operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }
    std::span<const double> row(size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const double> data() const {
        return data_;
    }

    Matrix transposed() const;
    Matrix operator*(const Matrix &other) const;
    std::vector<double> operator*(std::span<const double> v) const;
    bool operator==(const Matrix &other) const = default;

    /// Largest |a_ij − a_ji|.
    double asymmetry() const;
    /// Leading `n` × `n` block.
    Matrix leading_block(size_t n) const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

double max_abs_difference(const Matrix &a, const Matrix &b);

struct EigenSystem {
    /// Ascending eigenvalues.
    std::vector<double> values;
    /// Column k is the unit eigenvector for values[k].
    Matrix vectors;
};

struct JacobiOptions {
    /// Stop when the off-diagonal Frobenius norm falls below this, relative to the full norm.
    double tolerance = 1e-12;
    size_t max_sweeps = 100;
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
/// Throws std::invalid_argument on non-square input and std::runtime_error if the sweep limit is hit.
EigenSystem jacobi_eigen(const Matrix &symmetric, JacobiOptions options = {});

}  // namespace fpsvqe
