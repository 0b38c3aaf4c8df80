#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace matmax {

/// Largest supported matrix/vector dimension.
inline constexpr int kMaxDim = 8;

/// Raised when a weight matrix is too close to singular to invert reliably.
/// Carries the offending grid cell when the failure happened inside a field.
class NearSingularError : public std::runtime_error {
public:
    explicit NearSingularError(const std::string& what, long cell = -1)
        : std::runtime_error(what), cell_(cell)
    {
    }
    long cell() const noexcept { return cell_; }

private:
    long cell_;
};

/// Dense vector in R^d with d <= kMaxDim. Plain value type.
class Vec {
public:
    Vec() : d_(0) { v_.fill(0.0); }
    explicit Vec(int d) : d_(d) { v_.fill(0.0); }
    Vec(std::initializer_list<double> xs) : d_(static_cast<int>(xs.size()))
    {
        v_.fill(0.0);
        int i = 0;
        for (double x : xs)
            v_[i++] = x;
    }

    int dim() const { return d_; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }

    Vec operator+(const Vec& o) const;
    Vec operator-(const Vec& o) const;
    Vec operator-() const;
    Vec operator*(double t) const;

    double dot(const Vec& o) const;
    double norm2() const { return dot(*this); }
    double norm() const;
    bool all_finite() const;

private:
    int d_;
    std::array<double, kMaxDim> v_;
};

inline Vec operator*(double t, const Vec& v) { return v * t; }

/// Dense d x d matrix, row-major, d <= kMaxDim. Value semantics.
class Matrix {
public:
    Matrix() : d_(0) { a_.fill(0.0); }
    explicit Matrix(int d);
    static Matrix identity(int d);
    static Matrix diag(std::initializer_list<double> xs);

    int dim() const { return d_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * kMaxDim + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * kMaxDim + j]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(double t) const;
    Vec operator*(const Vec& x) const;

    Matrix transposed() const;
    Matrix symmetrized() const;
    double max_abs() const;
    bool all_finite() const;

private:
    int d_;
    std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim> a_;
};

/// Largest singular value. Closed form for d <= 2, power iteration on M^T M
/// (tol 1e-12, at most 10000 steps, one restart from e_1 on stall) for d >= 3.
/// Non-finite entries raise std::invalid_argument.
double op_norm(const Matrix& m);

/// Inverse of a symmetric positive definite matrix. The round trip
/// ||W W^{-1} - I|| stays below 1e-10 for condition numbers up to ~1e6.
/// Raises NearSingularError when the smallest eigenvalue is below 1e-14.
Matrix spd_invert(const Matrix& w);

/// True iff m is symmetric within tol (relative to the entry scale) and the
/// smallest eigenvalue of its symmetric part exceeds tol.
bool spd_check(const Matrix& m, double tol);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
/// When vectors is non-null it receives the orthonormal eigenvector columns.
std::vector<double> sym_eigenvalues(const Matrix& m, Matrix* vectors = nullptr);

} // namespace matmax
