#include "matmax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace matmax {

Vec Vec::operator+(const Vec& o) const
{
    Vec r(d_);
    for (int i = 0; i < d_; ++i)
        r.v_[i] = v_[i] + o.v_[i];
    return r;
}

Vec Vec::operator-(const Vec& o) const
{
    Vec r(d_);
    for (int i = 0; i < d_; ++i)
        r.v_[i] = v_[i] - o.v_[i];
    return r;
}

Vec Vec::operator-() const
{
    Vec r(d_);
    for (int i = 0; i < d_; ++i)
        r.v_[i] = -v_[i];
    return r;
}

Vec Vec::operator*(double t) const
{
    Vec r(d_);
    for (int i = 0; i < d_; ++i)
        r.v_[i] = v_[i] * t;
    return r;
}

double Vec::dot(const Vec& o) const
{
    double s = 0.0;
    for (int i = 0; i < d_; ++i)
        s += v_[i] * o.v_[i];
    return s;
}

double Vec::norm() const { return std::sqrt(norm2()); }

bool Vec::all_finite() const
{
    for (int i = 0; i < d_; ++i)
        if (!std::isfinite(v_[i]))
            return false;
    return true;
}

Matrix::Matrix(int d) : d_(d)
{
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("Matrix: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    a_.fill(0.0);
}

Matrix Matrix::identity(int d)
{
    Matrix m(d);
    for (int i = 0; i < d; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(std::initializer_list<double> xs)
{
    Matrix m(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) {
        m(i, i) = x;
        ++i;
    }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            r(i, j) = (*this)(i, j) + o(i, j);
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            r(i, j) = (*this)(i, j) - o(i, j);
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int k = 0; k < d_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0)
                continue;
            for (int j = 0; j < d_; ++j)
                r(i, j) += aik * o(k, j);
        }
    return r;
}

Matrix Matrix::operator*(double t) const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            r(i, j) = (*this)(i, j) * t;
    return r;
}

Vec Matrix::operator*(const Vec& x) const
{
    Vec r(d_);
    for (int i = 0; i < d_; ++i) {
        double s = 0.0;
        for (int j = 0; j < d_; ++j)
            s += (*this)(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Matrix Matrix::transposed() const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            r(i, j) = (*this)(j, i);
    return r;
}

Matrix Matrix::symmetrized() const
{
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            r(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return r;
}

double Matrix::max_abs() const
{
    double m = 0.0;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            m = std::max(m, std::abs((*this)(i, j)));
    return m;
}

bool Matrix::all_finite() const
{
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            if (!std::isfinite((*this)(i, j)))
                return false;
    return true;
}

namespace {

// Largest eigenvalue of the Gram matrix M^T M via power iteration.
double gram_power_lambda(const Matrix& m)
{
    const int d = m.dim();
    const Matrix g = m.transposed() * m;

    auto iterate = [&](Vec x) -> std::pair<double, bool> {
        double nx = x.norm();
        if (nx == 0.0)
            return {0.0, true};
        x = x * (1.0 / nx);
        double lambda = 0.0;
        double prev = -1.0;
        for (int it = 0; it < 10000; ++it) {
            Vec y = g * x;
            lambda = x.dot(y);
            const double scale = std::max(lambda, 1.0);
            double resid2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double r = y[i] - lambda * x[i];
                resid2 += r * r;
            }
            if (resid2 <= 1e-12 * 1e-12 * scale * scale)
                return {lambda, true};
            if (prev >= 0.0 && std::abs(lambda - prev) < 1e-15 * scale)
                return {lambda, false}; // stalled before reaching tolerance
            prev = lambda;
            const double ny = y.norm();
            if (ny == 0.0)
                return {0.0, true};
            x = y * (1.0 / ny);
        }
        return {lambda, true};
    };

    Vec ones(d);
    for (int i = 0; i < d; ++i)
        ones[i] = 1.0;
    auto [lambda, converged] = iterate(ones);
    if (!converged) {
        Vec e1(d);
        e1[0] = 1.0;
        auto [lambda2, converged2] = iterate(e1);
        (void)converged2;
        lambda = std::max(lambda, lambda2);
    }
    return std::max(lambda, 0.0);
}

// Smallest eigenvalue of the symmetric part.
double sym_min_eigenvalue(const Matrix& m)
{
    const Matrix s = m.symmetrized();
    const int d = s.dim();
    if (d == 1)
        return s(0, 0);
    if (d == 2) {
        const double a = s(0, 0), b = s(0, 1), c = s(1, 1);
        const double mean = 0.5 * (a + c);
        const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        return mean - r;
    }
    return sym_eigenvalues(s).front();
}

} // namespace

double op_norm(const Matrix& m)
{
    if (!m.all_finite())
        throw std::invalid_argument("op_norm: non-finite matrix entry");
    const int d = m.dim();
    if (d == 1)
        return std::abs(m(0, 0));
    if (d == 2) {
        // sigma_max = (h1 + h2)/2 with h1 = |(a+e, b-c)|, h2 = |(a-e, b+c)|.
        // This factors trace^2 - 4 det^2 into sums of squares, so there is no
        // cancellation near coinciding singular values.
        const double a = m(0, 0), b = m(0, 1), c = m(1, 0), e = m(1, 1);
        const double h1 = std::sqrt((a + e) * (a + e) + (b - c) * (b - c));
        const double h2 = std::sqrt((a - e) * (a - e) + (b + c) * (b + c));
        return 0.5 * (h1 + h2);
    }
    return std::sqrt(gram_power_lambda(m));
}

Matrix spd_invert(const Matrix& w)
{
    if (!w.all_finite())
        throw std::invalid_argument("spd_invert: non-finite matrix entry");
    const int d = w.dim();
    const Matrix s = w.symmetrized();

    const double lmin = sym_min_eigenvalue(s);
    if (!(lmin > 1e-14))
        throw NearSingularError("spd_invert: smallest eigenvalue below 1e-14");

    Matrix inv(d);
    if (d == 1) {
        inv(0, 0) = 1.0 / s(0, 0);
    } else if (d == 2) {
        const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
        inv(0, 0) = s(1, 1) / det;
        inv(0, 1) = -s(0, 1) / det;
        inv(1, 0) = -s(1, 0) / det;
        inv(1, 1) = s(0, 0) / det;
    } else {
        // Cholesky factorization s = L L^T, then inv = L^{-T} L^{-1}.
        Matrix lower(d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = s(i, j);
                for (int k = 0; k < j; ++k)
                    sum -= lower(i, k) * lower(j, k);
                if (i == j) {
                    if (sum <= 0.0)
                        throw NearSingularError("spd_invert: Cholesky pivot not positive");
                    lower(i, i) = std::sqrt(sum);
                } else {
                    lower(i, j) = sum / lower(j, j);
                }
            }
        }
        // Invert the triangular factor in place.
        Matrix linv(d);
        for (int i = 0; i < d; ++i) {
            linv(i, i) = 1.0 / lower(i, i);
            for (int j = 0; j < i; ++j) {
                double sum = 0.0;
                for (int k = j; k < i; ++k)
                    sum += lower(i, k) * linv(k, j);
                linv(i, j) = -sum / lower(i, i);
            }
        }
        inv = linv.transposed() * linv;
    }

    // One Newton step squares away the factorization rounding.
    const Matrix two_i = Matrix::identity(d) * 2.0;
    inv = inv * (two_i - s * inv);
    return inv.symmetrized();
}

bool spd_check(const Matrix& m, double tol)
{
    if (!m.all_finite())
        return false;
    const double scale = std::max(1.0, m.max_abs());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i + 1; j < m.dim(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol * scale)
                return false;
    return sym_min_eigenvalue(m) > tol;
}

std::vector<double> sym_eigenvalues(const Matrix& m, Matrix* vectors)
{
    const int d = m.dim();
    Matrix a = m.symmetrized();
    Matrix v = Matrix::identity(d);

    if (d > 1) {
        for (int sweep = 0; sweep < 64; ++sweep) {
            double off = 0.0;
            for (int p = 0; p < d; ++p)
                for (int q = p + 1; q < d; ++q)
                    off += a(p, q) * a(p, q);
            if (off <= 1e-30 * std::max(1.0, a.max_abs() * a.max_abs()))
                break;
            for (int p = 0; p < d; ++p) {
                for (int q = p + 1; q < d; ++q) {
                    const double apq = a(p, q);
                    if (apq == 0.0)
                        continue;
                    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    for (int k = 0; k < d; ++k) {
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    for (int k = 0; k < d; ++k) {
                        const double apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk - s * aqk;
                        a(q, k) = s * apk + c * aqk;
                    }
                    for (int k = 0; k < d; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    std::vector<double> eigs(d);
    for (int i = 0; i < d; ++i)
        eigs[i] = a(order[i], order[i]);
    if (vectors) {
        Matrix sorted(d);
        for (int col = 0; col < d; ++col)
            for (int row = 0; row < d; ++row)
                sorted(row, col) = v(row, order[col]);
        *vectors = sorted;
    }
    return eigs;
}

} // namespace matmax
