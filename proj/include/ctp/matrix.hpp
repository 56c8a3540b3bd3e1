#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ctp/common.hpp"

namespace ctp {

/// Dense row-major complex matrix, sized at construction.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    {
        if (rows < 0 || cols < 0)
            throw DomainError("matrix: negative dimensions");
    }

    static ComplexMatrix identity(int n)
    {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = Complex{1.0, 0.0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Complex& at(int i, int j)
    {
        return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
    }
    const Complex& at(int i, int j) const
    {
        return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
    }

    const std::vector<Complex>& data() const { return data_; }

    ComplexMatrix multiply(const ComplexMatrix& other) const
    {
        if (cols_ != other.rows_)
            throw DomainError("matrix: shape mismatch in multiply");
        ComplexMatrix out(rows_, other.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < other.cols_; ++j) {
                Complex acc{};
                for (int k = 0; k < cols_; ++k)
                    acc += at(i, k) * other.at(k, j);
                out.at(i, j) = acc;
            }
        return out;
    }

    ComplexMatrix conjugate_transpose() const
    {
        ComplexMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                out.at(j, i) = std::conj(at(i, j));
        return out;
    }

    Complex trace() const
    {
        Complex acc{};
        for (int i = 0; i < std::min(rows_, cols_); ++i)
            acc += at(i, i);
        return acc;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const Complex& z : data_)
            m = std::max(m, std::abs(z));
        return m;
    }

    /// max |A[i][j] - conj(A[j][i])| over the square part.
    double hermiticity_residual() const
    {
        double r = 0.0;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                r = std::max(r, std::abs(at(i, j) - std::conj(at(j, i))));
        return r;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

/// Eigenvalues of a hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. Converges to machine precision on the scales used here.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& input)
{
    if (input.rows() != input.cols())
        throw DomainError("eigenvalues: matrix must be square");
    const int n = input.rows();
    ComplexMatrix a = input;
    // symmetrize once so tiny hermiticity noise cannot stall convergence
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));

    double scale = a.max_abs();
    if (scale == 0.0)
        return std::vector<double>(static_cast<std::size_t>(n), 0.0);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off = std::max(off, std::abs(a.at(p, q)));
        if (off <= 1e-15 * scale)
            break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-18 * scale)
                    continue;
                const Complex phase = apq / m;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                const double t = (tau >= 0.0 ? 1.0 : -1.0)
                    / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;        // s * e^{i phi}
                const Complex spc = std::conj(sp);   // s * e^{-i phi}
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p);
                    const Complex akq = a.at(k, q);
                    a.at(k, p) = c * akp - spc * akq;
                    a.at(k, q) = sp * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a.at(p, k);
                    const Complex aqk = a.at(q, k);
                    a.at(p, k) = c * apk - sp * aqk;
                    a.at(q, k) = spc * apk + c * aqk;
                }
            }
    }

    std::vector<double> eigs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        eigs[static_cast<std::size_t>(i)] = a.at(i, i).real();
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

/// Number of eigenvalues above rel_tol times the largest magnitude.
inline int rank_estimate(const ComplexMatrix& m, double rel_tol = 1e-8)
{
    auto eigs = hermitian_eigenvalues(m);
    double top = 0.0;
    for (double e : eigs)
        top = std::max(top, std::abs(e));
    if (top == 0.0)
        return 0;
    int rank = 0;
    for (double e : eigs)
        if (std::abs(e) > rel_tol * top)
            ++rank;
    return rank;
}

} // namespace ctp
