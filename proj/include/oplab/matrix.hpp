// Dense complex matrices, row-major, immutable by convention.
//
// The carrier type for every operator in the library. Storage is plain
// row-major std::complex<double>; heavy numerics (products, factorizations)
// are delegated to Eigen through maps, so no data is ever copied into a
// second layout unless Eigen needs one.

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oplab {

using Complex = std::complex<double>;

// Error from the matrix kernel: bad dimensions, non-finite data,
// factorization failure, precondition violations.
class KernelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
using EigenRowMajor =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<EigenRowMajor>;
using EigenConstMap = Eigen::Map<const EigenRowMajor>;
}  // namespace detail

class ComplexMatrix {
  public:
    ComplexMatrix() = default;  // empty placeholder, 0x0

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
        check_shape(rows, cols);
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        check_shape(rows, cols);
        if (entries_.size() != rows_ * cols_)
            throw KernelError("entry count " + std::to_string(entries_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
        require_finite();
    }

    // Row-of-rows construction, mainly for tests and generators:
    //   ComplexMatrix m{{1, 2}, {3, 4}};
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        check_shape(rows_, cols_);
        entries_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw KernelError("ragged initializer rows");
            entries_.insert(entries_.end(), r.begin(), r.end());
        }
        require_finite();
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    static ComplexMatrix diagonal(const std::vector<Complex>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return entries_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) {
        return entries_[i * cols_ + j];
    }
    Complex operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    const std::vector<Complex>& entries() const { return entries_; }
    Complex* data() { return entries_.data(); }
    const Complex* data() const { return entries_.data(); }

    detail::EigenConstMap map() const {
        return detail::EigenConstMap(entries_.data(),
                                     static_cast<Eigen::Index>(rows_),
                                     static_cast<Eigen::Index>(cols_));
    }
    detail::EigenMap map() {
        return detail::EigenMap(entries_.data(), static_cast<Eigen::Index>(rows_),
                                static_cast<Eigen::Index>(cols_));
    }

    static ComplexMatrix from_eigen(const detail::EigenRowMajor& e) {
        ComplexMatrix m(static_cast<std::size_t>(e.rows()),
                        static_cast<std::size_t>(e.cols()));
        detail::EigenMap(m.data(), e.rows(), e.cols()) = e;
        return m;
    }

    template <typename Derived>
    static ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
        detail::EigenRowMajor tmp = e.template cast<Complex>();
        return from_eigen(tmp);
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : entries_) s += std::norm(z);
        return std::sqrt(s);
    }

    // ||A - A*||_F, the asymmetry residual; 0 for Hermitian A.
    double hermitian_residual() const {
        if (!is_square()) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (const Complex& z : entries_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    void require_finite() const {
        if (!all_finite())
            throw KernelError("matrix has non-finite entries (" +
                              std::to_string(rows_) + "x" + std::to_string(cols_) +
                              ")");
    }

    // Writes M into this matrix with top-left corner at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m) {
        if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
            throw KernelError("block does not fit");
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                (*this)(r0 + i, c0 + j) = m(i, j);
    }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] += rhs.entries_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
        require_same_shape(rhs);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] -= rhs.entries_[i];
        return *this;
    }
    ComplexMatrix& operator*=(Complex s) {
        for (Complex& z : entries_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) {
        a *= s;
        return a;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols() != b.rows())
            throw KernelError("product shape mismatch: " + std::to_string(a.rows()) +
                              "x" + std::to_string(a.cols()) + " * " +
                              std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
        ComplexMatrix out(a.rows(), b.cols());
        out.map() = a.map() * b.map();
        return out;
    }

    void require_same_shape(const ComplexMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw KernelError("shape mismatch: " + std::to_string(rows_) + "x" +
                              std::to_string(cols_) + " vs " +
                              std::to_string(rhs.rows_) + "x" +
                              std::to_string(rhs.cols_));
    }

    void require_square(const char* what) const {
        if (!is_square())
            throw KernelError(std::string(what) + " requires a square matrix, got " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }

  private:
    static void check_shape(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0)
            throw KernelError("matrix dimensions must be positive");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

// A^k by repeated multiplication; A^0 = I. Fine at desk scale (k <= ~8).
inline ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned k) {
    a.require_square("matrix_power");
    ComplexMatrix out = ComplexMatrix::identity(a.rows());
    for (unsigned i = 0; i < k; ++i) out = out * a;
    return out;
}

inline double distance_frobenius(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_shape(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

// blockdiag(a, b)
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    return out;
}

inline ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& parts) {
    if (parts.empty()) throw KernelError("direct_sum of no summands");
    ComplexMatrix out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out = direct_sum(out, parts[i]);
    return out;
}

}  // namespace oplab
