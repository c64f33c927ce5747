#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lfc {

using Vector = std::vector<double>;

/// Dense real matrix with row-major storage. Sized for the small systems
/// this library works with (n up to a few dozen), so everything is plain
/// O(n^3) dense arithmetic.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const Vector& data() const { return data_; }

    Matrix transpose() const;
    double max_abs() const;
    double trace() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    Matrix operator*(const Matrix& other) const;
    Vector operator*(const Vector& v) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

/// Assemble [[a, b], [c, d]]; block dimensions must be conformal.
Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

double max_abs_diff(const Matrix& a, const Matrix& b);
bool is_symmetric(const Matrix& a, double tol);

double inf_norm(const Vector& v);

} // namespace lfc
