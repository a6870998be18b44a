#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ncbesq::linalg {

struct LogDet {
    double log_abs;
    int sign;  // 0 when singular
    double value() const;
};

// Dense row-major square matrix of doubles.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;
    Matrix() = default;
    explicit Matrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// LU factorization with partial pivoting.
class LU {
public:
    explicit LU(Matrix m);
    LogDet logdet() const;
    std::vector<double> solve(std::vector<double> b) const;
    bool singular() const { return singular_; }

private:
    Matrix lu_;
    std::vector<std::size_t> piv_;
    int parity_ = 1;
    bool singular_ = false;
};

LogDet logdet(const Matrix& m);

// Determinant of the matrix with entries sign(i,j) * exp(logabs(i,j)).
// Rows and then columns are rescaled by their largest magnitude before LU.
LogDet logdet_scaled(const Matrix& logabs, const std::vector<int>& signs);
LogDet logdet_scaled(const Matrix& logabs);

// Vandermonde product prod_{i<j} (x_j - x_i) in log form.
LogDet log_vandermonde(const std::vector<double>& x);

using cplx = std::complex<double>;

// Dense row-major complex matrix.
struct CMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<cplx> a;
    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    static CMatrix identity(std::size_t n);
};

CMatrix adjoint(const CMatrix& m);
CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator*(double s, const CMatrix& x);
double frobenius(const CMatrix& m);
cplx trace(const CMatrix& m);

struct EigenResult {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns
    int sweeps = 0;
};

// Cyclic Jacobi eigensolver for Hermitian matrices.
// Throws std::runtime_error after max_sweeps without convergence.
EigenResult hermitian_eigen(const CMatrix& h, int max_sweeps = 100);

}  // namespace ncbesq::linalg
