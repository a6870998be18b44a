#include "ncbesq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncbesq::linalg {

double LogDet::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

LU::LU(Matrix m) : lu_(std::move(m)), piv_(lu_.n) {
    const std::size_t n = lu_.n;
    std::iota(piv_.begin(), piv_.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(lu_(i, k)) > best) best = std::fabs(lu_(i, k)), p = i;
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(piv_[k], piv_[p]);
            parity_ = -parity_;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / lu_(k, k);
            lu_(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

LogDet LU::logdet() const {
    if (singular_) return {-std::numeric_limits<double>::infinity(), 0};
    double s = 0.0;
    int sign = parity_;
    for (std::size_t k = 0; k < lu_.n; ++k) {
        const double d = lu_(k, k);
        if (d < 0) sign = -sign;
        s += std::log(std::fabs(d));
    }
    return {s, sign};
}

std::vector<double> LU::solve(std::vector<double> b) const {
    if (singular_) throw std::runtime_error("LU::solve: singular matrix");
    const std::size_t n = lu_.n;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[piv_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

LogDet logdet(const Matrix& m) { return LU(m).logdet(); }

LogDet logdet_scaled(const Matrix& logabs, const std::vector<int>& signs) {
    const std::size_t n = logabs.n;
    if (n == 0) return {0.0, 1};
    const double ninf = -std::numeric_limits<double>::infinity();
    Matrix l = logabs;
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ninf;
        for (std::size_t j = 0; j < n; ++j) r = std::max(r, l(i, j));
        if (r == ninf) return {ninf, 0};
        for (std::size_t j = 0; j < n; ++j) l(i, j) -= r;
        shift += r;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double c = ninf;
        for (std::size_t i = 0; i < n; ++i) c = std::max(c, l(i, j));
        if (c == ninf) return {ninf, 0};
        for (std::size_t i = 0; i < n; ++i) l(i, j) -= c;
        shift += c;
    }
    Matrix m(n);
    for (std::size_t k = 0; k < n * n; ++k) m.a[k] = (signs.empty() ? 1 : signs[k]) * std::exp(l.a[k]);
    LogDet d = logdet(m);
    d.log_abs += shift;
    return d;
}

LogDet logdet_scaled(const Matrix& logabs) { return logdet_scaled(logabs, {}); }

LogDet log_vandermonde(const std::vector<double>& x) {
    double s = 0.0;
    int sign = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double d = x[j] - x[i];
            if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
            if (d < 0) sign = -sign;
            s += std::log(std::fabs(d));
        }
    return {s, sign};
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix adjoint(const CMatrix& m) {
    CMatrix r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("CMatrix product: shape mismatch");
    CMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const cplx v = x(i, k);
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("CMatrix sum: shape mismatch");
    CMatrix r = x;
    for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
    return r;
}

CMatrix operator*(double s, const CMatrix& x) {
    CMatrix r = x;
    for (auto& v : r.a) v *= s;
    return r;
}

double frobenius(const CMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

cplx trace(const CMatrix& m) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) s += m(i, i);
    return s;
}

EigenResult hermitian_eigen(const CMatrix& h0, int max_sweeps) {
    if (h0.rows != h0.cols) throw std::invalid_argument("hermitian_eigen: matrix not square");
    const std::size_t n = h0.rows;
    CMatrix h = h0;
    CMatrix v = CMatrix::identity(n);
    const double scale = frobenius(h0);
    auto off = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(h(i, j));
        return std::sqrt(s);
    };
    EigenResult res;
    int sweep = 0;
    while (off() > 1e-12 * scale) {
        if (sweep++ >= max_sweeps) throw std::runtime_error("hermitian_eigen: no convergence");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(h(p, q));
                if (r == 0.0) continue;
                const cplx ph = h(p, q) / r;  // e^{i phi}
                const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx upp = c, upq = s, uqp = -s * std::conj(ph), uqq = c * std::conj(ph);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx a = h(k, p), b = h(k, q);
                    h(k, p) = a * upp + b * uqp;
                    h(k, q) = a * upq + b * uqq;
                    const cplx va = v(k, p), vb = v(k, q);
                    v(k, p) = va * upp + vb * uqp;
                    v(k, q) = va * upq + vb * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx a = h(p, k), b = h(q, k);
                    h(p, k) = std::conj(upp) * a + std::conj(uqp) * b;
                    h(q, k) = std::conj(upq) * a + std::conj(uqq) * b;
                }
                h(p, q) = h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
            }
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });
    res.values.resize(n);
    res.vectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        res.values[j] = h(idx[j], idx[j]).real();
        for (std::size_t k = 0; k < n; ++k) res.vectors(k, j) = v(k, idx[j]);
    }
    res.sweeps = sweep;
    return res;
}

}  // namespace ncbesq::linalg
