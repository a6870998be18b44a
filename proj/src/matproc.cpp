#include "ncbesq/matproc.hpp"

#include "ncbesq/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace ncbesq::matproc {

using linalg::cplx;

CMatrix sample_matrix_bm(std::size_t K, std::size_t N, double t, Stream& stream) {
    if (!(t >= 0.0)) throw std::domain_error("sample_matrix_bm: t must be >= 0");
    if (K < N) throw std::domain_error("sample_matrix_bm: need K >= N");
    CMatrix b(K, N);
    const double s = std::sqrt(t);
    for (auto& v : b.a) {
        const double re = stream.normal();
        const double im = stream.normal();
        v = cplx(s * re, s * im);
    }
    return b;
}

CMatrix drift_matrix(std::size_t K, const std::vector<double>& mu) {
    if (K < mu.size()) throw std::domain_error("drift_matrix: need K >= N");
    CMatrix m(K, mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] < 0.0) throw std::domain_error("drift_matrix: mu must be >= 0");
        m(i, i) = std::sqrt(mu[i]);
    }
    return m;
}

std::vector<double> eval_matrix_process(const CMatrix& M, double t, Stream& stream) {
    if (!(t > 0.0)) throw std::domain_error("eval_matrix_process: t must be > 0");
    const CMatrix A = sample_matrix_bm(M.rows, M.cols, t, stream) + t * M;
    return linalg::hermitian_eigen(adjoint(A) * A).values;
}

CMatrix haar_unitary(std::size_t n, Stream& stream) {
    if (n == 0) throw std::domain_error("haar_unitary: n must be >= 1");
    CMatrix q(n, n);
    for (auto& v : q.a) {
        const double re = stream.normal();
        const double im = stream.normal();
        v = cplx(re, im);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                cplx d = 0.0;
                for (std::size_t i = 0; i < n; ++i) d += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
            }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
    }
    return q;
}

namespace {

std::vector<double> gram_evals(const CMatrix& X) { return linalg::hermitian_eigen(adjoint(X) * X).values; }

void require_distinct(const std::vector<double>& v, const char* who) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] - v[i - 1] > 1e-10 * std::max(1.0, std::fabs(v[i]))))
            throw std::domain_error(std::string(who) + ": eigenvalues must be distinct");
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

McCheck finish(double sum, double sum2, std::size_t n, double closed) {
    const double mean = sum / n;
    const double var = (sum2 / n - mean * mean) * n / (n - 1.0);
    return {mean, closed, std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace

double hciz_rect_closed(const CMatrix& A, const CMatrix& C) {
    if (A.rows != C.rows || A.cols != C.cols || A.rows < A.cols)
        throw std::invalid_argument("hciz_rect_closed: A and C must both be K x N with K >= N");
    const int K = int(A.rows), N = int(A.cols), d = K - N;
    const auto a = gram_evals(A), c = gram_evals(C);
    require_distinct(a, "hciz_rect_closed");
    require_distinct(c, "hciz_rect_closed");
    linalg::Matrix m(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = specfun::log_besseli(d, 2.0 * std::sqrt(a[i] * c[j]));
    const auto det = linalg::logdet_scaled(m);
    double log_c = 0.0;
    for (int p = 1; p <= N - 1; ++p) log_c += log_factorial(p);
    for (int q = 1; q <= K - 1; ++q) log_c += log_factorial(q);
    for (int r = 1; r <= d - 1; ++r) log_c -= log_factorial(r);
    const auto va = linalg::log_vandermonde(a), vc = linalg::log_vandermonde(c);
    double log_prod = 0.0;
    for (int i = 0; i < N; ++i) log_prod += 0.5 * d * std::log(a[i] * c[i]);
    return det.sign * va.sign * vc.sign * std::exp(log_c + det.log_abs - va.log_abs - vc.log_abs - log_prod);
}

McCheck hciz_rect_check(const CMatrix& A, const CMatrix& C, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("hciz_rect_check: need at least two samples");
    const double closed = hciz_rect_closed(A, C);
    const std::size_t K = A.rows, N = A.cols;
    const CMatrix Ah = adjoint(A);
    double s = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        Stream st(seed, k);
        const CMatrix U = haar_unitary(K, st);
        const CMatrix V = haar_unitary(N, st);
        // Tr(A V* C* U* + U C V A*) = 2 Re Tr(U C V A*)
        const double e = 2.0 * trace(U * C * V * Ah).real();
        const double v = std::exp(e);
        s += v;
        s2 += v * v;
    }
    return finish(s, s2, samples, closed);
}

double bgw_closed(const CMatrix& C) {
    if (C.rows != C.cols) throw std::invalid_argument("bgw_closed: C must be square");
    const int K = int(C.rows);
    const auto c = gram_evals(C);
    require_distinct(c, "bgw_closed");
    linalg::Matrix m(K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) m(i, j) = 0.5 * j * std::log(c[i]) + specfun::log_besseli(j, std::sqrt(c[i]));
    const auto det = linalg::logdet_scaled(m);
    double log_c = 0.5 * K * (K - 1) * std::log(2.0);
    for (int j = 1; j <= K - 1; ++j) log_c += log_factorial(j);
    const auto vc = linalg::log_vandermonde(c);
    return det.sign * vc.sign * std::exp(log_c + det.log_abs - vc.log_abs);
}

McCheck bgw_check(const CMatrix& C, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("bgw_check: need at least two samples");
    const double closed = bgw_closed(C);
    double s = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        Stream st(seed, k);
        const CMatrix U = haar_unitary(C.rows, st);
        // exp(Tr(C* U* + U C) / 2) = exp(Re Tr(U C))
        const double v = std::exp(trace(U * C).real());
        s += v;
        s2 += v * v;
    }
    return finish(s, s2, samples, closed);
}

double h_function(const CMatrix& M, const CMatrix& X) {
    if (M.cols != X.rows || X.rows != X.cols) throw std::invalid_argument("h_function: shape mismatch");
    const std::size_t K = M.rows;
    const auto e = linalg::hermitian_eigen(M * X * adjoint(M)).values;
    require_distinct(e, "h_function");
    linalg::Matrix m(K);
    std::vector<int> signs(K * K, 1);
    for (std::size_t i = 0; i < K; ++i) {
        if (!(e[i] > 0.0)) throw std::domain_error("h_function: eigenvalues must be positive");
        for (std::size_t j = 0; j < K; ++j)
            m(i, j) = 0.5 * j * std::log(e[i]) + specfun::log_besseli(double(j), std::sqrt(e[i]));
    }
    const auto det = linalg::logdet_scaled(m, signs);
    const auto ve = linalg::log_vandermonde(e);
    return det.sign * ve.sign * std::exp(det.log_abs - ve.log_abs);
}

}  // namespace ncbesq::matproc
