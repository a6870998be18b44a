#include "ncbesq/kernels.hpp"

#include "ncbesq/quadrature.hpp"
#include "ncbesq/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncbesq {

using linalg::LogDet;
using linalg::Matrix;

DriftSpectrum DriftSpectrum::of(std::vector<double> mu) {
    DriftSpectrum d{std::move(mu), false};
    d.validate();
    return d;
}

DriftSpectrum DriftSpectrum::zero(std::size_t n) { return {std::vector<double>(n, 0.0), true}; }

std::vector<double> DriftSpectrum::lambdas() const {
    std::vector<double> l(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) l[i] = 0.5 * mu[i];
    return l;
}

void DriftSpectrum::validate() const {
    if (mu.empty()) throw std::domain_error("DriftSpectrum: empty");
    if (degenerate_zero) {
        for (double m : mu)
            if (m != 0.0) throw std::domain_error("DriftSpectrum: degenerate flag with nonzero entries");
        return;
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] >= 0.0) || !std::isfinite(mu[i])) throw std::domain_error("DriftSpectrum: mu must be finite and >= 0");
        if (i > 0 && !(mu[i] > mu[i - 1])) throw std::domain_error("DriftSpectrum: mu must be strictly increasing");
    }
}

void validate_chamber(const ChamberPoint& x, bool strict_positive) {
    if (x.empty()) throw std::domain_error("chamber point: empty");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || x[i] < 0.0) throw std::domain_error("chamber point: negative or non-finite coordinate");
        if (i > 0 && !(x[i] > x[i - 1])) throw std::domain_error("chamber point: coordinates not strictly increasing");
    }
    if (strict_positive && !(x[0] > 0.0)) throw std::domain_error("chamber point: coordinates must be positive");
}

namespace kernels {

namespace {

void check_sizes(std::size_t n, const ChamberPoint& x, const ChamberPoint& y) {
    if (x.size() != n || y.size() != n) throw std::invalid_argument("kernel: dimension mismatch");
}

double finish(double log_value, int sign) {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_value);
}

LogDet logdet_of(std::size_t n, const std::function<double(std::size_t, std::size_t)>& entry_log) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = entry_log(i, j);
    return linalg::logdet_scaled(m);
}

// S(w) = sum_k w^k / (k! Gamma(k + nu + 1)) = (z/2)^{-nu} I_nu(z) with w = z^2 / 4.
// Both phi and q_t are rank-one rescalings of S(a_i b_j), and the determinants of these
// matrices cancel badly when points are close. The coefficients are positive, so the
// series summed in long double keeps full relative accuracy.
constexpr double kSeriesMaxArg = 1e4;

long double reduced_series(double nu, long double w) {
    long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= w / (static_cast<long double>(k) * (k + static_cast<long double>(nu)));
        sum += term;
        if (term <= sum * 1e-22L && k * static_cast<long double>(k) > w) break;
    }
    return sum;
}

// log |det S(a_i b_j)| and its sign.
LogDet series_kernel_logdet(double nu, const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double wmax = 0.0;
    for (double u : a)
        for (double v : b) wmax = std::max(wmax, u * v);
    if (!(wmax <= kSeriesMaxArg)) {
        return logdet_of(n, [&](std::size_t i, std::size_t j) {
            const double w = a[i] * b[j];
            if (w == 0.0) return -std::lgamma(nu + 1.0);
            const double z = 2.0 * std::sqrt(w);
            return specfun::log_besseli(nu, z) - nu * std::log(0.5 * z);
        });
    }
    std::vector<long double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = reduced_series(nu, static_cast<long double>(a[i]) * b[j]);
    // LU with partial pivoting
    long double log_abs = 0.0L;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i * n + k]) > std::fabs(m[p * n + k])) p = i;
        const long double piv = m[p * n + k];
        if (piv == 0.0L) return {-std::numeric_limits<double>::infinity(), 0};
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[p * n + j], m[k * n + j]);
            sign = -sign;
        }
        if (piv < 0) sign = -sign;
        log_abs += std::log(std::fabs(piv));
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = m[i * n + k] / piv;
            for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
        }
    }
    return {static_cast<double>(log_abs), sign};
}

// det q_t(x_i, y_j) = prod_i e^{-x_i/2t} prod_j (2t)^{-nu-1} y_j^nu e^{-y_j/2t} det S(x_i y_j / 4t^2)
LogDet besq_kernel_logdet(double nu, double t, const ChamberPoint& x, const ChamberPoint& y) {
    const std::size_t n = x.size();
    std::vector<double> a(n), b(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = x[i] / (2.0 * t);
        b[i] = y[i] / (2.0 * t);
        scale += -(x[i] + y[i]) / (2.0 * t) - (nu + 1.0) * std::log(2.0 * t) + (nu != 0.0 ? nu * std::log(y[i]) : 0.0);
    }
    LogDet d = series_kernel_logdet(nu, a, b);
    d.log_abs += scale;
    return d;
}

// det phi_{lambda_i}(z_j) = 2^{-nu N} det S(lambda_i z_j / 2)
LogDet phi_logdet(double nu, const std::vector<double>& lam, const ChamberPoint& z) {
    const std::size_t n = z.size();
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = 0.5 * lam[i];
        b[i] = z[i];
    }
    LogDet d = series_kernel_logdet(nu, a, b);
    d.log_abs -= nu * std::numbers::ln2 * double(n);
    return d;
}

// Rows k = 0..N-1: (2t)^{-k} q^{(nu+k)}(0, y), the row-reduced x-derivatives at the origin.
double entrance_row_log(double nu, int k, double t, double y) {
    return log_besq_density(nu + k, t, 0.0, y) - k * std::log(2.0 * t);
}

// log det(d^k/dx^k psi_{lambda_j}(0)) with entries mu_j^k / (Gamma(k+nu+1) 2^{2k+nu}).
LogDet entrance_denominator(double nu, const std::vector<double>& mu) {
    return logdet_of(mu.size(), [&](std::size_t k, std::size_t j) {
        const double lmu = k == 0 ? 0.0 : (mu[j] > 0 ? k * std::log(mu[j]) : -std::numeric_limits<double>::infinity());
        return lmu - std::lgamma(k + nu + 1.0) - (2.0 * k + nu) * std::numbers::ln2;
    });
}

double log_factorial_product(std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::lgamma(k + 1.0);
    return s;
}

}  // namespace

double log_besq_density(double nu, double t, double x, double y) {
    if (!(t > 0.0)) throw std::domain_error("besq_density: t must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("besq_density: x must be >= 0");
    if (!(y > 0.0)) throw std::domain_error("besq_density: y must be > 0");
    const double z = std::sqrt(x * y) / t;
    return -std::log(2.0 * t) - (x + y) / (2.0 * t) + nu * (std::log(y) - std::log(t)) +
           specfun::log_besseli_reduced(nu, z);
}

double besq_density(const BesselParams& params, double t, double x, double y) {
    params.validate();
    return std::exp(log_besq_density(params.nu, t, x, y));
}

double besq_density_xderiv(const BesselParams& params, int k, double t, double x, double y) {
    params.validate();
    if (k < 0) throw std::domain_error("besq_density_xderiv: negative order");
    double s = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * (k - j + 1) / j;
        const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
        s += sign * binom * std::exp(log_besq_density(params.nu + j, t, x, y));
    }
    return s / std::pow(2.0 * t, k);
}

double conditioned_density(const BesselParams& params, const DriftSpectrum& mu, double t, const ChamberPoint& x,
                           const ChamberPoint& y) {
    params.validate();
    mu.validate();
    if (mu.degenerate_zero) return laguerre_density(params, t, x, y);
    check_sizes(mu.size(), x, y);
    validate_chamber(x);
    validate_chamber(y, true);
    if (!(t > 0.0)) throw std::domain_error("conditioned_density: t must be > 0");
    const auto lam = mu.lambdas();
    const LogDet dx = phi_logdet(params.nu, lam, x);
    if (dx.sign == 0 || !std::isfinite(dx.log_abs) || dx.log_abs < std::log(1e-300))
        throw std::runtime_error("conditioned_density: singular denominator det(phi(x))");
    const LogDet dy = phi_logdet(params.nu, lam, y);
    const LogDet dq = besq_kernel_logdet(params.nu, t, x, y);
    const double sum_lam = std::accumulate(lam.begin(), lam.end(), 0.0);
    return finish(-t * sum_lam + dy.log_abs - dx.log_abs + dq.log_abs, dx.sign * dy.sign * dq.sign);
}

double laguerre_density(const BesselParams& params, double t, const ChamberPoint& x, const ChamberPoint& y) {
    params.validate();
    check_sizes(x.size(), x, y);
    validate_chamber(x);
    validate_chamber(y, true);
    if (!(t > 0.0)) throw std::domain_error("laguerre_density: t must be > 0");
    const LogDet vx = linalg::log_vandermonde(x);
    const LogDet vy = linalg::log_vandermonde(y);
    const LogDet dq = besq_kernel_logdet(params.nu, t, x, y);
    return finish(vy.log_abs - vx.log_abs + dq.log_abs, vx.sign * vy.sign * dq.sign);
}

double noncollision_prob(const DiffusionSpec& spec, const std::vector<double>& lambdas, const ChamberPoint& x) {
    if (!spec.has_eigenfunctions()) throw std::invalid_argument("noncollision_prob: spec has no eigenfunctions");
    if (lambdas.size() != x.size()) throw std::invalid_argument("noncollision_prob: dimension mismatch");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1])) throw std::domain_error("noncollision_prob: lambdas must be strictly increasing");
    validate_chamber(x);
    const std::size_t n = x.size();
    const LogDet d = logdet_of(n, [&](std::size_t i, std::size_t j) { return spec.log_psi(lambdas[i], x[j]); });
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag += spec.log_psi(lambdas[i], x[i]);
    if (d.sign <= 0) return 0.0;
    const double p = std::exp(d.log_abs - diag);
    if (p > 1.0 + 1e-10) throw std::runtime_error("noncollision_prob: value exceeds 1 (" + std::to_string(p) + ")");
    return std::min(p, 1.0);
}

double conditioned_density_generic(const DiffusionSpec& spec, const TransitionFn& p_t, const std::vector<double>& lambdas,
                                   double t, const ChamberPoint& x, const ChamberPoint& y) {
    if (!spec.has_eigenfunctions()) throw std::invalid_argument("conditioned_density_generic: spec has no eigenfunctions");
    check_sizes(lambdas.size(), x, y);
    validate_chamber(x);
    validate_chamber(y);
    const std::size_t n = x.size();
    const LogDet dx = logdet_of(n, [&](std::size_t i, std::size_t j) { return spec.log_psi(lambdas[i], x[j]); });
    if (dx.sign == 0 || !std::isfinite(dx.log_abs))
        throw std::runtime_error("conditioned_density_generic: singular denominator");
    const LogDet dy = logdet_of(n, [&](std::size_t i, std::size_t j) { return spec.log_psi(lambdas[i], y[j]); });
    Matrix pm(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pm(i, j) = p_t(t, x[i], y[j]);
    const LogDet dq = linalg::logdet(pm);
    const double sum_lam = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
    return finish(-t * sum_lam + dy.log_abs - dx.log_abs + dq.log_abs, dx.sign * dy.sign * dq.sign);
}

double entrance_density(const BesselParams& params, const DriftSpectrum& mu, double t, const ChamberPoint& y) {
    params.validate();
    mu.validate();
    if (y.size() != mu.size()) throw std::invalid_argument("entrance_density: dimension mismatch");
    validate_chamber(y, true);
    if (!(t > 0.0)) throw std::domain_error("entrance_density: t must be > 0");
    const std::size_t n = y.size();
    const double nu = params.nu;
    const LogDet num = logdet_of(n, [&](std::size_t k, std::size_t j) { return entrance_row_log(nu, int(k), t, y[j]); });
    if (mu.degenerate_zero) {
        const LogDet vy = linalg::log_vandermonde(y);
        return finish(num.log_abs + vy.log_abs - log_factorial_product(n), num.sign * vy.sign);
    }
    const auto lam = mu.lambdas();
    const LogDet den = entrance_denominator(nu, mu.mu);
    const LogDet dy = phi_logdet(nu, lam, y);
    const double sum_lam = std::accumulate(lam.begin(), lam.end(), 0.0);
    return finish(-t * sum_lam + num.log_abs - den.log_abs + dy.log_abs, num.sign * den.sign * dy.sign);
}

// ---------------------------------------------------------------------------

namespace {
using GL = boost::math::quadrature::gauss<double, 20>;
}

Chamber2Density::Chamber2Density(std::array<Fn, 2> A, std::array<Fn, 2> B, double C, double y_max, int panels)
    : A_(std::move(A)), B_(std::move(B)), C_(C), ymax_(y_max) {
    if (panels < 10) throw std::invalid_argument("Chamber2Density: too few panels");
    if (ymax_ <= 0.0) {
        // grow the upper cutoff until the absolute envelope of the y2-marginal is negligible
        auto envelope = [&](double y) {
            const Vec4 f = f4(y);
            double s = 0.0;
            for (double v : f) s += std::fabs(v);
            return s;
        };
        double y = 4.0;
        for (int it = 0; it < 200; ++it) {
            const double inner = quad::integral([&](double z) { return envelope(z); }, 0.0, y, 1e-6);
            if (std::fabs(C_) * envelope(y) * inner * y < 1e-14) break;
            y *= 1.2;
        }
        ymax_ = y;
    }
    knots_.resize(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        const double s = double(i) / panels;
        knots_[i] = ymax_ * s * s;
    }
    cum4_.assign(panels + 1, Vec4{0, 0, 0, 0});
    for (int i = 0; i < panels; ++i) {
        Vec4 acc{0, 0, 0, 0};
        for (int k = 0; k < 4; ++k)
            acc[k] = GL::integrate([&](double y) { return f4(y)[k]; }, knots_[i], knots_[i + 1]);
        for (int k = 0; k < 4; ++k) cum4_[i + 1][k] = cum4_[i][k] + acc[k];
    }
    for (int c = 0; c < 2; ++c) {
        cum_marg_[c].assign(panels + 1, 0.0);
        for (int i = 0; i < panels; ++i)
            cum_marg_[c][i + 1] =
                cum_marg_[c][i] + GL::integrate([&](double y) { return pdf_raw(c, y); }, knots_[i], knots_[i + 1]);
    }
    mass_ = cum_marg_[1].back();
}

Chamber2Density::Vec4 Chamber2Density::f4(double y) const {
    if (y <= 0.0) return {0, 0, 0, 0};
    const double a1 = A_[0](y), a2 = A_[1](y), b1 = B_[0](y), b2 = B_[1](y);
    return {a1 * b1, a1 * b2, a2 * b1, a2 * b2};
}

std::size_t Chamber2Density::panel_of(double y) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
    std::size_t i = std::size_t(it - knots_.begin());
    i = i == 0 ? 0 : i - 1;
    return std::min(i, knots_.size() - 2);
}

Chamber2Density::Vec4 Chamber2Density::F4(double y) const {
    if (y <= 0.0) return {0, 0, 0, 0};
    if (y >= ymax_) return cum4_.back();
    const std::size_t i = panel_of(y);
    Vec4 r = cum4_[i];
    if (y > knots_[i]) {
        // one pass of the rule for all four entries
        const double a = knots_[i], h = 0.5 * (y - a), mid = a + h;
        const auto& xs = GL::abscissa();
        const auto& ws = GL::weights();
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const Vec4 p = f4(mid + h * xs[k]);
            const Vec4 m = xs[k] == 0.0 ? Vec4{0, 0, 0, 0} : f4(mid - h * xs[k]);
            for (int e = 0; e < 4; ++e) r[e] += h * ws[k] * (p[e] + m[e]);
        }
    }
    return r;
}

// u = (f11, f12, f21, f22), v = (f22, f21, f12, f11), signs (+, -, -, +)
double Chamber2Density::pdf_raw(int coord, double y) const {
    if (y <= 0.0 || y >= ymax_) return 0.0;
    static constexpr int v_of[4] = {3, 2, 1, 0};
    static constexpr double sg[4] = {1, -1, -1, 1};
    const Vec4 f = f4(y), F = F4(y);
    double s = 0.0;
    if (coord == 1) {
        for (int k = 0; k < 4; ++k) s += sg[k] * f[v_of[k]] * F[k];
    } else {
        const Vec4& tot = cum4_.back();
        for (int k = 0; k < 4; ++k) s += sg[k] * f[k] * (tot[v_of[k]] - F[v_of[k]]);
    }
    return C_ * s;
}

double Chamber2Density::cdf_raw(int coord, double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= ymax_) return cum_marg_[coord].back();
    const std::size_t i = panel_of(y);
    return cum_marg_[coord][i] + GL::integrate([&](double z) { return pdf_raw(coord, z); }, knots_[i], y);
}

double Chamber2Density::density(double y1, double y2) const {
    if (!(y1 > 0.0) || !(y2 > y1)) return 0.0;
    const double d = (A_[0](y1) * A_[1](y2) - A_[1](y1) * A_[0](y2)) * (B_[0](y1) * B_[1](y2) - B_[1](y1) * B_[0](y2));
    return C_ * d;
}

double Chamber2Density::marginal_pdf(int coord, double y) const {
    if (coord != 0 && coord != 1) throw std::invalid_argument("Chamber2Density: coord must be 0 or 1");
    return pdf_raw(coord, y);
}

double Chamber2Density::marginal_cdf(int coord, double y) const {
    if (coord != 0 && coord != 1) throw std::invalid_argument("Chamber2Density: coord must be 0 or 1");
    return cdf_raw(coord, y);
}

double Chamber2Density::invert(const std::function<double(std::size_t)>& knot_cdf, const std::function<double(double)>& cdf,
                               const std::function<double(double)>& pdf, double target, double hi) const {
    // locate the panel from tabulated knot values, then safeguarded Newton inside it
    std::size_t lo_i = 0, hi_i = panel_of(hi) + 1;
    hi_i = std::min(hi_i, knots_.size() - 1);
    while (hi_i - lo_i > 1) {
        const std::size_t m = (lo_i + hi_i) / 2;
        if (knot_cdf(m) < target) lo_i = m;
        else hi_i = m;
    }
    double a = knots_[lo_i], b = std::min(knots_[hi_i], hi);
    double x = 0.5 * (a + b);
    for (int it = 0; it < 100 && b - a > 1e-12 * std::max(1.0, b); ++it) {
        const double f = cdf(x) - target;
        if (f < 0) a = x;
        else b = x;
        const double d = pdf(x);
        double nx = d > 0 ? x - f / d : 0.5 * (a + b);
        if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
        if (std::fabs(nx - x) < 1e-13 * std::max(1.0, x)) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

std::array<double, 2> Chamber2Density::sample(double u_top, double u_low) const {
    const double y2 = invert([&](std::size_t i) { return cum_marg_[1][i]; }, [&](double y) { return cdf_raw(1, y); },
                             [&](double y) { return pdf_raw(1, y); }, u_top * mass_, ymax_);
    static constexpr int v_of[4] = {3, 2, 1, 0};
    static constexpr double sg[4] = {1, -1, -1, 1};
    const Vec4 fv = f4(y2);
    Vec4 w;
    for (int k = 0; k < 4; ++k) w[k] = sg[k] * fv[v_of[k]];
    auto dot = [&](const Vec4& F) { return w[0] * F[0] + w[1] * F[1] + w[2] * F[2] + w[3] * F[3]; };
    const double total = dot(F4(y2));
    const double y1 = invert([&](std::size_t i) { return knots_[i] >= y2 ? total : dot(cum4_[i]); },
                             [&](double y) { return dot(F4(y)); }, [&](double y) { return dot(f4(y)); }, u_low * total,
                             y2);
    return {y1, y2};
}

Chamber2Density conditioned_chamber2(const BesselParams& params, const DriftSpectrum& mu, double t,
                                     const ChamberPoint& x) {
    params.validate();
    mu.validate();
    if (mu.size() != 2 || x.size() != 2) throw std::invalid_argument("conditioned_chamber2: N must be 2");
    validate_chamber(x);
    const double nu = params.nu;
    std::array<Chamber2Density::Fn, 2> A{[=](double y) { return std::exp(log_besq_density(nu, t, x[0], y)); },
                                         [=](double y) { return std::exp(log_besq_density(nu, t, x[1], y)); }};
    if (mu.degenerate_zero) {
        std::array<Chamber2Density::Fn, 2> B{[](double) { return 1.0; }, [](double y) { return y; }};
        return Chamber2Density(A, B, 1.0 / (x[1] - x[0]));
    }
    const auto lam = mu.lambdas();
    std::array<Chamber2Density::Fn, 2> B{[=](double y) { return specfun::phi(nu, lam[0], y); },
                                         [=](double y) { return specfun::phi(nu, lam[1], y); }};
    const LogDet dx = phi_logdet(nu, lam, x);
    const double C = dx.sign * std::exp(-t * (lam[0] + lam[1]) - dx.log_abs);
    return Chamber2Density(A, B, C);
}

Chamber2Density entrance_chamber2(const BesselParams& params, const DriftSpectrum& mu, double t) {
    params.validate();
    mu.validate();
    if (mu.size() != 2) throw std::invalid_argument("entrance_chamber2: N must be 2");
    const double nu = params.nu;
    std::array<Chamber2Density::Fn, 2> A{[=](double y) { return std::exp(entrance_row_log(nu, 0, t, y)); },
                                         [=](double y) { return std::exp(entrance_row_log(nu, 1, t, y)); }};
    if (mu.degenerate_zero) {
        std::array<Chamber2Density::Fn, 2> B{[](double) { return 1.0; }, [](double y) { return y; }};
        return Chamber2Density(A, B, 1.0);
    }
    const auto lam = mu.lambdas();
    std::array<Chamber2Density::Fn, 2> B{[=](double y) { return specfun::phi(nu, lam[0], y); },
                                         [=](double y) { return specfun::phi(nu, lam[1], y); }};
    const LogDet den = entrance_denominator(nu, mu.mu);
    const double C = den.sign * std::exp(-t * (lam[0] + lam[1]) - den.log_abs);
    return Chamber2Density(A, B, C);
}

}  // namespace kernels
}  // namespace ncbesq
