#include "ncbesq/gibbs.hpp"

#include "ncbesq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncbesq::gibbs {

using linalg::LogDet;
using linalg::Matrix;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool interlaced(LevelPair pair, const std::vector<double>& y, const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (pair == LevelPair::Even) {
        // x_1 <= y_1 <= x_2 <= ... <= x_n <= y_n
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = i == 0 ? 0.0 : y[i - 1];
            if (!(x[i] >= lo && x[i] <= y[i])) return false;
        }
        return true;
    }
    // y_1 <= x_1 <= y_2 <= ... <= x_n <= y_{n+1}
    for (std::size_t i = 0; i < n; ++i)
        if (!(x[i] >= y[i] && x[i] <= y[i + 1])) return false;
    return true;
}

// Sample x with density proportional to det(g_i(x_j)) on the product of cells [lo_j, hi_j].
std::vector<double> sample_det_product(std::size_t n, const std::function<double(std::size_t, double)>& g,
                                       const std::function<double(std::size_t, double)>& G,
                                       const std::vector<double>& lo, const std::vector<double>& hi, Stream& stream) {
    std::vector<double> x(n);
    std::vector<double> G_lo(n * n), G_hi(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(hi[j] > lo[j])) throw std::runtime_error("sample_gibbs: degenerate interlacing cell");
        for (std::size_t i = 0; i < n; ++i) {
            G_lo[i * n + j] = G(i, lo[j]);
            G_hi[i * n + j] = G(i, hi[j]);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        // cofactors of column k with columns < k at sampled points and > k integrated over their cells
        std::vector<double> cof(n, 1.0);
        if (n > 1) {
            for (std::size_t r = 0; r < n; ++r) {
                Matrix m(n - 1);
                for (std::size_t i = 0, ii = 0; i < n; ++i) {
                    if (i == r) continue;
                    for (std::size_t j = 0, jj = 0; j < n; ++j) {
                        if (j == k) continue;
                        m(ii, jj) = j < k ? g(i, x[j]) : G_hi[i * n + j] - G_lo[i * n + j];
                        ++jj;
                    }
                    ++ii;
                }
                cof[r] = ((r + k) % 2 == 0 ? 1.0 : -1.0) * linalg::logdet(m).value();
            }
        }
        auto F = [&](double v) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += cof[i] * (G(i, v) - G_lo[i * n + k]);
            return s;
        };
        auto f = [&](double v) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += cof[i] * g(i, v);
            return s;
        };
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cof[i] * (G_hi[i * n + k] - G_lo[i * n + k]);
        if (!(std::fabs(total) > 0.0) || !std::isfinite(total))
            throw std::runtime_error("sample_gibbs: vanishing conditional normalization");
        const double target = stream.uniform() * total;
        const double sgn = total > 0 ? 1.0 : -1.0;
        double a = lo[k], b = hi[k];
        double v = 0.5 * (a + b);
        for (int it = 0; it < 200 && b - a > 1e-10 * std::max(1.0, std::fabs(b)); ++it) {
            const double r = sgn * (F(v) - target);
            if (r < 0) a = v;
            else b = v;
            const double d = sgn * f(v);
            double nv = d > 0 ? v - r / d : 0.5 * (a + b);
            if (!(nv > a && nv < b)) nv = 0.5 * (a + b);
            if (std::fabs(nv - v) < 1e-14 * std::max(1.0, std::fabs(v))) {
                v = nv;
                break;
            }
            v = nv;
        }
        x[k] = v;
    }
    return x;
}

}  // namespace

PsiBundle::PsiBundle(DiffusionSpec spec, std::vector<double> lambdas) : spec_(std::move(spec)), lam_(std::move(lambdas)) {
    require(spec_.has_eigenfunctions(), "PsiBundle: spec has no eigenfunctions");
    require(!lam_.empty(), "PsiBundle: empty lambdas");
    for (std::size_t i = 1; i < lam_.size(); ++i)
        if (!(lam_[i] > lam_[i - 1])) throw std::domain_error("PsiBundle: lambdas must be strictly increasing");
    ac_ = spec_.a(spec_.ref_point);
}

PsiBundle PsiBundle::besq(const BesselParams& params, const DriftSpectrum& mu, double ref_point) {
    mu.validate();
    if (mu.degenerate_zero) throw std::domain_error("PsiBundle: degenerate spectrum, use DegenerateKernels");
    return PsiBundle(besq_spec(params, ref_point), mu.lambdas());
}

LogDet PsiBundle::log_psi(std::size_t n, const std::vector<double>& x) const {
    require(n >= 1 && n + 1 <= N() && x.size() == n, "log_psi: bad level or size");
    LogDet d = log_psi_bar(n, x);
    for (std::size_t i = 0; i < n; ++i) d.log_abs += log_psi_at(n, x[i]) - log_psi_at(n + 1, x[i]);
    return d;
}

LogDet PsiBundle::log_psi_bar(std::size_t n, const std::vector<double>& x) const {
    require(n >= 1 && n <= N() && x.size() == n, "log_psi_bar: bad level or size");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = log_psi_at(i + 1, x[j]);
    LogDet d = linalg::logdet_scaled(m);
    for (std::size_t i = 0; i < n; ++i) d.log_abs -= log_psi_at(n, x[i]);
    return d;
}

double PsiBundle::log_d_entry(std::size_t i, std::size_t j, double x, int& sign) const {
    const double dl = ell(i, x) - ell(j, x);
    sign = dl > 0 ? 1 : (dl < 0 ? -1 : 0);
    const double c = spec_.ref_point;
    return log_psi_at(i, x) + log_psi_at(j, x) + std::log(std::fabs(dl)) + std::log(ac_) - 2.0 * log_psi_at(j, c) -
           std::log(spec_.scale_density(x));
}

LogDet PsiBundle::log_psi_tilde(std::size_t n, const std::vector<double>& x) const {
    require(n >= 1 && n + 1 <= N() && x.size() == n, "log_psi_tilde: bad level or size");
    Matrix m(n);
    std::vector<int> signs(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = log_d_entry(i + 1, n + 1, x[j], signs[i * n + j]);
    LogDet d = linalg::logdet_scaled(m, signs);
    if (n % 2 == 1) d.sign = -d.sign;
    return d;
}

double PsiBundle::c_const(std::size_t n) const {
    require(n >= 1 && n + 1 <= N(), "c_const: bad level");
    double p = 1.0;
    for (std::size_t i = 1; i <= n; ++i) p /= (lam_[n] - lam_[i - 1]) * ac_;
    return p;
}

double PsiBundle::speed_doob(std::size_t j, double x) const {
    const double r = log_psi_at(j, x) - log_psi_at(j, spec_.ref_point);
    return std::exp(2.0 * r) * spec_.speed_density(x);
}

double PsiBundle::speed_dual_doob(std::size_t j, double x) const {
    const double r = log_psi_at(j, spec_.ref_point) - log_psi_at(j, x);
    return std::exp(2.0 * r) * spec_.scale_density(x) / ac_;
}

double PsiBundle::lambda_kernel_density(LevelPair pair, const std::vector<double>& y, const std::vector<double>& x) const {
    const std::size_t n = x.size();
    if (pair == LevelPair::Even) {
        require(n >= 1 && y.size() == n && n + 1 <= N(), "lambda_kernel_density: bad sizes for (2n, 2n-1)");
        if (!interlaced(pair, y, x)) return 0.0;
        const LogDet num = log_psi(n, x);
        const LogDet den = log_psi_tilde(n, y);
        double l = num.log_abs - den.log_abs - std::log(c_const(n));
        for (double xi : x) l += std::log(speed_doob(n + 1, xi));
        return num.sign * den.sign * std::exp(l);
    }
    require(n >= 1 && y.size() == n + 1 && n + 1 <= N(), "lambda_kernel_density: bad sizes for (2n+1, 2n)");
    if (!interlaced(pair, y, x)) return 0.0;
    const LogDet num = log_psi_tilde(n, x);
    const LogDet den = log_psi_bar(n + 1, y);
    double l = num.log_abs - den.log_abs;
    for (double xi : x) l += std::log(speed_dual_doob(n + 1, xi));
    return num.sign * den.sign * std::exp(l);
}

double PsiBundle::even_entry_antiderivative(std::size_t i, std::size_t n, double y) const {
    if (y <= 0.0) return 0.0;
    const std::size_t j = n + 1;
    const double li = ell(i, y), lj = ell(j, y);
    const double dl = li - lj;
    const double c = spec_.ref_point;
    const double loss = std::numeric_limits<double>::epsilon() * std::max(std::fabs(li), std::fabs(lj)) / std::fabs(dl);
    if (dl != 0.0 && loss < 1e-8) {
        const double l = log_psi_at(i, y) + log_psi_at(j, y) + std::log(std::fabs(dl)) -
                         std::log(std::fabs(lam_[i - 1] - lam_[j - 1])) - 2.0 * log_psi_at(j, c) -
                         std::log(spec_.scale_density(y));
        const double sign = (dl > 0) == (lam_[i - 1] - lam_[j - 1] > 0) ? 1.0 : -1.0;
        return sign * std::exp(l);
    }
    const double lpc = log_psi_at(j, c);
    return quad::integral(
        [&](double v) { return std::exp(log_psi_at(i, v) + log_psi_at(j, v) - 2.0 * lpc) * spec_.speed_density(v); }, 0.0, y,
        1e-12);
}

std::vector<double> PsiBundle::sample_level(LevelPair pair, const std::vector<double>& y, Stream& stream) const {
    if (pair == LevelPair::Odd) {
        const std::size_t n = y.size() - 1;
        require(n >= 1 && n + 1 <= N(), "sample_level: bad size for (2n+1, 2n)");
        std::vector<double> lo(y.begin(), y.end() - 1), hi(y.begin() + 1, y.end());
        auto G = [&](std::size_t i, double v) { return std::exp(log_psi_at(i + 1, v) - log_psi_at(n + 1, v)); };
        auto g = [&](std::size_t i, double v) { return G(i, v) * (ell(i + 1, v) - ell(n + 1, v)); };
        return sample_det_product(n, g, G, lo, hi, stream);
    }
    const std::size_t n = y.size();
    require(n >= 1 && n + 1 <= N(), "sample_level: bad size for (2n, 2n-1)");
    std::vector<double> lo(n), hi(y);
    for (std::size_t j = 0; j < n; ++j) lo[j] = j == 0 ? 0.0 : y[j - 1];
    const double lpc = log_psi_at(n + 1, spec_.ref_point);
    auto g = [&](std::size_t i, double v) {
        if (v <= 0.0) return 0.0;
        return std::exp(log_psi_at(i + 1, v) + log_psi_at(n + 1, v) - 2.0 * lpc) * spec_.speed_density(v);
    };
    auto G = [&](std::size_t i, double v) { return even_entry_antiderivative(i + 1, n, v); };
    return sample_det_product(n, g, G, lo, hi, stream);
}

HalfArray sample_gibbs(const PsiBundle& bundle, const std::vector<double>& top, Stream& stream) {
    const std::size_t N = top.size();
    require(N == bundle.N(), "sample_gibbs: top size must equal N");
    validate_chamber(top, true);
    HalfArray a = HalfArray::empty(N);
    a.rows.back() = top;
    for (std::size_t n = N - 1; n >= 1; --n) {
        a.rows[2 * n - 1] = bundle.sample_level(LevelPair::Odd, a.rows[2 * n], stream);
        a.rows[2 * n - 2] = bundle.sample_level(LevelPair::Even, a.rows[2 * n - 1], stream);
    }
    return a;
}

double log_gibbs_density(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density) {
    const std::size_t N = bundle.N();
    require(array.N() == N && array.levels() == 2 * N - 1, "gibbs_density: array size mismatch");
    if (!array.valid(false)) return kNegInf;
    if (!array.valid(true)) throw std::domain_error("gibbs_density: boundary-degenerate array");
    const auto& spec = bundle.spec();
    const auto& lam = bundle.lambdas();
    const double ac = spec.a(spec.ref_point);
    const auto& top = array.top();
    const double mt = top_density(top);
    if (!(mt > 0.0)) return kNegInf;
    double l = std::log(mt);
    l += 0.5 * double(N) * double(N - 1) * std::log(ac);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) l += std::log(lam[j] - lam[i]);
    const LogDet dtop = bundle.log_psi_bar(N, top);  // det / prod psi_N(top)
    l -= dtop.log_abs;
    for (std::size_t n = 1; n + 1 <= N; ++n) {
        const auto& odd = array.rows[2 * n - 2];
        const auto& even = array.rows[2 * n - 1];
        for (std::size_t i = 0; i < n; ++i) {
            l += spec.log_psi(lam[n], odd[i]) + spec.log_psi(lam[n - 1], odd[i]) + std::log(spec.speed_density(odd[i]));
            l += -2.0 * spec.log_psi(lam[n], even[i]) + std::log(spec.scale_density(even[i]) / ac);
        }
    }
    if (dtop.sign <= 0) throw std::runtime_error("gibbs_density: non-positive top determinant");
    return l;
}

double gibbs_density(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density) {
    return std::exp(log_gibbs_density(bundle, array, top_density));
}

double gibbs_density_telescoped(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density) {
    const std::size_t N = bundle.N();
    require(array.N() == N && array.levels() == 2 * N - 1, "gibbs_density_telescoped: array size mismatch");
    double v = top_density(array.top());
    for (std::size_t n = N - 1; n >= 1; --n) {
        v *= bundle.lambda_kernel_density(LevelPair::Odd, array.rows[2 * n], array.rows[2 * n - 1]);
        v *= bundle.lambda_kernel_density(LevelPair::Even, array.rows[2 * n - 1], array.rows[2 * n - 2]);
    }
    return v;
}

// ---------------------------------------------------------------------------

DegenerateKernels::DegenerateKernels(const BesselParams& params, std::size_t n_max, double ref_point)
    : params_(params), c_(ref_point) {
    params_.validate();
    require(n_max >= 1, "DegenerateKernels: n_max must be >= 1");
    require(ref_point > 0.0, "DegenerateKernels: ref_point must be > 0");
    const double nu = params_.nu;
    // iterate the kernel integrals on monomial determinants; the coefficient tracks the
    // integration constants of the weights x^nu / (2 c^{nu+1}) and c^nu x^{-nu-1} / 2
    h_exp_.push_back({0.0});
    h_logc_.push_back(0.0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<double> e;
        double lc = h_logc_[n - 1];
        for (double p : h_exp_[n - 1]) {
            e.push_back(p + nu + 1.0);
            lc -= std::log((p + nu + 1.0) * 2.0 * std::pow(c_, nu + 1.0));
        }
        hh_exp_.push_back(e);
        hh_logc_.push_back(lc);
        if (n == n_max) break;
        std::vector<double> e2{0.0};
        double lc2 = lc;
        for (double p : e) {
            e2.push_back(p - nu);
            lc2 += std::log(std::pow(c_, nu) / (2.0 * (p - nu)));
        }
        h_exp_.push_back(e2);
        h_logc_.push_back(lc2);
    }
}

double DegenerateKernels::eval(double log_coef, const std::vector<double>& exps, const std::vector<double>& x) const {
    const std::size_t n = exps.size();
    require(x.size() == n, "DegenerateKernels: size mismatch");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = exps[i] == 0.0 ? 0.0 : (x[j] > 0.0 ? exps[i] * std::log(x[j]) : kNegInf);
    const LogDet d = linalg::logdet_scaled(m);
    if (d.sign == 0) return 0.0;
    return std::exp(log_coef + d.log_abs);
}

double DegenerateKernels::h(std::size_t n, const std::vector<double>& x) const {
    require(n >= 1 && n <= h_exp_.size(), "DegenerateKernels::h: level out of range");
    return eval(h_logc_[n - 1], h_exp_[n - 1], x);
}

double DegenerateKernels::h_hat(std::size_t n, const std::vector<double>& x) const {
    require(n >= 1 && n <= hh_exp_.size(), "DegenerateKernels::h_hat: level out of range");
    return eval(hh_logc_[n - 1], hh_exp_[n - 1], x);
}

double DegenerateKernels::speed(double x) const {
    return std::pow(x, params_.nu) / (2.0 * std::pow(c_, params_.nu + 1.0));
}

double DegenerateKernels::speed_dual(double x) const { return std::pow(c_ / x, params_.nu + 1.0) / (2.0 * c_); }

double DegenerateKernels::lambda_kernel_density(LevelPair pair, const std::vector<double>& y,
                                                const std::vector<double>& x) const {
    const std::size_t n = x.size();
    if (pair == LevelPair::Even) {
        require(n >= 1 && y.size() == n, "DegenerateKernels: bad sizes for (2n, 2n-1)");
        if (!interlaced(pair, y, x)) return 0.0;
        double v = h(n, x) / h_hat(n, y);
        for (double xi : x) v *= speed(xi);
        return v;
    }
    require(n >= 1 && y.size() == n + 1, "DegenerateKernels: bad sizes for (2n+1, 2n)");
    if (!interlaced(pair, y, x)) return 0.0;
    double v = h_hat(n, x) / h(n + 1, y);
    for (double xi : x) v *= speed_dual(xi);
    return v;
}

}  // namespace ncbesq::gibbs
