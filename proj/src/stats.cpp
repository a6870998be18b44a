#include "ncbesq/stats.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncbesq::stats {

double kolmogorov_tail(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {
double p_from(double d, double n_eff) {
    const double rn = std::sqrt(n_eff);
    return kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d);
}
}  // namespace

TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return {d, p_from(d, n)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return {d, p_from(d, na * nb / (na + nb))};
}

namespace {
using GL = boost::math::quadrature::gauss<double, 20>;
}

TabulatedCdf::TabulatedCdf(std::function<double(double)> density, double lo, double hi, int panels)
    : f_(std::move(density)) {
    if (!(hi > lo) || panels < 1) throw std::invalid_argument("TabulatedCdf: bad support");
    knots_.resize(panels + 1);
    cum_.assign(panels + 1, 0.0);
    for (int i = 0; i <= panels; ++i) knots_[i] = lo + (hi - lo) * double(i) / panels;
    for (int i = 0; i < panels; ++i) {
        const double v = GL::integrate(f_, knots_[i], knots_[i + 1]);
        if (!std::isfinite(v)) throw std::runtime_error("TabulatedCdf: non-finite quadrature");
        cum_[i + 1] = cum_[i] + v;
    }
}

double TabulatedCdf::operator()(double x) const {
    if (x <= knots_.front()) return 0.0;
    if (x >= knots_.back()) return cum_.back();
    const std::size_t i = std::size_t(std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin()) - 1;
    return cum_[i] + GL::integrate(f_, knots_[i], x);
}

TabulatedCdf cdf_from_density(std::function<double(double)> density, double lo, double hi, int panels) {
    return TabulatedCdf(std::move(density), lo, hi, panels);
}

std::pair<double, double> wilson_interval(long k, long n, double z) {
    if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("wilson_interval: need 0 <= k <= n, n > 0");
    const double p = double(k) / n, z2 = z * z;
    const double den = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    double lo = centre - half, hi = centre + half;
    if (k == 0) lo = 0.0;
    if (k == n) hi = 1.0;
    return {std::max(0.0, lo), std::min(1.0, hi)};
}

MeanEstimate mean_with_error(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("mean_with_error: need at least two values");
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return {m, std::sqrt(s / (v.size() - 1) / v.size())};
}

}  // namespace ncbesq::stats
