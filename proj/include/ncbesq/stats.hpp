#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ncbesq::stats {

struct TestResult {
    double statistic;
    double p_value;
};

// Asymptotic Kolmogorov tail probability Q(t) = 2 sum_k (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_tail(double t);

// p-values use the asymptotic distribution with Stephens' small-sample correction;
// intended for n >= 100.
TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// CDF of a density on [lo, hi] tabulated on panels; evaluation between knots is exact to quadrature accuracy.
class TabulatedCdf {
public:
    TabulatedCdf(std::function<double(double)> density, double lo, double hi, int panels = 400);
    double operator()(double x) const;
    double total_mass() const { return cum_.back(); }

private:
    std::function<double(double)> f_;
    std::vector<double> knots_, cum_;
};

TabulatedCdf cdf_from_density(std::function<double(double)> density, double lo, double hi, int panels = 400);

std::pair<double, double> wilson_interval(long successes, long trials, double z = 1.959963984540054);

struct MeanEstimate {
    double mean;
    double std_err;
};
MeanEstimate mean_with_error(const std::vector<double>& v);

}  // namespace ncbesq::stats
