#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cbt::stat {

// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), the asymptotic
// Kolmogorov distribution complement.
double kolmogorov_q(double lambda);

// Regularized upper incomplete gamma Q(a, x) (series / continued fraction).
double gamma_q(double a, double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov; p from the asymptotic distribution with the
// usual sqrt(na*nb/(na+nb)) scaling. Asymptotic p is meaningful for sizes
// >= ~30.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a cdf.
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t df = 0;
};

// Pearson goodness of fit; df = bins - 1 - ddof.
Chi2Result chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected, std::int64_t ddof = 0);

double median(std::vector<double> v);
double mean(const std::vector<double>& v);
// standard error of the mean
double se_mean(const std::vector<double>& v);

} // namespace cbt::stat
