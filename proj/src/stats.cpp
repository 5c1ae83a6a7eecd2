#include "cbt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbt::stat {

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;
    double acc = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        acc += sign * term;
        sign = -sign;
        if (term < 1e-14) break;
    }
    return std::clamp(2.0 * acc, 0.0, 1.0);
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // modified Lentz continued fraction
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q(d * std::sqrt(na * nb / (na + nb)));
    return r;
}

KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q(d * std::sqrt(n));
    return r;
}

Chi2Result chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected, std::int64_t ddof) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    Chi2Result r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0))
            throw std::invalid_argument("chi_square_gof: expected counts must be > 0");
        const double diff = observed[i] - expected[i];
        r.statistic += diff * diff / expected[i];
    }
    r.df = static_cast<std::int64_t>(observed.size()) - 1 - ddof;
    if (r.df < 1) throw std::invalid_argument("chi_square_gof: df < 1");
    r.p_value = gamma_q(static_cast<double>(r.df) / 2.0, r.statistic / 2.0);
    return r;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double se_mean(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("se_mean: need >= 2 samples");
    const double m = mean(v);
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= static_cast<double>(v.size() - 1);
    return std::sqrt(s2 / static_cast<double>(v.size()));
}

} // namespace cbt::stat
