#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbt/rng.hpp"

namespace cbt {

// Parameters of the canonical heavy-tailed family
//   mu_k = theta * c / (k^2 * log(k+e)^{1+beta}),  k >= 1,
// with theta tuned so that the mean hits the requested target.
struct CauchyFamilyMeta {
    double beta = 0.0;
    double c = 0.0;
    double theta = 0.0;
    double c_eff = 0.0; // theta * c: the effective tail constant of the built law
};

// Subcritical offspring law with exact pmf/tail access.
//
// Immutable after construction. The pmf/cdf/suffix tables are fixed at build
// time (no lazy growth); sampling beyond the table inverts the analytic tail.
// All const methods are safe to call concurrently.
class OffspringDistribution {
  public:
    static OffspringDistribution make_cauchy_family(double beta, double c, double m_target);
    static OffspringDistribution from_pmf(std::vector<double> pmf);
    static OffspringDistribution from_json_text(const std::string& text);
    std::string to_json_text() const;

    // mu_k for k >= 0 (exact: table value or family formula)
    double pmf(std::int64_t k) const;
    // mu([k, inf)) for k >= 0, absolute error <= 1e-14
    double tail(std::int64_t k) const;
    // sum_{j >= k} j * mu_j; equals ell*(k) for k >= 1
    double mean_tail(std::int64_t k) const;

    double mean() const { return mean_; }

    // G_mu(s) for s in [0, 1]
    double gen_fn(double s) const;
    // 1 - G_mu(1-q) = sum_k mu_k (1 - (1-q)^k), cancellation-free
    double one_minus_gen_at_one_minus(double q) const;

    // ell(q) = m - sum_{k>=0} mu([k+1,inf)) (1-q)^k, the slowly varying factor
    // in the height recursion Q_{n+1} = Q_n (m - ell(Q_n)). ell_log takes
    // w = -log q and is valid far beyond double range of q.
    double ell(double q) const;
    double ell_log(double w) const;

    // exponentially tilted law  nu_k = mu_k lambda^k / G(lambda)
    OffspringDistribution tilt(double lambda) const;

    // one draw by inverse cdf
    std::int64_t sample(Rng& rng) const;

    enum class NlognClass { convergent, divergent, unknown };
    NlognClass nlogn_classification() const;
    // growth report: partial sums of n*log(n)*mu_n at selected cutoffs
    std::vector<std::pair<std::int64_t, double>> nlogn_partial_sums() const;

    bool finite_support() const { return finite_support_; }
    std::int64_t support_max() const { return support_max_; } // -1 when infinite
    const std::optional<CauchyFamilyMeta>& family() const { return family_; }
    std::int64_t table_size() const { return static_cast<std::int64_t>(pmf_.size()); }

  private:
    OffspringDistribution() = default;
    void build_suffix_tables();
    double analytic_pmf(double x) const;
    double analytic_tail(double x) const;      // smooth extension of tail(ceil x)
    double analytic_mean_tail(double x) const;
    double powlog(double g) const;             // g^{1+beta} with fast paths
    // sum_{k > k0} mu_k e^{-nu k}, nu = e^{-w}
    double laplace_pmf_tail(std::int64_t k0, double w) const;
    // sum_{j > k0} tail(j) e^{-nu (j-1)}, nu = e^{-w}
    double laplace_survival_tail(std::int64_t k0, double w) const;
    // sum_{k >= i} tail(k+1) = mean_tail(i+1) - i * tail(i+1)
    double survival_suffix(std::int64_t i) const;

    std::vector<double> pmf_;      // 0..K
    std::vector<double> cum_;      // cum_[k] = P(xi <= k)
    std::vector<double> sfx_mass_; // size K+2: sfx_mass_[k] = mu([k, inf))
    std::vector<double> sfx_mean_; // size K+2: sum_{j>=k} j mu_j
    std::vector<double> tau_cache_; // route-2 quadrature cache (family only)
    double mean_ = 0.0;
    bool finite_support_ = true;
    std::int64_t support_max_ = 0;
    std::optional<CauchyFamilyMeta> family_;
};

// Kahan-Neumaier compensated accumulator.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace cbt
