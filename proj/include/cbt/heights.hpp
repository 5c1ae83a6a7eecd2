#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cbt/offspring.hpp"

namespace cbt {

// Raised when two algebraic routes that must agree do not.
class NumericalIntegrityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Table of Q_n = P(H(T) >= n) in log domain, with u_n = Q_n / m^n.
// mode: 0 = exact-sum (direct pmf-route recursion), 1 = hybrid-tail
// (u-recursion through ell).
struct QTable {
    std::vector<double> log_q;
    std::vector<double> log_u;
    std::vector<std::uint8_t> mode;
    double log_m = 0.0;
    std::int64_t n_switch = 0;        // first hybrid index; log_q.size() if none
    std::int64_t overlap_len = 0;     // overlap indices checked between routes
    double overlap_max_rel_dev = 0.0; // max |log Q| deviation on the overlap
};

// Builds Q_0..Q_{n_max}. Direct recursion Q_{n+1} = sum_k mu_k (1-(1-Q_n)^k)
// while Q_n > 1e-6, u-recursion u_{n+1} = u_n (1 - ell(Q_n)/m) in log domain
// below. The direct route is continued for up to 120 indices past the switch
// and must agree with the u-route within relative 1e-6, else
// NumericalIntegrityError.
QTable q_table(const OffspringDistribution& d, std::int64_t n_max);

// ell(q) = m - sum_{k>=0} mu([k+1,inf)) (1-q)^k, stable form.
double ell_small(const OffspringDistribution& d, double q);
// same with w = -log q; valid beyond double range of q
double ell_small_log(const OffspringDistribution& d, double w);

struct IdentityReport {
    std::int64_t n_lo = 0, n_hi = 0;
    double max_rel_dev = 0.0; // max |log Q_{n+1} - log(Q_n (m - ell(Q_n)))|
    bool ok = false;          // max_rel_dev <= 1e-12
    bool ell_in_range = true; // 0 < ell(Q_n) < m throughout
};

// Cross-checks the pmf-route step against Q_n (m - ell(Q_n)) (tail route).
// Requires n_hi <= 900 so Q stays inside double range.
IdentityReport q_step_identity_check(const OffspringDistribution& d, std::int64_t n_lo,
                                     std::int64_t n_hi);

struct HeightPrediction {
    double center = 0.0;                // log n / log(1/m)
    std::optional<double> second_order; // prop4-corrected center, beta <= 1 families
    std::int64_t band_lo = 0;           // max{h : n Q_h >= 100}
    std::int64_t band_hi = 0;           // min{h : n Q_h <= 0.01}
};

HeightPrediction height_prediction(const OffspringDistribution& d, const QTable& qt,
                                   double n);

// log n/log(1/m) minus the second-order term of Prop-4 type:
//   beta = 1:      c_eff log log n / (m log(1/m)^2)
//   beta in (0,1): c_eff log(n)^{1-beta} / ((1-beta) beta m log(1/m)^{1+beta})
double prop4_center(double beta, double c_eff, double m, double n);

struct QnBoundsReport {
    std::int64_t n0 = 0;         // first index with ell(Q_n) <= eta/2
    std::int64_t lower_from = 0; // derived rank for the lower bound
    bool upper_ok = false;       // Q_n <= m^n for all n >= 1
    bool lower_ok = false;       // Q_n >= (m-eta)^n for n >= lower_from
};

QnBoundsReport qn_bounds_check(const OffspringDistribution& d, const QTable& qt,
                               double eta);

} // namespace cbt
