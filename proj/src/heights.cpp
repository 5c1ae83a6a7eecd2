#include "cbt/heights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbt {

double ell_small(const OffspringDistribution& d, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("ell_small: q must be in (0,1]");
    return d.ell(q);
}

double ell_small_log(const OffspringDistribution& d, double w) {
    if (!(w >= 0.0)) throw std::domain_error("ell_small_log: w must be >= 0");
    return d.ell_log(w);
}

namespace {

// Lazy interpolation of log ell as a function of s = log w on a uniform grid.
// Direct quadrature below kDirectW; Catmull-Rom on exact node values above.
// ell is smooth and slowly varying there, so the interpolation error is far
// below the 1e-6 route-agreement tolerance (checked in tests).
class EllEvaluator {
  public:
    explicit EllEvaluator(const OffspringDistribution& d)
        : d_(d), direct_only_(d.finite_support()) {}

    double ell_of_w(double w) {
        if (direct_only_ || w <= kDirectW) return d_.ell_log(w);
        const double s = std::log(w);
        const double pos = (s - s0_) / kStep;
        const auto j = static_cast<std::int64_t>(std::floor(pos));
        ensure(j + 2);
        const double x = pos - static_cast<double>(j);
        const double ym1 = node(j - 1), y0 = node(j), y1 = node(j + 1), y2 = node(j + 2);
        const double a = -0.5 * ym1 + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
        const double b = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
        const double c = -0.5 * ym1 + 0.5 * y1;
        const double y = ((a * x + b) * x + c) * x + y0;
        return std::exp(y);
    }

  private:
    static constexpr double kDirectW = 150.0;
    static constexpr double kStep = 0.04;

    double node(std::int64_t j) {
        return values_[static_cast<std::size_t>(j + 1)]; // j >= -1
    }
    void ensure(std::int64_t j) {
        while (static_cast<std::int64_t>(values_.size()) < j + 2) {
            const auto idx = static_cast<std::int64_t>(values_.size()) - 1; // node index
            const double w = std::exp(s0_ + kStep * static_cast<double>(idx));
            values_.push_back(std::log(d_.ell_log(w)));
        }
    }

    const OffspringDistribution& d_;
    bool direct_only_;
    double s0_ = std::log(kDirectW * 0.9); // one node of margin below the handoff
    std::vector<double> values_;
};

} // namespace

QTable q_table(const OffspringDistribution& d, std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("q_table: n_max must be >= 1");
    QTable qt;
    const double m = d.mean();
    qt.log_m = std::log(m);
    const auto size = static_cast<std::size_t>(n_max) + 1;
    qt.log_q.assign(size, 0.0);
    qt.log_u.assign(size, 0.0);
    qt.mode.assign(size, 0);

    // direct pmf-route region
    double Q = 1.0;
    std::int64_t n = 0;
    while (n < n_max && Q > 1e-6) {
        Q = d.one_minus_gen_at_one_minus(Q);
        ++n;
        qt.log_q[static_cast<std::size_t>(n)] = std::log(Q);
        qt.log_u[static_cast<std::size_t>(n)] =
            qt.log_q[static_cast<std::size_t>(n)] - static_cast<double>(n) * qt.log_m;
        qt.mode[static_cast<std::size_t>(n)] = 0;
    }
    qt.n_switch = n + 1;

    // u-recursion in log domain from the switch point
    if (n < n_max) {
        EllEvaluator ell(d);
        double lu = qt.log_u[static_cast<std::size_t>(n)];
        for (std::int64_t k = n; k < n_max; ++k) {
            const double w = -qt.log_q[static_cast<std::size_t>(k)];
            const double e = ell.ell_of_w(w);
            lu += std::log1p(-e / m);
            qt.log_u[static_cast<std::size_t>(k + 1)] = lu;
            qt.log_q[static_cast<std::size_t>(k + 1)] =
                lu + static_cast<double>(k + 1) * qt.log_m;
            qt.mode[static_cast<std::size_t>(k + 1)] = 1;
        }

        // route overlap: continue the direct recursion past the switch
        double Qr = Q;
        double maxdev = 0.0;
        std::int64_t len = 0;
        for (std::int64_t j = 1; j <= 120 && n + j <= n_max; ++j) {
            Qr = d.one_minus_gen_at_one_minus(Qr);
            if (!(Qr > 1e-290)) break;
            const double dev =
                std::abs(std::log(Qr) - qt.log_q[static_cast<std::size_t>(n + j)]);
            maxdev = std::max(maxdev, dev);
            ++len;
        }
        qt.overlap_len = len;
        qt.overlap_max_rel_dev = maxdev;
        if (len > 0 && maxdev > 1e-6) {
            std::ostringstream os;
            os << "q_table: exact/hybrid overlap disagreement " << maxdev
               << " (> 1e-6 relative) over " << len << " indices after switch at n="
               << qt.n_switch;
            throw NumericalIntegrityError(os.str());
        }
    }
    return qt;
}

IdentityReport q_step_identity_check(const OffspringDistribution& d, std::int64_t n_lo,
                                     std::int64_t n_hi) {
    if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("q_step_identity_check: bad range");
    if (n_hi > 900)
        throw std::invalid_argument(
            "q_step_identity_check: n_hi > 900 leaves double range for Q_n");
    IdentityReport rep;
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    const double m = d.mean();
    double Q = 1.0;
    std::int64_t n = 0;
    while (n < n_lo) {
        Q = d.one_minus_gen_at_one_minus(Q);
        ++n;
    }
    for (; n <= n_hi; ++n) {
        const double e = d.ell(Q);
        if (!(e > 0.0 && e < m)) rep.ell_in_range = false;
        const double Qnext = d.one_minus_gen_at_one_minus(Q); // pmf route
        const double dev = std::abs(std::log(Qnext) - std::log(Q) - std::log(m - e));
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
        Q = Qnext;
        if (!(Q > 1e-290)) break;
    }
    rep.ok = rep.max_rel_dev <= 1e-12;
    return rep;
}

HeightPrediction height_prediction(const OffspringDistribution& d, const QTable& qt,
                                   double n) {
    if (!(n > 1.0)) throw std::invalid_argument("height_prediction: n must be > 1");
    HeightPrediction hp;
    hp.center = std::log(n) / (-qt.log_m);
    const auto depth = static_cast<double>(qt.log_q.size() - 1);
    if (depth < 3.0 * hp.center)
        throw std::invalid_argument("height_prediction: QTable too short (need depth >= 3*center)");
    const double ln_n = std::log(n);
    const double hi_thresh = std::log(100.0);  // T_hi
    const double lo_thresh = std::log(0.01);   // T_lo
    std::int64_t band_lo = 0, band_hi = -1;
    for (std::size_t h = 0; h < qt.log_q.size(); ++h) {
        const double v = ln_n + qt.log_q[h];
        if (v >= hi_thresh) band_lo = static_cast<std::int64_t>(h);
        if (v <= lo_thresh) {
            band_hi = static_cast<std::int64_t>(h);
            break;
        }
    }
    if (band_hi < 0)
        throw std::invalid_argument("height_prediction: QTable too short for the band");
    hp.band_lo = band_lo;
    hp.band_hi = band_hi;
    const auto& fam = d.family();
    if (fam && fam->beta <= 1.0)
        hp.second_order = prop4_center(fam->beta, fam->c_eff, d.mean(), n);
    return hp;
}

double prop4_center(double beta, double c_eff, double m, double n) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::domain_error("prop4_center: beta must be in (0,1]");
    if (!(m > 0.0 && m < 1.0)) throw std::domain_error("prop4_center: m must be in (0,1)");
    if (!(n > 1.0)) throw std::domain_error("prop4_center: n must be > 1");
    const double L = std::log(1.0 / m);
    const double center = std::log(n) / L;
    if (beta == 1.0) return center - c_eff * std::log(std::log(n)) / (m * L * L);
    return center - c_eff * std::pow(std::log(n), 1.0 - beta) /
                        ((1.0 - beta) * beta * m * std::pow(L, 1.0 + beta));
}

QnBoundsReport qn_bounds_check(const OffspringDistribution& d, const QTable& qt,
                               double eta) {
    const double m = d.mean();
    if (!(eta > 0.0 && eta < m)) throw std::domain_error("qn_bounds_check: eta must be in (0,m)");
    QnBoundsReport rep;
    const auto n_max = static_cast<std::int64_t>(qt.log_q.size()) - 1;
    // ell(Q_n) decreases along the orbit; find the certificate index
    std::int64_t n0 = 0;
    while (n0 <= n_max && !(d.ell_log(-qt.log_q[static_cast<std::size_t>(n0)]) <= eta / 2.0))
        ++n0;
    if (n0 > n_max)
        throw std::invalid_argument("qn_bounds_check: QTable too short for the eta certificate");
    rep.n0 = n0;

    rep.upper_ok = true;
    for (std::int64_t k = 1; k <= n_max; ++k)
        if (qt.log_u[static_cast<std::size_t>(k)] > 1e-12) rep.upper_ok = false;

    // Q_n >= Q_{n0} (m - eta/2)^{n-n0} >= (m-eta)^n once the geometric gap
    // overtakes the prefix: derive the rank, then verify on the table.
    const double gap = std::log(m - eta / 2.0) - std::log(m - eta);
    const double need =
        static_cast<double>(n0) * std::log(m - eta / 2.0) - qt.log_q[static_cast<std::size_t>(n0)];
    std::int64_t n1 = n0;
    if (need > 0.0) n1 = n0 + static_cast<std::int64_t>(std::ceil(need / gap));
    rep.lower_from = n1;
    rep.lower_ok = n1 <= n_max;
    const double lme = std::log(m - eta);
    for (std::int64_t k = n1; k <= n_max; ++k)
        if (qt.log_q[static_cast<std::size_t>(k)] < static_cast<double>(k) * lme - 1e-9)
            rep.lower_ok = false;
    return rep;
}

} // namespace cbt
