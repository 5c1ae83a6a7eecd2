#include "cbt/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cbt/quadrature.hpp"
#include "json.hpp"

namespace cbt {

namespace {

constexpr double kE = 2.718281828459045235;
constexpr std::int64_t kTableSize = 131072;  // family pmf/suffix table span
constexpr std::int64_t kHeadCut = 100000;    // exact-head cut for Laplace splits
constexpr std::int64_t kConstructionCut = 10000000; // partial-sum span for S0/S1

double pow1p(double g, double beta) {
    // g^{1+beta} with fast paths for the betas used throughout the tests
    if (beta == 1.0) return g * g;
    if (beta == 0.5) return g * std::sqrt(g);
    if (beta == 1.5) return g * g * std::sqrt(g);
    return std::pow(g, 1.0 + beta);
}

// family integrands (c = 1): mass b2(x) = 1/(x^2 g^{1+b}), mean b1(x) = 1/(x g^{1+b})
double b1(double x, double beta) { return 1.0 / (x * pow1p(std::log(x + kE), beta)); }
double b2(double x, double beta) { return 1.0 / (x * x * pow1p(std::log(x + kE), beta)); }
double db1(double x, double beta) {
    const double g = std::log(x + kE);
    const double gp = pow1p(g, beta);
    return -1.0 / (x * x * gp) - (1.0 + beta) / (x * gp * g * (x + kE));
}
double db2(double x, double beta) {
    const double g = std::log(x + kE);
    const double gp = pow1p(g, beta);
    return -2.0 / (x * x * x * gp) - (1.0 + beta) / (x * x * gp * g * (x + kE));
}

struct BaseSums {
    double s0; // sum_{k>=1} b2(k)
    double s1; // sum_{k>=1} b1(k)
};

// sum_{k>=a} f(k) = int_{a-1/2}^inf f + f'(a-1/2)/24 + O(f''')
BaseSums family_base_sums(double beta) {
    static std::mutex mu;
    static std::map<double, BaseSums> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(beta);
        if (it != memo.end()) return it->second;
    }
    Accumulator s0, s1;
    for (std::int64_t k = 1; k <= kConstructionCut; ++k) {
        const double g = pow1p(std::log(static_cast<double>(k) + kE), beta);
        const double x = static_cast<double>(k);
        s0.add(1.0 / (x * x * g));
        s1.add(1.0 / (x * g));
    }
    const double edge = static_cast<double>(kConstructionCut) + 0.5;
    s0.add(quad::tail_integral_inv_square(edge, beta) + db2(edge, beta) / 24.0);
    s1.add(quad::tail_integral_inv(edge, beta) + db1(edge, beta) / 24.0);
    BaseSums out{s0.value(), s1.value()};
    std::lock_guard<std::mutex> lock(mu);
    memo[beta] = out;
    return out;
}

} // namespace

double OffspringDistribution::powlog(double g) const { return pow1p(g, family_->beta); }

double OffspringDistribution::analytic_pmf(double x) const {
    return family_->c_eff * b2(x, family_->beta);
}

double OffspringDistribution::analytic_tail(double x) const {
    const double beta = family_->beta;
    const double a = x - 0.5;
    return family_->c_eff * (quad::tail_integral_inv_square(a, beta) + db2(a, beta) / 24.0);
}

double OffspringDistribution::analytic_mean_tail(double x) const {
    const double beta = family_->beta;
    const double a = x - 0.5;
    return family_->c_eff * (quad::tail_integral_inv(a, beta) + db1(a, beta) / 24.0);
}

OffspringDistribution OffspringDistribution::make_cauchy_family(double beta, double c,
                                                                double m_target) {
    if (!(beta > 0.0)) throw std::invalid_argument("make_cauchy_family: beta must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("make_cauchy_family: c must be > 0");
    if (!(m_target > 0.0 && m_target < 1.0))
        throw std::invalid_argument("make_cauchy_family: m_target must be in (0,1)");
    const BaseSums sums = family_base_sums(beta);
    const double s1 = c * sums.s1;
    const double s0 = c * sums.s0;
    const double theta = m_target / s1;
    if (theta * s0 > 1.0) {
        throw std::invalid_argument(
            "make_cauchy_family: infeasible m_target; maximal feasible mean is " +
            std::to_string(s1 / s0));
    }
    OffspringDistribution d;
    d.family_ = CauchyFamilyMeta{beta, c, theta, theta * c};
    d.finite_support_ = false;
    d.support_max_ = -1;
    d.pmf_.resize(kTableSize + 1);
    d.pmf_[0] = 1.0 - theta * s0;
    for (std::int64_t k = 1; k <= kTableSize; ++k)
        d.pmf_[k] = d.family_->c_eff * b2(static_cast<double>(k), beta);
    d.build_suffix_tables();

    // route-2 quadrature cache: tau(x)*x at GL nodes of the aligned width-4
    // panels [t0 + 4j, t0 + 4j + 4), t0 = log(kHeadCut + 1.5), while panel
    // start < 45 (beyond that the asymptotic series is used instead)
    const double t0 = std::log(static_cast<double>(kHeadCut) + 1.5);
    for (int j = 0; t0 + 4.0 * j < 45.0; ++j) {
        const double lo = t0 + 4.0 * j, hi = lo + 4.0;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 16; ++i) {
            for (double sgn : {1.0, -1.0}) {
                const double t = mid + sgn * half * quad::kGl32Nodes[i];
                const double x = std::exp(t);
                d.tau_cache_.push_back(d.analytic_tail(x) * x);
            }
        }
    }
    return d;
}

OffspringDistribution OffspringDistribution::from_pmf(std::vector<double> pmf) {
    if (pmf.empty()) throw std::invalid_argument("from_pmf: empty pmf");
    for (double p : pmf)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("from_pmf: entries must be finite and >= 0");
    while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();
    Accumulator total;
    for (double p : pmf) total.add(p);
    const double mass = total.value();
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("from_pmf: pmf must sum to 1 (got " +
                                    std::to_string(mass) + ")");
    for (double& p : pmf) p /= mass;
    OffspringDistribution d;
    d.pmf_ = std::move(pmf);
    d.finite_support_ = true;
    d.support_max_ = static_cast<std::int64_t>(d.pmf_.size()) - 1;
    d.build_suffix_tables();
    if (!(d.mean_ > 0.0))
        throw std::invalid_argument("from_pmf: law must put mass on k >= 1");
    if (!(d.mean_ < 1.0))
        throw std::invalid_argument("from_pmf: law must be subcritical (mean < 1, got " +
                                    std::to_string(d.mean_) + ")");
    return d;
}

void OffspringDistribution::build_suffix_tables() {
    const std::int64_t K = static_cast<std::int64_t>(pmf_.size()) - 1;
    sfx_mass_.assign(K + 2, 0.0);
    sfx_mean_.assign(K + 2, 0.0);
    Accumulator am, an;
    if (!finite_support_) {
        am.add(analytic_tail(static_cast<double>(K + 1)));
        an.add(analytic_mean_tail(static_cast<double>(K + 1)));
    }
    sfx_mass_[K + 1] = am.value();
    sfx_mean_[K + 1] = an.value();
    for (std::int64_t k = K; k >= 0; --k) {
        am.add(pmf_[k]);
        an.add(static_cast<double>(k) * pmf_[k]);
        sfx_mass_[k] = am.value();
        sfx_mean_[k] = an.value();
    }
    cum_.assign(K + 1, 0.0);
    for (std::int64_t k = 0; k <= K; ++k) {
        cum_[k] = 1.0 - sfx_mass_[k + 1];
        if (k > 0 && cum_[k] < cum_[k - 1]) cum_[k] = cum_[k - 1];
    }
    mean_ = sfx_mean_[1];
}

double OffspringDistribution::pmf(std::int64_t k) const {
    if (k < 0) throw std::domain_error("pmf: k must be >= 0");
    if (k < static_cast<std::int64_t>(pmf_.size())) return pmf_[k];
    if (!finite_support_) return analytic_pmf(static_cast<double>(k));
    return 0.0;
}

double OffspringDistribution::tail(std::int64_t k) const {
    if (k < 0) throw std::domain_error("tail: k must be >= 0");
    if (k < static_cast<std::int64_t>(sfx_mass_.size())) return sfx_mass_[k];
    if (!finite_support_) return analytic_tail(static_cast<double>(k));
    return 0.0;
}

double OffspringDistribution::mean_tail(std::int64_t k) const {
    if (k < 0) throw std::domain_error("mean_tail: k must be >= 0");
    if (k < static_cast<std::int64_t>(sfx_mean_.size())) return sfx_mean_[k];
    if (!finite_support_) return analytic_mean_tail(static_cast<double>(k));
    return 0.0;
}

double OffspringDistribution::survival_suffix(std::int64_t i) const {
    return mean_tail(i + 1) - static_cast<double>(i) * tail(i + 1);
}

double OffspringDistribution::gen_fn(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("gen_fn: s must be in [0,1]");
    if (s == 1.0) return 1.0;
    if (s > 0.9) return 1.0 - one_minus_gen_at_one_minus(1.0 - s);
    Accumulator acc;
    double sk = 1.0;
    const std::int64_t K = static_cast<std::int64_t>(pmf_.size()) - 1;
    for (std::int64_t k = 0; k <= K; ++k) {
        acc.add(pmf_[k] * sk);
        sk *= s;
        if (sfx_mass_[k + 1] * sk < 1e-18) break;
    }
    return acc.value();
}

double OffspringDistribution::laplace_pmf_tail(std::int64_t k0, double w) const {
    // sum_{k >= k0+1} mu(k) e^{up-nu k}: EM from x0 = k0 + 1/2
    const double x0 = static_cast<double>(k0) + 0.5;
    const double beta = family_->beta;
    const double ceff = family_->c_eff;
    auto g = [&](double x) { return ceff * b2(x, beta); };
    double acc = quad::laplace_log_tail(g, x0, w, 0.0);
    const double nu = (w < 700.0) ? std::exp(-w) : 0.0;
    const double nux0 = (w < 690.0) ? std::exp(-nu * x0) : 1.0;
    acc += (ceff * db2(x0, beta) - nu * g(x0)) * nux0 / 24.0;
    return acc;
}

double OffspringDistribution::laplace_survival_tail(std::int64_t k0, double w) const {
    // sum_{j >= k0+1} tail(j) e^{-nu (j-1)}: EM from x0 = k0 + 1/2, shift 1
    const double x0 = static_cast<double>(k0) + 0.5;
    const double beta = family_->beta;
    const double t0 = std::log(x0);
    const double t_end = w + std::log(45.0);
    if (t_end <= t0) return 0.0;
    const double nu = (w < 700.0) ? std::exp(-w) : 0.0;
    auto tau_x = [&](double x) { // tau(x) * x, evaluated directly
        const double a = x - 0.5;
        double t2;
        const double lnA = std::log(a);
        if (lnA >= 45.0)
            t2 = quad::exp_weighted_power_tail(lnA, beta) / a;
        else
            t2 = quad::tail_integral_inv_square(a, beta);
        return family_->c_eff * (t2 + db2(a, beta) / 24.0) * x;
    };
    double acc = 0.0;
    double t = t0;
    std::size_t cache_pos = 0;
    while (t < t_end) {
        const bool turn = t >= w - 8.0;
        const double width = turn ? 2.0 : 4.0;
        const double hi = std::min(t + width, t_end);
        const double mid = 0.5 * (t + hi), half = 0.5 * (hi - t);
        double panel = 0.0;
        const bool cached = !turn && hi == t + 4.0 && cache_pos + 32 <= tau_cache_.size();
        for (int i = 0; i < 16; ++i) {
            int sidx = 0;
            for (double sgn : {1.0, -1.0}) {
                const double tt = mid + sgn * half * quad::kGl32Nodes[i];
                double gx;
                if (cached) {
                    gx = tau_cache_[cache_pos + 2 * i + sidx];
                } else if (tt >= 45.7) { // x - 1/2 safely in series range
                    const double x = std::exp(tt);
                    const double a = x - 0.5;
                    const double lnA = std::log(a);
                    gx = family_->c_eff *
                         (quad::exp_weighted_power_tail(lnA, beta) / a + db2(a, beta) / 24.0) * x;
                } else {
                    gx = tau_x(std::exp(tt));
                }
                const double ex = std::exp(tt - w);
                panel += quad::kGl32Weights[i] * gx * std::exp(-ex + nu);
                ++sidx;
            }
        }
        acc += panel * half;
        if (cached) cache_pos += 32;
        else if (!turn && hi == t + 4.0) cache_pos += 32; // aligned but past cache
        t = hi;
    }
    // EM correction: d/dx [tau(x) e^{-nu(x-1)}] at x0
    const double a0 = x0 - 0.5;
    const double tau0 = family_->c_eff *
                        (quad::tail_integral_inv_square(a0, beta) + db2(a0, beta) / 24.0);
    const double dtau0 = -family_->c_eff * b2(a0, beta);
    const double nux0 = (w < 690.0) ? std::exp(-nu * (x0 - 1.0)) : 1.0;
    acc += (dtau0 - nu * tau0) * nux0 / 24.0;
    return acc;
}

double OffspringDistribution::one_minus_gen_at_one_minus(double q) const {
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("one_minus_gen_at_one_minus: q must be in (0,1]");
    const double ln1mq = std::log1p(-q); // -inf at q = 1
    const double nu = -ln1mq;
    const std::int64_t B = finite_support_ ? support_max_ : kHeadCut;
    std::int64_t kcut = B + 1;
    if (nu > 0.0 && 45.0 / nu <= static_cast<double>(B))
        kcut = static_cast<std::int64_t>(std::ceil(45.0 / nu));
    if (kcut < 1) kcut = 1;
    Accumulator acc;
    for (std::int64_t k = 1; k < kcut; ++k)
        acc.add(pmf_[k] * (-std::expm1(static_cast<double>(k) * ln1mq)));
    if (kcut <= B) {
        acc.add(sfx_mass_[kcut]); // ramp complete from kcut on
    } else if (!finite_support_) {
        acc.add(tail(B + 1));
        acc.add(-laplace_pmf_tail(B, -std::log(nu)));
    }
    return acc.value();
}

double OffspringDistribution::ell(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("ell: q must be in (0,1]");
    const double ln1mq = std::log1p(-q);
    const double nu = -ln1mq;
    const std::int64_t B = finite_support_ ? support_max_ - 1 : kHeadCut;
    std::int64_t kcut = B + 1;
    if (nu > 0.0 && 45.0 / nu <= static_cast<double>(B))
        kcut = static_cast<std::int64_t>(std::ceil(45.0 / nu));
    if (kcut < 1) kcut = 1;
    Accumulator acc;
    for (std::int64_t k = 1; k < kcut; ++k)
        acc.add(sfx_mass_[k + 1] * (-std::expm1(static_cast<double>(k) * ln1mq)));
    if (kcut <= B) {
        acc.add(survival_suffix(kcut));
    } else if (!finite_support_) {
        acc.add(survival_suffix(B + 1));
        acc.add(-laplace_survival_tail(B + 1, -std::log(nu)));
    }
    return acc.value();
}

double OffspringDistribution::ell_log(double w) const {
    if (!(w >= 0.0)) throw std::domain_error("ell_log: w must be >= 0");
    if (w <= 680.0) return ell(std::exp(-w));
    if (finite_support_) return 0.0; // ell(q) ~ q * sum k tail(k+1): below 1e-280
    // head is exponentially negligible relative to ell ~ c_eff / w^beta
    return survival_suffix(kHeadCut + 1) - laplace_survival_tail(kHeadCut + 1, w);
}

OffspringDistribution OffspringDistribution::tilt(double lambda) const {
    if (!(lambda > 0.0)) throw std::domain_error("tilt: lambda must be > 0");
    if (lambda == 1.0) return *this;
    if (!finite_support_ && lambda > 1.0)
        throw std::domain_error("tilt: lambda must be in (0,1] for the cauchy family");
    double glam;
    if (lambda <= 1.0) {
        glam = gen_fn(lambda);
    } else {
        // finite support: evaluate the polynomial directly
        Accumulator acc;
        double lk = 1.0;
        for (std::int64_t k = 0; k <= support_max_; ++k) {
            acc.add(pmf_[k] * lk);
            lk *= lambda;
        }
        glam = acc.value();
    }
    std::int64_t cut;
    if (finite_support_) {
        cut = support_max_;
    } else {
        cut = 8;
        const double llam = std::log(lambda);
        while (tail(cut + 1) * std::exp(static_cast<double>(cut + 1) * llam) / glam > 1e-18) {
            cut *= 2;
            if (cut > (std::int64_t{1} << 22))
                throw std::invalid_argument("tilt: lambda too close to 1 for an exact table");
        }
    }
    std::vector<double> out(static_cast<std::size_t>(cut) + 1);
    double lk = 1.0;
    for (std::int64_t k = 0; k <= cut; ++k) {
        out[static_cast<std::size_t>(k)] = pmf(k) * lk / glam;
        lk *= lambda;
    }
    return from_pmf(std::move(out));
}

std::int64_t OffspringDistribution::sample(Rng& rng) const {
    const double u = rng.u01();
    if (u < cum_.back()) {
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        return static_cast<std::int64_t>(it - cum_.begin());
    }
    if (finite_support_) return support_max_;
    // invert the analytic tail: smallest k with tail(k+1) < 1 - u
    const double r = 1.0 - u;
    std::int64_t lo = static_cast<std::int64_t>(cum_.size()); // first k beyond table
    std::int64_t hi = lo;
    while (analytic_tail(static_cast<double>(hi + 1)) >= r) {
        hi *= 2;
        if (hi > (std::int64_t{1} << 62) / 2) break;
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (analytic_tail(static_cast<double>(mid + 1)) < r)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

OffspringDistribution::NlognClass OffspringDistribution::nlogn_classification() const {
    if (family_) return family_->beta > 1.0 ? NlognClass::convergent : NlognClass::divergent;
    if (finite_support_) return NlognClass::convergent;
    return NlognClass::unknown;
}

std::vector<std::pair<std::int64_t, double>> OffspringDistribution::nlogn_partial_sums() const {
    const std::int64_t cutoffs[] = {100, 1000, 10000, 100000, 1000000};
    std::vector<std::pair<std::int64_t, double>> out;
    Accumulator acc;
    std::int64_t k = 2;
    for (std::int64_t cut : cutoffs) {
        const std::int64_t stop =
            finite_support_ ? std::min(cut, support_max_) : cut;
        for (; k <= stop; ++k)
            acc.add(static_cast<double>(k) * std::log(static_cast<double>(k)) * pmf(k));
        out.emplace_back(cut, acc.value());
    }
    return out;
}

OffspringDistribution OffspringDistribution::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "cauchy") {
        return make_cauchy_family(j.at("beta").get<double>(), j.at("c").get<double>(),
                                  j.at("m").get<double>());
    }
    if (fam == "table") {
        return from_pmf(j.at("pmf").get<std::vector<double>>());
    }
    throw std::invalid_argument("from_json_text: unknown family '" + fam + "'");
}

std::string OffspringDistribution::to_json_text() const {
    nlohmann::json j;
    if (family_) {
        j["family"] = "cauchy";
        j["beta"] = family_->beta;
        j["c"] = family_->c;
        j["m"] = mean_;
    } else {
        j["family"] = "table";
        j["pmf"] = pmf_;
    }
    return j.dump();
}

} // namespace cbt
