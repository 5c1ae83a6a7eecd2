#include "cbt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cbt::oracle {

TreeStatistic tree_stat_identity() {
    return [](const PlaneTree& t) { return t.outdeg; };
}
TreeStatistic tree_stat_delta() {
    return [](const PlaneTree& t) { return LawKey{stats(t).delta}; };
}
TreeStatistic tree_stat_delta2() {
    return [](const PlaneTree& t) { return LawKey{stats(t).delta2}; };
}
TreeStatistic tree_stat_h_delta() {
    return [](const PlaneTree& t) { return LawKey{stats(t).h_delta}; };
}
TreeStatistic tree_stat_height() {
    return [](const PlaneTree& t) { return LawKey{stats(t).height}; };
}
VectorStatistic vec_stat_identity() {
    return [](std::span<const std::int64_t> x) { return LawKey(x.begin(), x.end()); };
}
VectorStatistic vec_stat_sum() {
    return [](std::span<const std::int64_t> x) {
        std::int64_t s = 0;
        for (auto v : x) s += v;
        return LawKey{s};
    };
}
VectorStatistic vec_stat_max() {
    return [](std::span<const std::int64_t> x) {
        std::int64_t m = x.empty() ? 0 : *std::max_element(x.begin(), x.end());
        return LawKey{m};
    };
}

namespace {

using AtomMap = std::map<LawKey, double>;

ExactLaw flatten(AtomMap&& m, double truncation_error) {
    ExactLaw law;
    law.atoms.reserve(m.size());
    double total = 0.0;
    for (auto& [k, p] : m) {
        total += p;
        law.atoms.emplace_back(k, p);
    }
    law.total = total;
    law.truncation_error = truncation_error;
    return law;
}

void enumerate_trees_rec(const OffspringDistribution& d, std::int64_t n, std::int64_t cap,
                         std::int64_t t, std::int64_t prefix_sum, double weight,
                         std::vector<std::int64_t>& outdeg, AtomMap& acc) {
    if (t == n - 1) {
        // last vertex: prefix must be 0 and the outdegree 0
        if (prefix_sum == 0) {
            outdeg.push_back(0);
            acc[outdeg] += weight * d.pmf(0);
            outdeg.pop_back();
        }
        return;
    }
    const std::int64_t remaining = n - t - 1; // steps after this one
    // increment x = k-1 must keep strict prefixes >= 0 and stay reachable:
    // prefix + x <= remaining - 1
    const std::int64_t k_lo = std::max<std::int64_t>(0, 1 - prefix_sum);
    const std::int64_t k_hi = std::min(cap, remaining - prefix_sum);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double p = d.pmf(k);
        if (p == 0.0) continue;
        outdeg.push_back(k);
        enumerate_trees_rec(d, n, cap, t + 1, prefix_sum + k - 1, weight * p, outdeg, acc);
        outdeg.pop_back();
    }
}

} // namespace

ExactLaw enumerate_trees(const OffspringDistribution& d, std::int64_t n, std::int64_t cap) {
    if (n < 1 || n > 12) throw std::invalid_argument("enumerate_trees: need 1 <= n <= 12");
    if (cap < 0) throw std::invalid_argument("enumerate_trees: cap must be >= 0");
    AtomMap acc;
    std::vector<std::int64_t> outdeg;
    outdeg.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        acc[LawKey{0}] = d.pmf(0);
    } else {
        enumerate_trees_rec(d, n, cap, 0, 0, 1.0, outdeg, acc);
    }
    const bool capped = cap < n - 1 && (!d.finite_support() || cap < d.support_max());
    const double trunc =
        capped ? static_cast<double>(n) * d.tail(cap + 1) : 0.0;
    return flatten(std::move(acc), trunc);
}

ExactLaw conditioned_law(const OffspringDistribution& d, std::int64_t n,
                         const TreeStatistic& stat, std::int64_t cap) {
    ExactLaw trees = enumerate_trees(d, n, cap);
    if (trees.total <= 0.0)
        throw std::invalid_argument("conditioned_law: conditioning event has zero mass");
    AtomMap acc;
    PlaneTree t;
    for (auto& [key, p] : trees.atoms) {
        t.outdeg = key;
        acc[stat(t)] += p;
    }
    ExactLaw law = flatten(std::move(acc), trees.truncation_error);
    const double z = law.total;
    for (auto& [k, p] : law.atoms) p /= z;
    law.normalized = true;
    return law;
}

namespace {

void bridge_enum_rec(const OffspringDistribution& d, std::int64_t n, std::int64_t jump_cap,
                     std::int64_t t, std::int64_t sum, double weight,
                     std::vector<std::int64_t>& x, const VectorStatistic& stat,
                     bool demax, AtomMap& acc, std::vector<std::int64_t>& scratch) {
    if (t == n) {
        if (sum != -1) return;
        if (demax) {
            const auto it = std::max_element(x.begin(), x.end());
            scratch.clear();
            for (auto jt = x.begin(); jt != x.end(); ++jt)
                if (jt != it) scratch.push_back(*jt);
            acc[stat(scratch)] += weight;
        } else {
            acc[stat(x)] += weight;
        }
        return;
    }
    const std::int64_t remaining = n - t - 1;
    // reachability: sum + j - remaining <= -1 <= sum + j + remaining*jump_cap
    for (std::int64_t j = -1; j <= jump_cap; ++j) {
        const std::int64_t s2 = sum + j;
        if (s2 - remaining > -1) break; // j increasing: once unreachable, always
        if (s2 + remaining * jump_cap < -1) continue;
        const double p = d.pmf(j + 1);
        if (p == 0.0) continue;
        x.push_back(j);
        bridge_enum_rec(d, n, jump_cap, t + 1, s2, weight * p, x, stat, demax, acc, scratch);
        x.pop_back();
    }
}

ExactLaw bridge_enum(const OffspringDistribution& d, std::int64_t n,
                     const VectorStatistic& stat, std::int64_t cap, bool demax) {
    if (n < 1) throw std::invalid_argument("bridge law: n must be >= 1");
    if (cap < 1) throw std::invalid_argument("bridge law: cap must be >= 1");
    const double states = std::pow(static_cast<double>(cap) + 1.0, static_cast<double>(n));
    if (states > 1e8)
        throw std::invalid_argument("bridge law: state space exceeds 1e8, refuse");
    const std::int64_t jump_cap = cap - 1;
    AtomMap acc;
    std::vector<std::int64_t> x, scratch;
    x.reserve(static_cast<std::size_t>(n));
    bridge_enum_rec(d, n, jump_cap, 0, 0, 1.0, x, stat, demax, acc, scratch);
    ExactLaw law = flatten(std::move(acc), static_cast<double>(n) * d.tail(cap + 1));
    if (law.total <= 0.0)
        throw std::invalid_argument("bridge law: conditioning event has zero mass");
    const double z = law.total;
    for (auto& [k, p] : law.atoms) p /= z;
    law.normalized = true;
    return law;
}

} // namespace

ExactLaw bridge_law(const OffspringDistribution& d, std::int64_t n,
                    const VectorStatistic& stat, std::int64_t cap) {
    return bridge_enum(d, n, stat, cap, false);
}

ExactLaw demax_law(const OffspringDistribution& d, std::int64_t n,
                   const VectorStatistic& stat, std::int64_t cap) {
    return bridge_enum(d, n, stat, cap, true);
}

ExactLaw iid_sum_law(const OffspringDistribution& d, std::int64_t count, std::int64_t cap) {
    if (count < 0) throw std::invalid_argument("iid_sum_law: count must be >= 0");
    const std::int64_t jump_cap = cap - 1;
    // law over sums, offset so index 0 <=> sum = -count
    std::vector<double> cur{1.0};
    std::int64_t lo = 0;
    for (std::int64_t step = 0; step < count; ++step) {
        std::vector<double> next(cur.size() + static_cast<std::size_t>(jump_cap + 1), 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0.0) continue;
            for (std::int64_t j = -1; j <= jump_cap; ++j)
                next[i + static_cast<std::size_t>(j + 1)] += cur[i] * d.pmf(j + 1);
        }
        cur = std::move(next);
        lo -= 1;
    }
    ExactLaw law;
    double total = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        if (cur[i] == 0.0) continue;
        law.atoms.emplace_back(LawKey{lo + static_cast<std::int64_t>(i)}, cur[i]);
        total += cur[i];
    }
    law.total = total;
    // renormalize over the capped support so it is a probability law
    for (auto& [k, p] : law.atoms) p /= total;
    law.normalized = true;
    law.truncation_error = static_cast<double>(count) * d.tail(cap + 1);
    return law;
}

double bridge_probability_dp(const OffspringDistribution& d, std::int64_t n,
                             std::int64_t cap) {
    if (n < 1) throw std::invalid_argument("bridge_probability_dp: n must be >= 1");
    const std::int64_t jump_cap = (cap < 0) ? n - 2 : std::min(cap - 1, n - 2);
    // sums tracked in [-t, n]: anything above n - t - 1 cannot return to -1
    const std::int64_t width = 2 * n + 2;
    std::vector<double> cur(static_cast<std::size_t>(width), 0.0);
    const std::int64_t off = n; // index = sum + off
    cur[static_cast<std::size_t>(off)] = 1.0;
    for (std::int64_t t = 0; t < n; ++t) {
        std::vector<double> next(static_cast<std::size_t>(width), 0.0);
        const std::int64_t rem = n - t - 1;
        for (std::int64_t s = -t; s <= n; ++s) {
            const double p = cur[static_cast<std::size_t>(s + off)];
            if (p == 0.0) continue;
            for (std::int64_t j = -1; j <= jump_cap; ++j) {
                const std::int64_t s2 = s + j;
                if (s2 - rem > -1) break;
                if (s2 < -n) continue;
                next[static_cast<std::size_t>(s2 + off)] += p * d.pmf(j + 1);
            }
        }
        cur = std::move(next);
    }
    return cur[static_cast<std::size_t>(-1 + off)];
}

ExactLaw bridge_max_law_dp(const OffspringDistribution& d, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("bridge_max_law_dp: n must be >= 1");
    ExactLaw law;
    double prev = 0.0;
    std::vector<double> F(static_cast<std::size_t>(n), 0.0); // F[d+1] = P(W_n=-1, all <= d)
    for (std::int64_t dmax = -1; dmax <= n - 2; ++dmax)
        F[static_cast<std::size_t>(dmax + 1)] = bridge_probability_dp(d, n, dmax + 1);
    const double total = F[static_cast<std::size_t>(n - 1)];
    if (total <= 0.0)
        throw std::invalid_argument("bridge_max_law_dp: conditioning event has zero mass");
    for (std::int64_t dmax = -1; dmax <= n - 2; ++dmax) {
        const double mass = F[static_cast<std::size_t>(dmax + 1)] - prev;
        prev = F[static_cast<std::size_t>(dmax + 1)];
        if (mass > 0.0) law.atoms.emplace_back(LawKey{dmax}, mass / total);
    }
    law.total = total; // unnormalized bridge probability, kept for cross-checks
    law.normalized = true;
    return law;
}

ExactLaw normalize(ExactLaw law) {
    if (law.normalized) return law;
    if (law.total <= 0.0) throw std::invalid_argument("normalize: zero total mass");
    for (auto& [k, p] : law.atoms) p /= law.total;
    law.normalized = true;
    return law;
}

double exact_tv(const ExactLaw& a, const ExactLaw& b) {
    if (!a.normalized || !b.normalized)
        throw std::invalid_argument("exact_tv: laws must be normalized");
    double acc = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.atoms.size() || j < b.atoms.size()) {
        if (j == b.atoms.size() ||
            (i < a.atoms.size() && a.atoms[i].first < b.atoms[j].first)) {
            acc += std::abs(a.atoms[i].second);
            ++i;
        } else if (i == a.atoms.size() || b.atoms[j].first < a.atoms[i].first) {
            acc += std::abs(b.atoms[j].second);
            ++j;
        } else {
            acc += std::abs(a.atoms[i].second - b.atoms[j].second);
            ++i;
            ++j;
        }
    }
    return 0.5 * acc;
}

} // namespace cbt::oracle
