#include "cbt/walk.hpp"

#include <algorithm>

namespace cbt {

JumpVector sample_iid_jumps(const OffspringDistribution& d, std::int64_t n, Rng& rng) {
    if (n < 1) throw std::domain_error("sample_iid_jumps: n must be >= 1");
    JumpVector v;
    v.inc.resize(static_cast<std::size_t>(n));
    for (auto& x : v.inc) x = d.sample(rng) - 1;
    return v;
}

JumpVector sample_bridge_exact(const OffspringDistribution& d, std::int64_t n, Rng& rng,
                               std::uint64_t max_elementary_draws,
                               RejectionReport* report) {
    if (n < 1) throw std::domain_error("sample_bridge_exact: n must be >= 1");
    JumpVector v;
    v.inc.resize(static_cast<std::size_t>(n));
    std::uint64_t tries = 0, draws = 0;
    for (;;) {
        if (draws + static_cast<std::uint64_t>(n) > max_elementary_draws)
            throw BridgeBudgetExhausted(tries, draws);
        ++tries;
        std::int64_t s = 0;
        for (auto& x : v.inc) {
            x = d.sample(rng) - 1;
            s += x;
        }
        draws += static_cast<std::uint64_t>(n);
        if (s == -1) break;
    }
    if (report) {
        report->tries = tries;
        report->draws = draws;
    }
    return v;
}

JumpVector sample_bridge_planted(const OffspringDistribution& d, std::int64_t n, Rng& rng,
                                 PlantedReport* report) {
    if (n < 2) throw std::domain_error("sample_bridge_planted: n must be >= 2");
    JumpVector v;
    v.inc.resize(static_cast<std::size_t>(n));
    std::uint64_t redraws = 0;
    for (;;) {
        std::int64_t s = 0;
        for (std::int64_t i = 0; i + 1 < n; ++i) {
            v.inc[static_cast<std::size_t>(i)] = d.sample(rng) - 1;
            s += v.inc[static_cast<std::size_t>(i)];
        }
        const std::int64_t balance = -1 - s;
        if (balance >= -1) {
            const auto pos = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
            // insert the balancing jump at pos, shifting the suffix right
            for (std::size_t i = static_cast<std::size_t>(n) - 1; i > pos; --i)
                v.inc[i] = v.inc[i - 1];
            v.inc[pos] = balance;
            if (report) {
                report->redraws = redraws;
                report->balancing_jump = static_cast<double>(balance);
                report->position_1based = static_cast<std::int64_t>(pos) + 1;
            }
            return v;
        }
        ++redraws;
    }
}

std::vector<std::int64_t> vervaat(const JumpVector& bridge) {
    if (!bridge.is_bridge())
        throw std::invalid_argument("vervaat: input must sum to -1");
    const auto& x = bridge.inc;
    const std::size_t n = x.size();
    std::int64_t s = 0, min_s = 0;
    std::size_t min_pos = 0; // 1-based index of the first prefix-sum minimum
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i];
        if (s < min_s) {
            min_s = s;
            min_pos = i + 1;
        }
    }
    std::vector<std::int64_t> out;
    out.reserve(n);
    for (std::size_t i = min_pos; i < n; ++i) out.push_back(x[i]);
    for (std::size_t i = 0; i < min_pos; ++i) out.push_back(x[i]);
#ifndef NDEBUG
    if (!is_excursion(out))
        throw std::logic_error("vervaat: rotation did not produce an excursion");
#endif
    return out;
}

BigJumpSplit big_jump_split(const JumpVector& jumps) {
    if (jumps.inc.empty()) throw std::domain_error("big_jump_split: n must be >= 1");
    const auto it = std::max_element(jumps.inc.begin(), jumps.inc.end());
    BigJumpSplit out;
    out.v_index_1based = static_cast<std::int64_t>(it - jumps.inc.begin()) + 1;
    out.max_jump = *it;
    out.rest.inc.reserve(jumps.inc.size() - 1);
    for (auto jt = jumps.inc.begin(); jt != jumps.inc.end(); ++jt)
        if (jt != it) out.rest.inc.push_back(*jt);
    return out;
}

bool is_excursion(std::span<const std::int64_t> inc) {
    if (inc.empty()) return false;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        if (inc[i] < -1) return false;
        s += inc[i];
        if (i + 1 < inc.size() && s < 0) return false;
    }
    return s == -1;
}

} // namespace cbt
