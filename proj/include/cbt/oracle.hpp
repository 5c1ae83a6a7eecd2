#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cbt/offspring.hpp"
#include "cbt/tree.hpp"
#include "cbt/walk.hpp"

namespace cbt::oracle {

// canonical integer encoding of a statistic value (scalar or vector)
using LawKey = std::vector<std::int64_t>;

struct ExactLaw {
    std::vector<std::pair<LawKey, double>> atoms; // sorted by key
    double total = 0.0;            // mass before normalization
    double truncation_error = 0.0; // bound on mass lost to degree caps
    bool normalized = false;
};

using TreeStatistic = std::function<LawKey(const PlaneTree&)>;
using VectorStatistic = std::function<LawKey(std::span<const std::int64_t>)>;

TreeStatistic tree_stat_identity();
TreeStatistic tree_stat_delta();
TreeStatistic tree_stat_delta2();
TreeStatistic tree_stat_h_delta();
TreeStatistic tree_stat_height();
VectorStatistic vec_stat_identity();
VectorStatistic vec_stat_sum();
VectorStatistic vec_stat_max();

// All Lukasiewicz-valid outdegree sequences of length n with outdegrees <= cap,
// weighted by prod mu_k. Keys are the outdegree sequences.
ExactLaw enumerate_trees(const OffspringDistribution& d, std::int64_t n, std::int64_t cap);

// Pushforward of the normalized size-n conditioned law under a statistic.
ExactLaw conditioned_law(const OffspringDistribution& d, std::int64_t n,
                         const TreeStatistic& stat, std::int64_t cap);

// Exact law of a statistic of (X_1..X_n) given W_n = -1 (jumps <= cap-1).
ExactLaw bridge_law(const OffspringDistribution& d, std::int64_t n,
                    const VectorStatistic& stat, std::int64_t cap);

// Same for the de-maximized vector (first maximal jump removed).
ExactLaw demax_law(const OffspringDistribution& d, std::int64_t n,
                   const VectorStatistic& stat, std::int64_t cap);

// Exact law of the sum of `count` iid jumps with jump values <= cap-1.
ExactLaw iid_sum_law(const OffspringDistribution& d, std::int64_t count, std::int64_t cap);

// P(W_n = -1) by exact convolution; jump values capped at cap-1
// (cap < 0: no cap beyond the structural bound max jump <= n-2).
double bridge_probability_dp(const OffspringDistribution& d, std::int64_t n,
                             std::int64_t cap = -1);

// Exact law of max(X_1..X_n) given W_n = -1. No truncation: a bridge jump
// never exceeds n-2.
ExactLaw bridge_max_law_dp(const OffspringDistribution& d, std::int64_t n);

ExactLaw normalize(ExactLaw law);

// 1/2 sum |p - q| over the union support of two normalized laws.
double exact_tv(const ExactLaw& a, const ExactLaw& b);

} // namespace cbt::oracle
