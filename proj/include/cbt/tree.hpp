#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbt/walk.hpp"

namespace cbt {

// Plane tree stored as its depth-first outdegree sequence. No linked
// structure: O(n) memory and single-pass statistics.
struct PlaneTree {
    std::vector<std::int64_t> outdeg;
    std::int64_t size() const { return static_cast<std::int64_t>(outdeg.size()); }
    bool empty() const { return outdeg.empty(); }
};

struct TreeStats {
    std::int64_t n = 0;
    std::int64_t delta = 0;      // maximum outdegree
    std::int64_t delta2 = 0;     // max outdegree after removing one occurrence of the max
    std::int64_t h_delta = 0;    // height of the first max-outdegree vertex (DFS order)
    std::int64_t height = 0;
    std::int64_t star_index = 0; // 0-based DFS index of u_star
};

// Lukasiewicz decoding: outdegrees are increments + 1 in depth-first order.
PlaneTree decode(std::span<const std::int64_t> excursion);
std::vector<std::int64_t> encode(const PlaneTree& tree);

TreeStats stats(const PlaneTree& tree);

// Subtrees rooted at children j..k (1-based) of u_star; empty trees for
// indices beyond delta.
std::vector<PlaneTree> graft_forest(const PlaneTree& tree, std::int64_t j, std::int64_t k);

// Height of a forest: max over components, 0 for an empty forest.
std::int64_t forest_height(std::span<const PlaneTree> forest);

// H_star: height of the forest of all subtrees hanging from u_star.
std::int64_t star_forest_height(const PlaneTree& tree);

} // namespace cbt
