#include "cbt/tree.hpp"

#include <stdexcept>

namespace cbt {

PlaneTree decode(std::span<const std::int64_t> excursion) {
    if (!is_excursion(excursion))
        throw std::invalid_argument("decode: input is not a Lukasiewicz excursion");
    PlaneTree t;
    t.outdeg.reserve(excursion.size());
    for (auto v : excursion) t.outdeg.push_back(v + 1);
    return t;
}

std::vector<std::int64_t> encode(const PlaneTree& tree) {
    std::vector<std::int64_t> out;
    out.reserve(tree.outdeg.size());
    for (auto k : tree.outdeg) out.push_back(k - 1);
    return out;
}

TreeStats stats(const PlaneTree& tree) {
    const std::int64_t n = tree.size();
    if (n == 0) throw std::invalid_argument("stats: empty tree");
    TreeStats s;
    s.n = n;
    std::vector<std::int64_t> remaining; // children left to visit per open ancestor
    remaining.reserve(64);
    std::int64_t best = -1, second = -1;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t depth = static_cast<std::int64_t>(remaining.size());
        if (i > 0 && depth == 0)
            throw std::invalid_argument("stats: outdegree sequence is not a valid tree");
        const std::int64_t k = tree.outdeg[static_cast<std::size_t>(i)];
        if (depth > s.height) s.height = depth;
        if (k > best) {
            second = best;
            best = k;
            s.star_index = i;
            s.h_delta = depth;
        } else if (k > second) {
            second = k;
        }
        if (k > 0) {
            remaining.push_back(k);
        } else {
            while (!remaining.empty()) {
                if (--remaining.back() == 0)
                    remaining.pop_back();
                else
                    break;
            }
        }
    }
    if (!remaining.empty())
        throw std::invalid_argument("stats: outdegree sequence is not a valid tree");
    s.delta = best;
    s.delta2 = (n == 1) ? 0 : std::max<std::int64_t>(second, 0);
    return s;
}

namespace {

// [start, end) extent of the subtree rooted at DFS position start
std::size_t subtree_end(const PlaneTree& t, std::size_t start) {
    std::int64_t bal = 0;
    std::size_t q = start;
    do {
        bal += t.outdeg[q] - 1;
        ++q;
    } while (bal != -1);
    return q;
}

} // namespace

std::vector<PlaneTree> graft_forest(const PlaneTree& tree, std::int64_t j, std::int64_t k) {
    if (j < 1 || k < j) throw std::invalid_argument("graft_forest: need 1 <= j <= k");
    const TreeStats s = stats(tree);
    std::vector<PlaneTree> out;
    out.reserve(static_cast<std::size_t>(k - j + 1));
    std::size_t pos = static_cast<std::size_t>(s.star_index) + 1;
    for (std::int64_t child = 1; child <= k; ++child) {
        if (child > s.delta) {
            if (child >= j) out.emplace_back(); // empty tree beyond delta
            continue;
        }
        const std::size_t end = subtree_end(tree, pos);
        if (child >= j) {
            PlaneTree sub;
            sub.outdeg.assign(tree.outdeg.begin() + static_cast<std::ptrdiff_t>(pos),
                              tree.outdeg.begin() + static_cast<std::ptrdiff_t>(end));
            out.push_back(std::move(sub));
        }
        pos = end;
    }
    return out;
}

std::int64_t forest_height(std::span<const PlaneTree> forest) {
    std::int64_t h = 0;
    for (const auto& t : forest)
        if (!t.empty()) h = std::max(h, stats(t).height);
    return h;
}

std::int64_t star_forest_height(const PlaneTree& tree) {
    const TreeStats s = stats(tree);
    if (s.delta == 0) return 0;
    const auto forest = graft_forest(tree, 1, s.delta);
    return forest_height(forest);
}

} // namespace cbt
