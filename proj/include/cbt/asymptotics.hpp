#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbt/offspring.hpp"

namespace cbt {

// Per-n row of the scaling/centering report.
struct SequenceRow {
    std::int64_t n = 0;
    std::int64_t a_n = 0;
    double b_n = 0.0;
    double ell_star_n = 0.0;
    double ell_star_a_n = 0.0;
    double L_over_ellstar = 0.0; // L(n)/ell*(n), L(n) = n^2 mu_n
    double a_over_n = 0.0;
};

struct SequenceTable {
    std::vector<SequenceRow> rows;
    // trend flags over the supplied n grid
    bool ellstar_decreasing = false;
    bool L_over_ellstar_decreasing = false;
    bool a_over_n_decreasing = false;
    bool finite_support_degenerate = false; // ell* eventually exactly 0
};

// ell*(n) = sum_{k>=n} L(k)/k with L(k) = k^2 mu_k taken exactly,
// i.e. sum_{k>=n} k mu_k.
double ell_star(const OffspringDistribution& d, std::int64_t n);

// a_n = min{ a >= 1 : n P(X >= a) <= 1 },  P(X >= a) = mu([a+1, inf)).
std::int64_t scaling_a(const OffspringDistribution& d, std::int64_t n);

// b_n = n E[X 1_{|X| <= a_n}] with P(X = i) = mu_{i+1}.
double centering_b(const OffspringDistribution& d, std::int64_t n);

SequenceTable lemma1_report(const OffspringDistribution& d,
                            const std::vector<std::int64_t>& n_values);

std::string sequence_table_csv(const SequenceTable& table);

} // namespace cbt
