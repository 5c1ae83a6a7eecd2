#include "cbt/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cbt {

double ell_star(const OffspringDistribution& d, std::int64_t n) {
    if (n < 1) throw std::domain_error("ell_star: n must be >= 1");
    return d.mean_tail(n);
}

std::int64_t scaling_a(const OffspringDistribution& d, std::int64_t n) {
    if (n < 1) throw std::domain_error("scaling_a: n must be >= 1");
    const double nd = static_cast<double>(n);
    if (nd * d.tail(2) <= 1.0) return 1;
    std::int64_t lo = 1, hi = 2;
    while (nd * d.tail(hi + 1) > 1.0) {
        hi *= 2;
        if (hi > (std::int64_t{1} << 60))
            throw std::runtime_error("scaling_a: tail does not decay");
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (nd * d.tail(mid + 1) <= 1.0)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double centering_b(const OffspringDistribution& d, std::int64_t n) {
    if (n < 1) throw std::domain_error("centering_b: n must be >= 1");
    const std::int64_t a = scaling_a(d, n);
    // sum_{i=-1}^{a} i mu_{i+1} = (m - ell*(a+2)) - (1 - tail(a+2))
    return static_cast<double>(n) *
           (d.mean() - 1.0 - d.mean_tail(a + 2) + d.tail(a + 2));
}

SequenceTable lemma1_report(const OffspringDistribution& d,
                            const std::vector<std::int64_t>& n_values) {
    if (n_values.empty()) throw std::invalid_argument("lemma1_report: empty n grid");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("lemma1_report: n grid must be strictly increasing");
    SequenceTable t;
    t.rows.reserve(n_values.size());
    for (std::int64_t n : n_values) {
        SequenceRow r;
        r.n = n;
        r.a_n = scaling_a(d, n);
        r.b_n = centering_b(d, n);
        r.ell_star_n = ell_star(d, n);
        r.ell_star_a_n = ell_star(d, r.a_n);
        const double L_n = static_cast<double>(n) * static_cast<double>(n) * d.pmf(n);
        r.L_over_ellstar = r.ell_star_n > 0.0 ? L_n / r.ell_star_n : 0.0;
        r.a_over_n = static_cast<double>(r.a_n) / static_cast<double>(n);
        t.rows.push_back(r);
    }
    t.ellstar_decreasing = true;
    t.L_over_ellstar_decreasing = true;
    t.a_over_n_decreasing = true;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        if (!(t.rows[i].ell_star_n < t.rows[i - 1].ell_star_n)) t.ellstar_decreasing = false;
        if (!(t.rows[i].L_over_ellstar < t.rows[i - 1].L_over_ellstar))
            t.L_over_ellstar_decreasing = false;
        if (!(t.rows[i].a_over_n < t.rows[i - 1].a_over_n)) t.a_over_n_decreasing = false;
    }
    if (d.finite_support() && t.rows.back().ell_star_n == 0.0) {
        t.finite_support_degenerate = true;
        t.ellstar_decreasing = false;
        t.L_over_ellstar_decreasing = false;
    }
    return t;
}

std::string sequence_table_csv(const SequenceTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "n,a_n,b_n,ell_star_n,ell_star_a_n,L_over_ellstar,a_over_n\n";
    for (const auto& r : table.rows) {
        os << r.n << ',' << r.a_n << ',' << r.b_n << ',' << r.ell_star_n << ','
           << r.ell_star_a_n << ',' << r.L_over_ellstar << ',' << r.a_over_n << '\n';
    }
    return os.str();
}

} // namespace cbt
