#include "cbt/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cbt::emit {

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr int kW = 640, kH = 400, kPad = 50;

double xmap(double x, double lo, double hi) {
    return kPad + (x - lo) / (hi - lo) * (kW - 2 * kPad);
}
double ymap(double y, double hi) {
    return kH - kPad - y / hi * (kH - 2 * kPad);
}

void svg_header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
}

} // namespace

HistogramSpec make_histogram(const std::string& title, const std::vector<double>& samples,
                             int bins) {
    if (samples.empty() || bins < 1) throw std::invalid_argument("make_histogram: bad input");
    HistogramSpec h;
    h.title = title;
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn, hi = *mx;
    if (hi == lo) hi = lo + 1.0;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0.0);
    for (double x : samples) {
        auto b = static_cast<std::int64_t>((x - lo) / (hi - lo) * bins);
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        h.counts[static_cast<std::size_t>(b)] += 1.0;
    }
    return h;
}

std::string svg_histogram(const HistogramSpec& spec) {
    if (spec.edges.size() != spec.counts.size() + 1 || spec.counts.empty())
        throw std::invalid_argument("svg_histogram: inconsistent spec");
    std::ostringstream os;
    os.precision(12);
    svg_header(os, spec.title);
    const double xlo = spec.edges.front(), xhi = spec.edges.back();
    double cmax = 1.0;
    for (double c : spec.counts) cmax = std::max(cmax, c);
    for (double y : spec.overlay_y) cmax = std::max(cmax, y);
    for (std::size_t i = 0; i < spec.counts.size(); ++i) {
        const double x0 = xmap(spec.edges[i], xlo, xhi);
        const double x1 = xmap(spec.edges[i + 1], xlo, xhi);
        const double y = ymap(spec.counts[i], cmax);
        os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << (x1 - x0)
           << "\" height=\"" << (kH - kPad - y) << "\" fill=\"steelblue\" stroke=\"white\""
           << " data-lo=\"" << spec.edges[i] << "\" data-hi=\"" << spec.edges[i + 1]
           << "\" data-count=\"" << spec.counts[i] << "\"/>\n";
    }
    if (!spec.overlay_x.empty() && spec.overlay_x.size() == spec.overlay_y.size()) {
        os << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < spec.overlay_x.size(); ++i)
            os << xmap(spec.overlay_x[i], xlo, xhi) << ','
               << ymap(spec.overlay_y[i], cmax) << ' ';
        os << "\" data-role=\"overlay\"/>\n";
    }
    os << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad
       << "\" y2=\"" << kH - kPad << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kPad << "\" y=\"" << kH - kPad + 20 << "\" font-size=\"11\">" << xlo
       << "</text>\n";
    os << "<text x=\"" << kW - kPad << "\" y=\"" << kH - kPad + 20
       << "\" text-anchor=\"end\" font-size=\"11\">" << xhi << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svg_ecdf_pair(const std::string& title, std::vector<double> a,
                          const std::string& label_a, std::vector<double> b,
                          const std::string& label_b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("svg_ecdf_pair: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double xlo = std::min(a.front(), b.front());
    const double xhi = std::max(a.back(), b.back());
    std::ostringstream os;
    os.precision(12);
    svg_header(os, title);
    const char* colors[2] = {"steelblue", "crimson"};
    const std::vector<double>* samples[2] = {&a, &b};
    const std::string* labels[2] = {&label_a, &label_b};
    for (int s = 0; s < 2; ++s) {
        const auto& v = *samples[s];
        os << "<polyline fill=\"none\" stroke=\"" << colors[s]
           << "\" stroke-width=\"1.5\" data-label=\"" << *labels[s] << "\" points=\"";
        const double n = static_cast<double>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double y = static_cast<double>(i + 1) / n;
            os << xmap(v[i], xlo, xhi) << ',' << ymap(y, 1.0) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << kPad + 10 << "\" y=\"" << 40 + 16 * s << "\" fill=\"" << colors[s]
           << "\" font-size=\"12\">" << *labels[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace cbt::emit
