#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbt::emit {

void write_text_file(const std::string& path, const std::string& content);

struct HistogramSpec {
    std::string title;
    std::vector<double> edges;  // size bins+1
    std::vector<double> counts; // size bins
    // optional overlay curve, drawn as a polyline over the same x axis
    std::vector<double> overlay_x;
    std::vector<double> overlay_y; // in count units
};

// Histogram as standalone SVG. Every bar carries data-lo/data-hi/data-count
// attributes so emitted plots stay machine-checkable.
std::string svg_histogram(const HistogramSpec& spec);

// Two overlaid empirical cdfs (step functions); samples need not be sorted.
std::string svg_ecdf_pair(const std::string& title, std::vector<double> a,
                          const std::string& label_a, std::vector<double> b,
                          const std::string& label_b);

HistogramSpec make_histogram(const std::string& title, const std::vector<double>& samples,
                             int bins);

} // namespace cbt::emit
