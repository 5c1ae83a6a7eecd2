#pragma once

#include <cmath>
#include <functional>

namespace cbt::quad {

extern const double kGl32Nodes[16];
extern const double kGl32Weights[16];

// 32-point Gauss-Legendre rule on [a, b].
double gl32(const std::function<double(double)>& f, double a, double b);

template <typename F>
double gl32_t(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double dx = half * kGl32Nodes[i];
        acc += kGl32Weights[i] * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

// M_beta(s) = int_0^inf e^{-v} (s+v)^{-(1+beta)} dv for s >= ~6.
// Used for analytic tails of the cauchy family.
double exp_weighted_power_tail(double s, double beta);

// T2(A, beta) = int_A^inf dx / (x^2 log(x+e)^{1+beta}).
double tail_integral_inv_square(double A, double beta);

// T1(A, beta) = int_A^inf dx / (x log(x+e)^{1+beta})
//             = log(A+e)^{-beta}/beta + exponentially small remainder.
double tail_integral_inv(double A, double beta);

// int_{x0}^inf g(x) * exp(-nu*(x - shift)) dx with nu = e^{-w}, evaluated in
// t = log x. Safe for arbitrarily large w (nu may underflow). g must be
// smooth and at most slowly varying times 1/x^p.
double laplace_log_tail(const std::function<double(double)>& g_of_x, double x0,
                        double w, double shift);

} // namespace cbt::quad
