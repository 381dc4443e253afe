#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "giantloop/models.hpp"

namespace giantloop {

namespace {

constexpr double series_limit = 8.0;

// Sum_k (-1)^k (z/2)^(2k+q) / (k! (k+q)!), q >= 0.
double bessel_series(int q, double z) {
    const double half = 0.5 * z;
    double term = 1.0;
    for (int k = 1; k <= q; ++k) term *= half / k;
    if (term == 0.0) return 0.0;

    const double step = -half * half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= step / (static_cast<double>(k) * (k + q));
        sum += term;
        if (std::abs(term) <= 1e-14 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's algorithm: recur J_{k-1} = (2k/z) J_k - J_{k+1} downward from a
// high start order, then normalize with J_0 + 2 sum_{k>=1} J_{2k} = 1. z > 0, q >= 0.
double bessel_backward(int q, double z) {
    const int start = 2 * ((std::max(q, static_cast<int>(z)) + 40 + static_cast<int>(std::sqrt(40.0 * z))) / 2);
    constexpr double rescale = 1e200;

    double above = 0.0;
    double current = 1e-300;
    double normalization = 0.0;
    double wanted = 0.0;
    for (int k = start; k >= 1; --k) {
        const double below = (2.0 * k / z) * current - above;
        above = current;
        current = below;
        // current now holds the unnormalized J_{k-1}
        if (std::abs(current) > rescale) {
            current /= rescale;
            above /= rescale;
            normalization /= rescale;
            wanted /= rescale;
        }
        const int order = k - 1;
        if (order == q) wanted = current;
        if (order > 0 && order % 2 == 0) normalization += 2.0 * current;
    }
    normalization += current;
    return wanted / normalization;
}

}  // namespace

double bessel_first_kind(int q, double z) {
    if (std::abs(q) > bessel_max_order || !(std::abs(z) <= bessel_max_argument)) {
        throw DomainError("bessel_first_kind: order " + std::to_string(q) + " or argument " + std::to_string(z) +
                          " outside |q| <= 30, |z| <= 50");
    }
    double sign = 1.0;
    int order = q;
    if (order < 0) {
        order = -order;
        if (order % 2 != 0) sign = -sign;
    }
    double x = z;
    if (x < 0.0) {
        x = -x;
        if (order % 2 != 0) sign = -sign;
    }
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    const double value = x <= series_limit ? bessel_series(order, x) : bessel_backward(order, x);
    return sign * value;
}

}  // namespace giantloop
