#include "greenrisk/common.hpp"

#include <cmath>

namespace greenrisk {

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double round2(double x) {
    const double scaled = x * 100.0;
    const double rounded = scaled >= 0.0 ? std::floor(scaled + 0.5 + 1e-9)
                                         : std::ceil(scaled - 0.5 - 1e-9);
    return rounded / 100.0;
}

} // namespace greenrisk
