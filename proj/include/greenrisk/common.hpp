#pragma once

#include <stdexcept>
#include <string>

namespace greenrisk {

// Input and contract violations. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Logistic function; for x < 0 computed as exp(x)/(1+exp(x)) to avoid overflow.
double stable_sigmoid(double x);

// Round to two decimals, half away from zero. A 1e-9 nudge keeps decimal
// halves that sit just below .5 in binary (0.665 -> 0.66499...) rounding up.
double round2(double x);

} // namespace greenrisk
