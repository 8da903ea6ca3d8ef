#pragma once

#include <cmath>

namespace ptscatter {

// A real number stored as mantissa * exp(log_scale). Used wherever cosh/sinh of
// large arguments would overflow: the mantissa stays O(1) while the growth is
// carried in log_scale.
struct ScaledReal {
    double mantissa = 0.0;
    double log_scale = 0.0;

    [[nodiscard]] double value() const { return mantissa * std::exp(log_scale); }
    [[nodiscard]] int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }
    // log|value|; -inf for an exact zero.
    [[nodiscard]] double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

}  // namespace ptscatter
