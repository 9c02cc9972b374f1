#pragma once

#include <algorithm>
#include <cmath>

namespace finsler {

// Mixed float comparison |a-b| <= atol + rtol*max(|a|,|b|); overridable per
// CLI run.
struct Tolerance {
    double atol = 1e-12;
    double rtol = 1e-9;

    bool close(double a, double b) const {
        return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
    }
};

} // namespace finsler
