#pragma once

#include <complex>

namespace lcrit {

// s = 1/2 + eps + i t.
struct SPoint {
    double eps = 0;
    double t = 0;

    double sigma() const noexcept { return 0.5 + eps; }
    std::complex<double> s() const noexcept { return {0.5 + eps, t}; }
};

}  // namespace lcrit
