#pragma once

#include <cmath>

#include "trapnoise/constants.hpp"

namespace trapnoise {

/// Mean and variance of the trap-induced transition shift.
struct ShiftStatistics {
    double mu = 0.0;      ///< meV
    double sigma2 = 0.0;  ///< meV^2

    double sigma() const { return std::sqrt(sigma2); }
    double gaussian_fwhm() const { return constants::gaussian_fwhm_per_sigma * sigma(); }
};

}  // namespace trapnoise
