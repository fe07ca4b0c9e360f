#pragma once

#include <vector>

#include "susyspec/susy.hpp"

namespace susyspec {

// High-energy decay fit for the difference of two full-line block Weyl
// matrices along the ray arg(z) = theta.
struct DecayFit {
    double theta = 0.0;
    std::vector<double> radii;
    std::vector<double> deltas;      // || Mhat1^(1) - Mhat1^(2) || per radius
    std::vector<double> im_sqrt_z;   // Im sqrt(z) per radius
    double fitted_a = 0.0;           // slope of log||delta|| against -2 Im sqrt(z)
    double fit_residual = 0.0;       // rms residual of the linear fit
    int used_points = 0;             // radii surviving the underflow floor
};

// Compares Mhat_1 of the two coefficients at z = r e^{i theta}; points with
// deltas below 1e-14 are dropped.  Throws DegenerateFit when fewer than 3
// usable points remain.
DecayFit bm_decay_experiment(const PotentialProfile& p1, const PotentialProfile& p2,
                             double x0, double theta, std::vector<double> radii = {},
                             const Numerics& num = {});

std::vector<double> default_bm_radii(); // log-spaced in [4, 400]

} // namespace susyspec
