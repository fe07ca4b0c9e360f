#pragma once

#include <functional>
#include <string>
#include <vector>

#include "susyspec/susy.hpp"

namespace susyspec {

// An m-function family: a matrix Herglotz function evaluated at complex
// arguments.  Dirac families take the momentum variable, Schrodinger
// families the energy z.
struct MFamily {
    std::string name;
    int rows = 0;
    std::function<CMatrix(Complex)> eval;
};

// which: MD+ | MD- | MDfull | Mhat+1 | Mhat-1 | Mhat+2 | Mhat-2 | Mhat1 | Mhat2
MFamily make_family(const PotentialProfile& p, double x0, const std::string& which,
                    const Numerics& num = {});

struct SpectralDensityEstimate {
    std::vector<double> lambda_grid;
    std::vector<CMatrix> densities;     // (1/pi) Im M extrapolated to eps -> 0
    std::vector<double> residuals;      // last extrapolation step change
    std::vector<double> eps_schedule;
};

// Stieltjes inversion with Richardson extrapolation along a strictly
// decreasing eps schedule (at least 3 values).
SpectralDensityEstimate spectral_density(const MFamily& family,
                                         const std::vector<double>& lambda_grid,
                                         std::vector<double> eps_schedule = {},
                                         const Numerics& num = {});

// Compactly supported vector-valued test function.
struct VectorFunction {
    int m = 1;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breakpoints; // interior kinks of f
    std::function<CVector(double)> eval;

    static VectorFunction indicator(double a, double b);
    static VectorFunction exp_abs(double radius); // e^{-|x|} truncated
};

struct TransformCoefficients {
    int j = 1;
    double lambda = 0.0;
    CVector h0; // \int c_j(lambda,x,x0)^* f(x) dx
    CVector h1; // \int s_j(lambda,x,x0)^* f(x) dx
    CVector stacked() const;
};

TransformCoefficients transform_hat(const PotentialProfile& p, int j,
                                    const VectorFunction& f, double x0, double lambda,
                                    const Numerics& num = {});

// Atom mass at lambda0 by pole probing: the limit of eps * M(lambda0 - eps)
// along the real axis for lambda0 = 0 (and eps * Im M(lambda0 + i eps) for
// interior candidates), Richardson extrapolated.
CMatrix atom_mass(const MFamily& family, double lambda0,
                  std::vector<double> eps_schedule = {}, const Numerics& num = {});

struct ParsevalReport {
    double f_norm2 = 0.0;         // ||f||^2 by quadrature
    double window_integral = 0.0; // \int_0^Lambda (h, dOmega h)
    double atom_total = 0.0;      // probed point-mass contributions
    double tail_correction = 0.0; // fitted lambda^{-3/2} completion
    double tail_bound = 0.0;      // residual bound after the completion
    double relative_error = 0.0;
};

// Windowed Parseval comparison against ||f||^2.  Throws WindowTooSmall when
// the post-completion residual bound exceeds `target`.
ParsevalReport parseval_check(const PotentialProfile& p, int j, const VectorFunction& f,
                              double x0, double lambda_max, int panels,
                              std::vector<double> eps_schedule, double target,
                              const std::vector<double>& atom_candidates = {0.0},
                              const Numerics& num = {});

std::vector<double> default_eps_schedule();

} // namespace susyspec
