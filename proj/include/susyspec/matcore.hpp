#pragma once

#include <complex>
#include <Eigen/Dense>

#include "susyspec/errors.hpp"

namespace susyspec {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Shared numerical knobs.  Defaults are tuned for m <= 8 dense problems.
struct Numerics {
    double tol_psd = 1e-10;        // Herglotz-defect assertion floor
    double delta_spec = 1e-6;      // refusal margin around [0, inf)
    double cond_max = 1e12;        // refuse linear solves above this condition
    double tol_ode = 1e-10;        // local tolerance of the adaptive stepper
    double overflow_guard = 1e150; // propagator norm abort threshold
    double tail_decades = 40.0;    // decay budget fixing the default half-line extent
};

// Complex energy z paired with the momentum branch zeta, zeta^2 = z.
struct SpectralPoint {
    Complex z;
    Complex zeta;
};

// Branch with Im(zeta) > 0 for z off the closed positive half-axis.
// Throws SpectrumProximity when dist(z, [0,inf)) <= delta_spec.
SpectralPoint principal_zeta(Complex z, double delta_spec = 1e-6);

// Evaluation point inside a spectral gap on the real axis: zeta = sqrt(z)
// real for z >= 0, i*sqrt(-z) otherwise.  The caller asserts that z is in
// the resolvent set of the operator being probed.
SpectralPoint gap_point(double z);

// SpectralPoint from a momentum value directly.
SpectralPoint from_zeta(Complex zeta);

// Matrix exponential, scaling-and-squaring with a degree-13 Pade core.
CMatrix mat_exp(const CMatrix& a);

// Smallest eigenvalue of (M - M*)/(2i).  A Herglotz value taken in the
// upper half-plane must return >= -tol_psd.
double herglotz_defect(const CMatrix& m);

// Reciprocal condition estimate from a partial-pivot LU factorization.
double rcond_estimate(const CMatrix& a);

// Inverse / solve refusing condition numbers above cond_max.  `what`
// names the caller for the IllConditioned message.
CMatrix guarded_inverse(const CMatrix& a, const char* what, double cond_max = 1e12);
CMatrix guarded_solve(const CMatrix& a, const CMatrix& rhs, const char* what,
                      double cond_max = 1e12);

bool is_hermitian(const CMatrix& a, double tol);

// || a - b || / (1 + max(||a||, ||b||)), Frobenius norms.
double rel_residual(const CMatrix& a, const CMatrix& b);

} // namespace susyspec
