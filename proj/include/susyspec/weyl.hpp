#pragma once

#include <optional>
#include <vector>

#include "susyspec/propagate.hpp"

namespace susyspec {

// Exact representation of a Weyl solution on the constant tail beyond the
// matching point: U(x) = [V E(x) G ; V D E(x) G] with
// E(x) = diag(exp(-w_k * side * (x - x_match))), Re w_k > 0.
struct WeylTail {
    double x_match = 0.0;
    int side = +1;
    CMatrix V;  // unitary eigenvectors of the tail coefficient
    CVector w;  // decay exponents sqrt(c_k^2 - zeta^2), Re > 0
    CVector d;  // bottom-block factors (c_k - side * w_k) / zeta
    CMatrix G;  // m x m coefficient

    CMatrix evalU(double x) const; // 2m x m
    // Oriented tail integrals of u_i^* u_j over [x_match, side*inf):
    //   which = 0: u1*u1, 1: u2*u2, 2: u2*u1, 3: U*U.
    CMatrix gram(int which) const;
};

// Half-line Weyl data for the Dirac operator.
struct HalfLineDiracWeyl {
    int side = +1; // +1 for [x0, inf), -1 for (-inf, x0]
    Complex zeta;
    double x0 = 0.0;
    BoundaryFrame alpha;
    CMatrix M;                // m x m Weyl-Titchmarsh matrix
    double trunc_L = 0.0;     // tail matching point actually used
    double tail_residual = 0; // tail-model consistency diagnostic
    double suggested_L = 0.0; // default half-line extent for sampling
    WeylTail tail;
    PotentialProfile profile;
    PropagationOptions opts;

    // U(zeta, x, x0, alpha) = Psi * (I ; M); exact tail form beyond the
    // matching point, propagated inside the active region.
    CMatrix evalU(double x) const;
    std::vector<CMatrix> evalU(const std::vector<double>& xs) const; // monotone xs

    // Oriented half-line integrals \int_{x0}^{side*inf} u_i^* u_j dx, the
    // active part by composite quadrature and the tail in closed form.
    //   which = 0: u1*u1, 1: u2*u2, 2: u2*u1, 3: U*U.
    CMatrix halfline_gram(int which) const;
};

// Tail-matched half-line M function.  L overrides the sampling extent
// recorded in suggested_L; the matching itself happens at the outermost
// breakpoint where the constant tail starts.
HalfLineDiracWeyl halfline_m_dirac(const PotentialProfile& p, SpectralPoint sp, double x0,
                                   const BoundaryFrame& alpha, int side,
                                   std::optional<double> L = {},
                                   const Numerics& num = {});

// Sampled Weyl solutions on the chosen half-line.
std::vector<std::pair<double, CMatrix>>
weyl_solutions_dirac(const HalfLineDiracWeyl& data, const std::vector<double>& xs);

// Moebius transport of M between boundary frames, gamma -> alpha.
CMatrix rotate_boundary_frame(const CMatrix& m_gamma, const BoundaryFrame& alpha,
                              const BoundaryFrame& gamma, const Numerics& num = {});

struct FullLineDiracM {
    CMatrix m00, m01, m10, m11;
    double ordering_residual = 0.0; // the two equivalent forms of m11
    CMatrix as_matrix() const;
};

FullLineDiracM fullline_m_dirac(const CMatrix& m_plus, const CMatrix& m_minus,
                                const Numerics& num = {});

// Green's matrix of the full-line Dirac operator.
CMatrix green_dirac(const PotentialProfile& p, SpectralPoint sp, double x0,
                    const BoundaryFrame& alpha, double x, double xp,
                    const Numerics& num = {});

} // namespace susyspec
