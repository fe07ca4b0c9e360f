#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susyspec/weyl.hpp"

namespace susyspec {

// M-hat_{±,0,j} from the Dirac half-line M: j=1 gives zeta*M, j=2 gives
// -zeta*M^{-1}.
CMatrix schrodinger_weyl_m(const CMatrix& m_dirac, SpectralPoint sp, int j,
                           const Numerics& num = {});

// Half-line Weyl data for H_j, carried by the supersymmetric transfer from
// the Dirac data at alpha0.
struct SchrodingerWeyl {
    int j = 1;
    int side = +1;
    Complex z;
    double x0 = 0.0;
    CMatrix Mhat;
    HalfLineDiracWeyl dirac;  // underlying alpha0 data at zeta
    CMatrix m_dirac_inv;      // cached for j = 2
    double route_residual = 0.0; // dual-route consistency diagnostic

    // (psi, psi^[1,j]) at x.
    std::pair<CMatrix, CMatrix> eval_psi(double x) const;
    std::vector<std::pair<CMatrix, CMatrix>> eval_psi(const std::vector<double>& xs) const;

    // Oriented half-line integral of psi* psi.
    CMatrix halfline_gram() const;
};

SchrodingerWeyl schrodinger_weyl(const PotentialProfile& p, SpectralPoint sp, double x0,
                                 int side, int j, const Numerics& num = {});

// Dirichlet half-line Green's function at the reference point.
CMatrix green_schrodinger_halfline(const PotentialProfile& p, int j, SpectralPoint sp,
                                   double x0, int side, double x, double xp,
                                   const Numerics& num = {});

// Full-line Green's function of H_j.
CMatrix green_schrodinger_fullline(const PotentialProfile& p, int j, SpectralPoint sp,
                                   double x0, double x, double xp,
                                   const Numerics& num = {});

struct FullLineSchrodingerM {
    int j = 1;
    CMatrix m00, m01, m10, m11;
    CMatrix as_matrix() const;
};

FullLineSchrodingerM fullline_m_schrodinger(const CMatrix& mhat_plus,
                                            const CMatrix& mhat_minus, int j,
                                            const Numerics& num = {});

// Convenience: the 2m x 2m block Weyl matrix of H_j straight from a profile.
FullLineSchrodingerM fullline_m_schrodinger(const PotentialProfile& p, SpectralPoint sp,
                                            double x0, int j, const Numerics& num = {});

// Zero-energy kernel classification by tail exponents.
struct KernelModeReport {
    int j = 1;
    std::vector<std::pair<double, CMatrix>> mode_samples; // fundamental m x m solution
    std::vector<bool> column_l2;                          // per solution-space direction
    int dim_kernel = 0;
};

std::pair<KernelModeReport, KernelModeReport>
kernel_modes(const PotentialProfile& p, double L = 3.0, const Numerics& num = {});

// One verification item: a named residual against its tolerance.
struct IdentityResidual {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass() const { return residual <= tolerance; }
};

struct SuiteReport {
    std::vector<IdentityResidual> items;
    double max_residual() const;
    bool all_pass() const;
};

// The supersymmetric identity suite: duality of the two Schrodinger M
// functions, block conjugations between the Dirac and Schrodinger full-line
// matrices, the resolvent block structure, the pairing derivative identity,
// odd symmetries, Wronskian constancy, dual-route solution consistency and
// the Herglotz defect scan.  `tol` is the residual tolerance for the exact
// algebraic identities; quadrature-based rows use looser documented bounds.
SuiteReport susy_identity_suite(const PotentialProfile& p, double x0, double tol,
                                const Numerics& num = {});

} // namespace susyspec
