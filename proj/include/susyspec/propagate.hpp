#pragma once

#include <functional>
#include <vector>

#include "susyspec/potential.hpp"

namespace susyspec {

// Self-adjoint boundary condition parameter alpha in C^{m x 2m} with
// alpha alpha* = I and alpha J alpha* = 0.
struct BoundaryFrame {
    CMatrix alpha; // m x 2m

    static BoundaryFrame alpha0(int m);
    // m=1 frame (cos t, sin t).
    static BoundaryFrame rotation(double t);
    // (cos t I_m, sin t I_m), admissible for any m.
    static BoundaryFrame diag_rotation(int m, double t);

    int m() const { return static_cast<int>(alpha.rows()); }
    CMatrix a1() const { return alpha.leftCols(m()); }
    CMatrix a2() const { return alpha.rightCols(m()); }

    // The 2m x 2m initial frame (alpha*  J alpha*); unitary.
    CMatrix frame_matrix() const;

    void validate(double tol = 1e-12) const; // throws ValidationError
};

// J = [[0, -I],[I, 0]] of size 2m.
CMatrix symplectic_j(int m);
// S1 = [[0, I],[I, 0]], S3 = [[I, 0],[0, -I]].
CMatrix pauli_s1(int m);
CMatrix pauli_s3(int m);

struct PropagationOptions {
    double tol_ode = 1e-10;
    double overflow_guard = 1e150;

    static PropagationOptions from(const Numerics& n) {
        return {n.tol_ode, n.overflow_guard};
    }
};

// First-order linear system Y' = K(phi(x)) Y.
struct LinearSystem {
    Eigen::Index dim;
    std::function<CMatrix(const CMatrix&)> coeff;
};

// U' = [[-phi, zeta I],[-zeta I, phi]] U, the first-order form of the
// Dirac eigenvalue equation.
LinearSystem dirac_system(int m, Complex zeta);
// (f, f^[1,j])' = [[(-1)^j phi, I],[-z I, (-1)^{j+1} phi]] (f, f^[1,j]).
LinearSystem schrodinger_system(int m, int j, Complex z);
// Zero-energy kernels: j=1 solves u' = -phi u, j=2 solves v' = +phi v.
LinearSystem zero_mode_system(int m, int j);

// Propagate Y across [from, to] (either orientation).  Constant-coefficient
// stretches use the exact matrix-exponential propagator; linear and sampled
// stretches use an embedded adaptive Runge-Kutta pair at tol_ode.
CMatrix propagate_interval(const PotentialProfile& p, const LinearSystem& sys,
                           double from, double to, CMatrix y,
                           const PropagationOptions& opts = {});

// Values of Y at a monotone sequence of points, sweeping once.
std::vector<CMatrix> propagate_points(const PotentialProfile& p, const LinearSystem& sys,
                                      double from, const std::vector<double>& xs, CMatrix y,
                                      const PropagationOptions& opts = {});

// Fundamental Dirac solution Psi(zeta, x, x0, alpha), normalized to the
// boundary frame at x0.
struct DiracFrame {
    Complex zeta;
    double x = 0.0;
    CMatrix Psi; // 2m x 2m

    int m() const { return static_cast<int>(Psi.rows()) / 2; }
    CMatrix theta1() const { return Psi.topLeftCorner(m(), m()); }
    CMatrix phi1() const { return Psi.topRightCorner(m(), m()); }
    CMatrix theta2() const { return Psi.bottomLeftCorner(m(), m()); }
    CMatrix phi2() const { return Psi.bottomRightCorner(m(), m()); }
};

DiracFrame propagate_dirac(const PotentialProfile& p, Complex zeta, double x0,
                           const BoundaryFrame& alpha, double x,
                           const PropagationOptions& opts = {});

inline DiracFrame propagate_dirac(const PotentialProfile& p, SpectralPoint sp, double x0,
                                  const BoundaryFrame& alpha, double x,
                                  const PropagationOptions& opts = {}) {
    return propagate_dirac(p, sp.zeta, x0, alpha, x, opts);
}

// Fundamental system (c_j, s_j) with their quasi-derivatives, normalized
// c(x0) = I, c^[1,j](x0) = 0, s(x0) = 0, s^[1,j](x0) = I.
struct SchrodingerFrame {
    int j = 1;
    Complex z;
    double x = 0.0;
    CMatrix c, s, c_qd, s_qd;
};

SchrodingerFrame fundamental_schrodinger(const PotentialProfile& p, int j, Complex z,
                                         double x0, double x,
                                         const PropagationOptions& opts = {});

// F G_qd - F_qd G; the caller passes the already-conjugated left factor.
CMatrix wronskian(const CMatrix& f, const CMatrix& f_qd, const CMatrix& g,
                  const CMatrix& g_qd);

} // namespace susyspec
