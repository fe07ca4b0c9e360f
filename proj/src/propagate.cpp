#include "susyspec/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace susyspec {

BoundaryFrame BoundaryFrame::alpha0(int m) {
    BoundaryFrame b;
    b.alpha = CMatrix::Zero(m, 2 * m);
    b.alpha.leftCols(m) = CMatrix::Identity(m, m);
    return b;
}

BoundaryFrame BoundaryFrame::rotation(double t) {
    return diag_rotation(1, t);
}

BoundaryFrame BoundaryFrame::diag_rotation(int m, double t) {
    BoundaryFrame b;
    b.alpha = CMatrix::Zero(m, 2 * m);
    b.alpha.leftCols(m) = std::cos(t) * CMatrix::Identity(m, m);
    b.alpha.rightCols(m) = std::sin(t) * CMatrix::Identity(m, m);
    return b;
}

CMatrix BoundaryFrame::frame_matrix() const {
    const int n = m();
    CMatrix f(2 * n, 2 * n);
    f.topLeftCorner(n, n) = a1().adjoint();
    f.topRightCorner(n, n) = -a2().adjoint();
    f.bottomLeftCorner(n, n) = a2().adjoint();
    f.bottomRightCorner(n, n) = a1().adjoint();
    return f;
}

void BoundaryFrame::validate(double tol) const {
    const int n = m();
    if (alpha.cols() != 2 * n)
        throw ValidationError("boundary frame: alpha must be m x 2m");
    const CMatrix r1 = a1() * a1().adjoint() + a2() * a2().adjoint() -
                       CMatrix::Identity(n, n);
    const CMatrix r2 = a2() * a1().adjoint() - a1() * a2().adjoint();
    if (r1.norm() > tol || r2.norm() > tol)
        throw ValidationError("boundary frame: alpha alpha* = I, alpha J alpha* = 0 violated");
}

CMatrix symplectic_j(int m) {
    CMatrix j = CMatrix::Zero(2 * m, 2 * m);
    j.topRightCorner(m, m) = -CMatrix::Identity(m, m);
    j.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
    return j;
}

CMatrix pauli_s1(int m) {
    CMatrix s = CMatrix::Zero(2 * m, 2 * m);
    s.topRightCorner(m, m) = CMatrix::Identity(m, m);
    s.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
    return s;
}

CMatrix pauli_s3(int m) {
    CMatrix s = CMatrix::Zero(2 * m, 2 * m);
    s.topLeftCorner(m, m) = CMatrix::Identity(m, m);
    s.bottomRightCorner(m, m) = -CMatrix::Identity(m, m);
    return s;
}

LinearSystem dirac_system(int m, Complex zeta) {
    LinearSystem sys;
    sys.dim = 2 * m;
    sys.coeff = [m, zeta](const CMatrix& phi) {
        CMatrix k = CMatrix::Zero(2 * m, 2 * m);
        k.topLeftCorner(m, m) = -phi;
        k.topRightCorner(m, m) = zeta * CMatrix::Identity(m, m);
        k.bottomLeftCorner(m, m) = -zeta * CMatrix::Identity(m, m);
        k.bottomRightCorner(m, m) = phi;
        return k;
    };
    return sys;
}

LinearSystem schrodinger_system(int m, int j, Complex z) {
    if (j != 1 && j != 2)
        throw ValidationError("schrodinger_system: j must be 1 or 2");
    const double sj = (j == 1) ? -1.0 : 1.0; // (-1)^j
    LinearSystem sys;
    sys.dim = 2 * m;
    sys.coeff = [m, sj, z](const CMatrix& phi) {
        CMatrix k = CMatrix::Zero(2 * m, 2 * m);
        k.topLeftCorner(m, m) = sj * phi;
        k.topRightCorner(m, m) = CMatrix::Identity(m, m);
        k.bottomLeftCorner(m, m) = -z * CMatrix::Identity(m, m);
        k.bottomRightCorner(m, m) = -sj * phi;
        return k;
    };
    return sys;
}

LinearSystem zero_mode_system(int m, int j) {
    if (j != 1 && j != 2)
        throw ValidationError("zero_mode_system: j must be 1 or 2");
    const double s = (j == 1) ? -1.0 : 1.0;
    LinearSystem sys;
    sys.dim = m;
    sys.coeff = [s](const CMatrix& phi) { return CMatrix(s * phi); };
    return sys;
}

namespace {

void check_guard(const CMatrix& y, double guard, double x, const char* what) {
    const double n = y.cwiseAbs().maxCoeff();
    if (!(n < guard)) {
        std::ostringstream os;
        os << what << ": propagator norm " << n << " exceeded " << guard << " at x = " << x;
        throw IllConditioned(os.str());
    }
}

// Dormand-Prince 5(4) pair on the matrix system Y' = K(x) Y.
void adaptive_rk(const PotentialProfile& p, const LinearSystem& sys, double a, double b,
                 CMatrix& y, const PropagationOptions& opts) {
    const double len = b - a;
    if (len == 0.0)
        return;
    auto K = [&](double x) { return sys.coeff(p.phi(x)); };

    const double dir = (len > 0) ? 1.0 : -1.0;
    double x = a;
    double h = dir * std::min(std::abs(len), 0.1);
    const double hmin = std::abs(len) * 1e-14;

    CMatrix k1 = K(x) * y;
    int accepted = 0;
    while (dir * (b - x) > 0.0) {
        if (dir * (x + h - b) > 0.0)
            h = b - x;

        const CMatrix y2 = y + h * (1.0 / 5.0) * k1;
        const CMatrix k2 = K(x + h / 5.0) * y2;
        const CMatrix y3 = y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
        const CMatrix k3 = K(x + 3.0 * h / 10.0) * y3;
        const CMatrix y4 = y + h * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
        const CMatrix k4 = K(x + 4.0 * h / 5.0) * y4;
        const CMatrix y5 =
            y + h * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                     (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4);
        const CMatrix k5 = K(x + 8.0 * h / 9.0) * y5;
        const CMatrix y6 =
            y + h * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 + (46732.0 / 5247.0) * k3 +
                     (49.0 / 176.0) * k4 - (5103.0 / 18656.0) * k5);
        const CMatrix k6 = K(x + h) * y6;
        const CMatrix ynew =
            y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 -
                     (2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
        const CMatrix k7 = K(x + h) * ynew;
        const CMatrix y4th =
            y + h * ((5179.0 / 57600.0) * k1 + (7571.0 / 16695.0) * k3 + (393.0 / 640.0) * k4 -
                     (92097.0 / 339200.0) * k5 + (187.0 / 2100.0) * k6 + (1.0 / 40.0) * k7);

        const double scale = opts.tol_ode * std::max(1.0, y.cwiseAbs().maxCoeff());
        const double err = (ynew - y4th).cwiseAbs().maxCoeff();

        if (err <= scale) {
            x += h;
            y = ynew;
            k1 = k7; // FSAL
            check_guard(y, opts.overflow_guard, x, "propagate");
            ++accepted;
        }
        const double ratio = (err > 0.0) ? std::pow(scale / err, 0.2) : 5.0;
        h *= std::clamp(0.9 * ratio, 0.2, 5.0);
        if (std::abs(h) < hmin)
            throw IllConditioned("propagate: step size underflow in adaptive integrator");
    }
    (void)accepted;
}

} // namespace

CMatrix propagate_interval(const PotentialProfile& p, const LinearSystem& sys, double from,
                           double to, CMatrix y, const PropagationOptions& opts) {
    if (from == to)
        return y;
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);

    // cut at every point where phi may lose smoothness
    std::vector<double> cuts;
    cuts.push_back(from);
    std::vector<double> kinks = p.kink_points();
    if (from < to) {
        for (double t : kinks)
            if (t > lo + 1e-14 && t < hi - 1e-14)
                cuts.push_back(t);
    } else {
        for (auto it = kinks.rbegin(); it != kinks.rend(); ++it)
            if (*it > lo + 1e-14 && *it < hi - 1e-14)
                cuts.push_back(*it);
    }
    cuts.push_back(to);

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const double xm = 0.5 * (a + b);
        bool constant = true;
        if (!p.segments.empty() && xm >= p.active_lo() && xm < p.active_hi()) {
            for (const auto& s : p.segments) {
                if (xm >= s.lo && xm < s.hi) {
                    constant = s.constant();
                    break;
                }
            }
        }
        if (constant) {
            y = mat_exp(sys.coeff(p.phi(xm)) * Complex(b - a, 0.0)) * y;
            check_guard(y, opts.overflow_guard, b, "propagate");
        } else {
            adaptive_rk(p, sys, a, b, y, opts);
        }
    }
    return y;
}

std::vector<CMatrix> propagate_points(const PotentialProfile& p, const LinearSystem& sys,
                                      double from, const std::vector<double>& xs, CMatrix y,
                                      const PropagationOptions& opts) {
    std::vector<CMatrix> out;
    out.reserve(xs.size());
    if (xs.empty())
        return out;
    const bool fwd = xs.back() >= xs.front();
    double cur = from;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && ((fwd && xs[i] < xs[i - 1]) || (!fwd && xs[i] > xs[i - 1])))
            throw ValidationError("propagate_points: sample points must be monotone");
        y = propagate_interval(p, sys, cur, xs[i], std::move(y), opts);
        cur = xs[i];
        out.push_back(y);
    }
    return out;
}

DiracFrame propagate_dirac(const PotentialProfile& p, Complex zeta, double x0,
                           const BoundaryFrame& alpha, double x,
                           const PropagationOptions& opts) {
    DiracFrame f;
    f.zeta = zeta;
    f.x = x;
    f.Psi = propagate_interval(p, dirac_system(p.m, zeta), x0, x, alpha.frame_matrix(), opts);
    return f;
}

SchrodingerFrame fundamental_schrodinger(const PotentialProfile& p, int j, Complex z,
                                         double x0, double x,
                                         const PropagationOptions& opts) {
    const int m = p.m;
    const CMatrix full = propagate_interval(p, schrodinger_system(m, j, z), x0, x,
                                            CMatrix::Identity(2 * m, 2 * m), opts);
    SchrodingerFrame f;
    f.j = j;
    f.z = z;
    f.x = x;
    f.c = full.topLeftCorner(m, m);
    f.s = full.topRightCorner(m, m);
    f.c_qd = full.bottomLeftCorner(m, m);
    f.s_qd = full.bottomRightCorner(m, m);
    return f;
}

CMatrix wronskian(const CMatrix& f, const CMatrix& f_qd, const CMatrix& g,
                  const CMatrix& g_qd) {
    return f * g_qd - f_qd * g;
}

} // namespace susyspec
