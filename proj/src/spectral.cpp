#include "susyspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyspec/quadrature.hpp"
#include "susyspec/threading.hpp"

namespace susyspec {

namespace {

CMatrix herm_imag(const CMatrix& m) {
    return (m - m.adjoint()) / Complex(0.0, 2.0);
}

// Branch selection for Schrodinger families: the open negative axis is in
// the resolvent set of H_j >= 0, so real z < 0 bypasses the proximity
// margin (atom probing walks z -> 0^-).
SpectralPoint energy_point(Complex z, const Numerics& num) {
    if (z.imag() == 0.0 && z.real() < 0.0)
        return gap_point(z.real());
    return principal_zeta(z, num.delta_spec);
}

} // namespace

MFamily make_family(const PotentialProfile& p, double x0, const std::string& which,
                    const Numerics& num) {
    const BoundaryFrame a0 = BoundaryFrame::alpha0(p.m);
    MFamily fam;
    fam.name = which;

    auto dirac_m = [p, x0, a0, num](Complex zeta, int side) {
        return halfline_m_dirac(p, from_zeta(zeta), x0, a0, side, {}, num).M;
    };

    if (which == "MD+" || which == "MD-") {
        const int side = (which == "MD+") ? +1 : -1;
        fam.rows = p.m;
        fam.eval = [dirac_m, side](Complex w) { return dirac_m(w, side); };
        return fam;
    }
    if (which == "MDfull") {
        fam.rows = 2 * p.m;
        fam.eval = [dirac_m, num](Complex w) {
            return fullline_m_dirac(dirac_m(w, +1), dirac_m(w, -1), num).as_matrix();
        };
        return fam;
    }
    if (which.rfind("Mhat", 0) == 0 && which.size() == 6) {
        const char sign = which[4];
        const int j = which[5] - '0';
        if ((sign == '+' || sign == '-') && (j == 1 || j == 2)) {
            const int side = (sign == '+') ? +1 : -1;
            fam.rows = p.m;
            fam.eval = [p, x0, side, j, num](Complex z) {
                const auto sp = energy_point(z, num);
                return schrodinger_weyl(p, sp, x0, side, j, num).Mhat;
            };
            return fam;
        }
    }
    if (which == "Mhat1" || which == "Mhat2") {
        const int j = which[4] - '0';
        fam.rows = 2 * p.m;
        fam.eval = [p, x0, j, num](Complex z) {
            const auto sp = energy_point(z, num);
            return fullline_m_schrodinger(p, sp, x0, j, num).as_matrix();
        };
        return fam;
    }
    throw ValidationError("make_family: unknown m-function family '" + which + "'");
}

std::vector<double> default_eps_schedule() {
    return {1e-2, 5e-3, 2.5e-3};
}

static void check_schedule(const std::vector<double>& eps) {
    if (eps.size() < 3)
        throw ValidationError("spectral_density: eps schedule needs at least 3 values");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0))
            throw ValidationError("spectral_density: eps values must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1]))
            throw ValidationError("spectral_density: eps schedule must be strictly decreasing");
    }
}

namespace {

// Linear Richardson pass along the eps schedule; fills the extrapolated
// value and the last-step change.
void extrapolate(const std::vector<CMatrix>& vals, const std::vector<double>& eps,
                 CMatrix& out, double& residual) {
    std::vector<CMatrix> ext;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
        const double e0 = eps[k], e1 = eps[k + 1];
        ext.push_back(((e0 * vals[k + 1]) - (e1 * vals[k])) / (e0 - e1));
    }
    out = ext.back();
    residual = (ext.back() - ext[ext.size() - 2]).norm();
}

} // namespace

SpectralDensityEstimate spectral_density(const MFamily& family,
                                         const std::vector<double>& lambda_grid,
                                         std::vector<double> eps_schedule,
                                         const Numerics& num) {
    if (eps_schedule.empty())
        eps_schedule = default_eps_schedule();
    check_schedule(eps_schedule);
    (void)num;

    SpectralDensityEstimate est;
    est.lambda_grid = lambda_grid;
    est.eps_schedule = eps_schedule;
    est.densities.resize(lambda_grid.size());
    est.residuals.resize(lambda_grid.size());

    parallel_for(lambda_grid.size(), [&](std::size_t i) {
        std::vector<CMatrix> vals;
        vals.reserve(eps_schedule.size());
        for (double eps : eps_schedule)
            vals.push_back(herm_imag(family.eval(Complex(lambda_grid[i], eps))) / M_PI);
        extrapolate(vals, eps_schedule, est.densities[i], est.residuals[i]);
    });
    return est;
}

VectorFunction VectorFunction::indicator(double a, double b) {
    VectorFunction f;
    f.m = 1;
    f.lo = a;
    f.hi = b;
    f.eval = [](double) { return CVector::Ones(1); };
    return f;
}

VectorFunction VectorFunction::exp_abs(double radius) {
    VectorFunction f;
    f.m = 1;
    f.lo = -radius;
    f.hi = radius;
    f.breakpoints = {0.0};
    f.eval = [](double x) { return CVector(std::exp(-std::abs(x)) * CVector::Ones(1)); };
    return f;
}

TransformCoefficients transform_hat(const PotentialProfile& p, int j,
                                    const VectorFunction& f, double x0, double lambda,
                                    const Numerics& num) {
    if (f.m != p.m)
        throw ValidationError("transform_hat: test function dimension mismatch");
    const PropagationOptions opts = PropagationOptions::from(num);

    std::vector<double> cuts = p.kink_points();
    cuts.insert(cuts.end(), f.breakpoints.begin(), f.breakpoints.end());
    cuts.push_back(x0);
    const QuadratureRule rule = composite_gauss(f.lo, f.hi, cuts, 0.25);

    // split the sweep at x0 to keep each propagation monotone
    std::vector<double> left, right;
    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (rule.nodes[i] < x0) {
            left.push_back(rule.nodes[i]);
            left_idx.push_back(i);
        } else {
            right.push_back(rule.nodes[i]);
            right_idx.push_back(i);
        }
    }
    std::reverse(left.begin(), left.end());
    std::reverse(left_idx.begin(), left_idx.end());

    const LinearSystem sys = schrodinger_system(p.m, j, Complex(lambda, 0.0));
    const CMatrix id = CMatrix::Identity(2 * p.m, 2 * p.m);

    CVector h0 = CVector::Zero(p.m);
    CVector h1 = CVector::Zero(p.m);
    auto accumulate = [&](const std::vector<double>& xs, const std::vector<std::size_t>& idx) {
        if (xs.empty())
            return;
        const auto frames = propagate_points(p, sys, x0, xs, id, opts);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const CMatrix c = frames[k].topLeftCorner(p.m, p.m);
            const CMatrix s = frames[k].topRightCorner(p.m, p.m);
            const CVector fx = f.eval(xs[k]);
            h0 += rule.weights[idx[k]] * (c.adjoint() * fx);
            h1 += rule.weights[idx[k]] * (s.adjoint() * fx);
        }
    };
    accumulate(right, right_idx);
    accumulate(left, left_idx);

    TransformCoefficients out;
    out.j = j;
    out.lambda = lambda;
    out.h0 = h0;
    out.h1 = h1;
    return out;
}

CVector TransformCoefficients::stacked() const {
    CVector v(h0.size() + h1.size());
    v.head(h0.size()) = h0;
    v.tail(h1.size()) = h1;
    return v;
}

CMatrix atom_mass(const MFamily& family, double lambda0, std::vector<double> eps_schedule,
                  const Numerics& num) {
    (void)num;
    if (eps_schedule.empty())
        eps_schedule = {1e-6, 5e-7, 2.5e-7};
    check_schedule(eps_schedule);

    std::vector<CMatrix> vals;
    for (double eps : eps_schedule) {
        if (lambda0 == 0.0)
            vals.push_back(eps * family.eval(Complex(lambda0 - eps, 0.0)));
        else
            vals.push_back(eps * herm_imag(family.eval(Complex(lambda0, eps))));
    }
    CMatrix out;
    double residual = 0.0;
    extrapolate(vals, eps_schedule, out, residual);
    return 0.5 * (out + out.adjoint().eval());
}

ParsevalReport parseval_check(const PotentialProfile& p, int j, const VectorFunction& f,
                              double x0, double lambda_max, int panels,
                              std::vector<double> eps_schedule, double target,
                              const std::vector<double>& atom_candidates,
                              const Numerics& num) {
    if (eps_schedule.empty())
        eps_schedule = default_eps_schedule();
    check_schedule(eps_schedule);
    if (!(lambda_max > 0.0))
        throw ValidationError("parseval_check: window must be positive");

    ParsevalReport rep;

    // ||f||^2
    {
        std::vector<double> cuts = f.breakpoints;
        const QuadratureRule rule = composite_gauss(f.lo, f.hi, cuts, 0.25);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f.eval(rule.nodes[i]).squaredNorm();
        rep.f_norm2 = acc;
    }

    const MFamily family = make_family(p, x0, j == 1 ? "Mhat1" : "Mhat2", num);

    // Probe the declared atom candidates first.  Detected atoms contribute
    // through their mass matrix; the continuous-grid quadrature then skips a
    // neighborhood of each so the Poisson smearing is not double counted.
    std::vector<std::pair<double, CMatrix>> atoms;
    for (double lam0 : atom_candidates) {
        const CMatrix mass = atom_mass(family, lam0, {}, num);
        if (mass.trace().real() > 1e-3)
            atoms.emplace_back(lam0, mass);
    }
    const double atom_margin = 0.25;

    // substitution lambda = s^2 smooths the square-root edge at 0
    const double s_max = std::sqrt(lambda_max);
    std::vector<std::pair<double, double>> s_ranges{{0.0, s_max}};
    for (const auto& [lam0, mass] : atoms) {
        (void)mass;
        const double lo = std::sqrt(std::max(0.0, lam0 - atom_margin));
        const double hi = std::sqrt(std::min(lambda_max, lam0 + atom_margin));
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : s_ranges) {
            if (hi <= a || lo >= b) {
                next.emplace_back(a, b);
                continue;
            }
            if (lo > a)
                next.emplace_back(a, lo);
            if (hi < b)
                next.emplace_back(hi, b);
        }
        s_ranges = std::move(next);
    }
    QuadratureRule srule;
    for (auto [a, b] : s_ranges) {
        const QuadratureRule part = composite_gauss(a, b, {}, s_max / std::max(1, panels));
        srule.nodes.insert(srule.nodes.end(), part.nodes.begin(), part.nodes.end());
        srule.weights.insert(srule.weights.end(), part.weights.begin(), part.weights.end());
    }

    const std::size_t n = srule.nodes.size();
    std::vector<double> integrand(n, 0.0), lam(n, 0.0), dweight(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const double s = srule.nodes[i];
        const double lambda = s * s;
        lam[i] = lambda;
        dweight[i] = srule.weights[i] * 2.0 * s;

        std::vector<CMatrix> vals;
        vals.reserve(eps_schedule.size());
        for (double eps : eps_schedule)
            vals.push_back(herm_imag(family.eval(Complex(lambda, eps))) / M_PI);
        CMatrix rho;
        double res = 0.0;
        extrapolate(vals, eps_schedule, rho, res);

        const CVector h = transform_hat(p, j, f, x0, lambda, num).stacked();
        integrand[i] = (h.adjoint() * rho * h)(0, 0).real();
    });

    double window = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        window += dweight[i] * integrand[i];
    rep.window_integral = window;

    // point masses at the probed candidates
    for (const auto& [lam0, mass] : atoms) {
        const CVector h = transform_hat(p, j, f, x0, lam0, num).stacked();
        rep.atom_total += (h.adjoint() * mass * h)(0, 0).real();
    }

    // Asymptotic completion: the integrand decays like c * lambda^{-3/2}
    // on average; fit c on the top quarter of the window and integrate the
    // model to infinity.  The oscillatory remainder integrates to O(1/Lambda).
    double c_num = 0.0, c_den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (srule.nodes[i] >= 0.75 * s_max) {
            c_num += dweight[i] * integrand[i] * std::pow(lam[i], 1.5);
            c_den += dweight[i];
        }
    }
    const double c_est = (c_den > 0.0) ? std::max(0.0, c_num / c_den) : 0.0;
    rep.tail_correction = 2.0 * c_est / std::sqrt(lambda_max);
    rep.tail_bound = 2.0 * c_est / lambda_max;

    const double total = rep.window_integral + rep.atom_total + rep.tail_correction;
    rep.relative_error = (rep.f_norm2 > 1e-300)
                             ? std::abs(total - rep.f_norm2) / rep.f_norm2
                             : std::abs(total);

    if (rep.tail_bound > target) {
        std::ostringstream os;
        os << "parseval_check: window [0, " << lambda_max << "] leaves a tail bound "
           << rep.tail_bound << " above the target " << target;
        throw WindowTooSmall(os.str());
    }
    return rep;
}

} // namespace susyspec
