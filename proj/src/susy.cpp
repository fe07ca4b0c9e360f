#include "susyspec/susy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "susyspec/quadrature.hpp"

namespace susyspec {

CMatrix schrodinger_weyl_m(const CMatrix& m_dirac, SpectralPoint sp, int j,
                           const Numerics& num) {
    if (j == 1)
        return sp.zeta * m_dirac;
    if (j == 2)
        return -sp.zeta * guarded_inverse(m_dirac, "schrodinger_weyl_m (j=2)", num.cond_max);
    throw ValidationError("schrodinger_weyl_m: j must be 1 or 2");
}

SchrodingerWeyl schrodinger_weyl(const PotentialProfile& p, SpectralPoint sp, double x0,
                                 int side, int j, const Numerics& num) {
    SchrodingerWeyl w;
    w.j = j;
    w.side = side;
    w.z = sp.z;
    w.x0 = x0;
    w.dirac = halfline_m_dirac(p, sp, x0, BoundaryFrame::alpha0(p.m), side, {}, num);
    w.Mhat = schrodinger_weyl_m(w.dirac.M, sp, j, num);
    if (j == 2)
        w.m_dirac_inv = guarded_inverse(w.dirac.M, "schrodinger_weyl", num.cond_max);

    // Dual-route consistency: the Dirac transfer against direct propagation
    // of the second-order fundamental system, psi = c + s Mhat.
    const PropagationOptions opts = PropagationOptions::from(num);
    double worst = 0.0;
    const double probe_far = (p.segments.empty() ? 1.0 : 0.0) +
                             (side > 0 ? p.active_hi() + 0.7 : p.active_lo() - 0.7);
    for (double x : {x0, x0 + 0.37 * side, probe_far}) {
        const auto [psi, psi_qd] = w.eval_psi(x);
        const auto f = fundamental_schrodinger(p, j, sp.z, x0, x, opts);
        const CMatrix direct = f.c + f.s * w.Mhat;
        const CMatrix direct_qd = f.c_qd + f.s_qd * w.Mhat;
        worst = std::max(worst, rel_residual(psi, direct));
        worst = std::max(worst, rel_residual(psi_qd, direct_qd));
    }
    w.route_residual = worst;
    return w;
}

std::pair<CMatrix, CMatrix> SchrodingerWeyl::eval_psi(double x) const {
    const int m = dirac.profile.m;
    const CMatrix u = dirac.evalU(x);
    const CMatrix u1 = u.topRows(m);
    const CMatrix u2 = u.bottomRows(m);
    const Complex zeta = dirac.zeta;
    if (j == 1)
        return {u1, zeta * u2};
    return {u2 * m_dirac_inv, -zeta * u1 * m_dirac_inv};
}

std::vector<std::pair<CMatrix, CMatrix>>
SchrodingerWeyl::eval_psi(const std::vector<double>& xs) const {
    const int m = dirac.profile.m;
    const Complex zeta = dirac.zeta;
    std::vector<std::pair<CMatrix, CMatrix>> out;
    out.reserve(xs.size());
    for (const CMatrix& u : dirac.evalU(xs)) {
        const CMatrix u1 = u.topRows(m);
        const CMatrix u2 = u.bottomRows(m);
        if (j == 1)
            out.emplace_back(u1, zeta * u2);
        else
            out.emplace_back(u2 * m_dirac_inv, -zeta * u1 * m_dirac_inv);
    }
    return out;
}

CMatrix SchrodingerWeyl::halfline_gram() const {
    if (j == 1)
        return dirac.halfline_gram(0);
    return m_dirac_inv.adjoint() * dirac.halfline_gram(1) * m_dirac_inv;
}

namespace {

SpectralPoint conj_point(SpectralPoint sp) {
    return from_zeta(std::conj(sp.zeta));
}

} // namespace

CMatrix green_schrodinger_halfline(const PotentialProfile& p, int j, SpectralPoint sp,
                                   double x0, int side, double x, double xp,
                                   const Numerics& num) {
    const PropagationOptions opts = PropagationOptions::from(num);
    const SpectralPoint spc = conj_point(sp);
    const auto psi = schrodinger_weyl(p, sp, x0, side, j, num);
    const auto psi_c = schrodinger_weyl(p, spc, x0, side, j, num);

    auto s_of = [&](Complex z, double at) {
        return fundamental_schrodinger(p, j, z, x0, at, opts).s;
    };

    if (side > 0) {
        if (x <= xp)
            return s_of(sp.z, x) * psi_c.eval_psi(xp).first.adjoint();
        return psi.eval_psi(x).first * s_of(spc.z, xp).adjoint();
    }
    // left half-line, overall minus sign
    if (xp <= x)
        return -(s_of(sp.z, x) * psi_c.eval_psi(xp).first.adjoint());
    return -(psi.eval_psi(x).first * s_of(spc.z, xp).adjoint());
}

CMatrix green_schrodinger_fullline(const PotentialProfile& p, int j, SpectralPoint sp,
                                   double x0, double x, double xp, const Numerics& num) {
    const SpectralPoint spc = conj_point(sp);
    const auto plus = schrodinger_weyl(p, sp, x0, +1, j, num);
    const auto minus = schrodinger_weyl(p, sp, x0, -1, j, num);
    const CMatrix winv = guarded_inverse(minus.Mhat - plus.Mhat,
                                         "green_schrodinger_fullline (Wronskian)",
                                         num.cond_max);
    if (x <= xp) {
        const auto plus_c = schrodinger_weyl(p, spc, x0, +1, j, num);
        return minus.eval_psi(x).first * winv * plus_c.eval_psi(xp).first.adjoint();
    }
    const auto minus_c = schrodinger_weyl(p, spc, x0, -1, j, num);
    return plus.eval_psi(x).first * winv * minus_c.eval_psi(xp).first.adjoint();
}

FullLineSchrodingerM fullline_m_schrodinger(const CMatrix& mhat_plus,
                                            const CMatrix& mhat_minus, int j,
                                            const Numerics& num) {
    FullLineSchrodingerM f;
    f.j = j;
    const CMatrix w = mhat_minus - mhat_plus;
    const CMatrix winv = guarded_inverse(w, "fullline_m_schrodinger", num.cond_max);
    f.m00 = winv;
    f.m01 = 0.5 * winv * (mhat_minus + mhat_plus);
    f.m10 = 0.5 * (mhat_minus + mhat_plus) * winv;
    f.m11 = mhat_plus * winv * mhat_minus;
    return f;
}

FullLineSchrodingerM fullline_m_schrodinger(const PotentialProfile& p, SpectralPoint sp,
                                            double x0, int j, const Numerics& num) {
    const auto plus = schrodinger_weyl(p, sp, x0, +1, j, num);
    const auto minus = schrodinger_weyl(p, sp, x0, -1, j, num);
    return fullline_m_schrodinger(plus.Mhat, minus.Mhat, j, num);
}

CMatrix FullLineSchrodingerM::as_matrix() const {
    const Eigen::Index m = m00.rows();
    CMatrix out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = m00;
    out.topRightCorner(m, m) = m01;
    out.bottomLeftCorner(m, m) = m10;
    out.bottomRightCorner(m, m) = m11;
    return out;
}

std::pair<KernelModeReport, KernelModeReport>
kernel_modes(const PotentialProfile& p, double L, const Numerics& num) {
    const int m = p.m;
    const PropagationOptions opts = PropagationOptions::from(num);
    const double x0 = p.segments.empty() ? 0.0 : 0.5 * (p.active_lo() + p.active_hi());

    auto report_for = [&](int j) {
        const LinearSystem sys = zero_mode_system(m, j);
        const double sgn = (j == 1) ? -1.0 : 1.0; // u' = sgn * phi * u
        const double xr = p.segments.empty() ? x0 : p.active_hi();
        const double xl = p.segments.empty() ? x0 : p.active_lo();

        const CMatrix s_right = propagate_interval(p, sys, x0, xr, CMatrix::Identity(m, m), opts);
        const CMatrix s_left = propagate_interval(p, sys, x0, xl, CMatrix::Identity(m, m), opts);

        // Channels that fail square-integrability by tail exponent sign.
        auto bad_rows = [&](const CMatrix& tail, const CMatrix& sol, bool right) {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(tail);
            const double tol = 1e-12 * (1.0 + tail.norm());
            std::vector<Eigen::Index> bad;
            for (Eigen::Index k = 0; k < m; ++k) {
                const double rate = sgn * es.eigenvalues()(k); // u ~ exp(rate * (x - xb))
                const bool decays = right ? (rate < -tol) : (rate > tol);
                if (!decays)
                    bad.push_back(k);
            }
            CMatrix rows(static_cast<Eigen::Index>(bad.size()), m);
            for (Eigen::Index r = 0; r < rows.rows(); ++r)
                rows.row(r) = es.eigenvectors().col(bad[r]).adjoint() * sol;
            return rows;
        };

        const CMatrix rows_r = bad_rows(p.tail_right, s_right, true);
        const CMatrix rows_l = bad_rows(p.tail_left, s_left, false);
        CMatrix constraint(rows_r.rows() + rows_l.rows(), m);
        constraint.topRows(rows_r.rows()) = rows_r;
        constraint.bottomRows(rows_l.rows()) = rows_l;

        KernelModeReport rep;
        rep.j = j;
        int rank = 0;
        if (constraint.rows() > 0) {
            Eigen::JacobiSVD<CMatrix> svd(constraint);
            const double thresh = 1e-8 * std::max(1.0, svd.singularValues()(0));
            for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
                if (svd.singularValues()(k) > thresh)
                    ++rank;
        }
        rep.dim_kernel = m - rank;

        const double scale_r = 1.0 + s_right.norm();
        const double scale_l = 1.0 + s_left.norm();
        for (int k = 0; k < m; ++k) {
            const double vr = rows_r.rows() ? rows_r.col(k).norm() : 0.0;
            const double vl = rows_l.rows() ? rows_l.col(k).norm() : 0.0;
            rep.column_l2.push_back(vr <= 1e-8 * scale_r && vl <= 1e-8 * scale_l);
        }

        std::vector<double> xs_r, xs_l;
        const int half = 10;
        for (int k = 0; k <= half; ++k) {
            xs_r.push_back(x0 + L * k / half);
            xs_l.push_back(x0 - L * k / half);
        }
        auto vr = propagate_points(p, sys, x0, xs_r, CMatrix::Identity(m, m), opts);
        auto vl = propagate_points(p, sys, x0, xs_l, CMatrix::Identity(m, m), opts);
        for (std::size_t k = vl.size(); k-- > 1;)
            rep.mode_samples.emplace_back(xs_l[k], vl[k]);
        for (std::size_t k = 0; k < vr.size(); ++k)
            rep.mode_samples.emplace_back(xs_r[k], vr[k]);
        return rep;
    };

    return {report_for(1), report_for(2)};
}

double SuiteReport::max_residual() const {
    double worst = 0.0;
    for (const auto& it : items)
        worst = std::max(worst, it.residual);
    return worst;
}

bool SuiteReport::all_pass() const {
    return std::all_of(items.begin(), items.end(),
                       [](const IdentityResidual& r) { return r.pass(); });
}

SuiteReport susy_identity_suite(const PotentialProfile& p, double x0, double tol,
                                const Numerics& num) {
    const int m = p.m;
    const PropagationOptions opts = PropagationOptions::from(num);
    const BoundaryFrame a0 = BoundaryFrame::alpha0(m);
    const CMatrix jmat = symplectic_j(m);
    const CMatrix s1 = pauli_s1(m);
    const CMatrix s3 = pauli_s3(m);

    const std::vector<Complex> zetas = {Complex(0.6, 0.8), Complex(0.25, 1.1),
                                        Complex(1.0, 0.45)};
    const std::vector<std::pair<double, double>> xpairs = {
        {-0.7, 0.4}, {0.3, 1.2}, {-1.3, -0.2}, {0.5, 0.5}};

    SuiteReport rep;
    auto add = [&](const std::string& name, double res, double tolerance) {
        rep.items.push_back({name, res, tolerance});
    };

    // Lagrange/symplectic identity of the fundamental frame.
    {
        double worst = 0.0;
        for (Complex zeta : zetas) {
            for (double x : {-1.6, -0.4, 0.8, 2.1}) {
                const auto f = propagate_dirac(p, zeta, x0, a0, x, opts);
                const auto fb = propagate_dirac(p, std::conj(zeta), x0, a0, x, opts);
                worst = std::max(worst,
                                 (fb.Psi.adjoint() * jmat * f.Psi - jmat).norm() /
                                     (1.0 + jmat.norm()));
            }
        }
        add("frame-symplectic", worst, tol);
    }

    // Dual-route Weyl solutions and the product duality of the two
    // Schrodinger M functions.
    {
        double worst_route = 0.0, worst_dual = 0.0;
        for (Complex zeta : zetas) {
            const auto sp = from_zeta(zeta);
            for (int side : {+1, -1}) {
                const auto w1 = schrodinger_weyl(p, sp, x0, side, 1, num);
                const auto w2 = schrodinger_weyl(p, sp, x0, side, 2, num);
                worst_route = std::max({worst_route, w1.route_residual, w2.route_residual});
                const CMatrix prod = w1.Mhat * w2.Mhat + sp.z * CMatrix::Identity(m, m);
                worst_dual =
                    std::max(worst_dual, prod.norm() / (1.0 + std::abs(sp.z)));
            }
        }
        add("dual-route-solutions", worst_route, tol);
        add("mhat-product-duality", worst_dual, tol);
    }

    // Block conjugations between the Dirac and Schrodinger full-line
    // matrices, plus the ordering consistency of the corner block.
    {
        double worst1 = 0.0, worst2 = 0.0, worst_ord = 0.0;
        for (Complex zeta : zetas) {
            const auto sp = from_zeta(zeta);
            const auto wp = halfline_m_dirac(p, sp, x0, a0, +1, {}, num);
            const auto wm = halfline_m_dirac(p, sp, x0, a0, -1, {}, num);
            const auto md = fullline_m_dirac(wp.M, wm.M, num);
            worst_ord = std::max(worst_ord, md.ordering_residual);

            const CMatrix mp_inv = guarded_inverse(wp.M, "suite", num.cond_max);
            const CMatrix mm_inv = guarded_inverse(wm.M, "suite", num.cond_max);

            const auto h1 = fullline_m_schrodinger(zeta * wp.M, zeta * wm.M, 1, num);
            CMatrix rhs1(2 * m, 2 * m);
            rhs1.topLeftCorner(m, m) = md.m00 / zeta;
            rhs1.topRightCorner(m, m) = md.m01;
            rhs1.bottomLeftCorner(m, m) = md.m10;
            rhs1.bottomRightCorner(m, m) = zeta * md.m11;
            worst1 = std::max(worst1, rel_residual(h1.as_matrix(), rhs1));

            const auto h2 =
                fullline_m_schrodinger(-zeta * mp_inv, -zeta * mm_inv, 2, num);
            CMatrix rhs2(2 * m, 2 * m);
            rhs2.topLeftCorner(m, m) = wp.M * md.m00 * wm.M / zeta;
            rhs2.topRightCorner(m, m) = -wp.M * md.m01 * mp_inv;
            rhs2.bottomLeftCorner(m, m) = -mm_inv * md.m10 * wm.M;
            rhs2.bottomRightCorner(m, m) = zeta * mm_inv * md.m11 * mp_inv;
            worst2 = std::max(worst2, rel_residual(h2.as_matrix(), rhs2));
        }
        add("block-map-h1", worst1, tol);
        add("block-map-h2", worst2, tol);
        add("corner-block-ordering", worst_ord, tol);
    }

    // Resolvent block structure: the Dirac kernel against the Schrodinger
    // kernels and quasi-derivative off-diagonal kernels.
    {
        double worst = 0.0;
        for (Complex zeta : {zetas[0], zetas[1]}) {
            const auto sp = from_zeta(zeta);
            const auto spc = conj_point(sp);
            std::vector<SchrodingerWeyl> w(5), wc(5);
            for (int j : {1, 2})
                for (int side : {+1, -1}) {
                    const int idx = 2 * (j - 1) + (side > 0 ? 0 : 1);
                    w[idx] = schrodinger_weyl(p, sp, x0, side, j, num);
                    wc[idx] = schrodinger_weyl(p, spc, x0, side, j, num);
                }
            for (auto [x, xp] : xpairs) {
                const CMatrix gd = green_dirac(p, sp, x0, a0, x, xp, num);

                CMatrix blocks(2 * m, 2 * m);
                for (int j : {1, 2}) {
                    const auto& wpj = w[2 * (j - 1)];
                    const auto& wmj = w[2 * (j - 1) + 1];
                    const auto& wpj_c = wc[2 * (j - 1)];
                    const auto& wmj_c = wc[2 * (j - 1) + 1];
                    const CMatrix winv = guarded_inverse(wmj.Mhat - wpj.Mhat,
                                                         "suite (resolvent)", num.cond_max);
                    const auto& near_w = (x <= xp) ? wmj : wpj;
                    const auto& far_w = (x <= xp) ? wpj_c : wmj_c;
                    const auto [psi, psi_qd] = near_w.eval_psi(x);
                    const CMatrix far = far_w.eval_psi(xp).first;
                    const CMatrix gj = psi * winv * far.adjoint();
                    const CMatrix gj_qd = psi_qd * winv * far.adjoint();
                    if (j == 1) {
                        blocks.topLeftCorner(m, m) = zeta * gj;
                        blocks.bottomLeftCorner(m, m) = gj_qd;
                    } else {
                        blocks.bottomRightCorner(m, m) = zeta * gj;
                        blocks.topRightCorner(m, m) = -gj_qd;
                    }
                }
                worst = std::max(worst, rel_residual(gd, blocks));
            }
        }
        add("resolvent-blocks", worst, tol);
    }

    // Pairing derivative identity for two frames at different energies.
    {
        std::mt19937 rng(42);
        std::normal_distribution<double> nd(0.0, 1.0);
        auto rand_mat = [&](int rows, int cols) {
            CMatrix c(rows, cols);
            for (int i = 0; i < c.size(); ++i)
                c.data()[i] = Complex(nd(rng), nd(rng));
            return c;
        };
        double worst = 0.0;
        const double a = -1.4, b = 1.2;
        for (std::size_t t = 0; t + 1 < zetas.size(); ++t) {
            const Complex z1 = zetas[t], z2 = zetas[t + 1];
            const CMatrix c1 = rand_mat(2 * m, 2 * m), c2 = rand_mat(2 * m, 2 * m);
            auto frame = [&](Complex zt, const CMatrix& c, double x) {
                return CMatrix(propagate_dirac(p, zt, x0, a0, x, opts).Psi * c);
            };
            const CMatrix lhs = frame(z1, c1, b).adjoint() * s1 * frame(z2, c2, b) -
                                frame(z1, c1, a).adjoint() * s1 * frame(z2, c2, a);
            auto rule = composite_gauss(a, b, p.kink_points(), 0.25);
            CMatrix quad = CMatrix::Zero(2 * m, 2 * m);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                quad += rule.weights[q] * (frame(z1, c1, rule.nodes[q]).adjoint() * s3 *
                                           frame(z2, c2, rule.nodes[q]));
            const CMatrix rhs = -(z2 + std::conj(z1)) * quad;
            worst = std::max(worst, rel_residual(lhs, rhs));
        }
        add("pairing-derivative", worst, tol);
    }

    // Odd symmetries at alpha0.
    {
        double worst_half = 0.0, worst_full = 0.0;
        for (Complex zeta : zetas) {
            const auto wp = halfline_m_dirac(p, from_zeta(zeta), x0, a0, +1, {}, num);
            const auto wm = halfline_m_dirac(p, from_zeta(zeta), x0, a0, -1, {}, num);
            const auto wpn = halfline_m_dirac(p, from_zeta(-zeta), x0, a0, +1, {}, num);
            const auto wmn = halfline_m_dirac(p, from_zeta(-zeta), x0, a0, -1, {}, num);
            worst_half = std::max({worst_half, rel_residual(wpn.M, CMatrix(-wp.M)),
                                   rel_residual(wmn.M, CMatrix(-wm.M))});
            const CMatrix full = fullline_m_dirac(wp.M, wm.M, num).as_matrix();
            const CMatrix full_n = fullline_m_dirac(wpn.M, wmn.M, num).as_matrix();
            worst_full = std::max(worst_full,
                                  rel_residual(full_n, CMatrix(-s3 * full * s3)));
        }
        add("odd-symmetry-halfline", worst_half, tol);
        add("odd-symmetry-fullline", worst_full, tol);
    }

    // Wronskian constancy and its match with the M-difference.
    {
        double worst_spread = 0.0, worst_match = 0.0;
        const auto sp = from_zeta(zetas[0]);
        const auto spc = conj_point(sp);
        for (int j : {1, 2}) {
            const auto plus_c = schrodinger_weyl(p, spc, x0, +1, j, num);
            const auto minus = schrodinger_weyl(p, sp, x0, -1, j, num);
            const CMatrix want = minus.Mhat - schrodinger_weyl(p, sp, x0, +1, j, num).Mhat;
            std::vector<double> xs;
            for (int k = 0; k < 20; ++k)
                xs.push_back(-2.2 + 4.4 * k / 19.0);
            CMatrix first;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                const auto [pp, pq] = plus_c.eval_psi(xs[k]);
                const auto [mp, mq] = minus.eval_psi(xs[k]);
                const CMatrix wr = wronskian(pp.adjoint(), pq.adjoint(), mp, mq);
                if (k == 0)
                    first = wr;
                worst_spread =
                    std::max(worst_spread, (wr - first).norm() / (1.0 + wr.norm()));
                worst_match = std::max(worst_match, rel_residual(wr, want));
            }
        }
        add("wronskian-constancy", worst_spread, std::max(tol, 1e-10));
        add("wronskian-matches-m-difference", worst_match, tol);
    }

    // Herglotz defect scan over a coarse upper half-plane grid.
    {
        double worst = 0.0;
        for (double re : {-0.8, 0.0, 0.9}) {
            for (double im : {0.4, 1.3}) {
                const Complex zeta(re, im);
                const auto sp = from_zeta(zeta);
                const auto wp = halfline_m_dirac(p, sp, x0, a0, +1, {}, num);
                const auto wm = halfline_m_dirac(p, sp, x0, a0, -1, {}, num);
                worst = std::max(worst, -herglotz_defect(wp.M));
                worst = std::max(worst, -herglotz_defect(CMatrix(-wm.M)));
                worst = std::max(worst, -herglotz_defect(fullline_m_dirac(wp.M, wm.M, num)
                                                             .as_matrix()));
                if (sp.z.imag() > 0.05) {
                    for (int j : {1, 2}) {
                        const auto w1 = schrodinger_weyl(p, sp, x0, +1, j, num);
                        const auto w2 = schrodinger_weyl(p, sp, x0, -1, j, num);
                        worst = std::max(worst, -herglotz_defect(w1.Mhat));
                        worst = std::max(worst, -herglotz_defect(CMatrix(-w2.Mhat)));
                        worst = std::max(
                            worst, -herglotz_defect(
                                       fullline_m_schrodinger(w1.Mhat, w2.Mhat, j, num)
                                           .as_matrix()));
                    }
                }
            }
        }
        add("herglotz-defect", std::max(0.0, worst), num.tol_psd);
    }

    // Half-line imaginary- and real-part accumulation identities.
    {
        double worst_im = 0.0, worst_re = 0.0;
        for (Complex zeta : {zetas[0], zetas[2]}) {
            const auto sp = from_zeta(zeta);
            for (int side : {+1, -1}) {
                for (int j : {1, 2}) {
                    const auto w = schrodinger_weyl(p, sp, x0, side, j, num);
                    const CMatrix im_m = (w.Mhat - w.Mhat.adjoint()) / Complex(0, 2);
                    const CMatrix quad = sp.z.imag() * w.halfline_gram();
                    worst_im = std::max(worst_im,
                                        (im_m - quad).norm() / (1.0 + quad.norm()));
                }
                const auto wd = halfline_m_dirac(p, sp, x0, a0, side, {}, num);
                const CMatrix re_m = 0.5 * (wd.M + wd.M.adjoint());
                const CMatrix quad =
                    zeta.real() * (wd.halfline_gram(0) - wd.halfline_gram(1));
                worst_re =
                    std::max(worst_re, (re_m - quad).norm() / (1.0 + quad.norm()));
            }
        }
        add("imaginary-part-identity", worst_im, 1e-5);
        add("real-part-identity", worst_re, 1e-6);
    }

    // Green kernel symmetry and independence rows.
    {
        double worst_adj = 0.0, worst_frame = 0.0, worst_ref = 0.0, worst_dirichlet = 0.0;
        const auto sp = from_zeta(zetas[0]);
        const auto spc = conj_point(sp);
        const BoundaryFrame rotated = BoundaryFrame::diag_rotation(m, 0.8);
        for (auto [x, xp] : {std::pair{-0.6, 0.5}, std::pair{0.2, 1.1}}) {
            const CMatrix gd = green_dirac(p, sp, x0, a0, x, xp, num);
            worst_frame = std::max(
                worst_frame, rel_residual(gd, green_dirac(p, sp, x0, rotated, x, xp, num)));
            worst_ref = std::max(
                worst_ref, rel_residual(gd, green_dirac(p, sp, x0 + 0.4, a0, x, xp, num)));
            for (int j : {1, 2}) {
                const CMatrix g = green_schrodinger_fullline(p, j, sp, x0, x, xp, num);
                const CMatrix gt = green_schrodinger_fullline(p, j, spc, x0, xp, x, num);
                worst_adj = std::max(worst_adj, rel_residual(CMatrix(g.adjoint()), gt));
            }
        }
        for (int j : {1, 2}) {
            for (int side : {+1, -1}) {
                const CMatrix g0 =
                    green_schrodinger_halfline(p, j, sp, x0, side, x0, x0 + 0.6 * side, num);
                worst_dirichlet = std::max(worst_dirichlet, g0.norm());
            }
        }
        add("green-adjoint-symmetry", worst_adj, tol);
        add("green-frame-independence", worst_frame, tol);
        add("green-refpoint-independence", worst_ref, tol);
        add("green-dirichlet-at-reference", worst_dirichlet, tol);
    }

    return rep;
}

} // namespace susyspec
