#include "susyspec/weyl.hpp"

#include <cmath>
#include <sstream>

#include "susyspec/quadrature.hpp"

namespace susyspec {

CMatrix WeylTail::evalU(double x) const {
    const Eigen::Index m = V.rows();
    CVector e(m);
    for (Eigen::Index k = 0; k < m; ++k)
        e(k) = std::exp(-w(k) * static_cast<double>(side) * (x - x_match));
    const CMatrix eg = e.asDiagonal() * G;
    CMatrix u(2 * m, G.cols());
    u.topRows(m) = V * eg;
    u.bottomRows(m) = V * (d.asDiagonal() * eg);
    return u;
}

CMatrix WeylTail::gram(int which) const {
    const Eigen::Index m = V.rows();
    // V unitary makes every core diagonal: the (k,l) cross terms carry
    // V*V = I between the channel exponentials.
    CVector core(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double decay = 2.0 * w(k).real();
        switch (which) {
        case 0:
            core(k) = 1.0 / decay;
            break;
        case 1:
            core(k) = std::norm(d(k)) / decay;
            break;
        case 2:
            core(k) = std::conj(d(k)) / decay;
            break;
        default:
            core(k) = (1.0 + std::norm(d(k))) / decay;
            break;
        }
    }
    // Oriented: for side -1 the half-line integral runs from x_match to -inf.
    const double orient = (side > 0) ? 1.0 : -1.0;
    return orient * (G.adjoint() * core.asDiagonal() * G);
}

namespace {

struct TailChannels {
    CMatrix V;
    CVector c; // real eigenvalues of the tail coefficient
    CVector w; // sqrt(c_k^2 - zeta^2), Re > 0
    CVector d; // (c_k - side w_k)/zeta
    double min_re_w = 0.0;
};

TailChannels tail_channels(const CMatrix& h_tail, Complex zeta, int side) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h_tail);
    TailChannels t;
    t.V = es.eigenvectors();
    const Eigen::Index m = h_tail.rows();
    t.c.resize(m);
    t.w.resize(m);
    t.d.resize(m);
    if (std::abs(zeta) < 1e-14)
        throw SpectrumProximity("halfline_m_dirac: zeta = 0 is not admissible");
    double min_re = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < m; ++k) {
        const double c = es.eigenvalues()(k);
        const Complex wk = std::sqrt(Complex(c * c, 0.0) - zeta * zeta);
        t.c(k) = c;
        t.w(k) = wk;
        t.d(k) = (Complex(c, 0.0) - static_cast<double>(side) * wk) / zeta;
        min_re = std::min(min_re, wk.real());
    }
    t.min_re_w = min_re;
    if (!(min_re > 1e-12)) {
        std::ostringstream os;
        os << "halfline_m_dirac: tail channel has vanishing decay rate at zeta = ("
           << zeta.real() << ", " << zeta.imag() << ")";
        throw SpectrumProximity(os.str());
    }
    return t;
}

} // namespace

HalfLineDiracWeyl halfline_m_dirac(const PotentialProfile& p, SpectralPoint sp, double x0,
                                   const BoundaryFrame& alpha, int side,
                                   std::optional<double> L, const Numerics& num) {
    if (side != 1 && side != -1)
        throw ValidationError("halfline_m_dirac: side must be +1 or -1");
    alpha.validate();
    const int m = p.m;
    const Complex zeta = sp.zeta;
    const CMatrix h_tail = (side > 0) ? p.tail_right : p.tail_left;
    const TailChannels tc = tail_channels(h_tail, zeta, side);

    double x_b = x0;
    if (!p.segments.empty())
        x_b = (side > 0) ? std::max(p.active_hi(), x0) : std::min(p.active_lo(), x0);

    const PropagationOptions opts = PropagationOptions::from(num);
    const LinearSystem sys = dirac_system(m, zeta);

    // decaying frame at the matching point
    CMatrix f(2 * m, m);
    f.topRows(m) = tc.V;
    f.bottomRows(m) = tc.V * tc.d.asDiagonal();

    // Propagate to x0 with QR renormalization per smooth piece; S tracks the
    // accumulated right factor so the tail coefficient stays available.
    CMatrix s_acc = CMatrix::Identity(m, m);
    {
        std::vector<double> cuts = p.kink_points();
        std::vector<double> path;
        const double lo = std::min(x_b, x0), hi = std::max(x_b, x0);
        path.push_back(x_b);
        if (x_b > x0) {
            for (auto it = cuts.rbegin(); it != cuts.rend(); ++it)
                if (*it > lo + 1e-14 && *it < hi - 1e-14)
                    path.push_back(*it);
        } else {
            for (double t : cuts)
                if (t > lo + 1e-14 && t < hi - 1e-14)
                    path.push_back(t);
        }
        path.push_back(x0);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            f = propagate_interval(p, sys, path[i], path[i + 1], std::move(f), opts);
            Eigen::HouseholderQR<CMatrix> qr(f);
            CMatrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
            CMatrix q = qr.householderQ() * CMatrix::Identity(2 * m, m);
            f = q;
            s_acc = s_acc * guarded_inverse(r, "halfline_m_dirac (frame renormalization)",
                                            num.cond_max);
        }
    }

    // Express in the Psi(zeta, ., x0, alpha) basis; the frame matrix is unitary.
    const CMatrix coeff = alpha.frame_matrix().adjoint() * f;
    const CMatrix c1 = coeff.topRows(m);
    const CMatrix c2 = coeff.bottomRows(m);

    HalfLineDiracWeyl out;
    out.side = side;
    out.zeta = zeta;
    out.x0 = x0;
    out.alpha = alpha;
    out.M = c2 * guarded_inverse(c1, "halfline_m_dirac (Weyl frame)", num.cond_max);
    out.trunc_L = x_b;
    out.suggested_L =
        L.value_or(x_b + static_cast<double>(side) * num.tail_decades / tc.min_re_w);
    out.profile = p;
    out.opts = opts;

    out.tail.x_match = x_b;
    out.tail.side = side;
    out.tail.V = tc.V;
    out.tail.w = tc.w;
    out.tail.d = tc.d;
    // U(x) = Psi(x) (I;M) agrees with the tail frame times S C1^{-1}.
    out.tail.G = s_acc * guarded_inverse(c1, "halfline_m_dirac (tail coefficient)",
                                         num.cond_max);

    // Diagnostic: re-propagate (I;M) to the matching point and compare with
    // the tail-frame representation there.
    {
        CMatrix u0(2 * m, m);
        u0.topRows(m) = CMatrix::Identity(m, m);
        u0.bottomRows(m) = out.M;
        u0 = alpha.frame_matrix() * u0;
        const CMatrix u_b = propagate_interval(p, sys, x0, x_b, u0, opts);
        const CMatrix u_tail = out.tail.evalU(x_b);
        out.tail_residual = (u_b - u_tail).norm() / (1.0 + u_tail.norm());
    }
    return out;
}

CMatrix HalfLineDiracWeyl::evalU(double x) const {
    const int m = profile.m;
    const bool on_tail = (side > 0) ? (x >= tail.x_match) : (x <= tail.x_match);
    if (on_tail)
        return tail.evalU(x);
    CMatrix u0(2 * m, m);
    u0.topRows(m) = CMatrix::Identity(m, m);
    u0.bottomRows(m) = M;
    u0 = alpha.frame_matrix() * u0;
    return propagate_interval(profile, dirac_system(m, zeta), x0, x, std::move(u0), opts);
}

std::vector<CMatrix> HalfLineDiracWeyl::evalU(const std::vector<double>& xs) const {
    const int m = profile.m;
    std::vector<CMatrix> out(xs.size());
    // tail points are free; interior points share one sweep
    std::vector<double> interior;
    std::vector<std::size_t> interior_idx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool on_tail = (side > 0) ? (xs[i] >= tail.x_match) : (xs[i] <= tail.x_match);
        if (on_tail) {
            out[i] = tail.evalU(xs[i]);
        } else {
            interior.push_back(xs[i]);
            interior_idx.push_back(i);
        }
    }
    if (!interior.empty()) {
        CMatrix u0(2 * m, m);
        u0.topRows(m) = CMatrix::Identity(m, m);
        u0.bottomRows(m) = M;
        u0 = alpha.frame_matrix() * u0;
        auto vals = propagate_points(profile, dirac_system(m, zeta), x0, interior, u0, opts);
        for (std::size_t k = 0; k < vals.size(); ++k)
            out[interior_idx[k]] = std::move(vals[k]);
    }
    return out;
}

CMatrix HalfLineDiracWeyl::halfline_gram(int which) const {
    const int m = profile.m;
    const double a = std::min(x0, tail.x_match);
    const double b = std::max(x0, tail.x_match);
    CMatrix active = CMatrix::Zero(m, m);
    if (b > a) {
        QuadratureRule rule = composite_gauss(a, b, profile.kink_points(), 0.25);
        std::vector<double> nodes = rule.nodes;
        std::vector<double> weights = rule.weights;
        if (side < 0) { // sweep away from x0
            std::reverse(nodes.begin(), nodes.end());
            std::reverse(weights.begin(), weights.end());
        }
        auto us = evalU(nodes);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const CMatrix& u = us[i];
            const CMatrix u1 = u.topRows(m);
            const CMatrix u2 = u.bottomRows(m);
            CMatrix term;
            switch (which) {
            case 0:
                term = u1.adjoint() * u1;
                break;
            case 1:
                term = u2.adjoint() * u2;
                break;
            case 2:
                term = u2.adjoint() * u1;
                break;
            default:
                term = u1.adjoint() * u1 + u2.adjoint() * u2;
                break;
            }
            active += weights[i] * term;
        }
        if (side < 0)
            active = -active; // oriented from x0 toward -inf
    }
    return active + tail.gram(which);
}

std::vector<std::pair<double, CMatrix>>
weyl_solutions_dirac(const HalfLineDiracWeyl& data, const std::vector<double>& xs) {
    std::vector<std::pair<double, CMatrix>> out;
    auto vals = data.evalU(xs);
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.emplace_back(xs[i], std::move(vals[i]));
    return out;
}

CMatrix rotate_boundary_frame(const CMatrix& m_gamma, const BoundaryFrame& alpha,
                              const BoundaryFrame& gamma, const Numerics& num) {
    alpha.validate();
    gamma.validate();
    const int m = static_cast<int>(m_gamma.rows());
    const CMatrix ag = alpha.alpha * gamma.alpha.adjoint();
    const CMatrix ajg = alpha.alpha * symplectic_j(m) * gamma.alpha.adjoint();
    const CMatrix num_part = -ajg + ag * m_gamma;
    const CMatrix den_part = ag + ajg * m_gamma;
    return num_part * guarded_inverse(den_part, "rotate_boundary_frame", num.cond_max);
}

FullLineDiracM fullline_m_dirac(const CMatrix& m_plus, const CMatrix& m_minus,
                                const Numerics& num) {
    FullLineDiracM f;
    const CMatrix w = m_minus - m_plus;
    const CMatrix winv = guarded_inverse(w, "fullline_m_dirac", num.cond_max);
    f.m00 = winv;
    f.m01 = 0.5 * winv * (m_minus + m_plus);
    f.m10 = 0.5 * (m_minus + m_plus) * winv;
    f.m11 = m_plus * winv * m_minus;
    const CMatrix alt = m_minus * winv * m_plus;
    f.ordering_residual = rel_residual(f.m11, alt);
    return f;
}

CMatrix FullLineDiracM::as_matrix() const {
    const Eigen::Index m = m00.rows();
    CMatrix out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = m00;
    out.topRightCorner(m, m) = m01;
    out.bottomLeftCorner(m, m) = m10;
    out.bottomRightCorner(m, m) = m11;
    return out;
}

CMatrix green_dirac(const PotentialProfile& p, SpectralPoint sp, double x0,
                    const BoundaryFrame& alpha, double x, double xp, const Numerics& num) {
    const Complex zeta = sp.zeta;
    const Complex zeta_bar = std::conj(zeta);
    const auto wm = halfline_m_dirac(p, sp, x0, alpha, -1, {}, num);
    const auto wp = halfline_m_dirac(p, sp, x0, alpha, +1, {}, num);
    const CMatrix winv = guarded_inverse(wm.M - wp.M, "green_dirac", num.cond_max);

    const SpectralPoint sp_bar = from_zeta(zeta_bar);
    if (x <= xp) {
        const auto wp_bar = halfline_m_dirac(p, sp_bar, x0, alpha, +1, {}, num);
        return wm.evalU(x) * winv * wp_bar.evalU(xp).adjoint();
    }
    const auto wm_bar = halfline_m_dirac(p, sp_bar, x0, alpha, -1, {}, num);
    return wp.evalU(x) * winv * wm_bar.evalU(xp).adjoint();
}

} // namespace susyspec
