// Acceptance suite: one pass/fail line per criterion, exit nonzero when any
// criterion fails.  Tolerances are pinned in code next to each check.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "susyspec/spectral.hpp"
#include "susyspec/uniqueness.hpp"

using namespace susyspec;

namespace {

int failures = 0;

void report(int number, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    if (!pass)
        ++failures;
}

PotentialProfile free_profile() {
    PotentialProfile p;
    p.m = 1;
    p.tail_left = CMatrix::Zero(1, 1);
    p.tail_right = CMatrix::Zero(1, 1);
    p.validate();
    return p;
}

PotentialProfile constant_profile(double c) {
    PotentialProfile p;
    p.m = 1;
    p.tail_left = c * CMatrix::Identity(1, 1);
    p.tail_right = c * CMatrix::Identity(1, 1);
    p.validate();
    return p;
}

PotentialProfile sign_profile(double c = 1.0) {
    PotentialProfile p;
    p.m = 1;
    p.tail_left = -c * CMatrix::Identity(1, 1);
    p.tail_right = c * CMatrix::Identity(1, 1);
    Segment l, r;
    l.lo = -1.0;
    l.hi = 0.0;
    l.data = {p.tail_left};
    r.lo = 0.0;
    r.hi = 1.0;
    r.data = {p.tail_right};
    p.segments = {l, r};
    p.validate();
    return p;
}

PotentialProfile sign_profile_truncated() {
    PotentialProfile p = sign_profile();
    p.tail_left = CMatrix::Zero(1, 1);
    p.tail_right = CMatrix::Zero(1, 1);
    p.validate();
    return p;
}

PotentialProfile noncomm_profile() {
    PotentialProfile p;
    p.m = 2;
    CMatrix s3(2, 2), s1(2, 2);
    s3 << 1, 0, 0, -1;
    s1 << 0, 1, 1, 0;
    p.tail_left = s3;
    p.tail_right = s1;
    Segment l, r;
    l.lo = -1.0;
    l.hi = 0.0;
    l.data = {s3};
    r.lo = 0.0;
    r.hi = 1.0;
    r.data = {s1};
    p.segments = {l, r};
    p.validate();
    return p;
}

std::string fmtres(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max residual %.3e", v);
    return buf;
}

// 1. Free-field closed forms to 1e-10 absolute.
void criterion_1() {
    const auto p = free_profile();
    const auto a0 = BoundaryFrame::alpha0(1);
    const auto sp = principal_zeta(Complex(-1, 0)); // zeta = i
    double worst = 0.0;

    const auto wp = halfline_m_dirac(p, sp, 0.0, a0, +1);
    const auto wm = halfline_m_dirac(p, sp, 0.0, a0, -1);
    worst = std::max(worst, std::abs(wp.M(0, 0) - Complex(0, 1)));
    worst = std::max(worst, std::abs(wm.M(0, 0) - Complex(0, -1)));

    worst = std::max(worst,
                     std::abs(schrodinger_weyl(p, sp, 0.0, +1, 1).Mhat(0, 0) - Complex(-1, 0)));
    worst = std::max(worst,
                     std::abs(schrodinger_weyl(p, sp, 0.0, -1, 1).Mhat(0, 0) - Complex(1, 0)));

    const CMatrix g1 = green_schrodinger_fullline(p, 1, sp, 0.0, 0.0, 1.0);
    worst = std::max(worst, std::abs(g1(0, 0) - 0.5 * std::exp(-1.0)));

    const CMatrix md = fullline_m_dirac(wp.M, wm.M).as_matrix();
    worst = std::max(worst, (md - Complex(0, 0.5) * CMatrix::Identity(2, 2)).norm());

    report(1, "free-field closed forms", worst <= 1e-10, fmtres(worst));
}

// 2. Constant-coefficient oracle plus the smooth-shift identity.
void criterion_2() {
    double worst = 0.0;
    for (double c : {0.5, 1.0, 2.0}) {
        const auto p = constant_profile(c);
        for (int k = 0; k < 10; ++k) {
            // ten points below c^2, spanning the negative axis and the gap
            const double z = -2.0 + k * (c * c * 0.999 + 2.0) / 9.0;
            const auto sp = z < 0.0 ? principal_zeta(Complex(z, 0)) : gap_point(z);
            const auto w1 = schrodinger_weyl(p, sp, 0.0, +1, 1);
            // c + i sqrt(z - c^2); below c^2 the root is i*sqrt(c^2 - z)
            const Complex want = Complex(c - std::sqrt(c * c - z), 0.0);
            worst = std::max(worst, std::abs(w1.Mhat(0, 0) - want) / std::abs(want));

            // shift identity: Mhat_1 - Mhat_2 = 2 phi(x0) for smooth phi
            const auto w2 = schrodinger_weyl(p, sp, 0.0, +1, 2);
            worst = std::max(worst,
                             std::abs((w1.Mhat(0, 0) - w2.Mhat(0, 0)) - Complex(2 * c, 0)) /
                                 (2 * c));
        }
    }
    report(2, "constant-coefficient oracle and shift identity", worst <= 1e-9,
           fmtres(worst));
}

// 3. Distributional zero mode of the sign profile.
void criterion_3() {
    const auto p = sign_profile();
    double worst = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const CMatrix g = green_schrodinger_fullline(p, 1, gap_point(-eps), 0.0, 0.0, 0.0);
        const double got = eps * g(0, 0).real();
        const double want = eps / (2.0 * (std::sqrt(1.0 + eps) - 1.0));
        worst = std::max(worst, std::abs(got - want) / want);
    }
    bool pass = worst <= 1e-6;

    const CMatrix g2 = green_schrodinger_fullline(p, 2, gap_point(-1e-6), 0.0, 0.0, 0.0);
    const double g2err = std::abs(g2(0, 0).real() - 0.25);
    pass = pass && (g2err <= 1e-6);

    const auto [k1, k2] = kernel_modes(p);
    pass = pass && (k1.dim_kernel == 1) && (k2.dim_kernel == 0);

    char buf[96];
    std::snprintf(buf, sizeof(buf), "pole rel %.2e, partner err %.2e, dims (%d,%d)", worst,
                  g2err, k1.dim_kernel, k2.dim_kernel);
    report(3, "distributional zero mode of the sign coefficient", pass, buf);
}

// 4. Herglotz suite on a 5x5 upper half-plane grid for three profiles.
void criterion_4() {
    double worst = 0.0;
    for (const auto& p : {free_profile(), sign_profile(), noncomm_profile()}) {
        const auto a0 = BoundaryFrame::alpha0(p.m);
        for (double re : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
            for (double im : {0.2, 0.6, 1.0, 1.7, 2.5}) {
                const Complex zeta(re, im);
                const auto sp = from_zeta(zeta);
                const auto wp = halfline_m_dirac(p, sp, 0.0, a0, +1);
                const auto wm = halfline_m_dirac(p, sp, 0.0, a0, -1);
                worst = std::max(worst, -herglotz_defect(wp.M));
                worst = std::max(worst, -herglotz_defect(CMatrix(-wm.M)));
                worst = std::max(worst,
                                 -herglotz_defect(fullline_m_dirac(wp.M, wm.M).as_matrix()));
            }
        }
        // Schrodinger families on a 5x5 grid in the energy plane
        for (double re : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            for (double im : {0.3, 0.8, 1.4, 2.1, 3.0}) {
                const auto sp = principal_zeta(Complex(re, im));
                for (int j : {1, 2}) {
                    const auto w1 = schrodinger_weyl(p, sp, 0.0, +1, j);
                    const auto w2 = schrodinger_weyl(p, sp, 0.0, -1, j);
                    worst = std::max(worst, -herglotz_defect(w1.Mhat));
                    worst = std::max(worst, -herglotz_defect(CMatrix(-w2.Mhat)));
                    worst = std::max(
                        worst,
                        -herglotz_defect(
                            fullline_m_schrodinger(w1.Mhat, w2.Mhat, j).as_matrix()));
                }
            }
        }
    }
    report(4, "Herglotz defect on the upper half-plane grid", worst <= 1e-10,
           fmtres(std::max(worst, 0.0)));
}

// 5. The identity suite on the scalar and matrix profiles.
void criterion_5() {
    bool pass = true;
    double shown = 0.0;
    const std::vector<const char*> algebraic = {
        "frame-symplectic",     "dual-route-solutions", "mhat-product-duality",
        "block-map-h1",         "block-map-h2",         "corner-block-ordering",
        "resolvent-blocks",     "pairing-derivative",   "odd-symmetry-halfline",
        "odd-symmetry-fullline"};
    auto run = [&](const PotentialProfile& p, double tol) {
        const auto rep = susy_identity_suite(p, 0.0, tol);
        for (const auto& item : rep.items) {
            for (const char* name : algebraic) {
                if (item.name == name) {
                    pass = pass && (item.residual <= tol);
                    shown = std::max(shown, item.residual);
                }
            }
        }
    };
    run(free_profile(), 1e-8);
    run(sign_profile(), 1e-8);
    run(noncomm_profile(), 1e-7);
    report(5, "supersymmetric identity suite", pass, fmtres(shown));
}

// 6. Fundamental imaginary-part identity on the sign profile.
void criterion_6() {
    const auto p = sign_profile();
    double worst = 0.0;
    const std::vector<Complex> zs = {Complex(-0.6, 0.9), Complex(0.4, 1.3),
                                     Complex(-1.5, 0.5), Complex(1.2, 2.0),
                                     Complex(-0.3, 2.6)};
    for (const Complex z : zs) {
        const auto sp = principal_zeta(z);
        for (int j : {1, 2}) {
            const auto w = schrodinger_weyl(p, sp, 0.0, +1, j);
            const CMatrix im_m = (w.Mhat - w.Mhat.adjoint()) / Complex(0, 2);
            const CMatrix quad = z.imag() * w.halfline_gram();
            worst = std::max(worst, (im_m - quad).norm() / quad.norm());
        }
    }
    report(6, "imaginary-part accumulation identity", worst <= 1e-5, fmtres(worst));
}

// 7. Wronskian constancy across 20 samples.
void criterion_7() {
    double worst = 0.0;
    for (const auto& p : {sign_profile(), noncomm_profile()}) {
        const auto sp = principal_zeta(Complex(-0.7, 1.1));
        const auto spc = from_zeta(std::conj(sp.zeta));
        for (int j : {1, 2}) {
            const auto plus_c = schrodinger_weyl(p, spc, 0.0, +1, j);
            const auto minus = schrodinger_weyl(p, sp, 0.0, -1, j);
            CMatrix first;
            for (int k = 0; k < 20; ++k) {
                const double x = -2.3 + 4.6 * k / 19.0;
                const auto [pp, pq] = plus_c.eval_psi(x);
                const auto [mp, mq] = minus.eval_psi(x);
                const CMatrix w = wronskian(pp.adjoint(), pq.adjoint(), mp, mq);
                if (k == 0)
                    first = w;
                else
                    worst = std::max(worst, (w - first).norm() / (1.0 + w.norm()));
            }
        }
    }
    report(7, "Wronskian constancy", worst <= 1e-10, fmtres(worst));
}

// 8. Stieltjes inversion against the closed-form densities.
void criterion_8() {
    const auto fam_free = make_family(free_profile(), 0.0, "Mhat+1");
    double worst_free = 0.0;
    for (double lam : {1.0, 4.0, 9.0}) {
        const auto est = spectral_density(fam_free, {lam});
        const double want = std::sqrt(lam) / M_PI;
        worst_free = std::max(worst_free,
                              std::abs(est.densities[0](0, 0).real() - want) / want);
    }
    const auto fam_sign = make_family(sign_profile(), 0.0, "Mhat+2");
    const auto est2 = spectral_density(fam_sign, {2.0});
    const double want2 = 1.0 / M_PI;
    const double err2 = std::abs(est2.densities[0](0, 0).real() - want2) / want2;
    const bool pass = (worst_free <= 1e-4) && (err2 <= 1e-3);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "free rel %.2e, partner rel %.2e", worst_free, err2);
    report(8, "Stieltjes inversion with extrapolation", pass, buf);
}

// 9. Windowed Parseval comparison.
void criterion_9() {
    const auto rep_free = parseval_check(free_profile(), 1,
                                         VectorFunction::indicator(0.0, 1.0), 0.0, 400.0,
                                         60, {}, 0.02);
    const auto rep_sign = parseval_check(sign_profile(), 1, VectorFunction::exp_abs(12.0),
                                         0.0, 400.0, 60, {}, 0.05);
    const bool pass = rep_free.relative_error <= 0.02 && rep_sign.relative_error <= 0.05;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "free rel %.2e, zero-mode rel %.2e",
                  rep_free.relative_error, rep_sign.relative_error);
    report(9, "Parseval window comparison", pass, buf);
}

// 10. High-energy decay fit for the truncated pair.
void criterion_10() {
    const auto p1 = sign_profile();
    const auto p2 = sign_profile_truncated();
    const auto up = bm_decay_experiment(p1, p2, 0.0, M_PI / 2);
    const auto down = bm_decay_experiment(p1, p2, 0.0, 3 * M_PI / 2);
    bool pass = up.fitted_a >= 0.9 && up.fitted_a <= 1.1 && down.fitted_a >= 0.9 &&
                down.fitted_a <= 1.1;

    // identical profiles: every delta at the numerical floor
    bool identical_ok = false;
    try {
        bm_decay_experiment(p1, p1, 0.0, M_PI / 2);
    } catch (const DegenerateFit&) {
        identical_ok = true; // all points below 1e-14 were dropped
    }
    // spot check the actual difference magnitude
    const auto sp = principal_zeta(Complex(0, 25.0));
    const double delta_same = (fullline_m_schrodinger(p1, sp, 0.0, 1).as_matrix() -
                               fullline_m_schrodinger(p1, sp, 0.0, 1).as_matrix())
                                  .norm();
    identical_ok = identical_ok && delta_same <= 1e-12;
    pass = pass && identical_ok;

    char buf[96];
    std::snprintf(buf, sizeof(buf), "fitted a: %.3f (upper ray), %.3f (lower ray)",
                  up.fitted_a, down.fitted_a);
    report(10, "high-energy decay fit of the truncated pair", pass, buf);
}

// 11. Essential isospectrality of the pair away from zero.
void criterion_11() {
    const auto p = sign_profile();
    const auto fam1 = make_family(p, 0.0, "Mhat1");
    const auto fam2 = make_family(p, 0.0, "Mhat2");
    const std::vector<double> grid = {1.5, 2.0, 3.0};
    const auto est1 = spectral_density(fam1, grid);
    const auto est2 = spectral_density(fam2, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t1 = est1.densities[i].trace().real();
        const double t2 = est2.densities[i].trace().real();
        worst = std::max(worst, std::abs(t1 - t2));
    }
    // the atom at zero belongs to the first operator only
    const double mass1 = atom_mass(fam1, 0.0).trace().real();
    const double mass2 = atom_mass(fam2, 0.0).trace().real();
    const bool pass = worst <= 1e-3 && mass1 > 0.9 && mass1 < 1.1 && mass2 < 1e-3;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "trace diff %.2e, masses %.3f / %.1e", worst, mass1,
                  mass2);
    report(11, "essential isospectrality with the probed atom", pass, buf);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
