#include "susyspec/uniqueness.hpp"

#include <cmath>
#include <sstream>

namespace susyspec {

std::vector<double> default_bm_radii() {
    std::vector<double> radii;
    const int n = 12;
    for (int k = 0; k < n; ++k)
        radii.push_back(4.0 * std::pow(100.0, static_cast<double>(k) / (n - 1)));
    return radii;
}

DecayFit bm_decay_experiment(const PotentialProfile& p1, const PotentialProfile& p2,
                             double x0, double theta, std::vector<double> radii,
                             const Numerics& num) {
    if (p1.m != p2.m)
        throw ValidationError("bm_decay_experiment: coefficient dimensions differ");
    const double arg = std::fmod(theta, 2.0 * M_PI);
    if (std::abs(arg) < 1e-12 || std::abs(arg - M_PI) < 1e-12)
        throw ValidationError("bm_decay_experiment: the ray must avoid the real axis");
    if (radii.empty())
        radii = default_bm_radii();
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1]))
            throw ValidationError("bm_decay_experiment: radii must be strictly increasing");

    DecayFit fit;
    fit.theta = theta;
    fit.radii = radii;

    for (double r : radii) {
        const Complex z = r * Complex(std::cos(theta), std::sin(theta));
        const auto sp = principal_zeta(z, num.delta_spec);
        const CMatrix d1 = fullline_m_schrodinger(p1, sp, x0, 1, num).as_matrix();
        const CMatrix d2 = fullline_m_schrodinger(p2, sp, x0, 1, num).as_matrix();
        fit.deltas.push_back((d1 - d2).norm());
        fit.im_sqrt_z.push_back(sp.zeta.imag());
    }

    // log||delta|| - (1/2) log|z| against t = -2 Im sqrt(z)
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (fit.deltas[k] <= 1e-14)
            continue;
        ts.push_back(-2.0 * fit.im_sqrt_z[k]);
        ys.push_back(std::log(fit.deltas[k]) - 0.5 * std::log(radii[k]));
    }
    fit.used_points = static_cast<int>(ts.size());
    if (fit.used_points < 3) {
        std::ostringstream os;
        os << "bm_decay_experiment: only " << fit.used_points
           << " usable radii above the 1e-14 floor (profiles may be identical)";
        throw DegenerateFit(os.str());
    }

    double tbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        tbar += ts[k];
        ybar += ys[k];
    }
    tbar /= ts.size();
    ybar /= ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sxy += (ts[k] - tbar) * (ys[k] - ybar);
        sxx += (ts[k] - tbar) * (ts[k] - tbar);
    }
    fit.fitted_a = sxy / sxx;

    double ss = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double pred = ybar + fit.fitted_a * (ts[k] - tbar);
        ss += (ys[k] - pred) * (ys[k] - pred);
    }
    fit.fit_residual = std::sqrt(ss / ts.size());
    return fit;
}

} // namespace susyspec
