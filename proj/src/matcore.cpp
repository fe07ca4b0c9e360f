#include "susyspec/matcore.hpp"

#include <cmath>
#include <sstream>

namespace susyspec {

static double dist_to_positive_axis(Complex z) {
    if (z.real() >= 0.0)
        return std::abs(z.imag());
    return std::abs(z);
}

SpectralPoint principal_zeta(Complex z, double delta_spec) {
    const double d = dist_to_positive_axis(z);
    if (d <= delta_spec) {
        std::ostringstream os;
        os << "principal_zeta: z = (" << z.real() << ", " << z.imag()
           << ") within " << delta_spec << " of the essential-spectrum axis [0,inf)";
        throw SpectrumProximity(os.str());
    }
    Complex zeta = std::sqrt(z);
    if (zeta.imag() < 0.0)
        zeta = -zeta;
    return {z, zeta};
}

SpectralPoint gap_point(double z) {
    if (z >= 0.0)
        return {Complex(z, 0.0), Complex(std::sqrt(z), 0.0)};
    return {Complex(z, 0.0), Complex(0.0, std::sqrt(-z))};
}

SpectralPoint from_zeta(Complex zeta) {
    return {zeta * zeta, zeta};
}

// Diagonal Pade approximants of exp with the usual degree thresholds; the
// scaled norm stays under theta_13 so at most a handful of squarings remain.
namespace {

CMatrix pade_exp(const CMatrix& a, const std::vector<double>& b) {
    const Eigen::Index n = a.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix a2 = a * a;
    CMatrix u = b[1] * id;
    CMatrix v = b[0] * id;
    CMatrix pow = id;
    for (std::size_t k = 2; k < b.size(); k += 2) {
        pow = pow * a2;
        v += b[k] * pow;
        if (k + 1 < b.size())
            u += b[k + 1] * pow;
    }
    u = a * u;
    return (v - u).partialPivLu().solve(v + u);
}

} // namespace

CMatrix mat_exp(const CMatrix& a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols())
        throw ValidationError("mat_exp: matrix must be square");
    if (!a.allFinite())
        throw ValidationError("mat_exp: non-finite entry");

    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200,
                                           25200,    1512,    56,      1};
    static const std::vector<double> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
    static const std::vector<double> b13 = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff(); // 1-norm
    if (norm <= 1.495585217958292e-2)
        return pade_exp(a, b3);
    if (norm <= 2.539398330063230e-1)
        return pade_exp(a, b5);
    if (norm <= 9.504178996162932e-1)
        return pade_exp(a, b7);
    if (norm <= 2.097847961257068)
        return pade_exp(a, b9);

    const double theta13 = 5.371920351148152;
    int squarings = 0;
    if (norm > theta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    CMatrix r = pade_exp(a / std::pow(2.0, squarings), b13);
    for (int k = 0; k < squarings; ++k)
        r = r * r;
    return r;
}

double herglotz_defect(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw ValidationError("herglotz_defect: matrix must be square");
    const CMatrix im = (m - m.adjoint()) / Complex(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(im, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double rcond_estimate(const CMatrix& a) {
    return a.partialPivLu().rcond();
}

CMatrix guarded_inverse(const CMatrix& a, const char* what, double cond_max) {
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double rc = lu.rcond();
    if (!(rc > 1.0 / cond_max)) {
        std::ostringstream os;
        os << what << ": matrix inversion refused, condition estimate "
           << (rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity())
           << " exceeds " << cond_max;
        throw IllConditioned(os.str());
    }
    return lu.inverse();
}

CMatrix guarded_solve(const CMatrix& a, const CMatrix& rhs, const char* what,
                      double cond_max) {
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double rc = lu.rcond();
    if (!(rc > 1.0 / cond_max)) {
        std::ostringstream os;
        os << what << ": linear solve refused, condition estimate "
           << (rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity())
           << " exceeds " << cond_max;
        throw IllConditioned(os.str());
    }
    return lu.solve(rhs);
}

bool is_hermitian(const CMatrix& a, double tol) {
    if (a.rows() != a.cols())
        return false;
    return (a - a.adjoint()).norm() <= tol * (1.0 + a.norm());
}

double rel_residual(const CMatrix& a, const CMatrix& b) {
    return (a - b).norm() / (1.0 + std::max(a.norm(), b.norm()));
}

} // namespace susyspec
