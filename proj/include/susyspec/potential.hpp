#pragma once

#include <functional>
#include <string>
#include <vector>

#include "susyspec/matcore.hpp"

namespace susyspec {

enum class SegmentKind { Constant, Linear, Samples };

// One piece of the coefficient phi.  Constant: data = {H}.  Linear:
// data = {H0, H1}, phi(x) = H0 + (x - lo) H1.  Samples: data holds values
// on an equally spaced grid over [lo, hi], linearly interpolated.
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    SegmentKind kind = SegmentKind::Constant;
    std::vector<CMatrix> data;

    CMatrix value(double x) const;      // right-limit convention at nodes
    CMatrix derivative(double x) const; // a.e. derivative inside the segment
    bool constant() const { return kind == SegmentKind::Constant; }
    // Interior kink positions (sample nodes), empty unless kind == Samples.
    std::vector<double> interior_nodes() const;
};

// Piecewise Hermitian m x m coefficient with constant tails.
struct PotentialProfile {
    int m = 1;
    std::vector<Segment> segments; // contiguous, ordered
    CMatrix tail_left;             // valid on (-inf, segments.front().lo]
    CMatrix tail_right;            // valid on [segments.back().hi, inf)

    double active_lo() const { return segments.empty() ? 0.0 : segments.front().lo; }
    double active_hi() const { return segments.empty() ? 0.0 : segments.back().hi; }

    // phi(x), right limit at breakpoints.
    CMatrix phi(double x) const;

    // Segment edges, ascending; empty for a globally constant profile.
    std::vector<double> breakpoints() const;
    // Breakpoints plus interior sample kinks; points where phi may lose smoothness.
    std::vector<double> kink_points() const;

    void validate() const; // throws ValidationError
};

CMatrix eval_phi(const PotentialProfile& p, double x);

struct DeltaTerm {
    double x;
    CMatrix weight; // Hermitian
};

// phi^2 + (-1)^j phi' on segment interiors plus the delta weights
// (-1)^j [phi(x+) - phi(x-)] at the discontinuities.
struct MiuraImage {
    int j = 1;
    std::function<CMatrix(double)> ac_part;
    std::vector<DeltaTerm> deltas;
};

MiuraImage miura_image(const PotentialProfile& p, int j);

// A parsed run configuration: the profile plus the reference point and
// numerics overrides from the [numerics] section.
struct Problem {
    PotentialProfile profile;
    double x0 = 0.0;
    Numerics numerics;
};

// Line-oriented config text -> validated Problem.
// Grammar:
//   [problem] m=<int> x0=<float>
//   [tails] left=<matrix> right=<matrix>
//   [segment] from=<float> to=<float> kind=constant|linear|samples data=<matrix|list>
//   [numerics] key=<float> ...
// Matrices: rows separated by ';', complex entries 'a+bi' separated by ','.
// Matrix lists (linear H0,H1 or sample grids) separated by '|'.
Problem parse_profile(const std::string& text);

// Single complex literal of the config grammar ("1", "-2.5i", "1+2i", ...).
Complex parse_complex(const std::string& token);
// Matrix literal "a,b;c,d".
CMatrix parse_matrix(const std::string& token, int m);

} // namespace susyspec
