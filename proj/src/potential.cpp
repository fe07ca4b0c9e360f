#include "susyspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>

namespace susyspec {

static constexpr double kHermTol = 1e-13;
static constexpr double kJoinTol = 1e-12;

CMatrix Segment::value(double x) const {
    switch (kind) {
    case SegmentKind::Constant:
        return data[0];
    case SegmentKind::Linear:
        return data[0] + (x - lo) * data[1];
    case SegmentKind::Samples: {
        const std::size_t n = data.size();
        if (n == 1)
            return data[0];
        const double h = (hi - lo) / static_cast<double>(n - 1);
        double t = (x - lo) / h;
        auto k = static_cast<std::ptrdiff_t>(std::floor(t));
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 2);
        const double w = t - static_cast<double>(k);
        return (1.0 - w) * data[k] + w * data[k + 1];
    }
    }
    return data[0];
}

CMatrix Segment::derivative(double x) const {
    switch (kind) {
    case SegmentKind::Constant:
        return CMatrix::Zero(data[0].rows(), data[0].cols());
    case SegmentKind::Linear:
        return data[1];
    case SegmentKind::Samples: {
        const std::size_t n = data.size();
        if (n == 1)
            return CMatrix::Zero(data[0].rows(), data[0].cols());
        const double h = (hi - lo) / static_cast<double>(n - 1);
        auto k = static_cast<std::ptrdiff_t>(std::floor((x - lo) / h));
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 2);
        return (data[k + 1] - data[k]) / h;
    }
    }
    return CMatrix::Zero(data[0].rows(), data[0].cols());
}

std::vector<double> Segment::interior_nodes() const {
    std::vector<double> out;
    if (kind != SegmentKind::Samples || data.size() < 3)
        return out;
    const double h = (hi - lo) / static_cast<double>(data.size() - 1);
    for (std::size_t k = 1; k + 1 < data.size(); ++k)
        out.push_back(lo + h * static_cast<double>(k));
    return out;
}

CMatrix PotentialProfile::phi(double x) const {
    if (segments.empty())
        return tail_left; // == tail_right after validate()
    if (x < segments.front().lo)
        return tail_left;
    if (x >= segments.back().hi)
        return tail_right;
    // Right-limit convention: at a shared edge take the segment starting there.
    for (const auto& s : segments) {
        if (x >= s.lo && x < s.hi)
            return s.value(x);
    }
    return tail_right;
}

std::vector<double> PotentialProfile::breakpoints() const {
    std::vector<double> pts;
    for (const auto& s : segments) {
        if (pts.empty())
            pts.push_back(s.lo);
        pts.push_back(s.hi);
    }
    return pts;
}

std::vector<double> PotentialProfile::kink_points() const {
    std::vector<double> pts = breakpoints();
    for (const auto& s : segments)
        for (double t : s.interior_nodes())
            pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    return pts;
}

void PotentialProfile::validate() const {
    if (m < 1)
        throw ValidationError("profile: m must be >= 1");
    auto check_mat = [&](const CMatrix& h, const std::string& where) {
        if (h.rows() != m || h.cols() != m)
            throw ValidationError("profile: " + where + " is not " + std::to_string(m) +
                                  "x" + std::to_string(m));
        if (!h.allFinite())
            throw ValidationError("profile: " + where + " has a non-finite entry");
        if (!is_hermitian(h, kHermTol))
            throw ValidationError("profile: " + where + " is not Hermitian");
    };
    check_mat(tail_left, "tail left");
    check_mat(tail_right, "tail right");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        const std::string where = "segment " + std::to_string(i + 1);
        if (!(s.hi > s.lo))
            throw ValidationError("profile: " + where + " has empty extent");
        if (s.data.empty())
            throw ValidationError("profile: " + where + " has no data");
        if (s.kind == SegmentKind::Linear && s.data.size() != 2)
            throw ValidationError("profile: " + where + " linear kind needs two matrices");
        if (s.kind == SegmentKind::Constant && s.data.size() != 1)
            throw ValidationError("profile: " + where + " constant kind needs one matrix");
        if (s.kind == SegmentKind::Samples && s.data.size() < 2)
            throw ValidationError("profile: " + where + " samples kind needs >= 2 matrices");
        for (std::size_t k = 0; k < s.data.size(); ++k)
            check_mat(s.data[k], where + " matrix " + std::to_string(k + 1));
        if (i > 0) {
            const double gap = s.lo - segments[i - 1].hi;
            if (std::abs(gap) > kJoinTol * (1.0 + std::abs(s.lo)))
                throw ValidationError("profile: gap or overlap between segment " +
                                      std::to_string(i) + " and segment " +
                                      std::to_string(i + 1));
        }
    }
    if (segments.empty() &&
        (tail_left - tail_right).norm() > kJoinTol * (1.0 + tail_left.norm()))
        throw ValidationError(
            "profile: with no segments the tails must agree (jump location undefined)");
}

CMatrix eval_phi(const PotentialProfile& p, double x) {
    return p.phi(x);
}

MiuraImage miura_image(const PotentialProfile& p, int j) {
    if (j != 1 && j != 2)
        throw ValidationError("miura_image: j must be 1 or 2");
    const double sign = (j == 1) ? -1.0 : 1.0; // (-1)^j

    MiuraImage img;
    img.j = j;
    // copy so the callable owns its data
    PotentialProfile prof = p;
    img.ac_part = [prof, sign](double x) -> CMatrix {
        const CMatrix v = prof.phi(x);
        CMatrix der = CMatrix::Zero(prof.m, prof.m);
        for (const auto& s : prof.segments) {
            if (x >= s.lo && x < s.hi) {
                der = s.derivative(x);
                break;
            }
        }
        return v * v + sign * der;
    };

    // Jumps can only sit at segment edges.
    const double eps = 0.0; // limits are evaluated analytically
    (void)eps;
    std::vector<double> edges = p.breakpoints();
    for (double b : edges) {
        CMatrix left = p.m ? CMatrix(p.m, p.m) : CMatrix();
        // Left limit: value of the piece ending at b.
        if (!p.segments.empty() && b <= p.segments.front().lo)
            left = p.tail_left;
        else {
            left = p.tail_left;
            for (const auto& s : p.segments) {
                if (b > s.lo && b <= s.hi) {
                    left = s.value(b); // segment formulas are continuous up to hi
                    break;
                }
            }
        }
        const CMatrix right = p.phi(b); // right limit by convention
        const CMatrix jump = right - left;
        if (jump.norm() > 1e-13 * (1.0 + left.norm() + right.norm()))
            img.deltas.push_back({b, sign * jump});
    }
    return img;
}

// --- config parsing -------------------------------------------------------

Complex parse_complex(const std::string& token) {
    // forms: a | bi | a+bi | a-bi, with a,b float literals; also "i", "-i".
    const std::string t = token;
    if (t.empty())
        throw ParseError("empty complex literal");

    auto parse_real = [](std::string s, double& out) -> bool {
        if (s == "+" || s.empty())
            s = "1";
        else if (s == "-")
            s = "-1";
        if (!s.empty() && s.front() == '+')
            s.erase(s.begin()); // from_chars rejects a leading plus
        const char* b = s.data();
        const char* e = s.data() + s.size();
        auto res = std::from_chars(b, e, out);
        return res.ec == std::errc() && res.ptr == e;
    };

    // trailing 'i' -> pure imaginary or find the split sign
    if (t.back() == 'i') {
        std::string body = t.substr(0, t.size() - 1);
        // find a '+' or '-' that is not at position 0 and not part of an exponent
        std::size_t split = std::string::npos;
        for (std::size_t k = body.size(); k-- > 1;) {
            const char c = body[k];
            if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        double re = 0.0, im = 0.0;
        if (split == std::string::npos) {
            if (!parse_real(body, im))
                throw ParseError("bad complex literal '" + token + "'");
            return {0.0, im};
        }
        if (!parse_real(body.substr(0, split), re) || !parse_real(body.substr(split), im))
            throw ParseError("bad complex literal '" + token + "'");
        return {re, im};
    }
    double re = 0.0;
    if (!parse_real(t, re))
        throw ParseError("bad complex literal '" + token + "'");
    return {re, 0.0};
}

CMatrix parse_matrix(const std::string& token, int m) {
    std::vector<std::vector<Complex>> rows;
    std::stringstream ss(token);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<Complex> entries;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ','))
            entries.push_back(parse_complex(cell));
        rows.push_back(std::move(entries));
    }
    if (rows.empty())
        throw ParseError("empty matrix literal");
    const std::size_t n = rows.size();
    if (m > 0 && n != static_cast<std::size_t>(m))
        throw ParseError("matrix literal has " + std::to_string(n) + " rows, expected " +
                         std::to_string(m));
    CMatrix out(n, rows[0].size());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != rows[0].size())
            throw ParseError("ragged matrix literal");
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    if (out.cols() != out.rows())
        throw ParseError("matrix literal is not square");
    return out;
}

static std::vector<std::pair<std::string, std::string>>
split_key_values(const std::string& rest, int lineno) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::stringstream ss(rest);
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                             tok + "'");
        kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return kv;
}

static std::vector<CMatrix> parse_matrix_list(const std::string& token, int m) {
    std::vector<CMatrix> out;
    std::stringstream ss(token);
    std::string part;
    while (std::getline(ss, part, '|'))
        out.push_back(parse_matrix(part, m));
    return out;
}

Problem parse_profile(const std::string& text) {
    Problem prob;
    bool saw_problem = false, saw_tails = false;
    std::string tails_left, tails_right;
    struct RawSegment {
        double from, to;
        std::string kind, data;
        int line;
    };
    std::vector<RawSegment> raw_segments;

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        // strip comments and whitespace
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::stringstream ls(line);
        std::string head;
        if (!(ls >> head))
            continue;
        std::string rest;
        std::getline(ls, rest);

        auto need = [&](const std::vector<std::pair<std::string, std::string>>& kv,
                        const std::string& key) -> std::string {
            for (const auto& [k, v] : kv)
                if (k == key)
                    return v;
            throw ParseError("line " + std::to_string(lineno) + ": missing '" + key + "='");
        };
        auto to_double = [&](const std::string& v, const std::string& key) -> double {
            double out = 0.0;
            auto res = std::from_chars(v.data(), v.data() + v.size(), out);
            if (res.ec != std::errc() || res.ptr != v.data() + v.size())
                throw ParseError("line " + std::to_string(lineno) + ": bad float for '" + key +
                                 "': '" + v + "'");
            return out;
        };

        if (head == "[problem]") {
            auto kv = split_key_values(rest, lineno);
            const std::string ms = need(kv, "m");
            int m = 0;
            auto res = std::from_chars(ms.data(), ms.data() + ms.size(), m);
            if (res.ec != std::errc() || res.ptr != ms.data() + ms.size() || m < 1)
                throw ParseError("line " + std::to_string(lineno) + ": bad m='" + ms + "'");
            prob.profile.m = m;
            prob.x0 = to_double(need(kv, "x0"), "x0");
            saw_problem = true;
        } else if (head == "[tails]") {
            auto kv = split_key_values(rest, lineno);
            tails_left = need(kv, "left");
            tails_right = need(kv, "right");
            saw_tails = true;
        } else if (head == "[segment]") {
            auto kv = split_key_values(rest, lineno);
            RawSegment rs;
            rs.from = to_double(need(kv, "from"), "from");
            rs.to = to_double(need(kv, "to"), "to");
            rs.kind = need(kv, "kind");
            rs.data = need(kv, "data");
            rs.line = lineno;
            raw_segments.push_back(std::move(rs));
        } else if (head == "[numerics]") {
            auto kv = split_key_values(rest, lineno);
            for (const auto& [k, v] : kv) {
                const double val = to_double(v, k);
                if (k == "tol_psd")
                    prob.numerics.tol_psd = val;
                else if (k == "delta_spec")
                    prob.numerics.delta_spec = val;
                else if (k == "cond_max")
                    prob.numerics.cond_max = val;
                else if (k == "tol_ode")
                    prob.numerics.tol_ode = val;
                else if (k == "overflow_guard")
                    prob.numerics.overflow_guard = val;
                else if (k == "tail_decades")
                    prob.numerics.tail_decades = val;
                else
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": unknown numerics key '" + k + "'");
            }
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown section '" + head +
                             "'");
        }
    }

    if (!saw_problem)
        throw ParseError("missing [problem] section");
    if (!saw_tails)
        throw ParseError("missing [tails] section");

    const int m = prob.profile.m;
    prob.profile.tail_left = parse_matrix(tails_left, m);
    prob.profile.tail_right = parse_matrix(tails_right, m);

    std::sort(raw_segments.begin(), raw_segments.end(),
              [](const RawSegment& a, const RawSegment& b) { return a.from < b.from; });
    for (const auto& rs : raw_segments) {
        Segment seg;
        seg.lo = rs.from;
        seg.hi = rs.to;
        if (rs.kind == "constant")
            seg.kind = SegmentKind::Constant;
        else if (rs.kind == "linear")
            seg.kind = SegmentKind::Linear;
        else if (rs.kind == "samples")
            seg.kind = SegmentKind::Samples;
        else
            throw ParseError("line " + std::to_string(rs.line) + ": unknown kind '" + rs.kind +
                             "'");
        seg.data = parse_matrix_list(rs.data, m);
        prob.profile.segments.push_back(std::move(seg));
    }

    prob.profile.validate();
    return prob;
}

} // namespace susyspec
