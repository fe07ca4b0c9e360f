#include "susyspec/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "susyspec/spectral.hpp"
#include "susyspec/threading.hpp"
#include "susyspec/uniqueness.hpp"

namespace susyspec {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << fmt(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
}

void write_json(const Table& t, std::ostream& os) {
    nlohmann::json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(2) << "\n";
}

void emit(const Table& t, const std::string& path, const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file)
            throw ValidationError("cannot open output file '" + path + "'");
        os = &file;
    }
    if (format == "json")
        write_json(t, *os);
    else
        write_csv(t, *os);
}

Problem load_problem(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Problem prob = parse_profile(buf.str());
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParseError("override must be key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        double v = 0.0;
        auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (res.ec != std::errc() || res.ptr != val.data() + val.size())
            throw ParseError("bad numeric override '" + kv + "'");
        if (key == "tol_psd")
            prob.numerics.tol_psd = v;
        else if (key == "delta_spec")
            prob.numerics.delta_spec = v;
        else if (key == "cond_max")
            prob.numerics.cond_max = v;
        else if (key == "tol_ode")
            prob.numerics.tol_ode = v;
        else if (key == "overflow_guard")
            prob.numerics.overflow_guard = v;
        else if (key == "tail_decades")
            prob.numerics.tail_decades = v;
        else
            throw ParseError("unknown numerics override '" + key + "'");
    }
    return prob;
}

SpectralPoint point_for(Complex z, const Numerics& num) {
    if (z.imag() == 0.0 && z.real() < 0.0)
        return gap_point(z.real());
    return principal_zeta(z, num.delta_spec);
}

void append_matrix(std::vector<double>& row, const CMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c).real());
            row.push_back(m(r, c).imag());
        }
}

void matrix_columns(std::vector<std::string>& cols, const std::string& prefix, int rows,
                    int mcols) {
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < mcols; ++c) {
            cols.push_back(prefix + "_" + std::to_string(r) + std::to_string(c) + "_re");
            cols.push_back(prefix + "_" + std::to_string(r) + std::to_string(c) + "_im");
        }
}

std::vector<double> parse_grid(const std::string& spec) {
    // lo:hi:n, inclusive linear grid
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        double v = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw ParseError("bad grid '" + spec + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3 || parts[2] < 1)
        throw ParseError("grid must be lo:hi:n, got '" + spec + "'");
    const int n = static_cast<int>(parts[2]);
    std::vector<double> out;
    for (int k = 0; k < n; ++k)
        out.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * k / (n - 1));
    return out;
}

VectorFunction parse_test_function(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "indicator") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ParseError("indicator needs a,b");
        return VectorFunction::indicator(std::stod(args.substr(0, comma)),
                                         std::stod(args.substr(comma + 1)));
    }
    if (kind == "expabs") {
        if (args.empty())
            throw ParseError("expabs needs a radius");
        return VectorFunction::exp_abs(std::stod(args));
    }
    throw ParseError("unknown test function '" + spec + "' (use indicator:a,b or expabs:R)");
}

std::vector<double> parse_eps(const std::string& spec) {
    if (spec.empty())
        return default_eps_schedule();
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok));
    return out;
}

int cmd_mfun(const Problem& prob, const std::string& which,
             const std::vector<std::string>& zs, const std::string& output,
             const std::string& format) {
    const MFamily fam = make_family(prob.profile, prob.x0, which, prob.numerics);
    std::vector<Complex> points;
    for (const auto& zs_k : zs)
        points.push_back(parse_complex(zs_k));

    Table t;
    t.columns = {"re_z", "im_z"};
    matrix_columns(t.columns, "M", fam.rows, fam.rows);
    t.rows.resize(points.size());
    std::vector<CMatrix> values(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        // Dirac families take the momentum argument directly; Schrodinger
        // families go through the branch-aware energy map.
        if (fam.name.rfind("MD", 0) == 0) {
            values[i] = fam.eval(points[i]);
        } else {
            const auto sp = point_for(points[i], prob.numerics);
            values[i] = fam.eval(sp.z);
        }
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
        t.rows[i] = {points[i].real(), points[i].imag()};
        append_matrix(t.rows[i], values[i]);
    }
    emit(t, output, format);
    return 0;
}

int cmd_green(const Problem& prob, const std::string& which, const std::string& z_lit,
              double x, double xp, const std::string& output, const std::string& format) {
    const Complex z = parse_complex(z_lit);
    CMatrix g;
    if (which == "D") {
        g = green_dirac(prob.profile, from_zeta(z), prob.x0,
                        BoundaryFrame::alpha0(prob.profile.m), x, xp, prob.numerics);
    } else if (which == "H1" || which == "H2") {
        const int j = (which == "H1") ? 1 : 2;
        g = green_schrodinger_fullline(prob.profile, j, point_for(z, prob.numerics),
                                       prob.x0, x, xp, prob.numerics);
    } else if (which.size() == 7 && which.rfind("half", 2) == 2) {
        const int j = which[1] - '0';
        const int side = (which.back() == '+') ? +1 : -1;
        if ((j != 1 && j != 2) || (which.back() != '+' && which.back() != '-'))
            throw ParseError("unknown green kernel '" + which + "'");
        g = green_schrodinger_halfline(prob.profile, j, point_for(z, prob.numerics),
                                       prob.x0, side, x, xp, prob.numerics);
    } else {
        throw ParseError("unknown green kernel '" + which +
                         "' (use D, H1, H2, H1half+, H1half-, H2half+, H2half-)");
    }

    Table t;
    t.columns = {"re_z", "im_z", "x", "xp"};
    matrix_columns(t.columns, "G", static_cast<int>(g.rows()), static_cast<int>(g.cols()));
    t.rows.push_back({z.real(), z.imag(), x, xp});
    append_matrix(t.rows[0], g);
    emit(t, output, format);
    return 0;
}

int cmd_density(const Problem& prob, const std::string& which,
                const std::vector<double>& grid, const std::string& eps_spec,
                const std::string& output, const std::string& format) {
    const MFamily fam = make_family(prob.profile, prob.x0, which, prob.numerics);
    const auto est = spectral_density(fam, grid, parse_eps(eps_spec), prob.numerics);
    Table t;
    t.columns = {"lambda"};
    matrix_columns(t.columns, "density", fam.rows, fam.rows);
    t.columns.push_back("extrapolation_residual");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row = {grid[i]};
        append_matrix(row, est.densities[i]);
        row.push_back(est.residuals[i]);
        t.rows.push_back(std::move(row));
    }
    emit(t, output, format);
    return 0;
}

int cmd_transform(const Problem& prob, int j, const std::string& fspec,
                  const std::vector<double>& lambdas, const std::string& output,
                  const std::string& format) {
    const VectorFunction f = parse_test_function(fspec);
    Table t;
    t.columns = {"lambda"};
    for (int k = 0; k < prob.profile.m; ++k) {
        t.columns.push_back("h0_" + std::to_string(k) + "_re");
        t.columns.push_back("h0_" + std::to_string(k) + "_im");
    }
    for (int k = 0; k < prob.profile.m; ++k) {
        t.columns.push_back("h1_" + std::to_string(k) + "_re");
        t.columns.push_back("h1_" + std::to_string(k) + "_im");
    }
    std::vector<TransformCoefficients> values(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t i) {
        values[i] = transform_hat(prob.profile, j, f, prob.x0, lambdas[i], prob.numerics);
    });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        std::vector<double> row = {lambdas[i]};
        for (int k = 0; k < prob.profile.m; ++k) {
            row.push_back(values[i].h0(k).real());
            row.push_back(values[i].h0(k).imag());
        }
        for (int k = 0; k < prob.profile.m; ++k) {
            row.push_back(values[i].h1(k).real());
            row.push_back(values[i].h1(k).imag());
        }
        t.rows.push_back(std::move(row));
    }
    emit(t, output, format);
    return 0;
}

int cmd_verify(const Problem& prob, double tol, const std::string& output,
               const std::string& format) {
    const double use_tol = tol > 0 ? tol : (prob.profile.m == 1 ? 1e-8 : 1e-7);
    const auto rep = susy_identity_suite(prob.profile, prob.x0, use_tol, prob.numerics);

    std::size_t width = 0;
    for (const auto& item : rep.items)
        width = std::max(width, item.name.size());
    for (const auto& item : rep.items) {
        std::cout << (item.pass() ? "pass  " : "FAIL  ") << item.name
                  << std::string(width + 2 - item.name.size(), ' ')
                  << "residual " << fmt(item.residual) << "  tolerance "
                  << fmt(item.tolerance) << "\n";
    }
    std::cout << (rep.all_pass() ? "verification passed" : "verification FAILED")
              << " (max residual " << fmt(rep.max_residual()) << ")\n";

    if (!output.empty() && output != "-") {
        nlohmann::json j;
        for (const auto& item : rep.items)
            j["identities"].push_back({{"name", item.name},
                                       {"residual", item.residual},
                                       {"tolerance", item.tolerance},
                                       {"pass", item.pass()}});
        j["all_pass"] = rep.all_pass();
        if (format == "json") {
            std::ofstream os(output);
            os << j.dump(2) << "\n";
        } else {
            std::ofstream os(output);
            os << "name,residual,tolerance,pass\n";
            for (const auto& item : rep.items)
                os << item.name << "," << fmt(item.residual) << "," << fmt(item.tolerance)
                   << "," << (item.pass() ? 1 : 0) << "\n";
        }
    }
    return rep.all_pass() ? 0 : 4;
}

int cmd_bm(const Problem& prob, const std::string& config2,
           const std::vector<std::string>& overrides, double theta,
           const std::string& radii_spec, const std::string& output,
           const std::string& format) {
    const Problem prob2 = load_problem(config2, overrides);
    std::vector<double> radii;
    if (!radii_spec.empty()) {
        const auto lin = parse_grid(radii_spec);
        // log-spaced between the endpoints with the same count
        const double lo = lin.front(), hi = lin.back();
        const int n = static_cast<int>(lin.size());
        for (int k = 0; k < n; ++k)
            radii.push_back(n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
    }
    const auto fit = bm_decay_experiment(prob.profile, prob2.profile, prob.x0, theta,
                                         radii, prob.numerics);
    Table t;
    t.columns = {"radius", "delta",      "im_sqrt_z",   "used",
                 "theta",  "fitted_a",   "fit_residual"};
    for (std::size_t k = 0; k < fit.radii.size(); ++k) {
        t.rows.push_back({fit.radii[k], fit.deltas[k], fit.im_sqrt_z[k],
                          static_cast<double>(fit.used_points), fit.theta, fit.fitted_a,
                          fit.fit_residual});
    }
    emit(t, output, format);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Weyl-Titchmarsh data, Green kernels and spectral measures for "
                 "supersymmetric Dirac systems and their Schrodinger partners"};
    app.require_subcommand(1);

    std::string config, output = "-", format = "csv";
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "profile config file")->required();
        sub->add_option("--output", output, "output path ('-' for stdout)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--set", overrides, "numerics override key=value");
    };

    auto* mfun = app.add_subcommand("mfun", "evaluate an m-function family");
    std::string which = "Mhat+1";
    std::vector<std::string> zs;
    add_common(mfun);
    mfun->add_option("--which", which,
                     "MD+ MD- MDfull Mhat+1 Mhat-1 Mhat+2 Mhat-2 Mhat1 Mhat2");
    mfun->add_option("--z", zs, "energy points (momentum for MD families)")->required();

    auto* green = app.add_subcommand("green", "evaluate a Green kernel");
    std::string gwhich = "H1", gz = "-1";
    double gx = 0.0, gxp = 0.0;
    add_common(green);
    green->add_option("--which", gwhich, "D H1 H2 H1half+ H1half- H2half+ H2half-");
    green->add_option("--z", gz, "energy (momentum when --which=D)");
    green->add_option("--x", gx, "first argument");
    green->add_option("--xp", gxp, "second argument");

    auto* density = app.add_subcommand("density", "extrapolated spectral densities");
    std::string dwhich = "Mhat+1", dgrid, deps;
    std::vector<double> dlams;
    add_common(density);
    density->add_option("--which", dwhich, "m-function family");
    density->add_option("--lambda", dlams, "density evaluation points");
    density->add_option("--lambda-grid", dgrid, "lo:hi:n linear grid");
    density->add_option("--eps", deps, "comma-separated eps schedule");

    auto* transform = app.add_subcommand("transform", "generalized Fourier coefficients");
    int tj = 1;
    std::string tf = "indicator:0,1";
    std::vector<double> tlams;
    add_common(transform);
    transform->add_option("--j", tj, "operator index 1 or 2")->check(CLI::IsMember({1, 2}));
    transform->add_option("--f", tf, "test function: indicator:a,b or expabs:R");
    transform->add_option("--lambda", tlams, "transform evaluation points")->required();

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    double vtol = 0.0;
    add_common(verify);
    verify->add_option("--tol", vtol, "residual tolerance (default 1e-8, 1e-7 for m>1)");

    auto* bm = app.add_subcommand("bm", "high-energy decay fit for two coefficients");
    std::string config2, radii_spec;
    double theta = M_PI / 2;
    add_common(bm);
    bm->add_option("--config2", config2, "second profile config")->required();
    bm->add_option("--theta", theta, "ray angle in (0,pi) or (pi,2pi)");
    bm->add_option("--radii", radii_spec, "lo:hi:n log-spaced radii (default 4:400:12)");

    try {
        std::vector<const char*> argv;
        argv.push_back("susyspec");
        for (const auto& a : args)
            argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());

        const Problem prob = load_problem(config, overrides);
        if (mfun->parsed())
            return cmd_mfun(prob, which, zs, output, format);
        if (green->parsed())
            return cmd_green(prob, gwhich, gz, gx, gxp, output, format);
        if (density->parsed()) {
            std::vector<double> grid = dlams;
            if (!dgrid.empty()) {
                const auto more = parse_grid(dgrid);
                grid.insert(grid.end(), more.begin(), more.end());
            }
            if (grid.empty())
                throw ParseError("density needs --lambda or --lambda-grid");
            return cmd_density(prob, dwhich, grid, deps, output, format);
        }
        if (transform->parsed())
            return cmd_transform(prob, tj, tf, tlams, output, format);
        if (verify->parsed())
            return cmd_verify(prob, vtol, output, format);
        if (bm->parsed())
            return cmd_bm(prob, config2, overrides, theta, radii_spec, output, format);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // SpectrumProximity, IllConditioned, WindowTooSmall, DegenerateFit
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace susyspec
