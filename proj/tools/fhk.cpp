// fhk: sharp trace-Hardy constants on half-spaces and convex cones, with
// anisotropic (Finsler) norms.  Subcommands tabulate the constants, verify
// the inequality on families of test functions, sweep the cutoff-extremal
// Rayleigh quotient, and scan the extremal solution's PDE residual.
//
// Exit codes: 0 success; 2 invalid parameters or config; 3 degenerate cone
// normalization; 4 violated inequality or residual bound; 5 quadrature
// refinement did not converge; 6 Rayleigh sweep not monotone.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fhk/fhk.hpp"
#include "fhk/io.hpp"

namespace {

using namespace fhk;

struct OutputOpts {
    std::string format = "csv";
    std::string out;  // empty: stdout
};

void add_output_opts(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "write the table to this file instead of stdout");
}

void emit(const OutputOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + o.out);
    f << text;
}

struct QuadOpts {
    double r_in = 1e-2;
    double r_out = 1e2;
    std::string res;  // "n_radial,n_angular,n_sphere"
};

void add_quad_opts(CLI::App* cmd, QuadOpts& q, bool with_window = true) {
    if (with_window) {
        cmd->add_option("--r-in", q.r_in, "inner truncation radius")
            ->capture_default_str();
        cmd->add_option("--r-out", q.r_out, "outer truncation radius")
            ->capture_default_str();
    }
    cmd->add_option("--res", q.res,
                    "quadrature resolution as n_radial,n_angular,n_sphere");
}

// default_n_radial: commands that integrate mollifier bumps ask for more
// radial nodes than the library default, because the bump edges are smooth
// but not analytic and the halved refinement pass needs headroom to clear
// the convergence gate for any seed.
QuadratureSpec make_spec(const QuadOpts& q, int default_n_radial = 0) {
    QuadratureSpec spec;
    spec.r_in = q.r_in;
    spec.r_out = q.r_out;
    if (!q.res.empty()) {
        int nr = 0, na = 0, ns = 0;
        char tail = 0;
        if (std::sscanf(q.res.c_str(), "%d,%d,%d%c", &nr, &na, &ns, &tail) != 3)
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "--res wants three comma-separated counts, got '" +
                            q.res + "'");
        spec.n_radial = nr;
        spec.n_angular = na;
        spec.n_sphere = ns;
    } else if (default_n_radial > 0) {
        spec.n_radial = default_n_radial;
    }
    spec.validate();
    return spec;
}

// euclidean | pnorm:<p> | quad:<dim*dim entries, row-major>
FinslerNorm parse_norm(const std::string& s, std::size_t dim) {
    if (s == "euclidean") return FinslerNorm::euclidean(dim);
    if (s.rfind("pnorm:", 0) == 0) {
        double p = 0.0;
        char tail = 0;
        if (std::sscanf(s.c_str() + 6, "%lf%c", &p, &tail) != 1)
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "cannot parse p in '" + s + "'");
        return FinslerNorm::p_norm(p, dim);
    }
    if (s.rfind("quad:", 0) == 0) {
        std::vector<double> entries;
        std::istringstream in(s.substr(5));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            std::size_t used = 0;
            entries.push_back(std::stod(tok, &used));
            if (used != tok.size())
                throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                            "bad matrix entry '" + tok + "' in --norm");
        }
        if (entries.size() != dim * dim)
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "quad: norm in dimension " + std::to_string(dim) +
                            " needs " + std::to_string(dim * dim) +
                            " row-major entries, got " +
                            std::to_string(entries.size()));
        Mat M(dim);
        M.a = entries;
        return FinslerNorm::weighted_quadratic(M);
    }
    throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                "unknown norm family '" + s +
                    "' (want euclidean, pnorm:<p>, or quad:<entries>)");
}

// Flat key=value config support: "--config FILE" expands into "--key value"
// tokens appended after the command line, and a key already given as a flag
// is skipped, so explicit flags win.  '#' starts a comment, blank lines are
// ignored, keys mirror the long option names without the leading dashes.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file: " + path);
    const auto given = [&args](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    const auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string line;
    while (std::getline(f, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (!trim(line).empty())
                throw std::runtime_error("config line is not key=value: " +
                                         trim(line));
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config line has an empty key: " + line);
        if (!given("--" + key)) {
            args.push_back("--" + key);
            args.push_back(trim(line.substr(eq + 1)));
        }
    }
    return args;
}

void add_config_opt(CLI::App* cmd, std::string& sink) {
    cmd->add_option("--config", sink,
                    "flat key=value config file; explicit flags override it");
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::DEGENERATE_CONE:
            return 3;
        case ErrorCode::QUADRATURE_NOT_CONVERGED:
            return 5;
        default:
            return 2;
    }
}

template <typename Body>
int run_guarded(const Body& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "fhk: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "fhk: " << e.what() << "\n";
        return 2;
    }
}

// ---- constants --------------------------------------------------------------

struct ConstantsOpts {
    std::vector<int> Ns{4};
    std::vector<double> betas{2.0};
    std::vector<double> alphas{0.0};
    OutputOpts out;
};

int cmd_constants(const ConstantsOpts& o) {
    std::vector<SharpConstantReport> rows;
    rows.reserve(o.Ns.size() * o.betas.size() * o.alphas.size());
    for (int N : o.Ns)
        for (double beta : o.betas)
            for (double alpha : o.alphas)
                rows.push_back(sharp_constant_report(N, beta, alpha));
    emit(o.out, o.out.format == "json" ? json_table(rows)
                                       : csv_table(kConstantsHeader, rows));
    return 0;
}

// ---- verify-halfspace / verify-cone ------------------------------------------

struct VerifyOpts {
    int N = 4;
    double beta = 2.0;
    double alpha = 0.0;
    std::string norm = "euclidean";
    int bumps = 5;
    std::uint32_t seed = 1;
    std::optional<double> k_override;
    QuadOpts quad;
    OutputOpts out;
};

int cmd_verify(const VerifyOpts& o) {
    ProblemParams{o.N, o.beta}.validate();
    const FinslerNorm H =
        parse_norm(o.norm, static_cast<std::size_t>(o.N) - 1);
    const QuadratureSpec spec = make_spec(o.quad, /*default_n_radial=*/96);
    const double K = o.k_override
                         ? *o.k_override
                         : sharp_constant_cone(o.N, o.beta, o.alpha);
    const double s_lo = std::log(spec.r_in), s_hi = std::log(spec.r_out);
    if (s_hi - s_lo < 1.0)
        throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                    "bump suite needs log(r_out/r_in) >= 1");

    std::mt19937 rng(o.seed);
    std::uniform_real_distribution<double> ulen(
        0.5, std::min(3.0, s_hi - s_lo - 0.2));
    std::uniform_real_distribution<double> ua(-0.4, 0.4), ub(-0.3, 0.3),
        u01(0.0, 1.0);

    std::vector<VerifyRow> rows;
    rows.reserve(o.bumps);
    bool violated = false;
    for (int i = 0; i < o.bumps; ++i) {
        const double len = ulen(rng);
        const double s0 = s_lo + 0.1 + (s_hi - s_lo - 0.2 - len) * u01(rng);
        const TestFunction u = TestFunction::bump(
            std::exp(s0), std::exp(s0 + len), ua(rng), ub(rng));
        const IntegralResult E = energy_integral(u, H, spec, o.alpha);
        const IntegralResult Hd =
            hardy_integral(u, H, o.beta, spec, o.alpha);
        const IntegralResult B = boundary_integral(u, H, spec, o.alpha);
        InequalityReport rep;
        rep.rhs_energy = E.value;
        rep.hardy_term = Hd.value;
        rep.lhs_boundary = K * B.value;
        rep.slack = rep.rhs_energy - rep.hardy_term - rep.lhs_boundary;
        rep.error_estimate = E.error + Hd.error + std::abs(K) * B.error;
        if (rep.slack < -rep.error_estimate) violated = true;
        rows.push_back({o.N, o.beta, o.alpha, u.family(), u.support_lo(),
                        u.support_hi(), rep});
    }
    emit(o.out, o.out.format == "json" ? json_table(rows)
                                       : csv_table(kVerifyHeader, rows));
    return violated ? 4 : 0;
}

// ---- rayleigh-sweep -----------------------------------------------------------

struct RayleighOpts {
    int N = 4;
    double beta = 2.0;
    std::string norm = "euclidean";
    int j_min = 1;
    int j_max = 4;
    QuadOpts quad;  // resolution only; windows come from j
    OutputOpts out;
};

int cmd_rayleigh(const RayleighOpts& o) {
    ProblemParams{o.N, o.beta}.validate();
    if (o.j_min < 1 || o.j_max < o.j_min)
        throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                    "sweep needs 1 <= j_min <= j_max");
    const FinslerNorm H =
        parse_norm(o.norm, static_cast<std::size_t>(o.N) - 1);
    const double K = sharp_constant_halfspace(o.N, o.beta);
    const ExtremalSolution sol(H, o.N, o.beta);

    std::vector<RayleighRow> rows;
    bool monotone = true;
    double prev_q = 0.0, prev_err = 0.0;
    for (int j = o.j_min; j <= o.j_max; ++j) {
        const double r = std::pow(10.0, -j), R = std::pow(10.0, j);
        QuadOpts q = o.quad;
        q.r_in = 0.5 * r;
        q.r_out = 2.0 * R;
        const QuadratureSpec spec = make_spec(q);
        const TestFunction u = TestFunction::cutoff_extremal(sol, r, R);
        const IntegralResult E = energy_integral(u, H, spec);
        const IntegralResult Hd = hardy_integral(u, H, o.beta, spec);
        const IntegralResult B = boundary_integral(u, H, spec);
        if (std::abs(B.value) < 1e-14)
            throw Error(ErrorCode::ZERO_BOUNDARY_TRACE,
                        "cutoff extremal lost its boundary trace");
        const double quotient = (E.value - Hd.value) / B.value;
        const double err = (E.error + Hd.error +
                            std::abs(quotient) * B.error) /
                           std::abs(B.value);
        if (j > o.j_min && quotient > prev_q + (err + prev_err))
            monotone = false;
        rows.push_back({j, r, R, quotient, quotient / K});
        prev_q = quotient;
        prev_err = err;
    }
    emit(o.out, o.out.format == "json" ? json_table(rows)
                                       : csv_table(kRayleighHeader, rows));
    return monotone ? 0 : 6;
}

// ---- residuals ----------------------------------------------------------------

struct ResidualOpts {
    int N = 4;
    double beta = 2.0;
    std::string norm = "euclidean";
    std::string grid;  // "n_rho,n_theta"
    QuadOpts quad;     // reuses the radial window as the rho range
    OutputOpts out;
};

int cmd_residuals(const ResidualOpts& o) {
    ProblemParams{o.N, o.beta}.validate();
    const FinslerNorm H =
        parse_norm(o.norm, static_cast<std::size_t>(o.N) - 1);
    int n_rho = 10, n_theta = 10;
    if (!o.grid.empty()) {
        char tail = 0;
        if (std::sscanf(o.grid.c_str(), "%d,%d%c", &n_rho, &n_theta, &tail) !=
                2 ||
            n_rho < 1 || n_theta < 1)
            throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                        "--grid wants n_rho,n_theta, got '" + o.grid + "'");
    }
    if (!(o.quad.r_in > 0.0) || !(o.quad.r_out > o.quad.r_in))
        throw Error(ErrorCode::PARAM_OUT_OF_RANGE,
                    "rho range needs 0 < r_in < r_out");
    const ExtremalSolution sol(H, o.N, o.beta);

    // Generic ray: unequal components so anisotropic norms are exercised
    // away from their symmetry axes; scaled so H0(unit) = 1 and the polar
    // radius of (rho cos(theta) unit, rho sin(theta)) is exactly rho.
    Vec dir(H.dim(), 1.0);
    for (std::size_t i = 0; i < dir.size(); ++i)
        dir[i] = 1.0 + 0.35 * static_cast<double>(i);
    const Vec unit = dir * (1.0 / H.dual_value(dir));

    const double tol_factor = H.kind() == NormKind::EUCLIDEAN ? 1e-4 : 1e-3;
    const double th_lo = 0.02, th_hi = M_PI / 2.0 - 0.05;
    std::vector<ResidualRow> rows;
    rows.reserve(static_cast<std::size_t>(n_rho) * n_theta);
    bool all_pass = true;
    for (int i = 0; i < n_rho; ++i) {
        const double frac_r =
            n_rho == 1 ? 0.5 : static_cast<double>(i) / (n_rho - 1);
        const double rho =
            o.quad.r_in * std::pow(o.quad.r_out / o.quad.r_in, frac_r);
        for (int m = 0; m < n_theta; ++m) {
            const double frac_t =
                n_theta == 1 ? 0.5 : static_cast<double>(m) / (n_theta - 1);
            const double theta = th_lo + (th_hi - th_lo) * frac_t;
            const Vec x = unit * (rho * std::cos(theta));
            const double t = rho * std::sin(theta);
            const double res = sol.pde_residual(x, t);
            const double tol =
                tol_factor * std::abs(sol.value(x, t)) / (rho * rho);
            const bool pass = res <= tol;
            all_pass = all_pass && pass;
            rows.push_back({rho, theta, res, tol, pass});
        }
    }
    emit(o.out, o.out.format == "json" ? json_table(rows)
                                       : csv_table(kResidualHeader, rows));
    return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sharp trace-Hardy constants and inequality verification on "
        "half-spaces and cones with Finsler norms"};
    app.require_subcommand(1);
    app.footer(
        "exit codes: 0 ok; 2 invalid parameters; 3 degenerate cone; 4 "
        "violated bound; 5 quadrature not converged; 6 non-monotone sweep");

    // Filled by the --config option on each subcommand; the file itself is
    // expanded into flags before parsing, so the stored path is not used.
    std::string config_path;

    ConstantsOpts c;
    CLI::App* constants = app.add_subcommand(
        "constants",
        "tabulate K, the cone normalization A, and the boundedness "
        "diagnostic over a parameter grid");
    constants->add_option("--N", c.Ns, "dimension grid (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    constants->add_option("--beta", c.betas, "beta grid (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    constants
        ->add_option("--alpha", c.alphas,
                     "cone half-opening grid in radians (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    add_output_opts(constants, c.out);
    add_config_opt(constants, config_path);

    VerifyOpts vh;
    CLI::App* verify_h = app.add_subcommand(
        "verify-halfspace",
        "randomized bump suite for the half-space inequality");
    VerifyOpts vc;
    CLI::App* verify_c = app.add_subcommand(
        "verify-cone", "randomized bump suite for the cone inequality");
    for (auto [cmd, opts] : {std::pair{verify_h, &vh}, {verify_c, &vc}}) {
        cmd->add_option("--N", opts->N, "ambient dimension (norm lives in N-1)")
            ->capture_default_str();
        cmd->add_option("--beta", opts->beta, "Hardy exponent")
            ->capture_default_str();
        cmd->add_option("--norm", opts->norm,
                        "euclidean | pnorm:<p> | quad:<row-major entries>")
            ->capture_default_str();
        cmd->add_option("--bumps", opts->bumps, "number of random bumps")
            ->check(CLI::Range(1, 100000))
            ->capture_default_str();
        cmd->add_option("--seed", opts->seed, "RNG seed")
            ->capture_default_str();
        cmd->add_option("--k-override", opts->k_override,
                        "use this constant instead of the sharp one "
                        "(test-only negative control)");
        add_quad_opts(cmd, opts->quad);
        add_output_opts(cmd, opts->out);
        add_config_opt(cmd, config_path);
    }
    verify_c
        ->add_option("--alpha", vc.alpha, "cone half-opening in radians")
        ->capture_default_str();

    RayleighOpts r;
    CLI::App* rayleigh = app.add_subcommand(
        "rayleigh-sweep",
        "cutoff-extremal Rayleigh quotients over dyadic windows "
        "(10^-j, 10^j)");
    rayleigh->add_option("--N", r.N, "ambient dimension")->capture_default_str();
    rayleigh->add_option("--beta", r.beta, "Hardy exponent")
        ->capture_default_str();
    rayleigh
        ->add_option("--norm", r.norm,
                     "euclidean | pnorm:<p> | quad:<row-major entries>")
        ->capture_default_str();
    rayleigh->add_option("--j-min", r.j_min, "first dyadic index")
        ->capture_default_str();
    rayleigh->add_option("--j-max", r.j_max, "last dyadic index")
        ->capture_default_str();
    add_quad_opts(rayleigh, r.quad, /*with_window=*/false);
    add_output_opts(rayleigh, r.out);
    add_config_opt(rayleigh, config_path);

    ResidualOpts rs;
    CLI::App* residuals = app.add_subcommand(
        "residuals",
        "PDE residual of the extremal solution on a (rho, theta) grid");
    residuals->add_option("--N", rs.N, "ambient dimension")
        ->capture_default_str();
    residuals->add_option("--beta", rs.beta, "Hardy exponent")
        ->capture_default_str();
    residuals
        ->add_option("--norm", rs.norm,
                     "euclidean | pnorm:<p> | quad:<row-major entries>")
        ->capture_default_str();
    residuals->add_option("--grid", rs.grid, "sample counts as n_rho,n_theta");
    residuals->add_option("--r-in", rs.quad.r_in, "smallest rho")
        ->capture_default_str();
    residuals->add_option("--r-out", rs.quad.r_out, "largest rho")
        ->capture_default_str();
    add_output_opts(residuals, rs.out);
    add_config_opt(residuals, config_path);

    int rc = 0;
    constants->callback([&] { rc = run_guarded([&] { return cmd_constants(c); }); });
    verify_h->callback([&] { rc = run_guarded([&] { return cmd_verify(vh); }); });
    verify_c->callback([&] { rc = run_guarded([&] { return cmd_verify(vc); }); });
    rayleigh->callback([&] { rc = run_guarded([&] { return cmd_rayleigh(r); }); });
    residuals->callback([&] { rc = run_guarded([&] { return cmd_residuals(rs); }); });

    try {
        std::vector<std::string> args =
            expand_config({argv + 1, argv + argc});
        // CLI11's vector overload wants the arguments reversed.
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "fhk: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fhk: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
