#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geom/chart_ode.hpp"
#include "report.hpp"

using namespace geom;
using geomtool::OutputMode;
using geomtool::Record;
using geomtool::Table;

namespace {

struct RunConfig {
    double tol = 1e-9;
    double fd_step = 1e-5;
    double ode_step = 1e-3;
    bool json = false;
    bool csv = false;
    std::string out;

    OutputMode mode() const { return json ? OutputMode::json : csv ? OutputMode::csv : OutputMode::text; }
};

// Either a key -> value record or a CSV trace; gated lists the defect keys over tol.
struct Output {
    std::string body;
    std::vector<std::string> gated;
};

Output finish(const Record& r, const RunConfig& cfg) { return {geomtool::emit_report(r, cfg.mode()), r.exceeded(cfg.tol)}; }

Vec parse_vector(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

// Einstein-Weyl data of the modified connection for the given s.
void ew_section(Record& r, const std::string& prefix, const LiftedData& L, double tp, double s, const RunConfig& cfg) {
    auto D = modified_connection(L, tp, s);
    auto G = lifted_metric(L, tp);
    DenseTensor DG = covariant_derivative(D, G.h);
    const int m = L.frame.dim;
    DenseTensor w = DG;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) w(i, j, k) = DG(i, j, k) + 2 * s * (1 + tp) * L.beta(i) * G.h(j, k);
    r.set(prefix + "_weyl_defect", w.max_abs());
    auto er = einstein_ah_report(D, G.h, cfg.tol);
    r.set(prefix + "_scalar", er.scalar);
    r.set(prefix + "_naive_defect", er.naive_defect);
    r.set(prefix + "_conservation_defect", er.conservation_defect);
}

void s_values(Record& r, const LiftedData& L, double tp) {
    auto af = fit_alpha(L);
    r.set("alpha", af.alpha);
    r.set("alpha_fit", af.defect);
    auto s = af.defect <= 1e-8 ? ew_s_values(af.alpha, tp, L.base_dim()) : std::vector<double>{};
    r.set("ew_s_count", static_cast<double>(s.size()));
    r.set("ew_s_plus", s.empty() ? NAN : s.back());
    r.set("ew_s_minus", s.empty() ? NAN : s.front());
}

Output run_lie(const FrameAlgebra& f, const RunConfig& cfg) {
    Record r;
    r.set("dim", f.dim);
    r.set("jacobi_defect", jacobi_defect(f));
    Mat k = killing_form(f);
    r.set("killing", k);
    r.set("trace_form", trace_form(f));
    r.set("unimodular", trace_form(f).cwiseAbs().maxCoeff() <= cfg.tol ? 1.0 : 0.0);
    r.set("killing_invariance_defect", invariance_defect(f, k).full);
    return finish(r, cfg);
}

Output run_cone3d(double a1, double a2, double kappa, double tp, const RunConfig& cfg) {
    auto conn = qacone_preset(a1, a2, kappa);
    const Vec t = qacone_radiant(kappa);
    Record r;
    r.set("A", conn.coeffs());
    auto cd = curvature(conn, t);
    r.set("ric", cd.ric);
    r.set("rho", *cd.rho);
    r.set("rho_defect", cd.rho->cwiseAbs().maxCoeff());
    r.set("ricci_symmetric_defect", sym(cd.ric).cwiseAbs().maxCoeff());
    r.set("ricci_value_defect", std::abs(cd.ric(1, 2) + 3 * a2 * kappa));
    r.set("radiant_defect", radiant_defect(conn, t));
    auto fit = conelike_solve(conn, t);
    r.set("Q", fit.Q);
    r.set("conelike_residual", fit.residual);

    // Ric = -((n+1)/2) eta for a cone connection with n = 2
    r.set("eta", Mat(-(2.0 / 3.0) * cd.ric));
    r.set("t_param", tp);
    auto L = designate_vertical(conn, t);
    try {
        r.set("G", to_source_frame(L, lifted_metric(L, tp).h));
        s_values(r, L, tp);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMetric && e.kind() != ErrorKind::DegenerateT) throw;
        r.set("metric_degenerate", 1.0);
        return finish(r, cfg);
    }
    r.set("metric_degenerate", 0.0);
    auto af = fit_alpha(L);
    auto s = af.defect <= 1e-8 ? ew_s_values(af.alpha, tp, L.base_dim()) : std::vector<double>{};
    if (s.size() == 2) {
        ew_section(r, "ew_s_plus", L, tp, s.back(), cfg);
        ew_section(r, "ew_s_minus", L, tp, s.front(), cfg);
    } else if (s.size() == 1) {
        ew_section(r, "ew_s_zero", L, tp, 0.0, cfg);
    }
    return finish(r, cfg);
}

// A lift either from a base document or by designating the vertical field t of a connection document.
LiftedData lift_from_json(const nlohmann::json& j) {
    if (j.contains("t")) {
        auto conn = geomtool::connection_from_json(j);
        Vec t = parse_vector(j.at("t").get<std::vector<double>>());
        if (t.size() != conn.dim()) throw Error(ErrorKind::ValidationError, "t and frame dimensions differ");
        return designate_vertical(conn, t);
    }
    return cone_connection(geomtool::base_from_json(j));
}

void identity_section(Record& r, const LiftedData& L, double tp, double s) {
    auto d = modified_identity_defects(L, tp, s);
    r.set("metric_derivative_defect", d.metric_derivative);
    r.set("metric_skew_defect", d.metric_skew);
    r.set("alignment_defect", d.alignment);
    r.set("vertical_derivative_defect", d.vertical_derivative);
    r.set("determinant_trace_defect", d.determinant_trace);
}

Output run_conelift(const nlohmann::json& j, double tp, double s, const RunConfig& cfg) {
    auto L = lift_from_json(j);
    const int n = L.base_dim();
    auto p = lift_pullbacks(L);
    Record r;
    r.set("eta", p.eta);
    Mat ric = curvature(L.conn).ric;
    r.set("ric", ric);
    r.set("lift_ricci_defect", max_abs_diff(ric, -0.5 * (n + 1) * p.eta));
    r.set("vertical_annihilation_defect", vertical_annihilation_defect(L));
    r.set("radiant_defect", radiant_defect(L.conn, L.t_vec));
    r.set("t_param", tp);
    r.set("s", s);
    auto cf = ricci_closed_form(L, tp, s);
    Mat rd = ricci_direct(L, tp, s);
    auto G = lifted_metric(L, tp);
    r.set("ric_closed", cf.ric);
    r.set("ric_direct", rd);
    r.set("ric_trace_closed", cf.trace);
    r.set("ric_trace_direct", G.inv.cwiseProduct(rd).sum());
    r.set("closed_form_defect", max_abs_diff(cf.ric, rd));
    r.set("closed_form_trace_defect", std::abs(cf.trace - G.inv.cwiseProduct(rd).sum()));
    identity_section(r, L, tp, s);
    return finish(r, cfg);
}

Output run_ew(const nlohmann::json& j, double tp, double s, const RunConfig& cfg) {
    auto L = lift_from_json(j);
    Record r;
    r.set("t_param", tp);
    r.set("s", s);
    r.set("G", lifted_metric(L, tp).h);
    identity_section(r, L, tp, s);
    s_values(r, L, tp);
    ew_section(r, "ew", L, tp, s, cfg);
    return finish(r, cfg);
}

Output run_ah(const nlohmann::json& j, const RunConfig& cfg) {
    auto conn = geomtool::connection_from_json(j);
    Mat g = geomtool::metric_from_json(j);
    if (g.rows() != conn.dim()) throw Error(ErrorKind::ValidationError, "h and frame dimensions differ");
    auto d = ah_data(conn, g);
    Record r;
    r.set("chi", d.chi);
    r.set("tau", d.tau);
    r.set("alignment_defect", d.alignment_defect);
    r.set("codazzi_defect", d.codazzi_defect);
    r.set("cubic_symmetry_defect", d.cubic_symmetry_defect);
    r.set("cubic_trace_defect", d.cubic_trace_defect);
    auto er = einstein_ah_report(conn, g, cfg.tol);
    r.set("scalar", er.scalar);
    r.set("naive_defect", er.naive_defect);
    r.set("conjugate_naive_defect", er.conjugate_naive_defect);
    r.set("conservation_defect", er.conservation_defect);
    return finish(r, cfg);
}

struct SchwarzianArgs {
    double r = 0, a = 1, b = 1, c = 2, t0 = -0.5, t1 = 0.5;
};

Output run_schwarzian(const SchwarzianArgs& a, const RunConfig& cfg) {
    SchwarzianProblem p;
    const double rv = a.r;
    p.r = [rv](double) { return rv; };
    p.a = a.a;
    p.b = a.b;
    p.c = a.c;
    p.t_begin = a.t0;
    p.t_end = a.t1;
    p.step = cfg.ode_step;
    auto sol = schwarzian_solve(p);
    if (cfg.json) {
        Record r;
        r.set("t_min", sol.t_min);
        r.set("t_max", sol.t_max);
        r.set("truncated", sol.truncated ? 1.0 : 0.0);
        r.set("samples", static_cast<double>(sol.t.size()));
        double smax = 0;
        for (std::size_t i = 3; i + 3 < sol.f.size(); ++i) smax = std::max(smax, std::abs(schwarzian_samples(sol.f, p.step, i) - 2 * rv));
        r.set("schwarzian_fd_max", smax);
        r.set("f_begin", sol.f.front());
        r.set("f_end", sol.f.back());
        return finish(r, cfg);
    }
    Table tab{{"t", "x1", "x2", "dx1", "dx2", "f", "u"}, {}};
    for (std::size_t i = 0; i < sol.t.size(); ++i)
        tab.rows.push_back({sol.t[i], sol.x1[i], sol.x2[i], sol.dx1[i], sol.dx2[i], sol.f[i], sol.u[i]});
    return {geomtool::emit_table(tab), {}};
}

struct GeodesicArgs {
    std::string family = "central";
    int dim = 3;
    double alpha = NAN, eps = 1, r0 = 1, vperp = 1, vr = 0, T = 10;
    std::vector<double> x0, v0;
};

Output run_geodesic(const GeodesicArgs& a, const RunConfig& cfg) {
    const bool central = a.family == "central";
    ChartParams params;
    params.dim = a.dim;
    params.eps = a.eps;
    params.alpha = std::isnan(a.alpha) ? 2.0 - a.dim : a.alpha; // 1 - n with n = dim - 1
    auto chart = make_chart(central ? "radiant_power" : a.family, params);
    Vec x0 = Vec::Zero(a.dim), v0 = Vec::Zero(a.dim);
    if (!a.x0.empty() || !a.v0.empty()) {
        if (static_cast<int>(a.x0.size()) != a.dim || static_cast<int>(a.v0.size()) != a.dim)
            throw Error(ErrorKind::InvalidParams, "--x0 and --v0 need dim entries");
        x0 = parse_vector(a.x0);
        v0 = parse_vector(a.v0);
    } else {
        if (a.dim < 2) throw Error(ErrorKind::InvalidParams, "--r0/--vperp need dim >= 2");
        x0(0) = a.r0;
        v0(0) = a.vr;
        v0(1) = a.vperp;
    }
    if (!chart.in_domain(x0)) throw Error(ErrorKind::DomainViolation, "initial point outside the chart domain");
    auto trace = geodesic_integrate(chart, x0, v0, a.T, cfg.ode_step);
    if (trace.domain_violation) std::cerr << "warning: DomainViolation: " << trace.message << "\n";

    auto inv0 = central_invariants(trace.states.front(), a.dim);
    double c_drift = 0, e_drift = 0, r_drift = 0;
    Table tab;
    tab.header.push_back("t");
    for (int i = 0; i < a.dim; ++i) tab.header.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < a.dim; ++i) tab.header.push_back("v" + std::to_string(i + 1));
    for (auto h : {"c_sq", "energy", "c_sq_drift", "energy_drift"}) tab.header.push_back(h);
    for (const auto& s : trace.states) {
        auto inv = central_invariants(s, a.dim);
        std::vector<double> row{s.t};
        for (int i = 0; i < a.dim; ++i) row.push_back(s.x(i));
        for (int i = 0; i < a.dim; ++i) row.push_back(s.v(i));
        const double dc = std::abs(inv.c_sq - inv0.c_sq), de = std::abs(inv.energy - inv0.energy);
        row.insert(row.end(), {inv.c_sq, inv.energy, dc, de});
        c_drift = std::max(c_drift, dc);
        e_drift = std::max(e_drift, de);
        r_drift = std::max(r_drift, std::abs(s.x.norm() - x0.norm()));
        tab.rows.push_back(std::move(row));
    }
    std::vector<std::string> gated;
    if (central) {
        if (!(c_drift <= cfg.tol)) gated.push_back("c_sq_drift");
        if (!(e_drift <= cfg.tol)) gated.push_back("energy_drift");
    }
    if (cfg.json) {
        Record r;
        r.set("steps", static_cast<double>(trace.states.size() - 1));
        r.set("t_end", trace.states.back().t);
        r.set("domain_violation", trace.domain_violation ? 1.0 : 0.0);
        r.set("c_sq", inv0.c_sq);
        r.set("energy", inv0.energy);
        r.set("c_sq_drift", c_drift);
        r.set("energy_drift", e_drift);
        r.set("radius_drift", r_drift);
        return {geomtool::emit_report(r, OutputMode::json), gated};
    }
    return {geomtool::emit_table(tab), gated};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariant connection and cone geometry toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--tol", cfg.tol, "defect tolerance for the exit code")->check(CLI::PositiveNumber);
    app.add_option("--fd-step", cfg.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
    app.add_option("--ode-step", cfg.ode_step, "RK4 step")->check(CLI::PositiveNumber);
    auto* json_flag = app.add_flag("--json", cfg.json, "emit a JSON document");
    app.add_flag("--csv", cfg.csv, "emit CSV")->excludes(json_flag);
    app.add_option("--out", cfg.out, "write output to PATH");

    std::function<Output()> action;

    auto* lie = app.add_subcommand("lie", "Lie algebra report");
    std::string lie_file, lie_preset;
    std::vector<double> lie_params;
    lie->add_option("file", lie_file, "frame document");
    lie->add_option("--preset", lie_preset, "preset name")->excludes("file");
    lie->add_option("--params", lie_params, "preset parameters")->delimiter(',');
    lie->callback([&] {
        action = [&] {
            if (lie_file.empty() && lie_preset.empty()) throw Error(ErrorKind::InvalidParams, "lie needs FILE or --preset");
            auto f = lie_file.empty() ? preset(lie_preset, lie_params)
                                      : geomtool::frame_from_json(geomtool::load_json(lie_file));
            return run_lie(f, cfg);
        };
    });

    auto* cone3d = app.add_subcommand("cone3d", "cone connection on the imaginary quaternion-type algebra");
    double a1 = 0, a2 = 0, kappa = 0, cone_tp = 0;
    cone3d->add_option("a1", a1)->required();
    cone3d->add_option("a2", a2)->required();
    cone3d->add_option("kappa", kappa)->required();
    cone3d->add_option("--t", cone_tp, "lifted metric parameter");
    cone3d->callback([&] { action = [&] { return run_cone3d(a1, a2, kappa, cone_tp, cfg); }; });

    auto* conelift = app.add_subcommand("conelift", "cone connection of a base document");
    std::string lift_file;
    double lift_s = 0, lift_tp = 0;
    conelift->add_option("file", lift_file)->required();
    conelift->add_option("--s", lift_s, "modification parameter s");
    conelift->add_option("--t", lift_tp, "lifted metric parameter");
    conelift->callback(
        [&] { action = [&] { return run_conelift(geomtool::load_json(lift_file), lift_tp, lift_s, cfg); }; });

    auto* ew = app.add_subcommand("ew", "modified connection and Einstein AH report");
    std::string ew_file;
    double ew_s = 0, ew_tp = 0;
    ew->add_option("file", ew_file)->required();
    ew->add_option("--s", ew_s, "modification parameter s")->required();
    ew->add_option("--t", ew_tp, "lifted metric parameter");
    ew->callback([&] {
        action = [&] {
            if (ew_tp == -1) throw Error(ErrorKind::InvalidParams, "--t must differ from -1");
            return run_ew(geomtool::load_json(ew_file), ew_tp, ew_s, cfg);
        };
    });

    auto* ah = app.add_subcommand("ah", "AH structure and Einstein report");
    std::string ah_file;
    ah->add_option("file", ah_file)->required();
    ah->callback([&] { action = [&] { return run_ah(geomtool::load_json(ah_file), cfg); }; });

    auto* sch = app.add_subcommand("schwarzian", "solve S(f) = 2r with f = x1/x2");
    SchwarzianArgs sa;
    sch->add_option("--r", sa.r, "constant potential r");
    sch->add_option("--a", sa.a);
    sch->add_option("--b", sa.b);
    sch->add_option("--c", sa.c);
    sch->add_option("--t0", sa.t0, "left end (<= 0)");
    sch->add_option("--t1", sa.t1, "right end (>= 0)");
    sch->callback([&] { action = [&] { return run_schwarzian(sa, cfg); }; });

    auto* geo = app.add_subcommand("geodesic", "integrate a chart geodesic");
    GeodesicArgs ga;
    geo->add_option("--family", ga.family)->check(CLI::IsMember({"central", "flat", "radiant_power", "projflat_quadric"}));
    geo->add_option("--dim", ga.dim);
    geo->add_option("--alpha", ga.alpha, "radiant_power exponent (default 2 - dim)");
    geo->add_option("--eps", ga.eps, "projflat_quadric sign");
    geo->add_option("--r0", ga.r0);
    geo->add_option("--vperp", ga.vperp);
    geo->add_option("--vr", ga.vr);
    geo->add_option("--x0", ga.x0)->delimiter(',');
    geo->add_option("--v0", ga.v0)->delimiter(',');
    geo->add_option("-T", ga.T, "integration time")->check(CLI::PositiveNumber);
    geo->callback([&] { action = [&] { return run_geodesic(ga, cfg); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Output out;
    try {
        out = action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return 1;
    }
    if (cfg.out.empty()) {
        std::cout << out.body;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << cfg.out << "\n";
            return 1;
        }
        f << out.body;
    }
    for (const auto& k : out.gated) std::cerr << "exceeds tol: " << k << "\n";
    return out.gated.empty() ? 0 : 2;
}
