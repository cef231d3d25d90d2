#include "geom/chart_ode.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace geom {

namespace {

// Evaluated into the value type so vector results do not reference destroyed temporaries.
template <class F>
auto d1(const F& f, double t, double h) -> std::decay_t<decltype(f(t))> {
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}
template <class F>
auto d2(const F& f, double t, double h) -> std::decay_t<decltype(f(t))> {
    return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
}
template <class F>
auto d3(const F& f, double t, double h) -> std::decay_t<decltype(f(t))> {
    return (-f(t + 3 * h) + 8 * f(t + 2 * h) - 13 * f(t + h) + 13 * f(t - h) - 8 * f(t - 2 * h) + f(t - 3 * h)) /
           (8 * h * h * h);
}

void require_domain(const ChartConnection& chart, const Vec& x, double reach) {
    // every stencil point must lie in the domain
    for (int i = -1; i < chart.dim; ++i)
        for (double s : {-reach, reach}) {
            Vec y = x;
            if (i >= 0) y(i) += s;
            if (!chart.in_domain(y))
                throw Error(ErrorKind::DomainViolation, "point outside the chart domain");
        }
}

// d_m Gamma_ij^k, stored as (m, i, j, k)
std::vector<DenseTensor> gamma_gradient(const ChartConnection& chart, const Vec& x, double h) {
    std::vector<DenseTensor> out;
    for (int m = 0; m < chart.dim; ++m) {
        auto g = [&](double s) {
            Vec y = x;
            y(m) += s;
            return chart.at(y);
        };
        DenseTensor d = g(h);
        d *= 8;
        d -= 8 * g(-h);
        d -= g(2 * h);
        d += g(-2 * h);
        d *= 1 / (12 * h);
        out.push_back(std::move(d));
    }
    return out;
}

Vec gamma_apply(const DenseTensor& G, const Vec& u, const Vec& v) {
    const int n = G.dim();
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out(k) += G(i, j, k) * u(i) * v(j);
    return out;
}

} // namespace

DenseTensor ChartConnection::at(const Vec& x) const {
    if (x.size() != dim) throw Error(ErrorKind::ShapeMismatch, "point dimension");
    if (!in_domain(x)) throw Error(ErrorKind::DomainViolation, "point outside the chart domain");
    return gamma(x);
}

ChartConnection make_chart(const std::string& family, const ChartParams& params) {
    const int n = params.dim;
    if (n < 1) throw Error(ErrorKind::BadParams, "dimension must be positive");
    ChartConnection c;
    c.dim = n;
    c.params = params;
    c.in_domain = [](const Vec& x) { return x.allFinite(); };
    if (family == "flat") {
        c.family = ChartFamily::flat;
        c.gamma = [n](const Vec&) { return DenseTensor::rank3(n); };
        return c;
    }
    if (family == "radiant_power") {
        c.family = ChartFamily::radiant_power;
        Mat h = params.h.size() == 0 ? Mat::Identity(n, n) : params.h;
        if (h.rows() != n || h.cols() != n) throw Error(ErrorKind::BadParams, "metric size");
        if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 || std::abs(h.determinant()) < 1e-12)
            throw Error(ErrorKind::BadParams, "metric must be symmetric and nondegenerate");
        c.params.h = h;
        const double alpha = params.alpha;
        c.gamma = [n, h, alpha](const Vec& x) {
            const Vec xf = h * x;
            const double r2 = x.dot(xf);
            const Mat Q = std::pow(r2, 0.5 * (alpha - 4)) * (r2 * h - xf * xf.transpose());
            DenseTensor G = DenseTensor::rank3(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) G(i, j, k) = Q(i, j) * x(k);
            return G;
        };
        c.radiant_field = [](const Vec& x) { return x; };
        c.in_domain = [h](const Vec& x) {
            if (!x.allFinite()) return false;
            const double r2 = x.dot(h * x);
            return r2 > 1e-8 && r2 < 1e12;
        };
        return c;
    }
    if (family == "projflat_quadric") {
        c.family = ChartFamily::projflat_quadric;
        const double eps = params.eps;
        if (eps != 1 && eps != -1) throw Error(ErrorKind::BadParams, "eps must be +1 or -1");
        c.gamma = [n, eps](const Vec& x) {
            const double u = 1 + eps * x.squaredNorm();
            DenseTensor G = DenseTensor::rank3(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    G(i, j, j) += -eps * x(i) / u;
                    G(i, j, i) += -eps * x(j) / u;
                }
            return G;
        };
        c.in_domain = [eps](const Vec& x) { return x.allFinite() && 1 + eps * x.squaredNorm() > 1e-12; };
        return c;
    }
    throw Error(ErrorKind::BadParams, "unknown chart family " + family);
}

ChartConnection make_custom_chart(int dim, ChristoffelField gamma, std::optional<PointField> radiant) {
    if (dim < 1) throw Error(ErrorKind::BadParams, "dimension must be positive");
    ChartConnection c;
    c.dim = dim;
    c.params.dim = dim;
    c.gamma = std::move(gamma);
    c.radiant_field = std::move(radiant);
    c.in_domain = [](const Vec& x) { return x.allFinite(); };
    return c;
}

std::vector<Vec> fd_gradient(const PointField& f, const Vec& x, double h) {
    std::vector<Vec> out;
    for (int m = 0; m < x.size(); ++m) {
        auto g = [&](double s) {
            Vec y = x;
            y(m) += s;
            return f(y);
        };
        out.push_back(d1(g, 0.0, h));
    }
    return out;
}

ChartCurvature curvature_at(const ChartConnection& chart, const Vec& x, double h) {
    require_domain(chart, x, 2 * h);
    const int n = chart.dim;
    const DenseTensor G = chart.at(x);
    const std::vector<DenseTensor> dG = gamma_gradient(chart, x, h);
    ChartCurvature out{DenseTensor::rank4(n), Mat::Zero(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = dG[i](j, k, l) - dG[j](i, k, l);
                    for (int p = 0; p < n; ++p) s += G(i, p, l) * G(j, k, p) - G(j, p, l) * G(i, k, p);
                    out.R(i, j, k, l) = s;
                }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int p = 0; p < n; ++p) out.ric(j, k) += out.R(p, j, k, p);
    return out;
}

Mat chart_schouten_at(const ChartConnection& chart, const Vec& x, double h) {
    const int n = chart.dim;
    if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "Schouten tensor needs dimension at least 2");
    const Mat ric = curvature_at(chart, x, h).ric;
    return sym(ric) / (1.0 - n) - skew(ric) / (n + 1.0);
}

Mat covariant_derivative_at(const ChartConnection& chart, const PointField& X, const Vec& x, double h) {
    require_domain(chart, x, 2 * h);
    const int n = chart.dim;
    const DenseTensor G = chart.at(x);
    const Vec Xx = X(x);
    const std::vector<Vec> dX = fd_gradient(X, x, h);
    Mat D(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = dX[i](j);
            for (int p = 0; p < n; ++p) s += G(i, p, j) * Xx(p);
            D(i, j) = s;
        }
    return D;
}

double radiant_defect_at(const ChartConnection& chart, const Vec& x, double h) {
    if (!chart.radiant_field) throw Error(ErrorKind::MissingField, "chart has no radiant field");
    const Mat D = covariant_derivative_at(chart, *chart.radiant_field, x, h);
    return (D - Mat::Identity(chart.dim, chart.dim)).cwiseAbs().maxCoeff();
}

double proj_dilatative_defect_at(const ChartConnection& chart, const PointField& X, const Vec& x, double h) {
    const int n = chart.dim;
    const Mat D = covariant_derivative_at(chart, X, x, h);
    const Vec Xx = X(x);
    // S^bc_ij = delta_(i^b nabla_j) X^c
    auto S = [&](int b, int c, int i, int j) {
        return 0.5 * ((i == b) * D(j, c) + (j == b) * D(i, c));
    };
    auto T = [&](int a, int b, int c, int i, int j) { return Xx(a) * S(b, c, i, j); };
    double worst = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double v = (T(a, b, c, i, j) + T(b, c, a, i, j) + T(c, a, b, i, j) - T(b, a, c, i, j) -
                                          T(a, c, b, i, j) - T(c, b, a, i, j)) /
                                         6.0;
                        worst = std::max(worst, std::abs(v));
                    }
    return worst;
}

DilatationFit fit_dilatation(const ChartConnection& chart, const PointField& X, const Vec& x, double h) {
    const int n = chart.dim;
    const Mat D = covariant_derivative_at(chart, X, x, h);
    const Vec Xx = X(x);
    Mat M = Mat::Zero(n * n, n + 1);
    Vec rhs(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int r = i * n + j;
            M(r, 0) = (i == j);
            M(r, 1 + i) = Xx(j);
            rhs(r) = D(i, j);
        }
    const Vec sol = M.colPivHouseholderQr().solve(rhs);
    DilatationFit fit;
    fit.f = sol(0);
    fit.sigma = sol.tail(n);
    fit.residual = (M * sol - rhs).cwiseAbs().maxCoeff();
    return fit;
}

Radiantized radiantize_at(const ChartConnection& chart, const PointField& X, const Vec& x, double h, double H) {
    const int n = chart.dim;
    if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "radiantization needs dimension at least 2");
    require_domain(chart, x, 2 * H + 2 * h);
    const Mat D = covariant_derivative_at(chart, X, x, h);
    const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
    if (std::abs(D.trace()) <= 1e-10 * scale) throw Error(ErrorKind::VanishingDivergence, "div X vanishes");

    auto denom_at = [&](const Vec& y) {
        const DilatationFit fy = fit_dilatation(chart, X, y, h);
        return fy.f - fy.sigma.dot(X(y));
    };
    const DilatationFit fit = fit_dilatation(chart, X, x, h);
    const Vec Xx = X(x);
    const double den = fit.f - fit.sigma.dot(Xx);
    if (std::abs(den) <= 1e-10 * scale)
        throw Error(ErrorKind::VanishingDivergence, "f - sigma(X) vanishes");

    const std::vector<Vec> dsig =
        fd_gradient([&](const Vec& y) { return fit_dilatation(chart, X, y, h).sigma; }, x, H);
    const DenseTensor G = chart.at(x);
    const Mat ric = curvature_at(chart, x, h).ric;
    Mat K(n, n); // R_ij + (n-1)(nabla_i sigma_j + sigma_i sigma_j) + d sigma_ij
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double ns = dsig[i](j);
            for (int p = 0; p < n; ++p) ns -= G(i, j, p) * fit.sigma(p);
            K(i, j) = ric(i, j) + (n - 1) * (ns + fit.sigma(i) * fit.sigma(j)) + dsig[i](j) - dsig[j](i);
        }
    Radiantized out;
    out.f = fit.f;
    out.sigma = fit.sigma;
    out.gamma = G;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out.gamma(i, j, k) += -fit.sigma(i) * (j == k) - fit.sigma(j) * (i == k) +
                                      K(i, j) * Xx(k) / ((1.0 - n) * den);
    out.X = Xx / den;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out.asymmetry = std::max(out.asymmetry, std::abs(out.gamma(i, j, k) - out.gamma(j, i, k)));

    const std::vector<Vec> dXt = fd_gradient([&](const Vec& y) { return Vec(X(y) / denom_at(y)); }, x, H);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = dXt[i](j);
            for (int p = 0; p < n; ++p) s += out.gamma(i, p, j) * out.X(p);
            out.radiant_defect = std::max(out.radiant_defect, std::abs(s - (i == j)));
        }
    return out;
}

GeodesicTrace geodesic_integrate(const ChartConnection& chart, const Vec& x0, const Vec& v0, double T, double step) {
    if (step <= 0 || T < 0) throw Error(ErrorKind::InvalidParams, "step must be positive and T nonnegative");
    if (x0.size() != chart.dim || v0.size() != chart.dim) throw Error(ErrorKind::ShapeMismatch, "initial data size");
    GeodesicTrace trace;
    if (!chart.in_domain(x0)) {
        trace.domain_violation = true;
        trace.message = "initial point outside the chart domain";
        return trace;
    }
    trace.states.push_back({0.0, x0, v0});
    const long steps = std::lround(T / step);
    auto acc = [&](const Vec& x, const Vec& v) -> std::optional<Vec> {
        if (!chart.in_domain(x)) return std::nullopt;
        return Vec(-gamma_apply(chart.gamma(x), v, v));
    };
    Vec x = x0, v = v0;
    for (long s = 0; s < steps; ++s) {
        const auto a1 = acc(x, v);
        const Vec x2 = x + 0.5 * step * v;
        const Vec v2 = a1 ? Vec(v + 0.5 * step * *a1) : v;
        const auto a2 = a1 ? acc(x2, v2) : std::nullopt;
        const Vec x3 = x + 0.5 * step * v2;
        const Vec v3 = a2 ? Vec(v + 0.5 * step * *a2) : v;
        const auto a3 = a2 ? acc(x3, v3) : std::nullopt;
        const Vec x4 = x + step * v3;
        const Vec v4 = a3 ? Vec(v + step * *a3) : v;
        const auto a4 = a3 ? acc(x4, v4) : std::nullopt;
        if (!a4) {
            trace.domain_violation = true;
            trace.message = "trajectory left the chart domain after t = " + std::to_string(trace.states.back().t);
            return trace;
        }
        const Vec xn = x + step / 6 * (v + 2 * v2 + 2 * v3 + v4);
        const Vec vn = v + step / 6 * (*a1 + 2 * *a2 + 2 * *a3 + *a4);
        if (!chart.in_domain(xn) || !vn.allFinite()) {
            trace.domain_violation = true;
            trace.message = "trajectory left the chart domain after t = " + std::to_string(trace.states.back().t);
            return trace;
        }
        x = xn;
        v = vn;
        trace.states.push_back({(s + 1) * step, x, v});
    }
    return trace;
}

CentralInvariants central_invariants(const GeodesicState& s, int ambient_dim) {
    const double r2 = s.x.squaredNorm();
    if (r2 == 0) throw Error(ErrorKind::DomainViolation, "x = 0");
    const double xv = s.x.dot(s.v);
    CentralInvariants c;
    c.c_sq = s.v.squaredNorm() * r2 - xv * xv;
    c.energy = 0.5 * s.v.squaredNorm() - c.c_sq * std::pow(r2, -0.5 * ambient_dim) / ambient_dim;
    return c;
}

SchwarzianSolution schwarzian_solve(const SchwarzianProblem& p) {
    if (p.b == 0) throw Error(ErrorKind::InvalidParams, "b must be nonzero");
    if (p.step <= 0 || p.t_begin > 0 || p.t_end < 0 || p.t_end == p.t_begin)
        throw Error(ErrorKind::InvalidParams, "need step > 0 and t_begin <= 0 <= t_end");
    // y = (x1, x1', x2, x2') with x'' + r x = 0
    auto rhs = [&](double t, const Eigen::Vector4d& y) {
        const double r = p.r(t);
        return Eigen::Vector4d(y(1), -r * y(0), y(3), -r * y(2));
    };
    const Eigen::Vector4d y0(2 * p.a * p.b, 2 * p.b * p.b - p.a * p.c, 2 * p.b, -p.c);
    SchwarzianSolution s;
    auto sweep = [&](double t_stop, std::vector<std::pair<double, Eigen::Vector4d>>& out) {
        const long steps = std::lround(std::abs(t_stop) / p.step);
        const double h = t_stop < 0 ? -p.step : p.step;
        Eigen::Vector4d y = y0;
        for (long k = 0; k < steps; ++k) {
            const double t = k * h;
            const Eigen::Vector4d k1 = rhs(t, y);
            const Eigen::Vector4d k2 = rhs(t + h / 2, y + h / 2 * k1);
            const Eigen::Vector4d k3 = rhs(t + h / 2, y + h / 2 * k2);
            const Eigen::Vector4d k4 = rhs(t + h, y + h * k3);
            const Eigen::Vector4d yn = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            if (yn(2) * y(2) <= 0 || std::abs(yn(2)) < 1e-12) {
                s.truncated = true;
                return;
            }
            y = yn;
            out.emplace_back((k + 1) * h, y);
        }
    };
    std::vector<std::pair<double, Eigen::Vector4d>> back, fwd;
    sweep(p.t_begin, back);
    sweep(p.t_end, fwd);
    std::vector<std::pair<double, Eigen::Vector4d>> all(back.rbegin(), back.rend());
    all.emplace_back(0.0, y0);
    all.insert(all.end(), fwd.begin(), fwd.end());
    for (const auto& [t, y] : all) {
        s.t.push_back(t);
        s.x1.push_back(y(0));
        s.dx1.push_back(y(1));
        s.x2.push_back(y(2));
        s.dx2.push_back(y(3));
        s.f.push_back(y(0) / y(2));
        s.u.push_back(y(3) / y(2));
    }
    s.t_min = s.t.front();
    s.t_max = s.t.back();
    return s;
}

double schwarzian_numeric(const ScalarFn& f, double t, double h) {
    const double f1 = d1(f, t, h);
    if (std::abs(f1) < 1e-12) throw Error(ErrorKind::CriticalPoint, "f' vanishes");
    const double f2 = d2(f, t, h);
    const double f3 = d3(f, t, h);
    return f3 / f1 - 1.5 * (f2 / f1) * (f2 / f1);
}

double schwarzian_samples(const std::vector<double>& f, double step, std::size_t i) {
    if (i < 3 || i + 3 >= f.size()) throw Error(ErrorKind::InvalidParams, "sample index too close to the boundary");
    auto g = [&](double s) { return f[static_cast<std::size_t>(std::lround(static_cast<double>(i) + s / step))]; };
    return schwarzian_numeric(g, 0.0, step);
}

double riccati_u(const ScalarFn& f, double t, double h) {
    const double f1 = d1(f, t, h);
    if (std::abs(f1) < 1e-12) throw Error(ErrorKind::CriticalPoint, "f' vanishes");
    return -0.5 * d2(f, t, h) / f1;
}

double riccati_residual(const ScalarFn& f, const ScalarFn& r, double t, double h) {
    auto u = [&](double s) { return riccati_u(f, s, h); };
    const double uu = u(t);
    return d1(u, t, 10 * h) + uu * uu + r(t);
}

double lft_fit_residual(const std::vector<double>& f1, const std::vector<double>& f2) {
    if (f1.size() != f2.size() || f1.size() < 4) throw Error(ErrorKind::InvalidParams, "need matching samples");
    const int m = static_cast<int>(f1.size());
    Mat M(m, 4);
    for (int i = 0; i < m; ++i) M.row(i) << -f1[i], -1, f1[i] * f2[i], f2[i];
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const Vec w = svd.matrixV().col(3);
    double worst = 0;
    for (int i = 0; i < m; ++i) {
        const double g = (w(0) * f1[i] + w(1)) / (w(2) * f1[i] + w(3));
        worst = std::max(worst, std::abs(g - f2[i]));
    }
    return worst;
}

KappaResult projective_kappa(const CurveFn& curve, const ChartConnection& chart, const MatField& P,
                             const std::vector<double>& ts, double h, double tol) {
    KappaResult out;
    auto q_at = [&](double s) {
        const Vec g = curve(s);
        const Vec v = d1(curve, s, h);
        const Vec a = d2(curve, s, h);
        const Vec acc = a + gamma_apply(chart.at(g), v, v);
        const double vv = v.squaredNorm();
        if (vv == 0) throw Error(ErrorKind::NotAGeodesicPath, "curve velocity vanishes");
        const double q = acc.dot(v) / vv;
        out.parallel_defect = std::max(out.parallel_defect, (acc - q * v).norm() / std::max(1.0, vv));
        return q;
    };
    const double H = 10 * h;
    for (double t : ts) {
        const double q = q_at(t);
        const double dq = d1(q_at, t, H);
        const Vec v = d1(curve, t, h);
        out.q.push_back(q);
        out.kappa.push_back(dq - 0.5 * q * q - 2 * v.dot(P(curve(t)) * v));
    }
    if (out.parallel_defect > tol)
        throw Error(ErrorKind::NotAGeodesicPath, "acceleration not parallel to velocity, defect " +
                                                     std::to_string(out.parallel_defect));
    return out;
}

} // namespace geom
