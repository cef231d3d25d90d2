#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geom/tensor.hpp"

namespace geom {

using PointField = std::function<Vec(const Vec&)>;
using ChristoffelField = std::function<DenseTensor(const Vec&)>;
using ScalarFn = std::function<double(double)>;
using CurveFn = std::function<Vec(double)>;
using MatField = std::function<Mat(const Vec&)>;

enum class ChartFamily { flat, radiant_power, projflat_quadric, custom };

struct ChartParams {
    int dim = 3;
    double alpha = 0;  // radiant_power exponent
    Mat h;             // radiant_power metric, identity when empty
    double eps = 1;    // projflat_quadric sign
};

// Connection coefficients Gamma_ij^k(x) on a coordinate patch.
struct ChartConnection {
    int dim = 0;
    ChartFamily family = ChartFamily::custom;
    ChartParams params;
    ChristoffelField gamma;
    std::optional<PointField> radiant_field;
    std::function<bool(const Vec&)> in_domain;

    DenseTensor at(const Vec& x) const;
};

ChartConnection make_chart(const std::string& family, const ChartParams& params);
ChartConnection make_custom_chart(int dim, ChristoffelField gamma, std::optional<PointField> radiant = std::nullopt);

// d/dx^i of a field by the 5-point central stencil
std::vector<Vec> fd_gradient(const PointField& f, const Vec& x, double h);

struct ChartCurvature {
    DenseTensor R;
    Mat ric;
};
ChartCurvature curvature_at(const ChartConnection& chart, const Vec& x, double fd_step = 1e-5);
Mat chart_schouten_at(const ChartConnection& chart, const Vec& x, double fd_step = 1e-5);

// (nabla X)_i^j = d_i X^j + Gamma_ip^j X^p
Mat covariant_derivative_at(const ChartConnection& chart, const PointField& X, const Vec& x, double fd_step = 1e-5);

double radiant_defect_at(const ChartConnection& chart, const Vec& x, double fd_step = 1e-5);
double proj_dilatative_defect_at(const ChartConnection& chart, const PointField& X, const Vec& x,
                                 double fd_step = 1e-5);

struct DilatationFit {
    double f = 0;
    Vec sigma;
    double residual = 0;
};
// Least-squares fit nabla X = f delta + sigma (x) X at x
DilatationFit fit_dilatation(const ChartConnection& chart, const PointField& X, const Vec& x, double fd_step = 1e-5);

struct Radiantized {
    DenseTensor gamma;
    Vec X;
    double f = 0;
    Vec sigma;
    double asymmetry = 0;
    double radiant_defect = 0;
};
Radiantized radiantize_at(const ChartConnection& chart, const PointField& X, const Vec& x, double fd_step = 1e-5,
                          double outer_step = 1e-3);

struct GeodesicState {
    double t = 0;
    Vec x;
    Vec v;
};
struct GeodesicTrace {
    std::vector<GeodesicState> states;
    bool domain_violation = false;
    std::string message;
};
// Fixed-step RK4; stops at the last valid state when the trajectory leaves the domain.
GeodesicTrace geodesic_integrate(const ChartConnection& chart, const Vec& x0, const Vec& v0, double T,
                                 double step = 1e-3);

struct CentralInvariants {
    double c_sq = 0;
    double energy = 0;
};
CentralInvariants central_invariants(const GeodesicState& s, int ambient_dim);

struct SchwarzianProblem {
    ScalarFn r;
    double a = 0, b = 1, c = 0;
    double t_begin = 0; // integration runs from 0 out to both ends
    double t_end = 1;
    double step = 1e-3;
};
struct SchwarzianSolution {
    std::vector<double> t, x1, x2, dx1, dx2, f, u;
    bool truncated = false;
    double t_min = 0, t_max = 0;
};
SchwarzianSolution schwarzian_solve(const SchwarzianProblem& p);

double schwarzian_numeric(const ScalarFn& f, double t, double fd_step = 5e-3);
// Schwarzian at sample index i of a uniformly spaced sequence
double schwarzian_samples(const std::vector<double>& f, double step, std::size_t i);
// u = -f''/(2 f') and the residual u' + u^2 + r
double riccati_u(const ScalarFn& f, double t, double fd_step = 1e-3);
double riccati_residual(const ScalarFn& f, const ScalarFn& r, double t, double fd_step = 1e-3);

// Residual of the best linear fractional map g with g(f1) = f2 over the samples
double lft_fit_residual(const std::vector<double>& f1, const std::vector<double>& f2);

struct KappaResult {
    std::vector<double> kappa;
    std::vector<double> q;
    double parallel_defect = 0;
};
KappaResult projective_kappa(const CurveFn& curve, const ChartConnection& chart, const MatField& P,
                             const std::vector<double>& ts, double fd_step = 1e-3, double tol = 1e-6);

} // namespace geom
