#include "geom/metric_compat.hpp"

#include <cmath>
#include <string>

namespace geom {

namespace {

// T_ij^k = S_ijp h^pk
DenseTensor raise_last(const DenseTensor& S, const Mat& hinv) {
    const int n = S.dim();
    DenseTensor out = DenseTensor::rank3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int p = 0; p < n; ++p) s += S(i, j, p) * hinv(p, k);
                out(i, j, k) = s;
            }
    return out;
}

// R_ijkl = R_ijk^p h_pl
DenseTensor lower_curvature(const DenseTensor& R, const Mat& h) {
    const int n = R.dim();
    DenseTensor out(n, {Variance::lower, Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0;
                    for (int p = 0; p < n; ++p) s += R(i, j, k, p) * h(p, l);
                    out(i, j, k, l) = s;
                }
    return out;
}

double torsion_of(const DenseTensor& A, const DenseTensor& c) {
    const int n = A.dim();
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(A(i, j, k) - A(j, i, k) - c(i, j, k)));
    return worst;
}

double skew_first_pair(const DenseTensor& T) {
    const int n = T.dim();
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) worst = std::max(worst, 0.5 * std::abs(T(i, j, k) - T(j, i, k)));
    return worst;
}

Vec trace_last_pair(const DenseTensor& T, const Mat& ginv) {
    const int n = T.dim();
    Vec v = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) v(i) += ginv(p, q) * T(i, p, q);
    return v;
}

Vec trace_first_pair(const DenseTensor& T, const Mat& ginv) {
    const int n = T.dim();
    Vec v = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) v(i) += ginv(p, q) * T(p, q, i);
    return v;
}

} // namespace

FrameMetric make_metric(const Mat& h) { return FrameMetric{h, sym2_inverse(h)}; }

DenseTensor covderiv_sym2(const InvariantConnection& conn, const Mat& h) {
    if (h.rows() != conn.dim() || h.cols() != conn.dim()) throw Error(ErrorKind::ShapeMismatch, "metric size");
    return covariant_derivative(conn, h);
}

InvariantConnection DualConnection::connection(double tol) const {
    if (torsion_defect > tol)
        throw Error(ErrorKind::ValidationError, "dual connection has torsion " + std::to_string(torsion_defect));
    return from_coefficients(frame, coeffs, std::max(tol, 1e-12));
}

DualConnection conjugate_or_opposite(const InvariantConnection& conn, const Mat& h, CompatMode mode) {
    const Mat hinv = sym2_inverse(h);
    const DenseTensor dh = covderiv_sym2(conn, h);
    const int n = conn.dim();
    DenseTensor diff = dh;
    if (mode == CompatMode::opposite) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int p = 0; p < n; ++p) diff(i, j, p) = dh(i, j, p) + dh(j, i, p) - dh(p, i, j);
    }
    DualConnection out{conn.frame, conn.coeffs() + raise_last(diff, hinv), 0};
    out.torsion_defect = torsion_of(out.coeffs, conn.frame.c);
    return out;
}

CompatReport structure_report(const InvariantConnection& conn, const Mat& h, const std::optional<Vec>& t) {
    const int n = conn.dim();
    const Mat hinv = sym2_inverse(h);
    const DenseTensor dh = covderiv_sym2(conn, h);
    CompatReport r;
    r.statistical_defect = skew_first_pair(dh);
    r.special_defect = trace_last_pair(dh, hinv).cwiseAbs().maxCoeff();
    if (t) {
        const Vec flat = h * (*t);
        r.v = t->dot(flat);
        r.self_similar_defect = (lie_derivative_invariant(conn.frame, *t, h) - 2 * h).cwiseAbs().maxCoeff();
        r.radiant_hessian_defect = (covariant_derivative(conn, flat) - h).cwiseAbs().maxCoeff();
        r.flat_oneform_closed_defect = frame_d_oneform(conn.frame, flat).cwiseAbs().maxCoeff();
        r.dv_minus_2flat = (2 * flat).cwiseAbs().maxCoeff();
    }
    (void)n;
    return r;
}

AHData ah_data(const InvariantConnection& conn, const Mat& g) {
    const int n = conn.dim();
    const Mat ginv = sym2_inverse(g);
    const DenseTensor dg = covderiv_sym2(conn, g);
    AHData d;
    d.chi = trace_first_pair(dg, ginv);
    d.tau = trace_last_pair(dg, ginv);
    d.alignment_defect = (d.tau - n * d.chi).cwiseAbs().maxCoeff();
    d.cubic = dg;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) d.cubic(i, j, k) -= d.chi(i) * g(j, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double lhs = 0.5 * (dg(i, j, k) - dg(j, i, k));
                const double rhs = 0.5 * (d.chi(i) * g(j, k) - d.chi(j) * g(i, k));
                d.codazzi_defect = std::max(d.codazzi_defect, std::abs(lhs - rhs));
                const double L = d.cubic(i, j, k);
                d.cubic_symmetry_defect = std::max(
                    {d.cubic_symmetry_defect, std::abs(L - d.cubic(j, i, k)), std::abs(L - d.cubic(i, k, j))});
            }
    d.cubic_trace_defect = std::max(trace_last_pair(d.cubic, ginv).cwiseAbs().maxCoeff(),
                                    trace_first_pair(d.cubic, ginv).cwiseAbs().maxCoeff());
    return d;
}

static void require_ah(const AHData& d, double tol) {
    if (d.codazzi_defect > tol || d.alignment_defect > tol)
        throw Error(ErrorKind::NotAH, "codazzi defect " + std::to_string(d.codazzi_defect) + ", alignment defect " +
                                          std::to_string(d.alignment_defect));
}

InvariantConnection ah_conjugate(const InvariantConnection& conn, const Mat& g, double tol) {
    const AHData d = ah_data(conn, g);
    require_ah(d, tol);
    const Mat ginv = sym2_inverse(g);
    return from_coefficients(conn.frame, conn.coeffs() + raise_last(d.cubic, ginv), std::max(tol, 1e-12));
}

double ah_curvature_relation_defect(const InvariantConnection& conn, const Mat& g, double tol) {
    const int n = conn.dim();
    const AHData d = ah_data(conn, g);
    const InvariantConnection conj = ah_conjugate(conn, g, tol);
    const DenseTensor R = lower_curvature(curvature(conn).R, g);
    const DenseTensor Rc = lower_curvature(curvature(conj).R, g);
    const Mat dchi = frame_d_oneform(conn.frame, d.chi);
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(Rc(i, j, k, l) + R(i, j, l, k) + dchi(i, j) * g(k, l)));
    return worst;
}

EinsteinAHReport einstein_ah_report(const InvariantConnection& conn, const Mat& g, double tol) {
    const int n = conn.dim();
    const AHData d = ah_data(conn, g);
    require_ah(d, tol);
    const Mat ginv = sym2_inverse(g);
    const InvariantConnection conj = ah_conjugate(conn, g, tol);
    EinsteinAHReport r;
    const Mat ric = curvature(conn).ric;
    r.scalar = (ginv.cwiseProduct(ric)).sum();
    r.naive_defect = (sym(ric) - (r.scalar / n) * g).cwiseAbs().maxCoeff();
    const Mat ricc = curvature(conj).ric;
    const double scc = (ginv.cwiseProduct(ricc)).sum();
    r.conjugate_naive_defect = (sym(ricc) - (scc / n) * g).cwiseAbs().maxCoeff();
    const Mat dchi = frame_d_oneform(conn.frame, d.chi);
    const DenseTensor ddchi = covariant_derivative(conn, dchi);
    const Vec div = trace_first_pair(ddchi, ginv); // g^pq nabla_p dchi_qi
    r.conservation_defect = (r.scalar * d.chi + 0.5 * n * div).cwiseAbs().maxCoeff();
    return r;
}

double conjugate_curvature_defect(const InvariantConnection& conn, const Mat& h, double tol) {
    const int n = conn.dim();
    const CompatReport rep = structure_report(conn, h);
    if (rep.statistical_defect > tol)
        throw Error(ErrorKind::NotStatistical, "statistical defect " + std::to_string(rep.statistical_defect));
    const InvariantConnection conj = conjugate_or_opposite(conn, h, CompatMode::conjugate).connection(std::max(tol, 1e-9));
    const DenseTensor R = lower_curvature(curvature(conn).R, h);
    const DenseTensor Rc = lower_curvature(curvature(conj).R, h);
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(Rc(i, j, k, l) + R(i, j, l, k)));
    return worst;
}

ThomasCriterion conjugate_thomas_criterion(const InvariantConnection& conn, int t_index, const Mat& H, double tol) {
    const int n = conn.dim();
    if (t_index < 0 || t_index >= n) throw Error(ErrorKind::InvalidParams, "radiant index out of range");
    const Vec t = Vec::Unit(n, t_index);
    const double rd = radiant_defect(conn, t);
    if (rd > tol) throw Error(ErrorKind::NotRadiant, "radiant defect " + std::to_string(rd));
    const CompatReport rep = structure_report(conn, H, t);
    ThomasCriterion c;
    c.statistical = rep.statistical_defect;
    c.special = rep.special_defect;
    c.self_similar = rep.self_similar_defect;
    const CurvatureData cd = curvature(conn);
    const DenseTensor Rl = lower_curvature(cd.R, H);
    const Mat Hinv = sym2_inverse(H);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s += Hinv(a, b) * Rl(i, a, b, j);
            c.conjugate_ricci_flat = std::max(c.conjugate_ricci_flat, std::abs(s));
        }
    c.ricci_flat = cd.ric.cwiseAbs().maxCoeff();
    c.passes = c.statistical <= tol && c.special <= tol && c.self_similar <= tol && c.conjugate_ricci_flat <= tol &&
               c.ricci_flat <= tol;
    return c;
}

InvariantConnection connection_with_metric_derivative(const FrameAlgebra& frame, const Mat& g, const DenseTensor& S) {
    const int n = frame.dim;
    const Mat ginv = sym2_inverse(g);
    const InvariantConnection base = flat_connection(frame);
    const DenseTensor S0 = covderiv_sym2(base, g);
    const DenseTensor D = S0 - S;
    DenseTensor theta(n, {Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) theta(i, j, k) = 0.5 * (D(i, j, k) + D(j, i, k) - D(k, i, j));
    DenseTensor pi = raise_last(theta, ginv);
    return make_connection(frame, std::move(pi));
}

} // namespace geom
