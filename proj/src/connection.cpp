#include "geom/connection.hpp"

#include <cmath>
#include <string>

namespace geom {

DenseTensor InvariantConnection::coeffs() const {
    DenseTensor A = pi;
    for (std::size_t p = 0; p < A.size(); ++p) A.data()[p] += 0.5 * frame.c.data()[p];
    return A;
}

InvariantConnection make_connection(FrameAlgebra frame, DenseTensor pi) {
    if (pi.rank() != 3 || pi.dim() != frame.dim) throw Error(ErrorKind::ShapeMismatch, "Pi must be n x n x n");
    const double scale = std::max(1.0, pi.max_abs());
    const int n = frame.dim;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double a = pi(i, j, k), b = pi(j, i, k);
                if (std::abs(a - b) > 1e-12 * scale)
                    throw Error(ErrorKind::ValidationError, "Pi not symmetric at (" + std::to_string(i) + "," +
                                                                std::to_string(j) + "," + std::to_string(k) + ")");
                pi(i, j, k) = pi(j, i, k) = 0.5 * (a + b);
            }
    return InvariantConnection{std::move(frame), std::move(pi)};
}

InvariantConnection from_coefficients(FrameAlgebra frame, const DenseTensor& A, double tol) {
    const int n = frame.dim;
    DenseTensor pi = DenseTensor::rank3(n);
    const double scale = std::max(1.0, A.max_abs());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double torsion = A(i, j, k) - A(j, i, k) - frame.c(i, j, k);
                if (std::abs(torsion) > tol * scale)
                    throw Error(ErrorKind::ValidationError, "connection has torsion " + std::to_string(torsion));
                pi(i, j, k) = 0.5 * (A(i, j, k) + A(j, i, k));
            }
    return InvariantConnection{std::move(frame), std::move(pi)};
}

InvariantConnection flat_connection(FrameAlgebra frame) {
    const int n = frame.dim;
    return InvariantConnection{std::move(frame), DenseTensor::rank3(n)};
}

Vec apply(const DenseTensor& A, const Vec& x, const Vec& y) {
    const int n = A.dim();
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double w = x(i) * y(j);
            if (w == 0.0) continue;
            for (int k = 0; k < n; ++k) out(k) += w * A(i, j, k);
        }
    return out;
}

DenseTensor curvature_tensor(const DenseTensor& A, const DenseTensor& c) {
    const int n = A.dim();
    DenseTensor R = DenseTensor::rank4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0;
                    for (int p = 0; p < n; ++p)
                        s += A(i, p, l) * A(j, k, p) - A(j, p, l) * A(i, k, p) - c(i, j, p) * A(p, k, l);
                    R(i, j, k, l) = s;
                }
    return R;
}

Mat ricci_of(const DenseTensor& R) { return contract(R, 3, 0).to_matrix(); }

double bianchi_defect(const DenseTensor& R) {
    const int n = R.dim();
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
    return worst;
}

DenseTensor radial_curvature(const DenseTensor& R, const Vec& t) {
    const int n = R.dim();
    DenseTensor out = DenseTensor::rank3(n);
    for (int p = 0; p < n; ++p) {
        if (t(p) == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) out(i, j, k) += t(p) * R(p, i, j, k);
    }
    return out;
}

DenseTensor curvature_on(const DenseTensor& R, const Vec& t) {
    const int n = R.dim();
    DenseTensor out = DenseTensor::rank3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int p = 0; p < n; ++p) s += R(i, j, p, k) * t(p);
                out(i, j, k) = s;
            }
    return out;
}

CurvatureData curvature(const InvariantConnection& conn, const std::optional<Vec>& t) {
    CurvatureData d;
    d.R = curvature_tensor(conn.coeffs(), conn.frame.c);
    d.ric = ricci_of(d.R);
    if (t) d.rho = d.ric.transpose() * (*t);
    return d;
}

Mat ricci_closed_form(const InvariantConnection& conn) {
    const int n = conn.dim();
    const auto& P = conn.pi;
    const auto& c = conn.frame.c;
    const Vec l = trace_form(conn.frame);
    const Mat B = killing_form(conn.frame);
    Vec trpi = Vec::Zero(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) trpi(p) += P(p, q, q);
    Mat r = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = -0.25 * B(j, k);
            for (int p = 0; p < n; ++p) {
                s += trpi(p) * P(j, k, p) - 0.5 * l(p) * P(j, k, p);
                for (int q = 0; q < n; ++q)
                    s += -P(j, p, q) * P(k, q, p) - 0.5 * (c(p, j, q) * P(k, q, p) + c(p, k, q) * P(j, q, p));
            }
            double a = 0;
            for (int p = 0; p < n; ++p) a += 0.5 * c(j, k, p) * trpi(p);
            r(j, k) = s + a;
        }
    return r;
}

RicciRho ricci_rho(const InvariantConnection& conn, const Vec& t) {
    const CurvatureData d = curvature(conn, t);
    return RicciRho{d.ric, *d.rho};
}

double radiant_defect(const InvariantConnection& conn, const Vec& t) {
    const int n = conn.dim();
    const DenseTensor A = conn.coeffs();
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        Vec v = apply(A, Vec::Unit(n, i), t) - Vec::Unit(n, i);
        worst = std::max(worst, v.cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

// Flat index of the unknown Q_ab, a <= b, in a packed symmetric layout.
int sym_index(int a, int b, int n) {
    if (a > b) std::swap(a, b);
    return a * n - a * (a - 1) / 2 + (b - a);
}

Mat unpack_sym(const Vec& x, int n) {
    Mat Q(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) Q(a, b) = x(sym_index(a, b, n));
    return Q;
}

} // namespace

ConelikeFit conelike_solve(const InvariantConnection& conn, const Vec& t, double radiant_tol) {
    const int n = conn.dim();
    const double rd = radiant_defect(conn, t);
    if (rd > radiant_tol) throw Error(ErrorKind::NotRadiant, "radiant defect " + std::to_string(rd));
    const CurvatureData cd = curvature(conn, t);
    const DenseTensor V = radial_curvature(cd.R, t);
    const int m = n * (n + 1) / 2;
    Mat M = Mat::Zero(n * n * n, m);
    Vec rhs(n * n * n);
    // equation (i,j,k): Q_ij t^k - t^p Q_pi delta_j^k - t^p Q_pj delta_i^k = V_ij^k
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int row = (i * n + j) * n + k;
                rhs(row) = V(i, j, k);
                M(row, sym_index(i, j, n)) += t(k);
                for (int p = 0; p < n; ++p) {
                    if (j == k) M(row, sym_index(p, i, n)) -= t(p);
                    if (i == k) M(row, sym_index(p, j, n)) -= t(p);
                }
            }
    const Mat normal = M.transpose() * M;
    const Vec x = normal.colPivHouseholderQr().solve(M.transpose() * rhs);
    ConelikeFit fit;
    fit.Q = unpack_sym(x, n);
    fit.residual = n ? (M * x - rhs).cwiseAbs().maxCoeff() : 0.0;
    fit.rho_defect = (n * (fit.Q * t) - *cd.rho).cwiseAbs().maxCoeff();
    fit.qtt = std::abs(t.dot(fit.Q * t));
    return fit;
}

InvariantConnection normalize_antisym_ricci(const InvariantConnection& conn, const Vec& t, double tol) {
    const int n = conn.dim();
    if (n < 3) throw Error(ErrorKind::DimensionTooSmall, "normalization divides by n - 2");
    const ConelikeFit fit = conelike_solve(conn, t, tol);
    if (fit.residual > tol) throw Error(ErrorKind::NotConelike, "conelike residual " + std::to_string(fit.residual));
    const RicciRho rr = ricci_rho(conn, t);
    const double rho_norm = rr.rho.cwiseAbs().maxCoeff();
    if (rho_norm > tol) throw Error(ErrorKind::RhoNonzero, "|rho| = " + std::to_string(rho_norm));
    // with rho = 0 the conelike tensor is T itself
    const Mat Qn = (fit.Q - sym(rr.ric)) / double(n - 2);
    DenseTensor pi = conn.pi;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) pi(i, j, k) += Qn(i, j) * t(k);
    return make_connection(conn.frame, std::move(pi));
}

InvariantConnection build_cone(const FrameAlgebra& f, const std::optional<Mat>& k_in, const Vec& t,
                               double invariance_tol) {
    const int n = f.dim;
    if (n < 3) throw Error(ErrorKind::DimensionTooSmall, "cone builder needs dim >= 3");
    const Mat B = killing_form(f);
    const Mat k = k_in ? *k_in : B;
    const double ktt = t.dot(k * t);
    if (std::abs(ktt) <= 1e-14 * std::max(1.0, k.cwiseAbs().maxCoeff()) * std::max(1.0, t.squaredNorm()))
        throw Error(ErrorKind::NullDirection, "k(t, t) = 0");
    const InvarianceDefect inv = invariance_defect(f, k, t);
    if (inv.t > invariance_tol) throw Error(ErrorKind::NotInvariant, "ad(t)-invariance defect " + std::to_string(inv.t));
    const Mat h = k / ktt;
    const Vec ht = h * t; // h(t, .)
    const Mat adt = f.ad(t);
    const double btt = t.dot(B * t);
    const Vec bt = B * t;
    const double w = 1.0 / (4.0 * (n - 2));
    DenseTensor pi = DenseTensor::rank3(n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            const Vec er = Vec::Unit(n, r), es = Vec::Unit(n, s);
            const Vec tr = adt.col(r), ts = adt.col(s); // [t, e_r], [t, e_s]
            Vec v = -ht(r) * ht(s) * t + ht(r) * es + ht(s) * er + 0.5 * ht(r) * ts + 0.5 * ht(s) * tr;
            const double coef = B(r, s) + btt * ht(r) * ht(s) - bt(r) * ht(s) - bt(s) * ht(r) - 2.0 * tr.dot(h * ts);
            v += w * coef * t;
            for (int q = 0; q < n; ++q) pi(r, s, q) = v(q);
        }
    return make_connection(f, std::move(pi));
}

InvariantConnection qacone_preset(double a1, double a2, double kappa) {
    if (kappa == 0.0) throw Error(ErrorKind::InvalidParams, "kappa must be nonzero");
    if (a1 == 0.0) throw Error(ErrorKind::NullDirection, "t = e1/kappa is Killing-null when a1 = 0");
    FrameAlgebra f = preset("qa-im", {a1, a2});
    DenseTensor A = DenseTensor::rank3(3);
    const double k = kappa, ik = 1.0 / kappa;
    // A(E_i, E_j) = nabla_{E_i} E_j
    A(0, 0, 0) = k;
    A(1, 0, 1) = k;
    A(2, 0, 2) = k;
    A(0, 1, 1) = k;
    A(0, 1, 2) = 2;
    A(1, 1, 0) = 4 * a2 * ik;
    A(2, 1, 0) = a2;
    A(0, 2, 2) = k;
    A(0, 2, 1) = 2 * a1;
    A(1, 2, 0) = -a2;
    A(2, 2, 0) = -4 * a1 * a2 * ik;
    return from_coefficients(std::move(f), A);
}

Vec qacone_radiant(double kappa) { return Vec::Unit(3, 0) / kappa; }

InvariantConnection apply_cone_shift(const InvariantConnection& conn, const Vec& t, const Mat& Q, double tol) {
    const int n = conn.dim();
    const double qtt = t.dot(Q * t);
    if (std::abs(qtt) > tol * std::max(1.0, Q.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::ConstraintViolated, "Q(t, t) = " + std::to_string(qtt));
    const Mat Qs = sym(Q);
    const Vec q = Qs * t;
    DenseTensor pi = conn.pi;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                pi(i, j, k) += Qs(i, j) * t(k) - q(i) * (j == k) - q(j) * (i == k);
    return make_connection(conn.frame, std::move(pi));
}

InvariantConnection projective_change(const InvariantConnection& conn, const Vec& gamma) {
    const int n = conn.dim();
    DenseTensor pi = conn.pi;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            pi(i, j, j) += gamma(i);
            pi(i, j, i) += gamma(j);
        }
    return make_connection(conn.frame, std::move(pi));
}

DenseTensor covariant_derivative(const DenseTensor& A, const DenseTensor& T) {
    const int n = A.dim();
    if (T.dim() != n) throw Error(ErrorKind::ShapeMismatch, "tensor and connection dimensions differ");
    std::vector<Variance> var{Variance::lower};
    var.insert(var.end(), T.variance().begin(), T.variance().end());
    DenseTensor out(n, var);
    const int r = T.rank();
    for (std::size_t pos = 0; pos < out.size(); ++pos) {
        auto idx = out.unravel(pos);
        const int i = idx[0];
        std::vector<int> tidx(idx.begin() + 1, idx.end());
        double acc = 0;
        for (int m = 0; m < r; ++m) {
            const int orig = tidx[m];
            for (int p = 0; p < n; ++p) {
                tidx[m] = p;
                if (T.variance()[m] == Variance::lower)
                    acc -= A(i, orig, p) * T.at(tidx);
                else
                    acc += A(i, p, orig) * T.at(tidx);
            }
            tidx[m] = orig;
        }
        out.data()[pos] = acc;
    }
    return out;
}

DenseTensor covariant_derivative(const InvariantConnection& conn, const DenseTensor& T) {
    return covariant_derivative(conn.coeffs(), T);
}

DenseTensor covariant_derivative(const InvariantConnection& conn, const Mat& S) {
    return covariant_derivative(conn.coeffs(), DenseTensor::from_matrix(S));
}

Mat covariant_derivative(const InvariantConnection& conn, const Vec& theta) {
    return covariant_derivative(conn.coeffs(), DenseTensor::from_vector(theta, Variance::lower)).to_matrix();
}

ProjectiveTensors projective_tensors(const InvariantConnection& conn) {
    const int n = conn.dim();
    if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "projective tensors need dim >= 2");
    const CurvatureData cd = curvature(conn);
    ProjectiveTensors out;
    out.P = sym(cd.ric) / double(1 - n) - skew(cd.ric) / double(n + 1);
    const Mat& P = out.P;
    out.B = cd.R;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                out.B(i, j, k, i) += P(j, k);
                out.B(i, j, k, j) -= P(i, k);
                out.B(i, j, k, k) -= P(i, j) - P(j, i);
            }
    const DenseTensor dP = covariant_derivative(conn, P);
    out.C = DenseTensor(n, {Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out.C(i, j, k) = dP(i, j, k) - dP(j, i, k);
    return out;
}

} // namespace geom
