#include "geom/cone_lift.hpp"

#include <cmath>
#include <string>

namespace geom {

namespace {

double scale_of(const Mat& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

// (nabla S)_IJK for a basic symmetric or skew S on the lift, expressed through the lifted connection.
DenseTensor pullback_derivative(const LiftedData& L, const Mat& S) {
    const int N = L.frame.dim;
    const Vec& b = L.beta;
    DenseTensor d = covariant_derivative(L.conn, S);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                d(i, j, k) += 2 * b(i) * S(j, k) + b(j) * S(i, k) + b(k) * S(j, i);
    return d;
}

Vec outer_trace(const DenseTensor& T, const Mat& h, bool first_pair) {
    const int n = T.dim();
    Vec v = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) v(i) += h(p, q) * (first_pair ? T(p, q, i) : T(i, p, q));
    return v;
}

void check_square(const Mat& m, int n, const char* what) {
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " size");
}

} // namespace

BaseData make_base(FrameAlgebra frame, DenseTensor pi_base, Mat omega) {
    const int n = frame.dim;
    check_square(omega, n, "omega");
    if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(omega))
        throw Error(ErrorKind::ValidationError, "omega is not antisymmetric");
    omega = skew(omega);
    InvariantConnection conn = make_connection(frame, std::move(pi_base));
    return BaseData{conn.frame, conn.pi, omega};
}

double omega_closedness_defect(const BaseData& base) { return frame_d_twoform(base.frame, base.omega).max_abs(); }

FrameAlgebra lift_frame(const BaseData& base) {
    const int n = base.dim();
    const double scale = std::max(1.0, base.frame.c.max_abs()) * scale_of(base.omega);
    const double closed = omega_closedness_defect(base);
    if (closed > 1e-12 * scale) throw Error(ErrorKind::NotClosed, "d omega = " + std::to_string(closed));
    DenseTensor c = DenseTensor::rank3(n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) c(i, j, k) = base.frame.c(i, j, k);
            c(i, j, n) = -base.omega(i, j);
        }
    return make_frame(std::move(c), base.frame.name.empty() ? "lift" : base.frame.name + "-lift");
}

Mat eta_two_form(const BaseData& base) {
    const int n = base.dim();
    const Mat ric = curvature(InvariantConnection{base.frame, base.pi_base}).ric;
    return base.omega - (2.0 / (n + 1)) * skew(ric);
}

Mat normalized_q(const BaseData& base) {
    const ProjectiveTensors pt = projective_tensors(InvariantConnection{base.frame, base.pi_base});
    return sym(pt.P) - 0.5 * base.omega;
}

LiftedData cone_connection(const BaseData& base) { return cone_connection_general(base, normalized_q(base)); }

LiftedData cone_connection_general(const BaseData& base, const Mat& Q) {
    const int n = base.dim();
    check_square(Q, n, "Q");
    const double compat = (Q - Q.transpose() + base.omega).cwiseAbs().maxCoeff();
    if (compat > 1e-12 * std::max(scale_of(Q), scale_of(base.omega)))
        throw Error(ErrorKind::IncompatibleQ, "2 Q_[ij] + omega_ij = " + std::to_string(compat));
    FrameAlgebra frame = lift_frame(base);
    const DenseTensor A = InvariantConnection{base.frame, base.pi_base}.coeffs();
    DenseTensor Ah = DenseTensor::rank3(n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) Ah(i, j, k) = A(i, j, k);
            Ah(i, j, n) = Q(i, j);
        }
        Ah(i, n, i) = 1;
        Ah(n, i, i) = 1;
    }
    Ah(n, n, n) = 1;
    LiftedData L;
    L.conn = from_coefficients(frame, Ah, 1e-10);
    L.frame = std::move(frame);
    L.beta = Vec::Unit(n + 1, n);
    L.t_vec = Vec::Unit(n + 1, n);
    L.basis = Mat::Identity(n + 1, n + 1);
    return L;
}

LiftedData designate_vertical(const InvariantConnection& conn, const Vec& t, double tol) {
    const int N = conn.dim();
    if (t.size() != N) throw Error(ErrorKind::ShapeMismatch, "radiant vector size");
    const double rd = radiant_defect(conn, t);
    if (rd > tol) throw Error(ErrorKind::NotRadiant, "radiant defect " + std::to_string(rd));
    const double inv = radial_curvature(curvature(conn).R, t).max_abs();
    if (inv > tol) throw Error(ErrorKind::NotInvariant, "t^p R_pij^k = " + std::to_string(inv));

    // beta(t) = 1 and beta o ad(t) = 0
    Mat M(N + 1, N);
    M.topRows(N) = conn.frame.ad(t).transpose();
    M.row(N) = t.transpose();
    Vec rhs = Vec::Zero(N + 1);
    rhs(N) = 1;
    const Vec beta = M.colPivHouseholderQr().solve(rhs);
    const double res = (M * beta - rhs).cwiseAbs().maxCoeff();
    if (res > tol) throw Error(ErrorKind::NotInvariant, "no invariant principal connection, residual " + std::to_string(res));

    int jt = 0;
    t.cwiseAbs().maxCoeff(&jt);
    Mat B(N, N);
    int col = 0;
    for (int j = 0; j < N; ++j) {
        if (j == jt) continue;
        B.col(col++) = Vec::Unit(N, j) - beta(j) * t;
    }
    B.col(N - 1) = t;

    FrameAlgebra frame = make_frame(alternate2(change_basis(conn.frame.c, B), 0, 1),
                                    conn.frame.name.empty() ? "designated" : conn.frame.name + "-designated");
    LiftedData L;
    L.conn = from_coefficients(frame, change_basis(conn.coeffs(), B), 1e-9);
    L.frame = std::move(frame);
    L.beta = Vec::Unit(N, N - 1);
    L.t_vec = Vec::Unit(N, N - 1);
    L.basis = B;
    return L;
}

ExtractedBase extract_base(const LiftedData& L) {
    const int n = L.base_dim();
    DenseTensor c = DenseTensor::rank3(n);
    DenseTensor G = DenseTensor::rank3(n);
    Mat omega(n, n), Q(n, n);
    const DenseTensor A = L.conn.coeffs();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                c(i, j, k) = L.frame.c(i, j, k);
                G(i, j, k) = A(i, j, k);
            }
            omega(i, j) = -L.frame.c(i, j, n);
            Q(i, j) = A(i, j, n);
        }
    FrameAlgebra frame = make_frame(alternate2(c, 0, 1), "base");
    InvariantConnection conn = from_coefficients(frame, G, 1e-9);
    return ExtractedBase{BaseData{conn.frame, conn.pi, skew(omega)}, Q};
}

FrameMetric lifted_metric(const LiftedData& L, double t_param) {
    if (std::abs(t_param + 1) < 1e-12) throw Error(ErrorKind::DegenerateT, "t = -1");
    const Mat nb = covariant_derivative(L.conn, L.beta);
    const Mat G = sym(nb) + (2 + t_param) * L.beta * L.beta.transpose();
    return make_metric(G);
}

Mat to_source_frame(const LiftedData& L, const Mat& g) {
    const Mat binv = L.basis.inverse();
    return binv.transpose() * g * binv;
}

DenseTensor modification_tensor(const LiftedData& L, double t, double s) {
    const int N = L.frame.dim;
    const FrameMetric G = lifted_metric(L, t);
    const Vec& b = L.beta;
    const Vec& E = L.t_vec;
    const Mat up = frame_d_oneform(L.frame, b) * G.inv; // dbeta_J^K
    DenseTensor W = DenseTensor::rank3(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                const double bd = b(i) * (j == k) + b(j) * (i == k);
                W(i, j, k) = 0.5 * (1 + t) * (b(i) * up(j, k) + b(j) * up(i, k)) - t * b(i) * b(j) * E(k) +
                             (s - 1) * (bd - G.h(i, j) * E(k)) + s * t * bd;
            }
    return W;
}

InvariantConnection modified_connection(const LiftedData& L, double t_param, double s) {
    return from_coefficients(L.frame, L.conn.coeffs() + modification_tensor(L, t_param, s), 1e-9);
}

namespace {

// Pullback of the skew Schouten part, from the skew Ricci of the lift.
Mat lifted_p_skew(const LiftedData& L, const Mat& dbeta) {
    const int n = L.frame.dim - 1;
    const Mat ric = curvature(L.conn).ric;
    return -(skew(ric) + 0.5 * (n + 1) * dbeta) / (n + 1);
}

} // namespace

LiftPullbacks lift_pullbacks(const LiftedData& L) {
    const Vec& b = L.beta;
    LiftPullbacks p;
    p.dbeta = frame_d_oneform(L.frame, b);
    p.g = -(sym(covariant_derivative(L.conn, b)) + b * b.transpose());
    p.p_skew = lifted_p_skew(L, p.dbeta);
    p.eta = 2 * p.p_skew + p.dbeta;
    p.dg = pullback_derivative(L, p.g);
    p.domega = pullback_derivative(L, p.dbeta);
    const Mat gi = -lifted_metric(L, 0).inv;
    p.tau = outer_trace(p.dg, gi, false);
    p.chi = outer_trace(p.dg, gi, true);
    p.nu = outer_trace(p.domega, gi, true);
    p.omega_omega = p.dbeta * gi * p.dbeta;
    p.omega_norm2 = (p.dbeta.transpose() * gi * p.dbeta * gi).trace();
    p.chi_omega = p.dbeta * gi * p.chi;
    return p;
}

ModifiedIdentityDefects modified_identity_defects(const LiftedData& L, double t, double s) {
    const int N = L.frame.dim;
    const int n = N - 1;
    const Vec& b = L.beta;
    const Vec& E = L.t_vec;
    const FrameMetric G = lifted_metric(L, t);
    const LiftPullbacks p = lift_pullbacks(L);
    const InvariantConnection D = modified_connection(L, t, s);
    const DenseTensor DG = covariant_derivative(D, G.h);
    ModifiedIdentityDefects d;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                const double want = -2 * s * (t + 1) * b(i) * G.h(j, k) - p.dg(i, j, k);
                d.metric_derivative = std::max(d.metric_derivative, std::abs(DG(i, j, k) - want));
                const double lhs = 0.5 * (DG(i, j, k) - DG(j, i, k));
                const double rhs = -s * (1 + t) * (b(i) * G.h(j, k) - b(j) * G.h(i, k)) -
                                   0.5 * (p.dg(i, j, k) - p.dg(j, i, k));
                d.metric_skew = std::max(d.metric_skew, std::abs(lhs - rhs));
            }
    const Vec align = outer_trace(DG, G.inv, false) - (n + 1) * outer_trace(DG, G.inv, true);
    d.alignment = (align - (p.tau - (n + 1) * p.chi)).cwiseAbs().maxCoeff();

    const DenseTensor Dc = D.coeffs();
    const Mat up = p.dbeta * G.inv;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double de = 0;
            for (int q = 0; q < N; ++q) de += Dc(i, q, j) * E(q);
            const double want = (1 + t) * (0.5 * up(i, j) + s * (i == j));
            d.vertical_derivative = std::max(d.vertical_derivative, std::abs(de - want));
        }
    const Vec det = outer_trace(covariant_derivative(L.conn, G.h), G.inv, false);
    d.determinant_trace = (det - (-2.0 * (n + 1) * b + p.tau)).cwiseAbs().maxCoeff();
    return d;
}

RicciClosedForm ricci_closed_form(const LiftedData& L, double t, double s) {
    const int n = L.base_dim();
    const Vec& b = L.beta;
    lifted_metric(L, t); // validates t and nondegeneracy
    const LiftPullbacks p = lift_pullbacks(L);
    const double s2 = s * s;
    RicciClosedForm r;
    r.ric = -(n + 1) * p.p_skew - 0.5 * s * (n + 1 + (n + 3) * t) * p.dbeta +
            (t + 1) * (sym(p.nu * b.transpose()) + sym(b * p.chi_omega.transpose())) +
            ((n - 1 + n * t) * s2 - n + 1 - t) * p.g - 0.5 * (1 + t) * p.omega_omega +
            (t + 1) * (t * (1 - s2) + 0.25 * (t + 1) * p.omega_norm2) * b * b.transpose();
    r.trace = -0.25 * (1 + t) * p.omega_norm2 -
              ((s2 - n - 1) * t * t + (n * n + 1) * (s2 - 1) * t + n * (n - 1) * (s2 - 1)) / (t + 1) +
              n * s2 * t * (t - n + 1) / (t + 1);
    return r;
}

Mat ricci_direct(const LiftedData& L, double t_param, double s) {
    return curvature(modified_connection(L, t_param, s)).ric;
}

AlphaFit fit_alpha(const LiftedData& L) {
    const LiftPullbacks p = lift_pullbacks(L);
    AlphaFit f;
    const double gg = p.g.squaredNorm();
    if (gg == 0) throw Error(ErrorKind::SingularMetric, "g vanishes");
    f.alpha = (p.omega_omega.cwiseProduct(p.g)).sum() / gg;
    const double denom = std::max(p.omega_omega.norm(), 1e-300);
    f.defect = p.omega_omega.norm() == 0 ? 0 : (p.omega_omega - f.alpha * p.g).norm() / denom;
    return f;
}

std::vector<double> ew_s_values(double alpha, double t, int n) {
    if (n < 2 || t == -1) return {};
    const double r = 1 / (1 + t) + (n + 2) * alpha / (4.0 * (n - 1));
    if (r < 0) return {};
    if (r == 0) return {0.0};
    return {-std::sqrt(r), std::sqrt(r)};
}

DenseTensor invariant_lift(const LiftedData& L, const DenseTensor& a, double eta_tol) {
    const int n = L.base_dim();
    const int N = n + 1;
    const int k = a.rank() - 1;
    if (a.dim() != n || k < 0 || a.variance().back() != Variance::upper)
        throw Error(ErrorKind::ShapeMismatch, "expected base tensor with lower indices then one upper index");
    for (int i = 0; i < k; ++i)
        if (a.variance()[i] != Variance::lower) throw Error(ErrorKind::ShapeMismatch, "lower indices must come first");
    if (k == n + 1) throw Error(ErrorKind::ForbiddenDegree, "k = n + 1");
    const Mat dbeta = frame_d_oneform(L.frame, L.beta);
    const double eta = (2 * lifted_p_skew(L, dbeta) + dbeta).cwiseAbs().maxCoeff();
    if (eta > eta_tol) throw Error(ErrorKind::NotThomas, "eta = " + std::to_string(eta));
    for (int i = 0; i < k; ++i) {
        const double tr = contract(a, k, i).max_abs();
        if (tr > 1e-10) throw Error(ErrorKind::PreconditionFailed, "tensor is not trace-free: " + std::to_string(tr));
    }
    const ExtractedBase eb = extract_base(L);
    const InvariantConnection bc{eb.base.frame, eb.base.pi_base};
    DenseTensor B = contract(covariant_derivative(bc, a), k + 1, 0);
    B *= -1.0 / (n + 1 - k);

    DenseTensor out(N, a.variance());
    for (std::size_t q = 0; q < out.size(); ++q) {
        std::vector<int> idx = out.unravel(q);
        bool horizontal = true;
        for (int i = 0; i < k; ++i) horizontal = horizontal && idx[i] < n;
        if (!horizontal) continue;
        const int up = idx[k];
        if (up < n) {
            out.data()[q] = a.at(idx);
        } else {
            idx.pop_back();
            out.data()[q] = k == 0 ? B.data()[0] : B.at(idx);
        }
    }
    return out;
}

DenseTensor lifted_divergence(const LiftedData& L, const DenseTensor& T) {
    return contract(covariant_derivative(L.conn, T), T.rank(), 0);
}

double exact_shift_residual(const FrameAlgebra& f, const Vec& t, const Vec& theta) {
    const int n = f.dim;
    const Mat target = frame_d_oneform(f, theta);
    const int rows = n * (n - 1) / 2 + 1;
    Mat M = Mat::Zero(rows, n);
    Vec rhs = Vec::Zero(rows);
    int r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++r) {
            for (int p = 0; p < n; ++p) M(r, p) = -f.c(i, j, p);
            rhs(r) = target(i, j);
        }
    M.row(r) = t.transpose();
    const Vec sigma = M.colPivHouseholderQr().solve(rhs);
    return (M * sigma - rhs).norm();
}

double vertical_annihilation_defect(const LiftedData& L) {
    const DenseTensor R = curvature(L.conn).R;
    return std::max(radial_curvature(R, L.t_vec).max_abs(), curvature_on(R, L.t_vec).max_abs());
}

} // namespace geom
