#include "geom/clifford.hpp"

#include <cmath>

namespace geom {

Eigen::Matrix4d left_matrix(const CliffordElement& x) {
    const double a1 = x.params.a1, a2 = x.params.a2;
    const auto& q = x.q;
    Eigen::Matrix4d L;
    L << q(0), a1 * q(1), a2 * q(2), -a1 * a2 * q(3),
         q(1), q(0), a2 * q(3), -a2 * q(2),
         q(2), -a1 * q(3), q(0), a1 * q(1),
         q(3), -q(2), q(1), q(0);
    return L;
}

Eigen::Matrix4d right_matrix(const CliffordElement& x) {
    const double a1 = x.params.a1, a2 = x.params.a2;
    const auto& q = x.q;
    Eigen::Matrix4d R;
    R << q(0), a1 * q(1), a2 * q(2), -a1 * a2 * q(3),
         q(1), q(0), -a2 * q(3), a2 * q(2),
         q(2), a1 * q(3), q(0), -a1 * q(1),
         q(3), q(2), -q(1), q(0);
    return R;
}

CliffordElement multiply(const CliffordElement& p, const CliffordElement& q) {
    if (!(p.params == q.params)) throw Error(ErrorKind::ParamMismatch, "factors from different algebras");
    return CliffordElement{p.params, left_matrix(p) * q.q};
}

CliffordElement conjugate(const CliffordElement& q) {
    CliffordElement c = q;
    c.q.tail<3>() = -q.q.tail<3>();
    return c;
}

double trace(const CliffordElement& q) { return 2 * q.q(0); }

double norm(const CliffordElement& x) {
    const double a1 = x.params.a1, a2 = x.params.a2;
    const auto& q = x.q;
    return q(0) * q(0) - a1 * q(1) * q(1) - a2 * q(2) * q(2) + a1 * a2 * q(3) * q(3);
}

CliffordElement euler_exp(const CliffordElement& w, double t) {
    if (!w.is_imaginary()) throw Error(ErrorKind::NotImaginary, "exponent must be purely imaginary");
    const double nw = norm(w);
    CliffordElement out = w;
    out.q *= S_kappa(nw, t);
    out.q(0) = C_kappa(nw, t);
    return out;
}

Eigen::Matrix3d adjoint_on_im(const CliffordElement& q) {
    const double nq = norm(q);
    if (std::abs(nq) <= 1e-14 * std::max(1.0, q.q.squaredNorm()))
        throw Error(ErrorKind::NullNorm, "adjoint of a null element");
    const Eigen::Matrix4d m = left_matrix(q) * right_matrix(conjugate(q)) / nq;
    return m.block<3, 3>(1, 1);
}

Eigen::Matrix3d rodrigues(const CliffordElement& w, double t) {
    if (!w.is_imaginary()) throw Error(ErrorKind::NotImaginary, "rodrigues needs an imaginary element");
    const FrameAlgebra f = im_frame_algebra(w.params);
    const Mat X = f.ad(w.q.tail<3>());
    const double nw = norm(w);
    Mat r = Mat::Identity(3, 3) + 0.5 * S_kappa(nw, 2 * t) * X + 0.25 * one_minus_C_over_kappa(nw, 2 * t) * X * X;
    return r;
}

FrameAlgebra im_frame_algebra(CliffordParams p) {
    FrameAlgebra f = preset("qa-im", {p.a1, p.a2});
    return f;
}

Eigen::Matrix3d contact_form_matrix(CliffordParams p) {
    return Eigen::Vector3d(-p.a2, -p.a1, 1.0).asDiagonal();
}

double contact_value(CliffordParams p, const Eigen::Vector3d& theta) {
    const FrameAlgebra f = im_frame_algebra(p);
    const Mat d = frame_d_oneform(f, theta);
    return theta(0) * d(1, 2) + theta(1) * d(2, 0) + theta(2) * d(0, 1);
}

} // namespace geom
