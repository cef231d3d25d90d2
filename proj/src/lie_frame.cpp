#include "geom/lie_frame.hpp"

#include <cmath>
#include <string>

namespace geom {

Vec FrameAlgebra::bracket(const Vec& a, const Vec& b) const {
    Vec out = Vec::Zero(dim);
    for (int i = 0; i < dim; ++i) {
        if (a(i) == 0.0) continue;
        for (int j = 0; j < dim; ++j) {
            const double w = a(i) * b(j);
            if (w == 0.0) continue;
            for (int k = 0; k < dim; ++k) out(k) += w * c(i, j, k);
        }
    }
    return out;
}

Mat FrameAlgebra::ad(const Vec& u) const {
    Mat m = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) m(k, j) += u(i) * c(i, j, k);
    return m;
}

FrameAlgebra make_frame(DenseTensor c, std::string name) {
    if (c.rank() != 3) throw Error(ErrorKind::ShapeMismatch, "structure coefficients must have rank 3");
    const int n = c.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (c(i, j, k) != -c(j, i, k))
                    throw Error(ErrorKind::ValidationError, "c not antisymmetric at (" + std::to_string(i) + "," +
                                                                std::to_string(j) + "," + std::to_string(k) + ")");
    return FrameAlgebra{n, std::move(c), std::move(name)};
}

FrameAlgebra abelian(int n) { return make_frame(DenseTensor::rank3(n), "abelian(" + std::to_string(n) + ")"); }

namespace {

void set_bracket(DenseTensor& c, int i, int j, int k, double v) {
    c(i, j, k) = v;
    c(j, i, k) = -v;
}

void need(const std::vector<double>& p, std::size_t n, const std::string& name) {
    if (p.size() != n)
        throw Error(ErrorKind::InvalidParams, name + " expects " + std::to_string(n) + " parameters");
}

} // namespace

FrameAlgebra preset(const std::string& name, const std::vector<double>& params) {
    if (name == "qa-im") {
        need(params, 2, name);
        const double a1 = params[0], a2 = params[1];
        DenseTensor c = DenseTensor::rank3(3);
        set_bracket(c, 0, 1, 2, 2.0);
        set_bracket(c, 1, 2, 0, -2.0 * a2);
        set_bracket(c, 2, 0, 1, -2.0 * a1);
        return make_frame(std::move(c), "qa-im");
    }
    if (name == "heis") {
        need(params, 1, name);
        const int d = static_cast<int>(params[0]);
        if (d < 3 || d % 2 == 0 || d != params[0]) throw Error(ErrorKind::InvalidParams, "heis needs odd dim >= 3");
        const int m = (d - 1) / 2;
        DenseTensor c = DenseTensor::rank3(d);
        for (int i = 0; i < m; ++i) set_bracket(c, i, m + i, d - 1, 1.0);
        return make_frame(std::move(c), "heis");
    }
    if (name == "aff1c") {
        need(params, 0, name);
        DenseTensor c = DenseTensor::rank3(4);
        set_bracket(c, 0, 2, 2, 1.0);
        set_bracket(c, 1, 3, 2, -1.0);
        set_bracket(c, 0, 3, 3, 1.0);
        set_bracket(c, 1, 2, 3, 1.0);
        return make_frame(std::move(c), "aff1c");
    }
    if (name == "abelian") {
        need(params, 1, name);
        const int d = static_cast<int>(params[0]);
        if (d < 1 || d != params[0]) throw Error(ErrorKind::InvalidParams, "abelian needs a positive dimension");
        return abelian(d);
    }
    if (name == "unibasis") {
        // basis {t, a, b}: [t,a] = 2b, [t,b] = B_tt/4 a, [a,b] = eps t
        need(params, 2, name);
        const double eps = params[0], btt = params[1];
        DenseTensor c = DenseTensor::rank3(3);
        set_bracket(c, 0, 1, 2, 2.0);
        set_bracket(c, 0, 2, 1, 0.25 * btt);
        set_bracket(c, 1, 2, 0, eps);
        return make_frame(std::move(c), "unibasis");
    }
    throw Error(ErrorKind::UnknownPreset, name);
}

double jacobi_defect(const FrameAlgebra& f) {
    const int n = f.dim;
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j], component l
                    double s = 0;
                    for (int p = 0; p < n; ++p)
                        s += f.c(i, j, p) * f.c(p, k, l) + f.c(j, k, p) * f.c(p, i, l) + f.c(k, i, p) * f.c(p, j, l);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

Mat killing_form(const FrameAlgebra& f) {
    const int n = f.dim;
    Mat b = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) b(i, j) += f.c(i, p, q) * f.c(j, q, p);
    return b;
}

Vec trace_form(const FrameAlgebra& f) {
    Vec l = Vec::Zero(f.dim);
    for (int i = 0; i < f.dim; ++i)
        for (int p = 0; p < f.dim; ++p) l(i) += f.c(i, p, p);
    return l;
}

InvarianceDefect invariance_defect(const FrameAlgebra& f, const Mat& k, const std::optional<Vec>& t) {
    const int n = f.dim;
    InvarianceDefect d;
    auto defect_along = [&](const Vec& a) {
        // (a.k)(b,c) = -k([a,b],c) - k(b,[a,c]) = -(ad(a)^T k + k ad(a))
        const Mat ada = f.ad(a);
        return (ada.transpose() * k + k * ada).cwiseAbs().maxCoeff();
    };
    for (int i = 0; i < n; ++i) d.full = std::max(d.full, defect_along(Vec::Unit(n, i)));
    if (t) d.t = defect_along(*t);
    return d;
}

Mat frame_d_oneform(const FrameAlgebra& f, const Vec& theta) {
    const int n = f.dim;
    Mat d = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p) d(i, j) -= theta(p) * f.c(i, j, p);
    return d;
}

DenseTensor frame_d_twoform(const FrameAlgebra& f, const Mat& w) {
    const int n = f.dim;
    DenseTensor d(n, {Variance::lower, Variance::lower, Variance::lower});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int p = 0; p < n; ++p) s += f.c(i, j, p) * w(p, k) + f.c(j, k, p) * w(p, i) + f.c(k, i, p) * w(p, j);
                d(i, j, k) = -s;
            }
    return d;
}

DenseTensor lie_derivative_invariant(const FrameAlgebra& f, const Vec& t, const DenseTensor& S) {
    if (S.dim() != f.dim || t.size() != f.dim) throw Error(ErrorKind::ShapeMismatch, "dimension mismatch");
    const Mat adt = f.ad(t); // adt(p, i) = [t, e_i]^p
    DenseTensor out = DenseTensor::zeros_like(S);
    const int r = S.rank();
    for (std::size_t pos = 0; pos < S.size(); ++pos) {
        auto idx = S.unravel(pos);
        double acc = 0;
        for (int m = 0; m < r; ++m) {
            const int orig = idx[m];
            for (int p = 0; p < f.dim; ++p) {
                idx[m] = p;
                if (S.variance()[m] == Variance::lower)
                    acc -= adt(p, orig) * S.at(idx);
                else
                    acc += adt(orig, p) * S.at(idx);
            }
            idx[m] = orig;
        }
        out.data()[pos] = acc;
    }
    return out;
}

Mat lie_derivative_invariant(const FrameAlgebra& f, const Vec& t, const Mat& S) {
    return lie_derivative_invariant(f, t, DenseTensor::from_matrix(S)).to_matrix();
}

double C_kappa(double kappa, double t) {
    if (std::abs(kappa) <= 1e-12) {
        const double x = kappa * t * t;
        return 1 - x / 2 + x * x / 24 - x * x * x / 720 + x * x * x * x / 40320 - x * x * x * x * x / 3628800;
    }
    if (kappa > 0) return std::cos(std::sqrt(kappa) * t);
    return std::cosh(std::sqrt(-kappa) * t);
}

double S_kappa(double kappa, double t) {
    if (std::abs(kappa) <= 1e-12) {
        const double x = kappa * t * t;
        return t * (1 - x / 6 + x * x / 120 - x * x * x / 5040 + x * x * x * x / 362880 - x * x * x * x * x / 39916800);
    }
    if (kappa > 0) {
        const double s = std::sqrt(kappa);
        return std::sin(s * t) / s;
    }
    const double s = std::sqrt(-kappa);
    return std::sinh(s * t) / s;
}

double one_minus_C_over_kappa(double kappa, double t) {
    // 2 S_kappa(t/2)^2 avoids the cancellation in 1 - C near kappa t^2 = 0
    const double s = S_kappa(kappa, 0.5 * t);
    return 2.0 * s * s;
}

Mat exp_adjoint_3d(const FrameAlgebra& f, const Vec& u, double r) {
    if (f.dim != 3) throw Error(ErrorKind::PreconditionFailed, "exp_adjoint_3d needs a 3-dimensional algebra");
    if (trace_form(f).cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorKind::PreconditionFailed, "algebra is not unimodular");
    const Mat B = killing_form(f);
    const double buu = u.dot(B * u);
    const Mat X = f.ad(u);
    const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
    const double unich = (X * X * X - 0.5 * buu * X).cwiseAbs().maxCoeff();
    if (unich > 1e-9 * scale * scale * scale)
        throw Error(ErrorKind::PreconditionFailed, "ad(u)^3 = B(u,u)/2 ad(u) fails by " + std::to_string(unich));
    const double nu = -buu / 8.0;
    return Mat::Identity(3, 3) + 0.5 * S_kappa(nu, 2 * r) * X + 0.25 * one_minus_C_over_kappa(nu, 2 * r) * X * X;
}

} // namespace geom
