#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geom/lie_frame.hpp"
#include "oracles.hpp"

using namespace geom;

namespace {

const std::vector<std::pair<double, double>> kQaClasses{{-1, -1}, {1, 1}, {-1, 1}, {-1, 0}, {1, 0}};

// [[e_i,e_j],e_k] + cyclic by explicit vector brackets
double jacobi_oracle(const FrameAlgebra& f) {
    const int n = f.dim;
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j), ek = Vec::Unit(n, k);
                Vec s = f.bracket(f.bracket(ei, ej), ek) + f.bracket(f.bracket(ej, ek), ei) +
                        f.bracket(f.bracket(ek, ei), ej);
                worst = std::max(worst, s.cwiseAbs().maxCoeff());
            }
    return worst;
}

} // namespace

TEST_CASE("presets carry the stated brackets") {
    auto q = preset("qa-im", {-1, -1});
    CHECK(q.c(0, 1, 2) == 2);
    CHECK(q.c(1, 2, 0) == 2);
    CHECK(q.c(2, 0, 1) == 2);
    CHECK(q.c(1, 0, 2) == -2);
    CHECK(preset("abelian", {3}).c.max_abs() == 0);
    auto a = preset("aff1c");
    CHECK(a.c(0, 2, 2) == 1);
    CHECK(a.c(0, 3, 3) == 1);
    CHECK(a.c(1, 2, 3) == 1);
    CHECK(a.c(1, 3, 2) == -1);
    CHECK_THROWS_AS(preset("nope"), Error);
    CHECK_THROWS_AS(preset("heis", {4}), Error);
    CHECK_THROWS_AS(preset("qa-im", {1}), Error);
}

TEST_CASE("make_frame rejects broken antisymmetry") {
    DenseTensor c = DenseTensor::rank3(3);
    c(0, 1, 2) = 1;
    CHECK_THROWS_AS(make_frame(c), Error);
}

TEST_CASE("jacobi defect matches the bracket oracle") {
    for (auto [a1, a2] : kQaClasses) {
        auto f = preset("qa-im", {a1, a2});
        CHECK(jacobi_defect(f) <= 1e-14);
        CHECK(jacobi_oracle(f) <= 1e-14);
    }
    CHECK(jacobi_defect(abelian(4)) == 0);
    DenseTensor c = DenseTensor::rank3(3);
    c(0, 1, 2) = 2;
    c(1, 0, 2) = -2;
    c(0, 2, 1) = 5;
    c(2, 0, 1) = -5;
    c(1, 2, 1) = 1; // [e2, e3] = e2 breaks Jacobi
    c(2, 1, 1) = -1;
    auto bad = make_frame(c);
    CHECK(jacobi_defect(bad) > 0);
    CHECK(jacobi_defect(bad) == doctest::Approx(jacobi_oracle(bad)));
}

TEST_CASE("killing forms") {
    CHECK(max_abs_diff(killing_form(preset("qa-im", {-1, -1})), Mat(-8 * Mat::Identity(3, 3))) <= 1e-12);
    CHECK(killing_form(preset("heis", {3})).cwiseAbs().maxCoeff() == 0);
    CHECK(killing_form(abelian(4)).cwiseAbs().maxCoeff() == 0);
    for (auto [a1, a2] : kQaClasses) {
        auto f = preset("qa-im", {a1, a2});
        Mat k = killing_form(f);
        CHECK(max_abs_diff(k, oracle::killing_by_trace(f.c)) <= 1e-12);
        CHECK(max_abs_diff(k, Mat(k.transpose())) == 0);
        CHECK(invariance_defect(f, k).full <= 1e-12);
    }
    for (auto f : {preset("aff1c"), preset("heis", {5}), preset("unibasis", {1, -4})}) {
        CHECK(max_abs_diff(killing_form(f), oracle::killing_by_trace(f.c)) <= 1e-12);
        CHECK(invariance_defect(f, killing_form(f)).full <= 1e-12);
    }
}

TEST_CASE("trace forms") {
    for (auto [a1, a2] : kQaClasses) CHECK(trace_form(preset("qa-im", {a1, a2})).cwiseAbs().maxCoeff() == 0);
    Vec ell = trace_form(preset("aff1c"));
    CHECK(ell(0) == 2);
    CHECK(ell.tail(3).cwiseAbs().maxCoeff() == 0);
    CHECK(trace_form(abelian(2)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("invariance defects") {
    auto h = preset("heis", {3});
    Mat theta = Mat::Zero(3, 3);
    theta(2, 2) = 1;
    auto d = invariance_defect(h, theta, Vec::Unit(3, 2));
    CHECK(d.full == 1); // the symplectic coefficient
    CHECK(d.t == 0);
    auto z = invariance_defect(abelian(3), oracle::random_spd(3), oracle::random_vec(3));
    CHECK(z.full == 0);
    CHECK(z.t == 0);
}

TEST_CASE("frame exterior derivative of one-forms") {
    for (auto [a1, a2] : kQaClasses) {
        Mat d = frame_d_oneform(preset("qa-im", {a1, a2}), Vec::Unit(3, 0));
        // 2 a2 e^2 ^ e^3 with e^i ^ e^j = e^i (x) e^j - e^j (x) e^i
        CHECK(d(1, 2) == 2 * a2);
        CHECK(d(2, 1) == -2 * a2);
        CHECK(std::abs(d(0, 1)) + std::abs(d(0, 2)) == 0);
    }
    CHECK(frame_d_oneform(abelian(3), oracle::random_vec(3)).cwiseAbs().maxCoeff() == 0);
    Mat d4 = frame_d_oneform(preset("aff1c"), Vec::Unit(4, 3));
    CHECK(d4(0, 3) == -1);
    CHECK(d4(1, 2) == -1);
    CHECK(d4(3, 0) == 1);
    for (int trial = 0; trial < 5; ++trial) {
        Mat d = frame_d_oneform(preset("aff1c"), oracle::random_vec(4));
        CHECK(max_abs_diff(d, Mat(-d.transpose())) == 0);
    }
}

TEST_CASE("d squared vanishes on one-forms") {
    for (auto f : {preset("qa-im", {-1, 1}), preset("aff1c"), preset("heis", {5})})
        for (int trial = 0; trial < 3; ++trial)
            CHECK(frame_d_twoform(f, frame_d_oneform(f, oracle::random_vec(f.dim))).max_abs() <= 1e-14);
}

TEST_CASE("Lie derivative along invariant fields") {
    auto f = preset("qa-im", {-1, -1});
    Mat G = Eigen::Vector3d(1, 4, 4).asDiagonal();
    CHECK(lie_derivative_invariant(f, Vec::Unit(3, 0), G).cwiseAbs().maxCoeff() == 0);
    CHECK(lie_derivative_invariant(abelian(3), oracle::random_vec(3), oracle::random_mat(3)).cwiseAbs().maxCoeff() == 0);
    // (L_t eps^2)(a) = -eps^2([t, a]); [e1, e3] = -2 e2, so the result is 2 eps^3
    DenseTensor e2 = DenseTensor::from_vector(Vec::Unit(3, 1), Variance::lower);
    DenseTensor l = lie_derivative_invariant(f, Vec::Unit(3, 0), e2);
    Vec oracle_val(3);
    for (int a = 0; a < 3; ++a) oracle_val(a) = -f.bracket(Vec::Unit(3, 0), Vec::Unit(3, a))(1);
    CHECK(max_abs_diff(l.to_vector(), oracle_val) == 0);
    CHECK(l(2) == 2);
}

TEST_CASE("generalized trigonometric functions") {
    for (int i = 0; i < 100; ++i) {
        const double k = oracle::uniform(-3, 3) * (i % 10 == 0 ? 1e-13 : 1), t = oracle::uniform(-2, 2);
        const double c = C_kappa(k, t), s = S_kappa(k, t);
        CHECK(std::abs(c * c + k * s * s - 1) <= 1e-12);
    }
    CHECK(C_kappa(1, 0.3) == doctest::Approx(std::cos(0.3)).epsilon(1e-15));
    CHECK(S_kappa(-4, 0.3) == doctest::Approx(std::sinh(0.6) / 2).epsilon(1e-14));
    CHECK(one_minus_C_over_kappa(0, 0.5) == 0.125);
}

TEST_CASE("adjoint exponential") {
    auto f = preset("qa-im", {-1, -1});
    Mat R = exp_adjoint_3d(f, Vec::Unit(3, 0), std::numbers::pi / 4);
    Mat want = Mat::Zero(3, 3);
    want(0, 0) = 1;
    want(2, 1) = 1;
    want(1, 2) = -1;
    CHECK(max_abs_diff(R, want) <= 1e-12);
    CHECK(max_abs_diff(R, oracle::expm_series(f.ad(Vec::Unit(3, 0)) * std::numbers::pi / 4)) <= 1e-12);
    CHECK(max_abs_diff(exp_adjoint_3d(f, oracle::random_vec(3), 0), Mat(Mat::Identity(3, 3))) == 0);
    const std::vector<FrameAlgebra> frames{preset("qa-im", {-1, -1}), preset("qa-im", {1, 1}), preset("qa-im", {-1, 1}),
                                           preset("qa-im", {1, 0}), preset("heis", {3})};
    for (int i = 0; i < 20; ++i) {
        const auto& fr = frames[i % frames.size()];
        Vec u = oracle::random_vec(3);
        const double r = oracle::uniform();
        CHECK(max_abs_diff(exp_adjoint_3d(fr, u, r), oracle::expm_series(fr.ad(u) * r)) <= 1e-12);
        const double r2 = oracle::uniform();
        CHECK(max_abs_diff(Mat(exp_adjoint_3d(fr, u, r) * exp_adjoint_3d(fr, u, r2)), exp_adjoint_3d(fr, u, r + r2)) <=
              1e-10);
    }
    CHECK_THROWS_AS(exp_adjoint_3d(preset("aff1c"), Vec::Unit(4, 0), 1), Error);
}
