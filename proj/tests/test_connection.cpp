#include <doctest.h>

#include "fixtures.hpp"
#include "geom/connection.hpp"
#include "oracles.hpp"

using namespace geom;

namespace {

const std::vector<std::pair<double, double>> kQaClasses{{-1, -1}, {1, 1}, {-1, 1}, {-1, 0}, {1, 0}};

// Radiant connections obtained by cone-shifting qacone presets with random Q, Q(t, t) = 0.
InvariantConnection random_radiant(int seed_class, Vec& t) {
    auto [a1, a2] = kQaClasses[seed_class % kQaClasses.size()];
    const double kappa = 0.5 + std::abs(oracle::uniform());
    auto conn = qacone_preset(a1, a2, kappa);
    t = qacone_radiant(kappa);
    Mat Q = oracle::random_mat(3);
    Q = Q + Q.transpose().eval();
    Q -= (t.dot(Q * t) / t.squaredNorm() / t.squaredNorm()) * t * t.transpose();
    return apply_cone_shift(conn, t, Q, 1e-10);
}

InvariantConnection random_connection(const FrameAlgebra& f) { return make_connection(f, oracle::random_sym_pi(f.dim)); }

std::vector<FrameAlgebra> lie_presets() {
    std::vector<FrameAlgebra> out;
    for (auto [a1, a2] : kQaClasses) out.push_back(preset("qa-im", {a1, a2}));
    out.push_back(preset("heis", {3}));
    out.push_back(preset("heis", {5}));
    out.push_back(preset("aff1c"));
    out.push_back(preset("unibasis", {-1, 8}));
    out.push_back(abelian(4));
    return out;
}

} // namespace

TEST_CASE("curvature matches the operator oracle") {
    CHECK(curvature(flat_connection(abelian(3))).R.max_abs() == 0);
    for (const auto& f : lie_presets())
        for (int trial = 0; trial < 5; ++trial) {
            auto conn = random_connection(f);
            auto cd = curvature(conn);
            CHECK(max_abs_diff(cd.R, oracle::curvature_by_operators(conn.coeffs(), f.c)) <= 1e-12);
            CHECK(bianchi_defect(cd.R) <= 1e-12);
            CHECK(max_abs_diff(cd.ric, ricci_closed_form(conn)) <= 1e-12);
        }
}

TEST_CASE("qacone preset coefficients and curvature") {
    auto conn = qacone_preset(-1, -1, 1);
    DenseTensor A = conn.coeffs();
    CHECK(A(1, 1, 0) == -4);
    CHECK(A(0, 1, 1) == 1);
    CHECK(A(0, 1, 2) == 2);
    DenseTensor R = curvature(conn).R;
    // R(E3, E2) E2 = 3 E2; this orientation is the one whose contraction R_pij^p gives ric(E2, E3) = 3
    CHECK(R(2, 1, 1, 1) == doctest::Approx(3).epsilon(1e-12));
    CHECK(R(1, 2, 1, 1) == doctest::Approx(oracle::curvature_by_operators(A, conn.frame.c)(1, 2, 1, 1)));
    CHECK(std::abs(R(1, 2, 1, 0)) + std::abs(R(1, 2, 1, 2)) <= 1e-12);
    CHECK_THROWS_AS(qacone_preset(0, 0, 1), Error);
    try {
        qacone_preset(0, 0, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NullDirection);
    }
    for (auto [a1, a2] : kQaClasses)
        for (double kappa : {0.5, 1.0, 2.0}) {
            auto c = qacone_preset(a1, a2, kappa);
            auto rr = ricci_rho(c, qacone_radiant(kappa));
            CHECK(std::abs(rr.ric(1, 2) + 3 * a2 * kappa) <= 1e-12);
            CHECK(sym(rr.ric).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(rr.rho.cwiseAbs().maxCoeff() <= 1e-12);
        }
}

TEST_CASE("Ricci and rho of trivial and radiant inputs") {
    auto rr = ricci_rho(flat_connection(abelian(3)), oracle::random_vec(3));
    CHECK(rr.ric.cwiseAbs().maxCoeff() == 0);
    CHECK(rr.rho.cwiseAbs().maxCoeff() == 0);
    for (int trial = 0; trial < 10; ++trial) {
        Vec t;
        auto conn = random_radiant(trial, t);
        auto cd = curvature(conn, t);
        // radiant identities
        CHECK(curvature_on(cd.R, t).max_abs() <= 1e-10);
        CHECK((cd.ric * t).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(bianchi_defect(cd.R) <= 1e-10);
    }
}

TEST_CASE("radiant defects") {
    CHECK(radiant_defect(qacone_preset(-1, -1, 1), Vec::Unit(3, 0)) == 0);
    Mat h = oracle::random_spd(4);
    Vec t = oracle::random_vec(4);
    t /= std::sqrt(t.dot(h * t));
    auto cone = make_connection(abelian(4), fixture::abelian_cone_pi(h, t));
    CHECK(radiant_defect(cone, t) <= 1e-14);
    CHECK(radiant_defect(flat_connection(abelian(3)), Vec::Unit(3, 1)) == 1);
}

TEST_CASE("conelike solve") {
    auto fit = conelike_solve(qacone_preset(-1, 1, 2), qacone_radiant(2));
    CHECK(fit.residual <= 1e-12);
    CHECK(fit.Q.cwiseAbs().maxCoeff() <= 1e-12);
    Mat h = oracle::random_spd(4);
    Vec t = oracle::random_vec(4);
    t /= std::sqrt(t.dot(h * t));
    auto cone = make_connection(abelian(4), fixture::abelian_cone_pi(h, t));
    auto afit = conelike_solve(cone, t);
    CHECK(afit.residual <= 1e-12);
    CHECK(afit.Q.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(curvature(cone).R.max_abs() <= 1e-12); // Ricci flat, in fact flat
    CHECK_THROWS_AS(conelike_solve(flat_connection(abelian(3)), Vec::Unit(3, 0)), Error);
}

TEST_CASE("cone shift recovery and Ricci change") {
    for (auto [a1, a2] : kQaClasses) {
        auto base = qacone_preset(a1, a2, 1);
        const Vec t = qacone_radiant(1);
        for (int trial = 0; trial < 3; ++trial) {
            Mat Q0 = fixture::horizontal_q(t, [] { return oracle::uniform(); });
            auto shifted = apply_cone_shift(base, t, Q0);
            CHECK(radiant_defect(shifted, t) <= 1e-12);
            auto fit = conelike_solve(shifted, t);
            CHECK(fit.residual <= 1e-10);
            Mat LtQ = lie_derivative_invariant(base.frame, t, Q0);
            CHECK(max_abs_diff(fit.Q, LtQ) <= 1e-10);
            // antisymmetric Ricci unchanged when q = 0; full change L_t Q + (n - 2) Q
            Mat dric = curvature(shifted).ric - curvature(base).ric;
            CHECK(skew(dric).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK(max_abs_diff(dric, Mat(LtQ + Q0)) <= 1e-10);
        }
        CHECK(max_abs_diff(apply_cone_shift(base, t, Mat::Zero(3, 3)).pi, base.pi) == 0);
    }
    Mat bad = Mat::Zero(3, 3);
    bad(0, 0) = 1;
    CHECK_THROWS_AS(apply_cone_shift(qacone_preset(-1, -1, 1), Vec::Unit(3, 0), bad), Error);
}

TEST_CASE("antisymmetric Ricci normalization") {
    auto preset_conn = qacone_preset(-1, -1, 1);
    const Vec t = qacone_radiant(1);
    CHECK(max_abs_diff(normalize_antisym_ricci(preset_conn, t).pi, preset_conn.pi) <= 1e-12);
    for (auto [a1, a2] : kQaClasses)
        for (int trial = 0; trial < 3; ++trial) {
            const double kappa = 0.5 + trial * 0.7;
            auto target = qacone_preset(a1, a2, kappa);
            const Vec tk = qacone_radiant(kappa);
            Mat Q0 = fixture::horizontal_q(tk, [] { return oracle::uniform(); });
            auto norm = normalize_antisym_ricci(apply_cone_shift(target, tk, Q0), tk);
            CHECK(max_abs_diff(norm.pi, target.pi) <= 1e-10);
            CHECK(sym(curvature(norm).ric).cwiseAbs().maxCoeff() <= 1e-10);
        }
    // two-dimensional input
    DenseTensor c2 = DenseTensor::rank3(2);
    c2(0, 1, 1) = 1;
    c2(1, 0, 1) = -1;
    DenseTensor pi2 = DenseTensor::rank3(2);
    pi2(0, 0, 0) = pi2(0, 1, 1) = pi2(1, 0, 1) = 1;
    auto two = make_connection(make_frame(c2), pi2);
    try {
        normalize_antisym_ricci(two, Vec::Unit(2, 0));
        FAIL("expected DimensionTooSmall");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionTooSmall);
    }
}

TEST_CASE("cone builder") {
    auto sl2 = build_cone(fixture::sl2_triple(), std::nullopt, Vec::Unit(3, 0));
    CHECK(curvature(sl2).ric(1, 2) == doctest::Approx(1.5).epsilon(1e-12));
    for (auto [a1, a2] : kQaClasses)
        for (double kappa : {0.5, 1.0, 2.0})
            CHECK(max_abs_diff(build_cone(preset("qa-im", {a1, a2}), std::nullopt, qacone_radiant(kappa)).coeffs(),
                               qacone_preset(a1, a2, kappa).coeffs()) <= 1e-12);
    // Heisenberg: Pi = theta (x) delta + delta (x) theta - theta (x) theta (x) Z
    auto heis = build_cone(preset("heis", {3}), fixture::heis_theta(3), Vec::Unit(3, 2));
    DenseTensor want = DenseTensor::rank3(3);
    for (int i = 0; i < 3; ++i) {
        want(2, i, i) += 1;
        want(i, 2, i) += 1;
    }
    want(2, 2, 2) -= 1;
    CHECK(max_abs_diff(heis.pi, want) <= 1e-15);
    CHECK(radial_curvature(curvature(heis).R, Vec::Unit(3, 2)).max_abs() <= 1e-12);
    // the paper's explicit coordinate formula for aff(1,C)
    auto aff = build_cone(preset("aff1c"), std::nullopt, -Vec::Unit(4, 0));
    CHECK(max_abs_diff(aff.coeffs(), fixture::aff1c_cone_coefficients()) <= 1e-12);
    CHECK(curvature(aff).ric.cwiseAbs().maxCoeff() <= 1e-12);
    try {
        build_cone(preset("heis", {3}), std::nullopt, Vec::Unit(3, 0));
        FAIL("expected NullDirection");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NullDirection);
    }
}

TEST_CASE("aff(1,C) modified connection") {
    auto f = preset("aff1c");
    auto bar = from_coefficients(f, fixture::aff1c_modified(fixture::aff1c_cone_coefficients()));
    const Vec t = -Vec::Unit(4, 0);
    CHECK(radiant_defect(bar, t) <= 1e-15);
    // density trace A_ip^p = 4 e^4 - 2 e^1
    Vec tr = contract(bar.coeffs(), 2, 1).to_vector();
    CHECK(max_abs_diff(tr, Vec((Vec(4) << -2, 0, 0, 4).finished())) <= 1e-15);
    auto rr = ricci_rho(bar, t);
    Mat omega = Mat::Zero(4, 4);
    omega(0, 3) = 2;
    omega(3, 0) = -2;
    omega(1, 2) = 2;
    omega(2, 1) = -2;
    CHECK(max_abs_diff(skew(rr.ric), omega) <= 1e-12);
    // rho from the operator-oracle Ricci; its value is recorded in the acceptance report
    Mat ric_oracle = oracle::ricci_by_trace(oracle::curvature_by_operators(bar.coeffs(), f.c));
    CHECK(max_abs_diff(rr.rho, Vec(ric_oracle.transpose() * t)) <= 1e-12);
    CHECK(rr.rho(3) == doctest::Approx(-4).epsilon(1e-12));
}

TEST_CASE("projective tensors") {
    auto conn = qacone_preset(-1, -1, 1);
    auto pt = projective_tensors(conn);
    CHECK(max_abs_diff(pt.P, Mat(-0.25 * curvature(conn).ric)) <= 1e-12);
    auto flat = projective_tensors(flat_connection(abelian(3)));
    CHECK(flat.P.cwiseAbs().maxCoeff() == 0);
    CHECK(flat.B.max_abs() == 0);
    CHECK(flat.C.max_abs() == 0);
    for (double eps : {1.0, -1.0}) {
        auto uc = build_cone(preset("unibasis", {eps, -8}), std::nullopt, Vec::Unit(3, 0));
        auto u = projective_tensors(uc);
        // basis {T, A, B}: P(A, B) = -Ric(A, B)/4 = -3 eps / 8 and W(T, A)B = P(A, B) T
        CHECK(curvature(uc).ric(1, 2) == doctest::Approx(1.5 * eps).epsilon(1e-12));
        CHECK(u.P(1, 2) == doctest::Approx(-0.375 * eps).epsilon(1e-12));
        CHECK(u.B(0, 1, 2, 0) == doctest::Approx(-0.375 * eps).epsilon(1e-12));
        CHECK(std::abs(u.B(0, 1, 2, 1)) + std::abs(u.B(0, 1, 2, 2)) <= 1e-12);
    }
    for (const auto& f : lie_presets()) {
        auto c = random_connection(f);
        auto base = projective_tensors(c);
        for (int trial = 0; trial < 20 / 5; ++trial) {
            auto moved = projective_tensors(projective_change(c, oracle::random_vec(f.dim)));
            CHECK(max_abs_diff(moved.B, base.B) <= 1e-10);
        }
    }
}

TEST_CASE("covariant derivative of the metric follows the coefficient formula") {
    for (int trial = 0; trial < 5; ++trial) {
        auto conn = random_connection(preset("qa-im", {-1, 1}));
        Mat h = oracle::random_spd(3);
        DenseTensor d = covariant_derivative(conn, h);
        DenseTensor A = conn.coeffs();
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double v = 0;
                    for (int p = 0; p < 3; ++p) v -= A(i, j, p) * h(p, k) + A(i, k, p) * h(j, p);
                    worst = std::max(worst, std::abs(v - d(i, j, k)));
                }
        CHECK(worst <= 1e-14);
    }
}
