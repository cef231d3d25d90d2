#include <doctest.h>

#include "geom/connection.hpp"
#include "oracles.hpp"

using namespace geom;

namespace {

DenseTensor kronecker(int n) { return DenseTensor::from_matrix(Mat::Identity(n, n), Variance::upper, Variance::lower); }

DenseTensor random_tensor(int n, std::vector<Variance> var) {
    DenseTensor t(n, std::move(var));
    for (auto& x : t.data()) x = oracle::uniform();
    return t;
}

} // namespace

TEST_CASE("sym2_inverse examples") {
    CHECK(max_abs_diff(sym2_inverse(Mat::Identity(3, 3)), Mat(Mat::Identity(3, 3))) == 0);
    Mat g = Eigen::Vector3d(1, 4, 4).asDiagonal();
    CHECK(max_abs_diff(sym2_inverse(g), Mat(Eigen::Vector3d(1, 0.25, 0.25).asDiagonal())) <= 1e-15);
    Mat bad = Eigen::Vector3d(1, 0, 1).asDiagonal();
    try {
        sym2_inverse(bad);
        FAIL("expected SingularMetric");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularMetric);
    }
}

TEST_CASE("sym2_inverse is an involution and a right inverse") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        Mat h = oracle::random_spd(n);
        Mat g = sym2_inverse(h);
        CHECK((h * g - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(max_abs_diff(sym2_inverse(g), h) <= 1e-12);
    }
}

TEST_CASE("contract examples") {
    for (int n : {1, 3, 5}) {
        DenseTensor tr = contract(kronecker(n), 0, 1);
        CHECK(tr.rank() == 0);
        CHECK(tr.data()[0] == n);
    }
    // unimodular: c_ip^p = 0 on heis(3)
    auto heis = preset("heis", {3});
    CHECK(contract(heis.c, 2, 1).max_abs() == 0);
    // aff(1,C) has trace form 2 e^1
    DenseTensor ell = contract(preset("aff1c").c, 2, 1);
    CHECK(ell(0) == 2);
    CHECK(ell(1) == 0);
    CHECK_THROWS_AS(contract(kronecker(3), 1, 0), Error);
}

TEST_CASE("contracting the curvature gives the Ricci of the operator oracle") {
    auto conn = qacone_preset(-1, -1, 1);
    DenseTensor R = curvature(conn).R;
    Mat ric = contract(R, 3, 0).to_matrix();
    Mat want = oracle::ricci_by_trace(oracle::curvature_by_operators(conn.coeffs(), conn.frame.c));
    CHECK(max_abs_diff(ric, want) <= 1e-12);
    CHECK(ric(1, 2) == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("symmetrize2 and alternate2") {
    Mat a = Mat::Zero(3, 3);
    a(0, 1) = 1;
    DenseTensor e12 = DenseTensor::from_matrix(a);
    DenseTensor alt = alternate2(e12, 0, 1);
    CHECK(alt(0, 1) == 0.5);
    CHECK(alt(1, 0) == -0.5);
    CHECK(alt.max_abs() == 0.5);
    CHECK(max_abs_diff(alternate2(alt, 0, 1), alt) == 0);
    CHECK(symmetrize2(alt, 0, 1).max_abs() == 0);
    CHECK_THROWS_AS(alternate2(kronecker(3), 0, 1), Error);
}

TEST_CASE("alternation kills symmetrization on random tensors") {
    for (int trial = 0; trial < 10; ++trial) {
        DenseTensor t = random_tensor(3, {Variance::lower, Variance::lower, Variance::upper});
        CHECK(alternate2(symmetrize2(t, 0, 1), 0, 1).max_abs() <= 1e-15);
        CHECK(max_abs_diff(symmetrize2(t, 0, 1) + alternate2(t, 0, 1), t) <= 1e-15);
    }
}

TEST_CASE("max_abs_diff examples") {
    DenseTensor d = kronecker(3);
    CHECK(max_abs_diff(d, d) == 0);
    CHECK(max_abs_diff(DenseTensor::zeros_like(d), d) == 1);
    CHECK_THROWS_AS(max_abs_diff(d, kronecker(2)), Error);
}

TEST_CASE("contract is linear") {
    for (int trial = 0; trial < 10; ++trial) {
        DenseTensor a = random_tensor(3, {Variance::lower, Variance::lower, Variance::upper});
        DenseTensor b = random_tensor(3, {Variance::lower, Variance::lower, Variance::upper});
        const double s = oracle::uniform();
        CHECK(max_abs_diff(contract(a + b, 2, 1), contract(a, 2, 1) + contract(b, 2, 1)) <= 1e-15);
        CHECK(max_abs_diff(contract(s * a, 2, 1), s * contract(a, 2, 1)) <= 1e-15);
    }
}

TEST_CASE("change_basis round trip and covariance") {
    for (int trial = 0; trial < 10; ++trial) {
        DenseTensor t = random_tensor(3, {Variance::lower, Variance::lower, Variance::upper});
        Mat b = oracle::random_mat(3) + 2 * Mat::Identity(3, 3);
        DenseTensor back = change_basis(change_basis(t, b), b.inverse());
        CHECK(max_abs_diff(back, t) <= 1e-12);
        // contraction commutes with a change of basis
        CHECK(max_abs_diff(contract(change_basis(t, b), 2, 1), change_basis(contract(t, 2, 1), b)) <= 1e-12);
    }
}

TEST_CASE("shape and finiteness bookkeeping") {
    DenseTensor t = DenseTensor::rank4(3);
    CHECK(t.size() == 81);
    CHECK(t.shape() == std::vector<int>{3, 3, 3, 3});
    CHECK(t.all_finite());
    t(0, 1, 2, 0) = std::nan("");
    CHECK_FALSE(t.all_finite());
    auto idx = t.unravel(5);
    CHECK(idx == std::vector<int>{0, 0, 1, 2});
}
