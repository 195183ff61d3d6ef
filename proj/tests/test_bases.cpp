#include "doctest.h"
#include "qclone/bases.hpp"
#include "qclone/oracle_mc.hpp"

using namespace qclone;

namespace {
DenseOperator phi_plus_3(int d) {
    DenseOperator phi = max_coherent_state(d).projector();
    return tensor(tensor(phi, phi), phi);
}
}  // namespace

TEST_CASE("cloner9 coefficient vectors") {
    BasisFamily f2 = build_cloner9(2);
    RVector c2(9);
    c2 << 0.25, 0.5, 0.25, 1.0, 0.5, 0, 0, 0, 0;
    CHECK((f2.c - c2).cwiseAbs().maxCoeff() < 1e-15);
    for (int i = 5; i < 9; ++i) CHECK(f2.elements[i].mat.cwiseAbs().maxCoeff() == 0.0);

    BasisFamily f3 = build_cloner9(3);
    RVector a3(9);
    a3 << 1, 4, 2, 0, 0, 2, 0, 0, 0;
    CHECK((f3.a - a3).cwiseAbs().maxCoeff() < 1e-15);

    // c_i = tr[phi+^3 X_i] numerically
    DenseOperator phi3 = phi_plus_3(3);
    for (int i = 0; i < 9; ++i) {
        double lhs = (phi3.mat * f3.elements[i].mat).trace().real();
        CHECK(lhs == doctest::Approx(f3.c(i)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(build_cloner9(1), std::invalid_argument);
    CHECK_THROWS_AS(build_cloner9(13), std::invalid_argument);
}

TEST_CASE("transpose6 coefficient vectors") {
    BasisFamily f2 = build_transpose6(2);
    RVector a2(6);
    a2 << 1, 3, 0, 0, 0, 0;
    CHECK((f2.a - a2).cwiseAbs().maxCoeff() < 1e-15);

    BasisFamily f3 = build_transpose6(3);
    RVector c3(6);
    c3 << 1.0 / 9, 2.0 / 3, 4.0 / 3, 2.0 / 9, 4.0 / 9, 6.0 / 9;
    CHECK((f3.c - c3).cwiseAbs().maxCoeff() < 1e-14);

    DenseOperator phi3 = phi_plus_3(3);
    for (int i = 0; i < 6; ++i) {
        double lhs = (phi3.mat * f3.elements[i].mat).trace().real();
        CHECK(lhs == doctest::Approx(f3.c(i)).epsilon(1e-12));
    }

    // every element invariant under all V_sigma at d=3
    for (const auto& sigma : s3_full()) {
        Matrix v = subsystem_permutation(sigma, 3).mat;
        for (const auto& x : f3.elements)
            CHECK((v * x.mat * v.adjoint() - x.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("family elements are Hermitian and independent") {
    for (int d : {2, 3, 4}) {
        for (BasisName name : {BasisName::CLONER9, BasisName::TRANSPOSE6, BasisName::EW_R}) {
            BasisFamily fam = build_family(name, d);
            for (const auto& x : fam.elements) CHECK(x.is_hermitian());
            if (d >= 3) {
                Eigen::MatrixXd g = gram_matrix(fam);
                Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
                CHECK(lu.rank() == fam.size());
            }
        }
    }
}

TEST_CASE("EW R-operators") {
    for (int d : {2, 3}) {
        BasisFamily fam = build_ew_r(d);
        const Matrix& rp = fam.elements[0].mat;
        const Matrix& rm = fam.elements[1].mat;
        const Matrix& r0 = fam.elements[2].mat;
        CHECK((rp * rp - rp).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((rm * rm - rm).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((rp + rm + r0 - Matrix::Identity(rp.rows(), rp.cols())).cwiseAbs().maxCoeff() <
              1e-12);
        const double dd = d;
        CHECK(rp.trace().real() == doctest::Approx(dd * (dd + 1) * (dd + 2) / 6.0));
        CHECK(rm.trace().real() == doctest::Approx(dd * (dd - 1) * (dd - 2) / 6.0));
    }
    CHECK(build_ew_r(2).elements[1].mat.cwiseAbs().maxCoeff() < 1e-14);  // R- = 0 at d=2
    CHECK(build_ew_r(3).elements[0].mat.trace().real() == doctest::Approx(10.0));
}

TEST_CASE("cloner9 elements invariant under the cloner averaging spec") {
    for (int d : {2, 3, 4}) {
        BasisFamily fam = build_cloner9(d);
        for (const auto& x : fam.elements) {
            DenseOperator avg = average_choi(x, cloner_averaging_spec());
            CHECK((avg.mat - x.mat).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("invariant operators lie in the span") {
    StreamRng rng(23, 0);
    for (int d : {2, 3, 4}) {
        ChannelChoi e = random_cptp(d, SystemShape({d, d}), 2, rng);
        DenseOperator jt = average_choi(e.J, cloner_averaging_spec());
        auto [coef, resid] = project_onto_span(build_cloner9(d), jt);
        CHECK(resid < 1e-9);

        DenseOperator jt2 = average_choi(e.J, transpose_cloner_averaging_spec());
        auto [coef2, resid2] = project_onto_span(build_transpose6(d), jt2);
        CHECK(resid2 < 1e-9);
    }
}

TEST_CASE("assemble: objective and trace identities for random points") {
    StreamRng rng(29, 0);
    for (int d : {2, 3, 4}) {
        for (BasisName name : {BasisName::CLONER9, BasisName::TRANSPOSE6}) {
            BasisFamily fam = build_family(name, d);
            RVector x(fam.size());
            for (int i = 0; i < fam.size(); ++i) x(i) = 2 * rng.uniform() - 1;
            DenseOperator op = assemble(fam, x);
            CHECK(op.is_hermitian(1e-10));
            DenseOperator phi3 = phi_plus_3(d);
            CHECK((phi3.mat * op.mat).trace().real() ==
                  doctest::Approx(fam.c.dot(x)).epsilon(1e-10));
            DenseOperator marg = partial_trace(op, {0});
            CHECK((marg.mat - fam.a.dot(x) * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <
                  1e-10);
        }
    }
}

TEST_CASE("assemble unit vectors") {
    BasisFamily fam = build_cloner9(3);
    RVector e1 = RVector::Zero(9);
    e1(0) = 1.0;
    CHECK((assemble(fam, e1).mat - fam.elements[0].mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("closed-form primal points satisfy the linear identities") {
    for (int d = 2; d <= 6; ++d) {
        BasisFamily fam = build_cloner9(d);
        const double k = 1.0 / (2.0 * d - 1.0);
        RVector x(9);
        x << k, k, 0, k, k, 0, k, k, 0;
        CHECK(fam.c.dot(x) == doctest::Approx((2.0 * d - 1) / (d * d)).epsilon(1e-14));
        CHECK(fam.a.dot(x) == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (int d = 3; d <= 6; ++d) {
        BasisFamily fam = build_transpose6(d);
        const double k = 1.0 / ((d - 1.0) * (d - 2.0));
        RVector x(6);
        x << 0, 0, 0, k, k, k;
        CHECK(fam.c.dot(x) == doctest::Approx(6.0 / (d * d)).epsilon(1e-14));
        CHECK(fam.a.dot(x) == doctest::Approx(1.0).epsilon(1e-14));
    }
}
