#include "doctest.h"
#include "qclone/compose.hpp"
#include "qclone/oracle_mc.hpp"

using namespace qclone;

namespace {

// Direct Kraus-level composition oracle: apply second to wire `mid` of the
// action of first, reconstructed by probing the Choi matrices.
DenseOperator apply_composite(const ChannelChoi& first, const ChannelChoi& second,
                              int mid, const DenseOperator& rho) {
    DenseOperator stage1 = apply_channel(first, rho);
    const int other = 1 - mid;
    const int da = stage1.shape.dims[other];
    const int db = second.d_out.dims[0];
    const int dm = stage1.shape.dims[mid];
    // (id (x) second) via the Choi of the embedded map
    SystemShape out_shape = mid == 1 ? SystemShape({da, db}) : SystemShape({db, da});
    Matrix out = Matrix::Zero(da * db, da * db);
    std::vector<int> r(2), c(2);
    for (int i = 0; i < da * db; ++i)
        for (int j = 0; j < da * db; ++j) {
            // out(i,j) = sum_{k,l} stage1[(a_i,k),(a_j,l)] * J2[(k,b_i),(l,b_j)] pattern
            out_shape.unravel(i, r.data());
            out_shape.unravel(j, c.data());
            const int ai = r[other], aj = c[other];
            const int bi = r[mid], bj = c[mid];
            Complex acc = 0.0;
            for (int k = 0; k < dm; ++k)
                for (int l = 0; l < dm; ++l) {
                    std::vector<int> s1r(2), s1c(2);
                    s1r[other] = ai; s1r[mid] = k;
                    s1c[other] = aj; s1c[mid] = l;
                    acc += stage1.mat(stage1.shape.ravel(s1r.data()),
                                      stage1.shape.ravel(s1c.data())) *
                           second.J.mat(k * db + bi, l * db + bj);
                }
            out(i, j) = acc;
        }
    return {out_shape, std::move(out)};
}

}  // namespace

TEST_CASE("composing with the identity returns the first channel") {
    for (int d : {2, 3}) {
        ChannelChoi first = optimal_channel({MapKind::HYBRID, d});
        ChannelChoi id = identity_channel(d);
        for (int wire : {0, 1}) {
            ChannelChoi out = compose({first, id, wire});
            CHECK((out.J.mat - first.J.mat).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("compose agrees with direct channel application") {
    StreamRng rng(53, 0);
    for (int d : {2, 3}) {
        ChannelChoi first = random_cptp(d, SystemShape({d, d}), 2, rng);
        ChannelChoi second = random_cptp(d, SystemShape({d}), 2, rng);
        for (int wire : {0, 1}) {
            ChannelChoi comp = compose({first, second, wire});
            for (int rep = 0; rep < 4; ++rep) {
                Matrix g(d, d);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        g(i, j) = Complex(rng.gaussian(), rng.gaussian());
                Matrix rho = g * g.adjoint();
                rho /= rho.trace();
                DenseOperator in(SystemShape({d}), rho);
                DenseOperator via_compose = apply_channel(comp, in);
                DenseOperator direct = apply_composite(first, second, wire, in);
                CHECK((via_compose.mat - direct.mat).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    }
}

TEST_CASE("compose output is a valid Choi matrix") {
    StreamRng rng(57, 0);
    for (int d : {2, 3}) {
        ChannelChoi first = random_cptp(d, SystemShape({d, d}), 3, rng);
        ChannelChoi second = random_cptp(d, SystemShape({d}), 2, rng);
        for (int wire : {0, 1}) {
            ChannelChoi out = compose({first, second, wire});
            ChannelCheck chk = ChannelChoi::check(out.d_in, out.d_out, out.J);
            CHECK(chk.ok);
        }
    }
}

TEST_CASE("modular composites hit the closed-form fidelity") {
    for (int d = 2; d <= 5; ++d) {
        CAPTURE(d);
        ChannelChoi mc = modular_cloner(d);
        ChannelChoi mtc = modular_transpose_cloner(d);
        const double f1 = process_fidelity_analytic(mc, {MapKind::PHASE_CLONER, d});
        const double f2 =
            process_fidelity_analytic(mtc, {MapKind::PHASE_TRANSPOSE_CLONER, d});
        CHECK(f1 == doctest::Approx(modular_fidelity_formula(d)).epsilon(1e-10));
        CHECK(f2 == doctest::Approx(modular_fidelity_formula(d)).epsilon(1e-10));
        // strictly below the direct optimum
        CHECK(f1 < closed_form_fidelity({MapKind::PHASE_CLONER, d}));
        CHECK(f2 < closed_form_fidelity({MapKind::PHASE_TRANSPOSE_CLONER, d}));
    }
}

TEST_CASE("reset second channel forgets the consumed wire") {
    const int d = 2;
    ChannelChoi first = optimal_channel({MapKind::PHASE_CLONER, d});
    // reset-to-|0> channel
    Matrix jr = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) jr(i * d + 0, i * d + 0) = 1.0;
    ChannelChoi reset(d, SystemShape({d}), DenseOperator(SystemShape({d, d}), jr));
    ChannelChoi out = compose({first, reset, 1});
    // second output marginal of the composite must be |0><0| regardless of input
    DenseOperator rho = basis_ket(d, 1).projector();
    DenseOperator y = apply_channel(out, rho);
    DenseOperator m2 = partial_trace(y, {1});
    CHECK(m2.mat(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(m2.mat(1, 1)) < 1e-12);
}

TEST_CASE("wiring validation") {
    ChannelChoi one = identity_channel(2);
    ChannelChoi two = optimal_channel({MapKind::PHASE_CLONER, 2});
    CHECK_THROWS_AS(compose({one, one, 1}), std::invalid_argument);   // first not 1->2
    CHECK_THROWS_AS(compose({two, two, 1}), std::invalid_argument);   // second not 1->1
    CHECK_THROWS_AS(compose({two, one, 2}), std::invalid_argument);   // bad wire
    ChannelChoi id3 = identity_channel(3);
    CHECK_THROWS_AS(compose({two, id3, 1}), std::invalid_argument);   // dim mismatch
}
