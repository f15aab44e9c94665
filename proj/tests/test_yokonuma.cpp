#include <catch2/catch_amalgamated.hpp>

#include "heckelab/yokonuma.hpp"

#include <memory>

using namespace heckelab;

namespace {

std::unique_ptr<HeckeCtx> gl2_ctx(int q) {
    RootDatum d = gl2_root_datum();
    DiagramAut a = DiagramAut::identity_aut(d);
    return std::make_unique<HeckeCtx>(std::move(d), std::move(a), q - 1);
}

}  // namespace

TEST_CASE("model sizes") {
    FiniteGL m2(2);
    REQUIRE(m2.size() == 6);
    FiniteGL m3(3);
    REQUIRE(m3.size() == 48);
    REQUIRE(m3.unipotent().size() == 3);
    REQUIRE(m3.torus().size() == 4);
    REQUIRE(m3.monomials().size() == 8);
    REQUIRE(m3.num_left_cosets() == 16);
    REQUIRE(m3.borels().size() == 4);
    REQUIRE_THROWS_AS(FiniteGL(4), std::invalid_argument);
}

TEST_CASE("s dot is the expected monomial") {
    FiniteGL m(3);
    // x_s(1) [[1,0],[-1,1]] x_s(1) = [[0,1],[-1,0]]
    int expect = m.mult(m.mult(m.x_s(1), m.torus_elt(1, 1)), m.unit());
    (void)expect;
    int sd = m.s_dot();
    REQUIRE(m.mult(sd, sd) == m.coroot_s(-1));
    // the pinning equation: coroot check t = s(t) coroot(alpha(t))
    for (int t : m.torus()) {
        int st = m.mult(m.mult(sd, t), m.inverse(sd));
        REQUIRE(std::find(m.torus().begin(), m.torus().end(), st) != m.torus().end());
    }
}

TEST_CASE("q = 3 worked convolution") {
    FiniteGL m(3);
    Convolver conv(m);
    // k_sdot k_sdot = 3 k_{coroot(-1)} + sum_{a in F_3^*} k_{sdot coroot(a)}
    int sd = m.monomial_index(m.s_dot());
    DoubleCosetFn prod = conv.convolve(DoubleCosetFn::k_basis(m, sd),
                                       DoubleCosetFn::k_basis(m, sd));
    auto F = m.field();
    REQUIRE(prod.at(m.monomial_index(m.coroot_s(-1))) == Cyclo::from_rational(F, Rat(3)));
    for (int a = 1; a < 3; ++a)
        REQUIRE(prod.at(m.monomial_index(m.mult(m.s_dot(), m.coroot_s(a)))) == Cyclo::one(F));
}

TEST_CASE("full Yokonuma check suite at q = 2 and q = 3") {
    for (int q : {2, 3}) {
        FiniteGL m(q);
        Convolver conv(m);
        auto hctx = gl2_ctx(q);
        YokonumaReport rep = yokonuma_checks(m, conv, *hctx);
        CAPTURE(q, rep.failures);
        REQUIRE(rep.all());
    }
}

TEST_CASE("sum of idempotents and the q = 2 degenerate case") {
    FiniteGL m(2);
    Convolver conv(m);
    YokonumaEmbedding emb(m, conv);
    REQUIRE(emb.num_chars() == 1);
    REQUIRE(emb.one_lam(0) == DoubleCosetFn::unit(m));
    // T_s^2 = q + (q-1) T_s = 2 k_1 + T_s
    DoubleCosetFn ts = emb.T_w(true);
    DoubleCosetFn sq = conv.convolve(ts, ts);
    auto F = m.field();
    DoubleCosetFn expect = Cyclo::from_rational(F, Rat(2)) * DoubleCosetFn::unit(m) + ts;
    REQUIRE(sq == expect);
}

TEST_CASE("twisted conjugation at q = 3") {
    FiniteGL m(3);
    Convolver conv(m);
    TwistedReport rep = twisted_conjugation_check(m, conv);
    CAPTURE(rep.failures);
    REQUIRE(rep.all());
}

TEST_CASE("twisted conjugation at q = 2") {
    FiniteGL m(2);
    Convolver conv(m);
    TwistedReport rep = twisted_conjugation_check(m, conv);
    CAPTURE(rep.failures);
    REQUIRE(rep.all());
}
