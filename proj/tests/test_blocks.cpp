#include <catch2/catch_amalgamated.hpp>

#include "heckelab/blocks.hpp"

#include <memory>
#include <random>

using namespace heckelab;

namespace {

std::unique_ptr<HeckeCtx> make_ctx(const std::string& type, int n, bool flip = false) {
    RootDatum d = build_root_datum(type);
    DiagramAut a = flip ? DiagramAut::flip_aut(d) : DiagramAut::identity_aut(d);
    return std::make_unique<HeckeCtx>(std::move(d), std::move(a), n);
}

}  // namespace

TEST_CASE("H_lambda for A1, n = 2") {
    auto ctx = make_ctx("A1", 2);
    int lam1 = ctx->chars().index_of({2, {1}});
    HLambdaAlg alg(*ctx, lam1);  // rank 2: stabilizer is {1, s} with l_lambda = 0
    REQUIRE(alg.elements().size() == 2);
    int s = ctx->ext().make(0, ctx->weyl().simple_reflection(0));
    // Omega-part relation: T~^lam_s squared = T~^lam_1
    REQUIRE(alg.mult(alg.basis(s), alg.basis(s)) == alg.unit());

    int lam0 = ctx->chars().index_of({2, {0}});
    HLambdaAlg alg0(*ctx, lam0);  // the ordinary rank-2 Iwahori-Hecke algebra
    REQUIRE(alg0.elements().size() == 2);
    HLambdaElt sq = alg0.mult(alg0.basis(s), alg0.basis(s));
    HLambdaElt expect = alg0.unit();
    expect[s] = Laurent::v_pow(1) - Laurent::v_pow(-1);
    REQUIRE(sq == expect);
    // c^lam_sigma = T~^lam_sigma + v^-1 T~^lam_1
    HLambdaElt cs = alg0.c_basis(s);
    REQUIRE(cs.size() == 2);
    REQUIRE(cs.at(s) == Laurent::one());
    REQUIRE(cs.at(ctx->ext().identity()) == Laurent::v_pow(-1));
}

TEST_CASE("theta_lambda matches canonical bases") {
    for (bool flip : {false, true}) {
        auto ctx = make_ctx("A2", 2, flip);
        CanBasis cb(*ctx);
        for (int lam = 0; lam < ctx->num_chars(); ++lam) {
            HLambdaAlg alg(*ctx, lam);
            // unit -> 1_lam, products match on all basis pairs
            REQUIRE(alg.theta(alg.unit()) == HeckeElt::idempotent(*ctx, lam));
            for (int g : alg.elements())
                for (int h : alg.elements())
                    REQUIRE(alg.theta(alg.mult(alg.basis(g), alg.basis(h))) ==
                            alg.theta(alg.basis(g)) * alg.theta(alg.basis(h)));
            // c^lam_w -> c_{w, lam}
            for (int g : alg.elements()) REQUIRE(alg.theta(alg.c_basis(g)) == cb.elt(g, lam));
        }
    }
}

TEST_CASE("ss choice for A2 flip, n = 2") {
    auto ctx = make_ctx("A2", 2, true);
    SsChoice ss(*ctx);  // constructor verifies invertibility and bar-fixedness
    for (int lam = 0; lam < ctx->num_chars(); ++lam) {
        if (ss.rep(lam) == lam) REQUIRE(ss.sequence(lam).empty());
        REQUIRE(ctx->chars().act(ss.bracket(lam), lam) == ss.rep(lam));
    }
    // (1,0) and (0,1) are in one orbit with a length-1 path
    int l10 = ctx->chars().index_of({2, {1, 0}});
    int l01 = ctx->chars().index_of({2, {0, 1}});
    REQUIRE(ss.rep(l10) == l01);
    REQUIRE(ss.sequence(l10).size() == 1);
}

TEST_CASE("Psi is an algebra isomorphism matching canonical bases") {
    for (bool flip : {false, true}) {
        auto ctx = make_ctx("A2", 2, flip);
        CanBasis cb(*ctx);
        SsChoice ss(*ctx);
        EAlg E(*ctx, ss);
        const ExtWeyl& X = ctx->ext();

        // Psi(1_lam) is the diagonal entry 1_{lam0} at (lam, lam)
        for (int lam = 0; lam < ctx->num_chars(); ++lam) {
            EAlgElt img = E.psi(HeckeElt::idempotent(*ctx, lam));
            REQUIRE(img.entries.size() == 1);
            REQUIRE(img.entries.at({lam, lam}) == HeckeElt::idempotent(*ctx, ss.rep(lam)));
        }

        // Psi(T~_w 1_lam) = x^{w lam, lam, [s_{w lam}] w [s_lam]^-1}, Psi(c) = c^psi0
        for (int g = 0; g < X.size(); ++g)
            for (int lam = 0; lam < ctx->num_chars(); ++lam) {
                auto [l1, l2, w] = E.psi0(g, lam);
                REQUIRE(E.psi(HeckeElt::std_basis(*ctx, g, lam)) == E.x_basis(l1, l2, w));
                auto [g2, lam2] = E.psi0_inv(l1, l2, w);
                REQUIRE(g2 == g);
                REQUIRE(lam2 == lam);
                // canonical basis goes to canonical basis
                EAlgElt expect;
                expect.entries[{l1, l2}] = cb.elt(w, ss.rep(lam));
                REQUIRE(E.psi(cb.elt(g, lam)) == expect);
            }

        // multiplicative on random pairs; commutes with bar
        std::mt19937 rng(2027);
        std::uniform_int_distribution<int> pg(0, X.size() - 1), pl(0, ctx->num_chars() - 1);
        for (int i = 0; i < 12; ++i) {
            HeckeElt a = HeckeElt::std_basis(*ctx, pg(rng), pl(rng));
            HeckeElt b = HeckeElt::std_basis(*ctx, pg(rng), pl(rng));
            REQUIRE(E.psi(a * b) == E.mult(E.psi(a), E.psi(b)));
            REQUIRE(E.psi(a.bar()) == E.bar(E.psi(a)));
        }
        // unit goes to the unit
        REQUIRE(E.psi(HeckeElt::unit(*ctx)) == E.unit());
    }
}

TEST_CASE("ss paths through uD and the full Psi suite for the A1xA1 swap") {
    // W acts trivially on characters mod 2, so the orbit {(0,1), (1,0)} is
    // only connected through uD: the chosen sequences must use uD steps.
    auto ctx = make_ctx("A1xA1", 2, true);
    SsChoice ss(*ctx);
    const ExtWeyl& X = ctx->ext();
    bool used_aut_step = false;
    for (int lam = 0; lam < ctx->num_chars(); ++lam)
        for (int g : ss.sequence(lam))
            if (X.aut_power(g) != 0) used_aut_step = true;
    REQUIRE(used_aut_step);
    CanBasis cb(*ctx);
    EAlg E(*ctx, ss);
    for (int g = 0; g < X.size(); ++g)
        for (int lam = 0; lam < ctx->num_chars(); ++lam) {
            auto [l1, l2, w] = E.psi0(g, lam);
            REQUIRE(E.psi(HeckeElt::std_basis(*ctx, g, lam)) == E.x_basis(l1, l2, w));
            EAlgElt expect;
            expect.entries[{l1, l2}] = cb.elt(w, ss.rep(lam));
            REQUIRE(E.psi(cb.elt(g, lam)) == expect);
        }
}

TEST_CASE("matrix-unit structure of E_n^D") {
    auto ctx = make_ctx("A2", 2, true);
    SsChoice ss(*ctx);
    EAlg E(*ctx, ss);
    int nl = ctx->num_chars();
    for (int l1 = 0; l1 < nl; ++l1)
        for (int l2 = 0; l2 < nl; ++l2) {
            if (ss.rep(l1) != ss.rep(l2)) continue;
            EAlgElt x = E.x_basis(l1, l2, ctx->ext().identity());
            for (int l3 = 0; l3 < nl; ++l3)
                for (int l4 = 0; l4 < nl; ++l4) {
                    if (ss.rep(l3) != ss.rep(l4)) continue;
                    EAlgElt y = E.x_basis(l3, l4, ctx->ext().identity());
                    EAlgElt prod = E.mult(x, y);
                    if (l2 != l3) {
                        REQUIRE(prod.entries.empty());
                    } else {
                        REQUIRE(prod.entries.size() == 1);
                        REQUIRE(prod.entries.count({l1, l4}) == 1);
                    }
                }
        }
}

TEST_CASE("distinguished elements are diagonal involutions, also through Psi0") {
    for (bool flip : {false, true}) {
        auto ctx = make_ctx("A2", 2, flip);
        CanBasis cb(*ctx);
        RTensor rt = r_constants(cb);
        CellData cd = cells_and_a(cb, rt);
        JRingTable jt = jring(cb, rt, cd);
        REQUIRE(jt.p2_holds);
        SsChoice ss(*ctx);
        EAlg E(*ctx, ss);
        for (int d : jt.dist_list) {
            auto [g, lam] = cb.key(d);
            // w in W_lambda with w^2 = 1
            REQUIRE(ctx->ext().aut_power(g) == 0);
            REQUIRE(ctx->chars().system(lam).in_w_lambda(ctx->ext().weyl_part(g)));
            REQUIRE(ctx->ext().mult(g, g) == ctx->ext().identity());
            // lambda1 = lambda2 and the transported element fixes lam0
            auto [l1, l2, w] = E.psi0(g, lam);
            REQUIRE(l1 == l2);
            REQUIRE(ctx->ext().aut_power(w) == 0);
            REQUIRE(ctx->chars().system(ss.rep(lam)).in_w_lambda(ctx->ext().weyl_part(w)));
            REQUIRE(ctx->ext().mult(w, w) == ctx->ext().identity());
        }
    }
}
