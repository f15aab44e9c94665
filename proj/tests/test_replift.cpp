#include <catch2/catch_amalgamated.hpp>

#include "heckelab/replift.hpp"

#include <memory>

using namespace heckelab;

namespace {

struct Pipeline {
    std::unique_ptr<HeckeCtx> ctx;
    std::unique_ptr<CanBasis> cb;
    RTensor rt;
    CellData cd;
    JRingTable jt;
    std::unique_ptr<RepLift> rl;

    Pipeline(const std::string& type, int n, bool flip = false) {
        RootDatum d = build_root_datum(type);
        DiagramAut a = flip ? DiagramAut::flip_aut(d) : DiagramAut::identity_aut(d);
        ctx = std::make_unique<HeckeCtx>(std::move(d), std::move(a), n);
        cb = std::make_unique<CanBasis>(*ctx);
        rt = r_constants(*cb);
        cd = cells_and_a(*cb, rt);
        jt = jring(*cb, rt, cd);
        rl = std::make_unique<RepLift>(*ctx, *cb, jt);
    }
};

}  // namespace

TEST_CASE("simple modules of A1, n = 2") {
    Pipeline p("A1", 2);
    REQUIRE(p.rl->num_modules() == 4);
    for (auto& t : p.rl->modules()) {
        REQUIRE(t.in_U_a);  // trivial automorphism: U = U^a
        REQUIRE(t.dim == 1);
    }
}

TEST_CASE("lifted trace of T~_s on the trivial block of A1, n = 2") {
    Pipeline p("A1", 2);
    int lam0 = p.ctx->chars().index_of({2, {0}});
    int s = p.ctx->weyl().simple_reflection(0);
    auto F = p.rl->field();
    // the module with orbit (0) and trivial character: tr(T~_s 1_(0)) = v
    int found = -1;
    for (int u = 0; u < p.rl->num_modules(); ++u) {
        auto& t = p.rl->modules()[u];
        if (t.orbit_rep != lam0) continue;
        if (p.rl->trace_v1_plain(u, s, lam0) == Cyclo::one(F)) found = u;
    }
    REQUIRE(found >= 0);
    REQUIRE(p.rl->trace_plain(found, s, lam0) ==
            CycloLaurent::from_laurent(F, Laurent::v_pow(1)));
    // the sign module: tr(T~_s 1_(0)) = -v^-1, f = 1 + v^-2
    int sign = -1;
    for (int u = 0; u < p.rl->num_modules(); ++u) {
        auto& t = p.rl->modules()[u];
        if (t.orbit_rep != lam0) continue;
        if (p.rl->trace_v1_plain(u, s, lam0) == -Cyclo::one(F)) sign = u;
    }
    REQUIRE(sign >= 0);
    REQUIRE(p.rl->trace_plain(sign, s, lam0) ==
            CycloLaurent::from_laurent(F, -Laurent::v_pow(-1)));
    REQUIRE(p.rl->schur_element(sign) ==
            CycloLaurent::from_laurent(F, Laurent::one() + Laurent::v_pow(-2)));
    // trace of the idempotent equals the character degree on the orbit
    for (int u = 0; u < p.rl->num_modules(); ++u) {
        auto& t = p.rl->modules()[u];
        for (int lam = 0; lam < p.ctx->num_chars(); ++lam) {
            CycloLaurent tr = p.rl->trace_plain(u, p.ctx->weyl().identity(), lam);
            if (p.rl->plain_rep(lam) == t.orbit_rep)
                REQUIRE(tr == CycloLaurent::constant(
                                  Cyclo::from_rational(F, Rat(t.degree))));
            else
                REQUIRE(tr.is_zero());
        }
    }
}

TEST_CASE("group-algebra block has constant Schur element 2") {
    Pipeline p("A1", 2);
    int lam1 = p.ctx->chars().index_of({2, {1}});
    auto F = p.rl->field();
    for (int u = 0; u < p.rl->num_modules(); ++u) {
        if (p.rl->modules()[u].orbit_rep != lam1) continue;
        REQUIRE(p.rl->schur_element(u) ==
                CycloLaurent::constant(Cyclo::from_rational(F, Rat(2))));
    }
}

TEST_CASE("orthogonality suite for A1, n = 2 and n = 3") {
    for (int n : {2, 3}) {
        Pipeline p("A1", n);
        auto rep = p.rl->orthogonality_checks();
        CAPTURE(n, rep.failures);
        REQUIRE(rep.all());
    }
}

TEST_CASE("orthogonality suite for A2 with flip") {
    Pipeline p("A2", 2, true);
    // All W-orbits of characters are flip-stable here and the induced
    // conjugation on each stabilizer is inner, so every module is fixed.
    for (auto& t : p.rl->modules()) REQUIRE(t.in_U_a);
    auto rep = p.rl->orthogonality_checks();
    CAPTURE(rep.failures);
    REQUIRE(rep.all());
}

TEST_CASE("proper U^a for A1xA1 with the swap automorphism") {
    Pipeline p("A1xA1", 2, true);
    // W acts trivially on characters mod 2, so the swap moves the orbits
    // {(0,1)} and {(1,0)} to each other: their modules are not fixed.
    bool proper = false;
    for (auto& t : p.rl->modules()) {
        if (!t.in_U_a) {
            proper = true;
            REQUIRE(p.rl->modules()[t.bar_u].bar_u >= 0);
            REQUIRE(t.bar_u != (&t - p.rl->modules().data()));
        }
    }
    REQUIRE(proper);
    auto rep = p.rl->orthogonality_checks();
    CAPTURE(rep.failures);
    REQUIRE(rep.all());
}

TEST_CASE("orthogonality suite for A1xA1, n = 2") {
    Pipeline p("A1xA1", 2);
    auto rep = p.rl->orthogonality_checks();
    CAPTURE(rep.failures);
    REQUIRE(rep.all());
}

TEST_CASE("quasi-rationality") {
    Pipeline p("A1", 2);
    for (int u = 0; u < p.rl->num_modules(); ++u) {
        auto rep = p.rl->quasi_rational_check(u);
        CAPTURE(u, rep.failures);
        REQUIRE(rep.hypothesis);
        REQUIRE(rep.conclusion);
    }
}

TEST_CASE("twisted trace factorization on A1, n = 2") {
    Pipeline p("A1", 2);
    const ExtWeyl& E = p.ctx->ext();
    std::vector<HeckeElt> samples;
    samples.push_back(HeckeElt::unit(*p.ctx));
    for (int w = 0; w < p.ctx->weyl().size(); ++w)
        for (int lam = 0; lam < p.ctx->num_chars(); ++lam)
            samples.push_back(HeckeElt::std_basis(*p.ctx, E.make(0, w), lam));
    for (auto& c : samples)
        for (auto& cp : samples) REQUIRE(p.rl->check_twisted_trace_factorization(c, cp));
}

TEST_CASE("dual-basis identities at v = 1") {
    Pipeline p("A1", 2);
    REQUIRE(p.rl->check_dual_basis_identities());
    Pipeline q("A2", 2, true);
    REQUIRE(q.rl->check_dual_basis_identities());
}

TEST_CASE("semisimplicity gate at v = 1") {
    Pipeline p("A1", 2);
    REQUIRE(p.rl->semisimple_gate_v1());
}
