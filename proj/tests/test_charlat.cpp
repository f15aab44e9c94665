#include <catch2/catch_amalgamated.hpp>

#include "heckelab/charlat.hpp"

#include <memory>

using namespace heckelab;

namespace {

struct Fixture {
    RootDatum d;
    std::unique_ptr<WeylGroup> W;
    std::unique_ptr<ExtWeyl> E;
    std::unique_ptr<CharCtx> C;

    Fixture(const std::string& type, int n, bool flip = false) : d(build_root_datum(type)) {
        W = std::make_unique<WeylGroup>(d);
        E = std::make_unique<ExtWeyl>(*W, flip ? DiagramAut::flip_aut(d)
                                               : DiagramAut::identity_aut(d));
        C = std::make_unique<CharCtx>(*E, n);
    }
};

}  // namespace

TEST_CASE("evaluate") {
    Fixture f("A1", 2);
    int root = f.d.root_index(f.d.simple_roots[0]);
    REQUIRE(f.C->evaluate(f.C->index_of({2, {0}}), root) == 0);
    REQUIRE(f.C->evaluate(f.C->index_of({2, {1}}), root) == 1);

    Fixture g("A2", 3);
    // alpha1 + alpha2 has coroot alpha1^vee + alpha2^vee
    IVec sum = g.d.simple_roots[0];
    for (int i = 0; i < 2; ++i) sum[i] += g.d.simple_roots[1][i];
    REQUIRE(g.C->evaluate(g.C->index_of({3, {1, 1}}), g.d.root_index(sum)) == 2);
    REQUIRE_THROWS_AS(g.d.root_index(IVec{7, 7}), std::invalid_argument);
}

TEST_CASE("action") {
    Fixture f("A1", 2);
    int lam1 = f.C->index_of({2, {1}});
    for (int g = 0; g < f.E->size(); ++g) REQUIRE(f.C->act(g, f.C->index_of({2, {0}})) == 0);
    // s.(1) = (1) mod 2
    REQUIRE(f.C->act(f.E->make(0, f.W->simple_reflection(0)), lam1) == lam1);

    Fixture g("A2", 2, true);
    int uD = g.E->make(1, g.W->identity());
    REQUIRE(g.C->act(uD, g.C->index_of({2, {1, 0}})) == g.C->index_of({2, {0, 1}}));
    // group action law
    for (int a = 0; a < g.E->size(); ++a)
        for (int b = 0; b < g.E->size(); ++b)
            for (int lam = 0; lam < g.C->count(); ++lam)
                REQUIRE(g.C->act(g.E->mult(a, b), lam) == g.C->act(a, g.C->act(b, lam)));
}

TEST_CASE("lambda systems") {
    Fixture f("A1", 2);
    const LambdaSystem& s0 = f.C->system(f.C->index_of({2, {0}}));
    REQUIRE(s0.r_lambda.size() == 2);
    REQUIRE(s0.w_lambda.size() == 2);
    const LambdaSystem& s1 = f.C->system(f.C->index_of({2, {1}}));
    REQUIRE(s1.r_lambda.empty());
    REQUIRE(s1.w_lambda == std::vector<int>{0});

    Fixture g("A2", 2);
    const LambdaSystem& s11 = g.C->system(g.C->index_of({2, {1, 1}}));
    REQUIRE(s11.r_lambda.size() == 2);  // +-(alpha1+alpha2)
    REQUIRE(s11.w_lambda.size() == 2);
    REQUIRE(s11.pi_lambda.size() == 1);
}

TEST_CASE("l_lambda") {
    Fixture f("A1", 2);
    for (int lam = 0; lam < f.C->count(); ++lam)
        REQUIRE(f.C->system(lam).l_lambda[f.E->identity()] == 0);
    int s = f.E->make(0, f.W->simple_reflection(0));
    REQUIRE(f.C->system(f.C->index_of({2, {0}})).l_lambda[s] == 1);
    REQUIRE(f.C->system(f.C->index_of({2, {1}})).l_lambda[s] == 0);
    // restricted to W_lambda it is the Coxeter length of (W_lambda, I_lambda)
    Fixture g("B2", 2);
    for (int lam = 0; lam < g.C->count(); ++lam) {
        const LambdaSystem& sys = g.C->system(lam);
        for (int w : sys.w_lambda)
            REQUIRE(sys.l_lambda[g.E->make(0, w)] ==
                    static_cast<int>(sys.coxeter_words.at(w).size()));
    }
}

TEST_CASE("omega groups") {
    Fixture f("A1", 2);
    REQUIRE(f.C->system(f.C->index_of({2, {0}})).omega == std::vector<int>{0});
    const LambdaSystem& s1 = f.C->system(f.C->index_of({2, {1}}));
    REQUIRE(s1.omega.size() == 2);  // {1, s}

    Fixture g("A2", 2, true);
    const LambdaSystem& s0 = g.C->system(g.C->index_of({2, {0, 0}}));
    int uD = g.E->make(1, g.W->identity());
    REQUIRE(s0.omega == std::vector<int>({g.E->identity(), uD}));
}

TEST_CASE("negate") {
    Fixture f("A1", 2);
    REQUIRE(f.C->negate(f.C->index_of({2, {0}})) == f.C->index_of({2, {0}}));
    for (int lam = 0; lam < f.C->count(); ++lam) REQUIRE(f.C->negate(lam) == lam);  // n = 2
    Fixture g("A2", 3);
    int lam = g.C->index_of({3, {1, 2}});
    REQUIRE(g.C->negate(lam) == g.C->index_of({3, {2, 1}}));
    for (int l = 0; l < g.C->count(); ++l) REQUIRE(g.C->negate(g.C->negate(l)) == l);
}

TEST_CASE("stabilizer facts for small ranks") {
    for (bool flip : {false, true}) {
        for (int n : {2, 3, 4}) {
            Fixture f("A2", n, flip);
            for (int lam = 0; lam < f.C->count(); ++lam) {
                const LambdaSystem& sys = f.C->system(lam);
                // s in W_lambda => s lambda = lambda
                for (int s = 0; s < f.W->num_gens(); ++s)
                    if (sys.in_w_lambda(f.W->simple_reflection(s)))
                        REQUIRE(f.C->act(f.E->make(0, f.W->simple_reflection(s)), lam) == lam);
                // l_lambda(w) = 0 iff w preserves R_lambda^+, for stabilizer elements
                for (int g : sys.stabilizer) {
                    bool preserves = true;
                    for (int r : sys.r_lambda_plus)
                        if (!f.d.is_positive(f.E->act_on_root(g, r))) preserves = false;
                    REQUIRE((sys.l_lambda[g] == 0) == preserves);
                }
                // unique factorization stab = Omega . W_lambda
                for (int g : sys.stabilizer) {
                    int count = 0;
                    for (int om : sys.omega)
                        for (int w : sys.w_lambda)
                            if (f.E->mult(om, f.E->make(0, w)) == g) ++count;
                    REQUIRE(count == 1);
                }
                // W_lambda is normal in the stabilizer
                for (int g : sys.stabilizer)
                    for (int w : sys.w_lambda) {
                        int c = f.E->mult(f.E->mult(g, f.E->make(0, w)), f.E->inverse(g));
                        REQUIRE(f.E->aut_power(c) == 0);
                        REQUIRE(sys.in_w_lambda(f.E->weyl_part(c)));
                    }
            }
        }
    }
}

TEST_CASE("coxeter exchange condition on small cases") {
    for (const char* type : {"A2", "B2"}) {
        for (int n : {2, 3}) {
            Fixture f(type, n);
            for (int lam = 0; lam < f.C->count(); ++lam) {
                const LambdaSystem& sys = f.C->system(lam);
                for (int w : sys.w_lambda) {
                    const auto& word = sys.coxeter_words.at(w);
                    for (size_t gi = 0; gi < sys.i_lambda.size(); ++gi) {
                        int sig = sys.i_lambda[gi];
                        int sw = f.W->mult(sig, w);
                        int lsw = sys.l_lambda[f.E->make(0, sw)];
                        int lw = sys.l_lambda[f.E->make(0, w)];
                        if (lsw >= lw) continue;
                        // exchange: sigma w = word with one letter dropped
                        bool found = false;
                        for (size_t i = 0; i < word.size(); ++i) {
                            int prod = f.W->identity();
                            for (size_t j = 0; j < word.size(); ++j) {
                                if (j == i) continue;
                                prod = f.W->mult(prod, sys.i_lambda[word[j]]);
                            }
                            if (prod == sw) { found = true; break; }
                        }
                        REQUIRE(found);
                    }
                }
            }
        }
    }
}
