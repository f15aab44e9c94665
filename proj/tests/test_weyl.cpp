#include <catch2/catch_amalgamated.hpp>

#include "heckelab/weyl.hpp"

#include <functional>

using namespace heckelab;

TEST_CASE("named root data") {
    RootDatum a1 = build_root_datum("A1");
    REQUIRE(a1.rank == 1);
    REQUIRE(a1.simple_roots[0] == IVec{2});
    REQUIRE(a1.simple_coroots[0] == IVec{1});
    REQUIRE(a1.npos == 1);

    RootDatum a2 = build_root_datum("A2");
    REQUIRE(a2.cartan == IMat{{2, -1}, {-1, 2}});
    REQUIRE(a2.npos == 3);

    REQUIRE(build_root_datum("B2").npos == 4);
    REQUIRE(build_root_datum("G2").npos == 6);
    REQUIRE(build_root_datum("A1xA1").npos == 2);
}

TEST_CASE("invalid data rejected") {
    // <alpha_1, alpha_1^vee> = 3
    REQUIRE_THROWS_AS(build_root_datum({{3}}, {{1}}), std::invalid_argument);
    // affine A1 tilde: not positive definite
    IMat aff = {{2, -2}, {-2, 2}};
    REQUIRE_THROWS_AS(detail::validate_cartan(aff), std::invalid_argument);
    REQUIRE_THROWS_AS(build_root_datum("E9"), std::invalid_argument);
}

TEST_CASE("group orders") {
    REQUIRE(WeylGroup(build_root_datum("A1")).size() == 2);
    REQUIRE(WeylGroup(build_root_datum("A2")).size() == 6);
    REQUIRE(WeylGroup(build_root_datum("B2")).size() == 8);
    REQUIRE(WeylGroup(build_root_datum("G2")).size() == 12);
    REQUIRE(WeylGroup(build_root_datum("A1xA1")).size() == 4);
    REQUIRE(WeylGroup(build_root_datum("A3")).size() == 24);
}

TEST_CASE("lengths and words") {
    WeylGroup W(build_root_datum("A2"));
    REQUIRE(W.length(W.identity()) == 0);
    REQUIRE(W.word(W.identity()).empty());
    int s1 = W.simple_reflection(0);
    REQUIRE(W.length(s1) == 1);
    REQUIRE(W.word(s1) == std::vector<int>{0});
    // longest element of A2 by enumeration oracle: max inversion count is 3
    int w0 = 0;
    for (int w = 0; w < W.size(); ++w)
        if (W.inversion_count(w) > W.inversion_count(w0)) w0 = w;
    REQUIRE(W.inversion_count(w0) == 3);
    REQUIRE(W.longest_element({0, 1}) == w0);
    REQUIRE(W.word(w0) == std::vector<int>{0, 1, 0});  // ShortLex picks s1 s2 s1
    for (int w = 0; w < W.size(); ++w) REQUIRE(W.length(w) == W.inversion_count(w));
}

TEST_CASE("longest element of parabolic") {
    WeylGroup W(build_root_datum("A2"));
    REQUIRE(W.longest_element({}) == W.identity());
    REQUIRE(W.longest_element({0}) == W.simple_reflection(0));
    WeylGroup W1(build_root_datum("A1"));
    REQUIRE(W1.longest_element({0}) == W1.simple_reflection(0));
}

TEST_CASE("bruhat order") {
    WeylGroup W(build_root_datum("A2"));
    int s1 = W.simple_reflection(0), s2 = W.simple_reflection(1);
    int w0 = W.longest_element({0, 1});
    for (int w = 0; w < W.size(); ++w) {
        REQUIRE(W.bruhat_leq(W.identity(), w));
        REQUIRE(W.bruhat_leq(w, w0));
        REQUIRE(W.bruhat_leq(w, w));
    }
    REQUIRE(!W.bruhat_leq(s1, s2));
    REQUIRE(W.bruhat_leq(s1, W.mult(W.mult(s1, s2), s1)));
    // partial order refining length; antisymmetry
    for (int y = 0; y < W.size(); ++y)
        for (int w = 0; w < W.size(); ++w) {
            if (W.bruhat_leq(y, w) && y != w) REQUIRE(W.length(y) < W.length(w));
            if (W.bruhat_leq(y, w) && W.bruhat_leq(w, y)) REQUIRE(y == w);
            for (int z = 0; z < W.size(); ++z)
                if (W.bruhat_leq(y, w) && W.bruhat_leq(w, z)) REQUIRE(W.bruhat_leq(y, z));
        }
}

TEST_CASE("subadditivity of length") {
    for (const char* type : {"A1", "A2", "B2", "A1xA1"}) {
        WeylGroup W(build_root_datum(type));
        for (int a = 0; a < W.size(); ++a)
            for (int b = 0; b < W.size(); ++b) {
                int ab = W.mult(a, b);
                REQUIRE(W.length(ab) <= W.length(a) + W.length(b));
                // additivity iff no positive root inverted by b is
                // re-straightened by a
                bool cancel = false;
                for (int r = 0; r < W.datum().npos; ++r) {
                    int br = W.act_on_root(b, r);
                    if (!W.datum().is_positive(br) &&
                        W.datum().is_positive(W.act_on_root(a, br)))
                        cancel = true;
                }
                bool additive = W.length(ab) == W.length(a) + W.length(b);
                REQUIRE(additive == !cancel);
            }
    }
}

TEST_CASE("diagram automorphisms") {
    RootDatum a2 = build_root_datum("A2");
    WeylGroup W(a2);
    DiagramAut flip = DiagramAut::flip_aut(a2);
    REQUIRE(flip.order == 2);
    REQUIRE(flip.root_permutation == std::vector<int>{1, 0});
    ExtWeyl E(W, flip);
    REQUIRE(E.size() == 12);
    int s1 = W.simple_reflection(0), s2 = W.simple_reflection(1);
    REQUIRE(E.eps(s1) == s2);
    REQUIRE(E.eps(W.mult(s1, s2)) == W.mult(s2, s1));
    // eps is a length-preserving automorphism
    for (int a = 0; a < W.size(); ++a) {
        REQUIRE(W.length(E.eps(a)) == W.length(a));
        for (int b = 0; b < W.size(); ++b)
            REQUIRE(E.eps(W.mult(a, b)) == W.mult(E.eps(a), E.eps(b)));
    }
    // trivial automorphism acts as identity
    ExtWeyl Et(W, DiagramAut::identity_aut(a2));
    for (int a = 0; a < W.size(); ++a) REQUIRE(Et.eps(a) == a);
}

TEST_CASE("extended multiplication is associative with l(uD^a w) = l(w)") {
    RootDatum a2 = build_root_datum("A2");
    WeylGroup W(a2);
    ExtWeyl E(W, DiagramAut::flip_aut(a2));
    for (int g = 0; g < E.size(); ++g) {
        REQUIRE(E.length(g) == W.length(E.weyl_part(g)));
        REQUIRE(E.mult(g, E.inverse(g)) == E.identity());
        for (int h = 0; h < E.size(); ++h)
            for (int f = 0; f < E.size(); ++f)
                REQUIRE(E.mult(E.mult(g, h), f) == E.mult(g, E.mult(h, f)));
    }
}

TEST_CASE("cached words are ShortLex-minimal among all reduced words") {
    for (const char* type : {"A2", "B2"}) {
        WeylGroup W(build_root_datum(type));
        for (int w = 0; w < W.size(); ++w) {
            int len = W.length(w);
            // enumerate every length-l word with product w
            std::vector<std::vector<int>> words;
            std::vector<int> cur;
            std::function<void(int, int)> dfs = [&](int elt, int depth) {
                if (depth == len) {
                    if (elt == w) words.push_back(cur);
                    return;
                }
                for (int s = 0; s < W.num_gens(); ++s) {
                    cur.push_back(s);
                    dfs(W.mult(elt, W.simple_reflection(s)), depth + 1);
                    cur.pop_back();
                }
            };
            dfs(W.identity(), 0);
            REQUIRE(!words.empty());
            REQUIRE(*std::min_element(words.begin(), words.end()) == W.word(w));
        }
    }
}

TEST_CASE("bruhat order agrees with the subword-criterion oracle") {
    for (const char* type : {"A2", "B2"}) {
        WeylGroup W(build_root_datum(type));
        for (int w = 0; w < W.size(); ++w) {
            // subword products of the fixed reduced word of w
            std::vector<char> below(W.size(), 0);
            below[W.identity()] = 1;
            for (int s : W.word(w)) {
                std::vector<char> next = below;
                for (int y = 0; y < W.size(); ++y)
                    if (below[y]) next[W.mult(y, W.simple_reflection(s))] = 1;
                below = std::move(next);
            }
            for (int y = 0; y < W.size(); ++y)
                REQUIRE(W.bruhat_leq(y, w) == static_cast<bool>(below[y]));
        }
    }
}

TEST_CASE("enumerate parabolic subgroups") {
    WeylGroup W(build_root_datum("B2"));
    REQUIRE(W.enumerate({0, 1}).size() == 8);
    REQUIRE(W.enumerate({0}).size() == 2);
    REQUIRE(W.enumerate({}).size() == 1);
    WeylGroup Wa(build_root_datum("A1"));
    REQUIRE(Wa.enumerate({0}).size() == 2);
    WeylGroup W2(build_root_datum("A2"));
    REQUIRE(W2.enumerate({0, 1}).size() == 6);
}
