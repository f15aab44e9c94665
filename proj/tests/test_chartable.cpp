#include <catch2/catch_amalgamated.hpp>

#include "heckelab/chartable.hpp"
#include "heckelab/hecke.hpp"

using namespace heckelab;

namespace {

FiniteGroupData cyclic_group(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroupData::from_mult_table(std::move(t));
}

FiniteGroupData from_weyl(const WeylGroup& W, const std::vector<int>& elems) {
    std::map<int, int> pos;
    // the identity must sit at index 0; elems is sorted so elems[0] == 0
    for (size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> t(elems.size(), std::vector<int>(elems.size()));
    for (size_t a = 0; a < elems.size(); ++a)
        for (size_t b = 0; b < elems.size(); ++b)
            t[a][b] = pos.at(W.mult(elems[a], elems[b]));
    return FiniteGroupData::from_mult_table(std::move(t));
}

}  // namespace

TEST_CASE("Z/2") {
    auto F = Cyclo::make_field(2);
    CharacterTable t = char_table(cyclic_group(2), F);
    REQUIRE(t.num_irreps() == 2);
    // [[1,1],[1,-1]] up to row order; ordering is by degree then values
    REQUIRE(t.degree(0) == 1);
    REQUIRE(t.degree(1) == 1);
    Cyclo one = Cyclo::one(F), minus = -Cyclo::one(F);
    bool found_sign = false, found_triv = false;
    for (int c = 0; c < 2; ++c) {
        if (t.value(c, 1) == minus) found_sign = true;
        if (t.value(c, 1) == one) found_triv = true;
    }
    REQUIRE(found_sign);
    REQUIRE(found_triv);
}

TEST_CASE("Z/3 needs cube roots") {
    auto F = Cyclo::make_field(3);
    CharacterTable t = char_table(cyclic_group(3), F);
    REQUIRE(t.num_irreps() == 3);
    Cyclo z = Cyclo::primitive_root(F, 3);
    // values of the two nontrivial characters on a generator are z and z^2
    std::vector<Cyclo> vals;
    for (int c = 0; c < 3; ++c) vals.push_back(t.value(c, 1));
    REQUIRE(std::count(vals.begin(), vals.end(), z) == 1);
    REQUIRE(std::count(vals.begin(), vals.end(), z * z) == 1);
    REQUIRE(std::count(vals.begin(), vals.end(), Cyclo::one(F)) == 1);
}

TEST_CASE("S3 = Weyl group of A2") {
    WeylGroup W(build_root_datum("A2"));
    FiniteGroupData g = from_weyl(W, W.enumerate({0, 1}));
    auto F = Cyclo::make_field(g.exponent);
    CharacterTable t = char_table(g, F);
    REQUIRE(t.num_irreps() == 3);
    std::vector<int> degs;
    for (int c = 0; c < 3; ++c) degs.push_back(t.degree(c));
    std::sort(degs.begin(), degs.end());
    REQUIRE(degs == std::vector<int>{1, 1, 2});
}

TEST_CASE("dihedral W(B2) and W(G2)") {
    {
        WeylGroup W(build_root_datum("B2"));
        FiniteGroupData g = from_weyl(W, W.enumerate({0, 1}));
        CharacterTable t = char_table(g, Cyclo::make_field(g.exponent));
        std::vector<int> degs;
        for (int c = 0; c < t.num_irreps(); ++c) degs.push_back(t.degree(c));
        std::sort(degs.begin(), degs.end());
        REQUIRE(degs == std::vector<int>{1, 1, 1, 1, 2});
    }
    {
        WeylGroup W(build_root_datum("G2"));
        FiniteGroupData g = from_weyl(W, W.enumerate({0, 1}));
        CharacterTable t = char_table(g, Cyclo::make_field(g.exponent));
        std::vector<int> degs;
        for (int c = 0; c < t.num_irreps(); ++c) degs.push_back(t.degree(c));
        std::sort(degs.begin(), degs.end());
        REQUIRE(degs == std::vector<int>{1, 1, 1, 1, 2, 2});
    }
}

TEST_CASE("stabilizer group from a lambda system") {
    RootDatum d = build_root_datum("A2");
    WeylGroup W(d);
    ExtWeyl E(W, DiagramAut::identity_aut(d));
    CharCtx C(E, 2);
    const LambdaSystem& sys = C.system(C.index_of({2, {1, 1}}));
    REQUIRE(sys.w_lambda.size() == 2);
    FiniteGroupData g = from_weyl(W, sys.w_lambda);
    CharacterTable t = char_table(g, Cyclo::make_field(g.exponent));
    REQUIRE(t.num_irreps() == 2);
}

TEST_CASE("size bound") {
    REQUIRE_THROWS_AS(char_table(cyclic_group(8), Cyclo::make_field(8), 5),
                      std::invalid_argument);
}
