#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "diffinv/expr_io.hpp"
#include "diffinv/groebner.hpp"

using namespace diffinv;

namespace {

Poly pp(const std::string& s, const VarSet& vs) {
    Rat r = parse_expr(s, vs);
    REQUIRE(r.is_poly());
    return r.num();
}

bool same_set(const std::vector<Poly>& a, const std::vector<Poly>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& p : a)
        if (std::find(b.begin(), b.end(), p) == b.end()) return false;
    return true;
}

} // namespace

TEST_CASE("normal_form examples") {
    VarSet vs({"x", "y"});
    auto lex = MonomialOrder::lex(vs);
    CHECK(normal_form(pp("x^2", vs), {pp("x", vs)}, lex).is_zero());
    // substitute x -> y by hand: x^2+y -> y^2+y
    CHECK(normal_form(pp("x^2+y", vs), {pp("x-y", vs)}, lex) == pp("y^2+y", vs));
    CHECK(normal_form(pp("y", vs), {pp("x", vs)}, lex) == pp("y", vs));
}

TEST_CASE("buchberger examples") {
    VarSet vs({"x", "y"});
    auto lex = MonomialOrder::lex(vs);

    // hand elimination: x = y^2 from the second generator
    auto gb = buchberger({pp("x^2-y", vs), pp("y^2-x", vs)}, lex);
    CHECK(same_set(gb.gens, {pp("x-y^2", vs), pp("y^4-y", vs)}));

    auto whole = buchberger({pp("x", vs), pp("x+1", vs)}, lex);
    REQUIRE(whole.gens.size() == 1);
    CHECK(whole.gens[0].is_one());

    auto single = buchberger({pp("x*y", vs)}, lex);
    CHECK(same_set(single.gens, {pp("x*y", vs)}));
}

TEST_CASE("reduced basis is unique under shuffles and recombinations") {
    VarSet vs({"x", "y", "z"});
    auto lex = MonomialOrder::lex(vs);
    std::vector<Poly> gens = {pp("x^2+y*z-1", vs), pp("x*z-y", vs), pp("y^2-z", vs)};
    auto ref = buchberger(gens, lex);
    CHECK(ref.gens.size() >= 3);

    std::mt19937 rng(271828);
    for (int t = 0; t < 10; ++t) {
        auto g = gens;
        std::shuffle(g.begin(), g.end(), rng);
        // invertible integer recombination: add a multiple of another generator
        size_t i = rng() % g.size(), j = (i + 1 + rng() % (g.size() - 1)) % g.size();
        int k = 1 + (int)(rng() % 3);
        g[i] = g[i] + g[j].mul_scalar(QQ(k));
        auto gb = buchberger(g, lex);
        CHECK(gb.gens == ref.gens);
    }

    // membership soundness: inputs reduce to zero against the basis
    for (const auto& p : gens) CHECK(normal_form(p, ref.gens, lex).is_zero());
}

TEST_CASE("elimination examples") {
    VarSet vs({"t", "X0", "X1"});
    auto lex = MonomialOrder::lex(vs);

    auto gb = buchberger({pp("X0-t^2", vs), pp("X1-t^3", vs)}, lex);
    auto el = elimination_ideal(gb, {0});
    CHECK(same_set(el, {pp("X0^3-X1^2", vs)}));

    auto gb2 = buchberger({pp("X0-t", vs)}, lex);
    CHECK(elimination_ideal(gb2, {0}).empty());

    auto gb3 = buchberger({pp("X0-t", vs), pp("X1-t", vs)}, lex);
    CHECK(same_set(elimination_ideal(gb3, {0}), {pp("X0-X1", vs)}));
}

TEST_CASE("relations_ideal examples and soundness") {
    VarSet vt({"t"});
    Rat t = Rat::variable(vt, 0);

    SUBCASE("twisted cubic") {
        auto rel = relations_ideal({t * t, t * t * t}, {0});
        REQUIRE(rel.gens.size() == 1);
        CHECK(rel.gens[0] == pp("X0^3-X1^2", rel.ring));
        // soundness by resubstitution (t is carried as an eliminated ring var)
        VarSet ext = rel.ring;
        REQUIRE(ext.index_of("t").has_value());
        Rat te = Rat::variable(ext, ext.require("t"));
        std::map<size_t, Rat> sub;
        sub[rel.x_vars[0]] = te * te;
        sub[rel.x_vars[1]] = te * te * te;
        CHECK(Rat::from_poly(rel.gens[0]).substitute(sub).is_zero());
    }

    SUBCASE("linear relation with a parameter") {
        VarSet vtc({"t", "c"});
        Rat tt = Rat::variable(vtc, 0), c = Rat::variable(vtc, 1);
        auto rel = relations_ideal({tt, tt + c}, {0});
        REQUIRE(rel.gens.size() == 1);
        // monic form of X1 - X0 - c under lex X0 > X1 > c
        CHECK(rel.gens[0] == pp("X0-X1+c", rel.ring));
    }

    SUBCASE("single map has no relation") {
        auto rel = relations_ideal({t}, {0});
        CHECK(rel.gens.empty());
    }
}
