#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diffinv/error.hpp"
#include "diffinv/expr_io.hpp"
#include "diffinv/rat.hpp"

using namespace diffinv;

namespace {

const VarSet XY({"x1", "x2", "y"});

Rat rx(const std::string& s) { return parse_expr(s, XY); }

// Random small rational function generator for property tests.
struct Rng {
    std::mt19937 g;
    explicit Rng(unsigned seed) : g(seed) {}
    int num(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

    Poly poly(const VarSet& vs, int tries = 4) {
        Poly p(vs);
        for (int t = 0; t < tries; ++t) {
            Exp e(vs.size(), 0);
            for (auto& x : e) x = (unsigned)num(0, 2);
            p.add_term(e, QQ(num(-4, 4)));
        }
        return p;
    }
    Rat rat(const VarSet& vs) {
        Poly d(vs);
        while (d.is_zero()) d = poly(vs, 2);
        return Rat::make(poly(vs), d);
    }
};

} // namespace

TEST_CASE("parse: direct reading") {
    Rat r = rx("x1^2 + 2*x1*x2");
    CHECK(r.is_poly());
    CHECK(r.num().term_count() == 2);
    CHECK(r == rx("x1*x1 + x2*x1 + x1*x2"));
}

TEST_CASE("parse: cancellation to zero") {
    CHECK(rx("1/(x1*x2) - 1/(x1*x2)").is_zero());
}

TEST_CASE("parse: gcd cancellation (long division oracle)") {
    // (x1^2-1)/(x1-1) = x1+1, checked by hand long division
    CHECK(rx("(x1^2-1)/(x1-1)") == rx("x1 + 1"));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(rx("x1 +"), parse_error);
    CHECK_THROWS_AS(rx("q + 1"), parse_error);
    CHECK_THROWS_AS(rx("(x1"), parse_error);
    CHECK_THROWS_AS(rx("x1/0"), parse_error);
    CHECK_THROWS_AS(rx("x1/(x2 - x2)"), parse_error);
    CHECK_THROWS_AS(rx("x1^x2"), parse_error);
    try {
        rx("x1 + qq");
    } catch (const parse_error& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("derivative basics") {
    size_t x1 = 0, y = 2;
    CHECK(rx("x1^2*x2").derivative(x1) == rx("2*x1*x2"));
    CHECK(rx("1/x1").derivative(x1) == rx("-1/x1^2"));
    CHECK(rx("x1 + x2").derivative(y).is_zero());
}

TEST_CASE("substitute") {
    size_t y = 2;
    CHECK(rx("y^2").substitute({{y, rx("x1+1")}}) == rx("x1^2 + 2*x1 + 1"));
    CHECK_THROWS_AS(rx("1/y").substitute({{y, Rat(XY)}}), pole_error);

    // renaming into an extended variable set
    VarSet XYF = XY.extended({"f"});
    Rat sub = rx("x2*y").substitute({{y, Rat::variable(XYF, 3)}});
    CHECK(sub == parse_expr("x2*f", XYF));
}

TEST_CASE("eval_at") {
    CHECK(rx("x1^2 + x2").eval({QQ(2), QQ(3), QQ(0)}) == QQ(7));
    CHECK_THROWS_AS(rx("1/x1").eval({QQ(0), QQ(1), QQ(0)}), pole_error);
    // canonical form of (x1^2-1)/(x1-1) is x1+1: no pole at x1=1
    CHECK(rx("(x1^2-1)/(x1-1)").eval({QQ(1), QQ(0), QQ(0)}) == QQ(2));
}

TEST_CASE("field axioms on random samples") {
    Rng rng(12345);
    for (int i = 0; i < 100; ++i) {
        Rat a = rng.rat(XY), b = rng.rat(XY), c = rng.rat(XY);
        CHECK(((a + b) * c - (a * c + b * c)).is_zero());
        if (!a.is_zero()) CHECK((a / a).is_one());
        CHECK((a * b) == (b * a));
        CHECK(((a + b) + c) == (a + (b + c)));
    }
}

TEST_CASE("derivative is a derivation") {
    Rng rng(777);
    for (int i = 0; i < 100; ++i) {
        Rat a = rng.rat(XY), b = rng.rat(XY);
        size_t v = (size_t)rng.num(0, 2);
        CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
    }
}

TEST_CASE("partials commute") {
    Rng rng(999);
    for (int i = 0; i < 100; ++i) {
        Rat a = rng.rat(XY);
        CHECK(a.derivative(0).derivative(1) == a.derivative(1).derivative(0));
    }
}

TEST_CASE("parse after print is the identity") {
    Rng rng(4242);
    for (int i = 0; i < 50; ++i) {
        Rat a = rng.rat(XY);
        CHECK(parse_expr(to_string(a), XY) == a);
    }
    CHECK(to_string(rx("0")) == "0");
    CHECK(parse_expr(to_string(rx("-x1 - 1/2")), XY) == rx("-x1 - 1/2"));
}

TEST_CASE("equality consistent with evaluation and cross-multiplication") {
    Rng rng(31337);
    std::mt19937 pg(5);
    for (int i = 0; i < 20; ++i) {
        Rat a = rng.rat(XY), b = rng.rat(XY);
        // cross-multiplication oracle for equality
        bool eq_cross = (a.num() * b.den() - b.num() * a.den()).is_zero();
        CHECK((a == b) == eq_cross);
        // equal values at random non-pole points
        Rat d = a - b;
        for (int k = 0; k < 20; ++k) {
            std::vector<QQ> pt;
            for (int j = 0; j < 3; ++j)
                pt.push_back(QQ(std::uniform_int_distribution<int>(1, 50)(pg)));
            try {
                QQ va = a.eval(pt), vb = b.eval(pt);
                if (a == b) CHECK(va == vb);
                CHECK(d.eval(pt) == va - vb);
            } catch (const pole_error&) {
                // skip pole points
            }
        }
    }
}
