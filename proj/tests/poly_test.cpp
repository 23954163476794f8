#include <catch_amalgamated.hpp>

#include <random>

#include "polysmith/gcd.hpp"
#include "polysmith/parse.hpp"
#include "polysmith/poly.hpp"

using namespace polysmith;

namespace {

const RationalField Q;

VarSetPtr vars2() {
    static VarSetPtr v = VarSet::make({"x1", "x2"});
    return v;
}
VarSetPtr vars3() {
    static VarSetPtr v = VarSet::make({"x1", "x2", "x3"});
    return v;
}

Poly<RationalField> qp(const std::string& s, VarSetPtr vs = vars2()) {
    return parse(s, vs, Q);
}

// deterministic random polynomial: up to `terms` terms of total degree <= deg
Poly<RationalField> random_poly(std::mt19937_64& rng, VarSetPtr vs, int deg, int terms) {
    Poly<RationalField> f(Q, vs);
    std::size_t n = vs->size();
    int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(terms));
    for (int t = 0; t < count; ++t) {
        std::vector<std::int64_t> e(n, 0);
        int budget = static_cast<int>(rng() % static_cast<unsigned>(deg + 1));
        for (int b = 0; b < budget; ++b) e[rng() % n] += 1;
        long c = static_cast<long>(rng() % 7) - 3;
        f.add_term(Monomial(e), Q.from_long(c));
    }
    return f;
}

}  // namespace

TEST_CASE("parse produces canonical terms") {
    auto f = qp("x1^2 - 2*x2");
    REQUIRE(f.term_count() == 2);
    auto it = f.terms().begin();
    CHECK(it->first == Monomial({0, 1}));
    CHECK(it->second == mpq_class(-2));
    ++it;
    CHECK(it->first == Monomial({2, 0}));
    CHECK(it->second == mpq_class(1));
}

TEST_CASE("parse of zero") {
    CHECK(qp("0").is_zero());
    CHECK(qp("x1 - x1").is_zero());
}

TEST_CASE("parse rejects unknown variables and bad syntax") {
    CHECK_THROWS_AS(qp("x3"), UnknownVariableError);
    CHECK_THROWS_AS(qp("2x1"), SyntaxError);
    CHECK_THROWS_AS(qp("x1 +"), SyntaxError);
    CHECK_THROWS_AS(qp("(x1"), SyntaxError);
    CHECK_THROWS_AS(qp("x1^-2"), SyntaxError);
    CHECK_THROWS_AS(qp("1/0"), DivisionByZeroError);
}

TEST_CASE("parse handles parens, unary minus, rational literals") {
    CHECK(qp("-(x1 - x2)") == qp("x2 - x1"));
    CHECK(qp("(x1 + 1)^2") == qp("x1^2 + 2*x1 + 1"));
    CHECK(qp("3/2*x1 - 1/2*x1") == qp("x1"));
    CHECK(qp("- x1") == -qp("x1"));
}

TEST_CASE("ring arithmetic basics") {
    CHECK((qp("x1") + qp("-x1")).is_zero());
    CHECK(qp("x1 + x2") * qp("x1 - x2") == qp("x1^2 - x2^2"));
    CHECK(qp("x1 + 1").pow(0) == qp("1"));
    CHECK(qp("x1 + 1").pow(3) == qp("x1^3 + 3*x1^2 + 3*x1 + 1"));
}

TEST_CASE("mixed contexts are rejected") {
    auto f = qp("x1");
    auto g = parse("x1", vars3(), Q);
    CHECK_THROWS_AS(f + g, MixedContextError);
    PrimeField f7(7);
    auto h = parse("x1", vars2(), f7);
    // different coefficient fields cannot even meet at compile time; VarSet
    // mismatch is the runtime half of the check
    CHECK(h.term_count() == 1);
}

TEST_CASE("exact division") {
    CHECK(exact_div(qp("x1^2*x2"), qp("x1")) == qp("x1*x2"));
    CHECK_THROWS_AS(exact_div(qp("x1 + x2"), qp("x1")), NotDivisibleError);
    CHECK_THROWS_AS(exact_div(qp("x1"), qp("0")), DivisionByZeroError);
    CHECK(exact_div(qp("0"), qp("x1")).is_zero());
}

TEST_CASE("exact division recovers factors (oracle: multiplication)") {
    std::mt19937_64 rng(12345);
    int done = 0;
    while (done < 50) {
        auto f = random_poly(rng, vars2(), 3, 3);
        auto g = random_poly(rng, vars2(), 3, 3);
        if (f.is_zero() || g.is_zero()) continue;
        ++done;
        CHECK(exact_div(f * g, g) == f);
    }
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 40; ++i) {
        auto a = random_poly(rng, vars3(), 2, 3);
        auto b = random_poly(rng, vars3(), 2, 3);
        auto c = random_poly(rng, vars3(), 2, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("gcd basics") {
    CHECK(gcd(qp("x1*x2"), qp("x1^2")) == qp("x1"));
    CHECK(gcd(qp("x1"), qp("x2")) == qp("1"));
    CHECK(gcd(qp("0"), qp("0")).is_zero());
    CHECK(gcd(qp("0"), qp("2*x1")) == qp("x1"));  // normalized
    CHECK(gcd(qp("6"), qp("4")) == qp("1"));
}

TEST_CASE("gcd multiply-and-recover oracle") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 50) {
        auto h = random_poly(rng, vars2(), 2, 2);
        auto f = random_poly(rng, vars2(), 2, 2);
        auto g = random_poly(rng, vars2(), 2, 2);
        if (h.is_zero() || f.is_zero() || g.is_zero()) continue;
        ++done;
        auto lhs = gcd(h * f, h * g);
        auto rhs = normalize(h * gcd(f, g), TermOrder());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("gcd is symmetric and idempotent; cofactors are coprime") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 25; ++i) {
        auto f = random_poly(rng, vars2(), 3, 3);
        auto g = random_poly(rng, vars2(), 3, 3);
        auto d = gcd(f, g);
        CHECK(d == gcd(g, f));
        CHECK(gcd(d, d) == d);
        if (!d.is_zero() && !f.is_zero() && !g.is_zero()) {
            auto cf = exact_div(f, d);
            auto cg = exact_div(g, d);
            CHECK(gcd(cf, cg).is_one());
        }
    }
}

TEST_CASE("substitute") {
    auto vs = vars3();
    auto f = parse("x1*x2", vs, Q);
    std::vector<Poly<RationalField>> images = {
        Poly<RationalField>::variable(Q, vs, 0),
        parse("x2 + x3^2", vs, Q),
        Poly<RationalField>::variable(Q, vs, 2),
    };
    CHECK(substitute(f, images) == parse("x1*x2 + x1*x3^2", vs, Q));

    std::vector<Poly<RationalField>> id = {
        Poly<RationalField>::variable(Q, vs, 0),
        Poly<RationalField>::variable(Q, vs, 1),
        Poly<RationalField>::variable(Q, vs, 2),
    };
    auto g = parse("x1^3 - 2*x2*x3 + 5", vs, Q);
    CHECK(substitute(g, id) == g);
}

TEST_CASE("substitute is a ring homomorphism") {
    auto vs = vars3();
    std::vector<Poly<RationalField>> theta = {
        Poly<RationalField>::variable(Q, vs, 0),
        parse("x2 + x3^2", vs, Q),
        Poly<RationalField>::variable(Q, vs, 2),
    };
    std::mt19937_64 rng(31415);
    for (int i = 0; i < 20; ++i) {
        auto f = random_poly(rng, vs, 2, 3);
        auto g = random_poly(rng, vs, 2, 3);
        CHECK(substitute(f * g, theta) == substitute(f, theta) * substitute(g, theta));
        CHECK(substitute(f + g, theta) == substitute(f, theta) + substitute(g, theta));
    }
}

TEST_CASE("leading terms and degrees") {
    TermOrder grevlex;
    auto f = qp("x1 + x2^2");
    auto [m, c] = leading_term(f, grevlex);
    CHECK(m == Monomial({0, 2}));
    CHECK(c == mpq_class(1));
    CHECK(degree_in(qp("x1^3*x2 + x2^4"), 0) == 3);
    CHECK(degree_in(qp("0"), 0) == -1);
    CHECK_THROWS_AS(leading_term(qp("0"), grevlex), ZeroPolynomialError);

    auto vs = vars3();
    auto g = parse("x1*x3^2 + x2*x3", vs, Q);
    CHECK(leading_coeff_in(g, 2) == parse("x1", vs, Q));
}

TEST_CASE("term orders") {
    TermOrder grevlex;
    TermOrder lex(OrderKind::lex);
    // grevlex on 3 vars: x2^2 > x1*x3
    Monomial a({1, 0, 1}), b({0, 2, 0});
    CHECK(grevlex.less(a, b));
    // lex: x1^2 > x1*x2^3
    Monomial c({2, 0, 0}), d({1, 3, 0});
    CHECK(lex.less(d, c));
    // 1 is minimal under both
    Monomial one({0, 0, 0});
    CHECK(grevlex.less(one, a));
    CHECK(lex.less(one, a));
}

TEST_CASE("render/parse round trip is a fixed point") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 30; ++i) {
        auto f = random_poly(rng, vars3(), 3, 4);
        std::string s = render(f);
        auto g = parse(s, vars3(), Q);
        CHECK(f == g);
        CHECK(render(g) == s);
    }
    CHECK(render(qp("0")) == "0");
    CHECK(render(qp("-x1")) == "-x1");
    CHECK(render(qp("x1^2 - 2*x2")) == "x1^2 - 2*x2");
    CHECK(render(qp("1/2*x1 + 1")) == "1/2*x1 + 1");
}

TEST_CASE("prime field arithmetic and parsing") {
    PrimeField f7(7);
    auto vs = vars2();
    auto f = parse("5*x1 + 3", vs, f7);
    auto g = parse("3*x1 + 5", vs, f7);
    CHECK(f + g == parse("x1 + 1", vs, f7));
    CHECK(parse("3/2", vs, f7) == parse("5", vs, f7));  // 2^{-1} = 4, 3*4 = 12 = 5
    auto h = parse("x1 + 1", vs, f7);
    CHECK(h.pow(7) == parse("x1^7 + 1", vs, f7));  // Frobenius
    std::string s = render(f);
    CHECK(parse(s, vs, f7) == f);
}

TEST_CASE("exponent overflow is a hard error") {
    CHECK_THROWS_AS(qp("x1^100000000").pow(100000000), ExponentOverflowError);
}
