#include <catch_amalgamated.hpp>

#include <random>

#include "polysmith/groebner.hpp"
#include "polysmith/linalg.hpp"
#include "polysmith/parse.hpp"

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

// checks basis[k] = sum_j cofactors[k][j] * generators[j] exactly
template <class F>
void check_cofactor_identity(const GroebnerBasis<F>& gb) {
    for (std::size_t k = 0; k < gb.basis.size(); ++k) {
        Poly<F> acc(gb.basis[k].field(), gb.basis[k].vars());
        for (std::size_t j = 0; j < gb.generators.size(); ++j)
            acc = acc + gb.cofactors[k][j] * gb.generators[j];
        CHECK(acc == gb.basis[k]);
    }
}

// every S-polynomial of basis pairs reduces to zero
template <class F>
void check_spolys_reduce(const GroebnerBasis<F>& gb) {
    const auto& ord = gb.order;
    for (std::size_t i = 0; i < gb.basis.size(); ++i)
        for (std::size_t j = i + 1; j < gb.basis.size(); ++j) {
            auto [mi, ci] = leading_term(gb.basis[i], ord);
            auto [mj, cj] = leading_term(gb.basis[j], ord);
            Monomial l = mi.lcm(mj);
            const auto& field = gb.basis[i].field();
            auto s = gb.basis[i].mul_term(l.div(mi), field.inv(ci)) -
                     gb.basis[j].mul_term(l.div(mj), field.inv(cj));
            CHECK(normal_form(s, gb).is_zero());
        }
}

}  // namespace

TEST_CASE("groebner basis of simple ideals") {
    TermOrder ord;
    auto gb1 = buchberger_with_lift<RationalField>({qp("x1")}, ord);
    REQUIRE(gb1.basis.size() == 1);
    CHECK(gb1.basis[0] == qp("x1"));
    CHECK(gb1.cofactors[0][0] == qp("1"));

    auto gb2 = buchberger_with_lift<RationalField>({qp("x1"), qp("x2")}, TermOrder(OrderKind::lex));
    REQUIRE(gb2.basis.size() == 2);
    CHECK(gb2.basis[0] == qp("x2"));
    CHECK(gb2.basis[1] == qp("x1"));
    check_cofactor_identity(gb2);
}

TEST_CASE("unit ideal detection with certified combination") {
    TermOrder ord;
    auto gb = buchberger_with_lift<RationalField>({qp("x1*x2 - 1"), qp("x1^2")}, ord);
    REQUIRE(gb.is_unit());
    check_cofactor_identity(gb);

    CHECK(is_unit_ideal<RationalField>({qp("x1"), qp("x1 + 1")}, ord));
    CHECK_FALSE(is_unit_ideal<RationalField>({qp("x1"), qp("x2")}, ord));
    CHECK(is_unit_ideal<RationalField>({qp("1")}, ord));
}

TEST_CASE("unit combinations expand to one") {
    TermOrder ord;
    auto c1 = unit_combination<RationalField>({qp("x2"), qp("x1*x2 + 1")}, ord);
    auto one = qp("x2") * c1[0] + qp("x1*x2 + 1") * c1[1];
    CHECK(one.is_one());

    auto c2 = unit_combination<RationalField>({qp("x1"), qp("1 - x1")}, ord);
    CHECK((qp("x1") * c2[0] + qp("1 - x1") * c2[1]).is_one());

    CHECK_THROWS_AS(unit_combination<RationalField>({qp("x1"), qp("x2")}, ord),
                    NotUnitIdealError);
}

TEST_CASE("normal form basics") {
    TermOrder ord;
    auto gb = buchberger_with_lift<RationalField>({qp("x1")}, ord);
    CHECK(normal_form(qp("x1^2"), gb).is_zero());
    CHECK(normal_form(qp("x2"), gb) == qp("x2"));
    // idempotence
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10; ++i) {
        auto f = random_poly(rng, vars2(), 3, 4);
        auto nf = normal_form(f, gb);
        CHECK(normal_form(nf, gb) == nf);
    }
}

TEST_CASE("random unimodular triples yield verified combinations") {
    TermOrder ord;
    std::mt19937_64 rng(404);
    int done = 0;
    while (done < 10) {
        // construct gens with a known combination: g3 = 1 - a*g1 - b*g2
        auto g1 = random_poly(rng, vars2(), 2, 2);
        auto g2 = random_poly(rng, vars2(), 2, 2);
        auto a = random_poly(rng, vars2(), 1, 2);
        auto b = random_poly(rng, vars2(), 1, 2);
        auto g3 = qp("1") - a * g1 - b * g2;
        if (g3.is_zero()) continue;
        ++done;
        auto cs = unit_combination<RationalField>({g1, g2, g3}, ord);
        auto sum = g1 * cs[0] + g2 * cs[1] + g3 * cs[2];
        CHECK(sum.is_one());
    }
}

TEST_CASE("S-polynomials of computed bases reduce to zero") {
    TermOrder ord;
    std::mt19937_64 rng(2718);
    for (int i = 0; i < 15; ++i) {
        std::vector<Poly<RationalField>> gens;
        int k = 2 + static_cast<int>(rng() % 2);
        for (int j = 0; j < k; ++j) gens.push_back(random_poly(rng, vars3(), 3, 3));
        bool all_zero = true;
        for (const auto& g : gens) all_zero &= g.is_zero();
        if (all_zero) continue;
        auto gb = buchberger_with_lift(gens, ord);
        check_spolys_reduce(gb);
        check_cofactor_identity(gb);
    }
}

TEST_CASE("membership agrees with the bounded Macaulay oracle") {
    TermOrder ord;
    std::mt19937_64 rng(31337);
    const std::int64_t cap = 4;
    int ideals_done = 0;
    while (ideals_done < 30) {
        std::vector<Poly<RationalField>> gens;
        int k = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < k; ++j) gens.push_back(random_poly(rng, vars2(), 2, 2));
        bool any = false;
        for (const auto& g : gens) any |= !g.is_zero();
        if (!any) continue;
        ++ideals_done;
        auto gb = buchberger_with_lift(gens, ord);

        // member built inside the degree cap: both must say yes
        std::vector<Poly<RationalField>> hs;
        auto f = Poly<RationalField>::zero(Q, vars2());
        for (const auto& g : gens) {
            auto h = random_poly(rng, vars2(), 1, 2);
            f = f + h * g;
        }
        if (f.total_degree() <= cap) {
            CHECK(ideal_contains(gb, f));
            std::vector<std::int64_t> caps;
            for (const auto& g : gens)
                caps.push_back(g.is_zero() ? cap : cap - g.total_degree());
            auto sol = bounded_combination(gens, f, caps);
            REQUIRE(sol.has_value());
            auto sum = Poly<RationalField>::zero(Q, vars2());
            for (std::size_t j = 0; j < gens.size(); ++j) sum = sum + (*sol)[j] * gens[j];
            CHECK(sum == f);
        }

        // random query: oracle feasibility implies membership, and
        // non-membership implies oracle infeasibility
        auto g0 = random_poly(rng, vars2(), 2, 3);
        std::vector<std::int64_t> caps;
        for (const auto& g : gens) caps.push_back(g.is_zero() ? cap : cap - g.total_degree());
        auto sol = bounded_combination(gens, g0, caps);
        bool member = ideal_contains(gb, g0);
        if (sol) {
            CHECK(member);
        }
        if (!member) {
            CHECK(!sol);
        }
    }
}

TEST_CASE("unit ideal status is invariant under scaling and redundancy") {
    TermOrder ord;
    std::mt19937_64 rng(515);
    for (int i = 0; i < 10; ++i) {
        auto g1 = random_poly(rng, vars2(), 2, 2);
        auto g2 = random_poly(rng, vars2(), 2, 2);
        if (g1.is_zero() && g2.is_zero()) continue;
        bool u = is_unit_ideal<RationalField>({g1, g2}, ord);
        CHECK(is_unit_ideal<RationalField>({g1.scaled(Q.from_long(-3)), g2}, ord) == u);
        auto redundant = g1 * random_poly(rng, vars2(), 1, 2) + g2;
        CHECK(is_unit_ideal<RationalField>({g1, g2, redundant}, ord) == u);
    }
}

TEST_CASE("budget exceeded surfaces as an error") {
    TermOrder ord;
    GroebnerConfig cfg;
    cfg.max_reductions = 1;
    CHECK_THROWS_AS(
        buchberger_with_lift<RationalField>(
            {qp("x1^3*x2 - 2*x1*x2 + 1", vars3()), qp("x2^3*x3 - x1 - 1", vars3()),
             qp("x1*x2*x3 - x3^2 - 2", vars3())},
            ord, cfg),
        BudgetExceededError);
}

TEST_CASE("groebner over a prime field") {
    PrimeField f7(7);
    auto vs = vars2();
    TermOrder ord;
    auto a = parse("x1*x2 + 3", vs, f7);
    auto b = parse("x1^2 + x2", vs, f7);
    auto gb = buchberger_with_lift<PrimeField>({a, b}, ord);
    check_cofactor_identity(gb);
    check_spolys_reduce(gb);
}
