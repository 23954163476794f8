#include <catch_amalgamated.hpp>

#include <random>

#include "polysmith/matrix.hpp"
#include "polysmith/parse.hpp"

using namespace polysmith;

namespace {

const RationalField Q;

VarSetPtr vars2() {
    static VarSetPtr v = VarSet::make({"x1", "x2"});
    return v;
}

Poly<RationalField> qp(const std::string& s, VarSetPtr vs = vars2()) {
    return parse(s, vs, Q);
}

PolyMat<RationalField> mat2(const std::string& a, const std::string& b, const std::string& c,
                            const std::string& d) {
    PolyMat<RationalField> m(Q, vars2(), 2, 2);
    m.at(0, 0) = qp(a);
    m.at(0, 1) = qp(b);
    m.at(1, 0) = qp(c);
    m.at(1, 1) = qp(d);
    return m;
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

PolyMat<RationalField> random_mat(std::mt19937_64& rng, VarSetPtr vs, std::size_t n, int deg) {
    PolyMat<RationalField> m(Q, vs, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = random_poly(rng, vs, deg, 3);
    return m;
}

// independent determinant oracle: Laplace expansion along the first row
Poly<RationalField> cofactor_det(const PolyMat<RationalField>& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m.at(0, 0);
    Poly<RationalField> acc(Q, m.vars());
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        std::vector<std::size_t> ri, ci;
        for (std::size_t i = 1; i < n; ++i) ri.push_back(i);
        for (std::size_t c = 0; c < n; ++c)
            if (c != j) ci.push_back(c);
        auto minor = cofactor_det(m.submatrix(ri, ci));
        auto term = m.at(0, j) * minor;
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// random unimodular matrix as a product of elementary transvections
PolyMat<RationalField> random_unimodular(std::mt19937_64& rng, VarSetPtr vs, std::size_t n,
                                         int factors, int deg) {
    auto u = PolyMat<RationalField>::identity(Q, vs, n);
    for (int f = 0; f < factors; ++f) {
        std::size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        auto e = PolyMat<RationalField>::identity(Q, vs, n);
        e.at(i, j) = random_poly(rng, vs, deg, 2);
        u = u * e;
    }
    return u;
}

}  // namespace

TEST_CASE("determinant examples") {
    CHECK(determinant(mat2("x1", "x2", "0", "x1")) == qp("x1^2"));
    CHECK(determinant(PolyMat<RationalField>::identity(Q, vars2(), 3)) == qp("1"));
    PolyMat<RationalField> nonsquare(Q, vars2(), 2, 3);
    CHECK_THROWS_AS(determinant(nonsquare), NotSquareError);
}

TEST_CASE("determinant agrees with cofactor expansion on random matrices") {
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 12; ++i) {
        auto m = random_mat(rng, vars2(), 3, 2);
        CHECK(determinant(m) == cofactor_det(m));
    }
}

TEST_CASE("determinant is multiplicative") {
    std::mt19937_64 rng(1002);
    for (int i = 0; i < 8; ++i) {
        auto a = random_mat(rng, vars2(), 2, 2);
        auto b = random_mat(rng, vars2(), 2, 2);
        CHECK(determinant(a * b) == determinant(a) * determinant(b));
    }
}

TEST_CASE("rank over the fraction field") {
    PolyMat<RationalField> z(Q, vars2(), 2, 3);
    CHECK(rank(z) == 0);
    CHECK(rank(PolyMat<RationalField>::identity(Q, vars2(), 3)) == 3);

    // outer product has rank 1
    std::mt19937_64 rng(7);
    for (int t = 0; t < 8; ++t) {
        auto c1 = random_poly(rng, vars2(), 2, 2);
        auto c2 = random_poly(rng, vars2(), 2, 2);
        auto r1 = random_poly(rng, vars2(), 2, 2);
        auto r2 = random_poly(rng, vars2(), 2, 2);
        PolyMat<RationalField> m(Q, vars2(), 2, 2);
        m.at(0, 0) = c1 * r1;
        m.at(0, 1) = c1 * r2;
        m.at(1, 0) = c2 * r1;
        m.at(1, 1) = c2 * r2;
        if (m.is_zero()) continue;
        CHECK(rank(m) == 1);
    }
}

TEST_CASE("minor reports") {
    auto f = mat2("x1", "x2", "0", "x1");
    auto rep = minor_report(f, 1);
    REQUIRE(rep.minor_list.size() == 4);
    CHECK(rep.minor_list[0] == qp("x1"));
    CHECK(rep.minor_list[1] == qp("x2"));
    CHECK(rep.minor_list[2] == qp("0"));
    CHECK(rep.minor_list[3] == qp("x1"));
    CHECK(rep.d.is_one());
    CHECK(rep.reduced == rep.minor_list);
    CHECK_FALSE(rep.unit_J);

    auto d2 = minor_report(f, 2);
    CHECK(d2.d == qp("x1^2"));
    CHECK(d2.unit_J);

    // diag(p, p) with p = x1
    auto g = mat2("x1", "0", "0", "x1");
    auto rep1 = minor_report(g, 1);
    CHECK(rep1.d == qp("x1"));
    REQUIRE(rep1.reduced.size() == 4);
    CHECK(rep1.reduced[0].is_one());
    CHECK(rep1.reduced[1].is_zero());
    CHECK(rep1.reduced[2].is_zero());
    CHECK(rep1.reduced[3].is_one());
    CHECK(rep1.unit_J);
    CHECK_FALSE(rep1.unit_I);

    PolyMat<RationalField> m3(Q, vars2(), 3, 3);
    CHECK(minors(PolyMat<RationalField>::identity(Q, vars2(), 3), 2).size() == 9);
    CHECK_THROWS_AS(minor_report(m3, 4), OrderOutOfRangeError);
}

TEST_CASE("every minor equals d_i times its reduced minor") {
    std::mt19937_64 rng(9090);
    for (int t = 0; t < 10; ++t) {
        auto m = random_mat(rng, vars2(), 3, 1);
        for (std::size_t i = 1; i <= 3; ++i) {
            auto rep = minor_report(m, i);
            if (rep.d.is_zero()) continue;
            for (std::size_t j = 0; j < rep.minor_list.size(); ++j)
                CHECK(rep.minor_list[j] == rep.d * rep.reduced[j]);
        }
    }
}

TEST_CASE("divisibility chain of determinantal divisors") {
    std::mt19937_64 rng(4444);
    for (int t = 0; t < 10; ++t) {
        auto m = random_mat(rng, vars2(), 3, 1);
        auto data = smith_form(m);
        for (std::size_t i = 1; i < data.d.size(); ++i)
            CHECK_NOTHROW(exact_div(data.d[i], data.d[i - 1]));
    }
}

TEST_CASE("smith form data") {
    auto f = mat2("x1", "x2", "0", "x1");
    auto p = qp("x1");
    auto data = smith_form(f, TermOrder(), &p);
    CHECK(data.rank == 2);
    REQUIRE(data.invariant_factors.size() == 2);
    CHECK(data.invariant_factors[0].is_one());
    CHECK(data.invariant_factors[1] == qp("x1^2"));
    REQUIRE(data.exponents.size() == 2);
    CHECK(data.exponents[0] == 0);
    CHECK(data.exponents[1] == 2);

    auto g = mat2("1", "0", "0", "x1");
    auto d2 = smith_form(g);
    CHECK(d2.invariant_factors[0].is_one());
    CHECK(d2.invariant_factors[1] == qp("x1"));
}

TEST_CASE("smith data is invariant under unimodular transforms") {
    std::mt19937_64 rng(606);
    auto p = qp("x1");
    for (int t = 0; t < 6; ++t) {
        auto u = random_unimodular(rng, vars2(), 2, 3, 1);
        auto v = random_unimodular(rng, vars2(), 2, 3, 1);
        PolyMat<RationalField> s(Q, vars2(), 2, 2);
        s.at(0, 0) = qp("x1");
        s.at(1, 1) = qp("x1^2");
        auto f = u * s * v;
        auto data = smith_form(f, TermOrder(), &p);
        REQUIRE(data.rank == 2);
        CHECK(data.invariant_factors[0] == qp("x1"));
        CHECK(data.invariant_factors[1] == qp("x1^2"));
        REQUIRE(data.exponents.size() == 2);
        CHECK(data.exponents[0] == 1);
        CHECK(data.exponents[1] == 2);
    }
}

TEST_CASE("unimodularity") {
    CHECK(is_unimodular(PolyMat<RationalField>::identity(Q, vars2(), 2)));
    CHECK(is_unimodular(mat2("1", "x1", "0", "1")));
    CHECK_FALSE(is_unimodular(mat2("1", "0", "0", "x1")));
    PolyMat<RationalField> nonsquare(Q, vars2(), 2, 3);
    CHECK_THROWS_AS(is_unimodular(nonsquare), NotSquareError);
}

TEST_CASE("unimodular inverse is exact") {
    std::mt19937_64 rng(321);
    for (int t = 0; t < 6; ++t) {
        auto u = random_unimodular(rng, vars2(), 3, 4, 1);
        auto inv = inverse_unimodular(u);
        CHECK(u * inv == PolyMat<RationalField>::identity(Q, vars2(), 3));
    }
}

TEST_CASE("certificate verification") {
    auto p = qp("x1^2 + 1");
    PolyMat<RationalField> f(Q, vars2(), 2, 2);
    f.at(0, 0) = qp("1");
    f.at(1, 1) = p;
    auto id = PolyMat<RationalField>::identity(Q, vars2(), 2);
    EquivCertificate<RationalField> cert{id, id, f};
    CHECK(verify_certificate(f, cert));

    // non-constant det(U) fails regardless of the product
    auto bad_u = mat2("x1", "0", "0", "1");
    EquivCertificate<RationalField> bad{bad_u, id, bad_u * f};
    auto rep = verify_certificate_report(f, bad);
    CHECK_FALSE(rep.ok);
    CHECK(rep.reason == "U not unimodular");

    // tampered entry reports the product mismatch
    auto s = f;
    s.at(0, 1) = qp("1");
    EquivCertificate<RationalField> tampered{id, id, s};
    auto rep2 = verify_certificate_report(f, tampered);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.reason == "product mismatch at (1,2)");
}

TEST_CASE("kernel vectors over A annihilate exactly") {
    std::mt19937_64 rng(5150);
    for (int t = 0; t < 6; ++t) {
        // 2x3 of rank <= 2 always has a right kernel vector
        PolyMat<RationalField> m(Q, vars2(), 2, 3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = random_poly(rng, vars2(), 2, 2);
        auto ker = kernel_vectors(m, KernelSide::right);
        CHECK(ker.size() == 3 - rank(m));
        for (const auto& w : ker)
            for (std::size_t i = 0; i < 2; ++i) {
                auto dot = m.at(i, 0) * w[0] + m.at(i, 1) * w[1] + m.at(i, 2) * w[2];
                CHECK(dot.is_zero());
            }
    }
}
