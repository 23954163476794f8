#ifndef POLYSMITH_RESIDUE_HPP
#define POLYSMITH_RESIDUE_HPP

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "polysmith/gcd.hpp"
#include "polysmith/matrix.hpp"
#include "polysmith/poly.hpp"

namespace polysmith {

namespace uni {

// Dense univariate arithmetic over a field, used for residue-class elements
// and for the irreducibility tests. Vectors hold coefficients of x^0, x^1, ...
// with no trailing zeros.

template <class F>
using UPoly = std::vector<typename F::Elem>;

template <class F>
void trim(const F& field, UPoly<F>& a) {
    while (!a.empty() && field.is_zero(a.back())) a.pop_back();
}

template <class F>
UPoly<F> uadd(const F& field, const UPoly<F>& a, const UPoly<F>& b) {
    UPoly<F> r(std::max(a.size(), b.size()), field.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = field.add(r[i], b[i]);
    trim(field, r);
    return r;
}

template <class F>
UPoly<F> usub(const F& field, const UPoly<F>& a, const UPoly<F>& b) {
    UPoly<F> r(std::max(a.size(), b.size()), field.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = field.sub(r[i], b[i]);
    trim(field, r);
    return r;
}

template <class F>
UPoly<F> umul(const F& field, const UPoly<F>& a, const UPoly<F>& b) {
    if (a.empty() || b.empty()) return {};
    UPoly<F> r(a.size() + b.size() - 1, field.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = field.add(r[i + j], field.mul(a[i], b[j]));
    trim(field, r);
    return r;
}

template <class F>
UPoly<F> uscale(const F& field, const UPoly<F>& a, const typename F::Elem& c) {
    if (field.is_zero(c)) return {};
    UPoly<F> r = a;
    for (auto& x : r) x = field.mul(x, c);
    return r;
}

// remainder of a modulo monic-or-not b (field coefficients)
template <class F>
UPoly<F> urem(const F& field, UPoly<F> a, const UPoly<F>& b) {
    auto lb = b.back();
    auto lb_inv = field.inv(lb);
    while (a.size() >= b.size() && !a.empty()) {
        auto c = field.mul(a.back(), lb_inv);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = field.sub(a[shift + i], field.mul(c, b[i]));
        trim(field, a);
    }
    return a;
}

template <class F>
UPoly<F> ugcd(const F& field, UPoly<F> a, UPoly<F> b) {
    while (!b.empty()) {
        UPoly<F> r = urem(field, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && !field.is_one(a.back())) a = uscale(field, a, field.inv(a.back()));
    return a;
}

// extended gcd: returns (g, s) with s*a = g (mod m); g monic
template <class F>
std::pair<UPoly<F>, UPoly<F>> uegcd_mod(const F& field, const UPoly<F>& a, const UPoly<F>& m) {
    UPoly<F> r0 = m, r1 = a;
    UPoly<F> s0 = {}, s1 = {field.one()};
    while (!r1.empty()) {
        // divide r0 by r1
        UPoly<F> q;
        UPoly<F> rem = r0;
        auto l1 = r1.back();
        auto l1_inv = field.inv(l1);
        if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, field.zero());
        while (rem.size() >= r1.size() && !rem.empty()) {
            auto c = field.mul(rem.back(), l1_inv);
            std::size_t shift = rem.size() - r1.size();
            q[shift] = c;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] = field.sub(rem[shift + i], field.mul(c, r1[i]));
            trim(field, rem);
        }
        UPoly<F> s2 = usub(field, s0, umul(field, q, s1));
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (!r0.empty() && !field.is_one(r0.back())) {
        auto inv = field.inv(r0.back());
        r0 = uscale(field, r0, inv);
        s0 = uscale(field, s0, inv);
    }
    return {r0, s0};
}

template <class F>
UPoly<F> uderiv(const F& field, const UPoly<F>& a) {
    UPoly<F> r;
    for (std::size_t i = 1; i < a.size(); ++i)
        r.push_back(field.mul(a[i], field.from_long(static_cast<long>(i))));
    trim(field, r);
    return r;
}

}  // namespace uni

// --- modulus ---------------------------------------------------------------

enum class IrredStatus { certified, asserted };

struct IrredWitness {
    enum class Kind { certified, reducible, unknown } kind = Kind::unknown;
    long long prime = 0;  // valid when certified
};

// The univariate modulus p in the first variable: monic, squarefree, with an
// irreducibility status. Shared immutably by all residue-class values.
template <class F>
class ModulusP {
  public:
    Poly<F> p;                             // monic, univariate in variable 0
    std::vector<typename F::Elem> coeff;   // dense coefficients, coeff[deg] = 1
    std::int64_t deg = 0;
    IrredStatus status = IrredStatus::asserted;
    long long witness_prime = 0;

    explicit ModulusP(Poly<F> poly) : p(std::move(poly)) {}

    const F& base() const { return p.field(); }
    const VarSetPtr& vars() const { return p.vars(); }

    bool operator==(const ModulusP& o) const { return p == o.p; }
};

template <class F>
using ModulusPtr = std::shared_ptr<const ModulusP<F>>;

namespace detail {

// Rabin irreducibility test for a monic squarefree f over F_q.
inline bool irreducible_mod_q(const PrimeField& fq, const uni::UPoly<PrimeField>& f) {
    const std::size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    auto frobenius = [&](const uni::UPoly<PrimeField>& g) {
        // g^q mod f by square-and-multiply on the small exponent q
        uni::UPoly<PrimeField> r = {fq.one()};
        uni::UPoly<PrimeField> base = g;
        std::int64_t e = fq.q;
        while (e > 0) {
            if (e & 1) r = uni::urem(fq, uni::umul(fq, r, base), f);
            e >>= 1;
            if (e > 0) base = uni::urem(fq, uni::umul(fq, base, base), f);
        }
        return r;
    };
    uni::UPoly<PrimeField> x = {fq.zero(), fq.one()};
    // x^(q^k) mod f for k = 1..n
    std::vector<uni::UPoly<PrimeField>> xq(n + 1);
    xq[0] = x;
    for (std::size_t k = 1; k <= n; ++k) xq[k] = frobenius(xq[k - 1]);
    if (!(uni::usub(fq, xq[n], x).empty())) return false;
    for (std::size_t d = 2; d <= n; ++d) {
        if (n % d != 0) continue;
        bool prime_divisor = true;
        for (std::size_t e = 2; e * e <= d; ++e)
            if (d % e == 0) prime_divisor = false;
        if (!prime_divisor) continue;
        auto h = uni::usub(fq, xq[n / d], x);
        auto g = uni::ugcd(fq, f, h);
        if (g.size() != 1) return false;
    }
    return true;
}

inline const std::vector<long long>& witness_primes() {
    static const std::vector<long long> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                                  73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
    return primes;
}

}  // namespace detail

// Dense coefficient vector of a univariate-in-x1 polynomial.
template <class F>
std::vector<typename F::Elem> dense_univariate(const Poly<F>& p) {
    const F& field = p.field();
    std::int64_t d = degree_in(p, 0);
    std::vector<typename F::Elem> c(static_cast<std::size_t>(d + 1), field.zero());
    for (const auto& [m, v] : p.terms()) {
        for (std::size_t i = 1; i < m.nvars(); ++i)
            if (m.exp(i) > 0) throw ModulusError("modulus must be univariate in the first variable");
        c[static_cast<std::size_t>(m.exp(0))] = v;
    }
    return c;
}

// Modular certification: find a prime q where p stays squarefree of full
// degree and is irreducible over F_q; that certifies irreducibility over Q.
// Returns unknown when no prime in the table works (the caller may still
// proceed on the user's assertion).
inline IrredWitness irreducibility_witness_q(const Poly<RationalField>& p) {
    auto c = dense_univariate(p);
    if (c.size() <= 1) throw ConstantPolynomialError("modulus must have degree >= 1");
    // clear denominators, remove integer content
    mpz_class lcm_den = 1;
    for (const auto& x : c) lcm_den = lcm(lcm_den, x.get_den());
    std::vector<mpz_class> zc;
    for (const auto& x : c) zc.push_back(mpq_class(x * lcm_den).get_num());
    mpz_class content = 0;
    for (const auto& z : zc) content = gcd(content, z);
    for (auto& z : zc) z /= content;
    for (long long q : detail::witness_primes()) {
        PrimeField fq(q);
        const long ql = static_cast<long>(q);
        if (zc.back() % ql == 0) continue;  // degree drops
        uni::UPoly<PrimeField> f;
        for (const auto& z : zc) {
            mpz_class r = z % ql;
            if (r < 0) r += ql;
            f.push_back(static_cast<std::int64_t>(r.get_si()));
        }
        uni::trim(fq, f);
        // monic
        f = uni::uscale(fq, f, fq.inv(f.back()));
        auto d = uni::uderiv(fq, f);
        if (d.empty() || uni::ugcd(fq, f, d).size() != 1) continue;  // not squarefree mod q
        if (detail::irreducible_mod_q(fq, f)) return {IrredWitness::Kind::certified, q};
    }
    return {IrredWitness::Kind::unknown, 0};
}

inline IrredWitness irreducibility_witness_q(const Poly<PrimeField>& p) {
    auto c = dense_univariate(p);
    if (c.size() <= 1) throw ConstantPolynomialError("modulus must have degree >= 1");
    const PrimeField& fq = p.field();
    uni::UPoly<PrimeField> f = c;
    uni::trim(fq, f);
    f = uni::uscale(fq, f, fq.inv(f.back()));
    return detail::irreducible_mod_q(fq, f) ? IrredWitness{IrredWitness::Kind::certified, fq.q}
                                            : IrredWitness{IrredWitness::Kind::reducible, 0};
}

// Validate and normalize a modulus: univariate in x1, degree >= 1, squarefree,
// monic. Irreducibility is certified when a witness is found; otherwise the
// status records that the caller asserted it.
template <class F>
ModulusPtr<F> make_modulus(const Poly<F>& p_in, bool assert_irreducible = false) {
    const F& field = p_in.field();
    if (p_in.is_zero() || p_in.is_constant())
        throw ConstantPolynomialError("modulus must have degree >= 1");
    auto coeff = dense_univariate(p_in);  // also checks univariate
    // monic normalization
    Poly<F> p = p_in.scaled(field.inv(coeff.back()));
    coeff = dense_univariate(p);
    // squarefree: gcd(p, p') constant
    uni::UPoly<F> f = coeff;
    uni::trim(field, f);
    auto d = uni::uderiv(field, f);
    if (d.empty() || uni::ugcd(field, f, d).size() != 1)
        throw NotSquarefreeError("modulus is not squarefree, hence not irreducible");

    auto mod = std::make_shared<ModulusP<F>>(p);
    mod->coeff = coeff;
    mod->deg = static_cast<std::int64_t>(coeff.size()) - 1;
    IrredWitness w = irreducibility_witness_q(p);
    if (w.kind == IrredWitness::Kind::certified) {
        mod->status = IrredStatus::certified;
        mod->witness_prime = w.prime;
    } else if (w.kind == IrredWitness::Kind::reducible) {
        throw ModulusError("modulus is reducible over the base field");
    } else {
        // no witness found: trusted as asserted, flagged in downstream reports
        (void)assert_irreducible;
        mod->status = IrredStatus::asserted;
    }
    return mod;
}

// --- the residue extension field K[x1]/<p> ----------------------------------

// Field of residue classes. Elements are dense representative vectors of
// length deg(p) over the base field; every nonzero element is invertible when
// p is irreducible, and a failed inversion surfaces a reducible modulus.
template <class F>
struct ExtField {
    using Elem = std::vector<typename F::Elem>;

    ModulusPtr<F> mod;

    ExtField() = default;
    explicit ExtField(ModulusPtr<F> m) : mod(std::move(m)) {}

    const F& base() const { return mod->base(); }
    std::size_t deg() const { return static_cast<std::size_t>(mod->deg); }

    Elem zero() const { return Elem(deg(), base().zero()); }
    Elem one() const { return from_long(1); }
    Elem from_long(long n) const {
        Elem e(deg(), base().zero());
        e[0] = base().from_long(n);
        return e;
    }
    Elem from_dense(uni::UPoly<F> v) const {
        uni::UPoly<F> f = mod->coeff;
        uni::trim(base(), f);
        auto r = uni::urem(base(), std::move(v), f);
        r.resize(deg(), base().zero());
        return r;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(deg(), base().zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = base().add(a[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(deg(), base().zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = base().sub(a[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(deg(), base().zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = base().neg(a[i]);
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        uni::UPoly<F> ua = a, ub = b;
        uni::trim(base(), ua);
        uni::trim(base(), ub);
        return from_dense(uni::umul(base(), ua, ub));
    }
    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw ZeroInverseError("inverse of zero residue");
        uni::UPoly<F> ua = a;
        uni::trim(base(), ua);
        uni::UPoly<F> f = mod->coeff;
        uni::trim(base(), f);
        auto [g, s] = uni::uegcd_mod(base(), ua, f);
        if (g.size() != 1)
            throw NotInvertibleError(
                "residue not invertible: the modulus is reducible (modulus integrity failure)");
        auto r = uni::uscale(base(), s, base().inv(g[0]));
        r = uni::urem(base(), std::move(r), f);
        r.resize(deg(), base().zero());
        return r;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    bool is_zero(const Elem& a) const {
        for (const auto& x : a)
            if (!base().is_zero(x)) return false;
        return true;
    }
    bool is_one(const Elem& a) const {
        if (a.empty() || !base().is_one(a[0])) return false;
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!base().is_zero(a[i])) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!base().eq(a[i], b[i])) return false;
        return true;
    }

    std::string str(const Elem& a) const {
        // rendered as the canonical representative in the first variable
        if (is_zero(a)) return "0";
        std::ostringstream out;
        bool first = true;
        const std::string& xname = mod->vars()->name(0);
        for (std::size_t i = a.size(); i-- > 0;) {
            if (base().is_zero(a[i])) continue;
            std::string cs = base().str(a[i]);
            bool negative = !cs.empty() && cs[0] == '-';
            std::string mag = negative ? cs.substr(1) : cs;
            if (first) {
                if (negative) out << '-';
                first = false;
            } else {
                out << (negative ? " - " : " + ");
            }
            if (i == 0) {
                out << mag;
            } else {
                if (mag != "1") out << mag << '*';
                out << xname;
                if (i > 1) out << '^' << i;
            }
        }
        std::string s = out.str();
        bool multi = s.find(' ') != std::string::npos;
        return multi ? "(" + s + ")" : s;
    }

    Elem from_decimal(const std::string& num, const std::string& den) const {
        Elem e(deg(), base().zero());
        e[0] = base().from_decimal(num, den);
        return e;
    }

    bool same(const ExtField& o) const { return mod == o.mod || (mod && o.mod && *mod == *o.mod); }
    std::string name() const { return base().name() + "[" + mod->vars()->name(0) + "]/<p>"; }
};

template <class F>
using BarPoly = Poly<ExtField<F>>;

template <class F>
using BarMat = PolyMat<ExtField<F>>;

// --- the bar map pi : A -> (K[x1]/<p>)[x2..xn] ------------------------------

// Entry-wise reduction mod p after collecting in x2..xn. The result keeps the
// full VarSet; monomials never mention x1.
template <class F>
BarPoly<F> bar(const Poly<F>& f, const ModulusPtr<F>& mod) {
    ExtField<F> ext(mod);
    BarPoly<F> out(ext, f.vars());
    const F& base = mod->base();
    // power table for x1^k mod p
    std::vector<typename ExtField<F>::Elem> pow_table;
    pow_table.push_back(ext.one());
    uni::UPoly<F> x1 = {base.zero(), base.one()};
    uni::UPoly<F> pf = mod->coeff;
    uni::trim(base, pf);
    uni::UPoly<F> cur = {base.one()};
    auto as_elem = [&](const uni::UPoly<F>& u) {
        typename ExtField<F>::Elem e = u;
        e.resize(ext.deg(), base.zero());
        return e;
    };
    for (const auto& [m, c] : f.terms()) {
        std::int64_t k = m.exp(0);
        while (static_cast<std::int64_t>(pow_table.size()) <= k) {
            cur = uni::urem(base, uni::umul(base, cur, x1), pf);
            pow_table.push_back(as_elem(cur));
        }
        auto coef = ext.mul(pow_table[static_cast<std::size_t>(k)],
                            as_elem(uni::UPoly<F>{c}));
        out.add_term(m.with_exp(0, 0), coef);
    }
    return out;
}

template <class F>
BarMat<F> bar_matrix(const PolyMat<F>& m, const ModulusPtr<F>& mod) {
    ExtField<F> ext(mod);
    BarMat<F> out(ext, m.vars(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = bar(m.at(i, j), mod);
    return out;
}

// Canonical lift back to A: each coefficient becomes its representative,
// coefficient-wise (degree < deg p in x1).
template <class F>
Poly<F> lift(const BarPoly<F>& f, const ModulusPtr<F>& mod) {
    const F& base = mod->base();
    Poly<F> out(base, f.vars());
    for (const auto& [m, e] : f.terms())
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (base.is_zero(e[k])) continue;
            out.add_term(m.with_exp(0, static_cast<std::int64_t>(k)), e[k]);
        }
    return out;
}

// Rank of a matrix over the fraction field of Abar.
template <class F>
std::size_t bar_rank(const BarMat<F>& m) {
    return rank(m);
}

// Inverse in the residue field (spec-level entry point).
template <class F>
typename ExtField<F>::Elem ext_inverse(const ExtField<F>& ext,
                                       const typename ExtField<F>::Elem& a) {
    return ext.inv(a);
}

}  // namespace polysmith

#endif
