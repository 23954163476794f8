#ifndef POLYSMITH_GCD_HPP
#define POLYSMITH_GCD_HPP

#include <vector>

#include "polysmith/poly.hpp"

namespace polysmith {

// Exact quotient f / g; throws NotDivisibleError when f is not a polynomial
// multiple of g. Uses single-divisor reduction under a fixed order: if f is a
// multiple, every intermediate leading term stays divisible, so the loop
// terminates with zero remainder and a unique quotient.
template <class F>
Poly<F> exact_div(const Poly<F>& f, const Poly<F>& g) {
    f.check_context(g);
    if (g.is_zero()) throw DivisionByZeroError("division by zero polynomial");
    Poly<F> q(f.field(), f.vars());
    if (f.is_zero()) return q;
    const TermOrder ord;  // any admissible order works; result is order-independent
    auto [gm, gc] = leading_term(g, ord);
    const auto gc_inv = f.field().inv(gc);
    Poly<F> h = f;
    while (!h.is_zero()) {
        auto [hm, hc] = leading_term(h, ord);
        if (!gm.divides(hm)) throw NotDivisibleError("polynomial division has a remainder");
        Monomial qm = hm.div(gm);
        auto qc = f.field().mul(hc, gc_inv);
        q.add_term(qm, qc);
        h = h - g.mul_term(qm, qc);
    }
    return q;
}

template <class F>
bool divides(const Poly<F>& g, const Poly<F>& f) {
    if (g.is_zero()) return f.is_zero();
    try {
        exact_div(f, g);
        return true;
    } catch (const NotDivisibleError&) {
        return false;
    }
}

namespace detail {

// Pseudo-remainder of f by g in variable v: lc_v(g)^(deg_v f - deg_v g + 1) * f
// reduced until deg_v < deg_v(g). Exact in the coefficient ring.
template <class F>
Poly<F> pseudo_rem(const Poly<F>& f, const Poly<F>& g, std::size_t v) {
    const std::int64_t dg = degree_in(g, v);
    Poly<F> lc = leading_coeff_in(g, v);
    Poly<F> r = f;
    Poly<F> xv = Poly<F>::variable(f.field(), f.vars(), v);
    while (!r.is_zero()) {
        std::int64_t dr = degree_in(r, v);
        if (dr < dg) break;
        Poly<F> t = coeff_in(r, v, dr) * xv.pow(dr - dg);
        r = lc * r - t * g;
    }
    return r;
}

// gcd of the v-coefficients of f (the content of f as a polynomial in v).
template <class F>
Poly<F> content_in(const Poly<F>& f, std::size_t v);

template <class F>
Poly<F> gcd_impl(const Poly<F>& f, const Poly<F>& g);

// Plain Euclid for polynomials whose only variable is v (field coefficients).
template <class F>
Poly<F> univariate_gcd(Poly<F> a, Poly<F> b, std::size_t v) {
    const F& field = a.field();
    while (!b.is_zero()) {
        // remainder of a by b with field division
        std::int64_t db = degree_in(b, v);
        Poly<F> blc = coeff_in(b, v, db);
        auto blc_c = blc.constant_value();
        Poly<F> xv = Poly<F>::variable(field, a.vars(), v);
        Poly<F> r = a;
        while (!r.is_zero() && degree_in(r, v) >= db) {
            std::int64_t dr = degree_in(r, v);
            auto rc = coeff_in(r, v, dr).constant_value();
            auto q = field.div(rc, blc_c);
            r = r - b.mul_term(Monomial(a.vars()->size()).with_exp(v, dr - db), q);
        }
        a = b;
        b = r;
    }
    return a;
}

template <class F>
bool only_variable(const Poly<F>& f, std::size_t v) {
    for (const auto& [m, c] : f.terms())
        for (std::size_t i = 0; i < m.nvars(); ++i)
            if (i != v && m.exp(i) > 0) return false;
    return true;
}

template <class F>
Poly<F> content_in(const Poly<F>& f, std::size_t v) {
    Poly<F> c(f.field(), f.vars());
    std::int64_t d = degree_in(f, v);
    for (std::int64_t k = 0; k <= d; ++k) {
        Poly<F> ck = coeff_in(f, v, k);
        if (ck.is_zero()) continue;
        c = gcd_impl(c, ck);
        if (c.is_constant() && !c.is_zero()) break;
    }
    return c;
}

template <class F>
Poly<F> gcd_impl(const Poly<F>& f, const Poly<F>& g) {
    const TermOrder ord;
    if (f.is_zero()) return normalize(g, ord);
    if (g.is_zero()) return normalize(f, ord);
    if (f.is_constant() || g.is_constant())
        return Poly<F>::constant(f.field(), f.vars(), f.field().one());

    auto tf = top_variable(f);
    auto tg = top_variable(g);
    std::size_t v = std::max(*tf, *tg);

    if (degree_in(f, v) == 0) return gcd_impl(f, content_in(g, v));
    if (degree_in(g, v) == 0) return gcd_impl(content_in(f, v), g);

    if (only_variable(f, v) && only_variable(g, v))
        return normalize(univariate_gcd(f, g, v), ord);

    // primitive PRS in v over the ring of the remaining variables
    Poly<F> cf = content_in(f, v);
    Poly<F> cg = content_in(g, v);
    Poly<F> c = gcd_impl(cf, cg);
    Poly<F> fp = exact_div(f, cf);
    Poly<F> gp = exact_div(g, cg);
    if (degree_in(fp, v) < degree_in(gp, v)) std::swap(fp, gp);
    for (;;) {
        Poly<F> r = pseudo_rem(fp, gp, v);
        if (r.is_zero()) break;
        if (degree_in(r, v) == 0) {
            // v-free nonzero remainder: the primitive parts are coprime
            gp = Poly<F>::constant(f.field(), f.vars(), f.field().one());
            break;
        }
        fp = gp;
        gp = exact_div(r, content_in(r, v));
    }
    Poly<F> pp = exact_div(gp, content_in(gp, v));
    return normalize(c * pp, ord);
}

}  // namespace detail

// gcd in the UFD K[x1..xn], normalized so the leading coefficient under ord
// is 1 (gcd(0,0) = 0). Recursive content/primitive-part reduction down to
// univariate Euclid.
template <class F>
Poly<F> gcd(const Poly<F>& f, const Poly<F>& g, const TermOrder& ord = TermOrder()) {
    f.check_context(g);
    Poly<F> r = detail::gcd_impl(f, g);
    return normalize(r, ord);
}

template <class F>
Poly<F> gcd_many(const std::vector<Poly<F>>& fs, const TermOrder& ord = TermOrder()) {
    if (fs.empty()) throw Error("gcd of empty list");
    Poly<F> r = Poly<F>::zero(fs.front().field(), fs.front().vars());
    for (const auto& f : fs) {
        r = gcd(r, f, ord);
        if (r.is_one()) break;
    }
    return r;
}

}  // namespace polysmith

#endif
