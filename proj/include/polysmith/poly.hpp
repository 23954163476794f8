#ifndef POLYSMITH_POLY_HPP
#define POLYSMITH_POLY_HPP

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polysmith/errors.hpp"
#include "polysmith/field.hpp"
#include "polysmith/monomial.hpp"
#include "polysmith/varset.hpp"

namespace polysmith {

// Sparse multivariate polynomial over a coefficient field F.
// Terms live in a map keyed by the structural monomial order, so two equal
// polynomials always have identical term sequences; no zero coefficient is
// ever stored. Values are immutable after construction: every operation
// returns a fresh polynomial.
template <class F>
class Poly {
  public:
    using Field = F;
    using Coef = typename F::Elem;
    using TermMap = std::map<Monomial, Coef>;

    Poly(F field, VarSetPtr vars) : field_(std::move(field)), vars_(std::move(vars)) {}

    static Poly zero(const F& field, const VarSetPtr& vars) { return Poly(field, vars); }

    static Poly constant(const F& field, const VarSetPtr& vars, Coef c) {
        Poly r(field, vars);
        if (!field.is_zero(c)) r.terms_.emplace(Monomial(vars->size()), std::move(c));
        return r;
    }

    static Poly from_long(const F& field, const VarSetPtr& vars, long n) {
        return constant(field, vars, field.from_long(n));
    }

    static Poly variable(const F& field, const VarSetPtr& vars, std::size_t index) {
        Poly r(field, vars);
        Monomial m(vars->size());
        r.terms_.emplace(m.with_exp(index, 1), field.one());
        return r;
    }

    static Poly term(const F& field, const VarSetPtr& vars, Monomial m, Coef c) {
        Poly r(field, vars);
        if (!field.is_zero(c)) r.terms_.emplace(std::move(m), std::move(c));
        return r;
    }

    const F& field() const { return field_; }
    const VarSetPtr& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    // The constant coefficient (zero if absent).
    Coef constant_value() const {
        auto it = terms_.find(Monomial(vars_->size()));
        return it == terms_.end() ? field_.zero() : it->second;
    }
    bool is_one() const { return terms_.size() == 1 && is_constant() && field_.is_one(terms_.begin()->second); }

    std::int64_t total_degree() const {
        std::int64_t d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    bool equals(const Poly& o) const {
        check_context(o);
        if (terms_.size() != o.terms_.size()) return false;
        auto it = terms_.begin();
        auto jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first) return false;
            if (!field_.eq(it->second, jt->second)) return false;
        }
        return true;
    }
    bool operator==(const Poly& o) const { return equals(o); }
    bool operator!=(const Poly& o) const { return !equals(o); }

    Poly operator+(const Poly& o) const {
        check_context(o);
        Poly r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Poly operator-(const Poly& o) const {
        check_context(o);
        Poly r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, field_.neg(c));
        return r;
    }
    Poly operator-() const {
        Poly r(field_, vars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, field_.neg(c));
        return r;
    }
    Poly operator*(const Poly& o) const {
        check_context(o);
        Poly r(field_, vars_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) r.add_term(ma.mul(mb), field_.mul(ca, cb));
        return r;
    }

    Poly scaled(const Coef& c) const {
        Poly r(field_, vars_);
        if (field_.is_zero(c)) return r;
        for (const auto& [m, v] : terms_) {
            Coef p = field_.mul(v, c);
            if (!field_.is_zero(p)) r.terms_.emplace(m, std::move(p));
        }
        return r;
    }

    Poly mul_term(const Monomial& m, const Coef& c) const {
        Poly r(field_, vars_);
        if (field_.is_zero(c)) return r;
        for (const auto& [mm, v] : terms_) {
            Coef p = field_.mul(v, c);
            if (!field_.is_zero(p)) r.terms_.emplace(mm.mul(m), std::move(p));
        }
        return r;
    }

    Poly pow(std::int64_t k) const {
        if (k < 0) throw Error("negative power");
        Poly r = constant(field_, vars_, field_.one());
        Poly base(*this);
        while (k > 0) {
            if (k & 1) r = r * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return r;
    }

    void check_context(const Poly& o) const {
        if (!same_vars(vars_, o.vars_) || !field_.same(o.field_))
            throw MixedContextError("operands come from different rings");
    }

    // mutation helpers used only while building a value
    void add_term(const Monomial& m, const Coef& c) {
        if (field_.is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = field_.add(it->second, c);
            if (field_.is_zero(it->second)) terms_.erase(it);
        }
    }

  private:
    F field_;
    VarSetPtr vars_;
    TermMap terms_;
};

// --- order-sensitive views ---------------------------------------------

template <class F>
std::pair<Monomial, typename F::Elem> leading_term(const Poly<F>& f, const TermOrder& ord) {
    if (f.is_zero()) throw ZeroPolynomialError("leading term of zero polynomial");
    auto it = f.terms().begin();
    auto best = it;
    for (++it; it != f.terms().end(); ++it)
        if (ord.less(best->first, it->first)) best = it;
    return {best->first, best->second};
}

template <class F>
Monomial leading_monomial(const Poly<F>& f, const TermOrder& ord) {
    return leading_term(f, ord).first;
}

// Highest power of variable v occurring in f; -1 for the zero polynomial.
template <class F>
std::int64_t degree_in(const Poly<F>& f, std::size_t v) {
    std::int64_t d = -1;
    for (const auto& [m, c] : f.terms()) d = std::max(d, m.exp(v));
    return d;
}

// Largest variable index with positive degree, or nullopt for constants.
template <class F>
std::optional<std::size_t> top_variable(const Poly<F>& f) {
    std::optional<std::size_t> top;
    for (const auto& [m, c] : f.terms())
        for (std::size_t i = m.nvars(); i-- > 0;) {
            if (m.exp(i) > 0) {
                if (!top || *top < i) top = i;
                break;
            }
        }
    return top;
}

// Coefficient of v^k in f, viewed as a polynomial in v (a Poly in the rest).
template <class F>
Poly<F> coeff_in(const Poly<F>& f, std::size_t v, std::int64_t k) {
    Poly<F> r(f.field(), f.vars());
    for (const auto& [m, c] : f.terms())
        if (m.exp(v) == k) r.add_term(m.with_exp(v, 0), c);
    return r;
}

// Leading coefficient of f collected in variable v (a polynomial in the
// remaining variables).
template <class F>
Poly<F> leading_coeff_in(const Poly<F>& f, std::size_t v) {
    std::int64_t d = degree_in(f, v);
    if (d < 0) return Poly<F>::zero(f.field(), f.vars());
    return coeff_in(f, v, d);
}

// Normalize so the leading coefficient under ord equals 1; zero stays zero.
template <class F>
Poly<F> normalize(const Poly<F>& f, const TermOrder& ord) {
    if (f.is_zero()) return f;
    auto [m, c] = leading_term(f, ord);
    if (f.field().is_one(c)) return f;
    return f.scaled(f.field().inv(c));
}

// --- substitution -------------------------------------------------------

// Ring homomorphism determined by variable images (all sharing f's context).
template <class F>
Poly<F> substitute(const Poly<F>& f, const std::vector<Poly<F>>& images) {
    if (images.size() != f.vars()->size())
        throw MixedContextError("substitution must map every variable");
    for (const auto& g : images) f.check_context(g);
    const F& field = f.field();
    // memoized powers per variable
    std::vector<std::vector<Poly<F>>> powers(images.size());
    auto power_of = [&](std::size_t v, std::int64_t k) -> const Poly<F>& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(Poly<F>::constant(field, f.vars(), field.one()));
        while (static_cast<std::int64_t>(cache.size()) <= k)
            cache.push_back(cache.back() * images[v]);
        return cache[static_cast<std::size_t>(k)];
    };
    Poly<F> result(field, f.vars());
    for (const auto& [m, c] : f.terms()) {
        Poly<F> t = Poly<F>::constant(field, f.vars(), c);
        for (std::size_t v = 0; v < images.size(); ++v)
            if (m.exp(v) > 0) t = t * power_of(v, m.exp(v));
        result = result + t;
    }
    return result;
}

// --- rendering ----------------------------------------------------------

namespace detail {

inline bool coef_string_negative(const std::string& s) { return !s.empty() && s[0] == '-'; }

}  // namespace detail

// Canonical expression string: terms in descending term order, explicit '*'
// between factors, '^' powers, no implicit multiplication. parse(render(f))
// reproduces f exactly.
template <class F>
std::string render(const Poly<F>& f, const TermOrder& ord = TermOrder()) {
    if (f.is_zero()) return "0";
    std::vector<const typename Poly<F>::TermMap::value_type*> ts;
    for (const auto& t : f.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [&](const auto* a, const auto* b) { return ord.greater(a->first, b->first); });
    const auto& vars = *f.vars();
    std::ostringstream out;
    bool first = true;
    for (const auto* t : ts) {
        std::string cs = f.field().str(t->second);
        bool negative = detail::coef_string_negative(cs);
        std::string mag = negative ? cs.substr(1) : cs;
        if (first) {
            if (negative) out << '-';
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        const Monomial& m = t->first;
        if (m.is_one()) {
            out << mag;
        } else {
            bool printed = false;
            if (mag != "1") {
                out << mag;
                printed = true;
            }
            for (std::size_t v = 0; v < m.nvars(); ++v) {
                if (m.exp(v) == 0) continue;
                if (printed) out << '*';
                out << vars.name(v);
                if (m.exp(v) > 1) out << '^' << m.exp(v);
                printed = true;
            }
        }
    }
    return out.str();
}

}  // namespace polysmith

#endif
