#ifndef POLYSMITH_GROEBNER_HPP
#define POLYSMITH_GROEBNER_HPP

#include <chrono>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "polysmith/poly.hpp"

namespace polysmith {

struct GroebnerConfig {
    // cap on executed S-pair reductions; exceeding raises BudgetExceededError
    long long max_reductions = 100000;
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void charge(long long& used) const {
        if (++used > max_reductions)
            throw BudgetExceededError("Groebner S-pair reduction budget exceeded");
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw BudgetExceededError("Groebner wall-clock budget exceeded");
    }
};

// Reduced Groebner basis with an exact cofactor matrix: for every k,
//   basis[k] = sum_j cofactors[k][j] * generators[j].
// The basis is monic, auto-reduced and sorted by leading monomial, so equal
// ideals presented the same way produce byte-identical bases.
template <class F>
struct GroebnerBasis {
    std::vector<Poly<F>> generators;
    std::vector<Poly<F>> basis;
    std::vector<std::vector<Poly<F>>> cofactors;
    TermOrder order;

    bool is_unit() const { return basis.size() == 1 && basis.front().is_one(); }
};

namespace detail {

template <class F>
struct Tracked {
    Poly<F> p;
    std::vector<Poly<F>> cof;
};

// Full reduction of t.p by the tracked entries, keeping the cofactor identity.
// Divisor selection: first entry in list order whose leading monomial divides.
template <class F>
void reduce_tracked(Tracked<F>& t, const std::vector<Tracked<F>>& gs, const TermOrder& ord) {
    const F& field = t.p.field();
    Poly<F> rem(t.p.field(), t.p.vars());
    Poly<F> h = t.p;
    while (!h.is_zero()) {
        auto [hm, hc] = leading_term(h, ord);
        bool reduced = false;
        for (const auto& g : gs) {
            if (g.p.is_zero()) continue;
            auto [gm, gc] = leading_term(g.p, ord);
            if (!gm.divides(hm)) continue;
            Monomial qm = hm.div(gm);
            auto qc = field.div(hc, gc);
            h = h - g.p.mul_term(qm, qc);
            for (std::size_t j = 0; j < t.cof.size(); ++j)
                t.cof[j] = t.cof[j] - g.cof[j].mul_term(qm, qc);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.add_term(hm, hc);
            h = h - Poly<F>::term(field, h.vars(), hm, hc);
        }
    }
    t.p = rem;
}

}  // namespace detail

// Buchberger's algorithm with the product and chain criteria and normal
// (smallest-lcm) selection, tracking cofactors throughout.
template <class F>
GroebnerBasis<F> buchberger_with_lift(const std::vector<Poly<F>>& gens, const TermOrder& ord,
                                      const GroebnerConfig& cfg = GroebnerConfig()) {
    if (gens.empty()) throw Error("Groebner basis of empty generator list");
    const F& field = gens.front().field();
    const auto& vars = gens.front().vars();
    for (const auto& g : gens) gens.front().check_context(g);

    GroebnerBasis<F> out;
    out.generators = gens;
    out.order = ord;

    auto zero = Poly<F>::zero(field, vars);
    auto unit_row = [&](std::size_t j) {
        std::vector<Poly<F>> row(gens.size(), zero);
        row[j] = Poly<F>::constant(field, vars, field.one());
        return row;
    };

    std::vector<detail::Tracked<F>> G;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].is_zero()) continue;
        G.push_back({gens[j], unit_row(j)});
    }
    if (G.empty()) {
        // the zero ideal
        return out;
    }

    // pending pairs keyed by (lcm of leading monomials under ord, i, j)
    struct PairKey {
        Monomial lcm;
        std::size_t i, j;
    };
    auto key_less = [&ord](const PairKey& a, const PairKey& b) {
        if (a.lcm != b.lcm) return ord.less(a.lcm, b.lcm);
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::vector<PairKey> queue;
    std::set<std::pair<std::size_t, std::size_t>> pending;
    auto push_pairs_for = [&](std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            Monomial l = leading_monomial(G[i].p, ord).lcm(leading_monomial(G[n].p, ord));
            queue.push_back({l, i, n});
            pending.insert({i, n});
        }
    };
    for (std::size_t n = 1; n < G.size(); ++n) push_pairs_for(n);

    long long used = 0;
    bool found_unit = false;
    while (!queue.empty() && !found_unit) {
        auto best = std::min_element(queue.begin(), queue.end(), key_less);
        PairKey pk = *best;
        queue.erase(best);
        pending.erase({pk.i, pk.j});

        Monomial li = leading_monomial(G[pk.i].p, ord);
        Monomial lj = leading_monomial(G[pk.j].p, ord);
        // product criterion
        if (li.mul(lj) == pk.lcm) continue;
        // chain criterion
        bool skip = false;
        for (std::size_t k = 0; k < G.size() && !skip; ++k) {
            if (k == pk.i || k == pk.j) continue;
            if (!leading_monomial(G[k].p, ord).divides(pk.lcm)) continue;
            auto p1 = std::minmax(pk.i, k);
            auto p2 = std::minmax(pk.j, k);
            if (!pending.count({p1.first, p1.second}) && !pending.count({p2.first, p2.second}))
                skip = true;
        }
        if (skip) continue;

        cfg.charge(used);

        const auto& gi = G[pk.i];
        const auto& gj = G[pk.j];
        auto [mi, ci] = leading_term(gi.p, ord);
        auto [mj, cj] = leading_term(gj.p, ord);
        Monomial ti = pk.lcm.div(mi);
        Monomial tj = pk.lcm.div(mj);
        detail::Tracked<F> s{gi.p.mul_term(ti, field.inv(ci)) - gj.p.mul_term(tj, field.inv(cj)),
                             {}};
        s.cof.reserve(gens.size());
        for (std::size_t x = 0; x < gens.size(); ++x)
            s.cof.push_back(gi.cof[x].mul_term(ti, field.inv(ci)) -
                            gj.cof[x].mul_term(tj, field.inv(cj)));
        detail::reduce_tracked(s, G, ord);
        if (s.p.is_zero()) continue;
        if (s.p.is_constant()) found_unit = true;
        G.push_back(std::move(s));
        push_pairs_for(G.size() - 1);
    }

    if (found_unit) {
        // the ideal is all of A: the reduced basis is {1}
        const auto& last = G.back();
        auto c = last.p.constant_value();
        auto inv = field.inv(c);
        detail::Tracked<F> one{last.p.scaled(inv), {}};
        one.cof.reserve(gens.size());
        for (const auto& cf : last.cof) one.cof.push_back(cf.scaled(inv));
        out.basis.push_back(one.p);
        out.cofactors.push_back(one.cof);
        return out;
    }

    // minimalize: drop entries whose leading monomial is divisible by another's
    std::vector<detail::Tracked<F>> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
        Monomial li = leading_monomial(G[i].p, ord);
        bool redundant = false;
        for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j) continue;
            Monomial lj = leading_monomial(G[j].p, ord);
            if (lj.divides(li) && !(li == lj && j > i)) redundant = true;
        }
        if (!redundant) minimal.push_back(G[i]);
    }

    // interreduce tails and make monic
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<detail::Tracked<F>> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        detail::reduce_tracked(minimal[i], others, ord);
        auto [m, c] = leading_term(minimal[i].p, ord);
        auto inv = field.inv(c);
        minimal[i].p = minimal[i].p.scaled(inv);
        for (auto& cf : minimal[i].cof) cf = cf.scaled(inv);
    }

    std::sort(minimal.begin(), minimal.end(), [&](const auto& a, const auto& b) {
        return ord.less(leading_monomial(a.p, ord), leading_monomial(b.p, ord));
    });
    for (auto& t : minimal) {
        out.basis.push_back(std::move(t.p));
        out.cofactors.push_back(std::move(t.cof));
    }
    return out;
}

// Remainder of f under multivariate division by gb.basis; zero iff f lies in
// the ideal. When quotients is non-null it receives q with
//   f = sum_k q[k] * basis[k] + remainder.
template <class F>
Poly<F> normal_form(const Poly<F>& f, const GroebnerBasis<F>& gb,
                    std::vector<Poly<F>>* quotients = nullptr) {
    const F& field = f.field();
    if (quotients) quotients->assign(gb.basis.size(), Poly<F>::zero(field, f.vars()));
    Poly<F> rem(field, f.vars());
    Poly<F> h = f;
    while (!h.is_zero()) {
        auto [hm, hc] = leading_term(h, gb.order);
        bool reduced = false;
        for (std::size_t k = 0; k < gb.basis.size(); ++k) {
            const auto& g = gb.basis[k];
            if (g.is_zero()) continue;
            auto [gm, gc] = leading_term(g, gb.order);
            if (!gm.divides(hm)) continue;
            Monomial qm = hm.div(gm);
            auto qc = field.div(hc, gc);
            h = h - g.mul_term(qm, qc);
            if (quotients) (*quotients)[k].add_term(qm, qc);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.add_term(hm, hc);
            h = h - Poly<F>::term(field, h.vars(), hm, hc);
        }
    }
    return rem;
}

template <class F>
bool ideal_contains(const GroebnerBasis<F>& gb, const Poly<F>& f) {
    return normal_form(f, gb).is_zero();
}

template <class F>
bool is_unit_ideal(const std::vector<Poly<F>>& gens, const TermOrder& ord = TermOrder(),
                   const GroebnerConfig& cfg = GroebnerConfig()) {
    return buchberger_with_lift(gens, ord, cfg).is_unit();
}

// Coefficients c with sum c_i * gens_i = 1, read off the cofactor row of the
// basis element 1.
template <class F>
std::vector<Poly<F>> unit_combination(const std::vector<Poly<F>>& gens,
                                      const TermOrder& ord = TermOrder(),
                                      const GroebnerConfig& cfg = GroebnerConfig()) {
    auto gb = buchberger_with_lift(gens, ord, cfg);
    if (!gb.is_unit()) throw NotUnitIdealError("generators do not generate the unit ideal");
    return gb.cofactors.front();
}

// Membership representation in terms of the original generators:
// f = sum_j out[j] * gens[j] when f lies in the ideal.
template <class F>
std::optional<std::vector<Poly<F>>> member_combination(const GroebnerBasis<F>& gb,
                                                       const Poly<F>& f) {
    std::vector<Poly<F>> q;
    Poly<F> r = normal_form(f, gb, &q);
    if (!r.is_zero()) return std::nullopt;
    const F& field = f.field();
    std::vector<Poly<F>> out(gb.generators.size(), Poly<F>::zero(field, f.vars()));
    for (std::size_t k = 0; k < gb.basis.size(); ++k)
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = out[j] + q[k] * gb.cofactors[k][j];
    return out;
}

}  // namespace polysmith

#endif
