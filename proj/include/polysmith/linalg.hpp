#ifndef POLYSMITH_LINALG_HPP
#define POLYSMITH_LINALG_HPP

#include <map>
#include <optional>
#include <vector>

#include "polysmith/poly.hpp"

namespace polysmith {

// Dense matrix over a coefficient field, used for the small exact linear
// systems behind ansatz searches and the Macaulay-style membership solver.
template <class F>
struct DenseMat {
    using Elem = typename F::Elem;
    F field;
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    DenseMat(F f, std::size_t r, std::size_t c)
        : field(std::move(f)), rows(r), cols(c), a(r * c, field.zero()) {}

    Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Solve A x = b exactly; returns a particular solution (free variables zero),
// or nullopt when inconsistent. Deterministic pivoting: first nonzero.
template <class F>
std::optional<std::vector<typename F::Elem>> solve_linear(DenseMat<F> A,
                                                          std::vector<typename F::Elem> b) {
    const F& field = A.field;
    std::size_t m = A.rows, n = A.cols;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && field.is_zero(A.at(p, c))) ++p;
        if (p == m) continue;
        if (p != r) {
            for (std::size_t j = c; j < n; ++j) std::swap(A.at(p, j), A.at(r, j));
            std::swap(b[p], b[r]);
        }
        auto inv = field.inv(A.at(r, c));
        for (std::size_t j = c; j < n; ++j) A.at(r, j) = field.mul(A.at(r, j), inv);
        b[r] = field.mul(b[r], inv);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || field.is_zero(A.at(i, c))) continue;
            auto factor = A.at(i, c);
            for (std::size_t j = c; j < n; ++j)
                A.at(i, j) = field.sub(A.at(i, j), field.mul(factor, A.at(r, j)));
            b[i] = field.sub(b[i], field.mul(factor, b[r]));
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (!field.is_zero(b[i])) return std::nullopt;
    std::vector<typename F::Elem> x(n, field.zero());
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

// All monomials in nvars variables with total degree <= cap, in a fixed
// deterministic order (ascending structural order).
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, std::int64_t cap) {
    std::vector<Monomial> out;
    std::vector<std::int64_t> e(nvars, 0);
    // odometer enumeration
    for (;;) {
        std::int64_t total = 0;
        for (auto v : e) total += v;
        if (total <= cap) out.push_back(Monomial(e));
        std::size_t i = 0;
        while (i < nvars) {
            if (++e[i] > cap) {
                e[i] = 0;
                ++i;
            } else {
                break;
            }
        }
        if (i == nvars) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Find multipliers h_1..h_k with sum h_i * g_i = target, where each h_i uses
// only monomials of total degree <= multiplier_cap[i]. Exact linear algebra;
// nullopt when no such bounded representation exists. The generated system
// matches on every monomial that any product can reach, so a returned
// combination is an identity, not an approximation.
template <class F>
std::optional<std::vector<Poly<F>>> bounded_combination(
    const std::vector<Poly<F>>& gens, const Poly<F>& target,
    const std::vector<std::int64_t>& multiplier_cap) {
    if (gens.empty()) return std::nullopt;
    const F& field = target.field();
    const auto& vars = target.vars();
    std::size_t nvars = vars->size();

    struct Col {
        std::size_t gen;
        Monomial mono;
    };
    std::vector<Col> columns;
    std::map<Monomial, std::size_t> row_of;
    auto row_index = [&](const Monomial& m) {
        auto it = row_of.find(m);
        if (it != row_of.end()) return it->second;
        std::size_t idx = row_of.size();
        row_of.emplace(m, idx);
        return idx;
    };

    // first pass: register all product rows
    std::vector<std::vector<Monomial>> candidate_monos(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].is_zero() || multiplier_cap[i] < 0) continue;
        candidate_monos[i] = monomials_up_to(nvars, multiplier_cap[i]);
        for (const auto& hm : candidate_monos[i]) {
            columns.push_back({i, hm});
            for (const auto& [gm, gc] : gens[i].terms()) row_index(hm.mul(gm));
        }
    }
    for (const auto& [tm, tc] : target.terms()) row_index(tm);
    if (columns.empty()) return std::nullopt;

    DenseMat<F> A(field, row_of.size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& col = columns[j];
        for (const auto& [gm, gc] : gens[col.gen].terms()) {
            std::size_t i = row_of.at(col.mono.mul(gm));
            A.at(i, j) = field.add(A.at(i, j), gc);
        }
    }
    std::vector<typename F::Elem> b(row_of.size(), field.zero());
    for (const auto& [tm, tc] : target.terms()) b[row_of.at(tm)] = tc;

    auto x = solve_linear(A, b);
    if (!x) return std::nullopt;

    std::vector<Poly<F>> hs(gens.size(), Poly<F>::zero(field, vars));
    for (std::size_t j = 0; j < columns.size(); ++j)
        hs[columns[j].gen].add_term(columns[j].mono, (*x)[j]);
    return hs;
}

// Convenience: same multiplier cap for every generator.
template <class F>
std::optional<std::vector<Poly<F>>> bounded_combination(const std::vector<Poly<F>>& gens,
                                                        const Poly<F>& target,
                                                        std::int64_t cap) {
    return bounded_combination(gens, target, std::vector<std::int64_t>(gens.size(), cap));
}

}  // namespace polysmith

#endif
