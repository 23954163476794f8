#ifndef POLYSMITH_GENERATE_HPP
#define POLYSMITH_GENERATE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "polysmith/matrix.hpp"
#include "polysmith/residue.hpp"

namespace polysmith {

// Deterministic test-instance generator: F = U * S * V with S a padded
// diagonal of p-powers and U, V products of random elementary matrices and
// constant scalings. The inverses are accumulated alongside, so the emitted
// ground-truth certificate (U^{-1}, V^{-1}, S) verifies by construction.
struct GenerateSpec {
    std::size_t rows = 2;
    std::size_t cols = 2;
    std::vector<std::int64_t> exponents;  // nondecreasing p-power ladder
    int factors = 3;                      // elementary factors per side
    std::int64_t degree = 2;              // degree cap for off-diagonal entries
    std::uint64_t seed = 1;
};

template <class F>
struct GeneratedInstance {
    PolyMat<F> matrix;
    EquivCertificate<F> cert;  // cert.U * matrix * cert.V = cert.S
};

namespace detail {

template <class F>
Poly<F> generator_poly(std::mt19937_64& rng, const F& field, const VarSetPtr& vars,
                       std::int64_t deg) {
    Poly<F> f(field, vars);
    int terms = 1 + static_cast<int>(rng() % 2);
    for (int t = 0; t < terms; ++t) {
        std::vector<std::int64_t> e(vars->size(), 0);
        std::int64_t budget = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(deg + 1));
        for (std::int64_t b = 0; b < budget; ++b) e[rng() % vars->size()] += 1;
        long c = static_cast<long>(rng() % 5) - 2;
        if (c == 0) c = 1;
        f.add_term(Monomial(e), field.from_long(c));
    }
    return f;
}

}  // namespace detail

template <class F>
GeneratedInstance<F> generate_instance(const F& field, const VarSetPtr& vars,
                                       const ModulusPtr<F>& mod, const GenerateSpec& spec) {
    if (spec.exponents.empty()) throw Error("generator needs at least one exponent");
    for (std::size_t i = 1; i < spec.exponents.size(); ++i)
        if (spec.exponents[i] < spec.exponents[i - 1])
            throw Error("generator exponents must be nondecreasing");
    if (spec.exponents.size() > std::min(spec.rows, spec.cols))
        throw Error("more exponents than the diagonal can hold");

    std::mt19937_64 rng(spec.seed);
    std::vector<Poly<F>> diag;
    for (auto e : spec.exponents) diag.push_back(mod->p.pow(e));
    PolyMat<F> s = PolyMat<F>::diagonal(field, vars, diag, spec.rows, spec.cols);

    // build one side: returns (M, M^{-1}) as exact products of elementary
    // factors and their reversed inverses
    auto build_side = [&](std::size_t n) {
        auto m = PolyMat<F>::identity(field, vars, n);
        auto minv = PolyMat<F>::identity(field, vars, n);
        for (int t = 0; t < spec.factors; ++t) {
            std::size_t i = rng() % n;
            std::size_t j = rng() % n;
            if (i == j) {
                // constant scaling at position i
                static const long consts[] = {1, -1, 2, -2};
                long c = consts[rng() % 4];
                auto e = PolyMat<F>::identity(field, vars, n);
                auto einv = PolyMat<F>::identity(field, vars, n);
                e.at(i, i) = Poly<F>::from_long(field, vars, c);
                einv.at(i, i) = Poly<F>::constant(field, vars, field.inv(field.from_long(c)));
                m = m * e;
                minv = einv * minv;
            } else {
                auto f = detail::generator_poly(rng, field, vars, spec.degree);
                auto e = PolyMat<F>::identity(field, vars, n);
                auto einv = PolyMat<F>::identity(field, vars, n);
                e.at(i, j) = f;
                einv.at(i, j) = -f;
                m = m * e;
                minv = einv * minv;
            }
        }
        return std::make_pair(m, minv);
    };

    auto [u, uinv] = build_side(spec.rows);
    auto [v, vinv] = build_side(spec.cols);
    GeneratedInstance<F> out{u * s * v, EquivCertificate<F>{uinv, vinv, s}};
    return out;
}

}  // namespace polysmith

#endif
