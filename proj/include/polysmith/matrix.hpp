#ifndef POLYSMITH_MATRIX_HPP
#define POLYSMITH_MATRIX_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polysmith/gcd.hpp"
#include "polysmith/groebner.hpp"
#include "polysmith/poly.hpp"

namespace polysmith {

// Dense l x m matrix of polynomials sharing one context.
template <class F>
class PolyMat {
  public:
    using Entry = Poly<F>;

    PolyMat(F field, VarSetPtr vars, std::size_t rows, std::size_t cols)
        : field_(std::move(field)),
          vars_(std::move(vars)),
          rows_(rows),
          cols_(cols),
          e_(rows * cols, Poly<F>::zero(field_, vars_)) {
        if (rows == 0 || cols == 0) throw ShapeMismatchError("matrix must be nonempty");
    }

    static PolyMat identity(const F& field, const VarSetPtr& vars, std::size_t n) {
        PolyMat r(field, vars, n, n);
        for (std::size_t i = 0; i < n; ++i)
            r.at(i, i) = Poly<F>::constant(field, vars, field.one());
        return r;
    }

    static PolyMat diagonal(const F& field, const VarSetPtr& vars,
                            const std::vector<Poly<F>>& d, std::size_t rows, std::size_t cols) {
        PolyMat r(field, vars, rows, cols);
        for (std::size_t i = 0; i < d.size() && i < rows && i < cols; ++i) r.at(i, i) = d[i];
        return r;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const F& field() const { return field_; }
    const VarSetPtr& vars() const { return vars_; }

    Poly<F>& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Poly<F>& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& p : e_)
            if (!p.is_zero()) return false;
        return true;
    }

    bool operator==(const PolyMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t k = 0; k < e_.size(); ++k)
            if (!(e_[k] == o.e_[k])) return false;
        return true;
    }

    PolyMat operator*(const PolyMat& o) const {
        if (cols_ != o.rows_) throw ShapeMismatchError("matrix product shape mismatch");
        PolyMat r(field_, vars_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < o.cols_; ++j) {
                Poly<F> s(field_, vars_);
                for (std::size_t k = 0; k < cols_; ++k) s = s + at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    PolyMat operator-(const PolyMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatchError("shape mismatch");
        PolyMat r(field_, vars_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
        return r;
    }

    PolyMat transpose() const {
        PolyMat r(field_, vars_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    PolyMat scaled(const Poly<F>& s) const {
        PolyMat r(field_, vars_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * s;
        return r;
    }

    PolyMat submatrix(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const {
        PolyMat r(field_, vars_, ri.size(), ci.size());
        for (std::size_t i = 0; i < ri.size(); ++i)
            for (std::size_t j = 0; j < ci.size(); ++j) r.at(i, j) = at(ri[i], ci[j]);
        return r;
    }

    std::vector<Poly<F>> entries() const { return e_; }

  private:
    F field_;
    VarSetPtr vars_;
    std::size_t rows_, cols_;
    std::vector<Poly<F>> e_;
};

// Exact determinant by fraction-free (Bareiss) elimination with deterministic
// pivoting (first nonzero row below the diagonal).
template <class F>
Poly<F> determinant(const PolyMat<F>& m) {
    if (m.rows() != m.cols()) throw NotSquareError("determinant of non-square matrix");
    const std::size_t n = m.rows();
    PolyMat<F> b = m;
    Poly<F> prev = Poly<F>::constant(m.field(), m.vars(), m.field().one());
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && b.at(piv, k).is_zero()) ++piv;
        if (piv == n) return Poly<F>::zero(m.field(), m.vars());
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(b.at(piv, j), b.at(k, j));
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                b.at(i, j) = exact_div(b.at(k, k) * b.at(i, j) - b.at(i, k) * b.at(k, j), prev);
        prev = b.at(k, k);
    }
    Poly<F> det = b.at(n - 1, n - 1);
    return negate ? -det : det;
}

inline std::vector<std::size_t> index_range(std::size_t n) {
    std::vector<std::size_t> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = i;
    return r;
}

namespace detail {

// Fraction-free echelon pass; returns pivot (row, col) pairs. The processed
// matrix is left in b.
template <class F>
std::vector<std::pair<std::size_t, std::size_t>> echelon(PolyMat<F>& b) {
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    Poly<F> prev = Poly<F>::constant(b.field(), b.vars(), b.field().one());
    std::size_t r = 0;
    for (std::size_t c = 0; c < b.cols() && r < b.rows(); ++c) {
        std::size_t piv = r;
        while (piv < b.rows() && b.at(piv, c).is_zero()) ++piv;
        if (piv == b.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b.at(piv, j), b.at(r, j));
        for (std::size_t i = r + 1; i < b.rows(); ++i)
            for (std::size_t j = c + 1; j < b.cols(); ++j)
                b.at(i, j) = exact_div(b.at(r, c) * b.at(i, j) - b.at(i, c) * b.at(r, j), prev);
        for (std::size_t i = r + 1; i < b.rows(); ++i)
            b.at(i, c) = Poly<F>::zero(b.field(), b.vars());
        prev = b.at(r, c);
        pivots.emplace_back(r, c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

// Rank over the fraction field.
template <class F>
std::size_t rank(const PolyMat<F>& m) {
    PolyMat<F> b = m;
    return detail::echelon(b).size();
}

enum class KernelSide { left, right };

// Basis of the (left or right) kernel over the fraction field, scaled into the
// polynomial ring and divided by content. Construction is Cramer-style from
// the pivot structure, so every vector annihilates the matrix exactly.
template <class F>
std::vector<std::vector<Poly<F>>> kernel_vectors(const PolyMat<F>& m, KernelSide side) {
    if (side == KernelSide::left) return kernel_vectors(m.transpose(), KernelSide::right);
    PolyMat<F> b = m;
    auto pivots = detail::echelon(b);
    std::vector<std::size_t> pcol;
    for (auto [r, c] : pivots) pcol.push_back(c);
    // Echelon row swaps lose the original row positions, so recover a maximal
    // independent row set by running the same pass on the transpose of the
    // pivot columns; its pivot columns are original row indices.
    std::vector<std::size_t> irows;
    if (!pcol.empty()) {
        PolyMat<F> t = m.submatrix(index_range(m.rows()), pcol).transpose();
        for (auto [r, c] : detail::echelon(t)) irows.push_back(c);
        std::sort(irows.begin(), irows.end());
    }

    std::vector<std::vector<Poly<F>>> out;
    const std::size_t r = pcol.size();
    const TermOrder ord;
    std::vector<bool> is_pivot_col(m.cols(), false);
    for (auto c : pcol) is_pivot_col[c] = true;
    for (std::size_t free_c = 0; free_c < m.cols(); ++free_c) {
        if (is_pivot_col[free_c]) continue;
        std::vector<std::size_t> jc = pcol;
        jc.push_back(free_c);
        std::sort(jc.begin(), jc.end());
        std::vector<Poly<F>> v(m.cols(), Poly<F>::zero(m.field(), m.vars()));
        for (std::size_t t = 0; t < jc.size(); ++t) {
            std::vector<std::size_t> jsub;
            for (std::size_t u = 0; u < jc.size(); ++u)
                if (u != t) jsub.push_back(jc[u]);
            Poly<F> d = r == 0 ? Poly<F>::constant(m.field(), m.vars(), m.field().one())
                               : determinant(m.submatrix(irows, jsub));
            v[jc[t]] = (t % 2 == 0) ? d : -d;
        }
        // remove content, then scale so the first nonzero entry is monic
        Poly<F> c = gcd_many(v);
        if (!c.is_zero() && !c.is_one())
            for (auto& x : v) x = exact_div(x, c);
        for (const auto& x : v) {
            if (x.is_zero()) continue;
            auto lc = leading_term(x, ord).second;
            if (!m.field().is_one(lc)) {
                auto inv = m.field().inv(lc);
                for (auto& y : v) y = y.scaled(inv);
            }
            break;
        }
        out.push_back(std::move(v));
    }
    return out;
}

// --- minors, d_i, Smith data ---------------------------------------------

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    // lexicographic enumeration of k-subsets of {0..n-1}
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

// All i x i minors in canonical order: row subsets lexicographic, then column
// subsets lexicographic.
template <class F>
std::vector<Poly<F>> minors(const PolyMat<F>& m, std::size_t i) {
    if (i < 1 || i > std::min(m.rows(), m.cols()))
        throw OrderOutOfRangeError("minor order out of range");
    std::vector<Poly<F>> out;
    auto rsets = subsets_of_size(m.rows(), i);
    auto csets = subsets_of_size(m.cols(), i);
    for (const auto& rs : rsets)
        for (const auto& cs : csets) out.push_back(determinant(m.submatrix(rs, cs)));
    return out;
}

template <class F>
struct MinorReport {
    std::size_t order = 0;
    std::vector<Poly<F>> minor_list;
    Poly<F> d;                      // gcd of the minors, normalized
    std::vector<Poly<F>> reduced;   // minor_list / d
    bool unit_I = false;            // <minors> = A
    bool unit_J = false;            // <reduced minors> = A

    MinorReport(F field, VarSetPtr vars)
        : d(Poly<F>::zero(std::move(field), std::move(vars))) {}
};

template <class F>
MinorReport<F> minor_report(const PolyMat<F>& m, std::size_t i, const TermOrder& ord = TermOrder(),
                            const GroebnerConfig& cfg = GroebnerConfig()) {
    MinorReport<F> rep(m.field(), m.vars());
    rep.order = i;
    rep.minor_list = minors(m, i);
    rep.d = gcd_many(rep.minor_list, ord);
    if (rep.d.is_zero()) {
        // order exceeds the rank: every minor vanishes
        rep.reduced = rep.minor_list;
        return rep;
    }
    for (const auto& a : rep.minor_list) rep.reduced.push_back(exact_div(a, rep.d));
    rep.unit_I = is_unit_ideal(rep.minor_list, ord, cfg);
    rep.unit_J = rep.d.is_one() ? rep.unit_I : is_unit_ideal(rep.reduced, ord, cfg);
    return rep;
}

// Smith-form bookkeeping. Invariant factors are quotients of consecutive
// determinantal divisors; when a modulus is supplied the diagonal is the
// p-power ladder p^{s_1} | ... | p^{s_r}.
template <class F>
struct SmithFormData {
    std::size_t rank = 0;
    std::vector<Poly<F>> d;              // d_0 = 1, d_1, ..., d_r (normalized)
    std::vector<Poly<F>> invariant_factors;  // Phi_1..Phi_r then zeros up to min(l,m)
    std::vector<std::int64_t> exponents;     // s_i with Phi_i = p^{s_i - s_{i-1}}... cumulative form
};

// Exponent t with f = c * p^t for a nonzero constant c, or nullopt.
template <class F>
std::optional<std::int64_t> p_power_exponent(const Poly<F>& f, const Poly<F>& p) {
    if (f.is_zero()) return std::nullopt;
    Poly<F> h = f;
    std::int64_t t = 0;
    while (!h.is_constant()) {
        try {
            h = exact_div(h, p);
        } catch (const NotDivisibleError&) {
            return std::nullopt;
        }
        ++t;
    }
    return t;
}

template <class F>
SmithFormData<F> smith_form(const PolyMat<F>& m, const TermOrder& ord = TermOrder(),
                            const Poly<F>* p = nullptr) {
    SmithFormData<F> out;
    const F& field = m.field();
    out.d.push_back(Poly<F>::constant(field, m.vars(), field.one()));
    std::size_t maxi = std::min(m.rows(), m.cols());
    for (std::size_t i = 1; i <= maxi; ++i) {
        Poly<F> di = gcd_many(minors(m, i), ord);
        if (di.is_zero()) break;
        out.d.push_back(di);
        out.rank = i;
    }
    for (std::size_t i = 1; i <= out.rank; ++i)
        out.invariant_factors.push_back(normalize(exact_div(out.d[i], out.d[i - 1]), ord));
    while (out.invariant_factors.size() < maxi)
        out.invariant_factors.push_back(Poly<F>::zero(field, m.vars()));
    if (p) {
        std::int64_t prev_sigma = 0;
        for (std::size_t i = 1; i <= out.rank; ++i) {
            auto sigma = p_power_exponent(out.d[i], *p);
            if (!sigma) {
                out.exponents.clear();
                break;
            }
            out.exponents.push_back(*sigma - prev_sigma);
            prev_sigma = *sigma;
        }
    }
    return out;
}

// The Smith form as a matrix of the given shape.
template <class F>
PolyMat<F> smith_matrix(const SmithFormData<F>& data, const F& field, const VarSetPtr& vars,
                        std::size_t rows, std::size_t cols) {
    PolyMat<F> s(field, vars, rows, cols);
    for (std::size_t i = 0; i < data.invariant_factors.size() && i < rows && i < cols; ++i)
        s.at(i, i) = data.invariant_factors[i];
    return s;
}

template <class F>
bool is_unimodular(const PolyMat<F>& m) {
    if (m.rows() != m.cols()) throw NotSquareError("unimodularity requires a square matrix");
    Poly<F> det = determinant(m);
    return det.is_constant() && !det.is_zero();
}

// Inverse of a unimodular matrix: adjugate divided by the constant
// determinant. Exact.
template <class F>
PolyMat<F> inverse_unimodular(const PolyMat<F>& m) {
    Poly<F> det = determinant(m);
    if (!det.is_constant() || det.is_zero())
        throw Error("matrix is not unimodular; no polynomial inverse");
    const std::size_t n = m.rows();
    const F& field = m.field();
    auto det_inv = field.inv(det.constant_value());
    PolyMat<F> inv(field, m.vars(), n, n);
    if (n == 1) {
        inv.at(0, 0) = Poly<F>::constant(field, m.vars(), det_inv);
        return inv;
    }
    auto all_rows = index_range(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> ri, ci;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) ri.push_back(k);
                if (k != i) ci.push_back(k);
            }
            Poly<F> c = determinant(m.submatrix(ri, ci));
            if ((i + j) % 2 == 1) c = -c;
            inv.at(i, j) = c.scaled(det_inv);
        }
    return inv;
}

// --- equivalence certificates --------------------------------------------

template <class F>
struct EquivCertificate {
    PolyMat<F> U, V, S;  // U * F * V = S with U, V unimodular
};

template <class F>
struct VerifyReport {
    bool ok = false;
    std::string reason;
};

template <class F>
VerifyReport<F> verify_certificate_report(const PolyMat<F>& f, const EquivCertificate<F>& cert) {
    VerifyReport<F> rep;
    if (cert.U.rows() != f.rows() || cert.U.cols() != f.rows() || cert.V.rows() != f.cols() ||
        cert.V.cols() != f.cols() || cert.S.rows() != f.rows() || cert.S.cols() != f.cols())
        throw ShapeMismatchError("certificate shapes do not match the matrix");
    Poly<F> du = determinant(cert.U);
    if (!du.is_constant() || du.is_zero()) {
        rep.reason = "U not unimodular";
        return rep;
    }
    Poly<F> dv = determinant(cert.V);
    if (!dv.is_constant() || dv.is_zero()) {
        rep.reason = "V not unimodular";
        return rep;
    }
    PolyMat<F> prod = cert.U * f * cert.V;
    for (std::size_t i = 0; i < prod.rows(); ++i)
        for (std::size_t j = 0; j < prod.cols(); ++j)
            if (!(prod.at(i, j) == cert.S.at(i, j))) {
                rep.reason = "product mismatch at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")";
                return rep;
            }
    rep.ok = true;
    return rep;
}

template <class F>
bool verify_certificate(const PolyMat<F>& f, const EquivCertificate<F>& cert) {
    return verify_certificate_report(f, cert).ok;
}

}  // namespace polysmith

#endif
