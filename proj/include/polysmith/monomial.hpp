#ifndef POLYSMITH_MONOMIAL_HPP
#define POLYSMITH_MONOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "polysmith/errors.hpp"

namespace polysmith {

// Exponent vector, one entry per variable of the active VarSet.
// Exponents are machine integers; overflowing the checked cap is a hard error.
class Monomial {
  public:
    static constexpr std::int64_t kMaxExp = (std::int64_t{1} << 40);

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(std::vector<std::int64_t> exps) : e_(std::move(exps)) {
        for (auto v : e_)
            if (v < 0 || v > kMaxExp) throw ExponentOverflowError("monomial exponent out of range");
    }

    std::size_t nvars() const { return e_.size(); }
    std::int64_t exp(std::size_t i) const { return e_[i]; }
    const std::vector<std::int64_t>& exps() const { return e_; }

    std::int64_t total_degree() const {
        return std::accumulate(e_.begin(), e_.end(), std::int64_t{0});
    }

    bool is_one() const {
        return std::all_of(e_.begin(), e_.end(), [](std::int64_t v) { return v == 0; });
    }

    Monomial mul(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) {
            r.e_[i] += o.e_[i];
            if (r.e_[i] > kMaxExp) throw ExponentOverflowError("monomial exponent overflow");
        }
        return r;
    }

    Monomial pow(std::int64_t k) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) {
            r.e_[i] *= k;
            if (r.e_[i] > kMaxExp) throw ExponentOverflowError("monomial exponent overflow");
        }
        return r;
    }

    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    // Quotient o / this (caller checks divisibility); here: this / d.
    Monomial div(const Monomial& d) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) {
            r.e_[i] -= d.e_[i];
            if (r.e_[i] < 0) throw NotDivisibleError("monomial quotient not defined");
        }
        return r;
    }

    Monomial lcm(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = std::max(r.e_[i], o.e_[i]);
        return r;
    }

    Monomial with_exp(std::size_t i, std::int64_t v) const {
        Monomial r(*this);
        r.e_[i] = v;
        return r;
    }

    // Structural order used as the map key inside Poly; not a term order.
    bool operator<(const Monomial& o) const { return e_ < o.e_; }
    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    bool operator!=(const Monomial& o) const { return e_ != o.e_; }

  private:
    std::vector<std::int64_t> e_;
};

enum class OrderKind { grevlex, lex };

// Total monomial order compatible with multiplication; 1 is minimal.
struct TermOrder {
    OrderKind kind = OrderKind::grevlex;

    TermOrder() = default;
    explicit TermOrder(OrderKind k) : kind(k) {}

    // strict a < b
    bool less(const Monomial& a, const Monomial& b) const {
        if (kind == OrderKind::lex) {
            for (std::size_t i = 0; i < a.nvars(); ++i) {
                if (a.exp(i) != b.exp(i)) return a.exp(i) < b.exp(i);
            }
            return false;
        }
        std::int64_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        // graded reverse lex: the last nonzero entry of a-b decides, inverted
        for (std::size_t i = a.nvars(); i-- > 0;) {
            std::int64_t d = a.exp(i) - b.exp(i);
            if (d != 0) return d > 0;
        }
        return false;
    }

    bool greater(const Monomial& a, const Monomial& b) const { return less(b, a); }

    const char* name() const { return kind == OrderKind::lex ? "lex" : "grevlex"; }
};

}  // namespace polysmith

#endif
