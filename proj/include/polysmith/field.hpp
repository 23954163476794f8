#ifndef POLYSMITH_FIELD_HPP
#define POLYSMITH_FIELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "polysmith/errors.hpp"

namespace polysmith {

// Coefficient fields are small stateless-or-nearly value objects that expose
// arithmetic on an element type. Everything above (polynomials, matrices,
// Groebner bases) is templated on the field, so the same code runs over Q,
// over a prime field, and over the residue extension K[x1]/<p>.

struct RationalField {
    using Elem = mpq_class;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_long(long n) const { return Elem(n); }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw ZeroInverseError("inverse of zero");
        return Elem(1) / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    bool is_zero(const Elem& a) const { return a == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    // Exact value from decimal numerator/denominator digit strings.
    Elem from_decimal(const std::string& num, const std::string& den) const {
        mpz_class n(num), d(den);
        if (d == 0) throw DivisionByZeroError("zero denominator in literal");
        Elem r(n, d);
        r.canonicalize();
        return r;
    }

    std::string str(const Elem& a) const { return a.get_str(); }

    bool same(const RationalField&) const { return true; }
    std::string name() const { return "Q"; }
};

// F_q for a prime q. Elements are canonical residues in [0, q).
struct PrimeField {
    using Elem = std::int64_t;

    std::int64_t q = 0;

    PrimeField() = default;
    explicit PrimeField(std::int64_t prime) : q(prime) {
        if (q < 2) throw Error("prime field modulus must be >= 2");
        for (std::int64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) throw Error("prime field modulus must be prime");
    }

    Elem zero() const { return 0; }
    Elem one() const { return q == 1 ? 0 : 1; }
    Elem from_long(long n) const {
        Elem r = static_cast<Elem>(n % q);
        return r < 0 ? r + q : r;
    }

    Elem add(Elem a, Elem b) const {
        Elem r = a + b;
        return r >= q ? r - q : r;
    }
    Elem sub(Elem a, Elem b) const {
        Elem r = a - b;
        return r < 0 ? r + q : r;
    }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<__int128>(a) * b) % q);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : q - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw ZeroInverseError("inverse of zero");
        // extended Euclid on (a, q)
        std::int64_t t = 0, newt = 1, r = q, newr = a;
        while (newr != 0) {
            std::int64_t quo = r / newr;
            std::int64_t tmp = t - quo * newt;
            t = newt;
            newt = tmp;
            tmp = r - quo * newr;
            r = newr;
            newr = tmp;
        }
        if (r != 1) throw NotInvertibleError("element not invertible mod q");
        return t < 0 ? t + q : t;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    bool is_zero(Elem a) const { return a == 0; }
    bool is_one(Elem a) const { return a == 1; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem from_decimal(const std::string& num, const std::string& den) const {
        mpz_class n(num), d(den);
        mpz_class qz(static_cast<long>(q));
        mpz_class nr = n % qz;
        if (nr < 0) nr += qz;
        Elem numer = static_cast<Elem>(nr.get_si());
        if (d == 1) return numer;
        mpz_class dr = d % qz;
        if (dr < 0) dr += qz;
        if (dr == 0) throw DivisionByZeroError("denominator not invertible mod q");
        return div(numer, static_cast<Elem>(dr.get_si()));
    }

    std::string str(Elem a) const { return std::to_string(a); }

    bool same(const PrimeField& o) const { return q == o.q; }
    std::string name() const { return "F" + std::to_string(q); }
};

}  // namespace polysmith

#endif
