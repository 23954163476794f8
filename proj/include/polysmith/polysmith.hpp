#ifndef POLYSMITH_POLYSMITH_HPP
#define POLYSMITH_POLYSMITH_HPP

// Umbrella header: exact Smith forms and equivalence certificates for
// multivariate polynomial matrices whose determinant is a power of a
// univariate irreducible polynomial.

#include "polysmith/errors.hpp"
#include "polysmith/field.hpp"
#include "polysmith/varset.hpp"
#include "polysmith/monomial.hpp"
#include "polysmith/poly.hpp"
#include "polysmith/parse.hpp"
#include "polysmith/gcd.hpp"
#include "polysmith/linalg.hpp"
#include "polysmith/groebner.hpp"
#include "polysmith/matrix.hpp"
#include "polysmith/residue.hpp"
#include "polysmith/reduce.hpp"
#include "polysmith/generate.hpp"
#include "polysmith/io.hpp"

#endif
