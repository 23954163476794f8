#ifndef POLYSMITH_ERRORS_HPP
#define POLYSMITH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polysmith {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression parsing.
struct SyntaxError : Error {
    std::size_t position;
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};
struct UnknownVariableError : Error {
    std::size_t position;
    UnknownVariableError(const std::string& name, std::size_t pos)
        : Error("unknown variable '" + name + "' (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

// Ring arithmetic.
struct MixedContextError : Error {
    using Error::Error;
};
struct NotDivisibleError : Error {
    using Error::Error;
};
struct DivisionByZeroError : Error {
    using Error::Error;
};
struct ZeroPolynomialError : Error {
    using Error::Error;
};
struct ExponentOverflowError : Error {
    using Error::Error;
};

// Residue field / modulus validation.
struct NotSquarefreeError : Error {
    using Error::Error;
};
struct ConstantPolynomialError : Error {
    using Error::Error;
};
struct ZeroInverseError : Error {
    using Error::Error;
};
// Signals that a claimed-irreducible modulus was in fact reducible.
struct NotInvertibleError : Error {
    using Error::Error;
};
struct ModulusError : Error {
    using Error::Error;
};

// Groebner engine.
struct BudgetExceededError : Error {
    using Error::Error;
};
struct NotUnitIdealError : Error {
    using Error::Error;
};

// Matrix operations.
struct NotSquareError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct OrderOutOfRangeError : Error {
    using Error::Error;
};

// Reduction pipeline.
struct HypothesisViolatedError : Error {
    using Error::Error;
};
struct NotRankOneError : Error {
    using Error::Error;
};
struct DependentRowsError : Error {
    using Error::Error;
};
struct InvalidCertificateError : Error {
    using Error::Error;
};

}  // namespace polysmith

#endif
