#pragma once

#include <stdexcept>
#include <string>

namespace bps {

/** Base class for all library errors. */
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/** Input data fails a structural precondition (sizes, kinds, signs, parses). */
struct validation_error : error {
    explicit validation_error(const std::string& what) : error(what) {}
};

/** Two equal-phase classes have nonzero pairing (or the ordering mode fails). */
struct non_generic_stability : validation_error {
    explicit non_generic_stability(const std::string& what) : validation_error(what) {}
};

/** A cone or box enumeration exceeded its configured cap. */
struct enumeration_limit : validation_error {
    explicit enumeration_limit(const std::string& what) : validation_error(what) {}
};

/** Internal consistency failures: these indicate a bug or an impossible input,
 *  not a user mistake, and map to a distinct process exit code. */
struct internal_error : error {
    explicit internal_error(const std::string& what) : error(what) {}
};

/** The residual operator in a factorization step is not a Hamiltonian flow. */
struct non_hamiltonian_residual : internal_error {
    explicit non_hamiltonian_residual(const std::string& what) : internal_error(what) {}
};

/** An operator does not carry enough graded room to read a coefficient. */
struct truncation_too_small : internal_error {
    explicit truncation_too_small(const std::string& what) : internal_error(what) {}
};

} // namespace bps
