#ifndef SPECTRAL_ERRORS_HPP
#define SPECTRAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spectral {

struct error_base : std::runtime_error {
    explicit error_base(const std::string& m) : std::runtime_error(m) {}
};

// A series consumer asked for coefficients beyond the tracked window.
struct truncation_deficit : error_base {
    explicit truncation_deficit(const std::string& m) : error_base("truncation deficit: " + m) {}
};

// Non-simple branch point, degenerate radicand, and similar structural failures.
struct degeneracy_error : error_base {
    explicit degeneracy_error(const std::string& m) : error_base("degeneracy: " + m) {}
};

// dy vanishing/singular at a branch point, dy not in the primary span, etc.
struct admissibility_error : error_base {
    explicit admissibility_error(const std::string& m) : error_base("admissibility: " + m) {}
};

struct singular_jacobian_error : error_base {
    explicit singular_jacobian_error(const std::string& m) : error_base("singular Jacobian: " + m) {}
};

struct non_semisimple_error : error_base {
    explicit non_semisimple_error(const std::string& m) : error_base("non-semisimple point: " + m) {}
};

// "Should be impossible" conditions guarded by the spec (triangular solves, counts).
struct internal_consistency_error : error_base {
    explicit internal_consistency_error(const std::string& m) : error_base("internal consistency: " + m) {}
};

struct parse_error : error_base {
    explicit parse_error(const std::string& m) : error_base("parse error: " + m) {}
};

// Exact root finding hit an irreducible factor the quadratic tower cannot split.
struct unsolvable_error : error_base {
    explicit unsolvable_error(const std::string& m) : error_base("unsolvable over tower: " + m) {}
};

}

#endif
