#pragma once

#include <string>
#include <vector>

namespace argosc {

// Symbolic descriptor of one candidate-library column: a monomial in the
// m state variables followed by the r input variables, or a tagged custom
// function of all of them.
struct TermDescriptor {
    std::vector<int> exponents; // length m + r, states first
    std::string custom_tag;     // non-empty marks a custom column

    bool is_custom() const { return !custom_tag.empty(); }
    bool is_constant() const;
    int total_degree() const;

    // Human-readable form, e.g. "x1^2*x3"; "1" for the constant term.
    std::string name(const std::vector<std::string>& variables) const;

    bool operator==(const TermDescriptor& other) const {
        return exponents == other.exponents && custom_tag == other.custom_tag;
    }
};

// Strict total order used for library column layout: graded lexicographic
// (total degree ascending, then exponent vectors compared high-first), with
// custom terms after all monomials in tag order.
bool term_less(const TermDescriptor& a, const TermDescriptor& b);

std::vector<std::string> default_variable_names(long n_states, long n_inputs);

} // namespace argosc
