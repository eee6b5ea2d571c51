#pragma once

#include <functional>
#include <string>
#include <vector>

#include "argosc/term.hpp"
#include "argosc/types.hpp"

namespace argosc {

struct CustomTerm {
    std::string tag;
    std::function<double(const Vector&)> fn; // pointwise on the m+r variables
};

struct LibrarySpec {
    int degree = 5;
    std::vector<CustomTerm> custom;
    bool include_constant = true;
};

struct DesignMatrix {
    Matrix values;
    std::vector<TermDescriptor> terms;
    Index n_states = 0;
    Index n_inputs = 0;
    Index p() const { return values.cols(); }
};

struct ScalingRecord {
    Vector mean;
    Vector scale; // divisor applied after centring; 1 for untouched columns
    std::vector<char> zero_variance;
    Index constant_index = -1;
};

Index monomial_count(Index n_vars, int degree);

// Every monomial of total degree ≤ spec.degree in the m+r variables, graded
// lexicographic order, custom columns appended.
DesignMatrix build_design_matrix(const Matrix& X, const Matrix& U, const LibrarySpec& spec);

// Evaluates one term on all rows; build_design_matrix uses this per column,
// so recomputing a column from its descriptor is bit-identical.
Vector eval_term(const TermDescriptor& term, const Matrix& X, const Matrix& U,
                 const std::vector<CustomTerm>& custom);

// Keeps every monomial of total degree ≤ degree plus all custom columns;
// order preserved.
DesignMatrix trim_library(const DesignMatrix& dm, int degree);

// Keeps every monomial of total degree ≤ max degree among the selected terms
// (at least 1) plus any selected custom columns; order preserved.
DesignMatrix trim_library(const DesignMatrix& dm, const std::vector<Index>& selected);

// Centre to mean zero and scale to unit population standard deviation;
// constant and zero-variance columns are left untouched and flagged.
std::pair<DesignMatrix, ScalingRecord> standardize(const DesignMatrix& dm);

// Maps coefficients fitted on the standardized matrix back to the raw one,
// folding the centring offsets into the constant column when present.
Vector back_transform(const ScalingRecord& rec, const Vector& beta_std);

} // namespace argosc
