#include "argosc/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace argosc {

Index monomial_count(Index n_vars, int degree) {
    // C(n_vars + degree, degree)
    Index count = 1;
    for (int k = 1; k <= degree; ++k) count = count * (n_vars + k) / k;
    return count;
}

namespace {

void enumerate_exponents(std::vector<int>& current, std::size_t pos, int budget,
                         std::vector<TermDescriptor>& out) {
    if (pos == current.size()) {
        TermDescriptor term;
        term.exponents = current;
        out.push_back(std::move(term));
        return;
    }
    for (int e = 0; e <= budget; ++e) {
        current[pos] = e;
        enumerate_exponents(current, pos + 1, budget - e, out);
    }
    current[pos] = 0;
}

} // namespace

Vector eval_term(const TermDescriptor& term, const Matrix& X, const Matrix& U,
                 const std::vector<CustomTerm>& custom) {
    const Index n = X.rows();
    const Index m = X.cols();
    const Index r = U.cols();
    if (term.is_custom()) {
        auto it = std::find_if(custom.begin(), custom.end(),
                               [&](const CustomTerm& c) { return c.tag == term.custom_tag; });
        if (it == custom.end())
            throw std::invalid_argument("no function registered for custom term '" +
                                        term.custom_tag + "'");
        Vector col(n);
        Vector row(m + r);
        for (Index i = 0; i < n; ++i) {
            row.head(m) = X.row(i).transpose();
            row.tail(r) = U.row(i).transpose();
            col(i) = it->fn(row);
        }
        return col;
    }
    if (static_cast<Index>(term.exponents.size()) != m + r)
        throw std::invalid_argument("term arity does not match m + r");
    Vector col = Vector::Ones(n);
    for (Index v = 0; v < m + r; ++v) {
        const int e = term.exponents[static_cast<std::size_t>(v)];
        for (int k = 0; k < e; ++k)
            col.array() *= (v < m ? X.col(v) : U.col(v - m)).array();
    }
    return col;
}

DesignMatrix build_design_matrix(const Matrix& X, const Matrix& U, const LibrarySpec& spec) {
    if (spec.degree < 1) throw std::invalid_argument("library degree must be at least 1");
    const Index n = X.rows();
    const Index m = X.cols();
    const Index r = U.cols();
    if (U.rows() != 0 && U.rows() != n)
        throw std::invalid_argument("X and U row counts differ");
    if (!X.allFinite() || !U.allFinite())
        throw std::invalid_argument("design inputs must be finite");
    {
        std::set<std::string> tags;
        for (const auto& c : spec.custom)
            if (c.tag.empty() || !tags.insert(c.tag).second)
                throw std::invalid_argument("custom term tags must be unique and non-empty");
    }

    DesignMatrix dm;
    dm.n_states = m;
    dm.n_inputs = r;
    std::vector<int> exps(static_cast<std::size_t>(m + r), 0);
    enumerate_exponents(exps, 0, spec.degree, dm.terms);
    std::sort(dm.terms.begin(), dm.terms.end(), term_less);
    if (!spec.include_constant)
        dm.terms.erase(std::remove_if(dm.terms.begin(), dm.terms.end(),
                                      [](const TermDescriptor& t) { return t.is_constant(); }),
                       dm.terms.end());
    for (const auto& c : spec.custom) {
        TermDescriptor term;
        term.exponents.assign(static_cast<std::size_t>(m + r), 0);
        term.custom_tag = c.tag;
        dm.terms.push_back(std::move(term));
    }

    dm.values.resize(n, static_cast<Index>(dm.terms.size()));
    const auto names = default_variable_names(m, r);
    for (std::size_t j = 0; j < dm.terms.size(); ++j) {
        dm.values.col(static_cast<Index>(j)) = eval_term(dm.terms[j], X, U, spec.custom);
        if (!dm.values.col(static_cast<Index>(j)).allFinite())
            throw std::runtime_error("column '" + dm.terms[j].name(names) +
                                     "' evaluated to non-finite values");
    }
    return dm;
}

DesignMatrix trim_library(const DesignMatrix& dm, int degree) {
    if (degree < 1) throw std::invalid_argument("trim degree must be at least 1");
    DesignMatrix out;
    out.n_states = dm.n_states;
    out.n_inputs = dm.n_inputs;
    std::vector<Index> cols;
    for (Index j = 0; j < dm.p(); ++j) {
        const auto& term = dm.terms[static_cast<std::size_t>(j)];
        if (!term.is_custom() && term.total_degree() > degree) continue;
        cols.push_back(j);
        out.terms.push_back(term);
    }
    out.values.resize(dm.values.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.values.col(static_cast<Index>(j)) = dm.values.col(cols[j]);
    return out;
}

DesignMatrix trim_library(const DesignMatrix& dm, const std::vector<Index>& selected) {
    int d1 = 1;
    std::set<std::string> keep_custom;
    for (Index idx : selected) {
        if (idx < 0 || idx >= dm.p()) throw std::out_of_range("selected column out of range");
        const auto& term = dm.terms[static_cast<std::size_t>(idx)];
        if (term.is_custom())
            keep_custom.insert(term.custom_tag);
        else
            d1 = std::max(d1, term.total_degree());
    }

    DesignMatrix out;
    out.n_states = dm.n_states;
    out.n_inputs = dm.n_inputs;
    std::vector<Index> cols;
    for (Index j = 0; j < dm.p(); ++j) {
        const auto& term = dm.terms[static_cast<std::size_t>(j)];
        const bool keep = term.is_custom() ? keep_custom.count(term.custom_tag) > 0
                                           : term.total_degree() <= d1;
        if (!keep) continue;
        cols.push_back(j);
        out.terms.push_back(term);
    }
    out.values.resize(dm.values.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.values.col(static_cast<Index>(j)) = dm.values.col(cols[j]);
    return out;
}

std::pair<DesignMatrix, ScalingRecord> standardize(const DesignMatrix& dm) {
    const Index n = dm.values.rows();
    const Index p = dm.p();
    if (n < 2) throw std::invalid_argument("standardize needs at least two rows");

    DesignMatrix out = dm;
    ScalingRecord rec;
    rec.mean = Vector::Zero(p);
    rec.scale = Vector::Ones(p);
    rec.zero_variance.assign(static_cast<std::size_t>(p), 0);
    for (Index j = 0; j < p; ++j) {
        const auto& term = dm.terms[static_cast<std::size_t>(j)];
        if (term.is_constant() && rec.constant_index < 0) rec.constant_index = j;
        const double mu = dm.values.col(j).mean();
        const double sd =
            std::sqrt((dm.values.col(j).array() - mu).square().sum() / static_cast<double>(n));
        if (term.is_constant() || sd <= 1e-12 * std::max(1.0, std::abs(mu))) {
            rec.zero_variance[static_cast<std::size_t>(j)] = 1;
            continue;
        }
        rec.mean(j) = mu;
        rec.scale(j) = sd;
        out.values.col(j) = (dm.values.col(j).array() - mu) / sd;
    }
    return {std::move(out), std::move(rec)};
}

Vector back_transform(const ScalingRecord& rec, const Vector& beta_std) {
    const Index p = rec.mean.size();
    if (beta_std.size() != p) throw std::invalid_argument("coefficient length mismatch");
    Vector beta = beta_std;
    double offset = 0.0;
    for (Index j = 0; j < p; ++j) {
        if (rec.zero_variance[static_cast<std::size_t>(j)]) continue;
        beta(j) = beta_std(j) / rec.scale(j);
        offset += beta(j) * rec.mean(j);
    }
    if (rec.constant_index >= 0) beta(rec.constant_index) -= offset;
    return beta;
}

} // namespace argosc
