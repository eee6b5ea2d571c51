#include "argosc/term.hpp"

#include <numeric>

namespace argosc {

bool TermDescriptor::is_constant() const {
    return !is_custom() && total_degree() == 0;
}

int TermDescriptor::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::string TermDescriptor::name(const std::vector<std::string>& variables) const {
    if (is_custom()) return custom_tag;
    std::string out;
    for (std::size_t v = 0; v < exponents.size(); ++v) {
        if (exponents[v] == 0) continue;
        if (!out.empty()) out += "*";
        out += variables.at(v);
        if (exponents[v] > 1) out += "^" + std::to_string(exponents[v]);
    }
    return out.empty() ? "1" : out;
}

bool term_less(const TermDescriptor& a, const TermDescriptor& b) {
    if (a.is_custom() != b.is_custom()) return b.is_custom();
    if (a.is_custom()) return a.custom_tag < b.custom_tag;
    const int da = a.total_degree();
    const int db = b.total_degree();
    if (da != db) return da < db;
    // Equal degree: the column whose leading variable carries the higher
    // exponent comes first (x^2 before x*u before u^2).
    return a.exponents > b.exponents;
}

std::vector<std::string> default_variable_names(long n_states, long n_inputs) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n_states + n_inputs));
    for (long j = 1; j <= n_states; ++j) names.push_back("x" + std::to_string(j));
    for (long j = 1; j <= n_inputs; ++j) names.push_back("u" + std::to_string(j));
    return names;
}

} // namespace argosc
