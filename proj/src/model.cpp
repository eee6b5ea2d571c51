#include "argosc/model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace argosc {

double SparseModel::eval_rhs(Index state, const Vector& x, const Vector& u) const {
    double sum = 0.0;
    for (const auto& coef : states.at(static_cast<std::size_t>(state))) {
        if (coef.term.is_custom())
            throw std::invalid_argument("cannot evaluate custom term '" + coef.term.custom_tag +
                                        "' without its function");
        double value = coef.value;
        const auto& e = coef.term.exponents;
        for (Index v = 0; v < m; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) value *= x(v);
        for (Index v = 0; v < r; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(m + v)]; ++k) value *= u(v);
        sum += value;
    }
    return sum;
}

std::string render_model(const SparseModel& model, const std::vector<std::string>& names) {
    if (static_cast<Index>(names.size()) != model.m + model.r)
        throw std::invalid_argument("expected " + std::to_string(model.m + model.r) +
                                    " variable names, got " + std::to_string(names.size()));
    std::ostringstream out;
    for (Index j = 0; j < model.m; ++j) {
        out << "d" << names[static_cast<std::size_t>(j)] << "/dt = ";
        const auto& terms = model.states[static_cast<std::size_t>(j)];
        if (terms.empty()) {
            out << "0\n";
            continue;
        }
        bool first = true;
        for (const auto& coef : terms) {
            const bool negative = coef.value < 0.0;
            if (first) {
                if (negative) out << "-";
                first = false;
            } else {
                out << (negative ? " - " : " + ");
            }
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.3f", std::abs(coef.value));
            out << buf;
            if (!coef.term.is_constant()) out << "·" << coef.term.name(names);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

nlohmann::json term_to_json(const TermDescriptor& term) {
    nlohmann::json j;
    j["exponents"] = term.exponents;
    if (term.is_custom()) j["custom_tag"] = term.custom_tag;
    return j;
}

TermDescriptor term_from_json(const nlohmann::json& j) {
    TermDescriptor term;
    term.exponents = j.at("exponents").get<std::vector<int>>();
    if (j.contains("custom_tag")) term.custom_tag = j.at("custom_tag").get<std::string>();
    return term;
}

} // namespace

void save_model(const SparseModel& model, const std::string& path) {
    nlohmann::json j;
    j["m"] = model.m;
    j["r"] = model.r;
    j["states"] = nlohmann::json::array();
    for (Index s = 0; s < model.m; ++s) {
        nlohmann::json state;
        state["coefficients"] = nlohmann::json::array();
        for (const auto& coef : model.states[static_cast<std::size_t>(s)]) {
            nlohmann::json c;
            c["term"] = term_to_json(coef.term);
            c["value"] = coef.value;
            if (coef.has_ci()) {
                c["ci"] = {coef.ci_lower, coef.ci_upper};
                c["retained_count"] = coef.retained_count;
            }
            state["coefficients"].push_back(c);
        }
        const auto& d = model.diagnostics[static_cast<std::size_t>(s)];
        state["diagnostics"] = {{"lambda_star", d.lambda_star},
                                {"eta", d.eta},
                                {"eta_index", d.eta_index},
                                {"bic", d.bic},
                                {"bootstrap_samples", d.bootstrap_samples},
                                {"trimmed_degree", d.trimmed_degree}};
        j["states"].push_back(state);
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << j.dump(2) << "\n";
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

SparseModel load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j;
    file >> j;

    SparseModel model;
    model.m = j.at("m").get<Index>();
    model.r = j.at("r").get<Index>();
    for (const auto& state : j.at("states")) {
        std::vector<Coefficient> coefs;
        for (const auto& c : state.at("coefficients")) {
            Coefficient coef;
            coef.term = term_from_json(c.at("term"));
            coef.value = c.at("value").get<double>();
            if (c.contains("ci")) {
                coef.ci_lower = c.at("ci")[0].get<double>();
                coef.ci_upper = c.at("ci")[1].get<double>();
                coef.retained_count = c.value("retained_count", 0);
            }
            coefs.push_back(std::move(coef));
        }
        model.states.push_back(std::move(coefs));
        StateDiagnostics d;
        const auto& dj = state.at("diagnostics");
        d.lambda_star = dj.at("lambda_star").get<double>();
        d.eta = dj.at("eta").get<double>();
        d.eta_index = dj.at("eta_index").get<int>();
        d.bic = dj.at("bic").get<double>();
        d.bootstrap_samples = dj.at("bootstrap_samples").get<int>();
        d.trimmed_degree = dj.at("trimmed_degree").get<int>();
        model.diagnostics.push_back(d);
    }
    if (static_cast<Index>(model.states.size()) != model.m)
        throw std::runtime_error("model file state count does not match m");
    return model;
}

} // namespace argosc
