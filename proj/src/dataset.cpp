#include "argosc/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace argosc {

namespace {

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::string format_double(double v) {
    // 17 significant digits: enough for a bit-exact text round trip.
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') fail("malformed numeric field '" + s + "' in " + context);
    return v;
}

} // namespace

void TimeSeriesDataset::validate() const {
    const Index n = t.size();
    if (n < 2) fail("dataset needs at least 2 samples");
    if (X.rows() != n) fail("state row count does not match time grid");
    if (U.cols() > 0 && U.rows() != n) fail("input row count does not match time grid");
    if (truth.size() > 0 && (truth.rows() != n || truth.cols() != X.cols()))
        fail("truth shape does not match states");

    const double dt0 = t(1) - t(0);
    if (!(dt0 > 0.0)) fail("non-increasing time grid");
    for (Index i = 1; i < n; ++i) {
        const double step = t(i) - t(i - 1);
        if (!(step > 0.0)) fail("non-increasing time grid");
        if (std::abs(step - dt0) > 1e-9 * std::max(std::abs(dt0), std::abs(t(i))))
            fail("non-uniform time grid");
    }
    if (!t.allFinite() || !X.allFinite() || !U.allFinite() || !truth.allFinite())
        fail("dataset contains non-finite entries");
}

void save_dataset(const TimeSeriesDataset& ds, const std::string& path) {
    ds.validate();

    std::ostringstream out;
    out << "# system: " << ds.meta.system << "\n";
    out << "# forcing: " << ds.meta.forcing << "\n";
    for (const auto& [key, value] : ds.meta.params)
        out << "# param " << key << ": " << format_double(value) << "\n";
    out << "# snr_db: " << (std::isinf(ds.meta.snr_db) ? "inf" : format_double(ds.meta.snr_db)) << "\n";
    out << "# seed: " << ds.meta.seed << "\n";

    const Index m = ds.n_states();
    const Index r = ds.n_inputs();
    out << "t";
    for (Index j = 0; j < m; ++j) out << ",x" << (j + 1);
    for (Index j = 0; j < r; ++j) out << ",u" << (j + 1);
    if (ds.has_truth())
        for (Index j = 0; j < m; ++j) out << ",true_x" << (j + 1);
    out << "\n";

    for (Index i = 0; i < ds.n_samples(); ++i) {
        out << format_double(ds.t(i));
        for (Index j = 0; j < m; ++j) out << "," << format_double(ds.X(i, j));
        for (Index j = 0; j < r; ++j) out << "," << format_double(ds.U(i, j));
        if (ds.has_truth())
            for (Index j = 0; j < m; ++j) out << "," << format_double(ds.truth(i, j));
        out << "\n";
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << out.str();
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

TimeSeriesDataset load_dataset(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "'");

    TimeSeriesDataset ds;
    std::string line;
    bool have_header = false;
    Index m = 0, r = 0;
    bool with_truth = false;
    std::vector<std::vector<double>> rows;

    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            auto trim = [](std::string& s) {
                while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
                while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
            };
            trim(key);
            trim(value);
            if (key == "system") ds.meta.system = value;
            else if (key == "forcing") ds.meta.forcing = value;
            else if (key == "snr_db")
                ds.meta.snr_db = (value == "inf") ? std::numeric_limits<double>::infinity()
                                                  : parse_double(value, "snr_db meta");
            else if (key == "seed") ds.meta.seed = std::strtoull(value.c_str(), nullptr, 10);
            else if (key.rfind("param ", 0) == 0)
                ds.meta.params.emplace_back(key.substr(6), parse_double(value, "param meta"));
            continue;
        }
        if (!have_header) {
            const auto names = split_csv_line(line);
            if (names.empty() || names[0] != "t") fail("header must start with 't'");
            std::size_t i = 1;
            while (i < names.size() && names[i] == "x" + std::to_string(i)) ++i;
            m = static_cast<Index>(i - 1);
            std::size_t u_seen = 0;
            while (i < names.size() && names[i] == "u" + std::to_string(u_seen + 1)) {
                ++u_seen;
                ++i;
            }
            r = static_cast<Index>(u_seen);
            std::size_t t_seen = 0;
            while (i < names.size() && names[i] == "true_x" + std::to_string(t_seen + 1)) {
                ++t_seen;
                ++i;
            }
            if (i != names.size() || m == 0)
                fail("unrecognized header layout '" + line + "'");
            if (t_seen != 0 && t_seen != static_cast<std::size_t>(m))
                fail("truth column count does not match states");
            with_truth = t_seen != 0;
            have_header = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        const std::size_t expected = 1 + static_cast<std::size_t>(m + r + (with_truth ? m : 0));
        if (fields.size() != expected)
            fail("row has " + std::to_string(fields.size()) + " fields, expected " +
                 std::to_string(expected));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, "data row"));
        rows.push_back(std::move(row));
    }
    if (!have_header) fail("file has no header row");
    if (rows.size() < 2) fail("dataset needs at least 2 samples");

    const Index n = static_cast<Index>(rows.size());
    ds.t.resize(n);
    ds.X.resize(n, m);
    ds.U.resize(n, r);
    if (with_truth) ds.truth.resize(n, m);
    for (Index i = 0; i < n; ++i) {
        std::size_t f = 0;
        ds.t(i) = rows[static_cast<std::size_t>(i)][f++];
        for (Index j = 0; j < m; ++j) ds.X(i, j) = rows[static_cast<std::size_t>(i)][f++];
        for (Index j = 0; j < r; ++j) ds.U(i, j) = rows[static_cast<std::size_t>(i)][f++];
        if (with_truth)
            for (Index j = 0; j < m; ++j) ds.truth(i, j) = rows[static_cast<std::size_t>(i)][f++];
    }
    ds.validate();
    return ds;
}

} // namespace argosc
