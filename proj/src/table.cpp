#include "iris/table.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace iris {

namespace {
const std::string kMissingToken = "NA";

bool parse_number(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}
}  // namespace

ObservationTable::ObservationTable(std::vector<Variable> variables,
                                   std::vector<std::string> doc_ids)
    : variables_(std::move(variables)), doc_ids_(std::move(doc_ids)) {
    std::set<std::string> seen;
    for (const auto& v : variables_)
        if (!seen.insert(v.key()).second)
            throw InvalidArgument("duplicate variable name: " + v.name);
    std::set<std::string> rows;
    for (const auto& d : doc_ids_)
        if (!rows.insert(d).second) throw InvalidArgument("duplicate doc id: " + d);
    cells_.assign(doc_ids_.size(),
                  std::vector<std::optional<std::string>>(variables_.size(), std::nullopt));
}

size_t ObservationTable::col_index(const std::string& var_name) const {
    const std::string key = norm_key(var_name);
    for (size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].key() == key) return i;
    throw InvalidArgument("unknown variable: " + var_name);
}

size_t ObservationTable::row_index(const std::string& doc_id) const {
    for (size_t i = 0; i < doc_ids_.size(); ++i)
        if (doc_ids_[i] == doc_id) return i;
    throw InvalidArgument("unknown doc id: " + doc_id);
}

void ObservationTable::set_cell(const std::string& doc_id, const std::string& var_name,
                                const std::optional<std::string>& value) {
    const size_t r = row_index(doc_id), c = col_index(var_name);
    if (!value) {
        cells_[r][c] = std::nullopt;
        return;
    }
    auto canonical = variables_[c].match_label(*value);
    if (!canonical)
        throw InvalidArgument("value '" + *value + "' not in domain of '" + variables_[c].name + "'");
    cells_[r][c] = *canonical;
}

const std::optional<std::string>& ObservationTable::cell(const std::string& doc_id,
                                                         const std::string& var_name) const {
    return cells_[row_index(doc_id)][col_index(var_name)];
}

std::vector<size_t> ObservationTable::complete_row_indices(const std::vector<size_t>& cols) const {
    std::vector<size_t> out;
    for (size_t r = 0; r < cells_.size(); ++r) {
        bool complete = true;
        for (size_t c : cols)
            if (!cells_[r][c]) {
                complete = false;
                break;
            }
        if (complete) out.push_back(r);
    }
    return out;
}

std::vector<std::string> ObservationTable::complete_rows(
    const std::vector<std::string>& var_subset) const {
    std::vector<size_t> cols;
    for (const auto& name : var_subset) cols.push_back(col_index(name));
    std::vector<std::string> out;
    for (size_t r : complete_row_indices(cols)) out.push_back(doc_ids_[r]);
    return out;
}

size_t ObservationTable::missing_count(size_t col) const {
    size_t n = 0;
    for (const auto& row : cells_)
        if (!row[col]) ++n;
    return n;
}

std::string ObservationTable::to_csv() const {
    std::ostringstream out;
    out << "doc_id";
    for (const auto& v : variables_) out << "," << v.name;
    out << "\n";
    for (size_t r = 0; r < doc_ids_.size(); ++r) {
        out << doc_ids_[r];
        for (size_t c = 0; c < variables_.size(); ++c)
            out << "," << (cells_[r][c] ? *cells_[r][c] : kMissingToken);
        out << "\n";
    }
    return out.str();
}

ObservationTable ObservationTable::from_csv(const std::string& text,
                                            std::vector<Variable> variables) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
    std::vector<std::string> header = split(trim(line), ',');
    if (header.empty() || header[0] != "doc_id")
        throw InvalidArgument("CSV header must start with doc_id");

    std::map<std::string, size_t> var_by_key;
    for (size_t i = 0; i < variables.size(); ++i) var_by_key[variables[i].key()] = i;
    std::vector<size_t> col_to_var;
    for (size_t i = 1; i < header.size(); ++i) {
        auto it = var_by_key.find(norm_key(header[i]));
        if (it == var_by_key.end()) throw InvalidArgument("CSV column not a known variable: " + header[i]);
        col_to_var.push_back(it->second);
    }

    std::vector<std::string> doc_ids;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != header.size())
            throw InvalidArgument("CSV row has wrong field count: " + line);
        doc_ids.push_back(fields[0]);
        rows.emplace_back(fields.begin() + 1, fields.end());
    }

    ObservationTable table(std::move(variables), doc_ids);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) {
            const std::string& f = rows[r][c];
            table.set_cell(doc_ids[r], table.variables()[col_to_var[c]].name,
                           f == kMissingToken ? std::nullopt : std::optional<std::string>(f));
        }
    return table;
}

NumericMatrix encode_numeric(const ObservationTable& table) {
    const auto& vars = table.variables();
    std::vector<size_t> all_cols(vars.size());
    for (size_t i = 0; i < all_cols.size(); ++i) all_cols[i] = i;
    const std::vector<size_t> rows = table.complete_row_indices(all_cols);
    if (rows.empty()) throw InvalidArgument("encode_numeric: no complete rows");

    // Per-column label -> value mapping.
    std::vector<std::map<std::string, double>> mapping(vars.size());
    for (size_t c = 0; c < vars.size(); ++c) {
        const auto& domain = vars[c].domain;
        bool all_numeric = true;
        std::vector<double> parsed(domain.size());
        for (size_t i = 0; i < domain.size(); ++i)
            if (!parse_number(domain[i], parsed[i])) {
                all_numeric = false;
                break;
            }
        bool is_bool = domain.size() == 2 &&
                       ((norm_key(domain[0]) == "true" && norm_key(domain[1]) == "false") ||
                        (norm_key(domain[0]) == "false" && norm_key(domain[1]) == "true"));
        for (size_t i = 0; i < domain.size(); ++i) {
            double v;
            if (is_bool)
                v = norm_key(domain[i]) == "true" ? 1.0 : 0.0;
            else if (all_numeric)
                v = parsed[i];
            else
                v = static_cast<double>(i);
            mapping[c][norm_key(domain[i])] = v;
        }
    }

    NumericMatrix m;
    m.rows = rows.size();
    m.cols = vars.size();
    m.data.resize(m.rows * m.cols);
    for (const auto& v : vars) m.col_names.push_back(v.name);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t c = 0; c < vars.size(); ++c)
            m.at(i, c) = mapping[c].at(norm_key(*table.cell_at(rows[i], c)));

    // Column standardization; constant columns become exactly 0.
    for (size_t c = 0; c < m.cols; ++c) {
        double mean = 0;
        for (size_t r = 0; r < m.rows; ++r) mean += m.at(r, c);
        mean /= static_cast<double>(m.rows);
        double var = 0;
        for (size_t r = 0; r < m.rows; ++r) {
            const double d = m.at(r, c) - mean;
            var += d * d;
        }
        var /= static_cast<double>(m.rows);
        if (var <= 0) {
            for (size_t r = 0; r < m.rows; ++r) m.at(r, c) = 0.0;
        } else {
            const double sd = std::sqrt(var);
            for (size_t r = 0; r < m.rows; ++r) m.at(r, c) = (m.at(r, c) - mean) / sd;
        }
    }
    return m;
}

}  // namespace iris
