#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iris/graph.hpp"

namespace iris {

/// Documents x variables matrix of categorical values. A cell is either a
/// label from the column's domain or Missing (empty optional).
class ObservationTable {
public:
    ObservationTable(std::vector<Variable> variables, std::vector<std::string> doc_ids);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    size_t n_rows() const { return doc_ids_.size(); }
    size_t n_cols() const { return variables_.size(); }

    size_t col_index(const std::string& var_name) const;
    size_t row_index(const std::string& doc_id) const;

    void set_cell(const std::string& doc_id, const std::string& var_name,
                  const std::optional<std::string>& value);
    const std::optional<std::string>& cell(const std::string& doc_id,
                                           const std::string& var_name) const;
    const std::optional<std::string>& cell_at(size_t row, size_t col) const {
        return cells_[row][col];
    }

    // Rows with no Missing cell among the given columns, original order.
    std::vector<std::string> complete_rows(const std::vector<std::string>& var_subset) const;
    std::vector<size_t> complete_row_indices(const std::vector<size_t>& cols) const;

    size_t missing_count(size_t col) const;

    std::string to_csv() const;
    static ObservationTable from_csv(const std::string& text, std::vector<Variable> variables);

private:
    std::vector<Variable> variables_;
    std::vector<std::string> doc_ids_;
    std::vector<std::vector<std::optional<std::string>>> cells_;  // [row][col]
};

/// Numeric view for continuous optimizers. Labels map to their numeric parse
/// when the whole domain parses, else to the zero-based domain index;
/// {True,False} maps to {1,0}. Rows with any Missing cell are dropped and
/// columns are standardized (constant columns left at 0).
struct NumericMatrix {
    size_t rows = 0, cols = 0;
    std::vector<double> data;  // row-major
    std::vector<std::string> col_names;

    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

NumericMatrix encode_numeric(const ObservationTable& table);

}  // namespace iris
