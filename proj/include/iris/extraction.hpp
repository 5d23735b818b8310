#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iris/backends.hpp"
#include "iris/table.hpp"

namespace iris {

struct ExtractionConfig {
    size_t doc_char_budget = 24000;  // document text truncated from the end
    std::optional<std::string> template_override;  // named-slot template file contents
};

// Default value-extraction prompt template. Slots: {doc}, {var},
// {description}, {domain}.
const std::string& default_value_template();

std::string build_value_prompt(const Document& doc, const Variable& var,
                               const ExtractionConfig& config = {});

// Scans for the last "The value of '<name>' is" sentence and matches the
// following token against the domain. Anything else is Missing.
std::optional<std::string> parse_value(const std::string& response, const Variable& var);

struct ExtractionResult {
    ObservationTable table;
    size_t completions_issued = 0;
    size_t backend_failures = 0;
};

ExtractionResult extract_table(const std::vector<Document>& docs,
                               const std::vector<Variable>& variables, CompletionClient& llm,
                               const ExtractionConfig& config = {});

}  // namespace iris
