#include "iris/extraction.hpp"

#include <cctype>
#include <sstream>

namespace iris {

namespace {

std::string replace_all(std::string text, const std::string& slot, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

std::string render_domain(const Variable& var) {
    std::ostringstream out;
    for (size_t i = 0; i < var.domain.size(); ++i) {
        if (i) out << (i + 1 == var.domain.size() ? " or " : ", ");
        out << var.domain[i];
    }
    return out.str();
}

// Matches "the value of '<name>' is" (or the veracity variant) tolerating
// straight and curly quotes, case-insensitively. Returns the offset just
// past the match, or npos.
size_t find_last_template(const std::string& response, const std::string& prefix,
                          const std::string& name, const std::string& suffix) {
    const std::string hay = to_lower(response);
    const std::string needle_core = to_lower(name);
    static const std::vector<std::pair<std::string, std::string>> quote_pairs = {
        {"'", "'"}, {"‘", "’"}, {"\"", "\""}};
    size_t best = std::string::npos;
    for (const auto& [open, close] : quote_pairs) {
        const std::string needle =
            to_lower(prefix) + open + needle_core + close + to_lower(suffix);
        size_t pos = hay.rfind(needle);
        if (pos == std::string::npos) continue;
        const size_t end = pos + needle.size();
        if (best == std::string::npos || end > best) best = end;
    }
    return best;
}

std::string next_token(const std::string& text, size_t from) {
    size_t b = from;
    while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    size_t e = b;
    while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
    std::string tok = text.substr(b, e - b);
    // strip surrounding punctuation/quotes
    while (!tok.empty() && !std::isalnum(static_cast<unsigned char>(tok.front())) &&
           tok.front() != '-')
        tok.erase(tok.begin());
    while (!tok.empty() && !std::isalnum(static_cast<unsigned char>(tok.back())))
        tok.pop_back();
    return tok;
}

}  // namespace

const std::string& default_value_template() {
    static const std::string tmpl =
        "Given a document: {doc}\n"
        "\n"
        "Please complete the below task.\n"
        "We have a variable named '{var}'. {description}\n"
        "The value of variable '{var}' is {domain}.\n"
        "Based on the document provided, what is the most appropriate value for '{var}' that can "
        "be inferred?\n"
        "Please form the answer using the following format.\n"
        "First, provide an introductory sentence that explains what information will be "
        "discussed.\n"
        "Next, list generated answer in detail, ensuring clarity and precision.\n"
        "Finally, conclude the final answer of the inferred value for '{var}' using the following "
        "template:\n"
        "The value of '{var}' is ____.\n";
    return tmpl;
}

std::string build_value_prompt(const Document& doc, const Variable& var,
                               const ExtractionConfig& config) {
    if (doc.text.empty()) throw InvalidArgument("build_value_prompt: empty document");
    std::string text = doc.text.size() > config.doc_char_budget
                           ? doc.text.substr(0, config.doc_char_budget)
                           : doc.text;
    std::string prompt =
        config.template_override ? *config.template_override : default_value_template();
    prompt = replace_all(prompt, "{doc}", text);
    prompt = replace_all(prompt, "{var}", var.name);
    prompt = replace_all(prompt, "{description}", var.description);
    prompt = replace_all(prompt, "{domain}", render_domain(var));
    return prompt;
}

std::optional<std::string> parse_value(const std::string& response, const Variable& var) {
    const size_t after = find_last_template(response, "the value of ", var.name, " is");
    if (after == std::string::npos) return std::nullopt;
    const std::string tok = next_token(response, after);
    if (tok.empty()) return std::nullopt;
    return var.match_label(tok);
}

ExtractionResult extract_table(const std::vector<Document>& docs,
                               const std::vector<Variable>& variables, CompletionClient& llm,
                               const ExtractionConfig& config) {
    if (docs.empty()) throw InvalidArgument("extract_table: no documents");
    if (variables.empty()) throw InvalidArgument("extract_table: no variables");

    std::vector<std::string> doc_ids;
    for (const auto& d : docs) doc_ids.push_back(d.id);

    ExtractionResult result{ObservationTable(variables, doc_ids)};
    for (const auto& doc : docs) {
        for (const auto& var : variables) {
            CompletionRequest req{build_value_prompt(doc, var, config)};
            ++result.completions_issued;
            std::optional<std::string> value;
            try {
                value = parse_value(llm.complete(req), var);
            } catch (const BackendError&) {
                ++result.backend_failures;  // cell stays Missing
            }
            result.table.set_cell(doc.id, var.name, value);
        }
    }
    return result;
}

}  // namespace iris
