#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppbench {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DatasetError : public Error {
public:
    using Error::Error;
};

class BackendError : public Error {
public:
    using Error::Error;
};

class PlanError : public Error {
public:
    using Error::Error;
};

// Binary requirement class: functional (F) or non-functional (NF).
enum class ReqClass { F, NF };

std::string to_string(ReqClass c);
std::optional<ReqClass> req_class_from_string(std::string_view s);

// One requirement statement. `label` is empty for the model-facing
// (unlabelled) variant of a dataset.
struct Requirement {
    std::string id;
    std::string text;
    std::optional<ReqClass> label;
    std::string source;

    bool operator==(const Requirement&) const = default;
};

enum class TaskKind { BinaryClassification, Traceability };

std::string to_string(TaskKind t);
std::optional<TaskKind> task_from_string(std::string_view s);

enum class PromptPattern {
    CognitiveVerifier,
    ContextManager,
    Persona,
    QuestionRefinement,
    Template,
};

inline constexpr int kPatternCount = 5;

// All patterns in catalog order. Catalog order is the final ranking
// tie-breaker, so it is part of the library contract.
const std::vector<PromptPattern>& all_patterns();

// Machine token, e.g. "question_refinement". Used in files and CLI flags.
std::string pattern_key(PromptPattern p);
// Human-readable name, e.g. "Question Refinement". Used in reports.
std::string pattern_display(PromptPattern p);
// Accepts either the key or the display form (case-insensitive).
std::optional<PromptPattern> pattern_from_string(std::string_view s);

} // namespace ppbench
