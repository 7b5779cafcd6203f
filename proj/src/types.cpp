#include "ppbench/types.hpp"

#include <algorithm>
#include <cctype>

namespace ppbench {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string to_string(ReqClass c) {
    return c == ReqClass::F ? "F" : "NF";
}

std::optional<ReqClass> req_class_from_string(std::string_view s) {
    const std::string l = lower(s);
    if (l == "f" || l == "functional") return ReqClass::F;
    if (l == "nf" || l == "non-functional" || l == "nonfunctional" || l == "non functional")
        return ReqClass::NF;
    return std::nullopt;
}

std::string to_string(TaskKind t) {
    return t == TaskKind::BinaryClassification ? "classification" : "traceability";
}

std::optional<TaskKind> task_from_string(std::string_view s) {
    const std::string l = lower(s);
    if (l == "classification" || l == "binary_classification" || l == "binary-classification")
        return TaskKind::BinaryClassification;
    if (l == "traceability" || l == "trace" || l == "tracing")
        return TaskKind::Traceability;
    return std::nullopt;
}

const std::vector<PromptPattern>& all_patterns() {
    static const std::vector<PromptPattern> patterns = {
        PromptPattern::CognitiveVerifier,
        PromptPattern::ContextManager,
        PromptPattern::Persona,
        PromptPattern::QuestionRefinement,
        PromptPattern::Template,
    };
    return patterns;
}

std::string pattern_key(PromptPattern p) {
    switch (p) {
    case PromptPattern::CognitiveVerifier: return "cognitive_verifier";
    case PromptPattern::ContextManager: return "context_manager";
    case PromptPattern::Persona: return "persona";
    case PromptPattern::QuestionRefinement: return "question_refinement";
    case PromptPattern::Template: return "template";
    }
    return "unknown";
}

std::string pattern_display(PromptPattern p) {
    switch (p) {
    case PromptPattern::CognitiveVerifier: return "Cognitive Verifier";
    case PromptPattern::ContextManager: return "Context Manager";
    case PromptPattern::Persona: return "Persona";
    case PromptPattern::QuestionRefinement: return "Question Refinement";
    case PromptPattern::Template: return "Template";
    }
    return "Unknown";
}

std::optional<PromptPattern> pattern_from_string(std::string_view s) {
    const std::string l = lower(s);
    for (PromptPattern p : all_patterns()) {
        if (l == pattern_key(p) || l == lower(pattern_display(p))) return p;
    }
    return std::nullopt;
}

} // namespace ppbench
