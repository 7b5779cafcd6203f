#include "ppbench/patterns.hpp"

#include "ppbench/text_util.hpp"

#include <nlohmann/json.hpp>

#include <array>

namespace ppbench {

namespace {

struct CatalogEntry {
    PromptPattern pattern;
    std::string classification;
    std::string tracing;
    std::string description;
};

const std::array<CatalogEntry, kPatternCount>& catalog() {
    static const std::array<CatalogEntry, kPatternCount> entries = {{
        {PromptPattern::CognitiveVerifier,
         "Classify the given list of requirements into functional (labelled as F) and "
         "non-functional requirements (labelled as NF). Ask me questions if needed to break "
         "the given task into smaller subtasks. All the outputs to the smaller subtasks must "
         "be combined before you generate the final output.",
         "List the IDs of requirements that are related to the [deprecated] feature in the "
         "requirements specification document below. Ask me questions if needed to break down "
         "the given task into smaller subtasks. All the outputs to the smaller subtasks must "
         "be combined before you generate the final output.",
         "Breaks the task into clarifying subquestions whose answers are combined."},
        {PromptPattern::ContextManager,
         "Classify the given list of requirements into functional (labelled as F) and "
         "non-functional requirements (labelled as NF). When you provide an answer, please "
         "explain the reasoning and assumptions behind your response. If possible, address "
         "any potential ambiguities or limitations in your answer, in order to provide a more "
         "complete and accurate response.",
         "List the IDs of requirements that are related to the [deprecated] feature from the "
         "requirements specification document below. When you provide an answer, please "
         "explain the reasoning and assumptions behind your response. If possible, address "
         "any potential ambiguities or limitations in your answer in order to provide a more "
         "complete and accurate response.",
         "Asks for reasoning, assumptions and limitations alongside the answer."},
        {PromptPattern::Persona,
         "Act as a requirements engineering domain expert and classify the given list of "
         "requirements into functional (labelled as F) and non-functional requirements "
         "(labelled as NF).",
         "Act as a requirements engineering domain expert and list the IDs of requirements "
         "that are dependent on the [deprecated] feature in the following requirements "
         "specification document:",
         "Assigns the model a domain-expert role before stating the task."},
        {PromptPattern::QuestionRefinement,
         "Classify the given list of requirements into functional (labelled as F) and "
         "non-functional requirements (labelled as NF). If needed, suggest a better version "
         "of the question to use that incorporates information specific to this task and ask "
         "me if I would like to use your question instead.",
         "List the IDs of requirements that are related to the [deprecated] feature from the "
         "requirements specification document below. If needed, suggest a better version of "
         "the question to use that incorporates information specific to this task and ask me "
         "if I would like to use your question instead.",
         "Invites the model to propose a sharper phrasing of the question first."},
        {PromptPattern::Template,
         "Read the following list of requirements and return the IDs of non-functional "
         "requirements only. Write the result as a list like: (ID=X) (ID=Y) (ID=Z) where X, "
         "Y, and Z are IDs of non-functional requirements.",
         "List the IDs of requirements that are related to the [deprecated] feature in the "
         "requirements specification document below. Follow the provided template when "
         "generating the output: ID list: X.X.X.X; X.X.X; X.X.X.X etc.",
         "Fixes the exact output format the reply must follow."},
    }};
    return entries;
}

const CatalogEntry& entry_for(PromptPattern p) {
    for (const CatalogEntry& e : catalog()) {
        if (e.pattern == p) return e;
    }
    throw Error("unknown prompt pattern");
}

std::string replace_all(std::string text, std::string_view needle, std::string_view repl) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), repl);
        pos += repl.size();
    }
    return text;
}

// The clean document must declare the query id; rendering with a stale or
// foreign query would produce an unanswerable prompt.
bool declares_id(const std::string& doc_text, const std::string& id) {
    for (const std::string& line : split_lines(doc_text)) {
        std::size_t b = 0;
        while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
        if (line.compare(b, id.size(), id) == 0) {
            const std::size_t end = b + id.size();
            if (end == line.size() || line[end] == ' ' || line[end] == '\t') return true;
        }
    }
    return false;
}

} // namespace

const std::string& pattern_template(PromptPattern p, TaskKind t) {
    const CatalogEntry& e = entry_for(p);
    return t == TaskKind::BinaryClassification ? e.classification : e.tracing;
}

std::string pattern_description(PromptPattern p) {
    return entry_for(p).description;
}

std::vector<std::pair<PromptPattern, std::string>> list_patterns() {
    std::vector<std::pair<PromptPattern, std::string>> out;
    for (const CatalogEntry& e : catalog()) {
        out.emplace_back(e.pattern, e.description);
    }
    return out;
}

RenderedPrompt render_classification_prompt(PromptPattern p,
                                            const std::vector<Requirement>& sample) {
    if (sample.empty()) {
        throw std::invalid_argument("render_classification_prompt: empty sample");
    }
    RenderedPrompt out;
    out.pattern = p;
    out.task = TaskKind::BinaryClassification;
    out.text = pattern_template(p, TaskKind::BinaryClassification);
    out.text += "\n\n";
    for (const Requirement& r : sample) {
        if (r.label) {
            throw std::invalid_argument(
                "render_classification_prompt: sample carries labels (id " + r.id + ")");
        }
        out.text += r.id;
        out.text += ". ";
        out.text += normalize_ws(r.text);
        out.text += "\n";
        out.payload_ids.push_back(r.id);
    }
    out.document = sample.front().source;
    return out;
}

RenderedPrompt render_trace_prompt(PromptPattern p, const Requirement& query,
                                   const CleanDocument& doc) {
    if (!declares_id(doc.text, query.id)) {
        throw std::invalid_argument("render_trace_prompt: query id " + query.id +
                                    " not declared in " + doc.name);
    }
    RenderedPrompt out;
    out.pattern = p;
    out.task = TaskKind::Traceability;
    const std::string slot = "requirement " + query.id + " (\"" + normalize_ws(query.text) + "\")";
    out.text = replace_all(pattern_template(p, TaskKind::Traceability), "[deprecated]", slot);
    out.text += "\n\n";
    out.text += doc.text;
    out.payload_ids.push_back(query.id);
    out.document = doc.name;
    return out;
}

std::string catalog_to_json() {
    nlohmann::json j = nlohmann::json::object();
    for (const CatalogEntry& e : catalog()) {
        nlohmann::json tasks = nlohmann::json::object();
        tasks[to_string(TaskKind::BinaryClassification)] = e.classification;
        tasks[to_string(TaskKind::Traceability)] = e.tracing;
        tasks["description"] = e.description;
        j[pattern_key(e.pattern)] = tasks;
    }
    return j.dump(2) + "\n";
}

} // namespace ppbench
