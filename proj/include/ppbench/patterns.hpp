#pragma once

#include "ppbench/ingest.hpp"
#include "ppbench/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ppbench {

struct RenderedPrompt {
    PromptPattern pattern;
    TaskKind task;
    std::string text;
    std::vector<std::string> payload_ids; // sampled ids, or the query id
    std::string document;                 // payload source (dataset or clean SRS name)
};

// Catalog instruction for (pattern, task). Traceability instructions carry
// the literal "[deprecated]" slot until rendered.
const std::string& pattern_template(PromptPattern p, TaskKind t);

std::string pattern_description(PromptPattern p);

// All five patterns with their one-line descriptions, catalog order.
std::vector<std::pair<PromptPattern, std::string>> list_patterns();

// Instruction, a blank line, then one "id. text" line per requirement.
// The sample must be unlabelled; ground truth never reaches a prompt.
RenderedPrompt render_classification_prompt(PromptPattern p,
                                            const std::vector<Requirement>& sample);

// Instruction with the "[deprecated]" slot resolved to the query
// requirement, a blank line, then the full clean document text.
RenderedPrompt render_trace_prompt(PromptPattern p, const Requirement& query,
                                   const CleanDocument& doc);

// pattern -> task -> template, so new patterns can be reviewed or diffed
// without recompiling.
std::string catalog_to_json();

} // namespace ppbench
