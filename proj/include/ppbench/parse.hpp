#pragma once

#include "ppbench/types.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ppbench {

// Per-id labels recovered from a model reply. `labels` and `unparsed_ids`
// always partition the sampled ids.
struct ClassificationPrediction {
    std::map<std::string, ReqClass> labels;
    std::vector<std::string> unparsed_ids; // sample order
    std::size_t extracted = 0;             // labels present before Template back-fill
    bool parse_empty = false;              // nothing extracted (non-Template patterns)
    std::vector<std::string> shapes;       // which reply shapes matched, for the run log
};

struct TracePrediction {
    std::set<std::string> linked_ids;
};

// Lenient, total extraction. Supported shapes: "(ID=x)" listings (listed
// ids are NF; with the Template pattern unlisted ids are back-filled as F),
// per-line "x: F" / "x - NF" / "x,NF" forms, and spelled-out
// "functional"/"non-functional" labels. Ids outside the sample are ignored.
ClassificationPrediction parse_classification(const std::string& response,
                                              const std::vector<std::string>& sample_ids,
                                              PromptPattern pattern);

// All dotted-id tokens, filtered to the document universe, query excluded,
// deduplicated. Never throws on arbitrary text.
TracePrediction parse_trace(const std::string& response, const std::string& query_id,
                            const std::set<std::string>& doc_ids);

// Clarifying-question heuristic: the reply ends with a question mark or a
// line opens with an interrogative word. Callers combine this with a
// zero-predictions check before issuing a follow-up.
bool looks_interrogative(const std::string& text);

} // namespace ppbench
