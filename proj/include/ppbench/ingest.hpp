#pragma once

#include "ppbench/types.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ppbench {

// A parsed plain-text SRS. Requirements are id-led blocks; everything the
// parser saw is retained as segments so the document can be re-serialized
// verbatim.
struct SrsSegment {
    enum class Kind { Preamble, Block, Interstitial };
    Kind kind;
    std::string id;  // set for Kind::Block
    std::string raw; // verbatim slice of the document, including newlines
};

struct SrsDocument {
    std::string name;
    std::vector<Requirement> requirements; // text = whitespace-normalized body
    std::string raw_text;                  // LF-normalized full text
    std::vector<SrsSegment> segments;

    bool has(const std::string& id) const;
    std::set<std::string> ids() const;
    // Verbatim block for a requirement id (leading id token included).
    const std::string& block_for(const std::string& id) const;
};

// query requirement id -> ids of requirements whose body references it.
struct TraceGroundTruth {
    std::map<std::string, std::set<std::string>> links;
};

struct CleanDocument {
    std::string name; // source name + " clean"
    std::string text; // cross-reference ids and URL tokens removed
};

// CSV with header "id,text,label"; label F, NF or empty.
std::vector<Requirement> load_classification_dataset(const std::filesystem::path& path);

// Same ids and texts with labels cleared. Input is left unmodified.
std::vector<Requirement> strip_labels(const std::vector<Requirement>& reqs);

SrsDocument parse_srs(const std::filesystem::path& path);
SrsDocument parse_srs_text(std::string name, std::string_view text);

TraceGroundTruth extract_trace_ground_truth(const SrsDocument& doc);

CleanDocument clean_document(const SrsDocument& doc, const TraceGroundTruth& truth);

// Deterministic serializations used by the ingest CLI verb.
std::string ground_truth_to_json(const TraceGroundTruth& truth);
std::string requirements_to_csv(const std::vector<Requirement>& reqs);

} // namespace ppbench
