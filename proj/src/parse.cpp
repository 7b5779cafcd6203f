#include "ppbench/parse.hpp"

#include "ppbench/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ppbench {

namespace {

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Whole-token occurrence of an arbitrary id. Dots bind only between
// digits, so "3" does not match inside "3.5" but "R12" matches in "R12.".
bool token_boundaries(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos > 0) {
        const char prev = text[pos - 1];
        if (is_alnum(prev) || prev == '_') return false;
        if (prev == '.' && pos >= 2 && std::isdigit(static_cast<unsigned char>(text[pos - 2])) &&
            std::isdigit(static_cast<unsigned char>(text[pos])))
            return false;
    }
    const std::size_t end = pos + len;
    if (end < text.size()) {
        const char next = text[end];
        if (is_alnum(next) || next == '_') return false;
        if (next == '.' && end + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[end + 1])) &&
            std::isdigit(static_cast<unsigned char>(text[end - 1])))
            return false;
    }
    return true;
}

std::vector<std::size_t> token_positions(std::string_view text, std::string_view token) {
    std::vector<std::size_t> out;
    if (token.empty()) return out;
    std::size_t pos = text.find(token);
    while (pos != std::string_view::npos) {
        if (token_boundaries(text, pos, token.size())) out.push_back(pos);
        pos = text.find(token, pos + 1);
    }
    return out;
}

struct Event {
    std::size_t pos;
    bool is_label;
    ReqClass label;      // when is_label
    std::string id;      // when !is_label
};

// Case-insensitive search marking each hit as consumed so "functional"
// never re-matches inside an already-taken "non-functional".
void find_label_tokens(const std::string& line_lower, std::vector<bool>& taken,
                       std::string_view needle, bool whole_token, ReqClass cls,
                       std::vector<Event>& events) {
    std::size_t pos = line_lower.find(needle);
    while (pos != std::string::npos) {
        const std::size_t end = pos + needle.size();
        bool free = true;
        for (std::size_t i = pos; i < end; ++i) {
            if (taken[i]) {
                free = false;
                break;
            }
        }
        bool boundary_ok = true;
        if (whole_token) boundary_ok = token_boundaries(line_lower, pos, needle.size());
        else {
            // spelled-out words still must not sit inside a larger word
            const bool left = pos == 0 || !is_alnum(line_lower[pos - 1]);
            const bool right = end == line_lower.size() || !is_alnum(line_lower[end]);
            boundary_ok = left && right;
        }
        if (free && boundary_ok) {
            for (std::size_t i = pos; i < end; ++i) taken[i] = true;
            events.push_back(Event{pos, true, cls, {}});
        }
        pos = line_lower.find(needle, pos + 1);
    }
}

} // namespace

ClassificationPrediction parse_classification(const std::string& response,
                                              const std::vector<std::string>& sample_ids,
                                              PromptPattern pattern) {
    ClassificationPrediction pred;
    const std::set<std::string> sample(sample_ids.begin(), sample_ids.end());
    std::set<std::string> shape_notes;

    // Shape 1: "(ID=x)" or "(ID: x)" listings; listed means non-functional.
    std::set<std::string> listed;
    {
        const std::string lower = to_lower(response);
        std::size_t pos = 0;
        while ((pos = lower.find("(id", pos)) != std::string::npos) {
            std::size_t i = pos + 3;
            while (i < lower.size() && (lower[i] == ' ' || lower[i] == '\t')) ++i;
            if (i >= lower.size() || (lower[i] != '=' && lower[i] != ':')) {
                pos += 3;
                continue;
            }
            ++i;
            while (i < lower.size() && (lower[i] == ' ' || lower[i] == '\t')) ++i;
            std::size_t j = i;
            while (j < lower.size() && lower[j] != ')' && lower[j] != '(' &&
                   !std::isspace(static_cast<unsigned char>(lower[j])))
                ++j;
            std::size_t k = j;
            while (k < lower.size() && (lower[k] == ' ' || lower[k] == '\t')) ++k;
            if (k < lower.size() && lower[k] == ')' && j > i) {
                const std::string id = response.substr(i, j - i);
                if (sample.count(id)) listed.insert(id);
            }
            pos = j > pos ? j : pos + 3;
        }
    }

    // Shape 2: per-line "<id> <sep> <label>" forms, including tabular
    // "id,label" and spelled-out label words. Events on a line are walked
    // in order; a label token closes over the ids pending before it.
    for (const std::string& line : split_lines(response)) {
        std::vector<Event> events;
        for (const std::string& id : sample) {
            for (std::size_t pos : token_positions(line, id)) {
                events.push_back(Event{pos, false, ReqClass::F, id});
            }
        }
        if (events.empty()) continue;
        const std::string lower = to_lower(line);
        std::vector<bool> taken(lower.size(), false);
        find_label_tokens(lower, taken, "non-functional", false, ReqClass::NF, events);
        find_label_tokens(lower, taken, "non functional", false, ReqClass::NF, events);
        find_label_tokens(lower, taken, "nonfunctional", false, ReqClass::NF, events);
        find_label_tokens(lower, taken, "functional", false, ReqClass::F, events);
        find_label_tokens(lower, taken, "nf", true, ReqClass::NF, events);
        find_label_tokens(lower, taken, "f", true, ReqClass::F, events);
        std::sort(events.begin(), events.end(),
                  [](const Event& a, const Event& b) { return a.pos < b.pos; });
        std::vector<std::string> pending;
        for (const Event& ev : events) {
            if (!ev.is_label) {
                pending.push_back(ev.id);
                continue;
            }
            for (const std::string& id : pending) {
                const auto [it, inserted] = pred.labels.emplace(id, ev.label);
                if (inserted) shape_notes.insert("line_labels");
                else if (it->second != ev.label) shape_notes.insert("conflicting_labels");
            }
            pending.clear();
        }
    }

    // Listings only label ids that have no explicit per-line label.
    for (const std::string& id : listed) {
        if (pred.labels.emplace(id, ReqClass::NF).second) shape_notes.insert("id_list");
    }

    pred.extracted = pred.labels.size();
    for (const std::string& id : sample_ids) {
        if (pred.labels.count(id)) continue;
        if (pattern == PromptPattern::Template) {
            // Template semantics: the reply lists non-functional ids only,
            // so an unlisted id is a functional prediction, not a miss.
            pred.labels.emplace(id, ReqClass::F);
        } else {
            pred.unparsed_ids.push_back(id);
        }
    }
    if (pattern == PromptPattern::Template && pred.extracted < sample_ids.size()) {
        shape_notes.insert("template_unlisted_f");
    }
    pred.parse_empty = pattern != PromptPattern::Template && pred.extracted == 0;
    pred.shapes.assign(shape_notes.begin(), shape_notes.end());
    return pred;
}

TracePrediction parse_trace(const std::string& response, const std::string& query_id,
                            const std::set<std::string>& doc_ids) {
    TracePrediction pred;
    for (const IdHit& hit : scan_dotted_ids(response)) {
        if (hit.id == query_id || !doc_ids.count(hit.id)) continue;
        pred.linked_ids.insert(hit.id);
    }
    return pred;
}

bool looks_interrogative(const std::string& text) {
    static const std::set<std::string> leads = {
        "what", "which", "who",   "when",  "where", "why",  "how", "can",
        "could", "should", "would", "will", "shall", "do",  "does", "did",
        "is",   "are",   "may",   "might"};
    std::string_view trimmed(text);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
        trimmed.remove_suffix(1);
    if (!trimmed.empty() && trimmed.back() == '?') return true;
    for (const std::string& line : split_lines(text)) {
        std::size_t b = 0;
        while (b < line.size() &&
               (std::isspace(static_cast<unsigned char>(line[b])) || line[b] == '-' ||
                line[b] == '*' || std::isdigit(static_cast<unsigned char>(line[b])) ||
                line[b] == '.' || line[b] == ')'))
            ++b;
        std::size_t e = b;
        while (e < line.size() && std::isalpha(static_cast<unsigned char>(line[e]))) ++e;
        if (e > b && leads.count(to_lower(line.substr(b, e - b)))) return true;
    }
    return false;
}

} // namespace ppbench
