#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppbench {

// Dotted-numeric requirement id: 2 to 4 dot-separated integer fields,
// e.g. "3.2" or "3.2.1.4". Matching is maximal-munch on token boundaries,
// so "3.2.1" never matches inside "3.2.11" or "1.3.2.1".

constexpr int kMinIdFields = 2;
constexpr int kMaxIdFields = 4;

bool is_dotted_id(std::string_view token);

struct IdHit {
    std::string id;
    std::size_t pos; // byte offset into the scanned text
};

// All dotted-id tokens in `text`, in order of appearance.
std::vector<IdHit> scan_dotted_ids(std::string_view text);

// True when `token` occurs in `text` on token boundaries (same boundary
// rules as scan_dotted_ids, applied to an arbitrary id/word token).
bool contains_token(std::string_view text, std::string_view token);

// [begin, end) spans of URL-shaped tokens (anything with a scheme prefix
// such as "http://" or "ftp://").
std::vector<std::pair<std::size_t, std::size_t>> scan_url_spans(std::string_view text);

// Collapse every whitespace run to a single space and trim both ends.
std::string normalize_ws(std::string_view s);

// Per-line tidy-up used after token removal: collapse runs of spaces/tabs
// inside each line and strip trailing spaces. Newlines are preserved.
std::string collapse_spaces(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);

std::string to_lower(std::string_view s);

// 64-bit FNV-1a. Used for run ids and fixture keys.
std::uint64_t fnv1a64(std::string_view s);
std::string to_hex(std::uint64_t v);

} // namespace ppbench
