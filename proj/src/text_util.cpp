#include "ppbench/text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ppbench {

namespace {

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// A dotted token may not butt up against letters, digits or another dot:
// "a3.2.1", "33.2.1" and "fig.3.2.1" are not ids.
bool open_boundary(std::string_view text, std::size_t pos) {
    if (pos == 0) return true;
    const char prev = text[pos - 1];
    return !is_alnum(prev) && prev != '.';
}

bool close_boundary(std::string_view text, std::size_t end) {
    if (end >= text.size()) return true;
    const char next = text[end];
    if (is_alnum(next)) return false;
    // "3.2.1.5"-style continuations were consumed by the scanner already;
    // this guards direct token checks such as contains_token.
    if (next == '.' && end + 1 < text.size() && is_digit(text[end + 1])) return false;
    return true;
}

} // namespace

bool is_dotted_id(std::string_view token) {
    int fields = 0;
    std::size_t i = 0;
    while (i < token.size()) {
        if (!is_digit(token[i])) return false;
        while (i < token.size() && is_digit(token[i])) ++i;
        ++fields;
        if (i == token.size()) break;
        if (token[i] != '.') return false;
        ++i;
        if (i == token.size()) return false; // trailing dot
    }
    return fields >= kMinIdFields && fields <= kMaxIdFields;
}

std::vector<IdHit> scan_dotted_ids(std::string_view text) {
    std::vector<IdHit> hits;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_digit(text[i]) || !open_boundary(text, i)) {
            ++i;
            continue;
        }
        // Maximal munch: digits (. digits)* as long as a digit follows the dot.
        std::size_t j = i;
        int fields = 0;
        while (j < n && is_digit(text[j])) {
            while (j < n && is_digit(text[j])) ++j;
            ++fields;
            if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1])) {
                ++j;
                continue;
            }
            break;
        }
        const bool clean_end = j >= n || !is_alnum(text[j]);
        if (fields >= kMinIdFields && fields <= kMaxIdFields && clean_end) {
            hits.push_back(IdHit{std::string(text.substr(i, j - i)), i});
        }
        i = j > i ? j : i + 1;
    }
    return hits;
}

bool contains_token(std::string_view text, std::string_view token) {
    if (token.empty()) return false;
    std::size_t pos = text.find(token);
    while (pos != std::string_view::npos) {
        if (open_boundary(text, pos) && close_boundary(text, pos + token.size())) return true;
        pos = text.find(token, pos + 1);
    }
    return false;
}

std::vector<std::pair<std::size_t, std::size_t>> scan_url_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t pos = text.find("://");
    while (pos != std::string_view::npos) {
        // Walk back over the scheme: letters, digits, '+', '-', '.'; the
        // first character must be a letter.
        std::size_t start = pos;
        while (start > 0) {
            const char c = text[start - 1];
            if (is_alnum(c) || c == '+' || c == '-' || c == '.') {
                --start;
            } else {
                break;
            }
        }
        const bool scheme_ok = start < pos && std::isalpha(static_cast<unsigned char>(text[start]));
        std::size_t end = pos + 3;
        while (end < text.size()) {
            const char c = text[end];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' ||
                c == '<' || c == '>' || c == ')' || c == ']' || c == ',') {
                break;
            }
            ++end;
        }
        // Sentence punctuation is not part of the address.
        while (end > pos + 3 && (text[end - 1] == '.' || text[end - 1] == ';' || text[end - 1] == ':')) {
            --end;
        }
        if (scheme_ok) spans.emplace_back(start, end);
        pos = text.find("://", end > pos ? end : pos + 3);
    }
    return spans;
}

std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true; // leading whitespace is dropped
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out.push_back(' ');
            out.push_back(c);
            in_ws = false;
        }
    }
    return out;
}

std::string collapse_spaces(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t line_start = out.size();
    bool prev_space = false;
    for (char c : text) {
        if (c == '\n') {
            while (out.size() > line_start && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
            out.push_back('\n');
            line_start = out.size();
            prev_space = false;
        } else if (c == ' ' || c == '\t') {
            if (!prev_space) out.push_back(' ');
            prev_space = true;
        } else {
            out.push_back(c);
            prev_space = false;
        }
    }
    while (out.size() > line_start && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    if (text.empty()) return lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (!text.empty() && text.back() == '\n') lines.pop_back();
    return lines;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace ppbench
