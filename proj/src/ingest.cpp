#include "ppbench/ingest.hpp"

#include "ppbench/text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ppbench {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError("cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string normalize_newlines(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            if (i + 1 < s.size() && s[i + 1] == '\n') continue;
            out.push_back('\n');
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

// RFC 4180 subset: quoted fields, "" escapes, embedded commas and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool row_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            quoted = true;
            row_started = true;
            break;
        case ',':
            row.push_back(std::move(field));
            field.clear();
            row_started = true;
            break;
        case '\n':
            if (row_started || !field.empty()) {
                row.push_back(std::move(field));
                field.clear();
                rows.push_back(std::move(row));
                row.clear();
                row_started = false;
            }
            break;
        default:
            field.push_back(c);
            row_started = true;
            break;
        }
    }
    if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string csv_quote(std::string_view field) {
    const bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// A declaration line starts (after optional indentation) with a dotted id
// followed by whitespace or end of line.
bool declaration_id(std::string_view line, std::string* id_out) {
    std::size_t b = 0;
    while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
    if (b >= line.size()) return false;
    const auto hits = scan_dotted_ids(line.substr(b));
    if (hits.empty() || hits.front().pos != 0) return false;
    const std::size_t end = b + hits.front().id.size();
    if (end < line.size() && line[end] != ' ' && line[end] != '\t') return false;
    *id_out = hits.front().id;
    return true;
}

// Heading/ruler lines end the current requirement block. Headings in the
// source documents are written in capitals ("SPECIFIC REQUIREMENTS").
bool section_break(std::string_view line) {
    const std::string t = trim(line);
    if (t.size() >= 3 && t.find_first_not_of("=-_*") == std::string::npos) return true;
    bool has_letter = false;
    for (char c : t) {
        if (std::islower(static_cast<unsigned char>(c))) return false;
        if (std::isalpha(static_cast<unsigned char>(c))) has_letter = true;
    }
    return has_letter;
}

// Spans to delete from a segment: URL tokens everywhere, document ids
// everywhere except the block declaration.
std::string clean_segment(const SrsSegment& seg, const std::set<std::string>& doc_ids) {
    std::vector<std::pair<std::size_t, std::size_t>> spans = scan_url_spans(seg.raw);
    std::size_t decl_pos = std::string::npos;
    if (seg.kind == SrsSegment::Kind::Block) {
        decl_pos = seg.raw.find(seg.id);
    }
    for (const IdHit& hit : scan_dotted_ids(seg.raw)) {
        if (!doc_ids.count(hit.id)) continue;
        if (seg.kind == SrsSegment::Kind::Block && hit.pos == decl_pos) continue;
        spans.emplace_back(hit.pos, hit.pos + hit.id.size());
    }
    std::sort(spans.begin(), spans.end());
    std::string out;
    out.reserve(seg.raw.size());
    std::size_t cursor = 0;
    for (const auto& [b, e] : spans) {
        if (b < cursor) continue; // id nested inside an already-removed URL
        out.append(seg.raw, cursor, b - cursor);
        cursor = e;
    }
    out.append(seg.raw, cursor, seg.raw.size() - cursor);
    return collapse_spaces(out);
}

} // namespace

bool SrsDocument::has(const std::string& id) const {
    return std::any_of(requirements.begin(), requirements.end(),
                       [&](const Requirement& r) { return r.id == id; });
}

std::set<std::string> SrsDocument::ids() const {
    std::set<std::string> out;
    for (const Requirement& r : requirements) out.insert(r.id);
    return out;
}

const std::string& SrsDocument::block_for(const std::string& id) const {
    for (const SrsSegment& seg : segments) {
        if (seg.kind == SrsSegment::Kind::Block && seg.id == id) return seg.raw;
    }
    throw DatasetError("no block for id " + id + " in " + name);
}

std::vector<Requirement> load_classification_dataset(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw DatasetError("dataset file not found: " + path.string());
    }
    const std::string text = normalize_newlines(read_file(path));
    const auto rows = parse_csv(text);
    if (rows.empty()) {
        throw DatasetError("no requirements found in " + path.string());
    }
    const auto& header = rows.front();
    if (header.size() != 3 || to_lower(trim(header[0])) != "id" ||
        to_lower(trim(header[1])) != "text" || to_lower(trim(header[2])) != "label") {
        throw DatasetError("expected header \"id,text,label\" in " + path.string());
    }
    const std::string source = path.stem().string();
    std::vector<Requirement> reqs;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string where = path.filename().string() + " row " + std::to_string(i + 1);
        if (row.size() != 3) {
            throw DatasetError("malformed row (" + std::to_string(row.size()) +
                               " fields, expected 3) at " + where);
        }
        Requirement r;
        r.id = trim(row[0]);
        r.text = row[1];
        r.source = source;
        if (r.id.empty()) {
            throw DatasetError("empty id at " + where);
        }
        if (!seen.insert(r.id).second) {
            throw DatasetError("duplicate id \"" + r.id + "\" at " + where);
        }
        if (normalize_ws(r.text).empty()) {
            throw DatasetError("empty text at " + where);
        }
        const std::string label = trim(row[2]);
        if (!label.empty()) {
            const auto cls = req_class_from_string(label);
            if (!cls) {
                throw DatasetError("unknown label token \"" + label + "\" at " + where);
            }
            r.label = *cls;
        }
        reqs.push_back(std::move(r));
    }
    if (reqs.empty()) {
        throw DatasetError("no requirements found in " + path.string());
    }
    return reqs;
}

std::vector<Requirement> strip_labels(const std::vector<Requirement>& reqs) {
    if (reqs.empty()) {
        throw std::invalid_argument("strip_labels: input is empty");
    }
    std::vector<Requirement> out = reqs;
    for (Requirement& r : out) r.label.reset();
    return out;
}

SrsDocument parse_srs(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw DatasetError("SRS file not found: " + path.string());
    }
    return parse_srs_text(path.stem().string(), read_file(path));
}

SrsDocument parse_srs_text(std::string name, std::string_view text) {
    SrsDocument doc;
    doc.name = std::move(name);
    doc.raw_text = normalize_newlines(text);

    const auto lines = split_lines(doc.raw_text);
    // Line boundaries for verbatim segment slices.
    std::vector<std::size_t> offsets;
    offsets.reserve(lines.size() + 1);
    std::size_t off = 0;
    for (const std::string& line : lines) {
        offsets.push_back(off);
        off += line.size() + 1;
    }
    offsets.push_back(doc.raw_text.size());

    struct Mark {
        std::size_t line;
        std::string id; // empty for a section break
    };
    std::vector<Mark> marks;
    std::map<std::string, std::size_t> first_line;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string id;
        if (declaration_id(lines[i], &id)) {
            auto [it, inserted] = first_line.try_emplace(id, i + 1);
            if (!inserted) {
                throw DatasetError("duplicate id \"" + id + "\" in " + doc.name + ": lines " +
                                   std::to_string(it->second) + " and " + std::to_string(i + 1));
            }
            marks.push_back(Mark{i, id});
        } else if (!marks.empty() && !marks.back().id.empty() && section_break(lines[i])) {
            marks.push_back(Mark{i, std::string()});
        }
    }
    if (first_line.empty()) {
        throw DatasetError("no ids found in " + doc.name);
    }

    auto slice = [&](std::size_t line_begin, std::size_t line_end) {
        const std::size_t b = offsets[line_begin];
        const std::size_t e = line_end < offsets.size() - 1 ? offsets[line_end] : offsets.back();
        return doc.raw_text.substr(b, e - b);
    };

    const std::size_t first_mark_line = marks.front().line;
    if (first_mark_line > 0) {
        doc.segments.push_back(
            SrsSegment{SrsSegment::Kind::Preamble, "", slice(0, first_mark_line)});
    }
    for (std::size_t m = 0; m < marks.size(); ++m) {
        const std::size_t begin = marks[m].line;
        const std::size_t end = m + 1 < marks.size() ? marks[m + 1].line : lines.size();
        const std::string raw = slice(begin, end);
        if (marks[m].id.empty()) {
            doc.segments.push_back(SrsSegment{SrsSegment::Kind::Interstitial, "", raw});
            continue;
        }
        doc.segments.push_back(SrsSegment{SrsSegment::Kind::Block, marks[m].id, raw});
        const std::size_t id_pos = raw.find(marks[m].id);
        const std::string body = raw.substr(id_pos + marks[m].id.size());
        Requirement r;
        r.id = marks[m].id;
        r.text = normalize_ws(body);
        r.source = doc.name;
        if (r.text.empty()) {
            throw DatasetError("empty body for id \"" + r.id + "\" in " + doc.name);
        }
        doc.requirements.push_back(std::move(r));
    }
    return doc;
}

TraceGroundTruth extract_trace_ground_truth(const SrsDocument& doc) {
    TraceGroundTruth truth;
    const std::set<std::string> ids = doc.ids();
    for (const SrsSegment& seg : doc.segments) {
        if (seg.kind != SrsSegment::Kind::Block) continue;
        const std::size_t decl_pos = seg.raw.find(seg.id);
        const std::string body = seg.raw.substr(decl_pos + seg.id.size());
        for (const IdHit& hit : scan_dotted_ids(body)) {
            if (hit.id == seg.id || !ids.count(hit.id)) continue;
            truth.links[hit.id].insert(seg.id);
        }
    }
    return truth;
}

CleanDocument clean_document(const SrsDocument& doc, const TraceGroundTruth&) {
    // Ground truth is implied by the document; every in-document id
    // occurrence outside its own declaration is stripped, which removes
    // all links the extraction pass could find.
    const std::set<std::string> ids = doc.ids();
    CleanDocument clean;
    clean.name = doc.name + " clean";
    for (const SrsSegment& seg : doc.segments) {
        clean.text += clean_segment(seg, ids);
    }
    return clean;
}

std::string ground_truth_to_json(const TraceGroundTruth& truth) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [query, referencers] : truth.links) {
        j[query] = std::vector<std::string>(referencers.begin(), referencers.end());
    }
    return j.dump(2) + "\n";
}

std::string requirements_to_csv(const std::vector<Requirement>& reqs) {
    std::string out = "id,text,label\n";
    for (const Requirement& r : reqs) {
        out += csv_quote(r.id);
        out.push_back(',');
        out += csv_quote(r.text);
        out.push_back(',');
        out += r.label ? to_string(*r.label) : "";
        out.push_back('\n');
    }
    return out;
}

} // namespace ppbench
