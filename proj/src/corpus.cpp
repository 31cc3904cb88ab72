// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "intentrag/error.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

/// Calls fn(json, line_number) for every non-blank line.
template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json value;
        try {
            value = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!value.is_object()) throw ParseError("expected a JSON object", line_no);
        fn(value, line_no);
    }
}

std::string required_string(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) throw ParseError(std::string("missing required field \"") + field + "\"", line);
    if (!it->is_string()) throw ParseError(std::string("field \"") + field + "\" must be a string", line);
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(std::string("field \"") + field + "\" must be a string", line);
    return it->get<std::string>();
}

std::vector<std::string> optional_string_list(const json& obj, const char* field, std::size_t line) {
    std::vector<std::string> out;
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) throw ParseError(std::string("field \"") + field + "\" must be an array", line);
    for (const auto& v : *it) {
        if (!v.is_string()) throw ParseError(std::string("field \"") + field + "\" must hold strings", line);
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::size_t required_size(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(std::string("missing required field \"") + field + "\"", line);
    if (!it->is_number_unsigned()) throw ParseError(std::string("field \"") + field + "\" must be a non-negative integer", line);
    return it->get<std::size_t>();
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

/// True when a sentence ends right before the whitespace run that ends at p.
bool is_sentence_cut(std::string_view s, std::size_t p) {
    if (p == 0 || p >= s.size() || !text::is_space(s[p - 1]) || text::is_space(s[p])) return false;
    std::size_t q = p;
    while (q > 0 && text::is_space(s[q - 1])) --q;
    while (q > 0 && (s[q - 1] == '"' || s[q - 1] == '\'' || s[q - 1] == ')')) --q;
    return q > 0 && is_terminator(s[q - 1]);
}

/// Paragraph segments [start, end). Each segment owns the whitespace run that
/// contains its trailing blank line, so segments tile the whole body.
std::vector<CharSpan> paragraph_segments(std::string_view body) {
    std::vector<CharSpan> segments;
    std::size_t seg_start = 0;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] != '\n') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < body.size() && (body[j] == ' ' || body[j] == '\t' || body[j] == '\r')) ++j;
        if (j >= body.size() || body[j] != '\n') {
            i = j;
            continue;
        }
        std::size_t k = i;
        while (k < body.size() && text::is_space(body[k])) ++k;
        if (k < body.size()) {
            segments.push_back({seg_start, k});
            seg_start = k;
        }
        i = k;
    }
    if (seg_start < body.size()) segments.push_back({seg_start, body.size()});
    return segments;
}

std::size_t ceil_to_codepoint(std::string_view s, std::size_t pos) {
    while (pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) ++pos;
    return pos;
}

void window_segment(std::string_view body, CharSpan segment, const ChunkingOptions& options,
                    std::vector<CharSpan>& out) {
    std::size_t start = segment.start;
    while (true) {
        if (segment.end - start <= options.max_chars) {
            out.push_back({start, segment.end});
            return;
        }
        const std::size_t limit = start + options.max_chars;
        const std::size_t floor_progress = start + options.overlap_chars;
        std::size_t cut = 0;
        for (std::size_t p = limit; p > floor_progress; --p) {
            if (is_sentence_cut(body, p)) {
                cut = p;
                break;
            }
        }
        if (cut == 0) {
            cut = text::floor_to_codepoint(body, limit);
            if (cut <= start) cut = ceil_to_codepoint(body, start + 1);
        }
        out.push_back({start, cut});
        std::size_t next = text::floor_to_codepoint(body, cut - std::min(options.overlap_chars, cut));
        if (next <= start) next = cut;
        start = next;
    }
}

json document_to_json(const Document& d) {
    json j{{"id", d.id}, {"title", d.title}, {"body", d.body}};
    if (d.source_uri) j["source_uri"] = *d.source_uri;
    return j;
}

json record_to_json(const QuestionRecord& r) {
    json units = json::array();
    for (const auto& u : r.gold.factual_units) {
        json ju{{"id", u.id}, {"statement", u.statement}};
        if (u.intent_label) ju["intent"] = *u.intent_label;
        units.push_back(std::move(ju));
    }
    json j{{"id", r.id}};
    if (!r.domain.empty()) j["domain"] = r.domain;
    j["question"] = r.question;
    j["gold_answers"] = r.gold.gold_answers;
    j["factual_units"] = std::move(units);
    if (!r.gold.gold_passage_ids.empty()) j["gold_passage_ids"] = r.gold.gold_passage_ids;
    return j;
}

} // namespace

std::vector<Document> read_corpus(std::istream& in) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    for_each_json_line(in, [&](const json& obj, std::size_t line) {
        Document d;
        d.id = required_string(obj, "id", line);
        d.title = optional_string(obj, "title", line).value_or("");
        d.body = required_string(obj, "body", line);
        d.source_uri = optional_string(obj, "source_uri", line);
        if (d.id.empty()) throw ValidationError("line " + std::to_string(line) + ": empty document id");
        if (d.body.empty()) throw ValidationError("line " + std::to_string(line) + ": document \"" + d.id + "\" has an empty body");
        if (!seen.insert(d.id).second) {
            throw ValidationError("line " + std::to_string(line) + ": duplicate document id \"" + d.id + "\"");
        }
        docs.push_back(std::move(d));
    });
    return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const Document> docs) {
    for (const auto& d : docs) out << document_to_json(d).dump() << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const Document> docs) {
    auto out = open_output(path);
    write_corpus(out, docs);
}

std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal) {
    std::string id(doc_id);
    id.push_back('#');
    id.append(std::to_string(ordinal));
    return id;
}

std::string doc_id_of(std::string_view chunk_id) {
    const auto pos = chunk_id.rfind('#');
    return std::string(pos == std::string_view::npos ? chunk_id : chunk_id.substr(0, pos));
}

std::vector<Chunk> chunk_document(const Document& doc, const ChunkingOptions& options) {
    if (options.max_chars == 0) throw std::invalid_argument("max_chars must be positive");
    if (options.overlap_chars >= options.max_chars) {
        throw std::invalid_argument("overlap_chars must be smaller than max_chars");
    }
    std::vector<CharSpan> spans;
    for (const auto& segment : paragraph_segments(doc.body)) {
        window_segment(doc.body, segment, options, spans);
    }
    std::vector<Chunk> chunks;
    chunks.reserve(spans.size());
    for (const auto& span : spans) {
        Chunk c;
        c.ordinal = chunks.size();
        c.id = make_chunk_id(doc.id, c.ordinal);
        c.doc_id = doc.id;
        c.span = span;
        c.body = doc.body.substr(span.start, span.end - span.start);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

std::vector<Chunk> chunk_corpus(std::span<const Document> docs, const ChunkingOptions& options) {
    std::vector<Chunk> all;
    for (const auto& d : docs) {
        auto chunks = chunk_document(d, options);
        all.insert(all.end(), std::make_move_iterator(chunks.begin()), std::make_move_iterator(chunks.end()));
    }
    return all;
}

std::vector<Chunk> read_chunks(std::istream& in) {
    std::vector<Chunk> chunks;
    std::unordered_set<std::string> seen;
    for_each_json_line(in, [&](const json& obj, std::size_t line) {
        Chunk c;
        c.id = required_string(obj, "id", line);
        c.doc_id = required_string(obj, "doc_id", line);
        c.ordinal = required_size(obj, "ordinal", line);
        c.span.start = required_size(obj, "start", line);
        c.span.end = required_size(obj, "end", line);
        c.body = required_string(obj, "body", line);
        if (!seen.insert(c.id).second) {
            throw ValidationError("line " + std::to_string(line) + ": duplicate chunk id \"" + c.id + "\"");
        }
        chunks.push_back(std::move(c));
    });
    return chunks;
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_chunks(in);
}

void write_chunks(std::ostream& out, std::span<const Chunk> chunks) {
    for (const auto& c : chunks) {
        json j{{"id", c.id},       {"doc_id", c.doc_id}, {"ordinal", c.ordinal},
               {"start", c.span.start}, {"end", c.span.end}, {"body", c.body}};
        out << j.dump() << '\n';
    }
}

void save_chunks(const std::filesystem::path& path, std::span<const Chunk> chunks) {
    auto out = open_output(path);
    write_chunks(out, chunks);
}

void validate_gold(const QuestionRecord& record) {
    std::unordered_set<std::string> ids;
    for (const auto& unit : record.gold.factual_units) {
        if (!ids.insert(unit.id).second) {
            throw ValidationError("question \"" + record.id + "\": duplicate factual unit id \"" + unit.id + "\"");
        }
        if (text::trim(unit.statement).empty()) {
            throw ValidationError("question \"" + record.id + "\": factual unit \"" + unit.id + "\" has an empty statement");
        }
    }
}

std::vector<QuestionRecord> read_qa_dataset(std::istream& in, GoldValidation validation) {
    std::vector<QuestionRecord> records;
    std::unordered_set<std::string> seen;
    for_each_json_line(in, [&](const json& obj, std::size_t line) {
        QuestionRecord r;
        r.id = required_string(obj, "id", line);
        r.domain = optional_string(obj, "domain", line).value_or("");
        r.question = required_string(obj, "question", line);
        if (text::trim(r.question).empty()) throw ParseError("field \"question\" is empty", line);
        r.gold.gold_answers = optional_string_list(obj, "gold_answers", line);
        r.gold.gold_passage_ids = optional_string_list(obj, "gold_passage_ids", line);
        if (auto it = obj.find("factual_units"); it != obj.end() && !it->is_null()) {
            if (!it->is_array()) throw ParseError("field \"factual_units\" must be an array", line);
            for (const auto& ju : *it) {
                if (!ju.is_object()) throw ParseError("factual unit must be an object", line);
                FactualUnit u;
                u.id = required_string(ju, "id", line);
                u.statement = required_string(ju, "statement", line);
                u.intent_label = optional_string(ju, "intent", line);
                r.gold.factual_units.push_back(std::move(u));
            }
        }
        if (!seen.insert(r.id).second) {
            throw ValidationError("line " + std::to_string(line) + ": duplicate question id \"" + r.id + "\"");
        }
        if (validation == GoldValidation::strict) {
            try {
                validate_gold(r);
            } catch (const ValidationError& e) {
                throw ValidationError("line " + std::to_string(line) + ": " + e.what());
            }
        }
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<QuestionRecord> load_qa_dataset(const std::filesystem::path& path, GoldValidation validation) {
    auto in = open_input(path);
    return read_qa_dataset(in, validation);
}

void write_qa_dataset(std::ostream& out, std::span<const QuestionRecord> records) {
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

void save_qa_dataset(const std::filesystem::path& path, std::span<const QuestionRecord> records) {
    auto out = open_output(path);
    write_qa_dataset(out, records);
}

} // namespace intentrag
