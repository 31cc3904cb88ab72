// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/vector_index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "intentrag/error.hpp"
#include "intentrag/hashing.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<char, 4> kMagic{'I', 'F', 'I', 'X'};
constexpr std::uint32_t kMaxIdLength = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b.data(), b.size());
}

void read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw CorruptionError(std::string("index file truncated while reading ") + what);
    }
}

std::uint32_t get_u32(std::istream& in, const char* what) {
    std::array<unsigned char, 4> b{};
    read_exact(in, reinterpret_cast<char*>(b.data()), b.size(), what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in, const char* what) {
    std::array<unsigned char, 8> b{};
    read_exact(in, reinterpret_cast<char*>(b.data()), b.size(), what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

ChunkMeta meta_from_id(const std::string& chunk_id) {
    ChunkMeta m;
    m.doc_id = doc_id_of(chunk_id);
    const auto pos = chunk_id.rfind('#');
    if (pos != std::string::npos) {
        const char* first = chunk_id.data() + pos + 1;
        const char* last = chunk_id.data() + chunk_id.size();
        std::size_t ordinal = 0;
        auto [ptr, ec] = std::from_chars(first, last, ordinal);
        if (ec == std::errc() && ptr == last) m.ordinal = ordinal;
    }
    return m;
}

struct Scored {
    double score;
    std::size_t pos;
};

} // namespace

void validate(const RankedList& list) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& e = list.entries[i];
        if (e.rank != i + 1) {
            throw ValidationError("entry " + std::to_string(i) + " has rank " + std::to_string(e.rank) +
                                  ", expected " + std::to_string(i + 1));
        }
        if (!std::isfinite(e.score)) throw ValidationError("entry " + std::to_string(i) + " has a non-finite score");
        if (i > 0 && e.score > list.entries[i - 1].score) {
            throw ValidationError("scores increase at rank " + std::to_string(e.rank));
        }
        if (!seen.insert(e.chunk_id).second) throw ValidationError("duplicate chunk id \"" + e.chunk_id + "\"");
    }
}

VectorIndex::VectorIndex(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("index dim must be positive");
}

void VectorIndex::add(std::string chunk_id, const EmbeddingVector& vector, ChunkMeta meta) {
    if (vector.dim() != dim_) {
        throw std::invalid_argument("vector dim " + std::to_string(vector.dim()) + " does not match index dim " +
                                    std::to_string(dim_));
    }
    if (positions_.contains(chunk_id)) throw std::invalid_argument("duplicate chunk id \"" + chunk_id + "\"");
    double sq = 0.0;
    const std::size_t offset = data_.size();
    data_.resize(offset + dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const float f = static_cast<float>(vector[i]);
        data_[offset + i] = f;
        sq += static_cast<double>(f) * static_cast<double>(f);
    }
    if (sq == 0.0) {
        data_.resize(offset);
        throw std::invalid_argument("chunk \"" + chunk_id + "\" has a zero vector");
    }
    norms_.push_back(std::sqrt(sq));
    positions_.emplace(chunk_id, ids_.size());
    ids_.push_back(std::move(chunk_id));
    meta_.push_back(std::move(meta));
}

std::span<const float> VectorIndex::vector(std::size_t i) const {
    if (i >= ids_.size()) throw std::out_of_range("index entry out of range");
    return std::span<const float>(data_).subspan(i * dim_, dim_);
}

const ChunkMeta* VectorIndex::find(std::string_view chunk_id) const {
    auto it = positions_.find(std::string(chunk_id));
    return it == positions_.end() ? nullptr : &meta_[it->second];
}

double VectorIndex::score(const EmbeddingVector& query, std::size_t i) const {
    const float* v = data_.data() + i * dim_;
    double d = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) d += query[k] * static_cast<double>(v[k]);
    return std::clamp(d / (query.norm() * norms_[i]), -1.0, 1.0);
}

RankedList VectorIndex::search(const EmbeddingVector& query, std::size_t top_k, QueryRef ref) const {
    if (query.dim() != dim_) {
        throw std::invalid_argument("query dim " + std::to_string(query.dim()) + " does not match index dim " +
                                    std::to_string(dim_));
    }
    if (top_k == 0) throw std::invalid_argument("top_k must be positive");
    const double qnorm = query.norm();
    if (qnorm == 0.0) throw std::invalid_argument("query is the zero vector");

    std::vector<Scored> scored(ids_.size());
    const auto q = query.values();
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const float* v = data_.data() + i * dim_;
        double d = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) d += q[k] * static_cast<double>(v[k]);
        scored[i] = {std::clamp(d / (qnorm * norms_[i]), -1.0, 1.0), i};
    }
    const std::size_t n = std::min(top_k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      [this](const Scored& a, const Scored& b) {
                          if (a.score != b.score) return a.score > b.score;
                          return ids_[a.pos] < ids_[b.pos];
                      });
    RankedList out;
    out.query = ref;
    out.entries.reserve(n);
    for (std::size_t r = 0; r < n; ++r) out.entries.push_back({ids_[scored[r].pos], r + 1, scored[r].score});
    return out;
}

std::string VectorIndex::fingerprint() const {
    std::ostringstream buf(std::ios::binary);
    write_index(buf, *this);
    return sha256_hex(buf.str());
}

bool VectorIndex::operator==(const VectorIndex& other) const {
    if (dim_ != other.dim_ || ids_ != other.ids_ || meta_ != other.meta_) return false;
    if (data_.size() != other.data_.size()) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (std::bit_cast<std::uint32_t>(data_[i]) != std::bit_cast<std::uint32_t>(other.data_[i])) return false;
    }
    return true;
}

BuildResult build_index(std::span<const Chunk> chunks, const EmbeddingProvider& provider) {
    std::unordered_set<std::string_view> seen;
    for (const auto& c : chunks) {
        if (!seen.insert(c.id).second) throw ValidationError("duplicate chunk id \"" + c.id + "\"");
    }
    BuildResult result{VectorIndex(provider.dim()), {}};
    result.index.set_embedder(provider.config());

    std::vector<const Chunk*> kept;
    std::vector<std::string> texts;
    for (const auto& c : chunks) {
        if (text::trim(c.body).empty()) {
            result.warnings.push_back("skipped chunk \"" + c.id + "\": empty body");
            continue;
        }
        kept.push_back(&c);
        texts.push_back(c.body);
    }
    if (kept.empty()) return result;

    const auto vectors = provider.embed_batch(texts);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (vectors[i].dim() != provider.dim()) {
            throw ContractViolation("provider returned dim " + std::to_string(vectors[i].dim()) + " for chunk \"" +
                                    kept[i]->id + "\"");
        }
        result.index.add(kept[i]->id, vectors[i], ChunkMeta{kept[i]->doc_id, kept[i]->ordinal, kept[i]->body});
    }
    return result;
}

void write_index(std::ostream& out, const VectorIndex& index) {
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, VectorIndex::kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(index.dim()));
    put_u64(out, index.size());
    put_u32(out, VectorIndex::kMetricCosine);
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto& id = index.chunk_id(i);
        put_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        for (float f : index.vector(i)) put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
}

VectorIndex read_index(std::istream& in) {
    std::array<char, 4> magic{};
    read_exact(in, magic.data(), magic.size(), "magic");
    if (magic != kMagic) throw CorruptionError("not an index file (bad magic bytes)");
    const auto version = get_u32(in, "version");
    if (version != VectorIndex::kFormatVersion) {
        throw UnsupportedVersionError("unsupported index format version " + std::to_string(version) +
                                      " (this build reads version " +
                                      std::to_string(VectorIndex::kFormatVersion) + ")");
    }
    const auto dim = get_u32(in, "dim");
    const auto count = get_u64(in, "count");
    const auto metric = get_u32(in, "metric");
    if (dim == 0) throw CorruptionError("index header has dim 0");
    if (metric != VectorIndex::kMetricCosine) throw CorruptionError("unknown metric tag " + std::to_string(metric));

    VectorIndex index(dim);
    std::vector<double> values(dim);
    std::string id;
    for (std::uint64_t n = 0; n < count; ++n) {
        const auto len = get_u32(in, "id length");
        if (len > kMaxIdLength) throw CorruptionError("implausible chunk id length " + std::to_string(len));
        id.resize(len);
        read_exact(in, id.data(), len, "chunk id");
        for (std::uint32_t k = 0; k < dim; ++k) {
            const float f = std::bit_cast<float>(get_u32(in, "vector"));
            if (!std::isfinite(f)) throw CorruptionError("non-finite vector component in \"" + id + "\"");
            values[k] = static_cast<double>(f);
        }
        try {
            index.add(id, EmbeddingVector(values), meta_from_id(id));
        } catch (const std::invalid_argument& e) {
            throw CorruptionError(std::string("invalid index entry: ") + e.what());
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after the last entry");
    return index;
}

std::filesystem::path sidecar_path(const std::filesystem::path& index_path) {
    auto p = index_path;
    p += ".meta.json";
    return p;
}

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + path.string());
        write_index(out, index);
        if (!out) throw ValidationError("failed writing " + path.string());
    }
    json meta{{"format", "intentrag-index-meta"},
              {"version", VectorIndex::kFormatVersion},
              {"dim", index.dim()},
              {"count", index.size()}};
    if (index.embedder()) meta["embedder"] = describe(*index.embedder());
    json chunks = json::array();
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto& m = index.meta(i);
        chunks.push_back({{"id", index.chunk_id(i)}, {"doc_id", m.doc_id}, {"ordinal", m.ordinal}, {"body", m.body}});
    }
    meta["chunks"] = std::move(chunks);
    std::ofstream side(sidecar_path(path), std::ios::binary | std::ios::trunc);
    if (!side) throw ValidationError("cannot write " + sidecar_path(path).string());
    side << meta.dump(1) << '\n';
}

VectorIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    VectorIndex raw = read_index(in);

    const auto side = sidecar_path(path);
    if (!std::filesystem::exists(side)) return raw;
    std::ifstream sin(side, std::ios::binary);
    json meta;
    try {
        meta = json::parse(sin);
    } catch (const json::parse_error& e) {
        throw CorruptionError(std::string("index sidecar is not valid JSON: ") + e.what());
    }
    try {
        const auto& chunks = meta.at("chunks");
        if (!chunks.is_array() || chunks.size() != raw.size()) {
            throw CorruptionError("index sidecar lists " + std::to_string(chunks.size()) +
                                  " chunks, binary holds " + std::to_string(raw.size()));
        }
        VectorIndex index(raw.dim());
        if (meta.contains("embedder")) index.set_embedder(embedding_config_from_json(meta["embedder"]));
        std::vector<double> values(raw.dim());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto& jc = chunks[i];
            if (jc.at("id").get<std::string>() != raw.chunk_id(i)) {
                throw CorruptionError("index sidecar order differs from binary at entry " + std::to_string(i));
            }
            ChunkMeta m{jc.at("doc_id").get<std::string>(), jc.at("ordinal").get<std::size_t>(),
                        jc.value("body", std::string{})};
            const auto v = raw.vector(i);
            for (std::size_t k = 0; k < v.size(); ++k) values[k] = static_cast<double>(v[k]);
            index.add(raw.chunk_id(i), EmbeddingVector(values), std::move(m));
        }
        return index;
    } catch (const json::exception& e) {
        throw CorruptionError(std::string("malformed index sidecar: ") + e.what());
    }
}

} // namespace intentrag
