#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simtext/errors.hpp"
#include "simtext/vector.hpp"

namespace simtext {

enum class RecordKind { truth, query };

inline std::string to_string(RecordKind kind) {
    return kind == RecordKind::truth ? "truth" : "query";
}

inline RecordKind record_kind_from_string(const std::string& s) {
    if (s == "truth") return RecordKind::truth;
    if (s == "query") return RecordKind::query;
    throw Error("unknown record kind '" + s + "'");
}

/// Per-record metadata; the ailment label is what turns a similarity hit
/// into a classification decision.
struct RecordMetadata {
    std::string ailment;
    std::string source_model;
    RecordKind kind = RecordKind::truth;
    std::uint64_t approx_tokens = 0;
};

struct VectorRecord {
    std::string id;
    EmbeddingVector vector;
    RecordMetadata metadata;
    std::uint64_t insert_seq = 0;
};

struct QueryHit {
    std::string record_id;
    std::string ailment;
    double similarity = 0.0;
};

using MetadataFilter = std::function<bool(const RecordMetadata&)>;

namespace detail {

// Little-endian binary primitives for the snapshot format.
inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

class SnapshotReader {
public:
    SnapshotReader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::size_t offset() const { return offset_; }

    bool at_end() const { return offset_ == size_; }

    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[offset_ + i])) << (8 * i);
        }
        offset_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[offset_ + i])) << (8 * i);
        }
        offset_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        std::uint32_t len = u32();
        need(len, "string body");
        std::string s(data_ + offset_, len);
        offset_ += len;
        return s;
    }

    void expect_magic(const char* magic, std::size_t n) {
        need(n, "magic");
        if (std::memcmp(data_ + offset_, magic, n) != 0) {
            throw CorruptSnapshot("bad magic, not a snapshot file", offset_);
        }
        offset_ += n;
    }

private:
    void need(std::size_t n, const char* what) {
        if (size_ - offset_ < n) {
            throw CorruptSnapshot(std::string("truncated snapshot while reading ") + what, offset_);
        }
    }

    const char* data_;
    std::size_t size_;
    std::size_t offset_ = 0;
};

} // namespace detail

/// In-memory flat vector index with exact cosine top-k search.
///
/// The store dimension is fixed by the first upsert; every later record must
/// match it. Concurrent reads (query_top_k, find, size) are safe with respect
/// to each other; upsert/snapshot/restore require exclusive access.
///
/// Snapshot file layout, little-endian throughout:
///   magic "VTS1" (4 bytes)
///   u32   dimension
///   u64   record count
///   per record, in insert_seq order:
///     u32+bytes  id (UTF-8)
///     u64        insert_seq
///     u32        metadata pair count, then per pair u32+bytes key, u32+bytes value
///                (keys written in fixed order: ailment, source_model, kind, approx_tokens)
///     dimension x f64  vector components (IEEE 754 bit patterns)
/// The layout is byte-stable: snapshotting the same records always produces
/// identical files.
class VectorStore {
public:
    std::size_t size() const { return records_.size(); }

    // 0 until the first upsert fixes the dimension.
    std::size_t dim() const { return dim_; }

    /// Insert or replace. Replacing an existing id swaps vector and metadata
    /// but keeps the original insert_seq. Returns the record id.
    const std::string& upsert(const std::string& id, EmbeddingVector vec, RecordMetadata meta) {
        require_valid(vec);
        if (vec.l2_norm() == 0.0) {
            throw DegenerateVector("zero-norm vector rejected at upsert");
        }
        if (dim_ == 0) {
            dim_ = vec.dim();
        } else if (vec.dim() != dim_) {
            throw DimensionMismatch(dim_, vec.dim());
        }
        auto it = index_by_id_.find(id);
        if (it != index_by_id_.end()) {
            VectorRecord& rec = records_[it->second];
            rec.vector = std::move(vec);
            rec.metadata = std::move(meta);
            return rec.id;
        }
        VectorRecord rec;
        rec.id = id;
        rec.vector = std::move(vec);
        rec.metadata = std::move(meta);
        rec.insert_seq = next_seq_++;
        records_.push_back(std::move(rec));
        index_by_id_.emplace(id, records_.size() - 1);
        return records_.back().id;
    }

    const VectorRecord* find(const std::string& id) const {
        auto it = index_by_id_.find(id);
        return it == index_by_id_.end() ? nullptr : &records_[it->second];
    }

    /// Exact scan over all records passing the filter; returns up to k hits
    /// sorted by similarity descending, ties broken by lower insert_seq.
    std::vector<QueryHit> query_top_k(const EmbeddingVector& q, std::size_t k,
                                      const MetadataFilter& filter = {}) const {
        if (k == 0) {
            throw Error("query_top_k requires k >= 1");
        }
        if (records_.empty()) {
            throw EmptyIndex("store is empty");
        }
        if (q.dim() != dim_) {
            throw DimensionMismatch(dim_, q.dim());
        }
        struct Scored {
            double similarity;
            std::uint64_t seq;
            const VectorRecord* rec;
        };
        std::vector<Scored> scored;
        scored.reserve(records_.size());
        for (const VectorRecord& rec : records_) {
            if (filter && !filter(rec.metadata)) continue;
            scored.push_back({cosine(q, rec.vector), rec.insert_seq, &rec});
        }
        if (scored.empty()) {
            throw EmptyIndex("no record matches the metadata filter");
        }
        auto better = [](const Scored& a, const Scored& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            return a.seq < b.seq;
        };
        std::size_t take = std::min(k, scored.size());
        std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
        std::vector<QueryHit> hits;
        hits.reserve(take);
        for (std::size_t i = 0; i < take; ++i) {
            hits.push_back({scored[i].rec->id, scored[i].rec->metadata.ailment, scored[i].similarity});
        }
        return hits;
    }

    // Records in insert_seq order.
    const std::vector<VectorRecord>& records() const { return records_; }

    void snapshot(const std::filesystem::path& path) const {
        std::string buf;
        buf.append("VTS1");
        detail::put_u32(buf, static_cast<std::uint32_t>(dim_));
        detail::put_u64(buf, records_.size());
        for (const VectorRecord& rec : records_) {
            detail::put_str(buf, rec.id);
            detail::put_u64(buf, rec.insert_seq);
            detail::put_u32(buf, 4);
            detail::put_str(buf, "ailment");
            detail::put_str(buf, rec.metadata.ailment);
            detail::put_str(buf, "source_model");
            detail::put_str(buf, rec.metadata.source_model);
            detail::put_str(buf, "kind");
            detail::put_str(buf, to_string(rec.metadata.kind));
            detail::put_str(buf, "approx_tokens");
            detail::put_str(buf, std::to_string(rec.metadata.approx_tokens));
            for (double v : rec.vector.components) {
                detail::put_f64(buf, v);
            }
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open snapshot file for writing: " + path.string());
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) {
            throw IoError("failed writing snapshot file: " + path.string());
        }
    }

    static VectorStore restore(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw IoError("cannot open snapshot file for reading: " + path.string());
        }
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        detail::SnapshotReader r(buf.data(), buf.size());
        r.expect_magic("VTS1", 4);
        std::uint32_t dim = r.u32();
        std::uint64_t count = r.u64();
        if (count > 0 && dim == 0) {
            throw CorruptSnapshot("record count nonzero but dimension is zero", r.offset());
        }
        VectorStore store;
        std::uint64_t max_seq = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            VectorRecord rec;
            rec.id = r.str();
            rec.insert_seq = r.u64();
            std::uint32_t pairs = r.u32();
            bool have[4] = {false, false, false, false};
            for (std::uint32_t p = 0; p < pairs; ++p) {
                std::size_t key_offset = r.offset();
                std::string key = r.str();
                std::string value = r.str();
                if (key == "ailment") {
                    rec.metadata.ailment = value;
                    have[0] = true;
                } else if (key == "source_model") {
                    rec.metadata.source_model = value;
                    have[1] = true;
                } else if (key == "kind") {
                    rec.metadata.kind = record_kind_from_string(value);
                    have[2] = true;
                } else if (key == "approx_tokens") {
                    rec.metadata.approx_tokens = std::stoull(value);
                    have[3] = true;
                } else {
                    throw CorruptSnapshot("unknown metadata key '" + key + "'", key_offset);
                }
            }
            if (!(have[0] && have[1] && have[2] && have[3])) {
                throw CorruptSnapshot("record missing required metadata", r.offset());
            }
            rec.vector.components.resize(dim);
            for (std::uint32_t d = 0; d < dim; ++d) {
                rec.vector.components[d] = r.f64();
            }
            if (!rec.vector.all_finite()) {
                throw CorruptSnapshot("non-finite vector component", r.offset());
            }
            if (store.index_by_id_.count(rec.id) != 0) {
                throw CorruptSnapshot("duplicate record id '" + rec.id + "'", r.offset());
            }
            max_seq = std::max(max_seq, rec.insert_seq);
            store.records_.push_back(std::move(rec));
            store.index_by_id_.emplace(store.records_.back().id, store.records_.size() - 1);
        }
        if (!r.at_end()) {
            throw CorruptSnapshot("trailing bytes after last record", r.offset());
        }
        store.dim_ = dim;
        store.next_seq_ = count == 0 ? 0 : max_seq + 1;
        return store;
    }

private:
    std::vector<VectorRecord> records_;
    std::unordered_map<std::string, std::size_t> index_by_id_;
    std::size_t dim_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace simtext
