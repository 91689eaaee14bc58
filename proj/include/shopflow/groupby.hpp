#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "shopflow/event.hpp"
#include "shopflow/random.hpp"

namespace shopflow {

// Binary scratch buffer for spilled aggregation state. Doubles round-trip
// bit-exactly (memcpy, little-endian hosts only).
class ByteSink {
public:
    explicit ByteSink(std::string& out) : out_(out) {}
    void u64(uint64_t v) { raw(&v, sizeof v); }
    void i64(int64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u64(s.size());
        out_.append(s);
    }
    void raw(const void* p, size_t n) { out_.append(static_cast<const char*>(p), n); }

private:
    std::string& out_;
};

class ByteSource {
public:
    ByteSource(const char* p, const char* end) : p_(p), end_(end) {}
    uint64_t u64() {
        uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    int64_t i64() {
        int64_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    std::string str() {
        const uint64_t n = u64();
        need(n);
        std::string s(p_, n);
        p_ += n;
        return s;
    }
    void raw(void* out, size_t n) {
        need(n);
        std::memcpy(out, p_, n);
        p_ += n;
    }
    bool done() const { return p_ == end_; }

private:
    void need(size_t n) {
        if (static_cast<size_t>(end_ - p_) < n) throw std::runtime_error("corrupt spill data");
    }
    const char* p_;
    const char* end_;
};

struct GroupByConfig {
    uint32_t partitions = 16;
    uint64_t memory_cap_bytes = 1ull << 30;
    std::string spill_dir;  // empty -> std::filesystem::temp_directory_path()
};

struct GroupByStats {
    uint64_t events = 0;
    uint64_t groups = 0;
    uint64_t spills = 0;          // spill waves
    uint64_t spilled_states = 0;  // partial states written to disk
    uint64_t peak_resident_bytes = 0;
};

// Streaming hash group-by with spill-to-disk partitions.
//
// Events are routed to partitions by a hash of the group key, so a group's
// updates always happen in stream order no matter how the input is chunked
// or how many partitions are configured. When accounted resident state
// exceeds the cap, whole partitions are serialized to per-partition spill
// files (largest first) and merged back one partition at a time in finish().
// Merge combines time-sliced partials of one group in spill order, so counts,
// mins, maxes and distinct sets are exact; floating sums may differ from the
// unspilled path in the final ulps.
//
// Agg interface:
//   struct State { size_t approx_bytes() const; };
//   std::string key(const RawEvent&) const;
//   void update(State&, const RawEvent&) const;
//   void merge(State& earlier, const State& later) const;
//   void serialize(const State&, ByteSink&) const;
//   State deserialize(ByteSource&) const;
template <typename Agg>
class GroupBy {
public:
    using State = typename Agg::State;

    GroupBy(Agg agg, GroupByConfig config) : agg_(std::move(agg)), config_(std::move(config)) {
        if (config_.partitions == 0) throw std::invalid_argument("partitions must be positive");
        if (config_.spill_dir.empty())
            config_.spill_dir = std::filesystem::temp_directory_path().string();
        parts_.resize(config_.partitions);
        const uint64_t tag = Rng::splitmix64(seed_mix_);
        for (uint32_t i = 0; i < config_.partitions; ++i) {
            parts_[i].spill_path = config_.spill_dir + "/shopflow-spill-" + std::to_string(tag) +
                                   "-p" + std::to_string(i) + ".bin";
        }
    }

    GroupBy(const GroupBy&) = delete;
    GroupBy& operator=(const GroupBy&) = delete;

    ~GroupBy() {
        for (auto& p : parts_)
            if (p.spilled) std::remove(p.spill_path.c_str());
    }

    void add(const RawEvent& e) {
        ++stats_.events;
        std::string key = agg_.key(e);
        Partition& part = parts_[Rng::fnv1a(key) % config_.partitions];
        auto [it, inserted] = part.states.try_emplace(std::move(key));
        if (inserted) {
            part.bytes += entry_overhead(it->first);
            total_bytes_ += entry_overhead(it->first);
        }
        const size_t before = it->second.approx_bytes();
        agg_.update(it->second, e);
        const size_t after = it->second.approx_bytes();
        part.bytes += after - before;
        total_bytes_ += after - before;
        stats_.peak_resident_bytes = std::max(stats_.peak_resident_bytes, total_bytes_);
        if (total_bytes_ > config_.memory_cap_bytes) spill_until(config_.memory_cap_bytes / 2);
    }

    void add(const std::vector<RawEvent>& batch) {
        for (const RawEvent& e : batch) add(e);
    }

    // Emits (key, state) pairs, partition by partition, key-sorted within each
    // partition. Single use.
    template <typename Emit>
    void finish(Emit&& emit) {
        for (Partition& part : parts_) {
            std::unordered_map<std::string, State> merged;
            if (part.spilled) {
                std::ifstream in(part.spill_path, std::ios::binary);
                if (!in) throw std::runtime_error("lost spill file " + part.spill_path);
                std::string blob((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
                ByteSource src(blob.data(), blob.data() + blob.size());
                while (!src.done()) {
                    std::string key = src.str();
                    State st = agg_.deserialize(src);
                    auto [it, inserted] = merged.try_emplace(std::move(key), std::move(st));
                    if (!inserted) agg_.merge(it->second, st);
                }
            }
            for (auto& [key, st] : part.states) {
                auto [it, inserted] = merged.try_emplace(key, std::move(st));
                if (!inserted) agg_.merge(it->second, st);
            }
            part.states.clear();
            part.bytes = 0;

            std::vector<const std::string*> keys;
            keys.reserve(merged.size());
            for (const auto& [key, _] : merged) keys.push_back(&key);
            std::sort(keys.begin(), keys.end(),
                      [](const std::string* a, const std::string* b) { return *a < *b; });
            stats_.groups += merged.size();
            for (const std::string* key : keys) emit(*key, merged.at(*key));
        }
        total_bytes_ = 0;
    }

    const GroupByStats& stats() const { return stats_; }

private:
    struct Partition {
        std::unordered_map<std::string, State> states;
        uint64_t bytes = 0;
        bool spilled = false;
        std::string spill_path;
    };

    static size_t entry_overhead(const std::string& key) {
        // hash-map node, bucket slot and key storage, counted generously so the
        // accounted figure upper-bounds real usage.
        return 96 + key.capacity();
    }

    void spill_until(uint64_t target_bytes) {
        ++stats_.spills;
        std::vector<uint32_t> order(parts_.size());
        for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](uint32_t a, uint32_t b) { return parts_[a].bytes > parts_[b].bytes; });
        std::string blob;
        for (uint32_t idx : order) {
            if (total_bytes_ <= target_bytes) break;
            Partition& part = parts_[idx];
            if (part.states.empty()) continue;
            blob.clear();
            ByteSink sink(blob);
            // Deterministic spill order within the chunk.
            std::vector<const std::string*> keys;
            keys.reserve(part.states.size());
            for (const auto& [key, _] : part.states) keys.push_back(&key);
            std::sort(keys.begin(), keys.end(),
                      [](const std::string* a, const std::string* b) { return *a < *b; });
            for (const std::string* key : keys) {
                sink.str(*key);
                agg_.serialize(part.states.at(*key), sink);
            }
            std::ofstream out(part.spill_path,
                              std::ios::binary | (part.spilled ? std::ios::app : std::ios::trunc));
            if (!out) throw std::runtime_error("cannot open spill file " + part.spill_path);
            out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
            if (!out) throw std::runtime_error("failed writing spill file " + part.spill_path);
            part.spilled = true;
            stats_.spilled_states += part.states.size();
            part.states.clear();
            total_bytes_ -= part.bytes;
            part.bytes = 0;
        }
    }

    Agg agg_;
    GroupByConfig config_;
    std::vector<Partition> parts_;
    uint64_t total_bytes_ = 0;
    uint64_t seed_mix_ = reinterpret_cast<uintptr_t>(this) ^ 0x5bf0'3635'dee5'41c5ULL;
    GroupByStats stats_;
};

}  // namespace shopflow
