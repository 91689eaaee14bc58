#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shopflow/csv.hpp"
#include "shopflow/event.hpp"

namespace shopflow {

// Declarative row/column cleaning rules. Row predicates evaluate on the
// parsed input row; column drops blank the matching optional fields of
// emitted events. Rules therefore commute and the set is order-independent.
struct CleaningRules {
    bool drop_negative_price = true;
    bool require_session = true;
    std::optional<std::string> category_filter;  // keep rows whose category_code contains this
    bool require_brand_and_category = false;
    std::vector<std::string> drop_columns;  // subset of {category_id, category_code, brand}

    static CleaningRules none();
    static CleaningRules cosmetics_preset();
    static CleaningRules electronics_preset();
};

struct CleaningStats {
    uint64_t rows_read = 0;
    uint64_t rows_emitted = 0;
    // Dropped rows are attributed to the first failing rule in a fixed order
    // so the counts reconcile: rows_emitted + sum(dropped) == rows_read.
    std::map<std::string, uint64_t> rows_dropped;

    uint64_t total_dropped() const;
};

// Parses one split CSV record against a column schema (names in file order).
// `row_index` is used only for error reporting.
RawEvent parse_event_row(const std::vector<std::string>& record,
                         const std::vector<std::string>& schema, uint64_t row_index = 0);

// Applies the rules to a single event. Returns true to keep; on drop, sets
// `rule` to the name of the (first) violated rule.
bool passes_rules(const RawEvent& e, const CleaningRules& rules, std::string* rule = nullptr);

// Applies column drops to an event that passed the row predicates.
RawEvent apply_column_drops(RawEvent e, const CleaningRules& rules);

std::vector<RawEvent> clean_events(const std::vector<RawEvent>& events, const CleaningRules& rules,
                                   CleaningStats* stats = nullptr);

// Streaming chunk reader over a headered event CSV. Peak memory is bounded by
// O(chunk_rows); the concatenation of the batches equals the file contents.
class ChunkReader {
public:
    ChunkReader(const std::string& path, uint64_t chunk_rows);

    // Fills `batch` with up to chunk_rows events; returns false when the file
    // is exhausted and `batch` is empty.
    bool next(std::vector<RawEvent>& batch);

    const std::vector<std::string>& schema() const { return schema_; }

private:
    csv::LineReader reader_;
    std::vector<std::string> schema_;
    uint64_t chunk_rows_;
    std::vector<std::string> fields_;
    uint64_t row_index_ = 0;
};

std::vector<RawEvent> read_all_events(const std::string& path);

std::vector<std::string> event_to_record(const RawEvent& e);

// Writes events in the standard nine-column format. Tracks an FNV-1a hash of
// the emitted bytes so downstream caches can address this file's content.
class EventWriter {
public:
    explicit EventWriter(const std::string& path);
    void write(const RawEvent& e);
    void finish();  // flush; afterwards rows()/content_hash() are final
    uint64_t rows() const { return rows_; }
    uint64_t content_hash() const { return hash_; }

private:
    csv::Writer out_;
    uint64_t rows_ = 0;
    uint64_t hash_ = 1469598103934665603ULL;
    std::vector<std::string> record_;
};

// Streaming clean: reads `input` in chunks, writes the cleaned cache to
// `output` plus an <output>.meta.json sidecar describing rules and counts.
CleaningStats clean_file(const std::string& input, const std::string& output,
                         const CleaningRules& rules, uint64_t chunk_rows = 200000);

uint64_t hash_file(const std::string& path);

std::string sidecar_path(const std::string& data_path);

}  // namespace shopflow
