#include "shopflow/ingest.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace shopflow {

using nlohmann::json;

CleaningRules CleaningRules::none() {
    CleaningRules r;
    r.drop_negative_price = false;
    r.require_session = false;
    return r;
}

CleaningRules CleaningRules::cosmetics_preset() {
    CleaningRules r;
    r.drop_negative_price = true;
    r.require_session = true;
    r.drop_columns = {"category_code", "brand"};
    return r;
}

CleaningRules CleaningRules::electronics_preset() {
    CleaningRules r;
    r.drop_negative_price = true;
    r.require_session = true;
    r.category_filter = "electronics";
    r.require_brand_and_category = true;
    r.drop_columns = {"category_id"};
    return r;
}

uint64_t CleaningStats::total_dropped() const {
    uint64_t n = 0;
    for (const auto& [_, c] : rows_dropped) n += c;
    return n;
}

RawEvent parse_event_row(const std::vector<std::string>& record,
                         const std::vector<std::string>& schema, uint64_t row_index) {
    if (record.size() != schema.size())
        throw ParseError(row_index, "expected " + std::to_string(schema.size()) + " fields, got " +
                                        std::to_string(record.size()));
    RawEvent e;
    auto optional_field = [](const std::string& s) -> std::optional<std::string> {
        if (s.empty()) return std::nullopt;
        return s;
    };
    for (size_t i = 0; i < schema.size(); ++i) {
        const std::string& name = schema[i];
        const std::string& value = record[i];
        try {
            if (name == "event_time") {
                e.event_time = parse_event_time(value);
            } else if (name == "event_type") {
                e.event_type = event_type_from_string(value);
            } else if (name == "product_id") {
                e.product_id = value;
            } else if (name == "category_id") {
                e.category_id = optional_field(value);
            } else if (name == "category_code") {
                e.category_code = optional_field(value);
            } else if (name == "brand") {
                e.brand = optional_field(value);
            } else if (name == "price") {
                e.price = csv::parse_double(value);
                if (!std::isfinite(e.price)) throw std::invalid_argument("non-finite price");
            } else if (name == "user_id") {
                e.user_id = value;
            } else if (name == "user_session") {
                e.user_session = optional_field(value);
            } else {
                throw std::invalid_argument("unknown column '" + name + "'");
            }
        } catch (const std::invalid_argument& ex) {
            throw ParseError(row_index, std::string(ex.what()) + " in column '" + name + "'");
        }
    }
    return e;
}

bool passes_rules(const RawEvent& e, const CleaningRules& rules, std::string* rule) {
    auto fail = [&](const char* name) {
        if (rule) *rule = name;
        return false;
    };
    if (rules.drop_negative_price && e.price < 0.0) return fail("negative_price");
    if (rules.require_session && !e.user_session) return fail("missing_session");
    if (rules.category_filter) {
        if (!e.category_code || e.category_code->find(*rules.category_filter) == std::string::npos)
            return fail("category_filter");
    }
    if (rules.require_brand_and_category && (!e.brand || !e.category_code))
        return fail("missing_brand_or_category");
    return true;
}

RawEvent apply_column_drops(RawEvent e, const CleaningRules& rules) {
    for (const std::string& col : rules.drop_columns) {
        if (col == "category_id")
            e.category_id.reset();
        else if (col == "category_code")
            e.category_code.reset();
        else if (col == "brand")
            e.brand.reset();
        else
            throw std::invalid_argument("cannot drop column '" + col + "'");
    }
    return e;
}

std::vector<RawEvent> clean_events(const std::vector<RawEvent>& events, const CleaningRules& rules,
                                   CleaningStats* stats) {
    std::vector<RawEvent> out;
    out.reserve(events.size());
    CleaningStats local;
    std::string rule;
    for (const RawEvent& e : events) {
        ++local.rows_read;
        if (!passes_rules(e, rules, &rule)) {
            ++local.rows_dropped[rule];
            continue;
        }
        ++local.rows_emitted;
        out.push_back(apply_column_drops(e, rules));
    }
    if (stats) *stats = std::move(local);
    return out;
}

ChunkReader::ChunkReader(const std::string& path, uint64_t chunk_rows)
    : reader_(path), chunk_rows_(chunk_rows) {
    if (chunk_rows_ == 0) throw std::invalid_argument("chunk_rows must be positive");
    std::string header;
    if (!reader_.next(header)) throw std::runtime_error("empty file (no header): " + path);
    csv::split_line(header, schema_);
    // The schema is the fixed nine columns, in any order.
    auto sorted = schema_;
    std::sort(sorted.begin(), sorted.end());
    auto expected = kEventColumns;
    std::sort(expected.begin(), expected.end());
    if (sorted != expected)
        throw std::runtime_error("unexpected header in " + path + ": '" + header + "'");
}

bool ChunkReader::next(std::vector<RawEvent>& batch) {
    batch.clear();
    batch.reserve(chunk_rows_);
    std::string line;
    while (batch.size() < chunk_rows_ && reader_.next(line)) {
        ++row_index_;
        csv::split_line(line, fields_);
        batch.push_back(parse_event_row(fields_, schema_, row_index_));
    }
    return !batch.empty();
}

std::vector<RawEvent> read_all_events(const std::string& path) {
    ChunkReader reader(path, 1 << 16);
    std::vector<RawEvent> all, batch;
    while (reader.next(batch)) all.insert(all.end(), batch.begin(), batch.end());
    return all;
}

std::vector<std::string> event_to_record(const RawEvent& e) {
    auto opt = [](const std::optional<std::string>& s) { return s ? *s : std::string(); };
    return {format_event_time(e.event_time),
            to_string(e.event_type),
            e.product_id,
            opt(e.category_id),
            opt(e.category_code),
            opt(e.brand),
            csv::format_double(e.price),
            e.user_id,
            opt(e.user_session)};
}

EventWriter::EventWriter(const std::string& path) : out_(path) {
    out_.write_line(csv::join_row(kEventColumns));
}

void EventWriter::write(const RawEvent& e) {
    record_ = event_to_record(e);
    const std::string line = csv::join_row(record_);
    for (unsigned char c : line) {
        hash_ ^= c;
        hash_ *= 1099511628211ULL;
    }
    out_.write_line(line);
    ++rows_;
}

void EventWriter::finish() { out_.flush(); }

std::string sidecar_path(const std::string& data_path) { return data_path + ".meta.json"; }

CleaningStats clean_file(const std::string& input, const std::string& output,
                         const CleaningRules& rules, uint64_t chunk_rows) {
    ChunkReader reader(input, chunk_rows);
    EventWriter writer(output);
    CleaningStats stats;
    std::vector<RawEvent> batch;
    std::string rule;
    while (reader.next(batch)) {
        for (RawEvent& e : batch) {
            ++stats.rows_read;
            if (!passes_rules(e, rules, &rule)) {
                ++stats.rows_dropped[rule];
                continue;
            }
            ++stats.rows_emitted;
            writer.write(apply_column_drops(std::move(e), rules));
        }
    }
    writer.finish();

    json meta;
    meta["schema_version"] = 1;
    meta["rows_read"] = stats.rows_read;
    meta["rows_emitted"] = stats.rows_emitted;
    meta["rows_dropped"] = stats.rows_dropped;
    json jrules;
    jrules["drop_negative_price"] = rules.drop_negative_price;
    jrules["require_session"] = rules.require_session;
    if (rules.category_filter) jrules["category_filter"] = *rules.category_filter;
    jrules["require_brand_and_category"] = rules.require_brand_and_category;
    jrules["drop_columns"] = rules.drop_columns;
    meta["rules"] = jrules;
    meta["content_hash"] = writer.content_hash();
    std::ofstream side(sidecar_path(output));
    side << meta.dump(2) << '\n';
    return stats;
}

uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    uint64_t h = 1469598103934665603ULL;
    std::vector<char> buf(1 << 20);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

}  // namespace shopflow
