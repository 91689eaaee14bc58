#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shopflow/event.hpp"
#include "shopflow/groupby.hpp"

namespace shopflow {

// Hour-of-day bins, ordinal codes 0..6.
enum class TimeOfDay : uint8_t {
    Dawn = 0,          // [0, 5)
    EarlyMorning = 1,  // [5, 8)
    Morning = 2,       // [8, 12)
    Noon = 3,          // 12
    Afternoon = 4,     // [13, 17)
    Evening = 5,       // [17, 21)
    Night = 6          // [21, 24)
};

TimeOfDay time_of_day(int hour);
const char* to_string(TimeOfDay t);

// Derived calendar fields shared by both aggregation levels.
struct DateTimeFeatures {
    int day_of_week = 0;  // Monday = 0
    TimeOfDay time_of_day = TimeOfDay::Dawn;
    int year = 0;
    int month = 0;
    bool weekend = false;
};
DateTimeFeatures datetime_features(int64_t epoch_seconds);

// Indices into per-action arrays.
inline constexpr int kCart = 0;
inline constexpr int kView = 1;
inline constexpr int kRemove = 2;

struct SessionFeatures {
    std::string session_id;
    std::string user_id;
    uint64_t total_events = 0;
    int64_t interaction_time = 0;  // seconds, last event minus first
    std::array<uint64_t, 3> num_times{};   // cart/view/remove event counts
    std::array<double, 3> avg_amount{};    // mean price per action
    std::array<uint64_t, 3> num_brands{};  // distinct brands per action
    std::array<double, 3> overall_amount{};  // summed price per action
    std::array<uint64_t, 3> num_products{};  // distinct products per action
    DateTimeFeatures when;  // from the session's first event
    bool purchased = false;

    bool operator==(const SessionFeatures&) const = default;
};

struct JourneyFeatures {
    std::string user_id;
    std::string product_id;
    uint64_t num_events = 0;
    uint64_t num_sessions = 0;
    int64_t interaction_time = 0;
    std::array<uint64_t, 3> num_actions{};  // cart/view/remove counts
    double min_price = 0.0;
    double max_price = 0.0;
    // max over the journey's sessions of that session's summed action price
    std::array<double, 3> insession_amount{};
    DateTimeFeatures when;  // from the journey's last event
    bool purchased = false;

    bool operator==(const JourneyFeatures&) const = default;
};

// ---------------------------------------------------------------------------
// Aggregators for the group-by engine. All state fields are order-insensitive
// (sums, counts, mins, maxes, sets) except the stream-order sums, which the
// engine updates in arrival order per group.

struct SessionAgg {
    struct State {
        std::string user_id;
        int64_t first_ts = INT64_MAX;
        int64_t last_ts = INT64_MIN;
        uint64_t total_events = 0;
        uint64_t purchases = 0;
        std::array<uint64_t, 3> counts{};
        std::array<double, 3> amount_sums{};
        std::array<std::set<std::string>, 3> brands;
        std::array<std::set<std::string>, 3> products;
        size_t dyn_bytes = 0;

        size_t approx_bytes() const { return sizeof(State) + dyn_bytes; }
    };

    std::string key(const RawEvent& e) const { return e.user_session ? *e.user_session : std::string(); }
    void update(State& s, const RawEvent& e) const;
    void merge(State& earlier, const State& later) const;
    void serialize(const State& s, ByteSink& sink) const;
    State deserialize(ByteSource& src) const;
    SessionFeatures finalize(const std::string& key, const State& s) const;
};

struct JourneyAgg {
    struct State {
        int64_t first_ts = INT64_MAX;
        int64_t last_ts = INT64_MIN;
        uint64_t total_events = 0;
        uint64_t purchases = 0;
        std::array<uint64_t, 3> counts{};
        double min_price = 0.0;
        double max_price = 0.0;
        bool any_price = false;
        std::map<std::string, std::array<double, 3>> session_amounts;
        size_t dyn_bytes = 0;

        size_t approx_bytes() const { return sizeof(State) + dyn_bytes; }
    };

    std::string key(const RawEvent& e) const;
    static std::pair<std::string, std::string> split_key(const std::string& key);
    void update(State& s, const RawEvent& e) const;
    void merge(State& earlier, const State& later) const;
    void serialize(const State& s, ByteSink& sink) const;
    State deserialize(ByteSource& src) const;
    JourneyFeatures finalize(const std::string& key, const State& s) const;
};

using SessionGroupBy = GroupBy<SessionAgg>;
using JourneyGroupBy = GroupBy<JourneyAgg>;

// Whole-stream helpers for desk-scale inputs and tests.
std::vector<SessionFeatures> sessionize(const std::vector<RawEvent>& events,
                                        GroupByConfig config = {});
std::vector<JourneyFeatures> build_journeys(const std::vector<RawEvent>& events,
                                            GroupByConfig config = {});

// ---------------------------------------------------------------------------
// Numeric encoding.

struct Standardization {
    bool enabled = false;
    std::vector<double> mean;
    std::vector<double> scale;  // population std dev, floored at 1e-12
};

enum class FeatureLevel { Session, Journey };

struct FeatureMatrix {
    std::vector<double> values;  // row-major, rows x cols
    size_t rows = 0;
    size_t cols = 0;
    std::vector<std::string> column_names;
    std::vector<int> labels;
    FeatureLevel level = FeatureLevel::Journey;
    Standardization standardization;

    double at(size_t r, size_t c) const { return values[r * cols + c]; }
    double& at(size_t r, size_t c) { return values[r * cols + c]; }
    const double* row(size_t r) const { return values.data() + r * cols; }
    int column_index(const std::string& name) const;
};

const std::vector<std::string>& session_feature_columns();
const std::vector<std::string>& journey_feature_columns();
// Table-style default model columns at journey level.
const std::vector<std::string>& default_journey_model_columns();

double session_column_value(const SessionFeatures& s, const std::string& column);
double journey_column_value(const JourneyFeatures& j, const std::string& column);

FeatureMatrix encode_matrix(const std::vector<SessionFeatures>& records,
                            const std::vector<std::string>& columns, bool standardize);
FeatureMatrix encode_matrix(const std::vector<JourneyFeatures>& records,
                            const std::vector<std::string>& columns, bool standardize);

// Fits mean/scale on the given rows only (population std dev, scale floor
// 1e-12) and applies them in place; used to standardize on the training
// split before touching held-out data.
Standardization fit_standardization(const FeatureMatrix& m, const std::vector<size_t>& rows);
void apply_standardization(FeatureMatrix& m, const Standardization& s);

// ---------------------------------------------------------------------------
// Feature-record caches (headered CSV + JSON sidecar).

void write_session_cache(const std::string& path, const std::vector<SessionFeatures>& records,
                         uint64_t source_hash);
void write_journey_cache(const std::string& path, const std::vector<JourneyFeatures>& records,
                         uint64_t source_hash);
std::vector<SessionFeatures> read_session_cache(const std::string& path);
std::vector<JourneyFeatures> read_journey_cache(const std::string& path);

std::vector<std::string> session_record_fields(const SessionFeatures& s);
std::vector<std::string> journey_record_fields(const JourneyFeatures& j);

}  // namespace shopflow
