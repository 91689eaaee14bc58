#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shopflow {

enum class EventType : uint8_t { View = 0, Cart = 1, RemoveFromCart = 2, Purchase = 3 };

const char* to_string(EventType t);
EventType event_type_from_string(std::string_view s);

// One cleaned log row. Optional metadata that is missing in the source file
// (or dropped by a cleaning rule) is absent, never an empty string.
struct RawEvent {
    int64_t event_time = 0;  // UTC epoch seconds
    EventType event_type = EventType::View;
    std::string product_id;
    std::optional<std::string> category_id;
    std::optional<std::string> category_code;
    std::optional<std::string> brand;
    double price = 0.0;
    std::string user_id;
    std::optional<std::string> user_session;

    bool operator==(const RawEvent&) const = default;
};

// Fixed nine-column schema in the order the source files use.
inline const std::vector<std::string> kEventColumns = {
    "event_time", "event_type",    "product_id", "category_id", "category_code",
    "brand",      "price",         "user_id",    "user_session"};

struct ParseError : std::runtime_error {
    ParseError(uint64_t row, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ": " + what), row_index(row) {}
    uint64_t row_index;
};

// Calendar helpers (proleptic Gregorian, UTC only).
int64_t days_from_civil(int y, int m, int d);
void civil_from_days(int64_t days, int& y, int& m, int& d);

struct DateTimeParts {
    int year, month, day, hour, minute, second;
    int day_of_week;  // Monday = 0 .. Sunday = 6
};
DateTimeParts datetime_parts(int64_t epoch_seconds);

// "YYYY-MM-DD HH:MM:SS UTC" <-> epoch seconds.
int64_t parse_event_time(std::string_view s);
std::string format_event_time(int64_t epoch_seconds);

int64_t make_timestamp(int y, int mo, int d, int h, int mi, int s);

}  // namespace shopflow
