#include "shopflow/event.hpp"

#include <cstdio>

namespace shopflow {

const char* to_string(EventType t) {
    switch (t) {
        case EventType::View: return "view";
        case EventType::Cart: return "cart";
        case EventType::RemoveFromCart: return "remove_from_cart";
        case EventType::Purchase: return "purchase";
    }
    return "?";
}

EventType event_type_from_string(std::string_view s) {
    if (s == "view") return EventType::View;
    if (s == "cart") return EventType::Cart;
    if (s == "remove_from_cart") return EventType::RemoveFromCart;
    if (s == "purchase") return EventType::Purchase;
    throw std::invalid_argument("unknown event type: '" + std::string(s) + "'");
}

int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

DateTimeParts datetime_parts(int64_t t) {
    int64_t days = t / 86400;
    int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    DateTimeParts p{};
    civil_from_days(days, p.year, p.month, p.day);
    p.hour = static_cast<int>(rem / 3600);
    p.minute = static_cast<int>((rem % 3600) / 60);
    p.second = static_cast<int>(rem % 60);
    // epoch day 0 (1970-01-01) was a Thursday; Monday = 0.
    p.day_of_week = static_cast<int>(((days % 7) + 7 + 3) % 7);
    return p;
}

int64_t make_timestamp(int y, int mo, int d, int h, int mi, int s) {
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

namespace {

bool parse_digits(std::string_view s, size_t pos, size_t count, int& out) {
    int v = 0;
    for (size_t i = pos; i < pos + count; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

int64_t parse_event_time(std::string_view s) {
    // Exactly "YYYY-MM-DD HH:MM:SS UTC".
    int y, mo, d, h, mi, sec;
    const bool shape_ok = s.size() == 23 && s[4] == '-' && s[7] == '-' && s[10] == ' ' &&
                          s[13] == ':' && s[16] == ':' && s.substr(19) == " UTC";
    if (!shape_ok || !parse_digits(s, 0, 4, y) || !parse_digits(s, 5, 2, mo) ||
        !parse_digits(s, 8, 2, d) || !parse_digits(s, 11, 2, h) || !parse_digits(s, 14, 2, mi) ||
        !parse_digits(s, 17, 2, sec))
        throw std::invalid_argument("malformed timestamp: '" + std::string(s) + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 59)
        throw std::invalid_argument("timestamp out of range: '" + std::string(s) + "'");
    return make_timestamp(y, mo, d, h, mi, sec);
}

std::string format_event_time(int64_t t) {
    const DateTimeParts p = datetime_parts(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d UTC", p.year, p.month, p.day,
                  p.hour, p.minute, p.second);
    return buf;
}

}  // namespace shopflow
