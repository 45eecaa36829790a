#include "pulse/records.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace pulse {

std::string format_utc(std::int64_t epoch_seconds) {
    using namespace std::chrono;
    const sys_seconds instant{seconds{epoch_seconds}};
    const auto day = floor<days>(instant);
    const year_month_day ymd{day};
    const hh_mm_ss hms{instant - day};
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return buffer;
}

std::string utc_timestamp() {
    if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH"); fixed != nullptr && *fixed != '\0') {
        char* end = nullptr;
        const long long value = std::strtoll(fixed, &end, 10);
        if (end != nullptr && *end == '\0') return format_utc(value);
    }
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    return format_utc(now.time_since_epoch().count());
}

}  // namespace pulse
