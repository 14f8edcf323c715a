#include "magtrace/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "magtrace/errors.hpp"

namespace magtrace {

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numeric_error("cannot open output file: " + path);
    out << content;
    if (!out.good()) throw numeric_error("write failed: " + path);
}

} // namespace magtrace
