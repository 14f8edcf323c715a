#ifndef MAGTRACE_IO_HPP
#define MAGTRACE_IO_HPP

#include <string>

namespace magtrace {

// CSV number formatting: 12 significant digits.
std::string csv_number(double v);

// Current wall-clock time, ISO-8601 UTC ("generated_at" metadata field).
std::string timestamp_utc();

void write_file(const std::string& path, const std::string& content);

} // namespace magtrace

#endif
