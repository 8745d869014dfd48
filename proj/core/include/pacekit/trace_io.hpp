#ifndef PACEKIT_TRACE_IO_HPP
#define PACEKIT_TRACE_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pacekit/core.hpp"

namespace pacekit {

// Shortest decimal form that parses back to the same double (round-trip
// bit-exact). Used by every CSV writer.
std::string format_double(double value);

// Strict double parse of a whole field; throws CsvError on trailing junk.
double parse_double_field(std::string_view field, std::string_view context);

// Trace files: optional '#' comment lines, then a `t,f_coeff,b_coeff` header,
// then one row per period with t = 1..T.
std::vector<Request> read_trace_csv(const std::filesystem::path& path);

// `provenance` is written as a '#' comment line before the header when
// non-empty.
void write_trace_csv(const std::filesystem::path& path, std::span<const Request> requests,
                     const std::string& provenance = {});

}  // namespace pacekit

#endif  // PACEKIT_TRACE_IO_HPP
