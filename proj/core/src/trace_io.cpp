#include "pacekit/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace pacekit {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw IoError("failed to format double");
  return std::string(buf, ptr);
}

double parse_double_field(std::string_view field, std::string_view context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw CsvError("bad numeric field '" + std::string(field) + "' in " + std::string(context));
  }
  return value;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<Request> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path.string());

  std::vector<Request> requests;
  std::string raw;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "t,f_coeff,b_coeff") {
        throw CsvError(path.string() + ":" + std::to_string(line_no) +
                       ": expected header 't,f_coeff,b_coeff'");
      }
      header_seen = true;
      continue;
    }
    const std::string context = path.string() + ":" + std::to_string(line_no);
    auto fields = split_fields(line);
    if (fields.size() != 3) throw CsvError(context + ": expected 3 fields");
    const double t = parse_double_field(fields[0], context);
    if (t != static_cast<double>(requests.size() + 1)) {
      throw CsvError(context + ": rows must be numbered 1..T in order");
    }
    Request r;
    r.f_coeff = parse_double_field(fields[1], context);
    r.b_coeff = parse_double_field(fields[2], context);
    requests.push_back(r);
  }
  if (!header_seen) throw CsvError(path.string() + ": missing header row");
  return requests;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const Request> requests,
                     const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file: " + path.string());
  if (!provenance.empty()) out << "# " << provenance << "\n";
  out << "t,f_coeff,b_coeff\n";
  for (std::size_t i = 0; i < requests.size(); ++i) {
    out << (i + 1) << ',' << format_double(requests[i].f_coeff) << ','
        << format_double(requests[i].b_coeff) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace pacekit
