#include "pacekit/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "pacekit/trace_io.hpp"

namespace pacekit {

namespace {

struct Line {
  std::string text;
  std::size_t number;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& origin, std::size_t line, const std::string& value) {
  try {
    return parse_double_field(value, origin);
  } catch (const CsvError&) {
    fail(origin, line, "bad number '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& origin, std::size_t line, const std::string& value) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    fail(origin, line, "bad integer '" + value + "'");
  }
  return out;
}

// key=value tokens separated by whitespace.
std::vector<std::pair<std::string, std::string>> parse_tokens(const std::string& origin,
                                                              std::size_t line_no,
                                                              const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream stream(text);
  std::string token;
  while (stream >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected key=value, got '" + token + "'");
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return out;
}

DistSpec parse_dist_entry(const std::string& origin, std::size_t line_no,
                          const std::string& body) {
  auto tokens = parse_tokens(origin, line_no, body);
  std::string type;
  double f = 0, b = 0, lo = 0, hi = 0;
  bool has_f = false, has_b = false, has_lo = false, has_hi = false;
  std::string atoms_text;
  for (const auto& [key, value] : tokens) {
    if (key == "type") type = value;
    else if (key == "f") { f = parse_number(origin, line_no, value); has_f = true; }
    else if (key == "b") { b = parse_number(origin, line_no, value); has_b = true; }
    else if (key == "lo") { lo = parse_number(origin, line_no, value); has_lo = true; }
    else if (key == "hi") { hi = parse_number(origin, line_no, value); has_hi = true; }
    else if (key == "atoms") atoms_text = value;
    else fail(origin, line_no, "unknown distribution key '" + key + "'");
  }
  if (type == "point") {
    if (!has_f || !has_b) fail(origin, line_no, "point needs f= and b=");
    return PointMass{f, b};
  }
  if (type == "uniform_f") {
    if (!has_lo || !has_hi || !has_b) fail(origin, line_no, "uniform_f needs lo=, hi=, b=");
    return UniformReward{lo, hi, b};
  }
  if (type == "finite") {
    if (atoms_text.empty()) fail(origin, line_no, "finite needs atoms=f:b:p,...");
    FiniteSupport fin;
    for (const std::string& atom : split(atoms_text, ',')) {
      const auto parts = split(atom, ':');
      if (parts.size() != 3) fail(origin, line_no, "atom must be f:b:p, got '" + atom + "'");
      fin.atoms.push_back({parse_number(origin, line_no, parts[0]),
                           parse_number(origin, line_no, parts[1]),
                           parse_number(origin, line_no, parts[2])});
    }
    return fin;
  }
  fail(origin, line_no, "unknown distribution type '" + type + "'");
}

std::vector<DistSpec> build_dist_list(const std::string& origin, const InstanceParams& params,
                                      const std::vector<Line>& lines,
                                      const std::string& section) {
  const std::int64_t horizon = params.horizon;
  std::vector<DistSpec> dists(static_cast<std::size_t>(horizon));
  std::vector<bool> covered(static_cast<std::size_t>(horizon), false);
  for (const Line& line : lines) {
    std::stringstream stream(line.text);
    std::string range;
    stream >> range;
    std::string body;
    std::getline(stream, body);
    std::int64_t first = 1, last = horizon;
    if (range != "all") {
      const auto dots = range.find("..");
      if (dots == std::string::npos) {
        fail(origin, line.number, "range must be 'all' or '<first>..<last>'");
      }
      first = parse_int(origin, line.number, range.substr(0, dots));
      last = parse_int(origin, line.number, range.substr(dots + 2));
    }
    if (first < 1 || last > horizon || first > last) {
      fail(origin, line.number, "range " + range + " outside 1.." + std::to_string(horizon));
    }
    const DistSpec dist = parse_dist_entry(origin, line.number, body);
    try {
      validate_dist(dist);
      validate_dist_bounds(dist, params);
    } catch (const Error& e) {
      fail(origin, line.number, std::string("invalid distribution: ") + e.what());
    }
    for (std::int64_t t = first; t <= last; ++t) {
      if (covered[static_cast<std::size_t>(t - 1)]) {
        fail(origin, line.number, "period " + std::to_string(t) + " covered twice in [" +
                                      section + "]");
      }
      covered[static_cast<std::size_t>(t - 1)] = true;
      dists[static_cast<std::size_t>(t - 1)] = dist;
    }
  }
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (!covered[static_cast<std::size_t>(t - 1)]) {
      throw ConfigError(origin + ": [" + section + "] does not cover period " +
                        std::to_string(t));
    }
  }
  return dists;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::vector<Line>> sections;
  {
    std::stringstream stream(text);
    std::string raw;
    std::string current;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
      ++line_no;
      std::string line = trim(raw);
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = trim(line.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(origin, line_no, "unterminated section header");
        current = line.substr(1, line.size() - 2);
        sections[current];
        continue;
      }
      if (current.empty()) fail(origin, line_no, "content before any [section]");
      sections[current].push_back({line, line_no});
    }
  }

  if (!sections.count("instance")) throw ConfigError(origin + ": missing [instance] section");
  if (!sections.count("true_dists")) throw ConfigError(origin + ": missing [true_dists] section");
  if (!sections.count("sample_dists")) {
    throw ConfigError(origin + ": missing [sample_dists] section");
  }
  for (const auto& [name, lines] : sections) {
    if (name != "instance" && name != "true_dists" && name != "sample_dists" &&
        name != "run") {
      throw ConfigError(origin + ": unknown section [" + name + "]");
    }
  }

  Scenario scenario;
  InstanceParams& params = scenario.config.params;
  for (const Line& line : sections["instance"]) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) fail(origin, line.number, "expected key = value");
    const std::string key = trim(line.text.substr(0, eq));
    const std::string value = trim(line.text.substr(eq + 1));
    if (key == "horizon") params.horizon = parse_int(origin, line.number, value);
    else if (key == "budget") params.budget = parse_number(origin, line.number, value);
    else if (key == "action_cap") params.action_cap = parse_number(origin, line.number, value);
    else if (key == "consumption_bound")
      params.consumption_bound = parse_number(origin, line.number, value);
    else if (key == "reward_bound") params.reward_bound = parse_number(origin, line.number, value);
    else if (key == "rate_bound") params.rate_bound = parse_number(origin, line.number, value);
    else fail(origin, line.number, "unknown [instance] key '" + key + "'");
  }
  try {
    validate_params(params);
  } catch (const BoundViolation& e) {
    throw ConfigError(origin + ": [instance] invalid: " + e.what());
  }

  auto section_is_copy = [&](const std::string& name, const std::string& other) {
    const auto& lines = sections[name];
    if (lines.size() != 1) return false;
    const auto eq = lines[0].text.find('=');
    if (eq == std::string::npos) return false;
    return trim(lines[0].text.substr(0, eq)) == "copy" &&
           trim(lines[0].text.substr(eq + 1)) == other;
  };

  scenario.config.true_dists =
      build_dist_list(origin, params, sections["true_dists"], "true_dists");
  if (section_is_copy("sample_dists", "true_dists")) {
    scenario.config.sample_dists = scenario.config.true_dists;
  } else {
    scenario.config.sample_dists =
        build_dist_list(origin, params, sections["sample_dists"], "sample_dists");
  }

  scenario.algos = {Algo::dual_ftrl, Algo::static_dual, Algo::fixed_target};
  if (sections.count("run")) {
    for (const Line& line : sections["run"]) {
      const auto eq = line.text.find('=');
      if (eq == std::string::npos) fail(origin, line.number, "expected key = value");
      const std::string key = trim(line.text.substr(0, eq));
      const std::string value = trim(line.text.substr(eq + 1));
      if (key == "seed") {
        scenario.config.seed = static_cast<std::uint64_t>(parse_int(origin, line.number, value));
      } else if (key == "trials") {
        scenario.config.trials = parse_int(origin, line.number, value);
      } else if (key == "perturbation_scale") {
        scenario.config.perturbation_scale = parse_number(origin, line.number, value);
      } else if (key == "algos") {
        scenario.algos.clear();
        for (const std::string& name : split(value, ',')) {
          if (name == "ftrl") scenario.algos.push_back(Algo::dual_ftrl);
          else if (name == "static") scenario.algos.push_back(Algo::static_dual);
          else if (name == "fixed") scenario.algos.push_back(Algo::fixed_target);
          else fail(origin, line.number, "unknown algorithm '" + name + "'");
        }
      } else if (key == "regularizer") {
        if (value == "quadratic") scenario.options.regularizer = RegularizerKind::quadratic;
        else if (value == "entropy") scenario.options.regularizer = RegularizerKind::shifted_entropy;
        else fail(origin, line.number, "unknown regularizer '" + value + "'");
      } else if (key == "eta") {
        scenario.options.step_size = value == "auto" ? 0.0 : parse_number(origin, line.number, value);
      } else if (key == "fluid_grid") {
        scenario.options.fluid_grid = static_cast<int>(parse_int(origin, line.number, value));
      } else {
        fail(origin, line.number, "unknown [run] key '" + key + "'");
      }
    }
  }
  return scenario;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path.string());
}

}  // namespace pacekit
