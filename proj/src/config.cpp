#include "tscore/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "tscore/error.hpp"

namespace tscore {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  std::string name;
  int line;
  std::map<std::string, Entry> entries;
};

class Reader {
public:
  Reader(const Section& s, std::string_view source) : s_(s), source_(source) {}

  [[noreturn]] void fail(int line, const std::string& field, const std::string& msg) const {
    throw Error(ErrorCode::ConfigError,
                std::string(source_) + ":" + std::to_string(line) + ": " + field + ": " + msg);
  }

  const Entry* find(const std::string& key) const {
    auto it = s_.entries.find(key);
    return it == s_.entries.end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) fail(s_.line, key, "missing required field in section [" + s_.name + "]");
    return *e;
  }

  double to_double(const Entry& e, const std::string& key) const {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e.line, key, "expected a number, got '" + e.value + "'");
    return v;
  }

  unsigned long long to_unsigned(const Entry& e, const std::string& key) const {
    unsigned long long v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      fail(e.line, key, "expected a non-negative integer, got '" + e.value + "'");
    return v;
  }

private:
  const Section& s_;
  std::string_view source_;
};

const std::set<std::string> kKnownKeys{"family", "lambda_grid", "n",          "T",        "replicates",
                                       "seed",   "sigma2",      "mu",         "estimators", "bootstrap"};

ExperimentConfig build(const Section& s, std::string_view source) {
  Reader r(s, source);
  ExperimentConfig c;
  c.name = s.name;
  {
    const Entry& e = r.require("family");
    try {
      c.family = parse_family(e.value);
    } catch (const Error&) {
      r.fail(e.line, "family", "expected ar1, ma1 or arfima, got '" + e.value + "'");
    }
  }
  {
    const Entry& e = r.require("lambda_grid");
    c.lambda_grid.clear();
    for (const auto& item : split_list(e.value)) c.lambda_grid.push_back(r.to_double(Entry{item, e.line}, "lambda_grid"));
  }
  c.n = r.to_unsigned(r.require("n"), "n");
  c.T = r.to_unsigned(r.require("T"), "T");
  c.replicates = r.to_unsigned(r.require("replicates"), "replicates");
  c.seed = r.to_unsigned(r.require("seed"), "seed");
  if (const Entry* e = r.find("sigma2")) c.sigma2 = r.to_double(*e, "sigma2");
  if (const Entry* e = r.find("mu")) c.mu = r.to_double(*e, "mu");
  if (const Entry* e = r.find("bootstrap")) c.bootstrap_replicates = r.to_unsigned(*e, "bootstrap");
  if (const Entry* e = r.find("estimators")) {
    c.estimators.clear();
    for (const auto& item : split_list(e->value)) {
      try {
        c.estimators.push_back(parse_estimator(item));
      } catch (const Error&) {
        r.fail(e->line, "estimators", "unknown estimator '" + item + "'");
      }
    }
  }

  try {
    validate(c);
  } catch (const Error& err) {
    // validate() reports "field: message"; attach the line of that field.
    const std::string what = err.what();
    const std::string body = what.substr(what.find(": ") + 2);
    const std::string field = body.substr(0, body.find(':'));
    const Entry* e = r.find(field);
    r.fail(e != nullptr ? e->line : s.line, field, body.substr(body.find(": ") + 2));
  }
  return c;
}

}  // namespace

std::vector<ExperimentConfig> parse_config(std::istream& in, std::string_view source) {
  std::vector<Section> sections;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ConfigError, std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail("empty section name");
      for (const auto& s : sections)
        if (s.name == name) fail("duplicate section [" + name + "]");
      sections.push_back(Section{name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (sections.empty()) fail(key + ": key outside of any [section]");
    if (!kKnownKeys.contains(key)) fail(key + ": unknown field");
    auto& entries = sections.back().entries;
    if (entries.contains(key)) fail(key + ": field given twice");
    entries.emplace(key, Entry{value, line_no});
  }
  if (sections.empty()) throw Error(ErrorCode::ConfigError, std::string(source) + ": no [section] found");
  std::vector<ExperimentConfig> out;
  for (const auto& s : sections) out.push_back(build(s, source));
  return out;
}

std::vector<ExperimentConfig> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

}  // namespace tscore
