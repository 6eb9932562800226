#include "holo/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "holo/error.hpp"

namespace holo {

namespace {

using Value = std::variant<double, std::string, std::vector<double>, bool>;

struct Section {
  std::string name;  // "component" or "generator"
  int line = 0;
  std::map<std::string, std::pair<Value, int>> entries;  // key -> (value, line)
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Value parse_value(const std::string& raw, int line) {
  std::string v = trim(raw);
  if (v.empty()) parse_fail(line, "empty value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') parse_fail(line, "unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']') parse_fail(line, "unterminated array");
    std::vector<double> nums;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) parse_fail(line, "empty array element");
      char* end = nullptr;
      double d = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0')
        parse_fail(line, "bad number '" + item + "'");
      nums.push_back(d);
    }
    return nums;
  }
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() && *end == '\0') return d;
  return v;  // bare string
}

std::vector<Section> parse_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.rfind("[[", 0) == 0) {
      if (s.size() < 5 || s.substr(s.size() - 2) != "]]")
        parse_fail(line, "malformed section header");
      sections.push_back({trim(s.substr(2, s.size() - 4)), line, {}});
      continue;
    }
    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(line, "malformed section header");
      // Singleton headers like [transversal] are accepted and ignored.
      sections.push_back({trim(s.substr(1, s.size() - 2)), line, {}});
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected key = value");
    if (sections.empty()) parse_fail(line, "entry before any section");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) parse_fail(line, "empty key");
    sections.back().entries[key] = {parse_value(s.substr(eq + 1), line), line};
  }
  return sections;
}

template <typename T>
T get(const Section& sec, const std::string& key) {
  auto it = sec.entries.find(key);
  if (it == sec.entries.end())
    parse_fail(sec.line, sec.name + " missing field '" + key + "'");
  const T* p = std::get_if<T>(&it->second.first);
  if (!p) parse_fail(it->second.second, "field '" + key + "' has wrong type");
  return *p;
}

template <typename T>
std::optional<T> get_opt(const Section& sec, const std::string& key) {
  auto it = sec.entries.find(key);
  if (it == sec.entries.end()) return std::nullopt;
  const T* p = std::get_if<T>(&it->second.first);
  if (!p) parse_fail(it->second.second, "field '" + key + "' has wrong type");
  return *p;
}

Interval pair_interval(const std::vector<double>& v, int comp, int line) {
  if (v.size() != 2) parse_fail(line, "expected [lo, hi]");
  return Interval::open(comp, v[0], v[1]);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_array(const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

}  // namespace

Pseudogroup load_config_text(const std::string& text) {
  Pseudogroup pg;
  auto sections = parse_sections(text);
  for (const auto& sec : sections) {
    if (sec.name == "transversal") continue;  // reserved; all data inline
    if (sec.name == "component") {
      int ci = static_cast<int>(pg.transversal.components.size());
      TransversalComponent c;
      c.core = pair_interval(get<std::vector<double>>(sec, "core"), ci, sec.line);
      c.extended =
          pair_interval(get<std::vector<double>>(sec, "extended"), ci, sec.line);
      pg.transversal.components.push_back(c);
      continue;
    }
    if (sec.name == "generator") {
      LocalMap m;
      m.id = get<std::string>(sec, "id");
      std::string kind = get<std::string>(sec, "kind");
      if (kind == "affine") {
        auto p = get<std::vector<double>>(sec, "params");
        if (p.size() != 2) parse_fail(sec.line, "affine params = [slope, offset]");
        m.expr = MapExpr::affine(p[0], p[1]);
      } else if (kind == "moebius") {
        auto p = get<std::vector<double>>(sec, "params");
        if (p.size() != 4) parse_fail(sec.line, "moebius params = [a, b, c, d]");
        m.expr = MapExpr::moebius(p[0], p[1], p[2], p[3]);
      } else if (kind == "hermite") {
        auto k = get<std::vector<double>>(sec, "knots");
        auto v = get<std::vector<double>>(sec, "values");
        auto d = get<std::vector<double>>(sec, "derivs");
        m.expr = MapExpr::hermite(k, v, d);
      } else if (kind == "hermite_inverse") {
        auto k = get<std::vector<double>>(sec, "knots");
        auto v = get<std::vector<double>>(sec, "values");
        auto d = get<std::vector<double>>(sec, "derivs");
        m.expr = MapExpr::hermite(k, v, d).inverse();
      } else {
        parse_fail(sec.line, "unsupported kind '" + kind + "'");
      }
      int comp = static_cast<int>(get<double>(sec, "component"));
      m.target_component = static_cast<int>(get<double>(sec, "target"));
      m.domain =
          pair_interval(get<std::vector<double>>(sec, "domain"), comp, sec.line);
      m.extended_domain = pair_interval(
          get<std::vector<double>>(sec, "extended_domain"), comp, sec.line);
      if (auto inv = get_opt<std::string>(sec, "inverse_of")) m.inverse_id = *inv;
      if (auto ident = get_opt<bool>(sec, "identity")) m.is_identity = *ident;
      pg.generators.push_back(std::move(m));
      continue;
    }
    parse_fail(sec.line, "unknown section '" + sec.name + "'");
  }
  pg.finalize();
  return pg;
}

Pseudogroup load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

std::string dump_config(const Pseudogroup& pg) {
  std::ostringstream os;
  os << "# holonomy pseudogroup\n";
  for (const auto& c : pg.transversal.components) {
    os << "\n[[component]]\n";
    os << "core = [" << fmt(c.core.lo) << ", " << fmt(c.core.hi) << "]\n";
    os << "extended = [" << fmt(c.extended.lo) << ", " << fmt(c.extended.hi)
       << "]\n";
  }
  for (const auto& g : pg.generators) {
    os << "\n[[generator]]\n";
    os << "id = \"" << g.id << "\"\n";
    const auto& node = g.expr.node();
    if (const auto* a = std::get_if<Affine>(&node)) {
      os << "kind = \"affine\"\n";
      os << "params = " << fmt_array({a->slope, a->offset}) << "\n";
    } else if (const auto* mo = std::get_if<Moebius>(&node)) {
      os << "kind = \"moebius\"\n";
      os << "params = " << fmt_array({mo->a, mo->b, mo->c, mo->d}) << "\n";
    } else if (const auto* h = std::get_if<SmoothSample>(&node)) {
      os << "kind = \"" << (h->inverted ? "hermite_inverse" : "hermite")
         << "\"\n";
      os << "knots = " << fmt_array(h->knots) << "\n";
      os << "values = " << fmt_array(h->values) << "\n";
      os << "derivs = " << fmt_array(h->derivs) << "\n";
    } else {
      fail(ErrorKind::ValidationError,
           "composite generators have no config form: " + g.id);
    }
    os << "component = " << g.source_component() << "\n";
    os << "target = " << g.target_component << "\n";
    os << "domain = [" << fmt(g.domain.lo) << ", " << fmt(g.domain.hi) << "]\n";
    os << "extended_domain = [" << fmt(g.extended_domain.lo) << ", "
       << fmt(g.extended_domain.hi) << "]\n";
    os << "inverse_of = \"" << g.inverse_id << "\"\n";
    if (g.is_identity) os << "identity = true\n";
  }
  return os.str();
}

}  // namespace holo
