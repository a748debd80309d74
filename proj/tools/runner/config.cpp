#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "presets.hpp"

namespace oscbus::runner {

namespace {

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

[[noreturn]] void fail(const std::string& path, int line, const std::string& message) {
  throw ConfigError(where(line) + path + ": " + message);
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Drops a trailing `#` comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

int bracket_depth(const std::string& text) {
  int depth = 0;
  bool quoted = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (!quoted && c == '[') {
      ++depth;
    } else if (!quoted && c == ']') {
      --depth;
    }
  }
  return depth;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : s_(text), line_(line) {}

  Value parse_all() {
    Value v = parse();
    skip_space();
    if (pos_ != s_.size()) error("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& message) const {
    throw ConfigError(where(line_) + message);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value parse() {
    skip_space();
    if (pos_ >= s_.size()) error("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_list();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  Value parse_list() {
    ++pos_;
    Value::List items;
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return Value{items, line_};
    }
    while (true) {
      items.push_back(parse());
      skip_space();
      if (pos_ >= s_.size()) error("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          break;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        break;
      }
      error("expected ',' or ']' in list");
    }
    return Value{std::move(items), line_};
  }

  Value parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        c = s_[pos_++];
        if (c == 'n') c = '\n';
        else if (c == 't') c = '\t';
        else if (c != '"' && c != '\\') error(std::string("unknown escape \\") + c);
      }
      out.push_back(c);
    }
    if (pos_ >= s_.size()) error("unterminated string");
    ++pos_;
    return Value{std::move(out), line_};
  }

  Value parse_scalar() {
    const size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    const std::string_view token = s_.substr(start, pos_ - start);
    if (token.empty()) error("missing value");
    if (token == "true") return Value{true, line_};
    if (token == "false") return Value{false, line_};

    const bool looks_numeric = std::isdigit(static_cast<unsigned char>(token[0])) ||
                               token[0] == '-' || token[0] == '+' || token[0] == '.';
    if (looks_numeric) {
      const std::string_view digits = token[0] == '+' ? token.substr(1) : token;
      const bool integral = digits.find_first_of(".eE") == std::string_view::npos &&
                            digits != "-inf" && digits != "inf";
      if (integral) {
        long long n = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && p == digits.data() + digits.size()) return Value{n, line_};
      } else {
        double x = 0.0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
        if (ec == std::errc() && p == digits.data() + digits.size() && std::isfinite(x)) {
          return Value{x, line_};
        }
      }
      error("malformed number '" + std::string(token) + "'");
    }
    const bool identifier = std::all_of(token.begin(), token.end(), [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    });
    if (!identifier) error("malformed value '" + std::string(token) + "'");
    return Value{std::string(token), line_};
  }

  std::string_view s_;
  size_t pos_ = 0;
  int line_;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"system",
       {"topology", "sites", "omega", "kappa", "kappa_prime", "gamma", "Omega", "alpha", "beta",
        "epsilon", "epsilon_alpha", "epsilon_beta", "hbar", "hessian"}},
      {"initial", {"n_b", "n_network"}},
      {"baths", {"zeta", "n_th"}},
      {"run",
       {"preset", "resonant_mode", "resonant_frequency", "resonance_tolerance", "t_max", "samples",
        "outputs", "contrast_modes", "allow_large", "effective_initial"}},
  };
  return keys;
}

const char* type_name(const Value& v) {
  switch (v.data.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "number";
    case 3: return "string";
    default: return "list";
  }
}

// Reads typed fields out of a document, failing with the key path.
class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Value* find(const std::string& section, const std::string& key) const {
    auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
  }

  template <class F>
  void get(const std::string& section, const std::string& key, F&& assign) const {
    if (const Value* v = find(section, key)) assign(*v, section + "." + key);
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    double out = fallback;
    get(section, key, [&](const Value& v, const std::string& p) { out = v.as_number(p); });
    return out;
  }

  std::vector<int> int_list(const Value& v, const std::string& path) const {
    std::vector<int> out;
    if (v.is_number()) {
      out.push_back(static_cast<int>(v.as_integer(path)));
      return out;
    }
    for (const auto& item : v.as_list(path)) out.push_back(static_cast<int>(item.as_integer(path)));
    return out;
  }

  std::vector<double> number_list(const Value& v, const std::string& path) const {
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.as_number(path));
      return out;
    }
    for (const auto& item : v.as_list(path)) out.push_back(item.as_number(path));
    return out;
  }

 private:
  const Document& doc_;
};

void check_keys(const Document& doc) {
  for (const auto& [section, entries] : doc) {
    auto s = schema().find(section);
    if (s == schema().end()) {
      const int line = entries.empty() ? 0 : entries.begin()->second.line;
      fail(section, line, "unknown section [" + section + "]");
    }
    for (const auto& [key, value] : entries) {
      if (!s->second.contains(key)) fail(section + "." + key, value.line, "unknown key");
    }
  }
}

int line_of(const Reader& r, const std::string& section, const std::string& key) {
  const Value* v = r.find(section, key);
  return v ? v->line : 0;
}

void require_that(bool ok, const Reader& r, const std::string& section, const std::string& key,
                  const std::string& message) {
  if (!ok) fail(section + "." + key, line_of(r, section, key), message);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  // Keep the shortest text that reads back to the same double.
  for (int digits = 1; digits < 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) {
      s = buf;
      break;
    }
  }
  return s;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  return out + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

bool Value::is_number() const { return data.index() == 1 || data.index() == 2; }

double Value::as_number(const std::string& path) const {
  if (const auto* i = std::get_if<long long>(&data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&data)) return *d;
  fail(path, line, std::string("expected a number, got ") + type_name(*this));
}

long long Value::as_integer(const std::string& path) const {
  if (const auto* i = std::get_if<long long>(&data)) return *i;
  fail(path, line, std::string("expected an integer, got ") + type_name(*this));
}

bool Value::as_bool(const std::string& path) const {
  if (const auto* b = std::get_if<bool>(&data)) return *b;
  fail(path, line, std::string("expected true or false, got ") + type_name(*this));
}

const std::string& Value::as_string(const std::string& path) const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  fail(path, line, std::string("expected a string, got ") + type_name(*this));
}

const Value::List& Value::as_list(const std::string& path) const {
  if (const auto* l = std::get_if<List>(&data)) return *l;
  fail(path, line, std::string("expected a list, got ") + type_name(*this));
}

Value parse_value(const std::string& text, int line) { return ValueParser(text, line).parse_all(); }

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError(where(line_no) + "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().contains(section)) {
        throw ConfigError(where(line_no) + section + ": unknown section [" + section + "]");
      }
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where(line_no) + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(where(line_no) + "missing key before '='");
    if (section.empty()) {
      throw ConfigError(where(line_no) + key + ": key outside of any [section]");
    }
    std::string value_text = trim(std::string_view(line).substr(eq + 1));
    const int start_line = line_no;
    while (bracket_depth(value_text) > 0 && std::getline(in, raw)) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      value_text += " " + trim(strip_comment(raw));
    }
    const std::string path = section + "." + key;
    if (doc[section].contains(key)) fail(path, start_line, "duplicate key");
    try {
      doc[section][key] = parse_value(value_text, start_line);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (in " + path + ")");
    }
  }
  return doc;
}

SystemSpec ExperimentConfig::system_spec() const {
  SystemSpec spec;
  spec.network.kind = topology;
  spec.network.sites = sites;
  spec.network.omega = omega;
  spec.network.kappa = kappa;
  spec.network.kappa_prime = kappa_prime;
  spec.network.gamma = gamma;
  if (topology == Topology::custom) {
    const int dim = static_cast<int>(hessian.size());
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = hessian[r][c];
    }
    spec.network.custom_hessian = QuadraticForm(m);
  }
  spec.Omega = Omega.value_or(1.0);
  spec.hbar = hbar;
  for (size_t j = 0; j < alpha.size(); ++j) {
    spec.attachments.push_back(
        {External::a, alpha[j] - 1, epsilon_alpha.empty() ? epsilon : epsilon_alpha[j]});
  }
  for (size_t j = 0; j < beta.size(); ++j) {
    spec.attachments.push_back(
        {External::b, beta[j] - 1, epsilon_beta.empty() ? epsilon : epsilon_beta[j]});
  }
  return spec;
}

bool ExperimentConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

ExperimentConfig config_from_document(Document doc, const std::string& preset_override) {
  check_keys(doc);

  std::string preset_name = preset_override;
  if (preset_name.empty()) {
    if (auto s = doc.find("run"); s != doc.end()) {
      if (auto k = s->second.find("preset"); k != s->second.end()) {
        preset_name = k->second.as_string("run.preset");
      }
    }
  }
  if (!preset_name.empty()) {
    Document base;
    try {
      base = preset_document(preset_name);
    } catch (const ConfigError& e) {
      const Value* v = Reader(doc).find("run", "preset");
      throw ConfigError(where(v ? v->line : 0) + "run.preset: " + e.what());
    }
    // A user-chosen resonance replaces the preset's, whichever form it takes.
    const Reader user(doc);
    if (user.has("run", "resonant_mode") || user.has("run", "resonant_frequency")) {
      base["run"].erase("resonant_mode");
      base["run"].erase("resonant_frequency");
      base["run"].erase("resonance_tolerance");
    }
    for (auto& [section, entries] : doc) {
      for (auto& [key, value] : entries) base[section][key] = value;
    }
    base["run"]["preset"] = Value{preset_name, 0};
    doc = std::move(base);
  }

  const Reader r(doc);
  std::vector<std::string> missing;
  auto need = [&](const std::string& section, const std::string& key) {
    if (!r.has(section, key)) missing.push_back(section + "." + key);
  };
  need("system", "topology");
  need("system", "alpha");
  need("system", "beta");
  if (!r.has("system", "epsilon_alpha") || !r.has("system", "epsilon_beta")) {
    need("system", "epsilon");
  }
  need("run", "t_max");
  need("run", "samples");
  if (const Value* t = r.find("system", "topology"); t && t->as_string("system.topology") == "chain") {
    need("system", "sites");
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError("missing required keys: " + list);
  }

  ExperimentConfig c;
  r.get("system", "topology", [&](const Value& v, const std::string& p) {
    try {
      c.topology = topology_from_string(v.as_string(p));
    } catch (const Error& e) {
      fail(p, v.line, e.what());
    }
  });
  r.get("system", "sites", [&](const Value& v, const std::string& p) {
    c.sites = static_cast<int>(v.as_integer(p));
  });
  c.omega = r.number("system", "omega", 1.0);
  c.kappa = r.number("system", "kappa", 0.0);
  c.kappa_prime = r.number("system", "kappa_prime", 0.0);
  c.gamma = r.number("system", "gamma", 0.0);
  r.get("system", "Omega", [&](const Value& v, const std::string& p) { c.Omega = v.as_number(p); });
  r.get("system", "alpha", [&](const Value& v, const std::string& p) { c.alpha = r.int_list(v, p); });
  r.get("system", "beta", [&](const Value& v, const std::string& p) { c.beta = r.int_list(v, p); });
  c.epsilon = r.number("system", "epsilon", 0.0);
  r.get("system", "epsilon_alpha",
        [&](const Value& v, const std::string& p) { c.epsilon_alpha = r.number_list(v, p); });
  r.get("system", "epsilon_beta",
        [&](const Value& v, const std::string& p) { c.epsilon_beta = r.number_list(v, p); });
  c.hbar = r.number("system", "hbar", 1.0);
  r.get("system", "hessian", [&](const Value& v, const std::string& p) {
    for (const auto& row : v.as_list(p)) c.hessian.push_back(r.number_list(row, p));
  });

  c.n_b = r.number("initial", "n_b", 0.0);
  c.n_network = r.number("initial", "n_network", 0.0);

  c.has_baths = doc.contains("baths");
  if (c.has_baths) {
    require_that(r.has("baths", "zeta"), r, "baths", "zeta", "required when [baths] is present");
    c.zeta = r.number("baths", "zeta", 0.0);
    c.n_th = r.number("baths", "n_th", 0.0);
  }

  r.get("run", "preset", [&](const Value& v, const std::string& p) { c.preset = v.as_string(p); });
  r.get("run", "resonant_mode", [&](const Value& v, const std::string& p) {
    c.resonant_mode = static_cast<int>(v.as_integer(p));
  });
  r.get("run", "resonant_frequency",
        [&](const Value& v, const std::string& p) { c.resonant_frequency = v.as_number(p); });
  r.get("run", "resonance_tolerance",
        [&](const Value& v, const std::string& p) { c.resonance_tolerance = v.as_number(p); });
  c.t_max = r.number("run", "t_max", 0.0);
  r.get("run", "samples", [&](const Value& v, const std::string& p) {
    c.samples = static_cast<int>(v.as_integer(p));
  });
  if (r.has("run", "outputs")) {
    r.get("run", "outputs", [&](const Value& v, const std::string& p) {
      if (const auto* s = std::get_if<std::string>(&v.data)) {
        c.outputs.push_back(*s);
      } else {
        for (const auto& item : v.as_list(p)) c.outputs.push_back(item.as_string(p));
      }
    });
  } else {
    c.outputs = {"occupation_exact", "occupation_effective", "rwa_report"};
  }
  r.get("run", "contrast_modes",
        [&](const Value& v, const std::string& p) { c.contrast_modes = r.int_list(v, p); });
  r.get("run", "allow_large",
        [&](const Value& v, const std::string& p) { c.allow_large = v.as_bool(p); });
  r.get("run", "effective_initial",
        [&](const Value& v, const std::string& p) { c.effective_initial = v.as_string(p); });

  // Derived site counts for the fixed-size topologies.
  if ((c.topology == Topology::triangle || c.topology == Topology::momentum_coupled) && c.sites == 0) {
    c.sites = 3;
  }
  if (c.topology == Topology::custom) {
    require_that(!c.hessian.empty(), r, "system", "hessian", "custom topology needs a hessian");
    const size_t dim = c.hessian.size();
    for (const auto& row : c.hessian) {
      require_that(row.size() == dim, r, "system", "hessian", "hessian must be square");
    }
    require_that(dim % 2 == 0, r, "system", "hessian", "hessian dimension must be even");
    if (c.sites == 0) c.sites = static_cast<int>(dim / 2);
  } else {
    require_that(c.hessian.empty(), r, "system", "hessian", "only the custom topology takes a hessian");
  }

  // Constraint checks.
  require_that(c.samples >= 2, r, "run", "samples", "must be >= 2");
  require_that(c.t_max > 0.0, r, "run", "t_max", "must be > 0");
  require_that(!c.alpha.empty(), r, "system", "alpha", "needs at least one site");
  require_that(!c.beta.empty(), r, "system", "beta", "needs at least one site");
  for (const auto& [key, sites] : {std::pair{"alpha", &c.alpha}, std::pair{"beta", &c.beta}}) {
    for (int s : *sites) {
      require_that(s >= 1 && s <= c.sites, r, "system", key,
                   "site " + std::to_string(s) + " is outside 1.." + std::to_string(c.sites));
    }
  }
  if (!c.epsilon_alpha.empty() || r.has("system", "epsilon_alpha")) {
    require_that(c.epsilon_alpha.size() == c.alpha.size(), r, "system", "epsilon_alpha",
                 "needs one value per alpha site");
  }
  if (!c.epsilon_beta.empty() || r.has("system", "epsilon_beta")) {
    require_that(c.epsilon_beta.size() == c.beta.size(), r, "system", "epsilon_beta",
                 "needs one value per beta site");
  }
  const bool per_site = !c.epsilon_alpha.empty() && !c.epsilon_beta.empty();
  require_that(per_site || c.epsilon > 0.0, r, "system", "epsilon", "must be > 0");
  for (double e : c.epsilon_alpha) require_that(e > 0.0, r, "system", "epsilon_alpha", "must be > 0");
  for (double e : c.epsilon_beta) require_that(e > 0.0, r, "system", "epsilon_beta", "must be > 0");
  if (c.Omega) require_that(*c.Omega > 0.0, r, "system", "Omega", "must be > 0");
  require_that(c.n_b >= 0.0, r, "initial", "n_b", "must be >= 0");
  require_that(c.n_network >= 0.0, r, "initial", "n_network", "must be >= 0");
  if (c.has_baths) {
    require_that(c.zeta > 0.0, r, "baths", "zeta", "must be > 0");
    require_that(c.n_th >= 0.0, r, "baths", "n_th", "must be >= 0");
  }
  require_that(!(c.resonant_mode && c.resonant_frequency), r, "run", "resonant_frequency",
               "give either resonant_mode or resonant_frequency, not both");
  if (c.resonant_mode) {
    require_that(*c.resonant_mode >= 1 && *c.resonant_mode <= c.sites, r, "run", "resonant_mode",
                 "mode " + std::to_string(*c.resonant_mode) + " is outside 1.." +
                     std::to_string(c.sites));
  }
  if (c.resonant_frequency) {
    require_that(*c.resonant_frequency > 0.0, r, "run", "resonant_frequency", "must be > 0");
  }
  if (c.resonance_tolerance) {
    require_that(c.resonant_frequency.has_value(), r, "run", "resonance_tolerance",
                 "only applies together with resonant_frequency");
    require_that(*c.resonance_tolerance > 0.0, r, "run", "resonance_tolerance", "must be > 0");
  }
  for (int m : c.contrast_modes) {
    require_that(m >= 1 && m <= c.sites, r, "run", "contrast_modes",
                 "mode " + std::to_string(m) + " is outside 1.." + std::to_string(c.sites));
  }
  std::set<std::string> seen;
  for (const auto& o : c.outputs) {
    const auto& known = known_outputs();
    require_that(std::find(known.begin(), known.end(), o) != known.end(), r, "run", "outputs",
                 "unknown output '" + o + "'");
    require_that(seen.insert(o).second, r, "run", "outputs", "output '" + o + "' listed twice");
  }
  require_that(!c.outputs.empty(), r, "run", "outputs", "needs at least one output");
  require_that(c.effective_initial == "projected" || c.effective_initial == "thermal", r, "run",
               "effective_initial", "must be \"projected\" or \"thermal\"");

  const bool needs_exact =
      c.wants("occupation_exact") || c.wants("fidelity") || c.wants("cm_dump");
  if (!c.resonant_mode && !c.resonant_frequency && !c.Omega) {
    throw ConfigError(
        "run.resonant_mode: give resonant_mode, resonant_frequency or system.Omega to fix the "
        "external frequency");
  }
  if (c.wants("bath_classification")) {
    require_that(c.has_baths, r, "run", "outputs", "bath_classification needs a [baths] section");
  }
  if (needs_exact && c.sites > 200 && !c.allow_large) {
    require_that(false, r, "system", "sites",
                 std::to_string(c.sites) +
                     " sites exceed the exact-model limit of 200; set run.allow_large = true");
  }

  try {
    SystemSpec spec = c.system_spec();
    spec.Omega = c.Omega.value_or(1.0);
    spec.validate();
    if (c.topology == Topology::custom) detail::require_positive_definite(spec.network.custom_hessian->matrix());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& preset_override) {
  return config_from_document(parse_document(text), preset_override);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto num = [](double x) { return format_double(x); };
  auto integer = [](int x) { return std::to_string(x); };

  os << "[system]\n";
  os << "topology = " << quote(to_string(c.topology)) << "\n";
  os << "sites = " << c.sites << "\n";
  os << "omega = " << num(c.omega) << "\n";
  os << "kappa = " << num(c.kappa) << "\n";
  os << "kappa_prime = " << num(c.kappa_prime) << "\n";
  os << "gamma = " << num(c.gamma) << "\n";
  if (c.Omega) os << "Omega = " << num(*c.Omega) << "\n";
  os << "alpha = " << join(c.alpha, integer) << "\n";
  os << "beta = " << join(c.beta, integer) << "\n";
  os << "epsilon = " << num(c.epsilon) << "\n";
  if (!c.epsilon_alpha.empty()) os << "epsilon_alpha = " << join(c.epsilon_alpha, num) << "\n";
  if (!c.epsilon_beta.empty()) os << "epsilon_beta = " << join(c.epsilon_beta, num) << "\n";
  os << "hbar = " << num(c.hbar) << "\n";
  if (!c.hessian.empty()) {
    os << "hessian = " << join(c.hessian, [&](const std::vector<double>& row) {
      return join(row, num);
    }) << "\n";
  }

  os << "\n[initial]\n";
  os << "n_b = " << num(c.n_b) << "\n";
  os << "n_network = " << num(c.n_network) << "\n";

  if (c.has_baths) {
    os << "\n[baths]\n";
    os << "zeta = " << num(c.zeta) << "\n";
    os << "n_th = " << num(c.n_th) << "\n";
  }

  os << "\n[run]\n";
  if (!c.preset.empty()) os << "preset = " << quote(c.preset) << "\n";
  if (c.resonant_mode) os << "resonant_mode = " << *c.resonant_mode << "\n";
  if (c.resonant_frequency) os << "resonant_frequency = " << num(*c.resonant_frequency) << "\n";
  if (c.resonance_tolerance) os << "resonance_tolerance = " << num(*c.resonance_tolerance) << "\n";
  os << "t_max = " << num(c.t_max) << "\n";
  os << "samples = " << c.samples << "\n";
  os << "outputs = " << join(c.outputs, quote) << "\n";
  os << "contrast_modes = " << join(c.contrast_modes, integer) << "\n";
  os << "allow_large = " << (c.allow_large ? "true" : "false") << "\n";
  os << "effective_initial = " << quote(c.effective_initial) << "\n";
  return os.str();
}

void set_document_value(Document& doc, const std::string& key, const std::string& literal) {
  std::string section;
  std::string name = key;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
  } else {
    for (const auto& [s, keys] : schema()) {
      if (keys.contains(name)) {
        if (!section.empty()) throw ConfigError(key + ": ambiguous key, qualify it with a section");
        section = s;
      }
    }
  }
  auto s = schema().find(section);
  if (s == schema().end() || !s->second.contains(name)) {
    throw ConfigError(key + ": unknown key");
  }
  doc[section][name] = parse_value(literal);
}

}  // namespace oscbus::runner
