#include "config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rz2::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// LineIndex: a minimal scanner over text already accepted by the JSON parser.

namespace {

class Scanner {
 public:
  Scanner(const std::string& text, std::map<std::string, int>& out) : text_(text), out_(out) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string s;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        s += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      s += text_[pos_++];
    }
    ++pos_;  // closing quote
    return s;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char ch : key) {
      if (ch == '~') out += "~0";
      else if (ch == '/') out += "~1";
      else out += ch;
    }
    return out;
  }

  void value(const std::string& pointer) {
    out_.emplace(pointer, line_);
    if (pos_ >= text_.size()) return;
    const char ch = text_[pos_];
    if (ch == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (ch == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (ch == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' &&
             text_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::map<std::string, int>& out_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

LineIndex::LineIndex(const std::string& text) { Scanner(text, lines_).run(); }

std::optional<int> LineIndex::line(const std::string& pointer) const {
  // Fall back to the nearest enclosing value that exists.
  std::string p = pointer;
  for (;;) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return std::nullopt;
    p = p.substr(0, p.rfind('/'));
  }
}

// ---------------------------------------------------------------------------

ConfigError ScenarioConfig::error_at(const std::string& pointer, const std::string& message) const {
  std::ostringstream msg;
  msg << source;
  if (auto line = lines.line(pointer_base + pointer)) msg << ':' << *line;
  msg << ": " << (pointer.empty() ? "/" : pointer) << ": " << message;
  return ConfigError(msg.str());
}

namespace {

class Reader {
 public:
  explicit Reader(const ScenarioConfig& cfg) : cfg_(cfg) {}

  [[noreturn]] void fail(const std::string& rel, const std::string& message) const {
    throw cfg_.error_at(rel, message);
  }

  void only_keys(const json& obj, const std::string& rel, std::set<std::string> allowed) const {
    if (!obj.is_object()) fail(rel, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.contains(key)) fail(rel + "/" + key, "unknown key '" + key + "'");
    }
  }

  double number(const json& v, const std::string& rel) const {
    if (!v.is_number()) fail(rel, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(rel, "expected a finite number");
    return x;
  }

  std::uint64_t count(const json& v, const std::string& rel) const {
    if (!v.is_number_unsigned()) fail(rel, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const json& v, const std::string& rel) const {
    if (!v.is_boolean()) fail(rel, "expected true or false");
    return v.get<bool>();
  }

  ThetaParams theta(const json& v, const std::string& rel) const {
    only_keys(v, rel, {"sigma", "beta", "sigma_p", "beta_p", "kappa"});
    ThetaParams p;
    auto field = [&](const char* key, double& dst, bool required) {
      if (v.contains(key)) {
        dst = number(v.at(key), rel + "/" + key);
      } else if (required) {
        fail(rel, std::string("missing '") + key + "'");
      }
    };
    field("sigma", p.sigma, true);
    field("beta", p.beta, false);
    field("sigma_p", p.sigma_p, true);
    field("beta_p", p.beta_p, false);
    field("kappa", p.kappa, true);
    if (p.sigma < 0.0) fail(rel + "/sigma", "sigma must be >= 0");
    if (p.sigma_p < 0.0) fail(rel + "/sigma_p", "sigma_p must be >= 0");
    return p;
  }

  Coefficients coefficients(const json& v, const std::string& rel) const {
    if (!v.is_array()) fail(rel, "expected an array of {re, disc}");
    Coefficients out;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const std::string item = rel + "/" + std::to_string(j);
      only_keys(v[j], item, {"re", "disc"});
      if (!v[j].contains("re") || !v[j].contains("disc")) fail(item, "need both 're' and 'disc'");
      const double re = number(v[j].at("re"), item + "/re");
      const auto& disc = v[j].at("disc");
      if (!disc.is_number_integer() || (disc.get<int>() != 0 && disc.get<int>() != 1)) {
        fail(item + "/disc", "disc must be 0 or 1");
      }
      out.push_back({re, disc.get<int>()});
    }
    return out;
  }

 private:
  const ScenarioConfig& cfg_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  ScenarioConfig cfg;
  cfg.source = source;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  cfg.lines = LineIndex(text);

  if (doc.is_object() && doc.contains("config") && doc.contains("command")) {
    cfg.pointer_base = "/config";
    json inner = doc.at("config");
    doc = std::move(inner);
  }
  const Reader r(cfg);
  r.only_keys(doc, "", {"distributions", "coefficients", "grid", "mc", "allow_vanishing", "fd",
                        "density", "z2"});

  if (doc.contains("distributions")) {
    const auto& list = doc.at("distributions");
    if (!list.is_array()) r.fail("/distributions", "expected an array");
    for (std::size_t j = 0; j < list.size(); ++j) {
      cfg.distributions.push_back(r.theta(list[j], "/distributions/" + std::to_string(j)));
    }
  }

  if (doc.contains("coefficients")) {
    const auto& co = doc.at("coefficients");
    r.only_keys(co, "/coefficients", {"a", "b", "c", "d"});
    if (co.contains("a")) cfg.a = r.coefficients(co.at("a"), "/coefficients/a");
    if (co.contains("b")) cfg.b = r.coefficients(co.at("b"), "/coefficients/b");
    if (co.contains("c") != co.contains("d")) {
      r.fail("/coefficients", "'c' and 'd' must be given together");
    }
    if (co.contains("c")) {
      cfg.c = r.coefficients(co.at("c"), "/coefficients/c");
      cfg.d = r.coefficients(co.at("d"), "/coefficients/d");
      cfg.has_cd = true;
    }
  }

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    r.only_keys(g, "/grid", {"s_max", "s_steps"});
    if (g.contains("s_max")) cfg.grid.s_max = r.number(g.at("s_max"), "/grid/s_max");
    if (g.contains("s_steps")) {
      cfg.grid.s_steps = static_cast<int>(r.count(g.at("s_steps"), "/grid/s_steps"));
    }
    if (cfg.grid.s_steps < 2) r.fail("/grid/s_steps", "s_steps must be >= 2");
    if (!(cfg.grid.s_max > 0.0)) r.fail("/grid/s_max", "s_max must be > 0");
  }

  if (doc.contains("mc")) {
    const auto& m = doc.at("mc");
    r.only_keys(m, "/mc", {"n_samples", "seed", "n_perm"});
    if (m.contains("n_samples")) cfg.mc.n_samples = r.count(m.at("n_samples"), "/mc/n_samples");
    if (m.contains("seed")) cfg.mc.seed = r.count(m.at("seed"), "/mc/seed");
    if (m.contains("n_perm")) cfg.mc.n_perm = r.count(m.at("n_perm"), "/mc/n_perm");
    if (cfg.mc.n_perm < 99) r.fail("/mc/n_perm", "n_perm must be >= 99");
    if (cfg.mc.n_samples < 2) r.fail("/mc/n_samples", "n_samples must be >= 2");
  }

  if (doc.contains("allow_vanishing")) {
    cfg.allow_vanishing = r.boolean(doc.at("allow_vanishing"), "/allow_vanishing");
  }

  if (doc.contains("fd")) {
    const auto& f = doc.at("fd");
    r.only_keys(f, "/fd", {"pivot", "trials", "symmetrize"});
    if (f.contains("pivot")) cfg.fd.pivot = r.count(f.at("pivot"), "/fd/pivot");
    if (f.contains("trials")) cfg.fd.trials = r.count(f.at("trials"), "/fd/trials");
    if (f.contains("symmetrize")) cfg.fd.symmetrize = r.boolean(f.at("symmetrize"), "/fd/symmetrize");
    if (cfg.fd.trials == 0) r.fail("/fd/trials", "trials must be >= 1");
  }

  if (doc.contains("density")) {
    const auto& d = doc.at("density");
    r.only_keys(d, "/density", {"index", "points"});
    if (d.contains("index")) cfg.density.index = r.count(d.at("index"), "/density/index");
    if (d.contains("points")) {
      cfg.density.points = static_cast<int>(r.count(d.at("points"), "/density/points"));
    }
    if (cfg.density.points < 2) r.fail("/density/points", "points must be >= 2");
  }

  if (doc.contains("z2")) {
    const auto& z = doc.at("z2");
    r.only_keys(z, "/z2", {"mode", "n_max", "q_grid"});
    if (z.contains("mode")) {
      if (!z.at("mode").is_string()) r.fail("/z2/mode", "expected a string");
      cfg.z2.mode = z.at("mode").get<std::string>();
      if (cfg.z2.mode != "proposition" && cfg.z2.mode != "counterexample") {
        r.fail("/z2/mode", "mode must be 'proposition' or 'counterexample'");
      }
    }
    if (z.contains("n_max")) cfg.z2.n_max = r.count(z.at("n_max"), "/z2/n_max");
    if (z.contains("q_grid")) {
      const auto& q = z.at("q_grid");
      if (!q.is_array()) r.fail("/z2/q_grid", "expected an array of \"p/q\" strings");
      for (std::size_t j = 0; j < q.size(); ++j) {
        const std::string rel = "/z2/q_grid/" + std::to_string(j);
        if (!q[j].is_string()) r.fail(rel, "rationals are written as \"p/q\" strings");
        try {
          cfg.z2.q_grid.push_back(z2::Z2Dist(z2::parse_rational(q[j].get<std::string>())).q);
        } catch (const std::invalid_argument& e) {
          r.fail(rel, e.what());
        }
      }
    }
  }

  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

FormsProblem ScenarioConfig::forms_problem() const {
  if (!has_cd) throw error_at("/coefficients", "this command needs all of a, b, c and d");
  require_ab();
  if (c.size() != distributions.size()) {
    throw error_at("/coefficients/c", "expected one coefficient per distribution");
  }
  if (d.size() != distributions.size()) {
    throw error_at("/coefficients/d", "expected one coefficient per distribution");
  }
  return {distributions, a, b, c, d};
}

void ScenarioConfig::require_ab() const {
  if (distributions.empty()) throw error_at("/distributions", "at least one distribution needed");
  for (std::size_t j = 0; j < distributions.size(); ++j) {
    if (!is_probability(distributions[j]).probability) {
      throw error_at("/distributions/" + std::to_string(j), "not a probability measure");
    }
  }
  if (a.size() != distributions.size()) {
    throw error_at("/coefficients/a", "expected one coefficient per distribution");
  }
  if (b.size() != distributions.size()) {
    throw error_at("/coefficients/b", "expected one coefficient per distribution");
  }
}

nlohmann::json to_json(const ThetaParams& p) {
  return {{"sigma", p.sigma}, {"beta", p.beta}, {"sigma_p", p.sigma_p}, {"beta_p", p.beta_p},
          {"kappa", p.kappa}};
}

nlohmann::json to_json(const Coefficients& coeffs) {
  json out = json::array();
  for (const auto& e : coeffs) out.push_back({{"re", e.re}, {"disc", e.disc.value()}});
  return out;
}

nlohmann::json to_json(const ScenarioConfig& cfg) {
  json out;
  out["distributions"] = json::array();
  for (const auto& p : cfg.distributions) out["distributions"].push_back(to_json(p));
  out["coefficients"] = {{"a", to_json(cfg.a)}, {"b", to_json(cfg.b)}};
  if (cfg.has_cd) {
    out["coefficients"]["c"] = to_json(cfg.c);
    out["coefficients"]["d"] = to_json(cfg.d);
  }
  out["grid"] = {{"s_max", cfg.grid.s_max}, {"s_steps", cfg.grid.s_steps}};
  out["mc"] = {{"n_samples", cfg.mc.n_samples}, {"seed", cfg.mc.seed}, {"n_perm", cfg.mc.n_perm}};
  out["allow_vanishing"] = cfg.allow_vanishing;
  out["fd"] = {{"pivot", cfg.fd.pivot}, {"trials", cfg.fd.trials}, {"symmetrize", cfg.fd.symmetrize}};
  out["density"] = {{"index", cfg.density.index}, {"points", cfg.density.points}};
  json q = json::array();
  for (const auto& r : cfg.z2.q_grid) q.push_back(z2::format_rational(r));
  out["z2"] = {{"mode", cfg.z2.mode}, {"n_max", cfg.z2.n_max}, {"q_grid", q}};
  return out;
}

}  // namespace rz2::cli
