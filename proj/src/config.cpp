#include "w2gas/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace w2gas {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

// (section, key) -> last value; duplicates are rejected at read time.
using Table = std::map<std::pair<std::string, std::string>, Entry>;

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"run",
       {"name", "family", "seed", "n", "d", "dtau", "tau_end", "record_every",
        "schedule", "replica_slack"}},
      {"model", {"e", "b_rate", "a_heat", "p_diff", "cross_section"}},
      {"kac", {"p"}},
      {"ic", {"kind", "theta0", "mean", "path"}},
      {"pair", {"kind", "theta0", "mean", "path"}},
      {"output", {"dir", "csv", "svg", "snapshot", "report_csv"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  throw std::runtime_error("config '" + path + "' line " +
                           std::to_string(line) + ": " + what);
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config '" + path + "': cannot open");

  Table table;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(path, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section))
        fail(path, lineno, "unknown section '" + section + "'");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(path, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      fail(path, lineno, "key '" + key + "' appears before any [section]");
    const auto& keys = schema().at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      fail(path, lineno,
           "unknown key '" + key + "' in section [" + section + "]");
    if (key.empty()) fail(path, lineno, "empty key");
    const auto ins = table.emplace(std::make_pair(section, key),
                                   Entry{value, lineno});
    if (!ins.second)
      fail(path, lineno, "duplicate key '" + section + "." + key + "'");
  }
  return table;
}

// Typed accessors; every failure names the qualified key (and line when the
// key is present).
class Reader {
 public:
  Reader(std::string path, Table table)
      : path_(std::move(path)), table_(std::move(table)) {}

  bool has(const std::string& sec, const std::string& key) const {
    return table_.count({sec, key}) != 0;
  }
  bool has_section(const std::string& sec) const {
    for (const auto& [k, v] : table_)
      if (k.first == sec) return true;
    return false;
  }

  const Entry& require(const std::string& sec, const std::string& key) const {
    const auto it = table_.find({sec, key});
    if (it == table_.end())
      throw std::runtime_error("config '" + path_ + "': missing required key '" +
                               sec + "." + key + "'");
    return it->second;
  }

  void forbid(const std::string& sec, const std::string& key,
              const std::string& why) const {
    const auto it = table_.find({sec, key});
    if (it != table_.end())
      fail(path_, it->second.line,
           "key '" + sec + "." + key + "' is not allowed here (" + why + ")");
  }

  std::string str(const std::string& sec, const std::string& key) const {
    return require(sec, key).value;
  }
  std::string str_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const {
    const auto it = table_.find({sec, key});
    return it == table_.end() ? fallback : it->second.value;
  }

  double num(const std::string& sec, const std::string& key) const {
    const Entry& e = require(sec, key);
    return parse_num(sec, key, e);
  }
  double num_or(const std::string& sec, const std::string& key,
                double fallback) const {
    const auto it = table_.find({sec, key});
    return it == table_.end() ? fallback : parse_num(sec, key, it->second);
  }

  std::uint64_t u64(const std::string& sec, const std::string& key) const {
    const Entry& e = require(sec, key);
    std::istringstream in(e.value);
    std::uint64_t v = 0;
    char extra;
    if (!(in >> v) || (in >> extra) || e.value.find('-') != std::string::npos)
      fail(path_, e.line, "key '" + sec + "." + key +
                              "' needs an unsigned integer, got '" + e.value +
                              "'");
    return v;
  }

  bool flag_or(const std::string& sec, const std::string& key,
               bool fallback) const {
    const auto it = table_.find({sec, key});
    if (it == table_.end()) return fallback;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(path_, it->second.line,
         "key '" + sec + "." + key + "' needs true or false, got '" + v + "'");
  }

  std::vector<double> num_list(const std::string& sec,
                               const std::string& key) const {
    const Entry& e = require(sec, key);
    std::istringstream in(e.value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail(path_, e.line, "key '" + sec + "." + key +
                                "' has a non-numeric entry '" + tok + "'");
      }
    }
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  double parse_num(const std::string& sec, const std::string& key,
                   const Entry& e) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(e.value, &used);
      if (used != e.value.size()) throw std::invalid_argument(e.value);
      return v;
    } catch (const std::exception&) {
      fail(path_, e.line, "key '" + sec + "." + key +
                              "' needs a number, got '" + e.value + "'");
    }
  }

  std::string path_;
  Table table_;
};

Family parse_family(const Reader& r) {
  const Entry& e = r.require("run", "family");
  if (e.value == "homogeneous") return Family::homogeneous;
  if (e.value == "diffusive") return Family::diffusive;
  if (e.value == "selfsimilar") return Family::selfsimilar;
  if (e.value == "kac") return Family::kac;
  if (e.value == "unit_rate") return Family::unit_rate;
  fail(r.path(), e.line, "unknown family '" + e.value + "'");
}

IcKind parse_ic_kind(const Reader& r, const std::string& sec) {
  const Entry& e = r.require(sec, "kind");
  if (e.value == "gaussian") return IcKind::gaussian;
  if (e.value == "cube") return IcKind::cube;
  if (e.value == "two_point") return IcKind::two_point;
  if (e.value == "dirac") return IcKind::dirac;
  if (e.value == "file") return IcKind::file;
  fail(r.path(), e.line, "unknown initial-condition kind '" + e.value + "'");
}

IcSpec parse_ic(const Reader& r, const std::string& sec, int d) {
  IcSpec ic;
  ic.kind = parse_ic_kind(r, sec);
  if (ic.kind == IcKind::file) {
    ic.path = r.str(sec, "path");
    r.forbid(sec, "theta0", "snapshot files carry their own state");
    r.forbid(sec, "mean", "snapshot files carry their own state");
    ic.mean = Eigen::VectorXd::Zero(d);
    return ic;
  }
  r.forbid(sec, "path", "only kind = file reads a snapshot");
  const std::vector<double> mean = r.num_list(sec, "mean");
  ic.mean = Eigen::Map<const Eigen::VectorXd>(
      mean.data(), static_cast<Eigen::Index>(mean.size()));
  if (ic.kind == IcKind::dirac) {
    r.forbid(sec, "theta0", "a point mass has no temperature");
    ic.theta0 = 0.0;
  } else {
    ic.theta0 = r.num(sec, "theta0");
  }
  return ic;
}

CrossSection parse_cross_section(const Reader& r) {
  const Entry& e = r.require("model", "cross_section");
  if (e.value == "constant") return CrossSection::constant();
  if (e.value == "linear")
    return CrossSection::from_density([](double c) {
      return (1.0 + c) / (4.0 * std::numbers::pi);
    });
  if (e.value.rfind("file:", 0) == 0) {
    const std::string table = e.value.substr(5);
    if (table.empty()) fail(r.path(), e.line, "cross_section file path empty");
    return CrossSection::from_table_file(table);
  }
  fail(r.path(), e.line,
       "cross_section must be constant, linear or file:<path>");
}

}  // namespace

std::string default_outdir() {
  const char* env = std::getenv("W2GAS_OUTDIR");
  return (env && *env) ? env : ".";
}

SimConfig parse_config(const std::string& path) {
  const Reader r(path, read_table(path));
  SimConfig cfg;

  cfg.name = r.str_or("run", "name", "run");
  cfg.family = parse_family(r);
  cfg.seed = r.u64("run", "seed");
  const std::uint64_t n_raw = r.u64("run", "n");
  if (n_raw > (1ULL << 31) - 1)
    throw std::runtime_error("config '" + path + "': 'run.n' is too large");
  cfg.n = static_cast<int>(n_raw);
  cfg.d = r.has("run", "d")
              ? static_cast<int>(r.u64("run", "d"))
              : (cfg.family == Family::kac ? 1 : 3);
  cfg.dtau = r.num("run", "dtau");
  cfg.replica_slack = r.flag_or("run", "replica_slack", true);

  if (r.has("run", "schedule")) {
    if (r.has("run", "tau_end") || r.has("run", "record_every"))
      throw std::runtime_error(
          "config '" + path +
          "': 'run.schedule' excludes tau_end and record_every");
    cfg.schedule = r.num_list("run", "schedule");
    cfg.tau_end = cfg.schedule->empty() ? 0.0 : cfg.schedule->back();
  } else {
    cfg.tau_end = r.num("run", "tau_end");
    cfg.record_every = r.num("run", "record_every");
  }

  if (cfg.family == Family::kac) {
    if (r.has_section("model"))
      throw std::runtime_error("config '" + path +
                               "': section [model] does not apply to the "
                               "one-dimensional family; use [kac]");
    cfg.kac.p = r.num("kac", "p");
  } else {
    if (r.has_section("kac"))
      throw std::runtime_error(
          "config '" + path + "': section [kac] requires family = kac");
    cfg.model.e = r.num("model", "e");
    switch (cfg.family) {
      case Family::homogeneous:
        cfg.model.b_rate = r.num("model", "b_rate");
        r.forbid("model", "a_heat", "no thermostat in this family");
        r.forbid("model", "p_diff", "no thermostat in this family");
        r.forbid("model", "cross_section",
                 "this family uses the isotropic kernel");
        break;
      case Family::diffusive:
        cfg.model.b_rate = r.num("model", "b_rate");
        cfg.model.a_heat = r.num("model", "a_heat");
        cfg.model.p_diff = r.num("model", "p_diff");
        r.forbid("model", "cross_section",
                 "this family uses the isotropic kernel");
        break;
      case Family::selfsimilar:
        r.forbid("model", "b_rate", "the rescaled clock has no rate scale");
        r.forbid("model", "a_heat", "no thermostat in this family");
        r.forbid("model", "p_diff", "no thermostat in this family");
        r.forbid("model", "cross_section",
                 "this family uses the isotropic kernel");
        break;
      case Family::unit_rate:
        cfg.xs = parse_cross_section(r);
        r.forbid("model", "b_rate", "the unit clock has no rate scale");
        r.forbid("model", "a_heat", "no thermostat in this family");
        r.forbid("model", "p_diff", "no thermostat in this family");
        break;
      case Family::kac:
        break;
    }
  }

  cfg.ic_a = parse_ic(r, "ic", cfg.d);
  if (r.has_section("pair")) cfg.ic_b = parse_ic(r, "pair", cfg.d);

  cfg.outputs.dir = r.str_or("output", "dir", default_outdir());
  cfg.outputs.csv = r.str_or("output", "csv", cfg.name + ".csv");
  cfg.outputs.svg = r.str_or("output", "svg", "");
  cfg.outputs.snapshot = r.str_or("output", "snapshot", "");
  cfg.outputs.report_csv =
      r.str_or("output", "report_csv", cfg.name + "_report.csv");

  cfg.validate();
  return cfg;
}

}  // namespace w2gas
