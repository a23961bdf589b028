#include "dbk/app/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dbk/csv.hpp"
#include "dbk/error.hpp"

namespace dbk::app {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw HypothesisError("config", "key '" + key + "' = '" + value + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad(key, value, "not a number");
  return out;
}

/// Accepts "0.03125" or "1/32".
double parse_spacing(const std::string& key, const std::string& value) {
  const auto slash = value.find('/');
  double h = 0.0;
  if (slash == std::string::npos) {
    h = parse_number<double>(key, value);
  } else {
    const double num = parse_number<double>(key, trim(value.substr(0, slash)));
    const double den = parse_number<double>(key, trim(value.substr(slash + 1)));
    if (den == 0.0) bad(key, value, "zero denominator");
    h = num / den;
  }
  return h;
}

double positive(const std::string& key, const std::string& value) {
  const double v = parse_spacing(key, value);
  if (!(v > 0.0)) bad(key, value, "must be positive");
  return v;
}

int positive_int(const std::string& key, const std::string& value) {
  const int v = parse_number<int>(key, value);
  if (v <= 0) bad(key, value, "must be a positive integer");
  return v;
}

std::vector<int> int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(positive_int(key, trim(item)));
  if (out.empty()) bad(key, value, "empty list");
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

DomainSpec RunConfig::spec() const {
  if (domain == "disc") return DomainSpec::disc(radius);
  return DomainSpec::polydisc(radius, radius2);
}

ContractSign RunConfig::contract_sign() const {
  return fault_injection == "contract_sign" ? ContractSign::reversed : ContractSign::standard;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "domain", "radius", "radius2", "h", "map", "g", "eps", "eps0", "degree", "interior",
      "forms", "m", "study_h", "out", "seed", "fault_injection", "refine", "sw_degree",
      "tol_identity", "tol_commutator", "min_order"};
  return keys;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "domain") {
    if (value != "disc" && value != "bidisc") bad(key, value, "expected disc or bidisc");
    cfg.domain = value;
  } else if (key == "radius") {
    cfg.radius = positive(key, value);
  } else if (key == "radius2") {
    cfg.radius2 = positive(key, value);
  } else if (key == "h") {
    cfg.h = positive(key, value);
  } else if (key == "map") {
    if (value.empty()) bad(key, value, "empty map name");
    cfg.map = value;
  } else if (key == "g") {
    if (value.empty()) bad(key, value, "empty field name");
    cfg.g = value;
  } else if (key == "eps") {
    cfg.eps = positive(key, value);
  } else if (key == "eps0") {
    cfg.eps0 = positive(key, value);
  } else if (key == "degree") {
    cfg.degree = positive_int(key, value);
  } else if (key == "interior") {
    cfg.interior = parse_number<int>(key, value);
    if (*cfg.interior < 0) bad(key, value, "must be non-negative");
  } else if (key == "forms") {
    cfg.forms = positive_int(key, value);
  } else if (key == "m") {
    cfg.m_values = int_list(key, value);
    for (int m : cfg.m_values)
      if (m > 3) bad(key, value, "m must lie in 1..3");
  } else if (key == "study_h") {
    // entries may be written as k or 1/k
    std::string stripped;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.rfind("1/", 0) == 0) item = trim(item.substr(2));
      stripped += (stripped.empty() ? "" : ",") + item;
    }
    cfg.study_inverse_h = int_list(key, stripped);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "fault_injection") {
    if (value != "none" && value != "contract_sign") bad(key, value, "expected none or contract_sign");
    cfg.fault_injection = value;
  } else if (key == "refine") {
    cfg.refine = positive_int(key, value);
  } else if (key == "sw_degree") {
    cfg.sw_degree = parse_number<int>(key, value);
    if (cfg.sw_degree < 0) bad(key, value, "must be non-negative");
  } else if (key == "tol_identity") {
    cfg.tol_identity = positive(key, value);
  } else if (key == "tol_commutator") {
    cfg.tol_commutator = positive(key, value);
  } else if (key == "min_order") {
    cfg.min_order = positive(key, value);
  } else {
    throw HypothesisError("config", "unknown key '" + key + "'");
  }
}

void read_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw HypothesisError("config", "line " + std::to_string(lineno) + " has no '='");
    }
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void load_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw HypothesisError("config", "cannot open '" + path + "'");
  read_config(in, cfg);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  using csv::num;
  os << "domain = " << cfg.domain << '\n';
  os << "radius = " << num(cfg.radius) << '\n';
  if (cfg.domain == "bidisc") os << "radius2 = " << num(cfg.radius2) << '\n';
  if (cfg.h) os << "h = " << num(*cfg.h) << '\n';
  if (cfg.map) os << "map = " << *cfg.map << '\n';
  if (cfg.g) os << "g = " << *cfg.g << '\n';
  os << "eps = " << num(cfg.eps) << '\n';
  if (cfg.eps0) os << "eps0 = " << num(*cfg.eps0) << '\n';
  if (cfg.degree) os << "degree = " << *cfg.degree << '\n';
  if (cfg.interior) os << "interior = " << *cfg.interior << '\n';
  os << "forms = " << cfg.forms << '\n';
  os << "m = " << join(cfg.m_values) << '\n';
  os << "study_h = " << join(cfg.study_inverse_h) << '\n';
  os << "seed = " << cfg.seed << '\n';
  os << "fault_injection = " << cfg.fault_injection << '\n';
  os << "refine = " << cfg.refine << '\n';
  os << "sw_degree = " << cfg.sw_degree << '\n';
  os << "tol_identity = " << num(cfg.tol_identity) << '\n';
  os << "tol_commutator = " << num(cfg.tol_commutator) << '\n';
  os << "min_order = " << num(cfg.min_order) << '\n';
}

}  // namespace dbk::app
