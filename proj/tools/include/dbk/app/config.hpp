#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dbk/forms.hpp"
#include "dbk/grid.hpp"

namespace dbk::app {

/// Flat run configuration shared by every subcommand. Optional fields fall
/// back to a per-command default when unset.
struct RunConfig {
  std::string domain = "disc";  ///< disc | bidisc
  double radius = 1.0;
  double radius2 = 1.0;
  std::optional<double> h;
  std::optional<std::string> map;
  std::optional<std::string> g;
  double eps = 0.1;
  std::optional<double> eps0;
  std::optional<int> degree;
  std::optional<int> interior;
  int forms = 50;
  std::vector<int> m_values{1, 2, 3};
  /// Grid spacings 1/k for the commutator refinement study.
  std::vector<int> study_inverse_h{16, 32, 64};
  std::string out;
  std::uint64_t seed = 20240601;
  std::string fault_injection = "none";  ///< none | contract_sign
  int refine = 2;
  int sw_degree = 0;
  double tol_identity = 1e-12;
  double tol_commutator = 10.0;
  double min_order = 1.5;

  DomainSpec spec() const;
  double h_or(double fallback) const { return h.value_or(fallback); }
  ContractSign contract_sign() const;
};

/// Applies one key=value pair; throws HypothesisError("config", ...) for an
/// unknown key or a value that does not parse or is out of range.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
void read_config(std::istream& in, RunConfig& cfg);
void load_config(const std::string& path, RunConfig& cfg);

/// Every key accepted by set_key, in documentation order.
const std::vector<std::string>& config_keys();

/// The effective configuration as key=value lines (unset optionals omitted).
void write_config(std::ostream& os, const RunConfig& cfg);

}  // namespace dbk::app
