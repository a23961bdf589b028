#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dbk/forms.hpp"

namespace dbk::app {

/// Random smooth forms: every coefficient block is c1 phi_k1 + c2 phi_k2,
/// with phi drawn from a fixed dictionary of closed-form smooth functions
/// (sampled once per grid) and c uniform in the unit square. The same seed
/// yields the same continuum form on every grid.
class RandomForms {
public:
  RandomForms(DomainPtr domain, std::uint64_t seed);

  KoszulForm draw(int m, int r, int s);
  const DomainPtr& domain() const { return domain_; }

private:
  DomainPtr domain_;
  std::mt19937_64 rng_;
  std::vector<Field> dictionary_;
};

/// Map used by the identity suite for m components on a disc (dim 1) or
/// bidisc (dim 2).
std::string suite_map(int dim, int m);

struct IdentityCheck {
  std::string domain;
  double h = 0.0;
  int m = 0;
  int r = 0;
  int s = 0;
  /// tf_tf, leibniz, dbar_dbar or commutator.
  std::string identity;
  int samples = 0;
  /// Worst sample: defect, its scale and the allowed bound.
  double defect = 0.0;
  double scale = 0.0;
  double bound = 0.0;
  bool pass = true;
  CPoint where;
  unsigned J = 0;
  unsigned K = 0;
};

struct OrderRow {
  int m = 0;
  double h = 0.0;
  double defect = 0.0;
  /// Empirical order against the previous (coarser) row; 0 on the first
  /// row and on exact rows.
  double order = 0.0;
  /// Largest sup|a| (1 + sup|f|) among the sampled forms.
  double scale = 0.0;
  /// The defect is at roundoff (<= tol_identity * scale), as happens when
  /// every sampled form is a polynomial the stencils differentiate exactly.
  bool exact = false;
};

struct SuiteOptions {
  std::vector<int> m_values{1, 2, 3};
  int forms = 50;
  std::uint64_t seed = 1;
  ContractSign sign = ContractSign::standard;
  double tol_identity = 1e-12;
  double tol_commutator = 10.0;
  /// The commutator defect is always checked on the disc; on the bidisc only
  /// when set (it doubles the cost of the bidisc pass).
  bool bidisc_commutator = false;
  /// Disc refinement study for the commutator defect.
  std::vector<double> study_h{1.0 / 16, 1.0 / 32, 1.0 / 64};
  double min_order = 1.5;
};

struct SuiteReport {
  std::vector<IdentityCheck> checks;
  std::vector<OrderRow> orders;
  double min_observed_order = 0.0;
  bool orders_pass = true;
  bool pass = true;
  std::size_t failures() const;
};

/// T_f T_f = 0, Leibniz, dbar dbar = 0 and the T_f / dbar commutator for
/// `forms` random forms of every valid (r, s), on one grid.
std::vector<IdentityCheck> run_identities(const DomainPtr& domain, const SuiteOptions& options);

/// Max over random forms of the commutator defect on each grid of the
/// disc study, with empirical orders between successive grids.
std::vector<OrderRow> commutator_orders(const SuiteOptions& options);

/// Unit disc at h_disc and unit bidisc at h_bidisc plus the refinement study.
SuiteReport run_suite(double h_disc, double h_bidisc, const SuiteOptions& options);

}  // namespace dbk::app
