#pragma once

#include <string>
#include <vector>

#include "dbk/dbar.hpp"
#include "dbk/forms.hpp"

namespace dbk {

/// Below this value of sum |f_l|^2 a node counts as touching the zero set.
inline constexpr double kZeroSetFloor = 1e-6;

/// X = sum_j e_j (x) chi conj(f_j) / sum_l |f_l|^2, degree (1, 0).
/// T_f X = chi identically. `floor` receives min sum|f_l|^2 over supp chi.
KoszulForm build_section_cutoff(const HoloMap& f, const CutOff& chi, double* floor = nullptr);

struct GlobalSection {
  KoszulForm X;
  double min_norm_squared = 0.0;
  /// sup of the discrete dbar X on full-stencil nodes.
  double dbar_sup = 0.0;
  /// Closed-form bound on |dbar g_j| from sampled sup norms of f and f'.
  double dbar_bound = 0.0;
};

/// X = sum_j e_j (x) conj(f_j) / sum_l |f_l|^2 on all of the domain;
/// requires sum |f_l|^2 > eps0 at every node.
GlobalSection build_section_global(const HoloMap& f, double eps0);

/// Y = X ^ W with X built from chi; T_f Y = W wherever chi = 1.
KoszulForm lift_lemma1(const HoloMap& f, const KoszulForm& W, const CutOff& chi);

/// Narrow cut-off around supp W. On a polydisc: 1 within 1.01 h, 0 beyond
/// 2 h, so every difference stencil touching supp W sees chi = 1, and
/// compactly supported. On a disc no stencil is ever applied to X ^ W, so
/// chi is the indicator of supp W at the nodes.
CutOff auto_cutoff(const HoloMap& f, const KoszulForm& W);

/// depth * 20 h (1 + x_sup)^depth * w_sup.
double tol_descent(int depth, double h, double x_sup, double w_sup);

struct DescentStage {
  int level = 0;
  std::string step;
  int r = 0;
  int s = 0;
  /// Size of the form produced by this step.
  double sup = 0.0;
  /// Step-specific defect (identity, closedness or solver residual).
  double defect = 0.0;
  std::string defect_name;
};

struct DescentTrace {
  std::vector<DescentStage> stages;
  /// Intermediate forms, kept only when requested.
  std::vector<KoszulForm> forms;
  int depth = 0;
  double x_sup = 0.0;
  double w_sup = 0.0;
  double tolerance = 0.0;
  double final_residual = 0.0;
  bool certified = false;
  /// Notes such as the verification-region cut-off.
  std::vector<std::string> notes;

  std::string report() const;
};

struct DescentOptions {
  bool keep_forms = false;
  ContractSign sign = ContractSign::standard;
};

struct DescentResult {
  KoszulForm Y;
  DescentTrace trace;
};

/// Solves T_f dbar Y = W for W of degree (r, s), s >= 1, compactly
/// supported away from f^{-1}(0) with dbar W = 0 and T_f W = 0, by
/// descending induction: lift Y1 = X ^ W, recurse on dbar Y1, correct
/// Y3 = Y1 - T_f Y2 and solve dbar Y = Y3. Returns Y of degree (r+1, s-1).
DescentResult descent_lemma2(const HoloMap& f, const KoszulForm& W,
                             const DescentOptions& options = {});

struct Prop1Options {
  /// Polydisc only: W is multiplied by this cut-off before the recursion
  /// and every identity is certified where it equals 1.
  const CutOff* region = nullptr;
  ContractSign sign = ContractSign::standard;
};

struct Prop1Result {
  KoszulForm Y;
  DescentTrace trace;
  /// sup |T_f Y - W| and sup |dbar Y| over the certified nodes.
  double identity_defect = 0.0;
  double dbar_defect = 0.0;
  Mask certified_nodes;
};

/// dbar-closed lift: Y of degree (r+1, s) with dbar Y = 0 and T_f Y = W,
/// for sum |f_l|^2 > eps0.
Prop1Result lift_prop1(const HoloMap& f, const KoszulForm& W, double eps0,
                       const Prop1Options& options = {});

struct CoronaResult {
  std::vector<Field> g;
  /// sup |sum f_j g_j - 1|.
  double identity_defect = 0.0;
  std::vector<double> dbar_sup;
  std::vector<double> g_sup;
  double tolerance = 0.0;
  Mask certified_nodes;
  DescentTrace trace;
};

/// Bounded g_j with sum f_j g_j = 1 and dbar g_j ~ 0, from lift_prop1 with
/// W = 1.
CoronaResult corona_solve(const HoloMap& f, double eps0, const Prop1Options& options = {});

}  // namespace dbk
