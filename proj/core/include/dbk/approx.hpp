#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dbk/koszul.hpp"
#include "dbk/smoothing.hpp"

namespace dbk {

struct ApproxOptions {
  SmoothingOptions smoothing;
  /// A cloud point w counts as covered by lambda when |w - lambda| <= theta rho.
  double theta = 0.9;
  /// Upper bound on the number of net points before giving up.
  std::size_t max_lambdas = 100000;
  /// The verification grid has spacing h / refine.
  int refine = 2;
  /// Degree of the optional polynomial fit of the partition functions;
  /// 0 leaves the expansion off.
  int stone_weierstrass_degree = 0;
};

/// Outcome of the division step for one lambda:
///   G = g^lambda - sum_l (f_l - lambda_l) H_l,   dbar G ~ 0.
struct LambdaSolve {
  SmoothedData data;
  Field G;
  std::vector<Field> H;
  /// Cauchy densities of H_l, already extended to the boundary layer, so
  /// that H_l can be evaluated off the grid with cauchy_at.
  std::vector<Field> density;
  /// M = sum_l sup|H_l|.
  double M = 0.0;
  double dbar_G = 0.0;
  double tolerance = 0.0;
  bool holomorphic = false;
  /// max over nodes of |G - g^lambda| / (M |f - lambda|); at most 1.
  double division_ratio = 0.0;
  bool division_ok = false;
  DescentTrace trace;
  double seconds = 0.0;
};

LambdaSolve per_lambda_solve(const SmoothingContext& ctx, const SmoothedData& data);

/// One row of the lambda-net report.
struct LambdaRecord {
  std::vector<cplx> lambda;
  double rho = 0.0;
  double M = 0.0;
  double G_sup = 0.0;
  double dbar_G = 0.0;
  double tolerance = 0.0;
  bool holomorphic = false;
  double division_ratio = 0.0;
  bool division_ok = false;
  double smoothing_error = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  int clusters = 0;
  int depth = 0;
  int round = 1;
  double seconds = 0.0;
};

/// Points w of f(verification grid) with a bucket index on the first
/// component.
class ImageCloud {
public:
  ImageCloud(const HoloMap& f);
  std::size_t size() const { return n_; }
  int m() const { return m_; }
  const cplx* point(std::size_t i) const { return &values_[i * static_cast<std::size_t>(m_)]; }
  double distance(std::size_t i, const std::vector<cplx>& lambda) const;
  /// Indices with |w - lambda| < radius, ascending.
  std::vector<std::size_t> query(const std::vector<cplx>& lambda, double radius) const;

private:
  int m_ = 0;
  std::size_t n_ = 0;
  std::vector<cplx> values_;
  double lo_x_ = 0.0, lo_y_ = 0.0, cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

struct LambdaNet {
  std::vector<LambdaRecord> records;
  double theta = 0.9;
  int rounds = 0;
  std::size_t cloud_size = 0;
  /// min over the cloud of max_j (theta rho_j - |w - lambda_j|); >= 0 when
  /// every point is covered.
  double coverage_margin = 0.0;
  /// min over the cloud of sum_j beta_j.
  double partition_floor = 0.0;
  bool covered = false;
};

/// Partition bump attached to a net point: 1 within rho/2, 0 beyond rho.
double partition_bump(double distance, double rho);

/// Accumulates sum_j beta_j G_j on the solve grid and on the verification
/// grid as lambda-solves arrive, together with the terms of the error chain
///   |h - g| <= sum chi_j |G_j - g| <= sum chi_j (M_j |f - lambda_j| + |g^j - g|)
///           <= sum chi_j M_j |f - lambda_j| + eps <= 2 eps.
class Assembler {
public:
  Assembler(const SmoothingContext& ctx, const HoloMap& f_fine, const ImageCloud& coarse,
            const ImageCloud& fine);
  void add(const LambdaSolve& solve, double rho);
  /// Partition sums on the verification grid.
  const RealField& beta_sum_fine() const { return fine_beta_; }

  struct Result {
    Field h_fine;
    Field h_coarse;
    double sup_error = 0.0;         ///< on the verification grid
    double sup_error_coarse = 0.0;  ///< on the solve grid
    /// Largest value of each line of the chain over the solve grid, and the
    /// number of nodes where a line exceeds the next.
    std::vector<double> chain_max;
    std::size_t chain_violations = 0;
    double partition_floor = 0.0;
  };
  Result finish() const;

private:
  const SmoothingContext& ctx_;
  const HoloMap& f_fine_;
  const ImageCloud& coarse_;
  const ImageCloud& fine_;
  Field coarse_sum_, fine_sum_;
  RealField coarse_beta_, fine_beta_;
  RealField l2_, l3_, l4_, l5_;
};

using SolveSink = std::function<void(const LambdaSolve&, double rho)>;

/// Greedy net over the image cloud: every uncovered point in turn becomes a
/// net point, its lambda-solve fixes rho = eps / M, and the points within
/// theta rho are marked covered. Each solve is handed to `sink`.
LambdaNet build_lambda_net(const SmoothingContext& ctx, const ImageCloud& cloud,
                           const ApproxOptions& options, const SolveSink& sink);

struct StoneWeierstrass {
  int degree = 0;
  /// max_j sup over the cloud |chi_j - P_j|.
  double max_fit_error = 0.0;
  /// sum_j sup|chi_j - P_j| sup|G_j|: bound on the extra error of the
  /// polynomial expansion.
  double error_bound = 0.0;
  /// eps / 10; the fit is reported against it.
  double target = 0.0;
  bool within_target = false;
};

struct Approximant {
  Assembler::Result assembly;
  LambdaNet net;
  double eps = 0.0;
  bool has_stone_weierstrass = false;
  StoneWeierstrass stone_weierstrass;
  /// 2 eps plus the expansion bound when present.
  double tolerance = 0.0;
  bool certified = false;
  DomainPtr fine_domain;
};

/// Theorem-1 style approximation of g, vanishing on the boundary and near
/// the rank-deficient set of f, by sum_j chi_j(f) G_j with G_j holomorphic
/// up to discretisation. Disc only.
Approximant approximate(const HoloMap& f, const Evaluator& g, double eps,
                        const ApproxOptions& options = {});

/// Per-lambda CSV: components, rho, M, certificates. Deterministic.
void write_lambda_csv(std::ostream& os, const LambdaNet& net);

}  // namespace dbk
