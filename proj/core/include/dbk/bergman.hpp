#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dbk/grid.hpp"
#include "dbk/holo_map.hpp"

namespace dbk {

/// Product of polar Gauss-Legendre (in r, weight r dr) and uniform-angle
/// rules over each factor disc. Integrates z^a zbar^b exactly on a disc
/// when a + b + 1 <= 2 n_r - 1 and |a - b| < n_theta.
struct PolarQuadrature {
  std::vector<CPoint> points;
  std::vector<double> weights;
  int n_r = 0;
  int n_theta = 0;

  static PolarQuadrature build(const DomainSpec& spec, int n_r, int n_theta);
  std::size_t size() const { return points.size(); }
};

/// Orthonormal monomials z^alpha / ||z^alpha|| of total degree <= N on a
/// disc or polydisc, with the Gram matrix certified by quadrature.
class BergmanBasis {
public:
  BergmanBasis(const DomainSpec& spec, int N, int n_r = 0, int n_theta = 0);

  const DomainSpec& spec() const { return spec_; }
  int degree() const { return N_; }
  std::size_t size() const { return alpha_.size(); }
  const std::array<int, 2>& alpha(std::size_t k) const { return alpha_[k]; }
  int total_degree(std::size_t k) const { return alpha_[k][0] + alpha_[k][1]; }
  /// Number of basis elements of total degree <= d.
  std::size_t count_up_to(int d) const;
  const PolarQuadrature& quadrature() const { return quad_; }
  /// max |<e_a, e_b> - delta_ab| by quadrature.
  double gram_residual() const { return gram_residual_; }
  /// All basis values at p.
  void eval(const CPoint& p, cplx* out) const;
  cplx eval(std::size_t k, const CPoint& p) const;

private:
  DomainSpec spec_;
  int N_;
  std::vector<std::array<int, 2>> alpha_;
  std::vector<double> scale_;
  PolarQuadrature quad_;
  double gram_residual_ = 0.0;
};

/// Closed-form ||z^alpha||^2 over the disc or polydisc.
double monomial_norm_squared(const DomainSpec& spec, const std::array<int, 2>& alpha);

/// Matrix of T_g in the orthonormal basis: T(a, b) = <g e_b, e_a>.
struct ToeplitzMatrix {
  std::string symbol;
  std::shared_ptr<const BergmanBasis> basis;
  Eigen::MatrixXcd T;
  int degree() const { return basis->degree(); }
};

ToeplitzMatrix toeplitz_matrix(std::shared_ptr<const BergmanBasis> basis, const Evaluator& g,
                               std::string symbol);

/// Operator norm of [A, B] restricted to basis elements of degree <=
/// interior_degree.
double commutator_norm(const ToeplitzMatrix& A, const ToeplitzMatrix& B, int interior_degree);

/// ||T_g(1) - g||_{L^2} by quadrature.
double toeplitz_one_residual(const ToeplitzMatrix& Tg, const Evaluator& g);

/// L^2 norm by the basis quadrature.
double l2_norm(const BergmanBasis& basis, const Evaluator& g);

struct AcrResult {
  int N = 0;
  int interior_degree = 0;
  /// ||[T_g, T_{f_j}]|| on the interior block, one per component.
  std::vector<double> commutator_norms;
  double tg1_minus_g = 0.0;
  double g_norm = 0.0;
};

/// Commutators of T_g with the T_{f_j} and the residual ||T_g(1) - g||.
/// Requires J_f to have full rank at some node of f's grid. The interior
/// degree defaults to N / 2.
AcrResult acr_residual(const HoloMap& f, const Evaluator& g, int N, int interior_degree = -1);

struct DensityPoint {
  int degree = 0;
  std::size_t span_size = 0;
  double residual = 0.0;
  double relative = 0.0;
  /// Condition number of the Gram matrix.
  double condition = 0.0;
};

struct DensityCurve {
  std::vector<DensityPoint> points;
  double field_norm = 0.0;
  /// Set when a Gram system exceeded the condition threshold; the curve
  /// stops at the last good degree.
  bool truncated = false;
  std::string note;
};

/// L^2 distance from `field` to span{ z^alpha conj(f)^beta : |alpha| + |beta| <= d }
/// for d = 1..max_degree, by quadrature Gram systems.
DensityCurve lp_density_residual(const HoloMap& f, const Evaluator& field, int max_degree,
                                 int n_r = 0, int n_theta = 0, double max_condition = 1e13);

}  // namespace dbk
