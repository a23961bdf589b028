#pragma once

#include <vector>

#include "dbk/forms.hpp"
#include "dbk/holo_map.hpp"

namespace dbk {

/// Widths are in units of the grid spacing h unless noted.
struct SmoothingOptions {
  /// Damping band: g is cut to zero within collar_inner of the boundary and
  /// left alone beyond collar_outer.
  double collar_inner = 1.5;
  double collar_outer = 2.5;
  /// Mollifier radius.
  double mollify = 1.0;
  /// Largest frozen-ball radius, in absolute units.
  double freeze_cap = 0.25;
  /// Target for the frozen-ball radius as a fraction of eps / Lip(g).
  double freeze_fraction = 0.5;
  /// Singular-value threshold for the rank-deficient mask, and the radius
  /// of the neighbourhood on which g must be small there.
  double tol_svd = 1.0;
  double rank_neighbourhood = 2.0;
  /// Half-cell boundary collar on which |g| < eps/4 is certified.
  double hypothesis_collar = 0.5;
};

/// Data shared by every lambda: the mollified, boundary-damped g and the
/// certificate that g vanishes near the boundary and the rank-deficient set.
class SmoothingContext {
public:
  SmoothingContext(const HoloMap& f, Evaluator g, double eps, SmoothingOptions options = {});

  const HoloMap& f() const { return f_; }
  const DomainPtr& domain() const { return f_.domain(); }
  double eps() const { return eps_; }
  const SmoothingOptions& options() const { return opt_; }

  cplx g(const CPoint& p) const { return g_(p); }
  /// damp(boundary distance) * (mollified g).
  cplx base(const CPoint& p) const;
  const Field& g_samples() const { return g_samples_; }
  const Field& base_samples() const { return base_samples_; }

  /// Largest centred-difference gradient of base on the grid.
  double lipschitz() const { return lip_; }
  /// sup |J_f| over the nodes.
  double map_lipschitz() const { return lip_f_; }
  double collar_inner() const { return a1_; }
  double collar_outer() const { return a2_; }
  const Mask& rank_mask() const { return rank_mask_; }
  double boundary_sup() const { return boundary_sup_; }
  double rank_sup() const { return rank_sup_; }
  bool g_is_zero() const { return zero_; }

private:
  const HoloMap& f_;
  Evaluator g_;
  double eps_;
  SmoothingOptions opt_;
  double a1_ = 0.0;
  double a2_ = 0.0;
  std::vector<cplx> moll_offsets_;
  std::vector<double> moll_weights_;
  Field g_samples_;
  Field base_samples_;
  Mask rank_mask_;
  double lip_ = 0.0;
  double lip_f_ = 0.0;
  double boundary_sup_ = 0.0;
  double rank_sup_ = 0.0;
  bool zero_ = false;
};

/// A group of fiber points on which g^lambda is frozen to one value.
struct FrozenCluster {
  std::vector<CPoint> points;
  cplx value = 0.0;
  double delta1 = 0.0;  ///< g^lambda == value within delta1
  double delta2 = 0.0;  ///< untouched beyond delta2
};

struct SmoothedData {
  std::vector<cplx> lambda;
  Field g_lambda;
  /// sup |g - g^lambda| on the grid (condition i requires < eps).
  double sup_error = 0.0;
  std::vector<FrozenCluster> clusters;
  /// Discrete dbar g^lambda (degree (0,1)).
  KoszulForm dbar;
  /// Nodes near the fiber and near the boundary on which dbar g^lambda is
  /// certified to vanish identically (condition ii). The boundary zone is
  /// the set of nodes within collar_inner - h of the boundary, minus the
  /// frozen balls.
  Mask fiber_zone;
  Mask collar_zone;
  double dbar_on_fiber_zone = 0.0;
  double dbar_on_collar_zone = 0.0;
  /// min sum|f - lambda|^2 over supp dbar g^lambda.
  double fiber_gap = 0.0;
  const SmoothingContext* context = nullptr;

  /// g^lambda at an arbitrary point.
  cplx eval(const CPoint& p) const;
};

/// Freeze-and-blend smoothing of g around the fiber f^{-1}(lambda).
SmoothedData smooth_vanishing_data(const SmoothingContext& ctx, const std::vector<cplx>& lambda);

/// Fiber points of f - lambda: local minima of |f - lambda| below L_f h,
/// refined by Gauss-Newton; points within `reach` outside the domain are
/// kept. L_f is computed from the Jacobian when `map_lipschitz` <= 0.
std::vector<CPoint> fiber_points(const HoloMap& f, const std::vector<cplx>& lambda, double reach,
                                 double map_lipschitz = 0.0);

}  // namespace dbk
