#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dbk/grid.hpp"

namespace dbk {

using JacobianEvaluator = std::function<Eigen::MatrixXcd(const CPoint&)>;

/// A holomorphic map f = (f_1, ..., f_m) on a grid domain in C^n, with
/// closed-form component and Jacobian evaluators and its grid samples.
///
/// Construction certifies holomorphy of the samples: the discrete dbar of
/// every f_j stays below tol_holo(h) on nodes with a full stencil.
class HoloMap {
public:
  HoloMap(std::string name, std::vector<Evaluator> components, JacobianEvaluator jacobian,
          DomainPtr domain);

  const std::string& name() const { return name_; }
  int m() const { return static_cast<int>(components_.size()); }
  int n() const { return domain_->dim(); }
  const DomainPtr& domain() const { return domain_; }

  const Field& samples(int j) const { return samples_[static_cast<std::size_t>(j)]; }
  const Evaluator& component(int j) const { return components_[static_cast<std::size_t>(j)]; }
  cplx eval(int j, const CPoint& p) const { return components_[static_cast<std::size_t>(j)](p); }
  Eigen::MatrixXcd jacobian(const CPoint& p) const { return jacobian_(p); }

  double sup_bound(int j) const { return sup_[static_cast<std::size_t>(j)]; }
  double sup_bound() const;
  /// Largest discrete dbar of any component on full-stencil nodes.
  double holomorphy_defect() const { return defect_; }
  double tol_holo() const { return tol_holo_; }

  /// Sum_l |f_l|^2 at every node.
  RealField norm_squared() const;

  /// The same map sampled on another domain of the same dimension.
  HoloMap on(DomainPtr domain) const;
  /// f - lambda.
  HoloMap shifted(const std::vector<cplx>& lambda) const;

private:
  std::string name_;
  std::vector<Evaluator> components_;
  JacobianEvaluator jacobian_;
  DomainPtr domain_;
  std::vector<Field> samples_;
  std::vector<double> sup_;
  double defect_ = 0.0;
  double tol_holo_ = 0.0;
};

/// 10 h^2 sup|f| / R^3, R the smallest factor radius.
double tol_holo(const GridDomain& domain, double sup_f);

/// Named maps: "z", "z^2", "z,1-z", "z-2", "z1,z2", "z1^2,z2", "z1",
/// "z1,z2,1-z1", and constants written "const:c" or "const:c1,c2" with real
/// entries.
HoloMap make_map(const std::string& name, DomainPtr domain);

/// Names accepted by make_map (constants excluded).
std::vector<std::string> map_presets();

/// Flags nodes where the smallest singular value of J_f is below tol_svd.
Mask jacobian_rank_mask(const HoloMap& f, const GridDomain& domain, double tol_svd);

}  // namespace dbk
