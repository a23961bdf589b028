#include "dbk/holo_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dbk/error.hpp"
#include "dbk/stencil.hpp"

namespace dbk {

double tol_holo(const GridDomain& domain, double sup_f) {
  const double r = domain.min_radius();
  return 10.0 * domain.h() * domain.h() * sup_f / (r * r * r);
}

HoloMap::HoloMap(std::string name, std::vector<Evaluator> components, JacobianEvaluator jacobian,
                 DomainPtr domain)
    : name_(std::move(name)),
      components_(std::move(components)),
      jacobian_(std::move(jacobian)),
      domain_(std::move(domain)) {
  if (components_.empty()) throw HypothesisError("map", "a map needs at least one component");
  for (const auto& c : components_) {
    samples_.push_back(domain_->sample(c));
    sup_.push_back(sup_norm(samples_.back()));
  }
  for (const auto& s : samples_) {
    for (int k = 0; k < n(); ++k) defect_ = std::max(defect_, sup_norm(wirtinger_dbar(*domain_, s, k)));
  }
  tol_holo_ = dbk::tol_holo(*domain_, sup_bound());
  // Roundoff in the difference quotient is of order eps * sup|f| / h.
  const double roundoff = 1e-13 * sup_bound() / domain_->h();
  if (defect_ > tol_holo_ + roundoff) {
    std::ostringstream os;
    os << "samples of '" << name_ << "' are not discretely holomorphic: defect " << defect_
       << " > tol_holo " << tol_holo_;
    throw HypothesisError("holomorphy", os.str());
  }
}

double HoloMap::sup_bound() const { return *std::max_element(sup_.begin(), sup_.end()); }

RealField HoloMap::norm_squared() const {
  RealField out(domain_->size(), 0.0);
  for (const auto& s : samples_) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::norm(s[i]);
  }
  return out;
}

HoloMap HoloMap::on(DomainPtr domain) const {
  if (domain->dim() != n()) throw DomainMismatch("map resampled on a domain of another dimension");
  return HoloMap(name_, components_, jacobian_, std::move(domain));
}

HoloMap HoloMap::shifted(const std::vector<cplx>& lambda) const {
  if (static_cast<int>(lambda.size()) != m()) throw DomainMismatch("shift has wrong length");
  std::vector<Evaluator> comps;
  for (int j = 0; j < m(); ++j) {
    const cplx l = lambda[static_cast<std::size_t>(j)];
    comps.push_back([c = components_[static_cast<std::size_t>(j)], l](const CPoint& p) {
      return c(p) - l;
    });
  }
  std::ostringstream os;
  os << name_ << " - lambda";
  return HoloMap(os.str(), std::move(comps), jacobian_, domain_);
}

namespace {

struct Preset {
  int n;
  std::vector<Evaluator> comps;
  std::function<Eigen::MatrixXcd(const CPoint&)> jac;
};

Eigen::MatrixXcd mat(int m, int n, std::initializer_list<cplx> entries) {
  Eigen::MatrixXcd J(m, n);
  auto it = entries.begin();
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) J(r, c) = *it++;
  return J;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw HypothesisError("map", "bad constant entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Preset preset(const std::string& name, int n) {
  if (name.rfind("const:", 0) == 0) {
    const auto vals = parse_reals(name.substr(6));
    Preset p{n, {}, {}};
    for (double v : vals) p.comps.push_back([v](const CPoint&) { return cplx(v); });
    const int m = static_cast<int>(vals.size());
    p.jac = [m, n](const CPoint&) { return Eigen::MatrixXcd::Zero(m, n).eval(); };
    return p;
  }
  if (name == "z") return {1, {[](const CPoint& p) { return p[0]; }}, [](const CPoint&) { return mat(1, 1, {1.0}); }};
  if (name == "z^2") {
    return {1, {[](const CPoint& p) { return p[0] * p[0]; }},
            [](const CPoint& p) { return mat(1, 1, {2.0 * p[0]}); }};
  }
  if (name == "z-2") {
    return {1, {[](const CPoint& p) { return p[0] - 2.0; }}, [](const CPoint&) { return mat(1, 1, {1.0}); }};
  }
  if (name == "z,1-z") {
    return {1,
            {[](const CPoint& p) { return p[0]; }, [](const CPoint& p) { return 1.0 - p[0]; }},
            [](const CPoint&) { return mat(2, 1, {1.0, -1.0}); }};
  }
  if (name == "z1") {
    return {2, {[](const CPoint& p) { return p[0]; }}, [](const CPoint&) { return mat(1, 2, {1.0, 0.0}); }};
  }
  if (name == "z1,z2") {
    return {2,
            {[](const CPoint& p) { return p[0]; }, [](const CPoint& p) { return p[1]; }},
            [](const CPoint&) { return mat(2, 2, {1.0, 0.0, 0.0, 1.0}); }};
  }
  if (name == "z1^2,z2") {
    return {2,
            {[](const CPoint& p) { return p[0] * p[0]; }, [](const CPoint& p) { return p[1]; }},
            [](const CPoint& p) { return mat(2, 2, {2.0 * p[0], 0.0, 0.0, 1.0}); }};
  }
  if (name == "z1,z2,1-z1") {
    return {2,
            {[](const CPoint& p) { return p[0]; }, [](const CPoint& p) { return p[1]; },
             [](const CPoint& p) { return 1.0 - p[0]; }},
            [](const CPoint&) { return mat(3, 2, {1.0, 0.0, 0.0, 1.0, -1.0, 0.0}); }};
  }
  if (name == "z,z^2,1-z") {
    return {1,
            {[](const CPoint& p) { return p[0]; }, [](const CPoint& p) { return p[0] * p[0]; },
             [](const CPoint& p) { return 1.0 - p[0]; }},
            [](const CPoint& p) { return mat(3, 1, {1.0, 2.0 * p[0], -1.0}); }};
  }
  throw HypothesisError("map", "unknown map '" + name + "'");
}

}  // namespace

std::vector<std::string> map_presets() {
  return {"z", "z^2", "z,1-z", "z-2", "z,z^2,1-z", "z1", "z1,z2", "z1^2,z2", "z1,z2,1-z1"};
}

HoloMap make_map(const std::string& name, DomainPtr domain) {
  auto p = preset(name, domain->dim());
  if (p.n != domain->dim()) {
    throw HypothesisError("map", "map '" + name + "' lives in C^" + std::to_string(p.n) +
                                     " but the domain is in C^" + std::to_string(domain->dim()));
  }
  return HoloMap(name, std::move(p.comps), std::move(p.jac), std::move(domain));
}

Mask jacobian_rank_mask(const HoloMap& f, const GridDomain& domain, double tol_svd) {
  if (f.m() < domain.dim()) {
    throw HypothesisError("rank", "m < n: the Jacobian can never have rank n");
  }
  Mask out(domain.size(), 0);
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Eigen::MatrixXcd J = f.jacobian(domain.point(i));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    const auto& sv = svd.singularValues();
    const double smin = sv.size() < domain.dim() ? 0.0 : sv(domain.dim() - 1);
    out[i] = smin < tol_svd ? 1 : 0;
  }
  return out;
}

}  // namespace dbk
