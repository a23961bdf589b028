#include "dbk/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dbk/error.hpp"
#include "dbk/koszul.hpp"
#include "dbk/profile.hpp"
#include "dbk/stencil.hpp"

namespace dbk {

namespace {

double bump_weight(double t) { return t >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - t * t)); }

double lambda_gap(const HoloMap& f, const std::vector<cplx>& lambda, const CPoint& p) {
  double s = 0.0;
  for (int l = 0; l < f.m(); ++l) s += std::norm(f.eval(l, p) - lambda[static_cast<std::size_t>(l)]);
  return std::sqrt(s);
}

}  // namespace

SmoothingContext::SmoothingContext(const HoloMap& f, Evaluator g, double eps,
                                   SmoothingOptions options)
    : f_(f), g_(std::move(g)), eps_(eps), opt_(options) {
  const auto& dom = *f.domain();
  if (dom.dim() != 1) {
    throw DomainMismatch("the approximation pipeline runs on a disc (n = 1)");
  }
  if (!(eps > 0.0)) throw HypothesisError("eps", "eps must be positive");
  const double h = dom.h();
  a1_ = opt_.collar_inner * h;
  a2_ = opt_.collar_outer * h;

  const double rm = opt_.mollify * h;
  const int q = 2;
  double total = 0.0;
  for (int a = -q; a <= q; ++a) {
    for (int b = -q; b <= q; ++b) {
      const cplx o(a * rm / q, b * rm / q);
      const double w = bump_weight(std::abs(o) / (rm * 1.0001));
      if (w <= 0.0) continue;
      moll_offsets_.push_back(o);
      moll_weights_.push_back(w);
      total += w;
    }
  }
  for (auto& w : moll_weights_) w /= total;

  g_samples_ = dom.sample(g_);
  base_samples_ = dom.sample([this](const CPoint& p) { return base(p); });
  zero_ = sup_norm(g_samples_) == 0.0;

  const auto& fac = dom.factor(0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (fac.depth[i] < 1) continue;
    const auto& nb = fac.nbr[i];
    const cplx dx = (base_samples_[nb[0]] - base_samples_[nb[1]]) / (2.0 * h);
    const cplx dy = (base_samples_[nb[2]] - base_samples_[nb[3]]) / (2.0 * h);
    lip_ = std::max(lip_, std::sqrt(std::norm(dx) + std::norm(dy)));
  }

  for (std::size_t i = 0; i < dom.size(); ++i) {
    lip_f_ = std::max(lip_f_, f.jacobian(dom.point(i)).norm());
  }

  // Hypothesis: g is small on the boundary collar and near the set where f
  // drops rank.
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom.boundary_dist(i) < opt_.hypothesis_collar * h) {
      boundary_sup_ = std::max(boundary_sup_, std::abs(g_samples_[i]));
    }
  }
  rank_mask_ = jacobian_rank_mask(f, dom, opt_.tol_svd * h);
  if (std::any_of(rank_mask_.begin(), rank_mask_.end(), [](auto v) { return v != 0; })) {
    const RealField d = distance_to_mask(dom, rank_mask_);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (d[i] <= opt_.rank_neighbourhood * h) {
        rank_sup_ = std::max(rank_sup_, std::abs(g_samples_[i]));
      }
    }
  }
  if (boundary_sup_ >= 0.25 * eps) {
    std::ostringstream os;
    os << "sup|g| = " << boundary_sup_ << " on the boundary collar is not below eps/4 = "
       << 0.25 * eps;
    throw HypothesisError("boundary-vanishing", os.str());
  }
  if (rank_sup_ >= 0.25 * eps) {
    std::ostringstream os;
    os << "sup|g| = " << rank_sup_ << " near the rank-deficient set is not below eps/4 = "
       << 0.25 * eps;
    throw HypothesisError("rank-vanishing", os.str());
  }
}

cplx SmoothingContext::base(const CPoint& p) const {
  const double d = f_.domain()->boundary_distance(p);
  const double damp = 1.0 - radial_cutoff(d, a1_, a2_);
  if (damp == 0.0) return 0.0;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < moll_offsets_.size(); ++k) {
    CPoint q = p;
    q[0] += moll_offsets_[k];
    acc += moll_weights_[k] * g_(q);
  }
  return damp * acc;
}

cplx SmoothedData::eval(const CPoint& p) const {
  cplx v = context->base(p);
  for (const auto& c : clusters) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& q : c.points) d = std::min(d, distance(p, q));
    const double beta = radial_cutoff(d, c.delta1, c.delta2);
    if (beta == 1.0) {
      v = c.value;
    } else if (beta > 0.0) {
      v += beta * (c.value - v);
    }
  }
  return v;
}

std::vector<CPoint> fiber_points(const HoloMap& f, const std::vector<cplx>& lambda, double reach,
                                 double map_lipschitz) {
  const auto& dom = *f.domain();
  const auto& fac = dom.factor(0);
  const double h = dom.h();
  const std::size_t N = dom.size();
  RealField gap(N, 0.0);
  for (int l = 0; l < f.m(); ++l) {
    const Field& s = f.samples(l);
    for (std::size_t i = 0; i < N; ++i) gap[i] += std::norm(s[i] - lambda[static_cast<std::size_t>(l)]);
  }
  for (auto& v : gap) v = std::sqrt(v);

  double lf = map_lipschitz;
  if (lf <= 0.0) {
    for (std::size_t i = 0; i < N; ++i) lf = std::max(lf, f.jacobian(dom.point(i)).norm());
  }
  const double eta = std::max(lf, 1e-12) * h;

  std::vector<CPoint> out;
  const int side = fac.side();
  for (std::size_t i = 0; i < N; ++i) {
    if (gap[i] >= eta) continue;
    bool is_min = true;
    for (int dx = -1; dx <= 1 && is_min; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const int bx = fac.ix[i] + dx, by = fac.iy[i] + dy;
        if (bx < 0 || by < 0 || bx >= side || by >= side) continue;
        const int j = fac.node_at(bx, by);
        if (j < 0) continue;
        const auto ju = static_cast<std::size_t>(j);
        if (gap[ju] < gap[i] || (gap[ju] == gap[i] && ju < i)) {
          is_min = false;
          break;
        }
      }
    }
    if (!is_min) continue;

    // Gauss-Newton on |f - lambda|^2.
    cplx z = fac.z[i];
    for (int it = 0; it < 60; ++it) {
      CPoint p;
      p[0] = z;
      const Eigen::MatrixXcd J = f.jacobian(p);
      cplx num = 0.0;
      double den = 0.0;
      for (int l = 0; l < f.m(); ++l) {
        const cplx r = f.eval(l, p) - lambda[static_cast<std::size_t>(l)];
        num += std::conj(J(l, 0)) * r;
        den += std::norm(J(l, 0));
      }
      if (den < 1e-300) break;
      const cplx step = num / den;
      z -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    CPoint p;
    p[0] = z;
    if (std::abs(z - fac.z[i]) > 2.0 * h) p[0] = fac.z[i];
    if (lambda_gap(f, lambda, p) >= eta) continue;
    if (dom.boundary_distance(p) < -reach) continue;
    bool dup = false;
    for (const auto& q : out) {
      if (distance(p, q) < 0.25 * h) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  return out;
}

namespace {

struct Attempt {
  double delta1;
  double delta2;
};

std::vector<FrozenCluster> make_clusters(const SmoothingContext& ctx,
                                         const std::vector<CPoint>& pts, const Attempt& a) {
  const std::size_t P = pts.size();
  std::vector<std::size_t> parent(P);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = i + 1; j < P; ++j) {
      if (distance(pts[i], pts[j]) < 2.0 * a.delta2) parent[find(i)] = find(j);
    }
  }
  std::vector<FrozenCluster> out;
  std::vector<long> slot(P, -1);
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.push_back({{}, 0.0, a.delta1, a.delta2});
    }
    out[static_cast<std::size_t>(slot[r])].points.push_back(pts[i]);
  }
  for (auto& c : out) {
    cplx mean = 0.0;
    for (const auto& p : c.points) mean += ctx.base(p);
    c.value = mean / static_cast<double>(c.points.size());
  }
  return out;
}

}  // namespace

SmoothedData smooth_vanishing_data(const SmoothingContext& ctx, const std::vector<cplx>& lambda) {
  const HoloMap& f = ctx.f();
  if (static_cast<int>(lambda.size()) != f.m()) {
    throw DomainMismatch("lambda has the wrong number of components");
  }
  const DomainPtr& D = ctx.domain();
  const auto& dom = *D;
  const double h = dom.h();
  const double eps = ctx.eps();
  const auto& opt = ctx.options();
  const std::size_t N = dom.size();

  RealField gap2(N, 0.0);
  for (int l = 0; l < f.m(); ++l) {
    const Field& s = f.samples(l);
    for (std::size_t i = 0; i < N; ++i) gap2[i] += std::norm(s[i] - lambda[static_cast<std::size_t>(l)]);
  }

  double target = opt.freeze_cap;
  if (ctx.lipschitz() > 0.0) target = std::min(target, opt.freeze_fraction * eps / ctx.lipschitz());

  // Candidate radii in order of preference: the Lipschitz-based target
  // first, then progressively tighter balls, then wider inner radii for
  // fibers where f - lambda vanishes to higher order.
  std::vector<Attempt> attempts;
  std::vector<double> inner{std::max(1.25 * h, 0.5 * target), 1.25 * h, 1.1 * h};
  for (double k : {2.25, 3.25, 4.25, 6.0, 8.0}) inner.push_back(k * h);
  for (double d1 : inner) {
    for (double d2 : {std::max(target, d1 + h), d1 + h, d1 + 0.75 * h, d1 + 0.5 * h}) {
      if (std::none_of(attempts.begin(), attempts.end(), [&](const Attempt& x) {
            return x.delta1 == d1 && x.delta2 == d2;
          })) {
        attempts.push_back({d1, d2});
      }
    }
  }
  const std::vector<CPoint> pts =
      fiber_points(f, lambda, 4.0 * h + 8.0 * h + target, ctx.map_lipschitz());

  SmoothedData out;
  out.lambda = lambda;
  out.context = &ctx;

  double best_error = std::numeric_limits<double>::infinity();
  double best_gap = 0.0;
  for (const Attempt& a : attempts) {
    out.clusters = ctx.g_is_zero() ? std::vector<FrozenCluster>{} : make_clusters(ctx, pts, a);
    out.g_lambda = ctx.base_samples();
    RealField dmin(N, std::numeric_limits<double>::infinity());
    if (!out.clusters.empty()) {
      for (const auto& c : out.clusters) {
        const RealField d = distance_to_points(dom, c.points);
        for (std::size_t i = 0; i < N; ++i) {
          dmin[i] = std::min(dmin[i], d[i]);
          const double beta = radial_cutoff(d[i], c.delta1, c.delta2);
          if (beta == 1.0) {
            out.g_lambda[i] = c.value;
          } else if (beta > 0.0) {
            out.g_lambda[i] += beta * (c.value - out.g_lambda[i]);
          }
        }
      }
    }
    out.sup_error = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      out.sup_error = std::max(out.sup_error, std::abs(out.g_lambda[i] - ctx.g_samples()[i]));
    }
    out.dbar = dbar_apply(KoszulForm::scalar(D, f.m(), out.g_lambda));
    const Field& w = out.dbar.coeff(0, 1);

    out.fiber_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N; ++i) {
      if (w[i] != 0.0) out.fiber_gap = std::min(out.fiber_gap, gap2[i]);
    }

    const bool err_ok = out.sup_error < eps;
    const bool gap_ok = out.fiber_gap > 10.0 * kZeroSetFloor;
    if (err_ok && gap_ok) {
      out.fiber_zone.assign(N, 0);
      out.collar_zone.assign(N, 0);
      out.dbar_on_fiber_zone = 0.0;
      out.dbar_on_collar_zone = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        if (!out.clusters.empty() && dmin[i] < a.delta1 - h) {
          out.fiber_zone[i] = 1;
          out.dbar_on_fiber_zone = std::max(out.dbar_on_fiber_zone, std::abs(w[i]));
        }
        if (dom.boundary_dist(i) < ctx.collar_inner() - h && !(dmin[i] < a.delta2 + h)) {
          out.collar_zone[i] = 1;
          out.dbar_on_collar_zone = std::max(out.dbar_on_collar_zone, std::abs(w[i]));
        }
      }
      if (out.dbar_on_fiber_zone != 0.0 || out.dbar_on_collar_zone != 0.0) {
        std::ostringstream os;
        os << "dbar g^lambda does not vanish on the excluded zones (fiber "
           << out.dbar_on_fiber_zone << ", collar " << out.dbar_on_collar_zone << ")";
        throw CertificateError("smoothing-support", os.str());
      }
      return out;
    }
    if (gap_ok) best_error = std::min(best_error, out.sup_error);
    best_gap = std::max(best_gap, out.fiber_gap);
    if (ctx.g_is_zero()) break;
  }
  std::ostringstream os;
  os << "could not freeze g near the fiber of lambda = " << lambda[0]
     << ": best sup|g - g^lambda| = " << best_error << " (eps " << eps
     << "), best min |f-lambda|^2 on supp dbar g^lambda = " << best_gap;
  throw CertificateError("smoothing", os.str());
}

}  // namespace dbk
