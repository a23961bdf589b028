#include "dbk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dbk/error.hpp"
#include "dbk/profile.hpp"

namespace dbk {

// Four independent running maxima break the dependency chain of a single
// accumulator.
double sup_norm(const Field& f) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = f.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (std::size_t k = 0; k < 4; ++k) s[k] = std::max(s[k], std::norm(f[i + k]));
  for (; i < n; ++i) s[0] = std::max(s[0], std::norm(f[i]));
  return std::sqrt(std::max(std::max(s[0], s[1]), std::max(s[2], s[3])));
}

double sup_norm(const Field& f, const Mask& where) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = f.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (std::size_t k = 0; k < 4; ++k)
      s[k] = std::max(s[k], where[i + k] ? std::norm(f[i + k]) : 0.0);
  for (; i < n; ++i) s[0] = std::max(s[0], where[i] ? std::norm(f[i]) : 0.0);
  return std::sqrt(std::max(std::max(s[0], s[1]), std::max(s[2], s[3])));
}

int DiscFactor::node_at(int bx, int by) const {
  if (bx < 0 || by < 0 || bx >= side() || by >= side()) return -1;
  return box_to_node[static_cast<std::size_t>(bx + side() * by)];
}

namespace {

DiscFactor build_factor(double radius, double h) {
  DiscFactor f;
  f.radius = radius;
  f.h = h;
  f.half = static_cast<int>(std::ceil(radius / h));
  const int side = f.side();
  const double r2 = radius * radius;
  auto coord = [&](int b) { return (b - f.half) * h; };
  auto strictly_inside = [&](double x, double y) { return x * x + y * y < r2; };

  f.box_to_node.assign(static_cast<std::size_t>(side) * side, -1);
  for (int by = 0; by < side; ++by) {
    for (int bx = 0; bx < side; ++bx) {
      const double x = coord(bx);
      const double y = coord(by);
      const double bd = radius - std::hypot(x, y);
      if (!strictly_inside(x, y) || bd <= 1e-12 * radius) continue;
      f.box_to_node[static_cast<std::size_t>(bx + side * by)] = static_cast<int>(f.z.size());
      f.ix.push_back(bx);
      f.iy.push_back(by);
      f.z.emplace_back(x, y);
      f.bdist.push_back(bd);
    }
  }
  const std::size_t n = f.z.size();
  f.weight.assign(n, 0.0);
  f.nbr.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    f.nbr[k] = {f.node_at(f.ix[k] + 1, f.iy[k]), f.node_at(f.ix[k] - 1, f.iy[k]),
                f.node_at(f.ix[k], f.iy[k] + 1), f.node_at(f.ix[k], f.iy[k] - 1)};
  }

  // Corner-fraction weights; cut cells centred outside hand their weight to
  // the nearest inside neighbour (axis neighbours first, then the one
  // closest to the boundary).
  const double cell = h * h;
  for (int by = 0; by < side; ++by) {
    for (int bx = 0; bx < side; ++bx) {
      const double x = coord(bx);
      const double y = coord(by);
      int corners = 0;
      for (double dx : {-0.5, 0.5}) {
        for (double dy : {-0.5, 0.5}) {
          if (strictly_inside(x + dx * h, y + dy * h)) ++corners;
        }
      }
      if (corners == 0) continue;
      const double w = cell * corners / 4.0;
      const int self = f.node_at(bx, by);
      if (self >= 0) {
        f.weight[static_cast<std::size_t>(self)] += w;
        continue;
      }
      int best = -1;
      double best_key0 = std::numeric_limits<double>::infinity();
      double best_key1 = std::numeric_limits<double>::infinity();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int k = f.node_at(bx + dx, by + dy);
          if (k < 0) continue;
          const double key0 = std::abs(dx) + std::abs(dy);
          const double key1 = f.bdist[static_cast<std::size_t>(k)];
          if (key0 < best_key0 || (key0 == best_key0 && key1 < best_key1)) {
            best = k;
            best_key0 = key0;
            best_key1 = key1;
          }
        }
      }
      if (best >= 0) f.weight[static_cast<std::size_t>(best)] += w;
    }
  }

  // Stencil depth by repeated relaxation.
  f.depth.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    bool full = true;
    for (int nb : f.nbr[k]) full = full && nb >= 0;
    f.depth[k] = full ? std::numeric_limits<int>::max() : 0;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (f.depth[k] == 0) continue;
      int m = std::numeric_limits<int>::max();
      for (int nb : f.nbr[k]) m = std::min(m, f.depth[static_cast<std::size_t>(nb)]);
      const int d = (m == std::numeric_limits<int>::max()) ? m : m + 1;
      if (d < f.depth[k]) {
        f.depth[k] = d;
        changed = true;
      }
    }
  }
  return f;
}

int axis_interior_count(const DiscFactor& f) {
  int count = 0;
  for (int b = 0; b < f.side(); ++b) {
    if (f.node_at(b, f.half) >= 0) ++count;
  }
  return count;
}

}  // namespace

GridDomain::GridDomain(const DomainSpec& spec, double h) : spec_(spec), h_(h) {
  if (!(h > 0.0)) throw HypothesisError("grid", "spacing h must be positive");
  for (int k = 0; k < spec.dim(); ++k) {
    const double r = spec.radii[static_cast<std::size_t>(k)];
    if (!(r > 0.0)) throw HypothesisError("grid", "radii must be positive");
    factors_.push_back(build_factor(r, h));
    const int count = axis_interior_count(factors_.back());
    if (count < 8) {
      std::ostringstream os;
      os << "grid too coarse: " << count << " interior nodes per axis (need >= 8) for radius "
         << r << " and h = " << h;
      throw HypothesisError("grid", os.str());
    }
  }
  size_ = factors_[0].size();
  if (dim() == 2) size_ *= factors_[1].size();
  weights_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const auto [k0, k1] = split(i);
    double w = factors_[0].weight[static_cast<std::size_t>(k0)];
    if (dim() == 2) w *= factors_[1].weight[static_cast<std::size_t>(k1)];
    weights_[i] = w;
  }
}

CPoint GridDomain::point(std::size_t node) const {
  const auto [k0, k1] = split(node);
  CPoint p;
  p[0] = factors_[0].z[static_cast<std::size_t>(k0)];
  if (dim() == 2) p[1] = factors_[1].z[static_cast<std::size_t>(k1)];
  return p;
}

double GridDomain::weight(std::size_t node) const { return weights_[node]; }

double GridDomain::boundary_dist(std::size_t node) const {
  const auto [k0, k1] = split(node);
  double d = factors_[0].bdist[static_cast<std::size_t>(k0)];
  if (dim() == 2) d = std::min(d, factors_[1].bdist[static_cast<std::size_t>(k1)]);
  return d;
}

int GridDomain::depth(std::size_t node) const {
  const auto [k0, k1] = split(node);
  int d = factors_[0].depth[static_cast<std::size_t>(k0)];
  if (dim() == 2) d = std::min(d, factors_[1].depth[static_cast<std::size_t>(k1)]);
  return d;
}

long GridDomain::neighbor(std::size_t node, int axis, int dir) const {
  const auto [k0, k1] = split(node);
  const int fac = axis / 2;
  const int slot = (axis % 2) * 2 + (dir > 0 ? 0 : 1);
  if (fac == 0) {
    const int nb = factors_[0].nbr[static_cast<std::size_t>(k0)][static_cast<std::size_t>(slot)];
    return nb < 0 ? -1 : static_cast<long>(join(nb, k1));
  }
  const int nb = factors_[1].nbr[static_cast<std::size_t>(k1)][static_cast<std::size_t>(slot)];
  return nb < 0 ? -1 : static_cast<long>(join(k0, nb));
}

double GridDomain::boundary_distance(const CPoint& p) const {
  double d = spec_.radii[0] - std::abs(p[0]);
  if (dim() == 2) d = std::min(d, spec_.radii[1] - std::abs(p[1]));
  return d;
}

double GridDomain::volume() const {
  double v = std::numbers::pi * spec_.radii[0] * spec_.radii[0];
  if (dim() == 2) v *= std::numbers::pi * spec_.radii[1] * spec_.radii[1];
  return v;
}

double GridDomain::diameter() const {
  if (dim() == 1) return 2.0 * spec_.radii[0];
  return 2.0 * std::hypot(spec_.radii[0], spec_.radii[1]);
}

double GridDomain::min_radius() const {
  return dim() == 1 ? spec_.radii[0] : std::min(spec_.radii[0], spec_.radii[1]);
}

std::vector<int> GridDomain::samples_per_axis() const {
  std::vector<int> out;
  for (const auto& f : factors_) {
    out.push_back(f.side());
    out.push_back(f.side());
  }
  return out;
}

std::array<double, 2> GridDomain::box_extent(int axis) const {
  const auto& f = factors_[static_cast<std::size_t>(axis / 2)];
  const double e = (f.half + 0.5) * h_;
  return {-e, e};
}

Field GridDomain::sample(const Evaluator& f) const {
  Field out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = f(point(i));
  return out;
}

Mask GridDomain::depth_mask(int d) const {
  Mask m(size_);
  for (std::size_t i = 0; i < size_; ++i) m[i] = depth(i) >= d ? 1 : 0;
  return m;
}

DomainPtr build_domain(const DomainSpec& spec, double h) {
  return std::make_shared<const GridDomain>(spec, h);
}

cplx integrate(const GridDomain& domain, const Field& field) {
  cplx s = 0.0;
  const auto& w = domain.weights();
  for (std::size_t i = 0; i < field.size(); ++i) s += field[i] * w[i];
  return s;
}

cplx integrate_box(const GridDomain& domain, const Evaluator& f) {
  const double h = domain.h();
  const double cell = std::pow(h, 2 * domain.dim());
  cplx s = 0.0;
  const auto& f0 = domain.factor(0);
  auto coord = [h](const DiscFactor& fac, int b) { return (b - fac.half) * h; };
  if (domain.dim() == 1) {
    for (int by = 0; by < f0.side(); ++by) {
      for (int bx = 0; bx < f0.side(); ++bx) {
        CPoint p;
        p[0] = {coord(f0, bx), coord(f0, by)};
        s += f(p);
      }
    }
    return s * cell;
  }
  const auto& f1 = domain.factor(1);
  for (int b3 = 0; b3 < f1.side(); ++b3) {
    for (int b2 = 0; b2 < f1.side(); ++b2) {
      for (int b1 = 0; b1 < f0.side(); ++b1) {
        for (int b0 = 0; b0 < f0.side(); ++b0) {
          CPoint p;
          p[0] = {coord(f0, b0), coord(f0, b1)};
          p[1] = {coord(f1, b2), coord(f1, b3)};
          s += f(p);
        }
      }
    }
  }
  return s * cell;
}

Mask CutOff::inner_mask() const {
  Mask m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m[i] = values[i] == 1.0 ? 1 : 0;
  return m;
}

Mask CutOff::support_mask() const {
  Mask m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m[i] = values[i] > 0.0 ? 1 : 0;
  return m;
}

namespace {

// Felzenszwalb-Huttenlocher 1-D squared distance transform, in place.
void edt_1d(double* f, std::size_t n, std::size_t stride, std::vector<double>& d,
            std::vector<int>& v, std::vector<double>& zz) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  d.resize(n);
  v.resize(n);
  zz.resize(n + 1);
  int k = -1;
  for (std::size_t q = 0; q < n; ++q) {
    const double fq = f[q * stride];
    if (fq == inf) continue;
    const double qq = static_cast<double>(q);
    while (k >= 0) {
      const double p = v[static_cast<std::size_t>(k)];
      const double s = ((fq + qq * qq) - (f[static_cast<std::size_t>(p) * stride] + p * p)) /
                       (2.0 * qq - 2.0 * p);
      if (s <= zz[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<std::size_t>(k)] = static_cast<int>(q);
    zz[static_cast<std::size_t>(k)] = k == 0 ? -inf : 0.0;
    if (k > 0) {
      const double p = v[static_cast<std::size_t>(k - 1)];
      zz[static_cast<std::size_t>(k)] =
          ((fq + qq * qq) - (f[static_cast<std::size_t>(p) * stride] + p * p)) /
          (2.0 * qq - 2.0 * p);
    }
    zz[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) return;  // nothing finite on this line
  int j = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const double qq = static_cast<double>(q);
    while (zz[static_cast<std::size_t>(j) + 1] < qq) ++j;
    const double p = v[static_cast<std::size_t>(j)];
    d[q] = (qq - p) * (qq - p) + f[static_cast<std::size_t>(p) * stride];
  }
  for (std::size_t q = 0; q < n; ++q) f[q * stride] = d[q];
}

}  // namespace

RealField distance_to_mask(const GridDomain& domain, const Mask& mask) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int nd = 2 * domain.dim();
  std::vector<std::size_t> sides;
  for (int f = 0; f < domain.dim(); ++f) {
    sides.push_back(static_cast<std::size_t>(domain.factor(f).side()));
    sides.push_back(static_cast<std::size_t>(domain.factor(f).side()));
  }
  std::vector<std::size_t> strides(static_cast<std::size_t>(nd), 1);
  for (int a = 1; a < nd; ++a) {
    strides[static_cast<std::size_t>(a)] =
        strides[static_cast<std::size_t>(a - 1)] * sides[static_cast<std::size_t>(a - 1)];
  }
  const std::size_t total = strides.back() * sides.back();
  std::vector<double> box(total, inf);

  auto box_index = [&](std::size_t node) {
    const auto [k0, k1] = domain.split(node);
    const auto& f0 = domain.factor(0);
    std::size_t b = static_cast<std::size_t>(f0.ix[static_cast<std::size_t>(k0)]) +
                    strides[1] * static_cast<std::size_t>(f0.iy[static_cast<std::size_t>(k0)]);
    if (domain.dim() == 2) {
      const auto& f1 = domain.factor(1);
      b += strides[2] * static_cast<std::size_t>(f1.ix[static_cast<std::size_t>(k1)]) +
           strides[3] * static_cast<std::size_t>(f1.iy[static_cast<std::size_t>(k1)]);
    }
    return b;
  };

  bool any = false;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (mask[i]) {
      box[box_index(i)] = 0.0;
      any = true;
    }
  }
  RealField out(domain.size(), inf);
  if (!any) return out;

  std::vector<double> d;
  std::vector<int> v;
  std::vector<double> zz;
  for (int a = 0; a < nd; ++a) {
    const std::size_t n = sides[static_cast<std::size_t>(a)];
    const std::size_t stride = strides[static_cast<std::size_t>(a)];
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % n != 0) continue;  // visit each line once
      edt_1d(box.data() + base, n, stride, d, v, zz);
    }
  }
  const double h = domain.h();
  for (std::size_t i = 0; i < domain.size(); ++i) out[i] = std::sqrt(box[box_index(i)]) * h;
  return out;
}

RealField distance_to_points(const GridDomain& domain, const std::vector<CPoint>& points) {
  RealField out(domain.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const CPoint p = domain.point(i);
    for (const auto& c : points) out[i] = std::min(out[i], distance(p, c));
  }
  return out;
}

CutOff bump(const GridDomain& domain, const CenterSet& centers, double r_inner, double r_outer,
            bool compact) {
  if (!(r_inner > 0.0) || !(r_inner < r_outer)) {
    throw HypothesisError("cutoff", "need 0 < r_inner < r_outer");
  }
  CutOff c;
  c.centers = centers;
  c.r_inner = r_inner;
  c.r_outer = r_outer;
  c.compact = compact;

  RealField dist;
  if (const auto* pts = std::get_if<std::vector<CPoint>>(&centers)) {
    if (compact) {
      for (const auto& p : *pts) {
        if (domain.boundary_distance(p) <= r_outer) {
          throw HypothesisError("cutoff", "r_outer neighbourhood of a centre leaves the domain");
        }
      }
    }
    dist = distance_to_points(domain, *pts);
  } else {
    const auto& mask = std::get<Mask>(centers);
    if (compact) {
      for (std::size_t i = 0; i < domain.size(); ++i) {
        if (mask[i] && domain.boundary_dist(i) <= r_outer) {
          throw HypothesisError("cutoff", "r_outer neighbourhood of the centre set leaves the domain");
        }
      }
    }
    dist = distance_to_mask(domain, mask);
  }

  c.values.resize(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    c.values[i] = radial_cutoff(dist[i], r_inner, r_outer);
  }

  const double h = domain.h();
  double g = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain.depth(i) < 1) continue;
    for (int axis = 0; axis < 2 * domain.dim(); ++axis) {
      const auto p = domain.neighbor(i, axis, +1);
      const auto m = domain.neighbor(i, axis, -1);
      g = std::max(g, std::abs(c.values[static_cast<std::size_t>(p)] -
                               c.values[static_cast<std::size_t>(m)]) /
                          (2.0 * h));
    }
  }
  c.gradient_sup = g;
  return c;
}

void write_grid_csv(std::ostream& os, const GridDomain& domain) {
  const double h = domain.h();
  if (domain.dim() == 1) {
    os << "ix,iy,x,y,inside,weight\n";
    const auto& f = domain.factor(0);
    for (int by = 0; by < f.side(); ++by) {
      for (int bx = 0; bx < f.side(); ++bx) {
        const int k = f.node_at(bx, by);
        os << bx << ',' << by << ',' << (bx - f.half) * h << ',' << (by - f.half) * h << ','
           << (k >= 0 ? 1 : 0) << ',' << (k >= 0 ? f.weight[static_cast<std::size_t>(k)] : 0.0)
           << '\n';
      }
    }
    return;
  }
  os << "ix1,iy1,ix2,iy2,x1,y1,x2,y2,inside,weight\n";
  const auto& f0 = domain.factor(0);
  const auto& f1 = domain.factor(1);
  for (int b3 = 0; b3 < f1.side(); ++b3) {
    for (int b2 = 0; b2 < f1.side(); ++b2) {
      const int k1 = f1.node_at(b2, b3);
      for (int b1 = 0; b1 < f0.side(); ++b1) {
        for (int b0 = 0; b0 < f0.side(); ++b0) {
          const int k0 = f0.node_at(b0, b1);
          const bool in = k0 >= 0 && k1 >= 0;
          const double w = in ? domain.weight(domain.join(k0, k1)) : 0.0;
          os << b0 << ',' << b1 << ',' << b2 << ',' << b3 << ',' << (b0 - f0.half) * h << ','
             << (b1 - f0.half) * h << ',' << (b2 - f1.half) * h << ',' << (b3 - f1.half) * h
             << ',' << (in ? 1 : 0) << ',' << w << '\n';
        }
      }
    }
  }
}

}  // namespace dbk
