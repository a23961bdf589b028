#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "dbk/types.hpp"

namespace dbk {

/// Uniform tensor grid of one closed disc |z| < radius in C, restricted to
/// the nodes that lie strictly inside.
///
/// Node k sits at (ix[k] - half, iy[k] - half) * h. Each inside node carries
/// the quadrature weight of its h x h cell scaled by the fraction of the
/// cell's four corners inside the disc. Cells whose centre falls outside the
/// disc hand their corner fraction to the adjacent inside node, so that
/// every weighted node is a masked-in node.
struct DiscFactor {
  double radius = 1.0;
  double h = 0.0;
  int half = 0;  ///< box indices run over [0, 2*half]

  std::vector<int> ix;
  std::vector<int> iy;
  std::vector<cplx> z;
  std::vector<double> weight;
  std::vector<double> bdist;
  /// Stencil depth: 0 for nodes with a missing axis neighbour, otherwise one
  /// more than the smallest depth among the four axis neighbours.
  std::vector<int> depth;
  /// Axis neighbours in order +x, -x, +y, -y; -1 when outside.
  std::vector<std::array<int, 4>> nbr;
  /// Box index (ix + side*iy) to inside-node index, -1 outside.
  std::vector<int> box_to_node;

  int side() const { return 2 * half + 1; }
  std::size_t size() const { return z.size(); }
  int node_at(int bx, int by) const;
};

enum class DomainKind { Disc, Polydisc };

struct DomainSpec {
  DomainKind kind = DomainKind::Disc;
  std::array<double, 2> radii{1.0, 1.0};

  static DomainSpec disc(double radius) { return {DomainKind::Disc, {radius, 0.0}}; }
  static DomainSpec polydisc(double r1, double r2) {
    return {DomainKind::Polydisc, {r1, r2}};
  }
  int dim() const { return kind == DomainKind::Disc ? 1 : 2; }
};

/// Discretisation of the unit-type model domains (disc in C, polydisc in
/// C^2). Nodes are the product of the factor discs' inside nodes; node index
/// is k0 + N0 * k1. Immutable after construction.
class GridDomain {
public:
  GridDomain(const DomainSpec& spec, double h);

  int dim() const { return spec_.dim(); }
  double h() const { return h_; }
  const DomainSpec& spec() const { return spec_; }
  std::size_t size() const { return size_; }

  const DiscFactor& factor(int k) const { return factors_[static_cast<std::size_t>(k)]; }

  std::array<int, 2> split(std::size_t node) const {
    if (dim() == 1) return {static_cast<int>(node), 0};
    const auto n0 = factors_[0].size();
    return {static_cast<int>(node % n0), static_cast<int>(node / n0)};
  }
  std::size_t join(int k0, int k1) const {
    return static_cast<std::size_t>(k0) + factors_[0].size() * static_cast<std::size_t>(k1);
  }

  CPoint point(std::size_t node) const;
  double weight(std::size_t node) const;
  double boundary_dist(std::size_t node) const;
  int depth(std::size_t node) const;

  /// Neighbour along real axis `axis` (x1, y1, x2, y2) in direction `dir`
  /// (+1 or -1); returns -1 if that node is outside.
  long neighbor(std::size_t node, int axis, int dir) const;

  /// Analytic distance from an arbitrary point to the boundary; negative
  /// outside.
  double boundary_distance(const CPoint& p) const;
  bool contains(const CPoint& p) const { return boundary_distance(p) > 0.0; }

  double volume() const;
  double diameter() const;
  double min_radius() const;

  /// Per real axis: number of samples and [lo, hi] extent of the cell box.
  std::vector<int> samples_per_axis() const;
  std::array<double, 2> box_extent(int axis) const;

  const std::vector<double>& weights() const { return weights_; }

  /// Samples an evaluator at every node.
  Field sample(const Evaluator& f) const;

  /// Nodes whose depth is at least `d`.
  Mask depth_mask(int d) const;

private:
  DomainSpec spec_;
  double h_;
  std::vector<DiscFactor> factors_;
  std::size_t size_ = 0;
  std::vector<double> weights_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

/// Builds the grid; rejects h <= 0 and grids with fewer than 8 interior
/// nodes along an axis.
DomainPtr build_domain(const DomainSpec& spec, double h);

/// Sum of field * quadrature weight over the masked-in nodes.
cplx integrate(const GridDomain& domain, const Field& field);

/// Midpoint rule over the full bounding box of cells, ignoring the mask.
cplx integrate_box(const GridDomain& domain, const Evaluator& f);

/// The set a cut-off is built around: explicit points, or a node mask (for
/// example a sublevel set).
using CenterSet = std::variant<std::vector<CPoint>, Mask>;

struct CutOff {
  RealField values;
  CenterSet centers;
  double r_inner = 0.0;
  double r_outer = 0.0;
  bool compact = false;
  /// Largest centred-difference partial derivative over nodes with depth >= 1.
  double gradient_sup = 0.0;

  /// chi == 1 exactly.
  Mask inner_mask() const;
  /// chi > 0.
  Mask support_mask() const;
};

/// Smooth cut-off equal to 1 within r_inner of the centre set and 0 beyond
/// r_outer. With `compact` set, rejects centre sets whose r_outer
/// neighbourhood leaves the domain.
CutOff bump(const GridDomain& domain, const CenterSet& centers, double r_inner,
            double r_outer, bool compact = true);

/// Euclidean distance from every node to the nearest node of `mask`
/// (infinity if the mask is empty).
RealField distance_to_mask(const GridDomain& domain, const Mask& mask);

/// Euclidean distance from every node to the nearest of `points`.
RealField distance_to_points(const GridDomain& domain, const std::vector<CPoint>& points);

/// Writes one row per box node: index tuple, real coordinates, inside flag,
/// quadrature weight.
void write_grid_csv(std::ostream& os, const GridDomain& domain);

}  // namespace dbk
