#pragma once

#include <iosfwd>
#include <vector>

#include "dbk/grid.hpp"
#include "dbk/holo_map.hpp"
#include "dbk/multi_index.hpp"

namespace dbk {

/// A node-sampled element of Lambda^r V (x) (0,s)-forms on a grid:
///   sum_{|J| = r, |K| = s} W_{J,K} e_J (x) dzbar_K.
///
/// Coefficients are stored as one Field per (J, K) block, J ranging over
/// subsets(m, r) and K over subsets(n, s). Forms of degree r > m or s > n
/// hold no blocks and read as zero everywhere.
///
/// `collar` records how many stencil layers have been consumed: values are
/// meaningful on nodes of depth >= collar.
class KoszulForm {
public:
  KoszulForm() = default;
  KoszulForm(DomainPtr domain, int m, int r, int s);

  /// Degree (0, 0) form with the given values.
  static KoszulForm scalar(DomainPtr domain, int m, Field values);
  /// e_J (x) values dzbar_K.
  static KoszulForm basis(DomainPtr domain, int m, unsigned J, unsigned K, Field values);

  const DomainPtr& domain() const { return domain_; }
  int m() const { return m_; }
  int n() const { return domain_->dim(); }
  int r() const { return r_; }
  int s() const { return s_; }
  int collar() const { return collar_; }
  void set_collar(int c) { collar_ = c; }

  /// True when the degree lies outside 0..m x 0..n (the canonical zero form).
  bool truncated() const { return blocks_.empty(); }

  const std::vector<unsigned>& J_list() const;
  const std::vector<unsigned>& K_list() const;
  std::size_t num_J() const { return J_list().size(); }
  std::size_t num_K() const { return K_list().size(); }

  Field& block(std::size_t jr, std::size_t kr) { return blocks_[jr * num_K() + kr]; }
  const Field& block(std::size_t jr, std::size_t kr) const { return blocks_[jr * num_K() + kr]; }

  /// Coefficient W_{J,K}; the zero field for any index outside the valid
  /// ranges or of the wrong length.
  const Field& coeff(unsigned J, unsigned K) const;
  Field& coeff_ref(unsigned J, unsigned K);
  cplx at(unsigned J, unsigned K, std::size_t node) const { return coeff(J, K)[node]; }

  double sup() const;
  double sup(const Mask& where) const;
  /// Sup over the nodes where the form is valid (depth >= collar).
  double sup_valid() const;
  Mask valid_mask() const { return domain_->depth_mask(collar_); }
  /// Nodes where some coefficient is nonzero.
  Mask support_mask() const;

  KoszulForm& operator+=(const KoszulForm& o);
  KoszulForm& operator-=(const KoszulForm& o);
  KoszulForm& operator*=(cplx a);
  /// Pointwise multiplication of every coefficient.
  KoszulForm& multiply(const RealField& chi);
  KoszulForm& multiply(const Field& chi);
  /// Zeroes every coefficient outside `keep`.
  KoszulForm& restrict_to(const Mask& keep);

  friend KoszulForm operator+(KoszulForm a, const KoszulForm& b) { return a += b; }
  friend KoszulForm operator-(KoszulForm a, const KoszulForm& b) { return a -= b; }
  friend KoszulForm operator*(cplx a, KoszulForm b) { return b *= a; }

private:
  void check_compatible(const KoszulForm& o) const;

  DomainPtr domain_;
  int m_ = 0;
  int r_ = 0;
  int s_ = 0;
  int collar_ = 0;
  std::vector<Field> blocks_;
};

/// A shared read-only zero field of the given length.
const Field& zero_field(std::size_t size);

/// Exterior product; the sign of (J, K) (J', K') is the shuffle sign of
/// J, J' times the shuffle sign of K, K'.
KoszulForm wedge(const KoszulForm& a, const KoszulForm& b);

/// Sign rule used when contracting; `reversed` counts the indices above j
/// instead of below and exists only to exercise the identity checks.
enum class ContractSign { standard, reversed };

/// T_f: (r, s) -> (r-1, s),
///   (T_f W)_{J', K} = sum_{j not in J'} (-1)^{#{i in J' : i < j}} f_j W_{J' + j, K}.
KoszulForm koszul_contract(const HoloMap& f, const KoszulForm& w,
                           ContractSign sign = ContractSign::standard);

/// Discrete dbar: (r, s) -> (r, s+1) with centred Wirtinger differences;
/// the output collar grows by one.
KoszulForm dbar_apply(const KoszulForm& w);

/// max over (J, K) and nodes in `where` of |a - b|.
double sup_difference(const KoszulForm& a, const KoszulForm& b, const Mask& where);

/// Node of the largest |a - b| over `where`, with the offending (J, K).
struct DefectLocation {
  double value = 0.0;
  std::size_t node = 0;
  unsigned J = 0;
  unsigned K = 0;
};
DefectLocation locate_difference(const KoszulForm& a, const KoszulForm& b, const Mask& where);

/// Rows: J, K, node index tuple, re, im.
void write_form_csv(std::ostream& os, const KoszulForm& w);

}  // namespace dbk

namespace dbk {

/// Overwrites coefficients on nodes of depth < collar with the value of an
/// adjacent node one layer deeper, layer by layer, and resets the collar to
/// zero. Used before integrating data that does not vanish at the boundary.
void extend_from_interior(KoszulForm& w);

}  // namespace dbk
