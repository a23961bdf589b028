#include "dbk/forms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

#include "dbk/error.hpp"
#include "dbk/stencil.hpp"

namespace dbk {

const Field& zero_field(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Field>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[size];
  if (!slot) slot = std::make_unique<Field>(size, cplx(0.0));
  return *slot;
}

KoszulForm::KoszulForm(DomainPtr domain, int m, int r, int s)
    : domain_(std::move(domain)), m_(m), r_(r), s_(s) {
  if (!domain_) throw DomainMismatch("form without a domain");
  if (m < 1 || m > 8) throw DomainMismatch("Koszul dimension m must lie in 1..8");
  if (r >= 0 && r <= m && s >= 0 && s <= n()) {
    const std::size_t count = num_J() * num_K();
    blocks_.reserve(count);
    for (std::size_t b = 0; b < count; ++b) blocks_.emplace_back(domain_->size(), cplx(0.0));
  }
}

KoszulForm KoszulForm::scalar(DomainPtr domain, int m, Field values) {
  return basis(std::move(domain), m, 0u, 0u, std::move(values));
}

KoszulForm KoszulForm::basis(DomainPtr domain, int m, unsigned J, unsigned K, Field values) {
  KoszulForm w(std::move(domain), m, popcount(J), popcount(K));
  if (values.size() != w.domain()->size()) throw DomainMismatch("field length does not match grid");
  if (!w.truncated()) w.coeff_ref(J, K) = std::move(values);
  return w;
}

const std::vector<unsigned>& KoszulForm::J_list() const { return subsets(m_, r_); }
const std::vector<unsigned>& KoszulForm::K_list() const { return subsets(n(), s_); }

const Field& KoszulForm::coeff(unsigned J, unsigned K) const {
  if (truncated() || popcount(J) != r_ || popcount(K) != s_ || (J >> m_) != 0 || (K >> n()) != 0) {
    return zero_field(domain_->size());
  }
  return block(static_cast<std::size_t>(subset_rank(J, m_)),
               static_cast<std::size_t>(subset_rank(K, n())));
}

Field& KoszulForm::coeff_ref(unsigned J, unsigned K) {
  if (truncated() || popcount(J) != r_ || popcount(K) != s_ || (J >> m_) != 0 || (K >> n()) != 0) {
    throw Error("coefficient index outside the form's degree");
  }
  return block(static_cast<std::size_t>(subset_rank(J, m_)),
               static_cast<std::size_t>(subset_rank(K, n())));
}

double KoszulForm::sup() const {
  double s = 0.0;
  for (const auto& b : blocks_) s = std::max(s, sup_norm(b));
  return s;
}

double KoszulForm::sup(const Mask& where) const {
  double s = 0.0;
  for (const auto& b : blocks_) s = std::max(s, sup_norm(b, where));
  return s;
}

double KoszulForm::sup_valid() const {
  if (collar_ == 0) return sup();
  return sup(valid_mask());
}

Mask KoszulForm::support_mask() const {
  Mask m(domain_->size(), 0);
  for (const auto& b : blocks_) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] != cplx(0.0)) m[i] = 1;
    }
  }
  return m;
}

void KoszulForm::check_compatible(const KoszulForm& o) const {
  if (domain_ != o.domain_) throw DomainMismatch("forms live on different grids");
  if (m_ != o.m_ || r_ != o.r_ || s_ != o.s_) throw DomainMismatch("forms have different degrees");
}

KoszulForm& KoszulForm::operator+=(const KoszulForm& o) {
  check_compatible(o);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto& x = blocks_[b];
    const auto& y = o.blocks_[b];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  }
  collar_ = std::max(collar_, o.collar_);
  return *this;
}

KoszulForm& KoszulForm::operator-=(const KoszulForm& o) {
  check_compatible(o);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto& x = blocks_[b];
    const auto& y = o.blocks_[b];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  }
  collar_ = std::max(collar_, o.collar_);
  return *this;
}

KoszulForm& KoszulForm::operator*=(cplx a) {
  for (auto& b : blocks_)
    for (auto& v : b) v *= a;
  return *this;
}

KoszulForm& KoszulForm::multiply(const RealField& chi) {
  for (auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= chi[i];
  return *this;
}

KoszulForm& KoszulForm::multiply(const Field& chi) {
  for (auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= chi[i];
  return *this;
}

KoszulForm& KoszulForm::restrict_to(const Mask& keep) {
  for (auto& b : blocks_)
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!keep[i]) b[i] = 0.0;
  return *this;
}

namespace {

struct ProductTerm {
  double sign;
  const cplx* x;
  const cplx* y;
};

/// out = sum_t sign_t x_t y_t in one pass over memory, accumulating in
/// cache-sized chunks.
void sum_products(const std::vector<ProductTerm>& terms, Field& out) {
  constexpr std::size_t kChunk = 512;
  cplx acc[kChunk];
  const std::size_t size = out.size();
  if (terms.size() == 1) {
    const auto& t = terms.front();
    for (std::size_t i = 0; i < size; ++i) out[i] = t.sign * (t.x[i] * t.y[i]);
    return;
  }
  for (std::size_t lo = 0; lo < size; lo += kChunk) {
    const std::size_t len = std::min(kChunk, size - lo);
    std::fill_n(acc, len, cplx(0.0));
    for (const auto& t : terms) {
      const cplx* x = t.x + lo;
      const cplx* y = t.y + lo;
      for (std::size_t i = 0; i < len; ++i) acc[i] += t.sign * (x[i] * y[i]);
    }
    std::copy_n(acc, len, out.data() + lo);
  }
}

}  // namespace

KoszulForm wedge(const KoszulForm& a, const KoszulForm& b) {
  if (a.domain() != b.domain()) throw DomainMismatch("wedge of forms on different grids");
  if (a.m() != b.m()) throw DomainMismatch("wedge of forms with different m");
  KoszulForm out(a.domain(), a.m(), a.r() + b.r(), a.s() + b.s());
  out.set_collar(std::max(a.collar(), b.collar()));
  if (out.truncated() || a.truncated() || b.truncated()) return out;
  const int m = a.m();
  const int n = a.n();
  const auto& JA = a.J_list();
  const auto& KA = a.K_list();
  const auto& JB = b.J_list();
  const auto& KB = b.K_list();
  std::vector<std::vector<ProductTerm>> terms(out.num_J() * out.num_K());
  for (std::size_t ja = 0; ja < JA.size(); ++ja) {
    for (std::size_t jb = 0; jb < JB.size(); ++jb) {
      const int sj = shuffle_sign(JA[ja], JB[jb]);
      if (sj == 0) continue;
      const auto jo = static_cast<std::size_t>(subset_rank(JA[ja] | JB[jb], m));
      for (std::size_t ka = 0; ka < KA.size(); ++ka) {
        for (std::size_t kb = 0; kb < KB.size(); ++kb) {
          const int sk = shuffle_sign(KA[ka], KB[kb]);
          if (sk == 0) continue;
          const auto ko = static_cast<std::size_t>(subset_rank(KA[ka] | KB[kb], n));
          terms[jo * out.num_K() + ko].push_back(
              {static_cast<double>(sj * sk), a.block(ja, ka).data(), b.block(jb, kb).data()});
        }
      }
    }
  }
  for (std::size_t jo = 0; jo < out.num_J(); ++jo)
    for (std::size_t ko = 0; ko < out.num_K(); ++ko)
      sum_products(terms[jo * out.num_K() + ko], out.block(jo, ko));
  return out;
}

KoszulForm koszul_contract(const HoloMap& f, const KoszulForm& w, ContractSign sign) {
  if (f.domain() != w.domain()) throw DomainMismatch("map and form live on different grids");
  if (f.m() != w.m()) throw DomainMismatch("map has m components but the form expects another m");
  KoszulForm out(w.domain(), w.m(), w.r() - 1, w.s());
  out.set_collar(w.collar());
  if (w.r() == 0 || w.truncated() || out.truncated()) {
    // T_f vanishes on degree (0, s); an out-of-range result is the zero form.
    if (w.r() == 0) return KoszulForm(w.domain(), w.m(), -1, w.s());
    return out;
  }
  const int m = w.m();
  const auto& Jout = out.J_list();
  std::vector<ProductTerm> terms;
  for (std::size_t jo = 0; jo < Jout.size(); ++jo) {
    const unsigned Jp = Jout[jo];
    for (std::size_t k = 0; k < out.num_K(); ++k) {
      terms.clear();
      for (int j = 1; j <= m; ++j) {
        if ((Jp >> (j - 1)) & 1u) continue;
        int sg = insertion_sign(j, Jp);
        if (sign == ContractSign::reversed) {
          const unsigned above = Jp & ~((1u << j) - 1u);
          sg = popcount(above) % 2 == 0 ? 1 : -1;
        }
        const auto jin = static_cast<std::size_t>(subset_rank(Jp | (1u << (j - 1)), m));
        terms.push_back({static_cast<double>(sg), f.samples(j - 1).data(), w.block(jin, k).data()});
      }
      sum_products(terms, out.block(jo, k));
    }
  }
  return out;
}

KoszulForm dbar_apply(const KoszulForm& w) {
  KoszulForm out(w.domain(), w.m(), w.r(), w.s() + 1);
  out.set_collar(w.collar() + 1);
  if (out.truncated() || w.truncated()) return out;
  const auto& dom = *w.domain();
  const int n = w.n();
  const auto& Kin = w.K_list();
  for (std::size_t j = 0; j < w.num_J(); ++j) {
    for (std::size_t kr = 0; kr < Kin.size(); ++kr) {
      const unsigned K = Kin[kr];
      for (int k = 1; k <= n; ++k) {
        if ((K >> (k - 1)) & 1u) continue;
        const auto ko = static_cast<std::size_t>(subset_rank(K | (1u << (k - 1)), n));
        add_wirtinger_dbar(dom, w.block(j, kr), k - 1, static_cast<double>(insertion_sign(k, K)),
                           out.block(j, ko));
      }
    }
  }
  return out;
}

namespace {

template <typename Visit>
void visit_difference(const KoszulForm& a, const KoszulForm& b, const Mask& where, Visit&& visit) {
  if (a.domain() != b.domain()) throw DomainMismatch("comparing forms on different grids");
  const bool at = a.truncated();
  const bool bt = b.truncated();
  if (at && bt) return;
  if (!at && !bt && (a.r() != b.r() || a.s() != b.s() || a.m() != b.m())) {
    throw DomainMismatch("comparing forms of different degrees");
  }
  const KoszulForm& ref = at ? b : a;
  for (unsigned J : ref.J_list()) {
    for (unsigned K : ref.K_list()) {
      const Field& x = a.coeff(J, K);
      const Field& y = b.coeff(J, K);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (where[i]) visit(std::norm(x[i] - y[i]), i, J, K);
      }
    }
  }
}

}  // namespace

double sup_difference(const KoszulForm& a, const KoszulForm& b, const Mask& where) {
  double s = 0.0;
  visit_difference(a, b, where, [&](double d, std::size_t, unsigned, unsigned) { s = std::max(s, d); });
  return std::sqrt(s);
}

DefectLocation locate_difference(const KoszulForm& a, const KoszulForm& b, const Mask& where) {
  DefectLocation loc;
  visit_difference(a, b, where, [&](double d, std::size_t i, unsigned J, unsigned K) {
    if (d > loc.value) loc = {d, i, J, K};
  });
  loc.value = std::sqrt(loc.value);
  return loc;
}

void write_form_csv(std::ostream& os, const KoszulForm& w) {
  const auto& dom = *w.domain();
  os << "J,K," << (dom.dim() == 1 ? "ix,iy" : "ix1,iy1,ix2,iy2") << ",re,im\n";
  if (w.truncated()) return;
  os.precision(17);
  for (unsigned J : w.J_list()) {
    const std::string js = MultiIndex(J, w.m()).str();
    for (unsigned K : w.K_list()) {
      const std::string ks = MultiIndex(K, w.n()).str();
      const Field& c = w.coeff(J, K);
      for (std::size_t i = 0; i < dom.size(); ++i) {
        const auto [k0, k1] = dom.split(i);
        const auto& f0 = dom.factor(0);
        os << js << ',' << ks << ',' << f0.ix[static_cast<std::size_t>(k0)] << ','
           << f0.iy[static_cast<std::size_t>(k0)];
        if (dom.dim() == 2) {
          const auto& f1 = dom.factor(1);
          os << ',' << f1.ix[static_cast<std::size_t>(k1)] << ',' << f1.iy[static_cast<std::size_t>(k1)];
        }
        os << ',' << c[i].real() << ',' << c[i].imag() << '\n';
      }
    }
  }
}

}  // namespace dbk

namespace dbk {

void extend_from_interior(KoszulForm& w) {
  if (w.truncated() || w.collar() == 0) {
    w.set_collar(0);
    return;
  }
  const auto& dom = *w.domain();
  for (int layer = w.collar() - 1; layer >= 0; --layer) {
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (dom.depth(i) != layer) continue;
      // Prefer the neighbour with the largest depth; ties by axis order.
      long best = -1;
      int best_depth = layer;
      for (int axis = 0; axis < 2 * dom.dim(); ++axis) {
        for (int dir : {+1, -1}) {
          const long nb = dom.neighbor(i, axis, dir);
          if (nb >= 0 && dom.depth(static_cast<std::size_t>(nb)) > best_depth) {
            best = nb;
            best_depth = dom.depth(static_cast<std::size_t>(nb));
          }
        }
      }
      if (best < 0) continue;
      for (std::size_t j = 0; j < w.num_J(); ++j) {
        for (std::size_t k = 0; k < w.num_K(); ++k) {
          Field& c = w.block(j, k);
          c[i] = c[static_cast<std::size_t>(best)];
        }
      }
    }
  }
  w.set_collar(0);
}

}  // namespace dbk
