#include "dbk/app/suite.hpp"

#include <algorithm>
#include <cmath>

#include "dbk/holo_map.hpp"
#include "dbk/multi_index.hpp"

namespace dbk::app {
namespace {

std::vector<Evaluator> dictionary(int dim) {
  if (dim == 1) {
    return {
        [](const CPoint&) { return cplx(1.0); },
        [](const CPoint& p) { return p[0]; },
        [](const CPoint& p) { return std::conj(p[0]); },
        [](const CPoint& p) { return cplx(std::norm(p[0])); },
        [](const CPoint& p) { return std::conj(p[0] * p[0]); },
        [](const CPoint& p) { return std::exp(0.5 * std::conj(p[0]) + 0.3 * p[0]); },
        [](const CPoint& p) { return cplx(std::sin(p[0].real()) * std::cos(p[0].imag())); },
    };
  }
  return {
      [](const CPoint&) { return cplx(1.0); },
      [](const CPoint& p) { return p[0]; },
      [](const CPoint& p) { return std::conj(p[1]); },
      [](const CPoint& p) { return p[0] * std::conj(p[1]); },
      [](const CPoint& p) { return cplx(std::norm(p[0]) + std::norm(p[1])); },
      [](const CPoint& p) { return std::exp(0.5 * (std::conj(p[0]) + p[1])); },
      [](const CPoint& p) { return cplx(std::sin(p[0].real()) * std::cos(p[1].imag())); },
      [](const CPoint& p) { return std::conj(p[0]) * p[1] * p[1]; },
  };
}

double max_sup(const HoloMap& f) {
  double s = 0.0;
  for (int j = 0; j < f.m(); ++j) s = std::max(s, f.sup_bound(j));
  return s;
}

/// Index of the largest |x| over `where`.
std::size_t argmax_norm(const Field& x, const Mask& where) {
  std::size_t best = 0;
  double value = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (where[i] && std::norm(x[i]) > value) {
      value = std::norm(x[i]);
      best = i;
    }
  }
  return best;
}

/// Worst |L - R1 - sign R2| over the nodes of `where`; the three forms share
/// one degree or are the zero form.
DefectLocation leibniz_defect(const KoszulForm& L, const KoszulForm& R1, const KoszulForm& R2,
                              double sign, const Mask& where) {
  DefectLocation loc;
  const KoszulForm* ref = !L.truncated() ? &L : !R1.truncated() ? &R1 : !R2.truncated() ? &R2 : nullptr;
  if (!ref) return loc;
  double best = -1.0;
  unsigned bestJ = 0;
  unsigned bestK = 0;
  for (unsigned J : ref->J_list()) {
    for (unsigned K : ref->K_list()) {
      const Field& x = L.coeff(J, K);
      const Field& y = R1.coeff(J, K);
      const Field& z = R2.coeff(J, K);
      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      const std::size_t n = where.size();
      std::size_t i = 0;
      for (; i + 4 <= n; i += 4) {
        for (std::size_t k = 0; k < 4; ++k) {
          const double d = std::norm(x[i + k] - y[i + k] - sign * z[i + k]);
          acc[k] = std::max(acc[k], where[i + k] ? d : 0.0);
        }
      }
      for (; i < n; ++i) acc[0] = std::max(acc[0], where[i] ? std::norm(x[i] - y[i] - sign * z[i]) : 0.0);
      const double d = std::max(std::max(acc[0], acc[1]), std::max(acc[2], acc[3]));
      if (d > best) {
        best = d;
        bestJ = J;
        bestK = K;
      }
    }
  }
  const Field& x = L.coeff(bestJ, bestK);
  const Field& y = R1.coeff(bestJ, bestK);
  const Field& z = R2.coeff(bestJ, bestK);
  for (std::size_t i = 0; i < where.size(); ++i) {
    const double d = std::norm(x[i] - y[i] - sign * z[i]);
    if (where[i] && d >= best) {
      loc = {std::sqrt(d), i, bestJ, bestK};
      break;
    }
  }
  return loc;
}

/// Largest coefficient of w over `where` (the distance from w to zero).
DefectLocation locate_sup(const KoszulForm& w, const Mask& where) {
  DefectLocation loc;
  if (w.truncated()) return loc;
  for (unsigned J : w.J_list()) {
    for (unsigned K : w.K_list()) {
      const Field& x = w.coeff(J, K);
      const double d = sup_norm(x, where);
      if (d > loc.value) loc = {d, argmax_norm(x, where), J, K};
    }
  }
  return loc;
}

constexpr int kBidiscPartners = 5;

struct Tracker {
  IdentityCheck check;
  double worst_ratio = -1.0;

  void record(const DefectLocation& loc, double scale, double bound, const GridDomain& dom) {
    ++check.samples;
    const double ratio = bound > 0.0 ? loc.value / bound : (loc.value > 0.0 ? INFINITY : 0.0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      check.defect = loc.value;
      check.scale = scale;
      check.bound = bound;
      check.where = dom.point(loc.node);
      check.J = loc.J;
      check.K = loc.K;
    }
    if (!(loc.value <= bound)) check.pass = false;
  }
};

std::vector<std::pair<int, int>> degrees(int m, int n) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r <= m; ++r)
    for (int s = 0; s <= n; ++s) out.emplace_back(r, s);
  return out;
}

}  // namespace

RandomForms::RandomForms(DomainPtr domain, std::uint64_t seed)
    : domain_(std::move(domain)), rng_(seed) {
  for (const auto& phi : dictionary(domain_->dim())) dictionary_.push_back(domain_->sample(phi));
}

KoszulForm RandomForms::draw(int m, int r, int s) {
  KoszulForm w(domain_, m, r, s);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, dictionary_.size() - 1);
  for (std::size_t j = 0; j < w.num_J(); ++j) {
    for (std::size_t k = 0; k < w.num_K(); ++k) {
      const cplx c1(coef(rng_), coef(rng_));
      const cplx c2(coef(rng_), coef(rng_));
      const Field& a = dictionary_[pick(rng_)];
      const Field& b = dictionary_[pick(rng_)];
      Field& out = w.block(j, k);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = c1 * a[i] + c2 * b[i];
    }
  }
  return w;
}

std::string suite_map(int dim, int m) {
  static const char* disc[] = {"z", "z,1-z", "z,z^2,1-z"};
  static const char* bidisc[] = {"z1", "z1,z2", "z1,z2,1-z1"};
  return (dim == 1 ? disc : bidisc)[m - 1];
}

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(),
                                                [](const IdentityCheck& c) { return !c.pass; })) +
         (orders_pass ? 0u : 1u);
}

std::vector<IdentityCheck> run_identities(const DomainPtr& domain, const SuiteOptions& options) {
  const GridDomain& dom = *domain;
  const int n = dom.dim();
  const std::string dname = n == 1 ? "disc" : "bidisc";
  const Mask all(dom.size(), 1);
  const Mask interior1 = dom.depth_mask(1);
  const Mask interior2 = dom.depth_mask(2);
  RandomForms gen(domain, options.seed);
  std::vector<IdentityCheck> out;

  for (int m : options.m_values) {
    const HoloMap f = make_map(suite_map(n, m), domain);
    const double fsup = max_sup(f);
    // Leibniz partners: on the disc one per degree, on the bidisc a pool of
    // degree (1, 0) forms, each with its contraction precomputed.
    struct Partner {
      KoszulForm b;
      KoszulForm Tb;
      double sup = 0.0;
    };
    std::vector<Partner> partners;
    if (n == 1) {
      for (const auto& [rb, sb] : degrees(m, n)) partners.push_back({gen.draw(m, rb, sb), {}, 0.0});
    } else {
      for (int k = 0; k < kBidiscPartners; ++k) partners.push_back({gen.draw(m, 1, 0), {}, 0.0});
    }
    for (auto& p : partners) {
      p.Tb = koszul_contract(f, p.b, options.sign);
      p.sup = p.b.sup();
    }

    for (const auto& [r, s] : degrees(m, n)) {
      auto tracker = [&](const char* name) {
        Tracker t;
        t.check.domain = dname;
        t.check.h = dom.h();
        t.check.m = m;
        t.check.r = r;
        t.check.s = s;
        t.check.identity = name;
        return t;
      };
      Tracker tftf = tracker("tf_tf");
      Tracker leib = tracker("leibniz");
      Tracker dd = tracker("dbar_dbar");
      Tracker comm = tracker("commutator");

      for (int k = 0; k < options.forms; ++k) {
        const KoszulForm a = gen.draw(m, r, s);
        const double asup = a.sup();

        const KoszulForm Ta = koszul_contract(f, a, options.sign);
        const KoszulForm TTa = koszul_contract(f, Ta, options.sign);
        const double s1 = fsup * fsup * asup;
        tftf.record(locate_sup(TTa, all), s1, options.tol_identity * s1, dom);

        const Partner& p = partners[static_cast<std::size_t>(k) % partners.size()];
        const KoszulForm lhs = koszul_contract(f, wedge(a, p.b), options.sign);
        const KoszulForm r1 = wedge(Ta, p.b);
        const KoszulForm r2 = wedge(a, p.Tb);
        const double s2 = fsup * asup * p.sup;
        const double sign = r % 2 == 0 ? 1.0 : -1.0;
        leib.record(leibniz_defect(lhs, r1, r2, sign, all), s2, options.tol_identity * s2, dom);

        // dbar dbar a has degree s + 2 and is only stored when s + 2 <= n.
        const bool need_dd = s + 2 <= n;
        const bool need_comm = n == 1 || options.bidisc_commutator;
        if (!need_dd && !need_comm) continue;
        const KoszulForm Da = dbar_apply(a);
        if (need_dd) dd.record(locate_sup(dbar_apply(Da), interior2), 1.0, options.tol_identity, dom);
        if (need_comm) {
          const KoszulForm DTa = dbar_apply(Ta);
          const KoszulForm TDa = koszul_contract(f, Da, options.sign);
          const double s3 = asup * (1.0 + fsup);
          const double h = dom.h();
          comm.record(locate_difference(DTa, TDa, interior1), s3, options.tol_commutator * h * h * s3,
                      dom);
        }
      }
      for (Tracker* t : {&tftf, &leib, &dd, &comm})
        if (t->check.samples > 0) out.push_back(t->check);
    }
  }
  return out;
}

std::vector<OrderRow> commutator_orders(const SuiteOptions& options) {
  std::vector<OrderRow> rows;
  for (int m : options.m_values) {
    double prev_h = 0.0;
    double prev_d = 0.0;
    for (double h : options.study_h) {
      const DomainPtr domain = build_domain(DomainSpec::disc(1.0), h);
      const HoloMap f = make_map(suite_map(1, m), domain);
      const Mask interior1 = domain->depth_mask(1);
      RandomForms gen(domain, options.seed);
      double worst = 0.0;
      double scale = 0.0;
      for (const auto& [r, s] : degrees(m, 1)) {
        for (int k = 0; k < options.forms; ++k) {
          const KoszulForm a = gen.draw(m, r, s);
          if (r == 0) continue;
          const KoszulForm DTa = dbar_apply(koszul_contract(f, a, options.sign));
          const KoszulForm TDa = koszul_contract(f, dbar_apply(a), options.sign);
          worst = std::max(worst, sup_difference(DTa, TDa, interior1));
          scale = std::max(scale, a.sup() * (1.0 + f.sup_bound()));
        }
      }
      OrderRow row{m, h, worst, 0.0, scale, worst <= options.tol_identity * scale};
      if (prev_h > 0.0 && !row.exact) row.order = std::log(prev_d / worst) / std::log(prev_h / h);
      rows.push_back(row);
      prev_h = h;
      prev_d = worst;
    }
  }
  return rows;
}

SuiteReport run_suite(double h_disc, double h_bidisc, const SuiteOptions& options) {
  SuiteReport report;
  for (const DomainSpec& spec : {DomainSpec::disc(1.0), DomainSpec::polydisc(1.0, 1.0)}) {
    const DomainPtr domain = build_domain(spec, spec.dim() == 1 ? h_disc : h_bidisc);
    auto checks = run_identities(domain, options);
    report.checks.insert(report.checks.end(), checks.begin(), checks.end());
  }
  report.orders = commutator_orders(options);
  report.min_observed_order = INFINITY;
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    const auto& row = report.orders[i];
    // A defect that grows from roundoff to a discretisation error fails.
    if (i > 0 && report.orders[i - 1].m == row.m && report.orders[i - 1].exact && !row.exact) {
      report.orders_pass = false;
    }
    if (row.order == 0.0) continue;
    report.min_observed_order = std::min(report.min_observed_order, row.order);
    if (!(row.order >= options.min_order)) report.orders_pass = false;
  }
  report.pass = report.failures() == 0;
  return report;
}

}  // namespace dbk::app
