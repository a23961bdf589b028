#include "dbk/app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "dbk/app/fields.hpp"
#include "dbk/app/suite.hpp"
#include "dbk/approx.hpp"
#include "dbk/bergman.hpp"
#include "dbk/csv.hpp"
#include "dbk/error.hpp"
#include "dbk/koszul.hpp"
#include "dbk/multi_index.hpp"

namespace dbk::app {
namespace {

using csv::num;
namespace fs = std::filesystem;

class Output {
public:
  explicit Output(const RunConfig& cfg) : dir_(cfg.out) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  void write(const std::string& name, const csv::Table& table) const {
    if (!enabled()) return;
    std::ofstream os(fs::path(dir_) / name);
    table.write(os);
  }

  std::ofstream open(const std::string& name) const { return std::ofstream(fs::path(dir_) / name); }

  void config(const RunConfig& cfg) const {
    if (!enabled()) return;
    std::ofstream os(fs::path(dir_) / "config.txt");
    write_config(os, cfg);
  }

private:
  std::string dir_;
};

std::vector<std::string> point_header(int dim) {
  if (dim == 1) return {"x", "y"};
  return {"x1", "y1", "x2", "y2"};
}

void add_point(csv::Table& t, const CPoint& p, int dim) {
  t.add(p[0].real()).add(p[0].imag());
  if (dim == 2) t.add(p[1].real()).add(p[1].imag());
}

std::string point_str(const CPoint& p, int dim) {
  std::ostringstream os;
  os << '(' << num(p[0].real()) << ", " << num(p[0].imag());
  if (dim == 2) os << ", " << num(p[1].real()) << ", " << num(p[1].imag());
  os << ')';
  return os.str();
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string map_or(const RunConfig& cfg, const std::string& fallback) {
  return cfg.map.value_or(fallback);
}

DomainPtr domain_for(const RunConfig& cfg, double default_h) {
  return build_domain(cfg.spec(), cfg.h_or(default_h));
}

}  // namespace

void tune_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

// ---------------------------------------------------------------------------

int cmd_verify_koszul(const RunConfig& cfg, std::ostream& out) {
  const Output files(cfg);
  files.config(cfg);
  SuiteOptions opt;
  opt.m_values = cfg.m_values;
  opt.forms = cfg.forms;
  opt.seed = cfg.seed;
  opt.sign = cfg.contract_sign();
  opt.tol_identity = cfg.tol_identity;
  opt.tol_commutator = cfg.tol_commutator;
  opt.min_order = cfg.min_order;
  opt.study_h.clear();
  for (int k : cfg.study_inverse_h) opt.study_h.push_back(1.0 / k);

  const double h_disc = cfg.h_or(1.0 / 32);
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport report = run_suite(h_disc, 2.0 * h_disc, opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  csv::Table ids({"domain", "h", "m", "r", "s", "identity", "samples", "defect", "scale", "bound",
                  "pass", "J", "K", "x1", "y1", "x2", "y2"});
  for (const auto& c : report.checks) {
    ids.row();
    ids.add(c.domain).add(c.h).add(c.m).add(c.r).add(c.s).add(c.identity).add(c.samples);
    ids.add(c.defect).add(c.scale).add(c.bound).add(c.pass);
    ids.add(MultiIndex(c.J, c.m).str()).add(MultiIndex(c.K, c.domain == "disc" ? 1 : 2).str());
    add_point(ids, c.where, 2);
  }
  files.write("identities.csv", ids);

  csv::Table orders({"m", "h", "defect", "scale", "exact", "order"});
  for (const auto& r : report.orders) {
    orders.row();
    orders.add(r.m).add(r.h).add(r.defect).add(r.scale).add(r.exact).add(r.order);
  }
  files.write("commutator_order.csv", orders);

  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& c : report.checks) {
    auto& t = tally[c.domain + " " + c.identity];
    ++t.first;
    if (c.pass) ++t.second;
  }
  out << "verify-koszul: " << opt.forms << " random forms per (m, r, s), seed " << opt.seed;
  if (opt.sign == ContractSign::reversed) out << ", fault injection contract_sign";
  out << '\n';
  for (const auto& [key, t] : tally) out << "  " << key << ": " << t.second << "/" << t.first << " degree groups pass\n";
  for (const auto& c : report.checks) {
    if (c.pass) continue;
    const int dim = c.domain == "disc" ? 1 : 2;
    out << "  FAIL " << c.identity << " on " << c.domain << " m=" << c.m << " (r,s)=(" << c.r << ","
        << c.s << "): defect " << num(c.defect) << " > bound " << num(c.bound) << " at node "
        << point_str(c.where, dim) << " J=" << MultiIndex(c.J, c.m).str()
        << " K=" << MultiIndex(c.K, dim).str() << '\n';
  }
  out << "  commutator orders (disc):";
  for (const auto& r : report.orders)
    if (r.order != 0.0) {
      out << ' ' << num(std::round(r.order * 1000) / 1000);
    } else if (r.exact) {
      out << " exact";
    }
  out << "  min " << num(report.min_observed_order) << " (need >= " << num(opt.min_order) << ") "
      << verdict(report.orders_pass) << '\n';
  out << "  " << report.failures() << " failure(s), " << num(std::round(seconds * 10) / 10) << " s\n";
  return report.pass ? kOk : kCertificateFailed;
}

// ---------------------------------------------------------------------------

int cmd_corona(const RunConfig& cfg, std::ostream& out) {
  const Output files(cfg);
  files.config(cfg);
  const DomainPtr dom = domain_for(cfg, 1.0 / 64);
  const std::string name = map_or(cfg, dom->dim() == 1 ? "z,1-z" : "z1,z2,1-z1");
  const HoloMap f = make_map(name, dom);

  const RealField norm2 = f.norm_squared();
  const double floor = *std::min_element(norm2.begin(), norm2.end());
  if (!cfg.eps0 && floor < kZeroSetFloor) {
    std::ostringstream os;
    os << "min sum |f_l|^2 = " << num(floor) << " on the grid: f has (near) zeros, no corona solution";
    throw HypothesisError("bounded-below", os.str());
  }
  const double eps0 = cfg.eps0.value_or(0.5 * floor);

  Prop1Options popt;
  popt.sign = cfg.contract_sign();
  std::optional<CutOff> region;
  if (dom->dim() == 2) {
    Mask core(dom->size(), 0);
    for (std::size_t i = 0; i < dom->size(); ++i) core[i] = dom->boundary_dist(i) >= 0.5 ? 1 : 0;
    region = bump(*dom, core, 0.0, 0.25, true);
    popt.region = &*region;
  }
  const CoronaResult res = corona_solve(f, eps0, popt);

  bool ok = res.identity_defect <= 1e-12;
  bool holo = true;
  for (double d : res.dbar_sup) holo = holo && d <= res.tolerance;
  ok = ok && holo;

  out << "corona: f = (" << name << "), h = " << num(dom->h()) << ", eps0 = " << num(eps0) << '\n';
  out << "  sup |sum f_j g_j - 1| = " << num(res.identity_defect) << " (<= 1e-12) "
      << verdict(res.identity_defect <= 1e-12) << '\n';
  for (std::size_t j = 0; j < res.g.size(); ++j) {
    out << "  g" << j + 1 << ": sup " << num(res.g_sup[j]) << ", sup |dbar g| " << num(res.dbar_sup[j])
        << " (<= tol_descent " << num(res.tolerance) << ") " << verdict(res.dbar_sup[j] <= res.tolerance)
        << '\n';
  }

  csv::Table summary({"quantity", "value"});
  auto put = [&](const std::string& k, double v) {
    summary.row();
    summary.add(k).add(v);
  };
  put("identity_defect", res.identity_defect);
  put("tolerance", res.tolerance);
  for (std::size_t j = 0; j < res.g.size(); ++j) {
    put("g" + std::to_string(j + 1) + "_sup", res.g_sup[j]);
    put("g" + std::to_string(j + 1) + "_dbar_sup", res.dbar_sup[j]);
  }

  // Closed-form cross-checks for the maps that have one.
  if (name == "z,1-z") {
    // (g1 - 1, g2 - 1) must be (-(1 - z) q, z q) for one function q.
    double worst = 0.0;
    for (std::size_t i = 0; i < dom->size(); ++i) {
      if (!res.certified_nodes[i]) continue;
      const cplx z = dom->point(i)[0];
      const cplx q = (res.g[0][i] - 1.0) / (-(1.0 - z));
      worst = std::max(worst, std::abs((res.g[1][i] - 1.0) - z * q));
    }
    out << "  module membership |(g2 - 1) - z q| = " << num(worst) << " (<= 1e-6) " << verdict(worst <= 1e-6)
        << '\n';
    put("module_residual", worst);
    ok = ok && worst <= 1e-6;
  } else if (name == "z-2") {
    double worst = 0.0;
    for (std::size_t i = 0; i < dom->size(); ++i) {
      worst = std::max(worst, std::abs(res.g[0][i] - 1.0 / (dom->point(i)[0] - 2.0)));
    }
    out << "  |g1 - 1/(z - 2)| = " << num(worst) << " (<= 1e-6) " << verdict(worst <= 1e-6) << '\n';
    put("reciprocal_error", worst);
    ok = ok && worst <= 1e-6;
  }
  files.write("corona_summary.csv", summary);

  if (files.enabled()) {
    std::vector<std::string> head = point_header(dom->dim());
    for (std::size_t j = 0; j < res.g.size(); ++j) {
      head.push_back("g" + std::to_string(j + 1) + "_re");
      head.push_back("g" + std::to_string(j + 1) + "_im");
    }
    csv::Table g(head);
    for (std::size_t i = 0; i < dom->size(); ++i) {
      g.row();
      add_point(g, dom->point(i), dom->dim());
      for (const auto& gj : res.g) g.add(gj[i].real()).add(gj[i].imag());
    }
    files.write("corona_g.csv", g);
    std::ofstream trace = files.open("corona_trace.txt");
    trace << res.trace.report();
  }
  return ok ? kOk : kCertificateFailed;
}

// ---------------------------------------------------------------------------

int cmd_approximate(const RunConfig& cfg, std::ostream& out) {
  const Output files(cfg);
  files.config(cfg);
  const DomainPtr dom = domain_for(cfg, 1.0 / 64);
  const std::string name = map_or(cfg, "z");
  const std::string gname = cfg.g.value_or("1-|z|^2");
  const HoloMap f = make_map(name, dom);
  const Evaluator g = field_preset(gname, dom->dim());

  ApproxOptions opt;
  opt.refine = cfg.refine;
  opt.stone_weierstrass_degree = cfg.sw_degree;
  const Approximant a = approximate(f, g, cfg.eps, opt);
  const auto& net = a.net;

  std::size_t holo = 0;
  std::size_t division = 0;
  double worst_ratio = 0.0;
  for (const auto& r : net.records) {
    holo += r.holomorphic ? 1 : 0;
    division += r.division_ok ? 1 : 0;
    worst_ratio = std::max(worst_ratio, r.division_ratio);
  }

  out << "approximate: f = " << name << ", g = " << gname << ", eps = " << num(cfg.eps)
      << ", h = " << num(dom->h()) << '\n';
  out << "  lambda points: " << net.records.size() << ", covered " << (net.covered ? "yes" : "no")
      << ", partition floor " << num(a.assembly.partition_floor) << '\n';
  out << "  holomorphy |dbar G| <= tol_descent: " << holo << "/" << net.records.size() << '\n';
  out << "  division |G - g^lambda| <= M |f - lambda|: " << division << "/" << net.records.size() << '\n';
  out << "  chain maxima:";
  for (double c : a.assembly.chain_max) out << ' ' << num(c);
  out << " (violations " << a.assembly.chain_violations << ")\n";
  out << "  sup |h - g| = " << num(a.assembly.sup_error) << " on the " << cfg.refine
      << "x verification grid, " << num(a.assembly.sup_error_coarse) << " on the solve grid (<= "
      << num(a.tolerance) << ") " << verdict(a.certified) << '\n';
  if (a.has_stone_weierstrass) {
    const auto& sw = a.stone_weierstrass;
    out << "  polynomial partition (degree " << sw.degree << "): max fit error " << num(sw.max_fit_error)
        << ", error bound " << num(sw.error_bound) << ", within eps/10: " << (sw.within_target ? "yes" : "no")
        << '\n';
  }

  if (files.enabled()) {
    std::ofstream os = files.open("lambdas.csv");
    write_lambda_csv(os, net);
  }
  csv::Table summary({"quantity", "value"});
  auto put = [&](const std::string& k, double v) {
    summary.row();
    summary.add(k).add(v);
  };
  put("eps", cfg.eps);
  put("lambda_points", static_cast<double>(net.records.size()));
  put("sup_error", a.assembly.sup_error);
  put("sup_error_solve_grid", a.assembly.sup_error_coarse);
  put("tolerance", a.tolerance);
  put("partition_floor", a.assembly.partition_floor);
  put("chain_violations", static_cast<double>(a.assembly.chain_violations));
  for (std::size_t k = 0; k < a.assembly.chain_max.size(); ++k)
    put("chain_" + std::to_string(k + 1), a.assembly.chain_max[k]);
  put("max_division_ratio", worst_ratio);
  put("certified", a.certified ? 1.0 : 0.0);
  if (a.has_stone_weierstrass) {
    put("sw_degree", a.stone_weierstrass.degree);
    put("sw_max_fit_error", a.stone_weierstrass.max_fit_error);
    put("sw_error_bound", a.stone_weierstrass.error_bound);
  }
  files.write("approx_summary.csv", summary);
  return a.certified ? kOk : kCertificateFailed;
}

// ---------------------------------------------------------------------------

int cmd_toeplitz(const RunConfig& cfg, std::ostream& out) {
  const Output files(cfg);
  files.config(cfg);
  const DomainPtr dom = domain_for(cfg, 1.0 / 32);
  const int dim = dom->dim();
  const std::string name = map_or(cfg, dim == 1 ? "z" : "z1,z2");
  const std::string gname = cfg.g.value_or(dim == 1 ? "zbar" : "zbar2");
  const int N = cfg.degree.value_or(16);
  const int interior = cfg.interior.value_or(N / 2);
  const HoloMap f = make_map(name, dom);
  const Evaluator g = field_preset(gname, dim);

  const AcrResult acr = acr_residual(f, g, N, interior);
  out << "toeplitz: f = (" << name << "), g = " << gname << ", N = " << N << ", interior degree "
      << acr.interior_degree << '\n';
  csv::Table table({"quantity", "N", "interior", "value"});
  for (std::size_t j = 0; j < acr.commutator_norms.size(); ++j) {
    out << "  ||[T_g, T_f" << j + 1 << "]|| = " << num(acr.commutator_norms[j]) << '\n';
    table.row();
    table.add("commutator_f" + std::to_string(j + 1)).add(N).add(acr.interior_degree).add(acr.commutator_norms[j]);
  }
  out << "  ||T_g(1) - g|| = " << num(acr.tg1_minus_g) << " (||g|| = " << num(acr.g_norm) << ")\n";
  table.row();
  table.add("tg1_minus_g").add(N).add(acr.interior_degree).add(acr.tg1_minus_g);
  table.row();
  table.add("g_norm").add(N).add(acr.interior_degree).add(acr.g_norm);
  files.write("toeplitz.csv", table);
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_density(const RunConfig& cfg, std::ostream& out) {
  const Output files(cfg);
  files.config(cfg);
  const bool disc = cfg.domain == "disc";
  const DomainPtr dom = domain_for(cfg, disc ? 1.0 / 32 : 1.0 / 8);
  const std::string name = map_or(cfg, disc ? "z" : "z1");
  const std::string gname = cfg.g.value_or(disc ? "bump" : "(1+|z1|^2)(zbar2+z2)");
  const int degree = cfg.degree.value_or(disc ? 12 : 10);
  const HoloMap f = make_map(name, dom);

  const DensityCurve curve = lp_density_residual(f, field_preset(gname, dom->dim()), degree);
  out << "density: f = (" << name << "), field = " << gname << ", ||field|| = " << num(curve.field_norm)
      << '\n';
  csv::Table table({"degree", "span", "residual", "relative", "condition"});
  for (const auto& p : curve.points) {
    out << "  d = " << p.degree << ": residual " << num(p.residual) << " (relative " << num(p.relative)
        << ", span " << p.span_size << ")\n";
    table.row();
    table.add(p.degree).add(p.span_size).add(p.residual).add(p.relative).add(p.condition);
  }
  if (curve.truncated) out << "  curve truncated: " << curve.note << '\n';
  files.write("density.csv", table);
  return kOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"verify-koszul", "corona", "approximate", "toeplitz",
                                              "density"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (name == "verify-koszul") return cmd_verify_koszul(cfg, out);
    if (name == "corona") return cmd_corona(cfg, out);
    if (name == "approximate") return cmd_approximate(cfg, out);
    if (name == "toeplitz") return cmd_toeplitz(cfg, out);
    if (name == "density") return cmd_density(cfg, out);
    err << "error: unknown command '" << name << "'\n";
    return kHypothesisFailed;
  } catch (const HypothesisError& e) {
    err << "error: hypothesis " << e.what() << '\n';
    return kHypothesisFailed;
  } catch (const DomainMismatch& e) {
    err << "error: domain-mismatch: " << e.what() << '\n';
    return kHypothesisFailed;
  } catch (const CertificateError& e) {
    err << "error: certificate " << e.what() << '\n';
    return kCertificateFailed;
  }
}

}  // namespace dbk::app
