// Acceptance suite: one PASS/FAIL line per criterion. The first argument is
// the path of the dbk executable, the second a scratch directory.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dbk/app/commands.hpp"
#include "dbk/app/suite.hpp"
#include "dbk/approx.hpp"
#include "dbk/bergman.hpp"
#include "dbk/cauchy.hpp"
#include "dbk/csv.hpp"
#include "dbk/dbar.hpp"
#include "dbk/koszul.hpp"
#include "dbk/profile.hpp"

namespace fs = std::filesystem;
using namespace dbk;
using csv::num;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double order(double coarse, double fine, double h_coarse, double h_fine) {
  return std::log(coarse / fine) / std::log(h_coarse / h_fine);
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

// --- criterion 1 -----------------------------------------------------------

void koszul_suite(Outcome& out) {
  app::SuiteOptions opt;
  opt.forms = 50;
  opt.seed = 20240601;
  const auto report = app::run_suite(1.0 / 32, 1.0 / 16, opt);

  double worst[4] = {0, 0, 0, 0};
  const char* names[4] = {"tf_tf", "leibniz", "dbar_dbar", "commutator"};
  std::size_t samples = 0;
  for (const auto& c : report.checks) {
    samples += static_cast<std::size_t>(c.samples);
    for (int k = 0; k < 4; ++k) {
      if (c.identity == names[k] && c.bound > 0) worst[k] = std::max(worst[k], c.defect / c.bound);
    }
    if (!c.pass) {
      out.require(false, c.domain + " m=" + std::to_string(c.m) + " (" + std::to_string(c.r) + "," +
                             std::to_string(c.s) + ") " + c.identity + " defect " + fmt(c.defect) +
                             " > " + fmt(c.bound));
    }
  }
  out.require(report.failures() == 0, std::to_string(report.checks.size()) + " identity groups, " +
                                          std::to_string(samples) + " samples, " +
                                          std::to_string(report.failures()) + " failing");
  for (int k = 0; k < 4; ++k) {
    out.notes.push_back(std::string("     worst ") + names[k] + " defect / bound = " + fmt(worst[k]));
  }
  out.require(report.orders_pass && report.min_observed_order >= 1.5,
              "commutator order over h = 1/16, 1/32, 1/64: min " + fmt(report.min_observed_order) +
                  " (>= 1.5)");
}

// --- criterion 2 -----------------------------------------------------------

// (1 - |z - c|^2 / R^2)^4 on |z - c| < R, and its dzbar derivative.
double bump4(cplx z, cplx c, double R) {
  const double t = std::norm(z - c) / (R * R);
  return t < 1 ? std::pow(1 - t, 4) : 0.0;
}
cplx bump4_dbar(cplx z, cplx c, double R) {
  const double t = std::norm(z - c) / (R * R);
  return t < 1 ? -4.0 * std::pow(1 - t, 3) * (z - c) / (R * R) : cplx(0.0);
}

struct DiscCase {
  std::string name;
  // w = dbar phi in closed form.
  std::function<cplx(cplx)> w;
};

std::vector<DiscCase> disc_corpus() {
  using P = std::function<cplx(cplx)>;
  // phi = p * bump4, so dbar phi = dbar(p) bump4 + p dbar(bump4).
  auto product = [](P p, P dp, cplx c, double R) -> P {
    return [=](cplx z) { return dp(z) * bump4(z, c, R) + p(z) * bump4_dbar(z, c, R); };
  };
  const P one = [](cplx) { return cplx(1.0); };
  const P zero = [](cplx) { return cplx(0.0); };
  const P id = [](cplx z) { return z; };
  const P conj = [](cplx z) { return std::conj(z); };
  const P sq = [](cplx z) { return z * z; };
  const P r2 = [](cplx z) { return cplx(std::norm(z)); };
  const P ex = [](cplx z) { return std::exp(std::conj(z)); };
  return {
      {"bump at 0", product(one, zero, 0.0, 0.5)},
      {"bump off-centre", product(one, zero, {0.2, 0.1}, 0.5)},
      {"z * bump", product(id, zero, -0.3, 0.4)},
      {"zbar * bump", product(conj, one, {0.0, 0.1}, 0.6)},
      {"|z|^2 * bump", product(r2, id, 0.0, 0.8)},
      {"exp(zbar) * bump", product(ex, ex, {0.25, -0.25}, 0.5)},
      {"z^2 * wide bump", product(sq, zero, 0.0, 0.9)},
      {"(1-|z|^2)^2", [](cplx z) { return -2.0 * (1.0 - std::norm(z)) * z; }},
  };
}

void dbar_oracle(Outcome& out) {
  // Indicator of |z| < 1/2: the transform is zbar inside and rho^2 / z outside.
  {
    const double rho = 0.5;
    auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 64);
    const auto& f = d->factor(0);
    Field w(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) w[k] = std::abs(f.z[k]) < rho ? 1.0 : 0.0;
    const Field u = cauchy_for(f)->apply(w);
    double err = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const cplx z = f.z[k];
      const cplx exact = std::abs(z) <= rho ? std::conj(z) : rho * rho / z;
      err = std::max(err, std::abs(u[k] - exact));
    }
    out.require(err <= 1e-2, "indicator transform at h = 1/64: sup error " + fmt(err) + " (<= 1e-2)");
  }

  // Disc cases over three refinements.
  const std::vector<double> hs{1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<std::vector<double>> res(hs.size());
  bool bounded = true;
  double worst_rel = 0;
  const auto corpus = disc_corpus();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    auto d = build_domain(DomainSpec::disc(1.0), hs[i]);
    for (const auto& c : corpus) {
      Field w(d->size());
      for (std::size_t k = 0; k < d->size(); ++k) w[k] = c.w(d->point(k)[0]);
      const auto s = solve_dbar_1d(d, w);
      res[i].push_back(s.residual_sup);
      const double rel = s.residual_sup / (hs[i] * s.input_sup);
      worst_rel = std::max(worst_rel, rel);
      bounded = bounded && rel <= 10.0;
    }
  }

  // Bidisc cases: a closed (0,1)-form dbar(phi) and a (0,2)-form.
  const std::vector<double> hb{1.0 / 12, 1.0 / 16, 1.0 / 24};
  std::vector<std::vector<double>> resb(hb.size());
  for (std::size_t i = 0; i < hb.size(); ++i) {
    auto d = build_domain(DomainSpec::polydisc(1, 1), hb[i]);
    Field phi(d->size());
    for (std::size_t k = 0; k < d->size(); ++k) {
      const auto p = d->point(k);
      phi[k] = bump4(p[0], {0.4, 0.0}, 0.3) * bump4(p[1], 0.0, 0.3);
    }
    const auto w1 = dbar_apply(KoszulForm::scalar(d, 1, phi));
    const auto w2 = KoszulForm::basis(d, 1, 0, 3, phi);
    for (const auto* w : {&w1, &w2}) {
      const auto s = solve_dbar_form(*w);
      resb[i].push_back(s.residual_sup);
      const double rel = s.residual_sup / (hb[i] * s.input_sup);
      worst_rel = std::max(worst_rel, rel);
      bounded = bounded && rel <= 10.0;
    }
  }
  const std::size_t cases = corpus.size() + resb[0].size();
  out.require(bounded, std::to_string(cases) + "-case corpus: worst residual / (h sup|w|) = " +
                           fmt(worst_rel) + " (<= 10)");

  double min_order = 1e9;
  for (std::size_t c = 0; c < corpus.size(); ++c) {
    for (std::size_t i = 1; i < hs.size(); ++i)
      min_order = std::min(min_order, order(res[i - 1][c], res[i][c], hs[i - 1], hs[i]));
  }
  for (std::size_t c = 0; c < resb[0].size(); ++c) {
    for (std::size_t i = 1; i < hb.size(); ++i)
      min_order = std::min(min_order, order(resb[i - 1][c], resb[i][c], hb[i - 1], hb[i]));
  }
  out.require(min_order >= 1.0, "residual order over three refinements: min " + fmt(min_order) + " (>= 1)");
}

// --- criterion 3 -----------------------------------------------------------

void corona(Outcome& out) {
  const double h = 1.0 / 64;
  auto d = build_domain(DomainSpec::disc(1.0), h);
  {
    const auto f = make_map("z,1-z", d);
    const RealField n2 = f.norm_squared();
    double lo = 1e300;
    for (double v : n2) lo = std::min(lo, v);
    const auto c = corona_solve(f, 0.5 * lo);

    double identity = 0;
    for (std::size_t k = 0; k < d->size(); ++k) {
      identity = std::max(identity, std::abs(f.samples(0)[k] * c.g[0][k] + f.samples(1)[k] * c.g[1][k] - 1.0));
    }
    out.require(identity <= 1e-12, "f = (z, 1-z): max |f1 g1 + f2 g2 - 1| = " + fmt(identity) + " (<= 1e-12)");
    const double dbar = std::max(c.dbar_sup[0], c.dbar_sup[1]);
    out.require(dbar <= c.tolerance,
                "sup |dbar g_j| = " + fmt(dbar) + " (<= tol_descent " + fmt(c.tolerance) + ")");

    // (z, 1 - z) generates the unit ideal with z + (1 - z) = 1, so g - (1, 1)
    // lies in the relation module: g = (1 + q (1 - z), 1 - q z) for one q.
    // Recover q from each component and compare.
    double worst = 0;
    for (std::size_t k = 0; k < d->size(); ++k) {
      const cplx z = d->point(k)[0];
      if (std::abs(z) < 0.05 || std::abs(1.0 - z) < 0.05) continue;
      const cplx q1 = (c.g[0][k] - 1.0) / (1.0 - z);
      const cplx q2 = (1.0 - c.g[1][k]) / z;
      worst = std::max(worst, std::abs(q1 - q2));
    }
    out.require(worst <= 1e-6, "module membership: max |q1 - q2| = " + fmt(worst) + " (<= 1e-6)");
  }
  {
    const auto f = make_map("z-2", d);
    const auto c = corona_solve(f, 0.5);
    double err = 0;
    for (std::size_t k = 0; k < d->size(); ++k) {
      err = std::max(err, std::abs(c.g[0][k] - 1.0 / (d->point(k)[0] - 2.0)));
    }
    out.require(err <= 1e-6, "f = z - 2: max |g1 - 1/(z - 2)| = " + fmt(err) + " (<= 1e-6)");
  }
}

// --- criterion 4 -----------------------------------------------------------

void approximation_case(Outcome& out, const std::string& map, const std::string& gname, const Evaluator& g) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 64);
  const auto f = make_map(map, d);
  const auto t0 = Clock::now();
  const auto a = approximate(f, g, 0.1);
  std::size_t holo = 0, division = 0;
  for (const auto& r : a.net.records) {
    holo += (r.holomorphic && r.dbar_G <= r.tolerance) ? 1 : 0;
    division += r.division_ok ? 1 : 0;
  }
  const std::size_t n = a.net.records.size();
  const std::string tag = "f = " + map + ", g = " + gname + ": ";
  out.require(a.assembly.sup_error <= 0.2 && a.certified,
              tag + "sup |h - g| on 2x grid = " + fmt(a.assembly.sup_error) + " (<= 0.2), " +
                  std::to_string(n) + " net points, " + fmt(since(t0)) + " s");
  out.require(division == n && a.assembly.chain_violations == 0,
              tag + "|G - g^lambda| <= M |f - lambda| at every node for " + std::to_string(division) + "/" +
                  std::to_string(n) + " net points");
  out.require(holo == n, tag + "|dbar G| <= tol_descent for " + std::to_string(holo) + "/" + std::to_string(n));
}

void approximation(Outcome& out) {
  approximation_case(out, "z", "1-|z|^2", [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); });
  approximation_case(out, "z^2", "(1-|z|^2)|z|^2", [](const CPoint& p) {
    const double r2 = std::norm(p[0]);
    return cplx((1.0 - r2) * r2);
  });
}

// --- criterion 5 -----------------------------------------------------------

void descent(Outcome& out) {
  const std::vector<double> hs{1.0 / 16, 1.0 / 24};
  std::vector<double> res;
  for (double h : hs) {
    auto d = build_domain(DomainSpec::polydisc(1, 1), h);
    const auto f = make_map("z1,z2", d);
    Field phi(d->size());
    for (std::size_t k = 0; k < d->size(); ++k) {
      const auto p = d->point(k);
      phi[k] = bump4(p[0], {0.5, 0.0}, 0.25) * bump4(p[1], 0.0, 0.3);
    }
    const auto W = dbar_apply(KoszulForm::scalar(d, 2, phi));
    const auto r = descent_lemma2(f, W);
    res.push_back(r.trace.final_residual);
    out.require(r.trace.final_residual <= r.trace.tolerance,
                "h = 1/" + std::to_string(static_cast<int>(std::lround(1 / h))) + ": |T_f dbar Y - W| = " +
                    fmt(r.trace.final_residual) + " (<= tol_descent " + fmt(r.trace.tolerance) + ")");
  }
  const double p = order(res[0], res[1], hs[0], hs[1]);
  out.require(p >= 1.0, "order from h = 1/16 to 1/24: " + fmt(p) + " (>= 1)");
}

// --- criterion 6 -----------------------------------------------------------

void toeplitz(Outcome& out) {
  const auto disc = DomainSpec::disc(1.0);
  const Evaluator z = [](const CPoint& p) { return p[0]; };
  const Evaluator z2 = [](const CPoint& p) { return p[0] * p[0]; };
  const Evaluator zbar = [](const CPoint& p) { return std::conj(p[0]); };

  double noncommuting[2] = {0, 0};
  const int Ns[2] = {8, 16};
  for (int i = 0; i < 2; ++i) {
    auto B = std::make_shared<const BergmanBasis>(disc, Ns[i]);
    const auto Tz = toeplitz_matrix(B, z, "z");
    const auto Tzb = toeplitz_matrix(B, zbar, "zbar");
    noncommuting[i] = commutator_norm(Tz, Tzb, Ns[i] / 2);
    if (Ns[i] != 16) continue;
    const auto Tz2 = toeplitz_matrix(B, z2, "z^2");
    const double holo = commutator_norm(Tz, Tz2, 8);
    out.require(holo <= 1e-6, "N = 16: ||[T_z, T_z^2]|| = " + fmt(holo) + " (<= 1e-6)");
    out.require(noncommuting[i] >= 0.05, "N = 16: ||[T_z, T_zbar]|| = " + fmt(noncommuting[i]) + " (>= 0.05)");

    // P(zbar) = 0, so ||T_zbar(1) - zbar|| = ||zbar||. Oracle: the integral
    // of r^2 over the disc in closed form, checked against a Gauss rule of a
    // different size than the basis uses.
    const double residual = toeplitz_one_residual(Tzb, zbar);
    const double closed = std::sqrt(std::numbers::pi / 2);
    const auto q = PolarQuadrature::build(disc, 7, 5);
    double s = 0;
    for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * std::norm(q.points[k][0]);
    const double quad = std::sqrt(s);
    out.require(std::abs(quad - closed) <= 1e-12 && std::abs(residual - quad) <= 1e-6,
                "||T_zbar(1) - zbar|| = " + fmt(residual, 12) + ", oracle " + fmt(quad, 12) + " (within 1e-6)");
  }
  const double change = std::abs(noncommuting[1] - noncommuting[0]) / noncommuting[0];
  out.require(noncommuting[0] >= 0.05 && change <= 0.10,
              "||[T_z, T_zbar]||: N = 8 " + fmt(noncommuting[0]) + ", N = 16 " + fmt(noncommuting[1]) +
                  ", relative change " + fmt(change) + " (<= 0.1)");
}

// --- criterion 7 -----------------------------------------------------------

void density(Outcome& out) {
  {
    auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 32);
    const auto f = make_map("z", d);
    const Evaluator bump = [](const CPoint& p) { return cplx(radial_cutoff(std::abs(p[0]), 0.2, 0.9)); };
    const auto curve = lp_density_residual(f, bump, 12);
    const bool reached = !curve.points.empty() && curve.points.back().degree == 12;
    const double rel = reached ? curve.points.back().relative : 1.0;
    bool decreasing = true;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      decreasing = decreasing && curve.points[i].residual <= curve.points[i - 1].residual * (1 + 1e-9);
    out.require(reached && rel < 0.05 && decreasing,
                "disc, f = z, bump: relative residual at d = 12 is " + fmt(rel) + " (< 0.05), non-increasing");
  }
  {
    auto d = build_domain(DomainSpec::polydisc(1, 1), 1.0 / 8);
    const auto f = make_map("z1", d);
    const Evaluator field = [](const CPoint& p) { return (1.0 + std::norm(p[0])) * (std::conj(p[1]) + p[1]); };
    const auto curve = lp_density_residual(f, field, 10);

    // Every span element is holomorphic in z2, and zbar2 u(z1) integrates to
    // zero against z2^k over the second disc, so the (1 + |z1|^2) zbar2 part
    // is orthogonal to the span at every degree. Its norm, in closed form:
    // ||1 + |z1|^2||^2 = 2 pi (1/2 + 1/2 + 1/6), ||zbar2||^2 = pi / 2.
    const double oracle = std::numbers::pi * std::sqrt(7.0 / 6.0);
    const auto q = PolarQuadrature::build(DomainSpec::polydisc(1, 1), 6, 7);
    double s = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      s += q.weights[k] * std::norm((1.0 + std::norm(q.points[k][0])) * std::conj(q.points[k][1]));
    }
    out.require(std::abs(std::sqrt(s) - oracle) <= 1e-10,
                "orthogonal-complement norm: closed form " + fmt(oracle, 10) + ", quadrature " + fmt(std::sqrt(s), 10));
    double worst = 1e300;
    int last = 0;
    for (const auto& p : curve.points) {
      worst = std::min(worst, p.residual / oracle);
      last = p.degree;
    }
    out.require(last == 10 && worst >= 0.5,
                "bidisc, f = z1: min residual / oracle over d = 1..10 is " + fmt(worst) + " (>= 0.5)");
  }
}

// --- criterion 8 -----------------------------------------------------------

struct RunResult {
  int code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

RunResult run_dbk(const std::string& dbk, const std::string& args, const fs::path& scratch) {
  const fs::path o = scratch / "stdout.txt";
  const fs::path e = scratch / "stderr.txt";
  const std::string cmd = quote(dbk) + " " + args + " >" + quote(o.string()) + " 2>" + quote(e.string());
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = slurp(o);
  r.stderr_text = slurp(e);
  return r;
}

void determinism(Outcome& out, const std::string& dbk, const fs::path& work) {
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"verify-koszul", "h = 1/16\nforms = 3\nstudy_h = 1/16,1/32\n"},
      {"corona", "domain = disc\nmap = z,1-z\nh = 1/64\n"},
      {"toeplitz", "map = z\ng = zbar\ndegree = 16\n"},
      {"density", "map = z\ng = bump\ndegree = 12\n"},
  };
  for (const auto& [cmd, config] : jobs) {
    const fs::path dir = work / cmd;
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream cfg(dir / "run.cfg");
      cfg << config;
    }
    std::vector<std::string> names;
    std::vector<std::string> first;
    bool same = true;
    int codes[2] = {-1, -1};
    for (int run = 0; run < 2; ++run) {
      const fs::path o = dir / ("run" + std::to_string(run));
      const auto r = run_dbk(dbk, cmd + " --config " + quote((dir / "run.cfg").string()) + " --out " + quote(o.string()), dir);
      codes[run] = r.code;
      std::vector<fs::path> files;
      if (fs::exists(o)) {
        for (const auto& e : fs::directory_iterator(o))
          if (e.path().extension() == ".csv") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (run == 0) {
          names.push_back(files[i].filename().string());
          first.push_back(slurp(files[i]));
        } else {
          same = same && i < names.size() && files[i].filename() == names[i] && slurp(files[i]) == first[i];
        }
      }
      if (run == 1) same = same && files.size() == names.size();
    }
    out.require(codes[0] == 0 && codes[1] == 0 && same && !names.empty(),
                cmd + ": " + std::to_string(names.size()) + " CSV file(s) byte-identical across two runs");
  }

  const auto boundary = run_dbk(dbk, "approximate --h 1/32 --set g=1", work);
  out.require(boundary.code == 2 && boundary.stderr_text.find("boundary-vanishing") != std::string::npos,
              "approximate with g = 1: exit " + std::to_string(boundary.code) + ", " +
                  boundary.stderr_text.substr(0, boundary.stderr_text.find('\n')));
  const auto zero = run_dbk(dbk, "corona --set map=z", work);
  out.require(zero.code == 2 && zero.stderr_text.find("bounded-below") != std::string::npos,
              "corona with f = z: exit " + std::to_string(zero.code) + ", " +
                  zero.stderr_text.substr(0, zero.stderr_text.find('\n')));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <dbk executable> <scratch directory> [criterion ...]\n";
    return 2;
  }
  const std::string dbk = argv[1];
  const fs::path work = argv[2];
  fs::create_directories(work);
  std::vector<int> only;
  for (int i = 3; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  app::tune_allocator();

  const std::vector<Criterion> criteria{
      {1, "Koszul algebra identities", 120, koszul_suite},
      {2, "dbar solver against oracles", 120, dbar_oracle},
      {3, "corona certification", 60, corona},
      {4, "approximation pipeline within 2 eps", 600, approximation},
      {5, "descent on the bidisc", 600, descent},
      {6, "Toeplitz commutators", 60, toeplitz},
      {7, "density dichotomy", 180, density},
      {8, "determinism and exit codes", 600, [&](Outcome& o) { determinism(o, dbk, work); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome out;
    const auto t0 = Clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = since(t0);
    out.require(seconds <= c.budget_seconds,
                "runtime " + fmt(seconds) + " s (<= " + num(c.budget_seconds) + " s)");
    std::cout << "criterion " << c.id << " [" << c.title << "]: " << (out.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& n : out.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    failed += out.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion/criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
