#include "dbk/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "dbk/cauchy.hpp"
#include "dbk/csv.hpp"
#include "dbk/error.hpp"
#include "dbk/profile.hpp"
#include "dbk/stencil.hpp"

namespace dbk {

LambdaSolve per_lambda_solve(const SmoothingContext& ctx, const SmoothedData& data) {
  const auto t0 = std::chrono::steady_clock::now();
  const HoloMap& f = ctx.f();
  const DomainPtr& D = ctx.domain();
  const std::size_t N = D->size();
  const int m = f.m();

  LambdaSolve out;
  out.data = data;
  const HoloMap fl = f.shifted(data.lambda);
  DescentOptions opt;
  opt.keep_forms = true;
  DescentResult res = descent_lemma2(fl, data.dbar, opt);
  out.trace = std::move(res.trace);

  out.H.resize(static_cast<std::size_t>(m));
  out.density.resize(static_cast<std::size_t>(m));
  const bool lifted = !out.trace.stages.empty() && out.trace.stages.front().step == "lift";
  KoszulForm Y1;
  if (lifted) {
    Y1 = out.trace.forms.front();
    extend_from_interior(Y1);
  }
  out.trace.forms.clear();
  for (int l = 0; l < m; ++l) {
    const unsigned J = 1u << l;
    out.H[static_cast<std::size_t>(l)] = res.Y.coeff(J, 0);
    out.density[static_cast<std::size_t>(l)] = lifted ? Y1.coeff(J, 1) : zero_field(N);
    out.M += sup_norm(out.H[static_cast<std::size_t>(l)]);
  }

  out.G = data.g_lambda;
  RealField gap(N, 0.0);
  for (int l = 0; l < m; ++l) {
    const Field& fs = fl.samples(l);
    const Field& H = out.H[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < N; ++i) {
      out.G[i] -= fs[i] * H[i];
      gap[i] += std::norm(fs[i]);
    }
  }
  out.dbar_G = sup_norm(wirtinger_dbar(*D, out.G, 0));
  out.tolerance = out.trace.tolerance;
  out.holomorphic = out.dbar_G <= out.tolerance;

  out.division_ratio = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < N; ++i) {
    const double lhs = std::abs(out.G[i] - data.g_lambda[i]);
    const double rhs = out.M * std::sqrt(gap[i]);
    if (rhs > 0.0) out.division_ratio = std::max(out.division_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ok = false;
  }
  out.division_ok = ok;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ImageCloud::ImageCloud(const HoloMap& f) : m_(f.m()), n_(f.domain()->size()) {
  values_.resize(n_ * static_cast<std::size_t>(m_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (int l = 0; l < m_; ++l) values_[i * static_cast<std::size_t>(m_) + static_cast<std::size_t>(l)] = f.samples(l)[i];
  }
  double hx = -std::numeric_limits<double>::infinity(), hy = hx;
  lo_x_ = lo_y_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) {
    const cplx w = point(i)[0];
    lo_x_ = std::min(lo_x_, w.real());
    lo_y_ = std::min(lo_y_, w.imag());
    hx = std::max(hx, w.real());
    hy = std::max(hy, w.imag());
  }
  const double span = std::max({hx - lo_x_, hy - lo_y_, 1e-12});
  cell_ = span / 256.0;
  nx_ = static_cast<int>((hx - lo_x_) / cell_) + 1;
  ny_ = static_cast<int>((hy - lo_y_) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
  for (std::size_t i = 0; i < n_; ++i) {
    const cplx w = point(i)[0];
    const int bx = std::min(nx_ - 1, static_cast<int>((w.real() - lo_x_) / cell_));
    const int by = std::min(ny_ - 1, static_cast<int>((w.imag() - lo_y_) / cell_));
    buckets_[static_cast<std::size_t>(bx) + static_cast<std::size_t>(nx_) * static_cast<std::size_t>(by)].push_back(i);
  }
}

double ImageCloud::distance(std::size_t i, const std::vector<cplx>& lambda) const {
  const cplx* w = point(i);
  double s = 0.0;
  for (int l = 0; l < m_; ++l) s += std::norm(w[l] - lambda[static_cast<std::size_t>(l)]);
  return std::sqrt(s);
}

std::vector<std::size_t> ImageCloud::query(const std::vector<cplx>& lambda, double radius) const {
  std::vector<std::size_t> out;
  const cplx c = lambda[0];
  const int x0 = std::max(0, static_cast<int>(std::floor((c.real() - radius - lo_x_) / cell_)));
  const int x1 = std::min(nx_ - 1, static_cast<int>(std::floor((c.real() + radius - lo_x_) / cell_)));
  const int y0 = std::max(0, static_cast<int>(std::floor((c.imag() - radius - lo_y_) / cell_)));
  const int y1 = std::min(ny_ - 1, static_cast<int>(std::floor((c.imag() + radius - lo_y_) / cell_)));
  for (int by = y0; by <= y1; ++by) {
    for (int bx = x0; bx <= x1; ++bx) {
      for (std::size_t i : buckets_[static_cast<std::size_t>(bx) + static_cast<std::size_t>(nx_) * static_cast<std::size_t>(by)]) {
        if (distance(i, lambda) < radius) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double partition_bump(double distance, double rho) { return radial_cutoff(distance, 0.5 * rho, rho); }

Assembler::Assembler(const SmoothingContext& ctx, const HoloMap& f_fine, const ImageCloud& coarse,
                     const ImageCloud& fine)
    : ctx_(ctx), f_fine_(f_fine), coarse_(coarse), fine_(fine) {
  coarse_sum_.assign(coarse.size(), 0.0);
  coarse_beta_.assign(coarse.size(), 0.0);
  fine_sum_.assign(fine.size(), 0.0);
  fine_beta_.assign(fine.size(), 0.0);
  l2_.assign(coarse.size(), 0.0);
  l3_ = l4_ = l5_ = l2_;
}

void Assembler::add(const LambdaSolve& s, double rho) {
  const auto& lambda = s.data.lambda;
  const Field& g = ctx_.g_samples();
  for (std::size_t i : coarse_.query(lambda, rho)) {
    const double d = coarse_.distance(i, lambda);
    const double beta = partition_bump(d, rho);
    if (beta == 0.0) continue;
    coarse_sum_[i] += beta * s.G[i];
    coarse_beta_[i] += beta;
    l2_[i] += beta * std::abs(s.G[i] - g[i]);
    l3_[i] += beta * (s.M * d + std::abs(s.data.g_lambda[i] - g[i]));
    l4_[i] += beta * s.M * d;
    l5_[i] += beta * s.M * rho;
  }

  const auto fine_idx = fine_.query(lambda, rho);
  if (fine_idx.empty()) return;
  const auto& fac = ctx_.domain()->factor(0);
  std::vector<std::vector<std::size_t>> sources(s.density.size());
  for (std::size_t l = 0; l < s.density.size(); ++l) {
    for (std::size_t k = 0; k < s.density[l].size(); ++k) {
      if (s.density[l][k] != 0.0) sources[l].push_back(k);
    }
  }
  const auto& fdom = *f_fine_.domain();
  for (std::size_t i : fine_idx) {
    const double d = fine_.distance(i, lambda);
    const double beta = partition_bump(d, rho);
    if (beta == 0.0) continue;
    const CPoint p = fdom.point(i);
    cplx G = s.data.eval(p);
    for (std::size_t l = 0; l < s.density.size(); ++l) {
      if (sources[l].empty()) continue;
      const cplx H = cauchy_at(fac, s.density[l], p[0], sources[l]);
      G -= (f_fine_.samples(static_cast<int>(l))[i] - lambda[l]) * H;
    }
    fine_sum_[i] += beta * G;
    fine_beta_[i] += beta;
  }
}

Assembler::Result Assembler::finish() const {
  Result r;
  const double eps = ctx_.eps();
  const auto& fdom = *f_fine_.domain();
  r.partition_floor = std::numeric_limits<double>::infinity();
  r.h_fine.assign(fine_.size(), 0.0);
  for (std::size_t i = 0; i < fine_.size(); ++i) {
    r.partition_floor = std::min(r.partition_floor, fine_beta_[i]);
    if (fine_beta_[i] <= 0.0) {
      r.sup_error = std::numeric_limits<double>::infinity();
      continue;
    }
    r.h_fine[i] = fine_sum_[i] / fine_beta_[i];
    r.sup_error = std::max(r.sup_error, std::abs(r.h_fine[i] - ctx_.g(fdom.point(i))));
  }
  r.chain_max.assign(5, 0.0);
  r.h_coarse.assign(coarse_.size(), 0.0);
  const Field& g = ctx_.g_samples();
  for (std::size_t i = 0; i < coarse_.size(); ++i) {
    const double B = coarse_beta_[i];
    if (B <= 0.0) {
      r.sup_error_coarse = std::numeric_limits<double>::infinity();
      ++r.chain_violations;
      continue;
    }
    r.h_coarse[i] = coarse_sum_[i] / B;
    const double line[5] = {std::abs(r.h_coarse[i] - g[i]), l2_[i] / B, l3_[i] / B,
                            l4_[i] / B + eps, l5_[i] / B + eps};
    r.sup_error_coarse = std::max(r.sup_error_coarse, line[0]);
    for (int k = 0; k < 5; ++k) r.chain_max[static_cast<std::size_t>(k)] = std::max(r.chain_max[static_cast<std::size_t>(k)], line[k]);
    const double slack = 1e-12 * (1.0 + line[4]);
    bool bad = false;
    for (int k = 0; k < 4; ++k) bad = bad || line[k] > line[k + 1] + slack;
    bad = bad || line[4] > 2.0 * eps + slack;
    if (bad) ++r.chain_violations;
  }
  return r;
}

LambdaNet build_lambda_net(const SmoothingContext& ctx, const ImageCloud& cloud,
                           const ApproxOptions& options, const SolveSink& sink) {
  LambdaNet net;
  net.theta = options.theta;
  net.rounds = 1;
  net.cloud_size = cloud.size();
  const double eps = ctx.eps();
  const int m = cloud.m();

  double spread = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double s = 0.0;
    for (int l = 0; l < m; ++l) s += std::norm(cloud.point(i)[l] - cloud.point(0)[l]);
    spread = std::max(spread, std::sqrt(s));
  }
  const double rho_max = 2.0 * spread + 1.0;

  std::vector<std::uint8_t> covered(cloud.size(), 0);
  RealField margin(cloud.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (covered[i]) continue;
    std::vector<cplx> lambda(cloud.point(i), cloud.point(i) + m);
    if (net.records.size() >= options.max_lambdas) {
      std::ostringstream os;
      os << "net exceeded " << options.max_lambdas << " points; uncovered region near lambda = "
         << lambda[0];
      throw CertificateError("net", os.str());
    }
    const SmoothedData data = smooth_vanishing_data(ctx, lambda);
    const LambdaSolve s = per_lambda_solve(ctx, data);
    const double rho = s.M > 0.0 ? std::min(rho_max, eps / s.M) : rho_max;

    LambdaRecord rec;
    rec.lambda = lambda;
    rec.rho = rho;
    rec.M = s.M;
    rec.G_sup = sup_norm(s.G);
    rec.dbar_G = s.dbar_G;
    rec.tolerance = s.tolerance;
    rec.holomorphic = s.holomorphic;
    rec.division_ratio = s.division_ratio;
    rec.division_ok = s.division_ok;
    rec.smoothing_error = data.sup_error;
    if (!data.clusters.empty()) {
      rec.delta1 = data.clusters.front().delta1;
      rec.delta2 = data.clusters.front().delta2;
    }
    rec.clusters = static_cast<int>(data.clusters.size());
    rec.depth = s.trace.depth;
    rec.round = 1;
    rec.seconds = s.seconds;
    net.records.push_back(std::move(rec));

    const double reach = options.theta * rho;
    for (std::size_t k : cloud.query(lambda, reach)) {
      covered[k] = 1;
      margin[k] = std::max(margin[k], reach - cloud.distance(k, lambda));
    }
    covered[i] = 1;
    margin[i] = std::max(margin[i], reach);
    if (sink) sink(s, rho);
  }
  net.covered = std::all_of(covered.begin(), covered.end(), [](auto c) { return c != 0; });
  net.coverage_margin = *std::min_element(margin.begin(), margin.end());
  return net;
}

namespace {

StoneWeierstrass fit_partition(const LambdaNet& net, const ImageCloud& cloud,
                               const RealField& beta_sum, int degree) {
  StoneWeierstrass out;
  out.degree = degree;
  const int m = cloud.m();
  const int vars = 2 * m;
  const std::size_t P = cloud.size();

  std::vector<double> lo(static_cast<std::size_t>(vars), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(vars), -std::numeric_limits<double>::infinity());
  auto coord = [&](std::size_t i, int v) {
    const cplx w = cloud.point(i)[v / 2];
    return v % 2 == 0 ? w.real() : w.imag();
  };
  for (std::size_t i = 0; i < P; ++i) {
    for (int v = 0; v < vars; ++v) {
      lo[static_cast<std::size_t>(v)] = std::min(lo[static_cast<std::size_t>(v)], coord(i, v));
      hi[static_cast<std::size_t>(v)] = std::max(hi[static_cast<std::size_t>(v)], coord(i, v));
    }
  }

  std::vector<std::vector<int>> exps;
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  std::function<void(int, int)> gen = [&](int v, int left) {
    if (v == vars) {
      exps.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(v)] = k;
      gen(v + 1, left - k);
    }
    e[static_cast<std::size_t>(v)] = 0;
  };
  gen(0, degree);

  Eigen::MatrixXd B(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(exps.size()));
  std::vector<double> cheb(static_cast<std::size_t>(degree + 1));
  for (std::size_t i = 0; i < P; ++i) {
    std::vector<std::vector<double>> T(static_cast<std::size_t>(vars));
    for (int v = 0; v < vars; ++v) {
      const double span = std::max(hi[static_cast<std::size_t>(v)] - lo[static_cast<std::size_t>(v)], 1e-12);
      const double x = 2.0 * (coord(i, v) - lo[static_cast<std::size_t>(v)]) / span - 1.0;
      auto& t = T[static_cast<std::size_t>(v)];
      t.assign(static_cast<std::size_t>(degree + 1), 1.0);
      if (degree >= 1) t[1] = x;
      for (int k = 2; k <= degree; ++k) t[static_cast<std::size_t>(k)] = 2.0 * x * t[static_cast<std::size_t>(k - 1)] - t[static_cast<std::size_t>(k - 2)];
    }
    for (std::size_t c = 0; c < exps.size(); ++c) {
      double prod = 1.0;
      for (int v = 0; v < vars; ++v) prod *= T[static_cast<std::size_t>(v)][static_cast<std::size_t>(exps[c][static_cast<std::size_t>(v)])];
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = prod;
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);

  const std::size_t J = net.records.size();
  const std::size_t batch = 64;
  for (std::size_t j0 = 0; j0 < J; j0 += batch) {
    const std::size_t nb = std::min(batch, J - j0);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& rec = net.records[j0 + b];
      for (std::size_t i : cloud.query(rec.lambda, rec.rho)) {
        if (beta_sum[i] > 0.0) {
          X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) =
              partition_bump(cloud.distance(i, rec.lambda), rec.rho) / beta_sum[i];
        }
      }
    }
    const Eigen::MatrixXd coef = qr.solve(X);
    const Eigen::MatrixXd err = B * coef - X;
    for (std::size_t b = 0; b < nb; ++b) {
      const double e_j = err.col(static_cast<Eigen::Index>(b)).cwiseAbs().maxCoeff();
      out.max_fit_error = std::max(out.max_fit_error, e_j);
      out.error_bound += e_j * net.records[j0 + b].G_sup;
    }
  }
  return out;
}

}  // namespace

Approximant approximate(const HoloMap& f, const Evaluator& g, double eps,
                        const ApproxOptions& options) {
  if (options.refine < 1) throw HypothesisError("refine", "verification refinement must be >= 1");
  const SmoothingContext ctx(f, g, eps, options.smoothing);
  const auto& dom = *f.domain();
  Approximant out;
  out.eps = eps;
  out.fine_domain = build_domain(dom.spec(), dom.h() / options.refine);
  const HoloMap f_fine = f.on(out.fine_domain);
  const ImageCloud coarse(f);
  const ImageCloud fine(f_fine);
  Assembler assembler(ctx, f_fine, coarse, fine);
  out.net = build_lambda_net(ctx, fine, options,
                             [&](const LambdaSolve& s, double rho) { assembler.add(s, rho); });
  out.assembly = assembler.finish();
  out.net.partition_floor = out.assembly.partition_floor;
  out.tolerance = 2.0 * eps;
  if (options.stone_weierstrass_degree > 0) {
    out.has_stone_weierstrass = true;
    out.stone_weierstrass =
        fit_partition(out.net, fine, assembler.beta_sum_fine(), options.stone_weierstrass_degree);
    out.stone_weierstrass.target = 0.1 * eps;
    out.stone_weierstrass.within_target = out.stone_weierstrass.max_fit_error <= 0.1 * eps;
    out.tolerance += out.stone_weierstrass.error_bound;
  }
  bool all = out.net.covered && out.assembly.chain_violations == 0 &&
             out.net.partition_floor >= 1e-8;
  for (const auto& r : out.net.records) all = all && r.holomorphic && r.division_ok;
  out.certified = all && out.assembly.sup_error <= out.tolerance;
  return out;
}

void write_lambda_csv(std::ostream& os, const LambdaNet& net) {
  const int m = net.records.empty() ? 1 : static_cast<int>(net.records.front().lambda.size());
  std::vector<std::string> header{"index"};
  for (int l = 1; l <= m; ++l) {
    header.push_back("lambda" + std::to_string(l) + "_re");
    header.push_back("lambda" + std::to_string(l) + "_im");
  }
  for (const char* c : {"rho", "M", "sup_G", "dbar_G", "tolerance", "holomorphic",
                        "division_ratio", "division_ok", "smoothing_error", "delta1", "delta2",
                        "clusters", "depth", "round"}) {
    header.emplace_back(c);
  }
  csv::Table t(header);
  for (std::size_t j = 0; j < net.records.size(); ++j) {
    const auto& r = net.records[j];
    t.row().add(j);
    for (const auto& c : r.lambda) t.add(c.real()).add(c.imag());
    t.add(r.rho).add(r.M).add(r.G_sup).add(r.dbar_G).add(r.tolerance).add(r.holomorphic)
        .add(r.division_ratio).add(r.division_ok).add(r.smoothing_error).add(r.delta1)
        .add(r.delta2).add(r.clusters).add(r.depth).add(r.round);
  }
  t.write(os);
}

}  // namespace dbk
