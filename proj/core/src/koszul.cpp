#include "dbk/koszul.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dbk/error.hpp"

namespace dbk {

namespace {

std::string degree_str(int r, int s) {
  std::ostringstream os;
  os << '(' << r << ',' << s << ')';
  return os.str();
}

double contract_scale(const HoloMap& f, const KoszulForm& W) {
  return std::max(1.0, f.sup_bound()) * std::max(W.sup(), 1e-300);
}

KoszulForm section_from(const HoloMap& f, const RealField* chi) {
  const auto& dom = f.domain();
  KoszulForm X(dom, f.m(), 1, 0);
  const RealField norm2 = f.norm_squared();
  for (int j = 0; j < f.m(); ++j) {
    Field& g = X.coeff_ref(1u << j, 0u);
    const Field& fj = f.samples(j);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double c = chi ? (*chi)[i] : 1.0;
      g[i] = c == 0.0 ? cplx(0.0) : c * std::conj(fj[i]) / norm2[i];
    }
  }
  return X;
}

}  // namespace

KoszulForm build_section_cutoff(const HoloMap& f, const CutOff& chi, double* floor) {
  const RealField norm2 = f.norm_squared();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < norm2.size(); ++i) {
    if (chi.values[i] > 0.0) lo = std::min(lo, norm2[i]);
  }
  if (floor) *floor = lo;
  if (lo < 1e-8) {
    std::ostringstream os;
    os << "support of the cut-off meets the zero set of f (min sum|f|^2 = " << lo << ")";
    throw HypothesisError("zero-set", os.str());
  }
  return section_from(f, &chi.values);
}

GlobalSection build_section_global(const HoloMap& f, double eps0) {
  GlobalSection out;
  const RealField norm2 = f.norm_squared();
  out.min_norm_squared = *std::min_element(norm2.begin(), norm2.end());
  if (!(out.min_norm_squared > eps0)) {
    std::ostringstream os;
    os << "sum |f_l|^2 is not bounded below by " << eps0 << " (grid minimum " << out.min_norm_squared
       << ")";
    throw HypothesisError("bounded-below", os.str());
  }
  out.X = section_from(f, nullptr);
  out.dbar_sup = dbar_apply(out.X).sup_valid();

  // |dbar g_j| <= |f_j'| / N + |f_j| sum_l |f_l| |f_l'| / N^2, N = min sum|f|^2.
  const auto& dom = *f.domain();
  std::vector<double> dsup(static_cast<std::size_t>(f.m()), 0.0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const Eigen::MatrixXcd J = f.jacobian(dom.point(i));
    for (int j = 0; j < f.m(); ++j) {
      dsup[static_cast<std::size_t>(j)] = std::max(dsup[static_cast<std::size_t>(j)], J.row(j).norm());
    }
  }
  const double N = out.min_norm_squared;
  double cross = 0.0;
  for (int l = 0; l < f.m(); ++l) cross += f.sup_bound(l) * dsup[static_cast<std::size_t>(l)];
  for (int j = 0; j < f.m(); ++j) {
    out.dbar_bound = std::max(out.dbar_bound, dsup[static_cast<std::size_t>(j)] / N + f.sup_bound(j) * cross / (N * N));
  }
  return out;
}

KoszulForm lift_lemma1(const HoloMap& f, const KoszulForm& W, const CutOff& chi) {
  const double scale = contract_scale(f, W);
  const double tw = koszul_contract(f, W).sup_valid();
  if (tw > 1e-10 * scale) {
    std::ostringstream os;
    os << "T_f W = " << tw << " is not zero";
    throw HypothesisError("contraction", os.str());
  }
  const Mask supp = W.support_mask();
  for (std::size_t i = 0; i < supp.size(); ++i) {
    if (supp[i] && chi.values[i] != 1.0) {
      throw HypothesisError("support", "supp W is not inside the region where chi = 1");
    }
  }
  if (W.r() >= W.m()) {
    if (W.sup() > 1e-10 * std::max(1.0, f.sup_bound())) {
      throw HypothesisError("top-degree", "W of degree r = m with T_f W = 0 must vanish");
    }
    return KoszulForm(W.domain(), W.m(), W.r() + 1, W.s());
  }
  const KoszulForm X = build_section_cutoff(f, chi);
  return wedge(X, W);
}

CutOff auto_cutoff(const HoloMap& f, const KoszulForm& W) {
  const auto& dom = *W.domain();
  const double h = dom.h();
  if (dom.dim() == 1) return bump(dom, W.support_mask(), 0.25 * h, 0.5 * h, false);
  return bump(dom, W.support_mask(), 1.01 * h, 2.0 * h, dom.dim() == 2 && f.n() == 2);
}

double tol_descent(int depth, double h, double x_sup, double w_sup) {
  return depth * 20.0 * h * std::pow(1.0 + x_sup, depth) * w_sup;
}

std::string DescentTrace::report() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "depth " << depth << ", sup|X| " << x_sup << ", sup|W| " << w_sup << '\n';
  for (const auto& st : stages) {
    os << "  [" << st.level << "] " << std::left << std::setw(8) << st.step << std::right
       << " degree " << degree_str(st.r, st.s) << "  sup " << st.sup;
    if (!st.defect_name.empty()) os << "  " << st.defect_name << ' ' << st.defect;
    os << '\n';
  }
  for (const auto& n : notes) os << "  note: " << n << '\n';
  os << "final residual " << final_residual << " (tolerance " << tolerance << ") "
     << (certified ? "PASS" : "FAIL") << '\n';
  return os.str();
}

namespace {

struct DescentRun {
  const HoloMap& f;
  const DescentOptions& opt;
  DescentTrace& trace;
  double h;

  void record(int level, const std::string& step, const KoszulForm& w, double defect,
              const std::string& defect_name) {
    trace.stages.push_back({level, step, w.r(), w.s(), w.truncated() ? 0.0 : w.sup_valid(), defect,
                            defect_name});
    if (opt.keep_forms) trace.forms.push_back(w);
  }

  // Tolerance for identities that hold only up to discretisation below the
  // top level: the input there is itself a discrete derivative.
  double approx_tol(const KoszulForm& W) const {
    return 20.0 * h * std::max(1.0, f.sup_bound()) * W.sup_valid();
  }

  KoszulForm descend(const KoszulForm& W, int level) {
    trace.depth = std::max(trace.depth, level);
    KoszulForm zero(W.domain(), W.m(), W.r() + 1, W.s() - 1);
    if (W.truncated() || W.sup() == 0.0) {
      record(level, "zero", zero, 0.0, "");
      return zero;
    }
    const double tw = koszul_contract(f, W, opt.sign).sup_valid();
    const double allowed = level == 1 ? 1e-10 * contract_scale(f, W) : approx_tol(W);
    if (tw > allowed) {
      std::ostringstream os;
      os << "T_f W = " << tw << " exceeds " << allowed << " at recursion level " << level;
      throw HypothesisError("contraction", os.str());
    }
    if (W.r() >= W.m()) {
      const double lim = level == 1 ? 1e-10 * std::max(1.0, f.sup_bound()) : approx_tol(W) / std::max(1.0, f.sup_bound());
      if (W.sup_valid() > lim) {
        std::ostringstream os;
        os << "degree r = m input has sup " << W.sup_valid() << " > " << lim;
        throw HypothesisError("top-degree", os.str());
      }
      record(level, "top", zero, W.sup_valid(), "sup|W|");
      return zero;
    }
    const CutOff chi = auto_cutoff(f, W);
    double floor = 0.0;
    const KoszulForm X = build_section_cutoff(f, chi, &floor);
    if (floor < kZeroSetFloor) {
      std::ostringstream os;
      os << "supp W comes within sum|f|^2 = " << floor << " of the zero set";
      throw HypothesisError("zero-set", os.str());
    }
    trace.x_sup = std::max(trace.x_sup, X.sup());

    KoszulForm Y1 = wedge(X, W);
    record(level, "lift", Y1, sup_difference(koszul_contract(f, Y1, opt.sign), W, W.valid_mask()),
           "|T_f Y1 - W|");

    if (W.s() >= W.n()) {
      DbarSolution sol = solve_dbar_form(Y1);
      record(level, "solve", sol.solution, sol.residual_sup, "residual");
      return std::move(sol.solution);
    }

    KoszulForm V = dbar_apply(Y1);
    record(level, "dbar", V, 0.0, "");
    const KoszulForm Y2 = descend(V, level + 1);
    V = KoszulForm();

    Y1 -= koszul_contract(f, Y2, opt.sign);
    KoszulForm& Y3 = Y1;
    const KoszulForm dY3 = dbar_apply(Y3);
    const double closed = dY3.sup(dY3.valid_mask());
    record(level, "correct", Y3, closed, "|dbar Y3|");
    if (closed > tol_closed(Y3)) {
      std::ostringstream os;
      os << "Y3 = Y1 - T_f Y2 is not closed: " << closed << " > " << tol_closed(Y3);
      throw CertificateError("closedness", os.str());
    }
    DbarSolution sol = solve_dbar_form(Y3);
    record(level, "solve", sol.solution, sol.residual_sup, "residual");
    return std::move(sol.solution);
  }
};

}  // namespace

DescentResult descent_lemma2(const HoloMap& f, const KoszulForm& W, const DescentOptions& options) {
  if (f.domain() != W.domain()) throw DomainMismatch("map and form live on different grids");
  if (W.s() < 1) throw HypothesisError("degree", "descent needs s >= 1");
  DescentResult out;
  out.trace.w_sup = W.sup_valid();
  const double h = W.domain()->h();
  if (!W.truncated() && W.sup() > 0.0) {
    const KoszulForm dW = dbar_apply(W);
    const double closed = dW.sup(dW.valid_mask());
    if (closed > tol_closed(W)) {
      std::ostringstream os;
      os << "dbar W = " << closed << " exceeds " << tol_closed(W);
      throw HypothesisError("closedness", os.str());
    }
  }
  DescentRun run{f, options, out.trace, h};
  out.Y = run.descend(W, 1);

  const KoszulForm TdY = koszul_contract(f, dbar_apply(out.Y), options.sign);
  Mask where = W.domain()->depth_mask(std::max(1, W.collar()));
  out.trace.final_residual = sup_difference(TdY, W, where);
  out.trace.tolerance = tol_descent(out.trace.depth, h, out.trace.x_sup, out.trace.w_sup);
  out.trace.certified = out.trace.final_residual <= out.trace.tolerance;
  return out;
}

namespace {

struct Prop1Run {
  const HoloMap& f;
  const KoszulForm& X;
  const Prop1Options& opt;
  DescentTrace& trace;
  double h;

  void record(int level, const std::string& step, const KoszulForm& w, double defect,
              const std::string& defect_name) {
    trace.stages.push_back({level, step, w.r(), w.s(), w.truncated() ? 0.0 : w.sup(), defect, defect_name});
  }

  KoszulForm lift(const KoszulForm& W, int level) {
    trace.depth = std::max(trace.depth, level);
    KoszulForm zero(W.domain(), W.m(), W.r() + 1, W.s());
    if (W.truncated() || W.sup() == 0.0) return zero;
    KoszulForm Yt = wedge(X, W);
    if (Yt.truncated()) {
      const double lim = 20.0 * h * std::max(1.0, f.sup_bound()) * std::max(1.0, trace.w_sup);
      if (W.sup() > lim) {
        std::ostringstream os;
        os << "degree r = m input has sup " << W.sup() << " > " << lim;
        throw HypothesisError("top-degree", os.str());
      }
      record(level, "top", Yt, W.sup(), "sup|W|");
      return Yt;
    }
    record(level, "lift", Yt, 0.0, "");
    KoszulForm V = dbar_apply(Yt);
    if (V.truncated()) return Yt;
    record(level, "dbar", V, 0.0, "");
    const KoszulForm Y1 = lift(V, level + 1);
    V = KoszulForm();
    if (Y1.truncated() || Y1.sup() == 0.0) return Yt;
    DbarSolution sol = solve_dbar_form(Y1);
    record(level, "solve", sol.solution, sol.residual_sup, "residual");
    Yt -= koszul_contract(f, sol.solution, opt.sign);
    record(level, "correct", Yt, 0.0, "");
    return Yt;
  }
};

}  // namespace

Prop1Result lift_prop1(const HoloMap& f, const KoszulForm& W, double eps0, const Prop1Options& options) {
  if (f.domain() != W.domain()) throw DomainMismatch("map and form live on different grids");
  const auto& dom = W.domain();
  const GlobalSection sec = build_section_global(f, eps0);
  Prop1Result out;
  out.trace.x_sup = sec.X.sup();
  out.trace.w_sup = W.truncated() ? 0.0 : W.sup();
  if (!W.truncated() && W.sup() > 0.0) {
    const double tw = koszul_contract(f, W, options.sign).sup();
    if (tw > 1e-10 * contract_scale(f, W)) {
      std::ostringstream os;
      os << "T_f W = " << tw << " is not zero";
      throw HypothesisError("contraction", os.str());
    }
    const KoszulForm dW = dbar_apply(W);
    if (!dW.truncated() && dW.sup(dW.valid_mask()) > tol_closed(W)) {
      throw HypothesisError("closedness", "dbar W is not zero");
    }
  }

  KoszulForm Win = W;
  out.certified_nodes = dom->depth_mask(1);
  if (dom->dim() == 2) {
    if (!options.region) {
      throw HypothesisError("region", "on a polydisc lift_prop1 needs a verification-region cut-off");
    }
    Win.multiply(options.region->values);
    const Mask inner = options.region->inner_mask();
    for (std::size_t i = 0; i < inner.size(); ++i) out.certified_nodes[i] &= inner[i];
    std::ostringstream os;
    os << "W multiplied by a cut-off (r_inner " << options.region->r_inner << ", r_outer "
       << options.region->r_outer << "); identities certified where it equals 1";
    out.trace.notes.push_back(os.str());
  }

  Prop1Run run{f, sec.X, options, out.trace, dom->h()};
  out.Y = run.lift(Win, 1);

  out.identity_defect = sup_difference(koszul_contract(f, out.Y, options.sign), W, out.certified_nodes);
  const KoszulForm dY = dbar_apply(out.Y);
  out.dbar_defect = dY.truncated() ? 0.0 : dY.sup(out.certified_nodes);
  out.trace.final_residual = std::max(out.identity_defect, out.dbar_defect);
  out.trace.tolerance = tol_descent(std::max(1, out.trace.depth), dom->h(), out.trace.x_sup, out.trace.w_sup);
  out.trace.certified = out.trace.final_residual <= out.trace.tolerance;
  return out;
}

CoronaResult corona_solve(const HoloMap& f, double eps0, const Prop1Options& options) {
  const auto& dom = f.domain();
  const KoszulForm one = KoszulForm::scalar(dom, f.m(), Field(dom->size(), cplx(1.0)));
  Prop1Result p = lift_prop1(f, one, eps0, options);
  CoronaResult out;
  out.certified_nodes = p.certified_nodes;
  out.trace = std::move(p.trace);
  out.tolerance = out.trace.tolerance;
  Mask all(dom->size(), 1);
  if (dom->dim() == 2) all = options.region->inner_mask();
  for (int j = 0; j < f.m(); ++j) {
    out.g.push_back(p.Y.coeff(1u << j, 0u));
  }
  for (std::size_t i = 0; i < dom->size(); ++i) {
    if (!all[i]) continue;
    cplx s = 0.0;
    for (int j = 0; j < f.m(); ++j) s += f.samples(j)[i] * out.g[static_cast<std::size_t>(j)][i];
    out.identity_defect = std::max(out.identity_defect, std::abs(s - 1.0));
  }
  const KoszulForm dY = dbar_apply(p.Y);
  for (int j = 0; j < f.m(); ++j) {
    out.g_sup.push_back(sup_norm(out.g[static_cast<std::size_t>(j)], all));
    double d = 0.0;
    if (!dY.truncated()) {
      for (unsigned K : dY.K_list()) d = std::max(d, sup_norm(dY.coeff(1u << j, K), out.certified_nodes));
    }
    out.dbar_sup.push_back(d);
  }
  return out;
}

}  // namespace dbk
