#include "dbk/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "dbk/error.hpp"

namespace dbk {

namespace {

constexpr std::size_t kChunk = 2048;

// Golub-Welsch: Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    w[static_cast<std::size_t>(k)] = 2.0 * v * v;
  }
}

struct Disc1 {
  std::vector<cplx> z;
  std::vector<double> w;
};

Disc1 polar_disc(double R, int n_r, int n_theta) {
  std::vector<double> x, w;
  gauss_legendre(n_r, x, w);
  Disc1 d;
  for (int i = 0; i < n_r; ++i) {
    const double r = 0.5 * R * (x[static_cast<std::size_t>(i)] + 1.0);
    const double wr = 0.5 * R * w[static_cast<std::size_t>(i)] * r;
    for (int t = 0; t < n_theta; ++t) {
      const double th = 2.0 * std::numbers::pi * t / n_theta;
      d.z.push_back(std::polar(r, th));
      d.w.push_back(wr * 2.0 * std::numbers::pi / n_theta);
    }
  }
  return d;
}

// Accumulates A^* diag(s) A over the quadrature, A(q, k) = row(q)[k].
template <class Fill>
Eigen::MatrixXcd weighted_gram(const PolarQuadrature& quad, std::size_t K, const Fill& fill,
                               const Evaluator* symbol) {
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(kChunk), static_cast<Eigen::Index>(K));
  Eigen::MatrixXcd SA(static_cast<Eigen::Index>(kChunk), static_cast<Eigen::Index>(K));
  std::vector<cplx> row(K);
  for (std::size_t q0 = 0; q0 < quad.size(); q0 += kChunk) {
    const std::size_t nq = std::min(kChunk, quad.size() - q0);
    for (std::size_t q = 0; q < nq; ++q) {
      const CPoint& p = quad.points[q0 + q];
      fill(p, row.data());
      cplx s = quad.weights[q0 + q];
      if (symbol) s *= (*symbol)(p);
      for (std::size_t k = 0; k < K; ++k) {
        A(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = row[k];
        SA(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = s * row[k];
      }
    }
    const auto n = static_cast<Eigen::Index>(nq);
    G.noalias() += A.topRows(n).adjoint() * SA.topRows(n);
  }
  return G;
}

}  // namespace

PolarQuadrature PolarQuadrature::build(const DomainSpec& spec, int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 1) throw HypothesisError("quadrature", "need at least one node per direction");
  PolarQuadrature q;
  q.n_r = n_r;
  q.n_theta = n_theta;
  const Disc1 a = polar_disc(spec.radii[0], n_r, n_theta);
  if (spec.dim() == 1) {
    for (std::size_t i = 0; i < a.z.size(); ++i) {
      CPoint p;
      p[0] = a.z[i];
      q.points.push_back(p);
      q.weights.push_back(a.w[i]);
    }
    return q;
  }
  const Disc1 b = polar_disc(spec.radii[1], n_r, n_theta);
  q.points.reserve(a.z.size() * b.z.size());
  for (std::size_t j = 0; j < b.z.size(); ++j) {
    for (std::size_t i = 0; i < a.z.size(); ++i) {
      CPoint p;
      p[0] = a.z[i];
      p[1] = b.z[j];
      q.points.push_back(p);
      q.weights.push_back(a.w[i] * b.w[j]);
    }
  }
  return q;
}

double monomial_norm_squared(const DomainSpec& spec, const std::array<int, 2>& alpha) {
  double v = 1.0;
  for (int k = 0; k < spec.dim(); ++k) {
    const double R = spec.radii[static_cast<std::size_t>(k)];
    const int a = alpha[static_cast<std::size_t>(k)];
    v *= std::numbers::pi * std::pow(R, 2 * a + 2) / (a + 1);
  }
  return v;
}

BergmanBasis::BergmanBasis(const DomainSpec& spec, int N, int n_r, int n_theta)
    : spec_(spec), N_(N) {
  if (N < 0) throw HypothesisError("degree", "truncation degree must be >= 0");
  for (int d = 0; d <= N; ++d) {
    if (spec.dim() == 1) {
      alpha_.push_back({d, 0});
    } else {
      for (int a = d; a >= 0; --a) alpha_.push_back({a, d - a});
    }
  }
  for (const auto& a : alpha_) scale_.push_back(1.0 / std::sqrt(monomial_norm_squared(spec, a)));
  quad_ = PolarQuadrature::build(spec, n_r > 0 ? n_r : N + 8, n_theta > 0 ? n_theta : 2 * N + 16);

  const Eigen::MatrixXcd G =
      weighted_gram(quad_, size(), [this](const CPoint& p, cplx* out) { eval(p, out); }, nullptr);
  gram_residual_ = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  if (!(gram_residual_ <= 1e-6)) {
    std::ostringstream os;
    os << "Gram matrix deviates from the identity by " << gram_residual_;
    throw CertificateError("gram", os.str());
  }
}

std::size_t BergmanBasis::count_up_to(int d) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < size(); ++k) c += total_degree(k) <= d;
  return c;
}

void BergmanBasis::eval(const CPoint& p, cplx* out) const {
  std::array<std::vector<cplx>, 2> pw;
  for (int k = 0; k < spec_.dim(); ++k) {
    auto& v = pw[static_cast<std::size_t>(k)];
    v.assign(static_cast<std::size_t>(N_ + 1), 1.0);
    for (int e = 1; e <= N_; ++e) v[static_cast<std::size_t>(e)] = v[static_cast<std::size_t>(e - 1)] * p[k];
  }
  for (std::size_t k = 0; k < size(); ++k) {
    cplx v = pw[0][static_cast<std::size_t>(alpha_[k][0])];
    if (spec_.dim() == 2) v *= pw[1][static_cast<std::size_t>(alpha_[k][1])];
    out[k] = scale_[k] * v;
  }
}

cplx BergmanBasis::eval(std::size_t k, const CPoint& p) const {
  cplx v = std::pow(p[0], alpha_[k][0]);
  if (spec_.dim() == 2) v *= std::pow(p[1], alpha_[k][1]);
  return scale_[k] * v;
}

ToeplitzMatrix toeplitz_matrix(std::shared_ptr<const BergmanBasis> basis, const Evaluator& g,
                               std::string symbol) {
  ToeplitzMatrix out;
  out.symbol = std::move(symbol);
  out.basis = basis;
  out.T = weighted_gram(basis->quadrature(), basis->size(),
                        [&](const CPoint& p, cplx* o) { basis->eval(p, o); }, &g);
  return out;
}

double commutator_norm(const ToeplitzMatrix& A, const ToeplitzMatrix& B, int interior_degree) {
  if (A.basis->size() != B.basis->size()) throw DomainMismatch("Toeplitz matrices of different size");
  if (interior_degree >= A.degree()) {
    throw HypothesisError("interior", "interior degree must be below the truncation degree");
  }
  const Eigen::MatrixXcd C = A.T * B.T - B.T * A.T;
  const auto k = static_cast<Eigen::Index>(A.basis->count_up_to(interior_degree));
  const Eigen::MatrixXcd block = C.topLeftCorner(k, k);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double l2_norm(const BergmanBasis& basis, const Evaluator& g) {
  const auto& q = basis.quadrature();
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::norm(g(q.points[i]));
  return std::sqrt(s);
}

double toeplitz_one_residual(const ToeplitzMatrix& Tg, const Evaluator& g) {
  const BergmanBasis& b = *Tg.basis;
  // 1 = ||1|| e_0, so T_g(1) = ||1|| sum_a T(a, 0) e_a.
  const double one = std::sqrt(monomial_norm_squared(b.spec(), {0, 0}));
  const Eigen::VectorXcd c = one * Tg.T.col(0);
  const auto& q = b.quadrature();
  std::vector<cplx> row(b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    b.eval(q.points[i], row.data());
    cplx v = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) v += c(static_cast<Eigen::Index>(k)) * row[k];
    s += q.weights[i] * std::norm(v - g(q.points[i]));
  }
  return std::sqrt(s);
}

AcrResult acr_residual(const HoloMap& f, const Evaluator& g, int N, int interior_degree) {
  const auto& dom = *f.domain();
  const Mask deficient = jacobian_rank_mask(f, dom, 1e-8);
  if (std::all_of(deficient.begin(), deficient.end(), [](auto v) { return v != 0; })) {
    throw HypothesisError("rank", "the Jacobian of f has rank < n at every node");
  }
  AcrResult out;
  out.N = N;
  out.interior_degree = interior_degree >= 0 ? interior_degree : N / 2;
  const auto basis = std::make_shared<const BergmanBasis>(dom.spec(), N);
  const ToeplitzMatrix Tg = toeplitz_matrix(basis, g, "g");
  for (int j = 0; j < f.m(); ++j) {
    const ToeplitzMatrix Tf = toeplitz_matrix(basis, f.component(j), f.name() + "[" + std::to_string(j + 1) + "]");
    out.commutator_norms.push_back(commutator_norm(Tg, Tf, out.interior_degree));
  }
  out.tg1_minus_g = toeplitz_one_residual(Tg, g);
  out.g_norm = l2_norm(*basis, g);
  return out;
}

namespace {

struct SpanTerm {
  std::array<int, 2> alpha{};
  std::array<int, 3> beta{};
  int degree = 0;
};

std::vector<SpanTerm> span_terms(int n, int m, int max_degree) {
  std::vector<SpanTerm> out;
  const int vars = n + m;
  for (int d = 0; d <= max_degree; ++d) {
    std::vector<int> e(static_cast<std::size_t>(vars), 0);
    // Compositions of d into `vars` parts, lexicographically descending.
    std::function<void(int, int)> gen = [&](int v, int left) {
      if (v == vars - 1) {
        e[static_cast<std::size_t>(v)] = left;
        SpanTerm t;
        for (int k = 0; k < n; ++k) t.alpha[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)];
        for (int l = 0; l < m; ++l) t.beta[static_cast<std::size_t>(l)] = e[static_cast<std::size_t>(n + l)];
        t.degree = d;
        out.push_back(t);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[static_cast<std::size_t>(v)] = k;
        gen(v + 1, left - k);
      }
    };
    gen(0, d);
  }
  return out;
}

}  // namespace

DensityCurve lp_density_residual(const HoloMap& f, const Evaluator& field, int max_degree, int n_r,
                                 int n_theta, double max_condition) {
  const auto& spec = f.domain()->spec();
  const int n = spec.dim();
  const int m = f.m();
  if (m > 3) throw HypothesisError("components", "density check supports m <= 3");
  if (max_degree < 1) throw HypothesisError("degree", "max_degree must be >= 1");
  if (n_r <= 0) n_r = n == 1 ? std::max(48, max_degree + 2) : max_degree + 2;
  if (n_theta <= 0) n_theta = n == 1 ? std::max(96, 2 * max_degree + 4) : 2 * max_degree + 4;
  const PolarQuadrature quad = PolarQuadrature::build(spec, n_r, n_theta);
  const std::vector<SpanTerm> terms = span_terms(n, m, max_degree);
  const std::size_t K = terms.size();

  auto fill = [&](const CPoint& p, cplx* out) {
    std::array<std::vector<cplx>, 5> pw;
    for (int v = 0; v < n + m; ++v) {
      const cplx base = v < n ? p[v] : std::conj(f.eval(v - n, p));
      auto& row = pw[static_cast<std::size_t>(v)];
      row.assign(static_cast<std::size_t>(max_degree + 1), 1.0);
      for (int e = 1; e <= max_degree; ++e) row[static_cast<std::size_t>(e)] = row[static_cast<std::size_t>(e - 1)] * base;
    }
    for (std::size_t k = 0; k < K; ++k) {
      cplx v = 1.0;
      for (int a = 0; a < n; ++a) v *= pw[static_cast<std::size_t>(a)][static_cast<std::size_t>(terms[k].alpha[static_cast<std::size_t>(a)])];
      for (int l = 0; l < m; ++l) v *= pw[static_cast<std::size_t>(n + l)][static_cast<std::size_t>(terms[k].beta[static_cast<std::size_t>(l)])];
      out[k] = v;
    }
  };

  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(K));
  std::vector<cplx> tvals(quad.size());
  double tnorm2 = 0.0;
  {
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(kChunk), static_cast<Eigen::Index>(K));
    Eigen::MatrixXcd WA(static_cast<Eigen::Index>(kChunk), static_cast<Eigen::Index>(K));
    Eigen::VectorXcd t(static_cast<Eigen::Index>(kChunk));
    std::vector<cplx> row(K);
    for (std::size_t q0 = 0; q0 < quad.size(); q0 += kChunk) {
      const std::size_t nq = std::min(kChunk, quad.size() - q0);
      for (std::size_t q = 0; q < nq; ++q) {
        const CPoint& p = quad.points[q0 + q];
        fill(p, row.data());
        const double w = quad.weights[q0 + q];
        for (std::size_t k = 0; k < K; ++k) {
          A(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = row[k];
          WA(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = w * row[k];
        }
        tvals[q0 + q] = field(p);
        t(static_cast<Eigen::Index>(q)) = tvals[q0 + q];
        tnorm2 += w * std::norm(tvals[q0 + q]);
      }
      const auto nr = static_cast<Eigen::Index>(nq);
      G.noalias() += WA.topRows(nr).adjoint() * A.topRows(nr);
      b.noalias() += WA.topRows(nr).adjoint() * t.head(nr);
    }
  }

  DensityCurve curve;
  curve.field_norm = std::sqrt(tnorm2);
  std::vector<Eigen::VectorXcd> coeffs;
  std::vector<std::size_t> sizes;
  for (int d = 1; d <= max_degree; ++d) {
    std::size_t k = 0;
    while (k < K && terms[k].degree <= d) ++k;
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd diag = G.topLeftCorner(kk, kk).diagonal().real();
    const Eigen::VectorXd s = diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXcd Gs = s.asDiagonal() * G.topLeftCorner(kk, kk) * s.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gs, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(kk - 1);
    const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
      curve.truncated = true;
      std::ostringstream os;
      os << "Gram condition " << cond << " at degree " << d << " exceeds " << max_condition;
      curve.note = os.str();
      break;
    }
    const Eigen::VectorXcd cs = Gs.ldlt().solve(s.asDiagonal() * b.head(kk));
    coeffs.push_back(s.asDiagonal() * cs);
    sizes.push_back(k);
    curve.points.push_back({d, k, 0.0, 0.0, cond});
  }

  std::vector<double> res2(curve.points.size(), 0.0);
  std::vector<cplx> row(K);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    fill(quad.points[q], row.data());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      cplx v = 0.0;
      for (std::size_t k = 0; k < sizes[i]; ++k) v += coeffs[i](static_cast<Eigen::Index>(k)) * row[k];
      res2[i] += quad.weights[q] * std::norm(tvals[q] - v);
    }
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    curve.points[i].residual = std::sqrt(res2[i]);
    curve.points[i].relative = curve.field_norm > 0.0 ? curve.points[i].residual / curve.field_norm : 0.0;
  }
  return curve;
}

}  // namespace dbk
