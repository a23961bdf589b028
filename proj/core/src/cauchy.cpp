#include "dbk/cauchy.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>

namespace dbk {

namespace {

// Mixed antiderivatives: d^2 G / dx dy = x / r^2, d^2 H / dx dy = y / r^2.
long double G(long double x, long double y) {
  const long double r2 = x * x + y * y;
  if (r2 == 0.0L) return 0.0L;
  long double v = 0.0L;
  if (y != 0.0L) v += 0.5L * y * std::log(r2);
  if (x != 0.0L) v += x * std::atan(y / x);
  return v;
}

long double H(long double x, long double y) { return G(y, x); }

}  // namespace

cplx unit_cell_integral(double a, double b) {
  const long double x0 = a - 0.5L;
  const long double x1 = a + 0.5L;
  const long double y0 = b - 0.5L;
  const long double y1 = b + 0.5L;
  const long double re = G(x1, y1) - G(x0, y1) - G(x1, y0) + G(x0, y0);
  const long double im = H(x1, y1) - H(x0, y1) - H(x1, y0) + H(x0, y0);
  return {static_cast<double>(re), -static_cast<double>(im)};
}

int fft_friendly_size(int n) {
  for (int c = std::max(n, 1);; ++c) {
    int r = c;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return c;
  }
}

struct CauchyTransform::Plans {
  int pad = 0;
  fftw_complex* kernel = nullptr;  // transformed kernel
  fftw_complex* buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(kernel);
    fftw_free(buf);
  }
};

CauchyTransform::CauchyTransform(const DiscFactor& factor)
    : factor_(factor), plans_(std::make_unique<Plans>()) {
  const int side = factor.side();
  pad_ = fft_friendly_size(2 * side - 1);
  auto& p = *plans_;
  p.pad = pad_;
  const std::size_t total = static_cast<std::size_t>(pad_) * pad_;
  p.kernel = fftw_alloc_complex(total);
  p.buf = fftw_alloc_complex(total);
  p.forward = fftw_plan_dft_2d(pad_, pad_, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_2d(pad_, pad_, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);

  // u[p] = sum_q w[q] k[p - q], k(d) = (h / pi) I(d).
  const double scale = factor.h / std::numbers::pi;
  for (std::size_t i = 0; i < total; ++i) p.buf[i][0] = p.buf[i][1] = 0.0;
  const int reach = side - 1;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const cplx v = scale * unit_cell_integral(dx, dy);
      const std::size_t ix = static_cast<std::size_t>((dx + pad_) % pad_);
      const std::size_t iy = static_cast<std::size_t>((dy + pad_) % pad_);
      // Row-major (iy, ix): first index is y.
      p.buf[iy * static_cast<std::size_t>(pad_) + ix][0] = v.real();
      p.buf[iy * static_cast<std::size_t>(pad_) + ix][1] = v.imag();
    }
  }
  fftw_execute(p.forward);
  const double norm = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) {
    p.kernel[i][0] = p.buf[i][0] * norm;
    p.kernel[i][1] = p.buf[i][1] * norm;
  }
}

CauchyTransform::~CauchyTransform() = default;

void CauchyTransform::apply(const cplx* w, std::size_t w_stride, cplx* u, std::size_t u_stride) const {
  auto& p = *plans_;
  const std::size_t pad = static_cast<std::size_t>(pad_);
  const std::size_t total = pad * pad;
  for (std::size_t i = 0; i < total; ++i) p.buf[i][0] = p.buf[i][1] = 0.0;
  const std::size_t n = factor_.size();
  bool any = false;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx v = w[k * w_stride];
    if (v == cplx(0.0)) continue;
    any = true;
    const std::size_t idx = static_cast<std::size_t>(factor_.iy[k]) * pad + static_cast<std::size_t>(factor_.ix[k]);
    p.buf[idx][0] = v.real();
    p.buf[idx][1] = v.imag();
  }
  if (!any) {
    for (std::size_t k = 0; k < n; ++k) u[k * u_stride] = 0.0;
    return;
  }
  fftw_execute(p.forward);
  for (std::size_t i = 0; i < total; ++i) {
    const double a = p.buf[i][0];
    const double b = p.buf[i][1];
    const double c = p.kernel[i][0];
    const double d = p.kernel[i][1];
    p.buf[i][0] = a * c - b * d;
    p.buf[i][1] = a * d + b * c;
  }
  fftw_execute(p.backward);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = static_cast<std::size_t>(factor_.iy[k]) * pad + static_cast<std::size_t>(factor_.ix[k]);
    u[k * u_stride] = cplx(p.buf[idx][0], p.buf[idx][1]);
  }
}

Field CauchyTransform::apply(const Field& w) const {
  Field u(factor_.size());
  apply(w.data(), 1, u.data(), 1);
  return u;
}

std::shared_ptr<const CauchyTransform> cauchy_for(const DiscFactor& factor) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::shared_ptr<const CauchyTransform>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{factor.radius, factor.h}];
  if (!slot) slot = std::make_shared<const CauchyTransform>(factor);
  return slot;
}

cplx cauchy_at(const DiscFactor& factor, const Field& w, cplx z, const std::vector<std::size_t>& sources) {
  const double h = factor.h;
  cplx acc = 0.0;
  auto add = [&](std::size_t k) {
    const cplx v = w[k];
    if (v == cplx(0.0)) return;
    const cplx d = (factor.z[k] - z) / h;
    if (std::norm(d) < 16.0) {
      acc += v * unit_cell_integral(d.real(), d.imag());
    } else {
      const cplx inv = 1.0 / d;
      const cplx inv2 = inv * inv;
      acc += v * (inv - inv * inv2 * inv2 / 60.0);
    }
  };
  if (sources.empty()) {
    for (std::size_t k = 0; k < factor.size(); ++k) add(k);
  } else {
    for (std::size_t k : sources) add(k);
  }
  return -(h / std::numbers::pi) * acc;
}

}  // namespace dbk
