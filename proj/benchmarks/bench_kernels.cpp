#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "dbk/bergman.hpp"
#include "dbk/cauchy.hpp"
#include "dbk/dbar.hpp"
#include "dbk/forms.hpp"

using namespace dbk;

namespace {

Field smooth_field(const GridDomain& d) {
  Field f(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto p = d.point(k);
    f[k] = std::exp(0.5 * std::conj(p[0]) + 0.3 * p[1]) * (1.0 - std::norm(p[0]));
  }
  return f;
}

}  // namespace

// FFT Cauchy transform on one disc factor, 1/h nodes per unit length.
void BM_CauchyTransform(benchmark::State& state) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / static_cast<double>(state.range(0)));
  const auto C = cauchy_for(d->factor(0));
  const Field w = smooth_field(*d);
  for (auto _ : state) {
    Field u = C->apply(w);
    benchmark::DoNotOptimize(u.data());
  }
  state.counters["nodes"] = static_cast<double>(d->size());
  state.counters["pad"] = C->padded_size();
}
BENCHMARK(BM_CauchyTransform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// T_f on a bidisc form of degree (2, 1) with m = 3.
void BM_KoszulContract(benchmark::State& state) {
  auto d = build_domain(DomainSpec::polydisc(1.0, 1.0), 1.0 / static_cast<double>(state.range(0)));
  const HoloMap f = make_map("z1,z2,1-z1", d);
  const Field base = smooth_field(*d);
  KoszulForm w(d, 3, 2, 1);
  for (unsigned J : w.J_list())
    for (unsigned K : w.K_list()) w.coeff_ref(J, K) = base;
  for (auto _ : state) {
    KoszulForm t = koszul_contract(f, w);
    benchmark::DoNotOptimize(&t);
  }
  state.counters["nodes"] = static_cast<double>(d->size());
}
BENCHMARK(BM_KoszulContract)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// Discrete dbar of a bidisc (1, 0) form.
void BM_DbarApply(benchmark::State& state) {
  auto d = build_domain(DomainSpec::polydisc(1.0, 1.0), 1.0 / static_cast<double>(state.range(0)));
  const Field base = smooth_field(*d);
  KoszulForm w(d, 2, 1, 0);
  for (unsigned J : w.J_list()) w.coeff_ref(J, 0) = base;
  for (auto _ : state) {
    KoszulForm t = dbar_apply(w);
    benchmark::DoNotOptimize(&t);
  }
}
BENCHMARK(BM_DbarApply)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// Toeplitz matrix of a non-holomorphic symbol in the disc Bergman basis.
void BM_ToeplitzMatrix(benchmark::State& state) {
  const auto B = std::make_shared<const BergmanBasis>(DomainSpec::disc(1.0), static_cast<int>(state.range(0)));
  const Evaluator g = [](const CPoint& p) { return std::conj(p[0]) * std::exp(p[0]); };
  for (auto _ : state) {
    ToeplitzMatrix T = toeplitz_matrix(B, g, "g");
    benchmark::DoNotOptimize(T.T.data());
  }
}
BENCHMARK(BM_ToeplitzMatrix)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
