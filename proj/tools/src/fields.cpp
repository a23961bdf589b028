#include "dbk/app/fields.hpp"

#include <cmath>

#include "dbk/error.hpp"
#include "dbk/profile.hpp"

namespace dbk::app {

Evaluator field_preset(const std::string& name, int dim) {
  if (dim == 1) {
    if (name == "0") return [](const CPoint&) { return cplx(0.0); };
    if (name == "1") return [](const CPoint&) { return cplx(1.0); };
    if (name == "z") return [](const CPoint& p) { return p[0]; };
    if (name == "z^2") return [](const CPoint& p) { return p[0] * p[0]; };
    if (name == "zbar") return [](const CPoint& p) { return std::conj(p[0]); };
    if (name == "|z|^2") return [](const CPoint& p) { return cplx(std::norm(p[0])); };
    if (name == "1-|z|^2") return [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); };
    if (name == "(1-|z|^2)|z|^2") {
      return [](const CPoint& p) {
        const double r2 = std::norm(p[0]);
        return cplx((1.0 - r2) * r2);
      };
    }
    if (name == "bump") {
      return [](const CPoint& p) { return cplx(radial_cutoff(std::abs(p[0]), 0.2, 0.9)); };
    }
  } else {
    if (name == "1") return [](const CPoint&) { return cplx(1.0); };
    if (name == "z1") return [](const CPoint& p) { return p[0]; };
    if (name == "z2") return [](const CPoint& p) { return p[1]; };
    if (name == "zbar2") return [](const CPoint& p) { return std::conj(p[1]); };
    if (name == "(1+|z1|^2)(zbar2+z2)") {
      return [](const CPoint& p) { return (1.0 + std::norm(p[0])) * (std::conj(p[1]) + p[1]); };
    }
  }
  throw HypothesisError("field", "unknown field '" + name + "' in dimension " + std::to_string(dim));
}

std::vector<std::string> field_presets(int dim) {
  if (dim == 1) {
    return {"0", "1", "z", "z^2", "zbar", "|z|^2", "1-|z|^2", "(1-|z|^2)|z|^2", "bump"};
  }
  return {"1", "z1", "z2", "zbar2", "(1+|z1|^2)(zbar2+z2)"};
}

}  // namespace dbk::app
