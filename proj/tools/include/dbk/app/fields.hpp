#pragma once

#include <string>
#include <vector>

#include "dbk/types.hpp"

namespace dbk::app {

/// Named closed-form fields used as approximation targets, Toeplitz symbols
/// and density test fields. Disc names use z; bidisc names use z1, z2.
///
///   disc:   0  1  z  z^2  zbar  |z|^2  1-|z|^2  (1-|z|^2)|z|^2  bump
///   bidisc: 1  z1  z2  zbar2  (1+|z1|^2)(zbar2+z2)
///
/// "bump" is radial_cutoff(|z|, 0.2, 0.9).
Evaluator field_preset(const std::string& name, int dim);

std::vector<std::string> field_presets(int dim);

}  // namespace dbk::app
