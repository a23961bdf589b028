#pragma once

#include "dbk/grid.hpp"

namespace dbk {

/// Centred Wirtinger difference d/dzbar_k = (D_x + i D_y) / 2 along factor
/// k, evaluated on nodes with a full stencil (depth >= 1) and set to zero
/// elsewhere.
Field wirtinger_dbar(const GridDomain& domain, const Field& u, int k);

/// Adds scale * d/dzbar_k u into out (same node set as above).
void add_wirtinger_dbar(const GridDomain& domain, const Field& u, int k, cplx scale, Field& out);

/// Centred difference d/dz_k = (D_x - i D_y) / 2.
Field wirtinger_d(const GridDomain& domain, const Field& u, int k);

}  // namespace dbk
