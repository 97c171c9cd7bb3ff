#pragma once

#include <utility>

#include "loopsim/fock.hpp"
#include "loopsim/program.hpp"

namespace loopsim {

/// Lossy squeezed vacuum oriented along the requested quadrature.
FockState make_ancilla(const AncillaSpec& spec, int cutoff);

/// Heralded photon-subtracted squeezed vacuum. Returns the normalized
/// conditional state and the herald probability. Preparation loss is applied
/// after heralding. Throws if the herald probability is numerically empty.
std::pair<FockState, double> make_cat(const CatSpec& spec, int cutoff);

}  // namespace loopsim
