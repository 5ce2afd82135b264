#pragma once

#include <array>

#include "vbsge/tensor.hpp"

namespace vbs {

/// Spin-1 and spin-1/2 operator triples (x, y, z) in the bases of
/// aklt_mps.hpp: spin-1 ordered m = +1, 0, -1; spin-1/2 ordered up, down.
struct SpinOperatorSet {
  std::array<DenseTensor, 3> spin_one;
  std::array<DenseTensor, 3> spin_half;
};

const SpinOperatorSet& spin_operators();

/// sum_a S_a (x) S_a on two sites with the given single-site triples.
DenseTensor heisenberg_coupling(const std::array<DenseTensor, 3>& left,
                                const std::array<DenseTensor, 3>& right);

}  // namespace vbs
