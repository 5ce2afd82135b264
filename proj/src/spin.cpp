#include "vbsge/spin.hpp"

#include <cmath>

namespace vbs {

namespace {

SpinOperatorSet make_spin_operators() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  SpinOperatorSet s;

  DenseTensor x1 = DenseTensor::matrix(3, 3), y1 = DenseTensor::matrix(3, 3),
              z1 = DenseTensor::matrix(3, 3);
  x1(0, 1) = x1(1, 0) = x1(1, 2) = x1(2, 1) = r;
  y1(0, 1) = -i * r;
  y1(1, 0) = i * r;
  y1(1, 2) = -i * r;
  y1(2, 1) = i * r;
  z1(0, 0) = 1.0;
  z1(2, 2) = -1.0;
  s.spin_one = {x1, y1, z1};

  DenseTensor xh = DenseTensor::matrix(2, 2), yh = DenseTensor::matrix(2, 2),
              zh = DenseTensor::matrix(2, 2);
  xh(0, 1) = xh(1, 0) = 0.5;
  yh(0, 1) = -0.5 * i;
  yh(1, 0) = 0.5 * i;
  zh(0, 0) = 0.5;
  zh(1, 1) = -0.5;
  s.spin_half = {xh, yh, zh};
  return s;
}

}  // namespace

const SpinOperatorSet& spin_operators() {
  static const SpinOperatorSet ops = make_spin_operators();
  return ops;
}

DenseTensor heisenberg_coupling(const std::array<DenseTensor, 3>& left,
                                const std::array<DenseTensor, 3>& right) {
  DenseTensor out = kron(left[0], right[0]);
  out += kron(left[1], right[1]);
  out += kron(left[2], right[2]);
  return out;
}

}  // namespace vbs
