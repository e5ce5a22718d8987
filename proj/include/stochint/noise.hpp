#pragma once

#include <stdexcept>
#include <string>

namespace stochint {

// Pair of noise component indices against which the two integration layers
// run. Component 0 is the time component (dw^(0) = dt); components 1..m are
// independent scalar Wiener processes.
struct NoisePair {
  int i1;
  int i2;
  int m;  // number of stochastic components available

  NoisePair(int i1_, int i2_, int m_) : i1(i1_), i2(i2_), m(m_) {
    if (m < 1) throw std::invalid_argument("NoisePair: need m >= 1");
    if (i1 < 0 || i1 > m || i2 < 0 || i2 > m) {
      throw std::invalid_argument("NoisePair: components must lie in [0, m]; got i1=" +
                                  std::to_string(i1) + ", i2=" + std::to_string(i2) +
                                  ", m=" + std::to_string(m));
    }
  }

  // The only case with a nonzero Ito/Stratonovich gap.
  bool equal_nonzero() const { return i1 == i2 && i1 != 0; }
};

}  // namespace stochint
