#pragma once

#include <stdexcept>
#include <string>

namespace mallows {

/// Parameter of the Mallows(q) measure in the fixed-q regime 0 < q < 1.
class MallowsParams {
 public:
  explicit MallowsParams(double q) : q_(q) {
    // !(q > 0) also rejects NaN
    if (!(q > 0.0) || !(q < 1.0)) {
      throw std::invalid_argument("q must lie strictly inside (0, 1), got " + std::to_string(q));
    }
  }

  double q() const noexcept { return q_; }

 private:
  double q_;
};

}  // namespace mallows
