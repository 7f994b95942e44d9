#pragma once

namespace fsc {

struct TrialResult {
  bool failed = false;
  bool syndrome_cleared = true;
  int steps = 0;            // sweep timeout steps actually executed
  int residual_weight = 0;  // weight of error + correction
};

}  // namespace fsc
