#pragma once

#include "inquest/common.hpp"
#include "inquest/net.hpp"

namespace inquest::nn {

struct GradCheckReport {
  Scalar max_rel_error = 0.0;
  long checked = 0;
  long skipped = 0;  // coordinates whose +/-h passes land on different sides of an activation kink
};

// Central finite differences against the analytic backward pass, over every
// trainable parameter. The network must be in eval mode so batch norm is
// frozen. Relative error per coordinate:
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
GradCheckReport grad_check(Network& net, const Matrix& batch, Scalar step = 1e-4,
                           std::uint64_t probe_seed = 0);

}  // namespace inquest::nn
