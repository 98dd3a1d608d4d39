#include "inquest/grad_check.hpp"

#include <cmath>
#include <random>

namespace inquest::nn {

GradCheckReport grad_check(Network& net, const Matrix& batch, Scalar step,
                           std::uint64_t probe_seed) {
  if (net.training()) throw StateError("grad_check requires eval mode (batch norm frozen)");

  // Scalar probe loss L = sum(c .* f(x)); a fixed random c avoids gradient
  // cancellation blind spots that a plain sum would have.
  std::mt19937_64 rng(probe_seed);
  std::uniform_real_distribution<Scalar> dist(0.5, 1.5);
  Matrix out = net.forward(batch);
  Matrix probe(out.rows(), out.cols());
  for (Eigen::Index r = 0; r < probe.rows(); ++r)
    for (Eigen::Index c = 0; c < probe.cols(); ++c) probe(r, c) = dist(rng);

  net.backward(probe);
  auto params = net.params();
  std::vector<Vector> analytic;
  analytic.reserve(params.size());
  for (auto& p : params)
    analytic.emplace_back(Eigen::Map<const Vector>(p.grad, p.size));

  auto loss_at = [&](std::vector<std::int8_t>& sig) {
    Matrix y = net.forward(batch);
    sig = net.kink_signature();
    return (y.array() * probe.array()).sum();
  };

  GradCheckReport report;
  for (size_t t = 0; t < params.size(); ++t) {
    auto& p = params[t];
    for (Eigen::Index i = 0; i < p.size; ++i) {
      const Scalar saved = p.value[i];
      std::vector<std::int8_t> sig_plus, sig_minus;
      p.value[i] = saved + step;
      Scalar l_plus = loss_at(sig_plus);
      p.value[i] = saved - step;
      Scalar l_minus = loss_at(sig_minus);
      p.value[i] = saved;
      if (sig_plus != sig_minus) {
        ++report.skipped;
        continue;
      }
      Scalar numeric = (l_plus - l_minus) / (2.0 * step);
      Scalar a = analytic[t][i];
      Scalar rel = std::abs(a - numeric) / std::max<Scalar>(1e-8, std::abs(a) + std::abs(numeric));
      report.max_rel_error = std::max(report.max_rel_error, rel);
      ++report.checked;
    }
  }
  return report;
}

}  // namespace inquest::nn
