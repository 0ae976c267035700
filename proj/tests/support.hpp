#pragma once

#include <functional>
#include <vector>

#include "rnnlab/grad.hpp"
#include "rnnlab/rnn.hpp"

namespace rnnlab::test {

// Flattened read/write access to every weight of a network, for
// finite-difference checks.
inline std::vector<double*> param_entries(NetworkParams& p) {
  std::vector<double*> out;
  for (Mat* m : {&p.w_hh, &p.w_ih, &p.w_ho, &p.w_hv}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) out.push_back(m->data() + i);
  }
  return out;
}

inline std::vector<double> grad_entries(const ParamGrads& g) {
  std::vector<double> out;
  for (const Mat* m : {&g.w_hh, &g.w_ih, &g.w_ho, &g.w_hv}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) out.push_back(*(m->data() + i));
  }
  return out;
}

// Central finite differences of a scalar loss over every parameter entry.
inline std::vector<double> finite_difference(
    NetworkParams& p, const std::function<double()>& loss, double eps = 1e-5) {
  std::vector<double> out;
  for (double* w : param_entries(p)) {
    const double keep = *w;
    *w = keep + eps;
    const double up = loss();
    *w = keep - eps;
    const double down = loss();
    *w = keep;
    out.push_back((up - down) / (2.0 * eps));
  }
  return out;
}

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
inline double max_rel_error(const std::vector<double>& a,
                            const std::vector<double>& b,
                            double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

// Hand-built weights that fixate until the decision step, then pick the
// choice matching the sign of the context-relevant coherence. Neurons:
// 0 fixation tracker, 1/2 +/- integrators for pair A, 3/4 for pair B.
inline NetworkParams oracle_params() {
  const int n = 5;
  NetworkParams p;
  p.n_hidden = n;
  p.delta = 0.0;
  p.w_hh = Mat::Zero(n, n);
  p.w_ih = Mat::Zero(n, kNumInputs);
  p.w_ho = Mat::Zero(kNumActions, n);
  p.w_hv = Mat::Zero(1, n);

  p.w_ih(0, kChanFixation) = 10.0;  // no self-recurrence: drops with F
  for (int i = 1; i < n; ++i) p.w_hh(i, i) = 1.0;

  const double gate = 40.0;  // context cue shuts the irrelevant integrators
  p.w_ih(1, kChanA1) = 1.0;
  p.w_ih(1, kChanA2) = -1.0;
  p.w_ih(1, kChanCtxB) = -gate;
  p.w_ih(2, kChanA1) = -1.0;
  p.w_ih(2, kChanA2) = 1.0;
  p.w_ih(2, kChanCtxB) = -gate;
  p.w_ih(3, kChanB1) = 1.0;
  p.w_ih(3, kChanB2) = -1.0;
  p.w_ih(3, kChanCtxA) = -gate;
  p.w_ih(4, kChanB1) = -1.0;
  p.w_ih(4, kChanB2) = 1.0;
  p.w_ih(4, kChanCtxA) = -gate;

  p.w_ho(kActFixate, 0) = 1.0;
  p.w_ho(kActChoice1, 1) = 1.0;
  p.w_ho(kActChoice1, 3) = 1.0;
  p.w_ho(kActChoice2, 2) = 1.0;
  p.w_ho(kActChoice2, 4) = 1.0;
  return p;
}

}  // namespace rnnlab::test
