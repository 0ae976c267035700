#include "rnnlab/grad.hpp"

#include <cmath>

namespace rnnlab {

ParamGrads ParamGrads::zeros(int n) {
  ParamGrads g;
  g.w_hh = Mat::Zero(n, n);
  g.w_ih = Mat::Zero(n, kNumInputs);
  g.w_ho = Mat::Zero(kNumActions, n);
  g.w_hv = Mat::Zero(1, n);
  return g;
}

void ParamGrads::add(const ParamGrads& o) {
  w_hh += o.w_hh;
  w_ih += o.w_ih;
  w_ho += o.w_ho;
  w_hv += o.w_hv;
}

void ParamGrads::scale(double s) {
  w_hh *= s;
  w_ih *= s;
  w_ho *= s;
  w_hv *= s;
}

double ParamGrads::global_norm() const {
  double sq = w_hh.squaredNorm() + w_ih.squaredNorm() + w_ho.squaredNorm() +
              w_hv.squaredNorm();
  return std::sqrt(sq);
}

double clip_global_norm(ParamGrads& g, double max_norm) {
  const double norm = g.global_norm();
  if (norm > max_norm && norm > 0.0) g.scale(max_norm / norm);
  return norm;
}

EpisodeTape forward_tape(const NetworkParams& p,
                         const std::vector<const Mat*>& episode_inputs) {
  const int batch = static_cast<int>(episode_inputs.size());
  const int n = p.n_hidden;

  EpisodeTape tape;
  tape.lengths.resize(batch);
  int t_max = 0;
  for (int b = 0; b < batch; ++b) {
    tape.lengths[b] = static_cast<int>(episode_inputs[b]->rows());
    t_max = std::max(t_max, tape.lengths[b]);
  }
  tape.inputs.assign(t_max, Mat::Zero(kNumInputs, batch));
  tape.hidden.assign(t_max, Mat(n, batch));
  tape.alive = Eigen::ArrayXXd::Zero(batch, t_max);

  for (int t = 0; t < t_max; ++t) {
    for (int b = 0; b < batch; ++b) {
      if (t < tape.lengths[b]) {
        tape.inputs[t].col(b) = episode_inputs[b]->row(t).transpose();
        tape.alive(b, t) = 1.0;
      }
    }
  }

  Mat h = Mat::Zero(n, batch);
  for (int t = 0; t < t_max; ++t) {
    h = step_batch(p, h, tape.inputs[t]);
    if (!h.allFinite()) {
      throw NumericError("non-finite activation", t);
    }
    tape.hidden[t] = h;
  }
  return tape;
}

ParamGrads bptt_backward(const NetworkParams& p, const EpisodeTape& tape,
                         const std::vector<Mat>& d_logits,
                         const std::vector<Mat>& d_values) {
  const int n = p.n_hidden;
  const int batch = tape.batch();
  const int t_max = tape.t_max();
  const bool has_logits = !d_logits.empty();
  const bool has_values = !d_values.empty();

  ParamGrads g = ParamGrads::zeros(n);
  Mat dh = Mat::Zero(n, batch);
  Mat dpre(n, batch);

  for (int t = t_max - 1; t >= 0; --t) {
    if (has_logits) {
      g.w_ho.noalias() += d_logits[t] * tape.hidden[t].transpose();
      dh.noalias() += p.w_ho.transpose() * d_logits[t];
    }
    if (has_values) {
      g.w_hv.noalias() += d_values[t] * tape.hidden[t].transpose();
      dh.noalias() += p.w_hv.transpose() * d_values[t];
    }
    // ReLU subgradient: 0 at 0.
    dpre = (tape.hidden[t].array() > 0.0).cast<double>() * dh.array();
    if (t > 0) {
      g.w_hh.noalias() += dpre * tape.hidden[t - 1].transpose();
    }
    g.w_ih.noalias() += dpre * tape.inputs[t].transpose();
    dh.noalias() = p.w_hh.transpose() * dpre;
  }
  return g;
}

double cross_entropy_loss(const NetworkParams& p,
                          const std::vector<const Mat*>& episode_inputs,
                          const std::vector<const VecI*>& targets,
                          ParamGrads* out) {
  EpisodeTape tape = forward_tape(p, episode_inputs);
  const int batch = tape.batch();
  const int t_max = tape.t_max();

  long count = 0;
  for (int b = 0; b < batch; ++b) count += tape.lengths[b];
  const double inv_count = 1.0 / static_cast<double>(count);

  std::vector<Mat> d_logits;
  if (out) d_logits.assign(t_max, Mat::Zero(kNumActions, batch));

  double loss = 0.0;
  for (int t = 0; t < t_max; ++t) {
    const Mat logits = p.w_ho * tape.hidden[t];  // 3 x batch
    for (int b = 0; b < batch; ++b) {
      if (t >= tape.lengths[b]) continue;
      const Vec probs = softmax(logits.col(b));
      const int target = (*targets[b])[t];
      loss -= std::log(std::max(probs[target], 1e-300)) * inv_count;
      if (out) {
        Vec d = probs * inv_count;
        d[target] -= inv_count;
        d_logits[t].col(b) = d;
      }
    }
  }
  if (out) {
    *out = bptt_backward(p, tape, d_logits, {});
  }
  return loss;
}

PpoLossParts ppo_loss(const NetworkParams& p,
                      const std::vector<const PpoEpisodeData*>& episodes,
                      const PpoCoeffs& c, ParamGrads* out) {
  std::vector<const Mat*> inputs;
  inputs.reserve(episodes.size());
  for (const auto* e : episodes) inputs.push_back(&e->inputs);

  EpisodeTape tape = forward_tape(p, inputs);
  const int batch = tape.batch();
  const int t_max = tape.t_max();

  long count = 0;
  for (int b = 0; b < batch; ++b) count += tape.lengths[b];
  const double inv_count = 1.0 / static_cast<double>(count);

  std::vector<Mat> d_logits, d_values;
  if (out) {
    d_logits.assign(t_max, Mat::Zero(kNumActions, batch));
    d_values.assign(t_max, Mat::Zero(1, batch));
  }

  PpoLossParts parts;
  for (int t = 0; t < t_max; ++t) {
    const Mat logits = p.w_ho * tape.hidden[t];  // 3 x batch
    const Mat values = p.w_hv * tape.hidden[t];  // 1 x batch
    for (int b = 0; b < batch; ++b) {
      if (t >= tape.lengths[b]) continue;
      const auto& ep = *episodes[b];
      const Vec probs = softmax(logits.col(b));
      const int a = ep.actions[t];
      const double log_p = std::log(std::max(probs[a], 1e-300));
      const double adv = ep.advantages[t];
      const double rho = std::exp(log_p - ep.old_log_probs[t]);
      const double rho_clip =
          std::min(std::max(rho, 1.0 - c.clip_eps), 1.0 + c.clip_eps);

      // -min(rho A, clip(rho) A); gradient flows only through the
      // unclipped branch when it is the active one (ties included).
      const double unclipped = rho * adv;
      const double clipped = rho_clip * adv;
      const bool use_unclipped = unclipped <= clipped;
      parts.policy -= std::min(unclipped, clipped) * inv_count;

      const double v = values(0, b);
      const double verr = v - ep.returns[t];
      parts.value += verr * verr * inv_count;

      double entropy = 0.0;
      for (int k = 0; k < kNumActions; ++k) {
        if (probs[k] > 0.0) entropy -= probs[k] * std::log(probs[k]);
      }
      parts.entropy += entropy * inv_count;

      if (out) {
        Vec d = Vec::Zero(kNumActions);
        if (use_unclipped) {
          // d(-rho A)/dlogits = -rho A (onehot - probs)
          d = rho * adv * probs;
          d[a] -= rho * adv;
        }
        if (c.entropy_coef != 0.0) {
          // dH/dlogit_k = -p_k (log p_k + H)
          for (int k = 0; k < kNumActions; ++k) {
            const double lp =
                probs[k] > 0.0 ? std::log(probs[k]) : 0.0;
            d[k] += c.entropy_coef * probs[k] * (lp + entropy);
          }
        }
        d_logits[t].col(b) = d * inv_count;
        d_values[t](0, b) = 2.0 * c.value_coef * verr * inv_count;
      }
    }
  }
  parts.total = parts.policy + c.value_coef * parts.value -
                c.entropy_coef * parts.entropy;
  if (out) {
    *out = bptt_backward(p, tape, d_logits, d_values);
  }
  return parts;
}

}  // namespace rnnlab
