#include "pregrasp/sac/update.hpp"

#include <cmath>

namespace pregrasp::sac {
namespace {

nn::Matrix critic_input(const nn::Matrix& states, const nn::Matrix& actions) {
  nn::Matrix x(kObservationDim + kActionDim, states.cols());
  x.topRows(kObservationDim) = states;
  x.bottomRows(kActionDim) = actions;
  return x;
}

}  // namespace

Batch Batch::gather(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices) {
  const Eigen::Index n = static_cast<Eigen::Index>(indices.size());
  Batch b;
  b.states.resize(kObservationDim, n);
  b.actions.resize(kActionDim, n);
  b.rewards.resize(n);
  b.next_states.resize(kObservationDim, n);
  b.absorbing.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Transition& t = buffer[indices[static_cast<std::size_t>(c)]];
    for (int r = 0; r < kObservationDim; ++r) {
      b.states(r, c) = t.state[static_cast<std::size_t>(r)];
      b.next_states(r, c) = t.next_state[static_cast<std::size_t>(r)];
    }
    const Eigen::Vector3d a = to_normalized(env::Action::from_array(t.action));
    b.actions.col(c) = a;
    b.rewards(c) = t.reward;
    b.absorbing(c) = t.absorbing ? 1.0 : 0.0;
  }
  return b;
}

Eigen::VectorXd critic_target(const Networks& nets, const Batch& batch, const SacConfig& cfg,
                              Rng& rng) {
  const ActorEval next_eval = actor_eval(nets.actor, batch.next_states);
  const SquashedBatch next_sample = sample_squashed(next_eval, rng);
  const nn::Matrix x = critic_input(batch.next_states, next_sample.t);
  const nn::Matrix q1 = nn::mlp_forward(nets.target1, x);
  const nn::Matrix q2 = nn::mlp_forward(nets.target2, x);
  const double alpha = nets.alpha();

  Eigen::VectorXd y(batch.rewards.size());
  for (Eigen::Index c = 0; c < y.size(); ++c) {
    const double qmin = std::min(q1(0, c), q2(0, c));
    y(c) = batch.rewards(c) +
           cfg.gamma * (1.0 - batch.absorbing(c)) * (qmin - alpha * next_sample.log_prob(c));
  }
  return y;
}

ActorLossResult actor_loss(const Networks& nets, const nn::Matrix& states, const nn::Matrix& eps,
                           double alpha) {
  const Eigen::Index n = states.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const ActorEval eval = actor_eval(nets.actor, states);
  const SquashedBatch s = squash_with_noise(eval, eps);
  const nn::Matrix xa = critic_input(states, s.t);
  nn::MlpCache qc1, qc2;
  const nn::Matrix q1 = nn::mlp_forward(nets.critic1, xa, &qc1);
  const nn::Matrix q2 = nn::mlp_forward(nets.critic2, xa, &qc2);

  ActorLossResult out;
  nn::Matrix mask1 = nn::Matrix::Zero(1, n), mask2 = nn::Matrix::Zero(1, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const bool first = q1(0, c) <= q2(0, c);
    (first ? mask1 : mask2)(0, c) = -inv_n;
    out.loss += alpha * s.log_prob(c) - std::min(q1(0, c), q2(0, c));
    out.mean_log_prob += s.log_prob(c);
  }
  out.loss *= inv_n;
  out.mean_log_prob *= inv_n;

  // dL/da through whichever critic is the per-sample minimum.
  const nn::MlpGrads qg1 = nn::mlp_backward(nets.critic1, qc1, mask1);
  const nn::MlpGrads qg2 = nn::mlp_backward(nets.critic2, qc2, mask2);
  const nn::Matrix dl_da = qg1.input.bottomRows(kActionDim) + qg2.input.bottomRows(kActionDim);

  const nn::Matrix sigma = eval.log_std.array().exp();
  nn::Matrix head_grad(2 * kActionDim, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (int r = 0; r < kActionDim; ++r) {
      const double t = s.t(r, c);
      const double dtanh = 1.0 - t * t;
      const double dl_du = dl_da(r, c) * dtanh + inv_n * alpha * 2.0 * t;
      const double se = sigma(r, c) * s.eps(r, c);
      head_grad(r, c) = dl_du;  // d/d mean
      double g_logstd = dl_du * se - inv_n * alpha;  // d/d log_std
      const double raw = eval.raw_log_std(r, c);
      if (raw <= kLogStdMin || raw >= kLogStdMax) g_logstd = 0.0;
      head_grad(kActionDim + r, c) = g_logstd;
    }
  }
  out.gradients = nn::mlp_backward(nets.actor, eval.cache, head_grad);
  return out;
}

double actor_loss_value(const Networks& nets, const nn::Matrix& states, const nn::Matrix& eps,
                        double alpha) {
  const Eigen::Index n = states.cols();
  const ActorEval eval = actor_eval(nets.actor, states);
  const SquashedBatch s = squash_with_noise(eval, eps);
  const nn::Matrix xa = critic_input(states, s.t);
  const nn::Matrix q1 = nn::mlp_forward(nets.critic1, xa);
  const nn::Matrix q2 = nn::mlp_forward(nets.critic2, xa);
  double loss = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    loss += alpha * s.log_prob(c) - std::min(q1(0, c), q2(0, c));
  }
  return loss / static_cast<double>(n);
}

void polyak_update(nn::MlpParams& target, const nn::MlpParams& online, double tau) {
  auto ts = target.tensors();
  auto os = online.tensors();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i]->rows() != os[i]->rows() || ts[i]->cols() != os[i]->cols()) {
      throw nn::ShapeMismatch("polyak_update shapes differ");
    }
    *ts[i] = tau * (*ts[i]) + (1.0 - tau) * (*os[i]);
  }
}

UpdateLosses sac_update(Networks& nets, const Batch& batch, const SacConfig& cfg, Rng& rng) {
  const Eigen::Index n = batch.rewards.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  UpdateLosses losses;

  // --- Critic regression toward the bootstrap target.
  const Eigen::VectorXd y = critic_target(nets, batch, cfg, rng);
  const nn::Matrix x = critic_input(batch.states, batch.actions);
  {
    nn::MlpCache cache1, cache2;
    const nn::Matrix q1 = nn::mlp_forward(nets.critic1, x, &cache1);
    const nn::Matrix q2 = nn::mlp_forward(nets.critic2, x, &cache2);
    nn::Matrix err1 = q1.row(0).transpose() - y;
    nn::Matrix err2 = q2.row(0).transpose() - y;
    losses.critic1 = err1.array().square().mean();
    losses.critic2 = err2.array().square().mean();
    const nn::Matrix g1 = (2.0 * inv_n) * err1.transpose();
    const nn::Matrix g2 = (2.0 * inv_n) * err2.transpose();
    nn::MlpGrads grads1 = nn::mlp_backward(nets.critic1, cache1, g1);
    nn::MlpGrads grads2 = nn::mlp_backward(nets.critic2, cache2, g2);
    nn::adam_step(nets.opt_critic1, nets.critic1, grads1, cfg.learning_rate);
    nn::adam_step(nets.opt_critic2, nets.critic2, grads2, cfg.learning_rate);
  }

  // --- Actor ascends min(Q1,Q2)(s, a_theta) - alpha * log pi, via the
  // reparameterized sample.
  double mean_log_prob = 0.0;
  {
    nn::Matrix eps(kActionDim, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (int r = 0; r < kActionDim; ++r) eps(r, c) = rng.normal();
    }
    ActorLossResult result = actor_loss(nets, batch.states, eps, nets.alpha());
    losses.actor = result.loss;
    mean_log_prob = result.mean_log_prob;
    nn::adam_step(nets.opt_actor, nets.actor, result.gradients, cfg.learning_rate);
  }

  // --- Temperature descends alpha * (-log pi - target_entropy).
  {
    const double alpha = nets.alpha();
    losses.alpha = alpha * (-mean_log_prob - cfg.target_entropy);
    const double grad = losses.alpha;  // d/d log_alpha of alpha * bracket
    nn::adam_step_scalar(nets.opt_alpha, nets.log_alpha, grad, cfg.learning_rate);
  }

  polyak_update(nets.target1, nets.critic1, cfg.tau);
  polyak_update(nets.target2, nets.critic2, cfg.tau);

  if (!std::isfinite(losses.critic1) || !std::isfinite(losses.critic2) ||
      !std::isfinite(losses.actor) || !std::isfinite(losses.alpha)) {
    throw NonFiniteLoss("sac_update produced a non-finite loss (critic1=" +
                        std::to_string(losses.critic1) + " critic2=" +
                        std::to_string(losses.critic2) + " actor=" +
                        std::to_string(losses.actor) + " alpha=" +
                        std::to_string(losses.alpha) + ")");
  }
  return losses;
}

}  // namespace pregrasp::sac
