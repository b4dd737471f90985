"""Deterministic actor-critic agent with target networks, Gaussian
exploration noise, and soft target updates.

Update helpers return (loss, grads) pairs so the gradient oracle in the
test suite can check them against finite differences without stepping
the optimizer.
"""
from __future__ import annotations

import numpy as np

from .rl_core import Adam, Mlp, ReplayBuffer, RewardScale, soft_update


class DdpgAgent:
    def __init__(self, state_dim: int, action_dim: int, *, hidden=(256, 256),
                 lr=1e-4, gamma=0.99, soft_rate=5e-4,
                 noise_start=0.1, noise_end=0.1, noise_decay_steps=8000,
                 buffer_capacity=1_000_000, batch_size=64, seed=0):
        rng = np.random.default_rng(seed)
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.gamma = gamma
        self.soft_rate = soft_rate
        self.noise_start = noise_start
        self.noise_end = noise_end
        self.noise_decay_steps = noise_decay_steps
        self.batch_size = batch_size
        self.step_count = 0

        self.actor = Mlp([state_dim, *hidden, action_dim], "tanh", rng)
        self.critic = Mlp([state_dim + action_dim, *hidden, 1], "linear", rng)
        self.target_actor = self.actor.copy()
        self.target_critic = self.critic.copy()
        self.actor_opt = Adam(self.actor.params, lr=lr)
        self.critic_opt = Adam(self.critic.params, lr=lr)
        self.buffer = ReplayBuffer(buffer_capacity, state_dim, action_dim)
        self.reward_scale = RewardScale()
        self.rng = rng

    # ---- acting ---------------------------------------------------------
    def noise_scale(self) -> float:
        frac = min(self.step_count / max(self.noise_decay_steps, 1), 1.0)
        return self.noise_start + frac * (self.noise_end - self.noise_start)

    def select_action(self, state, explore: bool = True) -> np.ndarray:
        a = self.actor(np.atleast_2d(state))[0]
        if explore:
            a = a + self.rng.normal(0.0, self.noise_scale(), size=a.shape)
        return np.clip(a, -1.0, 1.0)

    # ---- updates --------------------------------------------------------
    def target_value(self, batch) -> np.ndarray:
        """y_i = r + gamma * target_critic(s', target_actor(s'));
        bootstrap masked on terminal transitions."""
        a_next = self.target_actor(batch["next_states"])
        q_next = self.target_critic(
            np.concatenate([batch["next_states"], a_next], axis=1))[:, 0]
        r = self.reward_scale.normalize(batch["rewards"])
        return r + self.gamma * (1.0 - batch["dones"]) * q_next

    def critic_loss_and_grads(self, batch):
        y = self.target_value(batch)
        x = np.concatenate([batch["states"], batch["actions"]], axis=1)
        q, cache = self.critic.forward(x)
        q = q[:, 0]
        d = q.size
        loss = float(np.mean((y - q) ** 2))
        grads, _ = self.critic.backward(cache, (2.0 * (q - y) / d)[:, None])
        return loss, grads

    def critic_update(self, batch) -> float:
        loss, grads = self.critic_loss_and_grads(batch)
        self.critic_opt.step(self.critic.params, grads)
        return loss

    def actor_objective_and_grads(self, batch):
        """J = mean critic(s, actor(s)); grads are of J itself (caller
        ascends by stepping along -grads)."""
        s = batch["states"]
        a, a_cache = self.actor.forward(s)
        x = np.concatenate([s, a], axis=1)
        q, c_cache = self.critic.forward(x)
        d = q.shape[0]
        objective = float(np.mean(q))
        _, dx = self.critic.backward(c_cache, np.full((d, 1), 1.0 / d))
        da = dx[:, self.state_dim:]
        grads, _ = self.actor.backward(a_cache, da)
        return objective, grads

    def actor_update(self, batch) -> float:
        objective, grads = self.actor_objective_and_grads(batch)
        self.actor_opt.step(self.actor.params, [-g for g in grads])
        return objective

    def update_targets(self) -> None:
        soft_update(self.target_actor, self.actor, self.soft_rate)
        soft_update(self.target_critic, self.critic, self.soft_rate)

    def observe(self, state, action, reward, next_state, done) -> None:
        self.buffer.add(state, action, reward, next_state, done)
        self.reward_scale.update(reward)
        self.step_count += 1

    def maybe_update(self) -> None:
        # one critic + one actor update per environment step, after a
        # warm-up of 10 batches worth of transitions
        if len(self.buffer) < 10 * self.batch_size:
            return
        batch = self.buffer.sample(self.batch_size, self.rng)
        self.critic_update(batch)
        self.actor_update(batch)
        self.update_targets()


def train(env, agent: DdpgAgent, episodes: int):
    """Run the training loop; yields one record per environment step."""
    if agent.state_dim != env.state_dim or agent.action_dim != env.action_dim:
        raise ValueError("agent/environment dimension mismatch")
    for episode in range(episodes):
        state = env.reset()
        for step in range(env.T):
            action = agent.select_action(state, explore=True)
            out = env.step(action)
            agent.observe(state, action, out.reward, out.next_state, out.done)
            agent.maybe_update()
            yield {
                "episode": episode,
                "step": step,
                "reward": out.reward,
                "sum_secrecy_rate": out.sum_secrecy_rate,
                "lu_rates": out.lu_rates,
                "echo_snr": out.echo_snr,
                "snr_feasible": out.snr_feasible,
                "rate_feasible": out.rate_feasible,
            }
            state = out.next_state
