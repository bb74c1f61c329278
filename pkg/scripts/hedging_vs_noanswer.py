#!/usr/bin/env python3
"""Contrast hedging in the standard model with its absence when declining is allowed.

Part 1, standard model: at the lower range edge of the balanced two-game
instance, independent play loses both games with positive probability while
the correlated border strategy never does, and the SDP confirms the optimum
is exactly zero.

Part 2, no-answer model: for random single-round instances, the best
probability of winning at least once in two rounds computed from the
materialized two-round operators never beats the independent-play binomial
1 - (1 - p)^2.
"""
import math
import sys

import numpy as np

from hedgegame import (NoAnswerInstance, build_q_operators, direct_lambda_value,
                       objective_lose_more_than, outcome_distribution, phi_border,
                       single_value, solve_min_channel, thresholds)


def standard_model_demo() -> None:
    alpha = 1.0 / math.sqrt(2.0)
    n = 2
    theta = thresholds(alpha, n).theta1
    print(f"standard model: alpha=1/sqrt(2), theta={theta:.6f}, n=2, k=1")

    single = outcome_distribution(phi_border(1, 1), alpha, theta, 1)
    p_lose_single = single.probs[0]
    print(f"  best single-game loss probability: {p_lose_single:.6f}")
    print(f"  independent play loses both with:  {p_lose_single ** 2:.6f}")

    hedged = outcome_distribution(phi_border(2, 1), alpha, theta, 2)
    print(f"  correlated strategy loses both:    {hedged.probs[0]:.2e}")

    q = build_q_operators(alpha, theta)
    c = objective_lose_more_than(q, n, 1)
    sol = solve_min_channel(c, 4, 4)
    print(f"  SDP optimum over all channels:     {sol.value:.2e} (gap {sol.gap:.1e})")


def no_answer_demo(trials: int = 8) -> None:
    print("no-answer model: winning at least 1 of 2 rounds on random instances")
    gen = np.random.default_rng(11)

    def rand_density(d):
        g = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
        m = g @ g.conj().T
        return m / np.trace(m).real

    def rand_effect(d):
        g = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
        q, r = np.linalg.qr(g)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        return (u * gen.uniform(0.0, 1.0, size=d)) @ u.conj().T

    print(f"  {'p_single':>10} {'binomial':>10} {'two-round':>10} {'diff':>9}")
    worst = 0.0
    for _ in range(trials):
        inst = NoAnswerInstance(rho=rand_density(4), pa=rand_effect(4),
                                dim_x=2, dim_y=2, dim_z=2)
        p = single_value(inst)
        binom = 1.0 - (1.0 - p) ** 2
        direct = direct_lambda_value(inst, 2, 1)
        worst = max(worst, abs(direct - binom))
        print(f"  {p:10.6f} {binom:10.6f} {direct:10.6f} {direct - binom:9.1e}")
    print(f"  worst deviation from the product law: {worst:.2e}")


def main() -> int:
    standard_model_demo()
    print()
    no_answer_demo()
    return 0


if __name__ == "__main__":
    sys.exit(main())
