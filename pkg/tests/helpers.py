"""Shared test oracles: hand recursions and literal enumerations."""

import itertools
import math

import numpy as np


def hand_weights(beta, mu, m, n_max):
    """u_n = (beta/(1-beta)) sum_{r=1}^{n-1} mu_r u_{n-r} + m_n, written as a plain double loop."""
    ratio = beta / (1.0 - beta)
    u = [0.0] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = m(n)
        for r in range(1, n):
            acc += ratio * mu(r) * u[n - r]
        u[n] = acc
    return u[1:]


def polytail_moment(alpha, n):
    """alpha * B(n + 1, alpha) through the gamma function."""
    return math.exp(math.log(alpha) + math.lgamma(n + 1) + math.lgamma(alpha) - math.lgamma(n + alpha + 1))


def cycle_lengths(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        k, length = i, 0
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        out.append(length)
    return sorted(out, reverse=True)


def enumerate_first_cycle(theta, n):
    """P(cycle through element 0 has length j), j = 1..n, by listing S_n."""
    mass = np.zeros(n)
    for perm in itertools.permutations(range(n)):
        weight = math.prod(theta(l) for l in cycle_lengths(perm))
        k, length = 0, 0
        while True:
            k = perm[k]
            length += 1
            if k == 0:
                break
        mass[length - 1] += weight
    return mass / mass.sum()


def hand_tail_mass(alpha, lo, hi):
    """Mass of (lo, hi] under the density alpha (1 - x)^(alpha - 1)."""
    return (1.0 - lo) ** alpha - (1.0 - hi) ** alpha
