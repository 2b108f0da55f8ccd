"""Hallucination under Hamming loss on {-1, 1}^3.

For the distribution ``p_eps = (0, 1/3 - eps, 1/3 - eps, 1/3 - eps, 0, 0, 0, 3 eps)``
over the outcomes below, the Bayes-optimal prediction is ``(1, 1, 1)`` for
every ``eps`` in ``[0, 1/12)`` although that outcome has probability zero.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InputError

OUTCOMES = np.array(
    [
        (1, 1, 1),
        (1, 1, -1),
        (1, -1, 1),
        (-1, 1, 1),
        (-1, -1, 1),
        (1, -1, -1),
        (-1, 1, -1),
        (-1, -1, -1),
    ]
)
EPS_MAX = 1 / 12


def hamming_loss_matrix(outcomes=OUTCOMES):
    """``H[i, k]`` = number of coordinates where outcomes ``i`` and ``k`` differ."""
    return (outcomes[:, None, :] != outcomes[None, :, :]).sum(axis=-1)


def hamming_distribution(eps):
    if not 0 <= eps < EPS_MAX:
        raise InputError(f"epsilon must lie in [0, 1/12), got {eps}")
    third = 1 / 3 - eps
    return np.array([0.0, third, third, third, 0.0, 0.0, 0.0, 3 * eps])


class HammingExample(NamedTuple):
    p: np.ndarray
    expected_losses: np.ndarray  # expected Hamming loss of predicting each outcome
    minimizer: int
    hallucination: bool  # the minimizer has zero probability


def hamming_example(eps):
    p = hamming_distribution(eps)
    losses = hamming_loss_matrix() @ p
    k = int(np.argmin(losses))
    return HammingExample(p, losses, k, bool(p[k] == 0))
