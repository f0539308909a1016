"""Exact and probabilistic combinatorial discrepancy.

Exact minimization enumerates the 2^(N-1) colorings with chi(1) = +1 (the
objective is invariant under a global sign flip) in lexicographic order of
the sign vector, so the reported witness is the lexicographically smallest
optimal coloring. A restart + single-flip local search covers ground sets
beyond the exhaustive cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateM, GroundSetTooLarge, ValidationError
from .setsys import Coloring, SetSystem, incidence_matrix

DEFAULT_EXHAUSTIVE_CAP = 24
_CHUNK = 1 << 15


def disc_exact(system: SetSystem, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[int, Coloring]:
    """Exact discrepancy min_chi max_S |chi(S)| with an optimal witness.

    Ties are broken toward the lexicographically smallest sign vector
    (with -1 ordered before +1) among colorings with chi(1) = +1.
    """
    n = system.ground_size
    if n > cap:
        raise GroundSetTooLarge(f"ground set of size {n} exceeds the exhaustive cap {cap}")
    a = incidence_matrix(system).astype(np.float64)
    base = a[:, 0].copy()  # chi(1) fixed to +1
    rest = a[:, 1:]
    shifts = np.arange(n - 2, -1, -1, dtype=np.int64)  # element 2 <-> most significant bit
    total = 1 << (n - 1)
    best_val = math.inf
    best_bits: np.ndarray | None = None
    for start in range(0, total, _CHUNK):
        ks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (ks[:, None] >> shifts[None, :]) & 1
        signs = 2.0 * bits - 1.0
        sums = signs @ rest.T + base[None, :]
        values = np.abs(sums).max(axis=1)
        idx = int(values.argmin())  # first occurrence = lex-smallest in chunk
        if values[idx] < best_val:
            best_val = float(values[idx])
            best_bits = bits[idx]
    assert best_bits is not None
    witness = Coloring(np.concatenate(([1], 2 * best_bits - 1)).astype(int))
    return int(round(best_val)), witness


@dataclass(frozen=True)
class RandomColoringProbe:
    """Empirical frequency of the all-sets event |chi(S)| <= sqrt(2|S| log M)."""

    thresholds: np.ndarray
    trials: int
    successes: int

    @property
    def frequency(self) -> float:
        return self.successes / self.trials


def disc_random_bound(system: SetSystem) -> np.ndarray:
    """Per-set thresholds sqrt(2 |S| log M) from the uniform random coloring bound."""
    m = system.num_sets
    if m < 2:
        raise DegenerateM(f"need at least 2 sets for a positive log M, got {m}")
    return np.sqrt(2.0 * system.set_sizes() * math.log(m))


def random_coloring_satisfaction(system: SetSystem, trials: int, seed) -> RandomColoringProbe:
    """Draw uniform colorings and report how often every set satisfies its
    sqrt(2|S| log M) threshold simultaneously."""
    if trials < 1:
        raise ValidationError("need trials >= 1")
    thresholds = disc_random_bound(system)
    a = incidence_matrix(system).astype(np.float64)
    rng = np.random.default_rng(seed)
    successes = 0
    for start in range(0, trials, _CHUNK):
        count = min(_CHUNK, trials - start)
        signs = rng.integers(0, 2, size=(count, system.ground_size)) * 2.0 - 1.0
        sums = signs @ a.T
        successes += int(np.count_nonzero((np.abs(sums) <= thresholds[None, :]).all(axis=1)))
    return RandomColoringProbe(thresholds, trials, successes)


def disc_heuristic(system: SetSystem, trials: int, seed) -> tuple[int, Coloring]:
    """Upper estimate of the discrepancy by random restarts plus greedy
    single-flip descent; the witness attains the reported value."""
    if trials < 1:
        raise ValidationError("need trials >= 1")
    a = incidence_matrix(system).astype(np.float64)
    rng = np.random.default_rng(seed)
    n = system.ground_size
    best_val = math.inf
    best_signs: np.ndarray | None = None
    for _ in range(trials):
        signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
        sums = a @ signs
        value = float(np.abs(sums).max())
        while True:
            candidates = sums[:, None] - 2.0 * a * signs[None, :]
            flip_values = np.abs(candidates).max(axis=0)
            j = int(flip_values.argmin())
            if flip_values[j] >= value:
                break
            value = float(flip_values[j])
            sums = candidates[:, j].copy()
            signs[j] = -signs[j]
        if value < best_val:
            best_val = value
            best_signs = signs.copy()
    assert best_signs is not None
    if best_signs[0] < 0:  # normalize the reported witness to chi(1) = +1
        best_signs = -best_signs
    return int(round(best_val)), Coloring(best_signs.astype(int))
