"""Haar-distributed random matrices and exact Haar-moment formulas.

Unitaries are sampled by QR of a complex Ginibre matrix with the R-diagonal
phase correction (plain QR is *not* Haar). Random quantum colorings and
projections conjugate fixed spectra by Haar unitaries. The exact first and
second moments of tr(chi P) and tr((chi P)^2), for both parities of N and
for fixed colorings against random projections, serve as Monte Carlo
oracles throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dpp import DPPKernel, validate_kernel
from .errors import DegenerateDim, ValidationError
from .matcore import OrthogonalProjection, QuantumColoring, make_hermitian
from .setsys import ProjectionSystem


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _seed_seq(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def _haar(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitary(n: int, seed) -> np.ndarray:
    """One Haar-distributed element of U(N)."""
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    return _haar(_rng(seed), n)


def coloring_spectrum(n: int) -> np.ndarray:
    """The fixed spectrum (+1 x floor(N/2), -1 x ceil(N/2)) of a random coloring."""
    d = -np.ones(n)
    d[: n // 2] = 1.0
    return d


def random_quantum_coloring(n: int, seed) -> QuantumColoring:
    """chi = U D U* with D = diag(+1 x floor(N/2), -1 x ceil(N/2)), U Haar."""
    if n < 2:
        raise DegenerateDim(f"random colorings need n >= 2, got {n}")
    u = haar_unitary(n, seed)
    chi = (u * coloring_spectrum(n)) @ u.conj().T
    return QuantumColoring(make_hermitian(chi), plus_count=n // 2)


def random_projection(n: int, seed) -> OrthogonalProjection:
    """P = U Pi U* with Pi projecting onto the first floor(N/2) coordinates."""
    if n < 2:
        raise DegenerateDim(f"random projections need n >= 2, got {n}")
    u = haar_unitary(n, seed)
    r = n // 2
    p = u[:, :r] @ u[:, :r].conj().T
    return OrthogonalProjection(make_hermitian(p), rank=r)


def random_projection_system(n: int, m: int, seed) -> ProjectionSystem:
    """M independent random projections; element i is a deterministic
    function of (seed, i) through spawned child streams."""
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    children = _seed_seq(seed).spawn(m)
    projs = tuple(
        random_projection(n, np.random.Generator(np.random.PCG64(c))) for c in children
    )
    return ProjectionSystem(n, projs)


def random_kernel(n: int, seed) -> DPPKernel:
    """A random Hermitian DPP kernel U diag(u_1..u_N) U* with uniform spectrum."""
    rng = _rng(seed)
    u = _haar(rng, n)
    lam = rng.random(n)
    return validate_kernel((u * lam) @ u.conj().T)


def exact_mean_trace(n: int, r: int) -> float:
    """E[tr(chi P)] over random colorings: (tr D) r / N, i.e. 0 for even N
    and -r/N for odd N."""
    _check_rank(n, r)
    return 0.0 if n % 2 == 0 else -r / n


def exact_mean_trace_sq(n: int, r: int) -> float:
    """E[tr((chi P)^2)] over random colorings against a fixed rank-r
    projection: (N r^2 - r)/(N^2 - 1) for even N, r^2/N for odd N."""
    _check_rank(n, r)
    if n % 2 == 0:
        return (n * r * r - r) / (n * n - 1)
    return r * r / n


def exact_mean_commutator_term(n: int, r: int) -> float:
    """E[tr(P - (chi P)^2)] = r - E[tr((chi P)^2)]."""
    return r - exact_mean_trace_sq(n, r)


def exact_mean_trace_sq_fixed_coloring(n: int, trace_chi: int) -> float:
    """E[tr((chi P)^2)] for a *fixed* coloring with trace t against a random
    projection of rank floor(N/2):

        t^2 r0 (N - r0) / (N (N^2-1)) + r0 (N r0 - 1) / (N^2 - 1).
    """
    if n < 2:
        raise DegenerateDim(f"need n >= 2, got {n}")
    t = int(trace_chi)
    if abs(t) > n or (t + n) % 2 != 0:
        raise ValidationError(f"trace {t} is not 2k - N for any k in [0, {n}]")
    r0 = n // 2
    return (t * t) * r0 * (n - r0) / (n * (n * n - 1)) + r0 * (n * r0 - 1) / (n * n - 1)


def exact_variance_trace(n: int, r: int) -> float:
    """Var[tr(chi P)] for a rank-r projection: r(N-r)/(N^2-1) for even N and
    r(N-r)/N^2 for odd N.

    Follows by summing the fourth-moment table over entry pairs:
    E[(tr chi P)^2] = r(N+t^2)/(N(N+1)) + r(r-1)(t^2-1)/(N^2-1) with
    t = tr(D); cross-checked by Monte Carlo in the tests.
    """
    _check_rank(n, r)
    if n % 2 == 0:
        return r * (n - r) / (n * n - 1)
    return r * (n - r) / (n * n)


def _check_rank(n: int, r: int) -> None:
    if n < 2:
        raise DegenerateDim(f"need n >= 2, got {n}")
    if not 0 <= r <= n:
        raise ValidationError(f"rank {r} outside [0, {n}]")


@dataclass(frozen=True)
class HaarFourthMoments:
    """The four degree-4 entry moments of a Haar unitary."""

    abs_fourth: float          # E|U_ij|^4
    abs_shared_index: float    # E|U_ij|^2 |U_in|^2 = E|U_ij|^2 |U_mj|^2, j != n, i != m
    abs_distinct: float        # E|U_ij|^2 |U_mn|^2, i != m, j != n
    cross: float               # E[U_ij U_mn conj(U_mj) conj(U_in)], i != m, j != n


def haar_fourth_moments(n: int) -> HaarFourthMoments:
    """Exact degree-4 moments of Haar unitary entries."""
    if n < 2:
        raise DegenerateDim(f"need n >= 2, got {n}")
    return HaarFourthMoments(
        abs_fourth=2.0 / (n * (n + 1)),
        abs_shared_index=1.0 / (n * (n + 1)),
        abs_distinct=1.0 / (n * n - 1),
        cross=-1.0 / (n * (n * n - 1)),
    )


@dataclass(frozen=True)
class TailFit:
    """Weighted least-squares fit of -log tail against N^2 delta^2."""

    c_hat: float
    r_squared: float
    points_used: int


@dataclass(frozen=True)
class ConcentrationProbe:
    """Empirical tails of tr(chi P) and tr(P - (chi P)^2) around their exact
    means, on a grid of deviations delta (tail event |f - Ef| >= delta N)."""

    n: int
    trials: int
    rank: int
    deviations: np.ndarray
    tail_trace: np.ndarray
    tail_commutator: np.ndarray
    fit_trace: TailFit
    fit_commutator: TailFit

    @property
    def c_hat(self) -> float:
        """The conservative constant min(c1, c2), as the union-bound argument uses."""
        return min(self.fit_trace.c_hat, self.fit_commutator.c_hat)


def _fit_tail(x: np.ndarray, p: np.ndarray) -> TailFit:
    keep = p > 0
    if keep.sum() < 2:
        return TailFit(math.nan, math.nan, int(keep.sum()))
    xs, ys = x[keep], -np.log(p[keep])
    c = float(np.dot(xs, ys) / np.dot(xs, xs))
    ss_res = float(np.sum((ys - c * xs) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else math.nan
    return TailFit(c, r2, int(keep.sum()))


@dataclass(frozen=True)
class MomentGate:
    """One Monte-Carlo-vs-exact comparison with its z-score."""

    name: str
    n: int
    param: int
    exact: float
    estimate: float
    se: float
    z: float

    def passes(self, z_gate: float = 4.0) -> bool:
        return abs(self.z) <= z_gate


def _gate(name: str, n: int, param: int, exact: float, samples: np.ndarray) -> MomentGate:
    est = float(samples.mean())
    se = float(samples.std(ddof=1) / math.sqrt(samples.size))
    if se == 0.0:
        z = 0.0 if abs(est - exact) <= 1e-12 else math.inf
    else:
        z = (est - exact) / se
    return MomentGate(name, n, param, exact, est, se, z)


def moment_gates(n: int, trials: int, seed, all_ranks: bool = False) -> list[MomentGate]:
    """Monte Carlo estimates of every exact-moment formula at dimension n.

    Per trial one Haar unitary feeds four families of statistics:

      * tr(chi P_r) and tr((chi P_r)^2) for random colorings chi = U D U*
        against fixed diagonal projections of rank r (r = floor(n/2), or all
        ranks when all_ranks is set);
      * tr((chi_k P)^2) for fixed sorted colorings with k plus eigenvalues
        against random projections P = U Pi U* of rank floor(n/2);
      * the second moment of tr(chi P_r), against the closed-form variance;
      * the four degree-4 entry moments of U itself.
    """
    if n < 2:
        raise DegenerateDim(f"need n >= 2, got {n}")
    if trials < 2:
        raise ValidationError("need trials >= 2")
    rng = _rng(seed)
    d = coloring_spectrum(n)
    r0 = n // 2
    ranks = list(range(n + 1)) if all_ranks else [r0]
    fixed_ks = list(range(n + 1)) if all_ranks else [r0] + ([r0 + 1] if n >= 3 else [])

    t1 = np.empty((trials, len(ranks)))
    t2 = np.empty((trials, len(ranks)))
    eq18 = np.empty((trials, len(fixed_ks)))
    m4 = np.empty((trials, 4))
    for t in range(trials):
        u = _haar(rng, n)
        chi = (u * d) @ u.conj().T
        abs_chi2 = np.abs(chi) ** 2
        diag_cum = np.concatenate(([0.0], np.cumsum(chi.diagonal().real)))
        corner = np.zeros((n + 1, n + 1))
        corner[1:, 1:] = abs_chi2.cumsum(axis=0).cumsum(axis=1)
        for col, r in enumerate(ranks):
            t1[t, col] = diag_cum[r]
            t2[t, col] = corner[r, r]
        proj = u[:, :r0] @ u[:, :r0].conj().T
        abs_p2 = np.abs(proj) ** 2
        pcorner = np.zeros((n + 1, n + 1))
        pcorner[1:, 1:] = abs_p2.cumsum(axis=0).cumsum(axis=1)
        total = pcorner[n, n]
        for col, k in enumerate(fixed_ks):
            plus = pcorner[k, k]
            cross = pcorner[k, n] - pcorner[k, k]
            minus = total - plus - 2 * cross
            eq18[t, col] = plus + minus - 2 * cross
        m4[t, 0] = np.abs(u[0, 0]) ** 4
        m4[t, 1] = (np.abs(u[0, 0]) * np.abs(u[0, 1])) ** 2
        m4[t, 2] = (np.abs(u[0, 0]) * np.abs(u[1, 1])) ** 2
        m4[t, 3] = (u[0, 0] * u[1, 1] * np.conj(u[1, 0]) * np.conj(u[0, 1])).real

    gates: list[MomentGate] = []
    for col, r in enumerate(ranks):
        gates.append(_gate("mean_trace", n, r, exact_mean_trace(n, r), t1[:, col]))
        gates.append(_gate("mean_trace_sq", n, r, exact_mean_trace_sq(n, r), t2[:, col]))
    second = exact_variance_trace(n, r0) + exact_mean_trace(n, r0) ** 2
    col0 = ranks.index(r0)
    gates.append(_gate("trace_second_moment", n, r0, second, t1[:, col0] ** 2))
    for col, k in enumerate(fixed_ks):
        exact = exact_mean_trace_sq_fixed_coloring(n, 2 * k - n)
        gates.append(_gate("mean_trace_sq_fixed", n, k, exact, eq18[:, col]))
    fm = haar_fourth_moments(n)
    gates.append(_gate("abs_fourth", n, 0, fm.abs_fourth, m4[:, 0]))
    gates.append(_gate("abs_shared_index", n, 0, fm.abs_shared_index, m4[:, 1]))
    gates.append(_gate("abs_distinct", n, 0, fm.abs_distinct, m4[:, 2]))
    gates.append(_gate("cross", n, 0, fm.cross, m4[:, 3]))
    return gates


def concentration_probe(n: int, trials: int, deviations=None, seed=0) -> ConcentrationProbe:
    """Estimate deviation tails of the two objective functionals for a fixed
    random rank-floor(N/2) projection under random quantum colorings, and fit
    the Gaussian-type decay exp(-c N^2 delta^2) to each.

    With deviations=None the grid spans [0.5, 2.5] empirical standard
    deviations of the slower-concentrating functional.
    """
    if trials < 1000:
        raise ValidationError("need trials >= 1000 for usable tails")
    if n < 2:
        raise DegenerateDim(f"need n >= 2, got {n}")
    rng = _rng(seed)
    r0 = n // 2
    proj = random_projection(n, rng)
    p = proj.array
    d = coloring_spectrum(n)
    f1 = np.empty(trials)
    f2 = np.empty(trials)
    for t in range(trials):
        u = _haar(rng, n)
        chi = (u * d) @ u.conj().T
        a = chi @ p
        f1[t] = np.trace(a).real
        f2[t] = r0 - np.sum(a * a.T).real
    m1 = exact_mean_trace(n, r0)
    m2 = exact_mean_commutator_term(n, r0)
    if deviations is None:
        scale = max(np.std(f1 - m1), np.std(f2 - m2))
        deviations = np.linspace(0.5, 2.5, 9) * scale / n
    deviations = np.asarray(deviations, dtype=float)
    tail1 = np.array([(np.abs(f1 - m1) >= dv * n).mean() for dv in deviations])
    tail2 = np.array([(np.abs(f2 - m2) >= dv * n).mean() for dv in deviations])
    x = (n * deviations) ** 2
    return ConcentrationProbe(
        n=n,
        trials=trials,
        rank=r0,
        deviations=deviations,
        tail_trace=tail1,
        tail_commutator=tail2,
        fit_trace=_fit_tail(x, tail1),
        fit_commutator=_fit_tail(x, tail2),
    )
