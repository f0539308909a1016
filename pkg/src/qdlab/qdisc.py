"""The quantum-discrepancy objective over projection systems.

The objective of a coloring chi against a projection P is

    [ (tr chi P)^2 + tr(P - (chi P)^2) ]^(1/2),

equal to the commutator form (tr chi P)^2 + tr(chi [chi, P] P) because
chi^2 = I. Minimization over colorings is heuristic: colorings are
parametrized as U D_k U* for every admissible number k of +1 eigenvalues,
with Haar restarts refined by plane-rotation sweeps that preserve
chi^2 = I exactly by construction. The reported value is an upper
estimate; no lower-bound certificate is produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import randmat
from .combdisc import DEFAULT_EXHAUSTIVE_CAP, disc_exact, disc_heuristic
from .dpp import expected_squared_imbalance, validate_kernel
from .errors import (
    DegenerateDim,
    DimMismatch,
    KernelInvalid,
    RankMismatch,
    SpectrumOutOfRange,
    ValidationError,
)
from .matcore import (
    OrthogonalProjection,
    QuantumColoring,
    as_projection,
    make_hermitian,
    schatten_norm,
    spectral_decompose,
)
from .setsys import ProjectionSystem, SetSystem

_CONSISTENCY_TOL = 1e-9
_IMPROVE_TOL = 1e-12
ANGLE_GRID = 64
REFINEMENT_HALVINGS = 3


@dataclass(frozen=True)
class ObjectiveValue:
    """The two objective terms and their root-sum value."""

    trace_term: float       # (tr chi P)^2
    commutator_term: float  # tr(P - (chi P)^2)
    value: float

    def __post_init__(self):
        if self.trace_term < -_CONSISTENCY_TOL or self.commutator_term < -_CONSISTENCY_TOL:
            raise ValidationError("objective terms must be non-negative")
        if abs(self.value**2 - max(self.trace_term + self.commutator_term, 0.0)) > _CONSISTENCY_TOL:
            raise ValidationError("value is not the root of the term sum")


def _pair_arrays(coloring: QuantumColoring, projection: OrthogonalProjection):
    if coloring.dim != projection.dim:
        raise DimMismatch(f"coloring dim {coloring.dim} vs projection dim {projection.dim}")
    return coloring.array, projection.array


def objective(coloring: QuantumColoring, projection: OrthogonalProjection) -> ObjectiveValue:
    """Evaluate the objective, cross-checking the chi [chi, P] P form."""
    chi, p = _pair_arrays(coloring, projection)
    a = chi @ p
    t1 = float(np.trace(a).real)
    t2 = float(np.sum(a * a.T).real)
    commutator_term = projection.rank - t2
    comm_form = float(np.trace(chi @ (chi @ p - p @ chi) @ p).real)
    if abs(comm_form - commutator_term) > _CONSISTENCY_TOL * max(1.0, abs(commutator_term)):
        raise ValidationError(
            f"commutator form {comm_form!r} disagrees with direct term {commutator_term!r}"
        )
    total = t1 * t1 + commutator_term
    return ObjectiveValue(t1 * t1, commutator_term, math.sqrt(max(total, 0.0)))


@dataclass(frozen=True)
class DppConsistencyRecord:
    """Both sides of the kernel identity E[(2 X(S) - |S|)^2] = objective^2."""

    imbalance: float
    objective_sq: float

    @property
    def difference(self) -> float:
        return self.imbalance - self.objective_sq


def objective_vs_dpp(coloring: QuantumColoring, subset) -> DppConsistencyRecord:
    """Evaluate the squared imbalance of S under the kernel (chi + I)/2 and
    the squared objective of chi against the diagonal embedding of S."""
    n = coloring.dim
    try:
        kernel = validate_kernel(0.5 * (coloring.array + np.eye(n)))
    except SpectrumOutOfRange as exc:  # unreachable for a valid coloring
        raise KernelInvalid(str(exc)) from exc
    diag = np.zeros(n, dtype=np.complex128)
    for i in subset:
        if not 1 <= int(i) <= n:
            raise DimMismatch(f"subset element {i} outside [1, {n}]")
        diag[int(i) - 1] = 1.0
    p_s = as_projection(np.diag(diag))
    obj = objective(coloring, p_s)
    return DppConsistencyRecord(
        imbalance=expected_squared_imbalance(kernel, subset),
        objective_sq=obj.trace_term + obj.commutator_term,
    )


@dataclass(frozen=True)
class TrivialBoundRecord:
    """The diagonal-entry identity behind the objective <= N bound."""

    direct: float      # (tr chi P)^2 - tr((chi P)^2)
    pairwise: float    # 2 sum_{i<j} chi'_ii chi'_jj (P'_ii P'_jj - |P'_ij|^2)
    objective_sq: float
    dim: int

    @property
    def residual(self) -> float:
        return abs(self.direct - self.pairwise)

    @property
    def within_bound(self) -> bool:
        return self.objective_sq <= self.dim**2 + _CONSISTENCY_TOL


def trivial_bound_check(coloring: QuantumColoring, projection: OrthogonalProjection) -> TrivialBoundRecord:
    """Verify, in the eigenbasis of chi, the pairwise identity used to prove
    objective^2 <= N^2, and report both sides."""
    chi, p = _pair_arrays(coloring, projection)
    a = chi @ p
    t1 = float(np.trace(a).real)
    t2 = float(np.sum(a * a.T).real)
    dec = spectral_decompose(coloring.matrix)
    x = np.sign(dec.eigenvalues)
    pp = dec.eigenvectors.conj().T @ p @ dec.eigenvectors
    w = x * pp.diagonal().real
    diag_pairs = (w.sum() ** 2 - np.sum(w * w))  # 2 sum_{i<j} x_i x_j P'_ii P'_jj
    m = np.abs(pp) ** 2
    off_pairs = float(x @ m @ x - np.sum(m.diagonal()))  # 2 sum_{i<j} x_i x_j |P'_ij|^2
    pairwise = float(diag_pairs - off_pairs)
    objective_sq = t1 * t1 + (projection.rank - t2)
    return TrivialBoundRecord(t1 * t1 - t2, pairwise, objective_sq, coloring.dim)


def delta_threshold(n: int, r: int, m: int, c: float) -> float:
    """The per-projection threshold

    sqrt(2) [ sqrt((1/c) log(8M) + N^2/(N^2-1) r - N/(N^2-1) r^2) + r/N ].
    """
    if n < 2:
        raise DegenerateDim(f"the threshold needs N >= 2, got {n}")
    if m < 1 or c <= 0:
        raise ValidationError("need M >= 1 and c > 0")
    if not 0 <= r <= n:
        raise ValidationError(f"rank {r} outside [0, {n}]")
    inner = math.log(8 * m) / c + (n * n * r - n * r * r) / (n * n - 1)
    return math.sqrt(2.0) * (math.sqrt(inner) + r / n)


def delta_p(projection: OrthogonalProjection, m: int, c: float) -> float:
    """delta threshold of one projection in an M-element system."""
    return delta_threshold(projection.dim, projection.rank, m, c)


@dataclass(frozen=True)
class DeltaEventRecord:
    """Per-projection satisfaction of objective <= Delta_P, plus the joint flag."""

    values: np.ndarray
    thresholds: np.ndarray
    satisfied: np.ndarray

    @property
    def all_satisfied(self) -> bool:
        return bool(self.satisfied.all())


def check_delta_event(system: ProjectionSystem, coloring: QuantumColoring, c: float) -> DeltaEventRecord:
    """Check every inequality objective(chi, P_j) <= Delta_{P_j} at constant c."""
    if coloring.dim != system.dim:
        raise DimMismatch(f"coloring dim {coloring.dim} vs system dim {system.dim}")
    stacked = system.stacked()
    ranks = system.ranks().astype(float)
    values = _objective_values(coloring.array, stacked, ranks)
    thresholds = np.array(
        [delta_threshold(system.dim, int(r), system.num_projections, c) for r in ranks]
    )
    return DeltaEventRecord(values, thresholds, values <= thresholds)


def _objective_values(chi: np.ndarray, stacked: np.ndarray, ranks: np.ndarray) -> np.ndarray:
    a = stacked @ chi
    t1 = np.einsum("mii->m", a).real
    t2 = np.einsum("mij,mji->m", a, a).real
    return np.sqrt(np.clip(t1 * t1 + ranks - t2, 0.0, None))


@dataclass(frozen=True)
class LipschitzRecord:
    """Slack (bound minus deviation) of the two Lipschitz inequalities."""

    trace_slack: float       # sqrt(N/2) ||chi1-chi2||_2 - | |tr chi1 P| - |tr chi2 P| |
    commutator_slack: float  # 2N ||chi1-chi2||_2 - |tr(P-(chi1 P)^2) - tr(P-(chi2 P)^2)|


def lipschitz_check(
    projection: OrthogonalProjection, chi1: QuantumColoring, chi2: QuantumColoring
) -> LipschitzRecord:
    """Verify both Lipschitz bounds for a rank-floor(N/2) projection."""
    n = projection.dim
    if projection.rank != n // 2:
        raise RankMismatch(f"projection rank {projection.rank} != floor({n}/2)")
    if chi1.dim != n or chi2.dim != n:
        raise DimMismatch("coloring dimensions do not match the projection")
    dist = schatten_norm(chi1.array - chi2.array, 2)
    p = projection.array
    a1, a2 = chi1.array @ p, chi2.array @ p
    tr1, tr2 = np.trace(a1).real, np.trace(a2).real
    lhs_trace = abs(abs(tr1) - abs(tr2))
    sq1 = float(np.sum(a1 * a1.T).real)
    sq2 = float(np.sum(a2 * a2.T).real)
    lhs_comm = abs(sq2 - sq1)  # the tr(P) parts cancel
    rec = LipschitzRecord(
        trace_slack=math.sqrt(n / 2.0) * dist - lhs_trace,
        commutator_slack=2.0 * n * dist - lhs_comm,
    )
    if rec.trace_slack < -_CONSISTENCY_TOL or rec.commutator_slack < -_CONSISTENCY_TOL:
        raise ValidationError(f"Lipschitz bound violated: {rec}")
    return rec


@dataclass(frozen=True)
class QdiscEstimate:
    """Best coloring found by the heuristic minimizer; an upper estimate."""

    value: float
    witness: QuantumColoring
    plus_count: int
    restarts_used: int
    converged: bool


class _CandidateState:
    """Mutable search state for one (k, U) candidate: caches B = U_+* P U_+
    per projection so plane rotations cost O(M N^2) instead of O(M N^3)."""

    def __init__(self, u: np.ndarray, k: int, stacked: np.ndarray, ranks: np.ndarray):
        self.u = u.copy()
        self.k = k
        self.stacked = stacked
        self.ranks = ranks
        self.n = u.shape[0]
        if k:
            uplus = self.u[:, :k]
            self.b = np.einsum("al,mab,bk->mlk", uplus.conj(), stacked, uplus, optimize=True)
        else:
            self.b = np.zeros((stacked.shape[0], 0, 0), dtype=np.complex128)
        self._refresh()

    def _refresh(self):
        self.t1 = np.einsum("mii->m", self.b).real if self.k else np.zeros(self.stacked.shape[0])
        self.t2 = np.einsum("mlk,mkl->m", self.b, self.b).real if self.k else np.zeros_like(self.t1)

    def objective_max(self) -> float:
        vals = self._values(self.t1, self.t2)
        return float(vals.max())

    def _values(self, t1, t2):
        # objective^2 in terms of Q = U_+ U_+*: (2 t1 - r)^2 + 4 (t1 - t2)
        return np.sqrt(np.clip((2.0 * t1 - self.ranks) ** 2 + 4.0 * (t1 - t2), 0.0, None))

    def plane_closure(self, i: int, j: int):
        """Per-plane precomputation; returns f(theta) over arbitrary angle arrays."""
        u_i = self.u[:, i]
        u_j = self.u[:, j]
        uplus = self.u[:, : self.k]
        d = self.stacked @ u_j                      # (M, N): P_m u_j
        b_vec = d @ uplus.conj()                    # (M, k): (U_+* P_m u_j)^T entries
        a_vec = self.b[:, :, i]                     # (M, k): column i of B_m
        alpha = a_vec[:, i].real                    # u_i* P u_i
        beta = (d @ u_j.conj()).real                # u_j* P u_j
        gamma = d @ u_i.conj()                      # u_i* P u_j
        na2 = np.sum(np.abs(a_vec) ** 2, axis=1)
        nb2 = np.sum(np.abs(b_vec) ** 2, axis=1)
        reab = np.sum(a_vec.conj() * b_vec, axis=1).real
        regamma = gamma.real
        off_a = na2 - alpha**2
        off_b = nb2 - np.abs(gamma) ** 2
        off_ab = reab - alpha * regamma

        def f(theta: np.ndarray) -> np.ndarray:
            c = np.cos(theta)[:, None]
            s = np.sin(theta)[:, None]
            bii = c * c * alpha + s * s * beta + 2.0 * c * s * regamma
            t1 = self.t1 + bii - alpha
            s_off = c * c * off_a + s * s * off_b + 2.0 * c * s * off_ab
            t2 = self.t2 - (2.0 * off_a + alpha**2) + 2.0 * s_off + bii * bii
            vals = np.sqrt(np.clip((2.0 * t1 - self.ranks) ** 2 + 4.0 * (t1 - t2), 0.0, None))
            return vals.max(axis=1)

        def apply(theta: float):
            c, s = math.cos(theta), math.sin(theta)
            new_i = c * u_i + s * u_j
            new_j = -s * u_i + c * u_j
            self.u[:, i] = new_i
            self.u[:, j] = new_j
            col = c * a_vec + s * b_vec
            col[:, i] = c * c * alpha + s * s * beta + 2.0 * c * s * regamma
            self.b[:, :, i] = col
            self.b[:, i, :] = col.conj()
            self.b[:, i, i] = col[:, i].real
            self._refresh()

        return f, apply

    def coloring_array(self) -> np.ndarray:
        d = -np.ones(self.n)
        d[: self.k] = 1.0
        return (self.u * d) @ self.u.conj().T


def _refine_candidate(
    state: _CandidateState,
    sweeps: int,
    angle_grid: int,
    halvings: int,
    plane_cap: int | None,
    rng: np.random.Generator,
) -> tuple[float, bool]:
    """Greedy plane-rotation descent on the max objective. Returns the final
    value and whether the last sweep made no improvement."""
    best = state.objective_max()
    planes = [(i, j) for i in range(state.k) for j in range(state.k, state.n)]
    if not planes or sweeps == 0:
        return best, not planes
    converged = False
    thetas = np.linspace(0.0, math.pi, angle_grid, endpoint=False)
    for _ in range(sweeps):
        sweep_planes = planes
        if plane_cap is not None and len(planes) > plane_cap:
            idx = rng.choice(len(planes), size=plane_cap, replace=False)
            sweep_planes = [planes[t] for t in sorted(idx)]
        improved = False
        for i, j in sweep_planes:
            f, apply = state.plane_closure(i, j)
            grid_vals = f(thetas)
            pos = int(grid_vals.argmin())
            theta, val = float(thetas[pos]), float(grid_vals[pos])
            step = math.pi / angle_grid
            for _ in range(halvings):
                step *= 0.5
                probe = np.array([theta - step, theta + step])
                pv = f(probe)
                q = int(pv.argmin())
                if pv[q] < val:
                    val, theta = float(pv[q]), float(probe[q])
            if val < best - _IMPROVE_TOL:
                apply(theta)
                best = state.objective_max()
                improved = True
        if not improved:
            converged = True
            break
    return best, converged


def _diagonal_sets(stacked: np.ndarray) -> list[tuple[int, ...]] | None:
    """If every projection is diagonal, recover the underlying subsets."""
    n = stacked.shape[1]
    off = stacked.copy()
    idx = np.arange(n)
    off[:, idx, idx] = 0.0
    if np.abs(off).max() > 0.0:
        return None
    sets = []
    for m in range(stacked.shape[0]):
        diag = stacked[m].diagonal().real
        sets.append(tuple(int(i + 1) for i in np.flatnonzero(diag > 0.5)))
    return sets


def _combinatorial_candidate(system: ProjectionSystem, seed) -> np.ndarray | None:
    """For diagonally embedded set systems, the best deterministic +-1
    coloring is itself a quantum coloring; seed the search with it so the
    estimate never exceeds the combinatorial discrepancy."""
    sets = _diagonal_sets(system.stacked())
    if sets is None:
        return None
    nonempty = [s for s in sets if s]
    if not nonempty:
        return np.ones(system.dim)
    sub = SetSystem(system.dim, tuple(nonempty))
    if system.dim <= DEFAULT_EXHAUSTIVE_CAP:
        _, witness = disc_exact(sub)
    else:
        _, witness = disc_heuristic(sub, trials=32, seed=seed)
    return witness.signs.astype(float)


def _permutation_unitary_for_signs(signs: np.ndarray) -> tuple[np.ndarray, int]:
    n = signs.size
    order = [i for i in range(n) if signs[i] > 0] + [i for i in range(n) if signs[i] < 0]
    u = np.zeros((n, n), dtype=np.complex128)
    for col, row in enumerate(order):
        u[row, col] = 1.0
    return u, int(np.count_nonzero(signs > 0))


def qdisc_estimate(
    system: ProjectionSystem,
    restarts: int = 4,
    sweeps: int = 2,
    seed=0,
    angle_grid: int = ANGLE_GRID,
    halvings: int = REFINEMENT_HALVINGS,
    plane_cap: int | None = None,
    refine_top: int | None = None,
) -> QdiscEstimate:
    """Upper estimate of the quantum discrepancy of a projection system.

    Every +1 eigenvalue count k in 0..N is scanned. For each k the first
    restart starts from the sorted diagonal coloring and later restarts from
    Haar random conjugations; candidates are refined by plane-rotation
    sweeps. When refine_top is given, only the most promising candidates
    get sweeps (a beam restriction for large systems). Deterministic for a
    fixed seed, and non-increasing in the number of restarts.
    """
    if restarts < 1:
        raise ValidationError("need restarts >= 1")
    n = system.dim
    stacked = system.stacked()
    ranks = system.ranks().astype(float)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    k_children = root.spawn(n + 2)

    candidates: list[tuple[float, _CandidateState, np.random.Generator]] = []
    for k in range(n + 1):
        restart_children = k_children[k].spawn(restarts)
        for ridx in range(restarts):
            rng = np.random.Generator(np.random.PCG64(restart_children[ridx]))
            if ridx == 0:
                u = np.eye(n, dtype=np.complex128)
            else:
                u = randmat.haar_unitary(n, rng)
            state = _CandidateState(u, k, stacked, ranks)
            candidates.append((state.objective_max(), state, rng))

    witness_signs = _combinatorial_candidate(system, k_children[n + 1])
    if witness_signs is not None:
        u, k = _permutation_unitary_for_signs(witness_signs)
        state = _CandidateState(u, k, stacked, ranks)
        rng = np.random.Generator(np.random.PCG64(k_children[n + 1].spawn(1)[0]))
        candidates.append((state.objective_max(), state, rng))

    order = sorted(range(len(candidates)), key=lambda t: (candidates[t][0], t))
    refine_set = frozenset(order if refine_top is None else order[: max(1, refine_top)])
    best_value = math.inf
    best_state = None
    best_converged = False
    for t in order:
        value, state, rng = candidates[t]
        converged = True
        if t in refine_set and sweeps > 0:
            value, converged = _refine_candidate(state, sweeps, angle_grid, halvings, plane_cap, rng)
        if value < best_value - _IMPROVE_TOL:
            best_value, best_state, best_converged = value, state, converged

    assert best_state is not None
    witness = QuantumColoring(make_hermitian(best_state.coloring_array()), plus_count=best_state.k)
    final_values = _objective_values(witness.array, stacked, ranks)
    return QdiscEstimate(
        value=float(final_values.max()),
        witness=witness,
        plus_count=best_state.k,
        restarts_used=restarts,
        converged=best_converged,
    )

