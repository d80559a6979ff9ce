"""Bound states of the radial Dirac-Coulomb problem.

Units: ``m = 1``, energies are ``E/m``.  For a sector parameter ``k``
(``k = -1`` holds the ground state) the radial functions obey::

    E G = (1 - a/r) G + (-d/dr + k/r) F
    E F = ( d/dr + k/r) G - (1 + a/r) F

Multiplying by ``r`` and writing ``x = ln r`` gives the symmetric pencil
``L v = E R v``::

    L = [[ r - a ,  (d/dx + k)^T ],      R = diag(r, r)
         [ d/dx + k , -(r + a)   ]]

Discretisation: ``G`` lives on the nodes of a uniform ``x`` grid and ``F``
on the midpoints.  ``d/dx`` is the two-point difference node -> midpoint
and ``k`` multiplies the two-point average, so the off-diagonal blocks
are exact transposes of each other and the pencil stays symmetric.  The
staggering removes the spurious doubled branch that a collocated central
difference produces inside the gap.  The scheme is second order in the
grid step; two grids (``N`` and ``2N - 1`` nodes on the same interval)
give a Richardson value and the error estimate ``|E_fine - E_coarse| / 3``.

Radial quantum number: for ``k < 0`` the lowest state has ``n_r = 0``;
for ``k > 0`` there is no ``n_r = 0`` state and the lowest has ``n_r = 1``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List, Sequence

import mpmath
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

DEFAULT_NODES = 4000
DEFAULT_R_MIN = 1e-6  # in units of 1/(m a)
DEFAULT_R_MAX = 200.0  # in units of 1/(m a)
TAIL_THRESHOLD = 1e-4  # box truncation shifts E by roughly tail^2
TAIL_FRACTION = 0.02


class SupercriticalError(ValueError):
    pass


class NoBoundStateError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


def _check_coupling(a: float, k: int) -> None:
    if k == 0:
        raise ValueError("sector k must be a nonzero integer")
    if not a < abs(k):
        raise SupercriticalError(f"coupling a = {a} is not below |k| = {abs(k)}")
    if a < 0:
        raise ValueError("coupling must be non-negative")


def sommerfeld_energy(a: float, n_r: int, k: int, dps: int = 40) -> float:
    """``[1 + a^2 / (n_r + sqrt(k^2 - a^2))^2]^(-1/2)`` evaluated with ``dps`` digits."""
    _check_coupling(a, k)
    if n_r < 0:
        raise ValueError("n_r must be >= 0")
    with mpmath.workdps(dps):
        a_ = mpmath.mpf(a)
        d = n_r + mpmath.sqrt(k * k - a_ * a_)
        return float(1 / mpmath.sqrt(1 + a_ * a_ / (d * d)))


def ground_state_from_A2(a: float, k: int) -> float:
    """Energy at which ``1 + (k/a)^2 (E^2 - 1)`` vanishes: ``sqrt(1 - a^2/k^2)``."""
    _check_coupling(a, k)
    return math.sqrt(1.0 - (a / k) ** 2)


def alpha_A2(a: float, k: int, energy: float) -> float:
    """Eigenvalue of ``A^2`` on a level: ``1 + (k/a)^2 (E^2 - 1)``."""
    return 1.0 + (k / a) ** 2 * (energy * energy - 1.0)


@dataclass(frozen=True)
class RadialProblem:
    a: float
    k: int
    nodes: int = DEFAULT_NODES
    r_min: float = DEFAULT_R_MIN
    r_max: float = DEFAULT_R_MAX
    tolerance: float = 1e-5

    def validate(self) -> None:
        _check_coupling(self.a, self.k)
        if self.a == 0:
            raise NoBoundStateError("no bound states without coupling (a = 0)")
        if self.nodes < 16:
            raise ValueError("need at least 16 grid nodes")
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")

    def first_n_r(self) -> int:
        return 0 if self.k < 0 else 1


@dataclass
class Level:
    k: int
    index: int
    n_r: int
    energy: float
    error_estimate: float
    sommerfeld: float
    delta: float
    alpha_A2: float
    coarse: float
    fine: float
    tail: float
    partner_energy: float | None = None

    def as_dict(self) -> dict:
        out = asdict(self)
        for key in ("energy", "sommerfeld", "coarse", "fine"):
            out[key] = float(f"{out[key]:.15e}")
        for key in ("error_estimate", "delta", "alpha_A2", "tail"):
            out[key] = float(f"{out[key]:.6e}")
        if self.partner_energy is not None:
            out["partner_energy"] = float(f"{self.partner_energy:.15e}")
        return out


@dataclass
class SpectrumResult:
    a: float
    k: int
    levels: List[Level] = field(default_factory=list)
    spurious: List[float] = field(default_factory=list)
    unresolved: List[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"a": self.a, "k": self.k, "levels": [lv.as_dict() for lv in self.levels],
                "spurious": [float(f"{e:.15e}") for e in self.spurious],
                "unresolved": [float(f"{e:.15e}") for e in self.unresolved]}


def _grid(prob: RadialProblem, nodes: int):
    scale = 1.0 / prob.a
    x = np.linspace(math.log(prob.r_min * scale), math.log(prob.r_max * scale), nodes)
    h = x[1] - x[0]
    return np.exp(x), np.exp(0.5 * (x[1:] + x[:-1])), h


def _pencil(prob: RadialProblem, nodes: int):
    r, rm, h = _grid(prob, nodes)
    n, mid = nodes, nodes - 1
    rows = np.repeat(np.arange(mid), 2)
    cols = np.stack([np.arange(mid), np.arange(1, n)], axis=1).ravel()
    # (d/dx + k) from nodes to midpoints: difference plus k times the average
    vals = np.tile([-1.0 / h + 0.5 * prob.k, 1.0 / h + 0.5 * prob.k], mid)
    c = sp.csr_matrix((vals, (rows, cols)), shape=(mid, n))
    a = prob.a
    L = sp.bmat([[sp.diags(r - a), c.T], [c, sp.diags(-(rm + a))]], format="csc")
    R = sp.diags(np.concatenate([r, rm]), format="csc")
    return L, R, n


def _tail(vec: np.ndarray, n: int) -> float:
    """Largest amplitude within ``TAIL_FRACTION`` of either grid end, relative to the peak."""
    g, f = np.abs(vec[:n]), np.abs(vec[n:])
    peak = max(g.max(), f.max())
    w = max(2, int(TAIL_FRACTION * n))
    return float(max(g[:w].max(), f[:w].max(), g[-w:].max(), f[-w:].max()) / peak)


def eigen_levels(prob: RadialProblem, nodes: int, count: int):
    """Deepest ``count`` bound levels on one grid as ``(E, tail)`` pairs.

    Also returns the gap eigenvalues that were set aside: ``unresolved``
    levels in (0, 1) whose functions still reach a grid end (Rydberg
    states too large for the box) and ``spurious`` ones at ``E <= 0``,
    where the attractive problem has no states at all.
    """
    L, R, n = _pencil(prob, nodes)
    want = min(count + 4, L.shape[0] - 2)
    # every bound level lies above sqrt(1 - a^2) > 1 - a^2, and the negative
    # continuum is far below, so the levels nearest this shift are the deepest ones
    shift = 1.0 - prob.a ** 2
    vals, vecs = eigsh(L, k=want, M=R, sigma=shift, which="LM")
    order = np.argsort(vals)
    bound, unresolved, spurious = [], [], []
    for j in order:
        e = float(vals[j])
        if not -1.0 < e < 1.0:
            continue
        if e <= 0.0:
            spurious.append(e)
            continue
        tail = _tail(vecs[:, j], n)
        if tail > TAIL_THRESHOLD:
            unresolved.append(e)
        else:
            bound.append((e, tail))
    return bound[:count], unresolved, spurious


def solve_sector(prob: RadialProblem, count: int = 3) -> SpectrumResult:
    """Lowest ``count`` bound levels of one sector with Richardson extrapolation."""
    prob.validate()
    if count < 1:
        raise ValueError("count must be >= 1")
    coarse, _, spur_c = eigen_levels(prob, prob.nodes, count)
    fine, unresolved, spur_f = eigen_levels(prob, 2 * prob.nodes - 1, count)
    if not coarse or not fine:
        raise NoBoundStateError(f"no bound state found for a = {prob.a}, k = {prob.k}")
    if len(fine) < count or len(coarse) < count:
        raise ConvergenceError(f"only {min(len(fine), len(coarse))} of {count} bound states resolved")
    res = SpectrumResult(prob.a, prob.k, spurious=sorted(set(spur_c) | set(spur_f)), unresolved=unresolved)
    n0 = prob.first_n_r()
    for idx, ((ec, _), (ef, tail)) in enumerate(zip(coarse, fine)):
        energy = ef + (ef - ec) / 3.0
        err = abs(ef - ec) / 3.0
        n_r = n0 + idx
        som = sommerfeld_energy(prob.a, n_r, prob.k)
        res.levels.append(Level(
            k=prob.k, index=idx, n_r=n_r, energy=energy, error_estimate=err, sommerfeld=som,
            delta=abs(energy - som) / som, alpha_A2=alpha_A2(prob.a, prob.k, energy),
            coarse=ec, fine=ef, tail=tail))
    worst = max(lv.error_estimate / lv.energy for lv in res.levels)
    if worst > prob.tolerance:
        raise ConvergenceError(f"relative error estimate {worst:.2e} exceeds tolerance {prob.tolerance:.0e}")
    return res


def pair_partners(results: Sequence[SpectrumResult]) -> None:
    """Fill ``partner_energy`` for levels whose (n_r, -k) twin was also computed."""
    table = {(r.a, lv.k, lv.n_r): lv for r in results for lv in r.levels}
    for (a, k, n_r), lv in table.items():
        twin = table.get((a, -k, n_r))
        if twin is not None:
            lv.partner_energy = twin.energy


@dataclass
class A2Report:
    a: float
    alpha: List[dict]
    ground_alpha: float
    passed: bool
    tolerance: float

    def as_dict(self) -> dict:
        return asdict(self)


def check_A2_relation_numeric(prob: RadialProblem, count: int = 3, tolerance: float = 1e-6,
                              results: Sequence[SpectrumResult] | None = None) -> A2Report:
    """``A^2`` eigenvalues ``1 + (k/a)^2 (E^2 - 1)`` on the computed levels.

    Passes when every value is ``>= -tolerance`` and the lowest level of
    the lowest ``|k|`` sector is ``<= tolerance``.  Without ``results`` the
    sectors ``k`` and ``-k`` of ``prob`` are solved.
    """
    if results is None:
        results = [solve_sector(RadialProblem(prob.a, s, prob.nodes, prob.r_min, prob.r_max, prob.tolerance), count)
                   for s in sorted({prob.k, -prob.k})]
    rows = [{"k": lv.k, "n_r": lv.n_r, "alpha_A2": lv.alpha_A2} for r in results for lv in r.levels]
    kmin = min(abs(r.k) for r in results)
    ground = min((lv for r in results if abs(r.k) == kmin for lv in r.levels), key=lambda lv: lv.energy)
    ok = all(row["alpha_A2"] >= -tolerance for row in rows) and ground.alpha_A2 <= tolerance
    return A2Report(prob.a, rows, ground.alpha_A2, ok, tolerance)
