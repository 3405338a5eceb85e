"""Second-fundamental-form quantities of the highest-weight orbit.

Root-combinatorial side: m_{a,b}^2, C_Delta, the set Phi and the excess
functionals S_gamma.  Representation side: exact Gram matrices of the
normal projections (f_a f_b p)^nu, grouped by the weight level gamma = a+b,
and a multi-start ascent that searches for large values of ||II(fp, fp)||^2.

Every sum over decompositions gamma = a + b runs over ordered pairs.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm, sqrt
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .hwmodule import HWContext, shapovalov_inner
from .rootsys import RootSystem, Vec, inner

log = logging.getLogger(__name__)

__all__ = [
    "InfeasibleR",
    "IndexMismatch",
    "ZeroTangent",
    "GramTable",
    "CoefVector",
    "MaxReport",
    "m_squared",
    "decompositions",
    "c_delta",
    "c_delta_unordered",
    "phi_set",
    "s_gamma",
    "s_gamma_exact",
    "estimate_sum",
    "estimate_sum_exact",
    "estimate_sum_batch",
    "sff_pair_norm_sq",
    "mab_certificate",
    "sff_gram",
    "sff_value_sq",
    "sff_value_grad",
    "maximize_sff",
]

FEAS_TOL = 1e-12


class InfeasibleR(ValueError):
    pass


class IndexMismatch(ValueError):
    pass


class ZeroTangent(ValueError):
    pass


def m_squared(rs: RootSystem, alpha: int, beta: int) -> int:
    """2 if alpha == beta or the two roots form an obtuse angle, else 1."""
    if alpha == beta:
        return 2
    a, b = rs.positive_roots[alpha], rs.positive_roots[beta]
    return 2 if inner(a, b) < 0 else 1


@lru_cache(maxsize=None)
def _decompositions(rs: RootSystem) -> Dict[Vec, Tuple[Tuple[int, int], ...]]:
    blocks: Dict[Vec, List[Tuple[int, int]]] = defaultdict(list)
    roots = rs.positive_roots
    for i, a in enumerate(roots):
        for j, b in enumerate(roots):
            blocks[tuple(x + y for x, y in zip(a, b))].append((i, j))
    return {g: tuple(v) for g, v in sorted(blocks.items())}


def decompositions(rs: RootSystem) -> Dict[Vec, Tuple[Tuple[int, int], ...]]:
    """gamma in 2Delta+ -> ordered pairs (i, j) with root_i + root_j = gamma."""
    return _decompositions(rs)


@lru_cache(maxsize=None)
def _int_roots(rs: RootSystem) -> Tuple[Tuple[int, ...], ...]:
    """Positive roots scaled to integer coordinates (same angles, same sums)."""
    den = 1
    for root in rs.positive_roots:
        for x in root:
            den = lcm(den, x.denominator)
    return tuple(tuple(int(x * den) for x in root) for root in rs.positive_roots)


def c_delta(rs: RootSystem) -> int:
    """max over gamma of sum_{a+b=gamma} m_{a,b}^2, by a single pass over ordered pairs."""
    roots = _int_roots(rs)
    best = 0
    sums: Dict[Tuple[int, ...], int] = {}
    for i, a in enumerate(roots):
        for j, b in enumerate(roots):
            g = tuple(x + y for x, y in zip(a, b))
            if i == j or sum(x * y for x, y in zip(a, b)) < 0:
                m2 = 2
            else:
                m2 = 1
            total = sums.get(g, 0) + m2
            sums[g] = total
            if total > best:
                best = total
    return best


def c_delta_unordered(rs: RootSystem) -> int:
    """Same quantity from unordered pairs, off-diagonal terms counted twice."""
    totals: Dict[Tuple[int, ...], int] = defaultdict(int)
    n = rs.n_positive
    for i in range(n):
        for j in range(i, n):
            g = tuple(x + y for x, y in zip(rs.coefficients[i], rs.coefficients[j]))
            totals[g] += (1 if i == j else 2) * m_squared(rs, i, j)
    return max(totals.values())


def phi_set(rs: RootSystem) -> List[Vec]:
    """Levels gamma with more than two ordered decompositions or an obtuse one."""
    out = []
    for g, pairs in decompositions(rs).items():
        obtuse = any(i != j and m_squared(rs, i, j) == 2 for i, j in pairs)
        if len(pairs) > 2 or obtuse:
            out.append(g)
    return out


def _as_r(rs: RootSystem, r) -> list:
    if isinstance(r, Mapping):
        vals = [0] * rs.n_positive
        for k, v in r.items():
            vals[k] = v
        return vals
    r = list(r)
    if len(r) != rs.n_positive:
        raise IndexMismatch(f"expected {rs.n_positive} values, got {len(r)}")
    return r


@lru_cache(maxsize=None)
def _level_plan(rs: RootSystem) -> Dict[Vec, Tuple[Tuple[int, int, int], ...]]:
    """gamma -> (i, j, m_ij^2) over its ordered decompositions."""
    return {
        g: tuple((i, j, m_squared(rs, i, j)) for i, j in prs)
        for g, prs in decompositions(rs).items()
    }


def s_gamma_exact(rs: RootSystem, r, gamma: Vec) -> Tuple[Fraction, Fraction]:
    """S_gamma as (x, y) meaning x + y*sqrt(2); exact for rational r.

    With s1 = sum of r_a r_b over pairs with m = 1 and s2 over pairs with
    m = sqrt 2, the square is s1^2 + 2 s2^2 + 2 sqrt2 s1 s2.
    """
    r = _as_r(rs, r)
    s1 = s2 = quad = Fraction(0)
    for i, j, m2 in _level_plan(rs)[tuple(gamma)]:
        prod = Fraction(r[i]) * Fraction(r[j])
        if m2 == 2:
            s2 += prod
        else:
            s1 += prod
        quad += prod * prod
    return s1 * s1 + 2 * s2 * s2 - 2 * quad, 2 * s1 * s2


def s_gamma(rs: RootSystem, r, gamma: Vec) -> float:
    r = _as_r(rs, r)
    s = quad = 0.0
    for i, j, m2 in _level_plan(rs)[tuple(gamma)]:
        prod = float(r[i]) * float(r[j])
        s += sqrt(m2) * prod
        quad += prod * prod
    return s * s - 2 * quad


def _check_unit(r: list):
    if all(isinstance(x, (int, Fraction)) for x in r):
        if sum(Fraction(x) ** 2 for x in r) != 1:
            raise InfeasibleR("sum of r^2 must equal 1")
        if any(x < 0 for x in r):
            raise InfeasibleR("r must be nonnegative")
        return True
    if abs(sum(float(x) ** 2 for x in r) - 1.0) > FEAS_TOL:
        raise InfeasibleR("sum of r^2 must equal 1 (tolerance 1e-12)")
    if any(x < 0 for x in r):
        raise InfeasibleR("r must be nonnegative")
    return False


def estimate_sum(rs: RootSystem, r) -> float:
    """2 + sum_gamma S_gamma, the upper-bound functional for ||II(fp, fp)||^2.

    Rational r is evaluated exactly first and rounded once.
    """
    r = _as_r(rs, r)
    if _check_unit(r):
        x, y = estimate_sum_exact(rs, r)
        return float(x) + float(y) * sqrt(2) if y else float(x)
    return 2.0 + sum(s_gamma(rs, r, g) for g in decompositions(rs))


def estimate_sum_exact(rs: RootSystem, r) -> Tuple[Fraction, Fraction]:
    """Exact 2 + sum S_gamma as (x, y) = x + y sqrt 2, for rational unit r."""
    r = _as_r(rs, r)
    if not _check_unit(r):
        raise InfeasibleR("exact evaluation needs rational r")
    x, y = Fraction(2), Fraction(0)
    for g in decompositions(rs):
        dx, dy = s_gamma_exact(rs, r, g)
        x += dx
        y += dy
    return x, y


@lru_cache(maxsize=None)
def _batch_plan(rs: RootSystem):
    blocks = decompositions(rs)
    A, B, M, K = [], [], [], []
    for k, pairs in enumerate(blocks.values()):
        for i, j in pairs:
            A.append(i)
            B.append(j)
            M.append(sqrt(m_squared(rs, i, j)))
            K.append(k)
    ind = sp.csr_matrix((np.ones(len(K)), (np.arange(len(K)), K)), shape=(len(K), len(blocks)))
    return np.array(A), np.array(B), np.array(M), ind


def estimate_sum_batch(rs: RootSystem, R: np.ndarray, chunk: int = 512) -> np.ndarray:
    """Vectorized estimate_sum over the rows of R (each a unit vector)."""
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[1] != rs.n_positive:
        raise IndexMismatch(f"expected shape (*, {rs.n_positive}), got {R.shape}")
    if np.any(np.abs((R * R).sum(axis=1) - 1.0) > FEAS_TOL) or np.any(R < 0):
        raise InfeasibleR("rows must be nonnegative unit vectors")
    A, B, M, ind = _batch_plan(rs)
    out = np.empty(len(R))
    for s in range(0, len(R), chunk):
        blk = R[s:s + chunk]
        prod = blk[:, A] * blk[:, B]
        lin = (ind.T @ (prod * M).T).T
        quad = (ind.T @ (prod * prod).T).T
        out[s:s + chunk] = 2.0 + (lin * lin - 2.0 * quad).sum(axis=1)
    return out


# representation side ------------------------------------------------------


def _projected_inner(ctx: HWContext, P: Tuple[int, int], Q: Tuple[int, int]) -> Fraction:
    """<(f_a f_b p)^nu, (f_c f_d p)^nu> for two pairs on the same level."""
    rs = ctx.rs
    val = shapovalov_inner(ctx, P, Q)
    k = rs.sum_index(*P)
    if k is not None and ctx.lam_pair[k] > 0:
        val -= shapovalov_inner(ctx, P, (k,)) * shapovalov_inner(ctx, (k,), Q) / ctx.lam_pair[k]
    return val


def sff_pair_norm_sq(ctx: HWContext, alpha: int, beta: int) -> Fraction:
    """||II_p(f_a p, f_b p)||^2 = ||(f_a f_b p)^nu||^2, exact."""
    if ctx.lam_pair[alpha] <= 0 or ctx.lam_pair[beta] <= 0:
        raise ZeroTangent("f_alpha p or f_beta p vanishes")
    return _projected_inner(ctx, (alpha, beta), (alpha, beta))


@dataclass
class MabCertificate:
    ok: bool
    checked: int
    violations: List[Tuple[int, int, Fraction, Fraction]] = field(default_factory=list)
    tight: int = 0

    def __bool__(self) -> bool:
        return self.ok


def mab_certificate(ctx: HWContext) -> MabCertificate:
    """Exact check of ||II(f_a p, f_b p)||^2 <= m^2 <l,a^v><l,b^v> on all active pairs."""
    rs = ctx.rs
    act = ctx.active
    violations = []
    checked = tight = 0
    for a in act:
        for b in act:
            lhs = sff_pair_norm_sq(ctx, a, b)
            rhs = m_squared(rs, a, b) * ctx.lam_pair[a] * ctx.lam_pair[b]
            checked += 1
            if lhs > rhs:
                violations.append((a, b, lhs, Fraction(rhs)))
            elif lhs == rhs:
                tight += 1
    return MabCertificate(ok=not violations, checked=checked, violations=violations, tight=tight)


@dataclass
class GramTable:
    """Per-level Gram matrices of the projected vectors (f_a f_b p)^nu.

    ``active`` lists the positive roots carrying coefficients; ``weights``
    holds their lowering norms <lambda, a^vee>.  Level k has ordered pairs
    ``pairs[k]`` and exact matrix ``matrices[k]``.
    """

    rs: RootSystem
    active: Tuple[int, ...]
    weights: Tuple[int, ...]
    gammas: List[Vec]
    pairs: List[List[Tuple[int, int]]]
    matrices: List[List[List[Fraction]]]

    def is_zero(self) -> bool:
        return all(x == 0 for m in self.matrices for row in m for x in row)

    def _plan(self):
        plan = getattr(self, "_plan_cache", None)
        if plan is None:
            pos = {a: k for k, a in enumerate(self.active)}
            A, B, blocks = [], [], []
            for prs, mat in zip(self.pairs, self.matrices):
                for i, j in prs:
                    A.append(pos[i])
                    B.append(pos[j])
                blocks.append(np.array([[float(x) for x in row] for row in mat]))
            G = sp.block_diag(blocks, format="csr") if blocks else sp.csr_matrix((0, 0))
            plan = (np.array(A, dtype=int), np.array(B, dtype=int), G)
            self._plan_cache = plan
        return plan


def sff_gram(ctx: HWContext) -> GramTable:
    """Exact Gram matrices, one block per level gamma with active pairs."""
    rs = ctx.rs
    act = set(ctx.active)
    gammas, pairs, mats = [], [], []
    for g, prs in decompositions(rs).items():
        live = [(i, j) for i, j in prs if i in act and j in act]
        if not live:
            continue
        mat = [[Fraction(0)] * len(live) for _ in live]
        for x, P in enumerate(live):
            for y in range(x, len(live)):
                v = _projected_inner(ctx, P, live[y])
                mat[x][y] = v
                mat[y][x] = v
        gammas.append(g)
        pairs.append(live)
        mats.append(mat)
    active = tuple(ctx.active)
    return GramTable(
        rs=rs,
        active=active,
        weights=tuple(ctx.lam_pair[a] for a in active),
        gammas=gammas,
        pairs=pairs,
        matrices=mats,
    )


@dataclass
class CoefVector:
    """Coefficients z_a of f = sum z_a f_a over the active roots."""

    z: np.ndarray
    weights: np.ndarray

    @property
    def r(self) -> np.ndarray:
        return np.abs(self.z) * np.sqrt(self.weights)

    @property
    def feasibility_residual(self) -> float:
        return abs(float((self.r ** 2).sum()) - 1.0)


def sff_value_sq(gram: GramTable, z):
    """||II(fp, fp)||^2 = sum_gamma v^* G v with v_k = z_a z_b over the level's pairs.

    Exact Fraction when every z is rational; otherwise a float.
    """
    if isinstance(z, CoefVector):
        z = z.z
    if len(z) != len(gram.active):
        raise IndexMismatch(f"expected {len(gram.active)} coefficients, got {len(z)}")
    if all(isinstance(x, (int, Fraction)) for x in z):
        pos = {a: k for k, a in enumerate(gram.active)}
        zz = [Fraction(x) for x in z]
        total = Fraction(0)
        for prs, mat in zip(gram.pairs, gram.matrices):
            v = [zz[pos[i]] * zz[pos[j]] for i, j in prs]
            total += sum(v[x] * mat[x][y] * v[y] for x in range(len(v)) for y in range(len(v)))
        return total
    A, B, G = gram._plan()
    zc = np.asarray(z, dtype=complex)
    v = zc[A] * zc[B]
    return float(np.real(np.vdot(v, G @ v)))


def sff_value_grad(gram: GramTable, z) -> np.ndarray:
    """Gradient of sff_value_sq in the real coordinates (Re z, Im z), packed as Re + i Im."""
    A, B, G = gram._plan()
    zc = np.asarray(z, dtype=complex)
    gv = G @ (zc[A] * zc[B])
    g = np.zeros(len(zc), dtype=complex)
    np.add.at(g, A, np.conj(zc[B]) * gv)
    np.add.at(g, B, np.conj(zc[A]) * gv)
    return 2.0 * g


@dataclass
class MaxReport:
    value: float
    z: CoefVector
    starts: int
    converged: bool
    grad_norm: float
    iterations: int
    start_values: List[float] = field(default_factory=list, repr=False)


def _scaled_plan(gram: GramTable):
    """Work in u = z sqrt(w), so the constraint becomes ||u|| = 1."""
    A, B, G = gram._plan()
    w = np.asarray(gram.weights, dtype=float)
    d = 1.0 / np.sqrt(w[A] * w[B]) if len(A) else np.zeros(0)
    Gs = sp.diags(d) @ G @ sp.diags(d)
    return A, B, sp.csr_matrix(Gs)


def _batch_value_grad(A, B, G, U):
    V = U[:, A] * U[:, B]
    GV = (G @ V.T).T
    vals = np.real(np.sum(np.conj(V) * GV, axis=1))
    g = np.zeros_like(U)
    rows = np.arange(U.shape[0])[:, None]
    np.add.at(g, (rows, A[None, :]), np.conj(U[:, B]) * GV)
    np.add.at(g, (rows, B[None, :]), np.conj(U[:, A]) * GV)
    return vals, 2.0 * g


def _batch_value(A, B, G, U):
    V = U[:, A] * U[:, B]
    return np.real(np.sum(np.conj(V) * (G @ V.T).T, axis=1))


def maximize_sff(
    target,
    starts: int = 64,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 5000,
    real: bool = False,
) -> MaxReport:
    """Multi-start projected gradient ascent of ||II(fp, fp)||^2 on ||fp|| = 1.

    ``target`` is a GramTable or an HWContext.  Each start follows the
    tangential gradient on the unit sphere of u = z sqrt(w), retracts by
    normalization and backtracks until the Armijo condition holds.  The
    search only certifies a lower bound for the supremum.
    """
    gram = target if isinstance(target, GramTable) else sff_gram(target)
    n = len(gram.active)
    A, B, G = _scaled_plan(gram)
    rng = np.random.default_rng(seed)
    if real:
        U = rng.standard_normal((starts, n)).astype(complex)
    else:
        U = rng.standard_normal((starts, n)) + 1j * rng.standard_normal((starts, n))
    U /= np.linalg.norm(U, axis=1, keepdims=True)

    step = np.ones(starts)
    done = np.zeros(starts, dtype=bool)
    vals, g = _batch_value_grad(A, B, G, U)
    it = 0
    gn = np.zeros(starts)
    for it in range(1, max_iter + 1):
        radial = np.real(np.sum(np.conj(U) * g, axis=1))
        gt = g - radial[:, None] * U
        if real:
            gt = np.real(gt).astype(complex)
        gn = np.linalg.norm(gt, axis=1)
        scale = np.maximum(1.0, np.abs(vals))
        done |= gn <= tol * scale
        # predicted increase below float resolution of the objective
        done |= step * gn * gn <= 1e-15 * scale
        if done.all():
            break
        live = ~done
        trial = np.where(live[:, None], U + step[:, None] * gt, U)
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        tv = _batch_value(A, B, G, trial)
        ok = live & (tv >= vals + 1e-4 * step * gn * gn)
        U = np.where(ok[:, None], trial, U)
        step = np.where(ok, np.minimum(step * 2.0, 1e3), np.where(live, step * 0.5, step))
        if ok.any():
            nv, ng = _batch_value_grad(A, B, G, U)
            vals = np.where(ok, nv, vals)
            g = np.where(ok[:, None], ng, g)

    best = int(np.argmax(vals)) if starts else 0
    u = U[best] if starts else np.zeros(n, dtype=complex)
    w = np.asarray(gram.weights, dtype=float)
    z = u / np.sqrt(w)
    report = MaxReport(
        value=float(max(vals[best], 0.0)) if starts else 0.0,
        z=CoefVector(z=z, weights=w),
        starts=starts,
        converged=bool(done[best]) if starts else True,
        grad_norm=float(gn[best]) if starts else 0.0,
        iterations=it,
        start_values=[float(v) for v in vals],
    )
    from .bounds import table1_constant

    cap = min(c_delta(gram.rs), table1_constant(gram.rs.cartan_type).c_squared)
    if report.value > cap + 1e-6:
        log.warning("maximize_sff found %.12g above the proven bound %d", report.value, cap)
    return report
