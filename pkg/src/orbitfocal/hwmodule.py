"""Exact inner products in an irreducible highest-weight module.

States are lowering monomials F = f_{a1} f_{a2} ... f_{ak} applied to the
unit highest-weight vector v (the leftmost factor acts last).  Since the
adjoint of e_a is f_a,

    <F v, f_d G v> = <e_d F v, G v>,

and e_d F v is computed by commuting e_d to the right until it kills v.
With integral lambda every intermediate coefficient is an integer, so the
recursion runs on Python ints and results are returned as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .chevalley import ChevalleyTable, build_chevalley, structure_constant
from .rootsys import RootSystem, Vec, pairing

__all__ = [
    "DegreeCapExceeded",
    "HWContext",
    "make_context",
    "apply_e",
    "shapovalov_inner",
    "lowering_norm_sq",
    "root_sum",
]

FMonomial = Tuple[int, ...]
LinComb = Dict[FMonomial, int]

DEFAULT_DEGREE_CAP = 4


class DegreeCapExceeded(ValueError):
    pass


@dataclass(eq=False)
class HWContext:
    """Root data, structure constants and a dominant integral highest weight.

    The memo tables are filled lazily.  Concurrent readers may race on an
    insert, but both sides compute the same exact value.
    """

    rs: RootSystem
    tbl: ChevalleyTable
    lam: Vec
    degree_cap: int = DEFAULT_DEGREE_CAP
    _apply_memo: Dict[Tuple[int, FMonomial], LinComb] = field(default_factory=dict, repr=False)
    _inner_memo: Dict[Tuple[FMonomial, FMonomial], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        rs = self.rs
        n = rs.n_positive
        lam_pair = []
        for a in rs.positive_roots:
            p = pairing(self.lam, a)
            if p.denominator != 1:
                raise ValueError(f"lambda is not integral: <lambda, a^vee> = {p}")
            lam_pair.append(int(p))
        for s in rs.simple_indices:
            if lam_pair[s] < 0:
                raise ValueError("lambda is not dominant")
        self.lam_pair: Tuple[int, ...] = tuple(lam_pair)
        # cartan_int[a][d] = <root_a, root_d^vee>
        self.cartan_int = tuple(
            tuple(int(pairing(rs.positive_roots[a], rs.positive_roots[d])) for d in range(n))
            for a in range(n)
        )
        # [e_d, f_a] for d != a: ('e', k, c) or ('f', k, c) or None
        comm = []
        for d in range(n):
            row = []
            for a in range(n):
                if a == d:
                    row.append(None)
                    continue
                k = rs.diff_index(d, a)
                if k is not None:
                    row.append(("e", k, structure_constant(self.tbl, (1, d), (-1, a))))
                    continue
                k = rs.diff_index(a, d)
                if k is not None:
                    row.append(("f", k, structure_constant(self.tbl, (1, d), (-1, a))))
                    continue
                row.append(None)
            comm.append(tuple(row))
        self.comm = tuple(comm)

    @property
    def active(self) -> Tuple[int, ...]:
        """Positive roots with f_a v != 0, i.e. <lambda, a^vee> > 0."""
        return tuple(i for i, p in enumerate(self.lam_pair) if p > 0)

    def weight_pairing(self, F: FMonomial, d: int) -> int:
        """<lambda - sum(F), root_d^vee>."""
        return self.lam_pair[d] - sum(self.cartan_int[a][d] for a in F)

    def _check(self, F: Sequence[int]) -> FMonomial:
        F = tuple(F)
        if len(F) > self.degree_cap:
            raise DegreeCapExceeded(f"degree {len(F)} exceeds cap {self.degree_cap}")
        return F


def make_context(rs: RootSystem, lam: Vec, tbl: Optional[ChevalleyTable] = None, degree_cap: int = DEFAULT_DEGREE_CAP) -> HWContext:
    return HWContext(rs=rs, tbl=tbl if tbl is not None else build_chevalley(rs), lam=lam, degree_cap=degree_cap)


def root_sum(rs: RootSystem, F: Sequence[int]) -> Tuple[int, ...]:
    """Sum of the roots in F, in simple-root coordinates."""
    out = [0] * rs.rank
    for a in F:
        for k, c in enumerate(rs.coefficients[a]):
            out[k] += c
    return tuple(out)


def _add_into(acc: LinComb, other: LinComb, scale: int = 1, prefix: FMonomial = ()):
    for M, c in other.items():
        key = prefix + M
        v = acc.get(key, 0) + scale * c
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)


def _apply_e(ctx: HWContext, d: int, F: FMonomial) -> LinComb:
    key = (d, F)
    hit = ctx._apply_memo.get(key)
    if hit is not None:
        return hit
    if not F:
        out: LinComb = {}
    else:
        a, rest = F[0], F[1:]
        out = {}
        _add_into(out, _apply_e(ctx, d, rest), prefix=(a,))
        if a == d:
            c = ctx.weight_pairing(rest, d)
            if c:
                _add_into(out, {rest: c})
        else:
            br = ctx.comm[d][a]
            if br is not None:
                kind, k, c = br
                if kind == "e":
                    _add_into(out, _apply_e(ctx, k, rest), scale=c)
                else:
                    _add_into(out, {(k,) + rest: c})
    ctx._apply_memo[key] = out
    return out


def apply_e(ctx: HWContext, delta: int, F: Sequence[int]) -> Dict[FMonomial, Fraction]:
    """e_delta F v expressed as a combination of lowering monomials on v."""
    F = ctx._check(F)
    return {M: Fraction(c) for M, c in _apply_e(ctx, delta, F).items()}


def _inner(ctx: HWContext, F: FMonomial, G: FMonomial) -> int:
    key = (F, G)
    hit = ctx._inner_memo.get(key)
    if hit is not None:
        return hit
    rs = ctx.rs
    if root_sum(rs, F) != root_sum(rs, G):
        val = 0
    elif not G:
        val = 1 if not F else 0
    else:
        val = 0
        for M, c in _apply_e(ctx, G[0], F).items():
            val += c * _inner(ctx, M, G[1:])
    ctx._inner_memo[key] = val
    return val


def shapovalov_inner(ctx: HWContext, F: Sequence[int], G: Sequence[int]) -> Fraction:
    """<F v, G v> for the invariant Hermitian form with ||v|| = 1."""
    return Fraction(_inner(ctx, ctx._check(F), ctx._check(G)))


def lowering_norm_sq(ctx: HWContext, alpha: int) -> Fraction:
    """||f_alpha v||^2 = <lambda, alpha^vee>."""
    return Fraction(ctx.lam_pair[alpha])
