"""Integer structure constants for a Chevalley basis {e_a, f_a, h_i}.

Only the constants N_{a,b} for pairs of *positive* roots are stored.  The
signs are fixed on extraspecial pairs and propagated with the quadruple
identity; constants involving negative roots are derived on demand from
the stored table with

    N_{-a,-b} = -N_{a,b},
    N_{a,b}/|c|^2 = N_{b,c}/|a|^2 = N_{c,a}/|b|^2   whenever a + b + c = 0.

Conventions: e_a = X_a, f_a = X_{-a}, [e_a, f_a] = h_a (the coroot), and
h_i denotes the simple coroot alpha_i^vee.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .rootsys import RootSystem, inner

__all__ = [
    "BasisElem",
    "ChevalleyTable",
    "JacobiReport",
    "build_chevalley",
    "bracket",
    "bracket_elems",
    "coroot_element",
    "structure_constant",
    "verify_jacobi",
]

# a signed root is (sign, positive-root index) with sign in {+1, -1}
SignedRoot = Tuple[int, int]


class BasisElem(NamedTuple):
    """``kind`` is 'E', 'F' or 'H'; E/F index positive roots, H indexes simple coroots."""

    kind: str
    index: int

    def __repr__(self) -> str:
        return f"{self.kind}({self.index})"


LieElem = Dict[BasisElem, Fraction]


@dataclass(frozen=True, eq=False)
class ChevalleyTable:
    rs: RootSystem
    n_const: Mapping[Tuple[int, int], int]
    order: Tuple[int, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.rs.n_positive + self.rs.rank

    def basis(self) -> List[BasisElem]:
        n = self.rs.n_positive
        return (
            [BasisElem("E", i) for i in range(n)]
            + [BasisElem("F", i) for i in range(n)]
            + [BasisElem("H", i) for i in range(self.rs.rank)]
        )

    def flipped(self, i: int, j: int) -> "ChevalleyTable":
        """Copy with the sign of N_{i,j} (and N_{j,i}) reversed; for fault injection."""
        table = dict(self.n_const)
        table[(i, j)] = -table[(i, j)]
        table[(j, i)] = -table[(j, i)]
        return replace(self, n_const=table)

    @cached_property
    def _int_table(self):
        return _basis_bracket_table(self)


def _signed_vec(rs: RootSystem, r: SignedRoot):
    s, i = r
    return tuple(s * x for x in rs.positive_roots[i])


def _signed_sum(rs: RootSystem, a: SignedRoot, b: SignedRoot) -> Optional[SignedRoot]:
    va, vb = _signed_vec(rs, a), _signed_vec(rs, b)
    total = tuple(x + y for x, y in zip(va, vb))
    k = rs.root_index.get(total)
    if k is not None:
        return (1, k)
    k = rs.root_index.get(tuple(-x for x in total))
    if k is not None:
        return (-1, k)
    return None


def _norm(rs: RootSystem, r: SignedRoot) -> Fraction:
    return rs.norms[r[1]]


def _n_signed(table: Mapping[Tuple[int, int], int], rs: RootSystem, a: SignedRoot, b: SignedRoot) -> int:
    """N_{a,b} for arbitrary signed roots; 0 when a+b is not a root."""
    c_pos = _signed_sum(rs, a, b)
    if c_pos is None:
        return 0
    if a[0] > 0 and b[0] > 0:
        return table[(a[1], b[1])]
    if a[0] < 0 and b[0] < 0:
        return -table[(a[1], b[1])]
    c = (-c_pos[0], c_pos[1])  # a + b + c = 0
    cc = _norm(rs, c)
    # pick the cyclic pair whose two roots share a sign
    if b[0] == c[0]:
        val = Fraction(cc) / _norm(rs, a) * _n_signed(table, rs, b, c)
    else:
        val = Fraction(cc) / _norm(rs, b) * _n_signed(table, rs, c, a)
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral structure constant {val}")
    return int(val)


def structure_constant(tbl: ChevalleyTable, a: SignedRoot, b: SignedRoot) -> int:
    """N_{a,b} with [X_a, X_b] = N_{a,b} X_{a+b}; signed roots are (sign, index)."""
    return _n_signed(tbl.n_const, tbl.rs, a, b)


def build_chevalley(
    rs: RootSystem,
    simple_order: Optional[Sequence[int]] = None,
    signs: Optional[Mapping[int, int]] = None,
) -> ChevalleyTable:
    """Structure constants from extraspecial pairs.

    Positive roots are totally ordered by height, ties broken by the
    canonical (lexicographic) index; passing ``simple_order`` (a permutation
    of range(rank)) breaks ties by the simple-root coefficients read in that
    order instead.  ``signs`` maps a root index to the sign given to its
    extraspecial pair (default +1).
    """
    n = rs.n_positive
    if simple_order is None:
        keys = [(rs.height(i), i) for i in range(n)]
    else:
        perm = list(simple_order)
        if sorted(perm) != list(range(rs.rank)):
            raise ValueError(f"simple_order must permute range({rs.rank})")
        keys = [(rs.height(i), tuple(rs.coefficients[i][k] for k in perm)) for i in range(n)]
    order = tuple(sorted(range(n), key=lambda i: keys[i]))
    pos = {r: k for k, r in enumerate(order)}
    signs = signs or {}

    table: Dict[Tuple[int, int], int] = {}
    for xi in sorted(range(n), key=lambda i: keys[i]):
        special = []
        for a in range(n):
            b = rs.diff_index(xi, a)
            if b is not None and pos[a] < pos[b]:
                special.append((a, b))
        if not special:
            continue
        special.sort(key=lambda ab: pos[ab[0]])
        g, d = special[0]
        n_gd = signs.get(xi, 1) * (rs.string_below(g, d) + 1)
        table[(g, d)] = n_gd
        table[(d, g)] = -n_gd
        xx = rs.norms[xi]
        for a, b in special[1:]:
            t1 = Fraction(0)
            if _signed_sum(rs, (1, b), (-1, g)) is not None:
                t1 = Fraction(
                    _n_signed(table, rs, (1, b), (-1, g)) * _n_signed(table, rs, (1, a), (-1, d)),
                    _norm(rs, _signed_sum(rs, (1, b), (-1, g))),
                )
            t2 = Fraction(0)
            if _signed_sum(rs, (-1, g), (1, a)) is not None:
                t2 = Fraction(
                    _n_signed(table, rs, (-1, g), (1, a)) * _n_signed(table, rs, (1, b), (-1, d)),
                    _norm(rs, _signed_sum(rs, (-1, g), (1, a))),
                )
            val = xx / n_gd * (t1 + t2)
            if val.denominator != 1 or val == 0:
                raise ArithmeticError(f"bad structure constant {val} for pair {(a, b)}")
            table[(a, b)] = int(val)
            table[(b, a)] = -int(val)
    return ChevalleyTable(rs=rs, n_const=table, order=order)


def coroot_element(rs: RootSystem, i: int, scale=1) -> LieElem:
    """h_{alpha_i} written in the simple coroots."""
    return {
        BasisElem("H", k): scale * c for k, c in enumerate(rs.coroot_coefficients[i]) if c != 0
    }


def _as_signed(x: BasisElem) -> SignedRoot:
    return (1 if x.kind == "E" else -1, x.index)


def bracket(tbl: ChevalleyTable, x: BasisElem, y: BasisElem) -> LieElem:
    """Exact commutator of two basis elements as a {BasisElem: coefficient} map."""
    rs = tbl.rs
    if x.kind == "H" and y.kind == "H":
        return {}
    if x.kind == "H" or y.kind == "H":
        h, r, sgn = (x, y, 1) if x.kind == "H" else (y, x, -1)
        root = rs.positive_roots[r.index]
        val = inner(root, rs.simple_roots[h.index]) * 2 / rs.norms[rs.simple_indices[h.index]]
        if r.kind == "F":
            val = -val
        val *= sgn
        return {r: val} if val != 0 else {}
    a, b = _as_signed(x), _as_signed(y)
    if a[1] == b[1]:
        if a[0] == b[0]:
            return {}
        return coroot_element(rs, a[1], a[0])
    c = _signed_sum(rs, a, b)
    if c is None:
        return {}
    val = _n_signed(tbl.n_const, rs, a, b)
    return {BasisElem("E" if c[0] > 0 else "F", c[1]): Fraction(val)}


def bracket_elems(tbl: ChevalleyTable, u: Mapping[BasisElem, Fraction], v: Mapping[BasisElem, Fraction]) -> LieElem:
    out: Dict[BasisElem, Fraction] = {}
    for x, cx in u.items():
        for y, cy in v.items():
            for z, cz in bracket(tbl, x, y).items():
                out[z] = out.get(z, 0) + cx * cy * cz
    return {k: c for k, c in out.items() if c != 0}


def _basis_bracket_table(tbl: ChevalleyTable):
    """Integer bracket table on basis ids 0..dim-1 (E, then F, then H)."""
    basis = tbl.basis()
    ids = {b: k for k, b in enumerate(basis)}
    out = []
    for x in basis:
        row = []
        for y in basis:
            res = bracket(tbl, x, y)
            items = []
            for z, c in res.items():
                if Fraction(c).denominator != 1:
                    raise ArithmeticError(f"non-integral bracket [{x},{y}]")
                items.append((ids[z], int(c)))
            row.append(tuple(items))
        out.append(row)
    return out


@dataclass
class JacobiReport:
    ok: bool
    checked: int
    exhaustive: bool
    failures: List[Tuple[BasisElem, BasisElem, BasisElem]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _jacobiator(table, x: int, y: int, z: int) -> Dict[int, int]:
    acc: Dict[int, int] = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        for u, cu in table[a][b]:
            for w, cw in table[u][c]:
                acc[w] = acc.get(w, 0) + cu * cw
    return {k: v for k, v in acc.items() if v}


def verify_jacobi(
    tbl: ChevalleyTable,
    samples: int = 10_000,
    seed: int = 0,
    exhaustive: Optional[bool] = None,
    max_failures: int = 10,
) -> JacobiReport:
    """Check the Jacobi identity on basis triples.

    Exhaustive over unordered triples (the Jacobiator is alternating) for
    rank <= 4, otherwise on ``samples`` seeded random triples.
    """
    if exhaustive is None:
        exhaustive = tbl.rs.rank <= 4
    table = tbl._int_table
    dim = len(table)
    if exhaustive:
        triples = itertools.combinations_with_replacement(range(dim), 3)
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(dim), rng.randrange(dim), rng.randrange(dim)) for _ in range(samples))
    basis = tbl.basis()
    failures = []
    checked = 0
    for x, y, z in triples:
        checked += 1
        if _jacobiator(table, x, y, z):
            if len(failures) < max_failures:
                failures.append((basis[x], basis[y], basis[z]))
            else:
                break
    return JacobiReport(ok=not failures, checked=checked, exhaustive=exhaustive, failures=failures)
