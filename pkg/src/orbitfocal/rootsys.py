"""Exact rational realizations of the reduced irreducible root systems.

Roots live in the Bourbaki ambient Euclidean spaces (A_n in n+1
coordinates, G_2 in the sum-zero plane of Q^3, E_6/E_7/E_8 inside Q^8).
Only the simple roots are written down by hand; the positive roots are
generated from them by root-string closure, so the classical closed forms
stay available as independent cross-checks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

Vec = Tuple[Fraction, ...]

__all__ = [
    "CartanType",
    "RootSystem",
    "InvalidCartanType",
    "DimensionMismatch",
    "ZeroRoot",
    "WrongLength",
    "ZeroWeight",
    "parse_cartan_type",
    "build_root_system",
    "inner",
    "pairing",
    "weight_from_fundamental",
    "isoparametric_check",
    "vec",
]


class InvalidCartanType(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class ZeroRoot(ValueError):
    pass


class WrongLength(ValueError):
    pass


class ZeroWeight(ValueError):
    pass


_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


@dataclass(frozen=True, order=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family
        if not isinstance(fam, str) or fam not in "ABCDEFG" or len(fam) != 1:
            raise InvalidCartanType(f"unknown Cartan family {fam!r}")
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise InvalidCartanType(f"rank must be an integer, got {self.rank!r}")
        if fam in _MIN_RANK:
            if self.rank < _MIN_RANK[fam]:
                hint = " (use B2)" if (fam, self.rank) == ("C", 2) else ""
                raise InvalidCartanType(
                    f"{fam}{self.rank} is not allowed: {fam}_n needs n >= {_MIN_RANK[fam]}{hint}"
                )
        elif self.rank not in _FIXED_RANKS[fam]:
            raise InvalidCartanType(f"{fam}{self.rank} does not exist")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def is_classical(self) -> bool:
        return self.family in "ABCD"


_TYPE_RE = re.compile(r"^\s*([A-Za-z])\s*_?\s*(\d+)\s*$")


def parse_cartan_type(text) -> CartanType:
    """Parse strings like ``"A3"``, ``"e8"`` or ``"D_4"``."""
    if isinstance(text, CartanType):
        return text
    m = _TYPE_RE.match(str(text))
    if not m:
        raise InvalidCartanType(f"cannot parse Cartan type {text!r}")
    return CartanType(m.group(1).upper(), int(m.group(2)))


def vec(*coords) -> Vec:
    """Build an exact vector; accepts ints, Fractions or strings like '1/2'."""
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    return tuple(Fraction(c) for c in coords)


def inner(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"lengths {len(u)} and {len(v)} differ")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def pairing(mu: Sequence[Fraction], alpha: Sequence[Fraction]) -> Fraction:
    """Return <mu, alpha^vee> = 2<mu, alpha>/<alpha, alpha>."""
    aa = inner(alpha, alpha)
    if aa == 0:
        raise ZeroRoot("pairing against the zero vector")
    return 2 * inner(mu, alpha) / aa


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def _scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def _unit(dim: int, i: int, c=1) -> List[Fraction]:
    v = [Fraction(0)] * dim
    v[i] = Fraction(c)
    return v


def _simple_roots(ct: CartanType) -> List[Vec]:
    n, fam = ct.rank, ct.family
    h = Fraction(1, 2)

    def e(dim, *pairs):
        v = [Fraction(0)] * dim
        for i, c in pairs:
            v[i] += Fraction(c)
        return tuple(v)

    if fam == "A":
        return [e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if fam in "BCD":
        out = [e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if fam == "B":
            out.append(e(n, (n - 1, 1)))
        elif fam == "C":
            out.append(e(n, (n - 1, 2)))
        else:
            out.append(e(n, (n - 2, 1), (n - 1, 1)))
        return out
    if fam == "G":
        return [e(3, (0, 1), (1, -1)), e(3, (0, -2), (1, 1), (2, 1))]
    if fam == "F":
        return [
            e(4, (1, 1), (2, -1)),
            e(4, (2, 1), (3, -1)),
            e(4, (3, 1)),
            e(4, (0, h), (1, -h), (2, -h), (3, -h)),
        ]
    # E_n: first n simple roots of Bourbaki's E_8
    e8 = [
        tuple([h] + [-h] * 6 + [h]),
        e(8, (0, 1), (1, 1)),
    ] + [e(8, (i, -1), (i + 1, 1)) for i in range(6)]
    return e8[:n]


def _solve(matrix: List[List[Fraction]], rhs: List[List[Fraction]]) -> List[List[Fraction]]:
    """Solve ``matrix @ X = rhs`` exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + list(map(Fraction, r)) for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Positive system of a Cartan type, with exact lookup tables.

    ``positive_roots`` is sorted lexicographically on coordinates and all
    integer indices used elsewhere in the package refer to that order.
    ``coefficients[i]`` is the expansion of ``positive_roots[i]`` in the
    simple roots.
    """

    cartan_type: CartanType
    simple_roots: Tuple[Vec, ...]
    positive_roots: Tuple[Vec, ...]
    coefficients: Tuple[Tuple[int, ...], ...]
    root_index: Dict[Vec, int] = field(repr=False)
    fundamental_weights: Tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def dim(self) -> int:
        return len(self.simple_roots[0])

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    def __len__(self) -> int:
        return len(self.positive_roots)

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type}, {len(self.positive_roots)} positive roots)"

    def index(self, root: Sequence) -> int:
        return self.root_index[vec(root)]

    def is_root(self, v: Vec) -> bool:
        return v in self.root_index or _scale(-1, v) in self.root_index

    def height(self, i: int) -> int:
        return sum(self.coefficients[i])

    @cached_property
    def norms(self) -> Tuple[Fraction, ...]:
        return tuple(inner(a, a) for a in self.positive_roots)

    @cached_property
    def simple_indices(self) -> Tuple[int, ...]:
        return tuple(self.root_index[a] for a in self.simple_roots)

    @cached_property
    def cartan_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        """``A[i][j] = <alpha_i, alpha_j^vee>``."""
        return tuple(
            tuple(int(pairing(a, b)) for b in self.simple_roots) for a in self.simple_roots
        )

    @cached_property
    def coroot_coefficients(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Expansion of each positive coroot in the simple coroots (integers)."""
        out = []
        for a, c in zip(self.positive_roots, self.coefficients):
            na = inner(a, a)
            out.append(
                tuple(Fraction(ci) * inner(s, s) / na for ci, s in zip(c, self.simple_roots))
            )
        return tuple(out)

    @cached_property
    def highest_root(self) -> int:
        """Index of the unique root maximal in the simple-root partial order."""
        maximal = [
            i
            for i, ci in enumerate(self.coefficients)
            if not any(
                j != i and all(a >= b for a, b in zip(cj, ci)) for j, cj in enumerate(self.coefficients)
            )
        ]
        if len(maximal) != 1:
            raise RuntimeError(f"{self.cartan_type}: {len(maximal)} maximal roots")
        return maximal[0]

    def sum_index(self, i: int, j: int) -> int | None:
        """Index of ``root_i + root_j`` if it is a positive root."""
        return self.root_index.get(_add(self.positive_roots[i], self.positive_roots[j]))

    def diff_index(self, i: int, j: int) -> int | None:
        """Index of ``root_i - root_j`` if that difference is a positive root."""
        return self.root_index.get(_sub(self.positive_roots[i], self.positive_roots[j]))

    def string_below(self, i: int, j: int) -> int:
        """Largest p >= 0 with ``root_j - p*root_i`` a root."""
        a, b = self.positive_roots[i], self.positive_roots[j]
        p = 0
        cur = _sub(b, a)
        while self.is_root(cur):
            p += 1
            cur = _sub(cur, a)
        return p

    def all_roots(self) -> List[Vec]:
        return list(self.positive_roots) + [_scale(-1, a) for a in self.positive_roots]


def _generate_positive(simple: List[Vec]) -> Dict[Vec, Tuple[int, ...]]:
    """Root-string closure: alpha+alpha_i is a root iff q = p - <alpha, alpha_i^vee> > 0."""
    n = len(simple)
    found: Dict[Vec, Tuple[int, ...]] = {}
    for i, s in enumerate(simple):
        found[s] = tuple(1 if k == i else 0 for k in range(n))
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            cb = found[beta]
            for i, s in enumerate(simple):
                if beta == s:
                    continue
                p = 0
                cur = _sub(beta, s)
                while cur in found:
                    p += 1
                    cur = _sub(cur, s)
                q = p - pairing(beta, s)
                if q > 0:
                    new = _add(beta, s)
                    if new not in found:
                        found[new] = tuple(c + (k == i) for k, c in enumerate(cb))
                        nxt.append(new)
        layer = nxt
    return found


def build_root_system(ct) -> RootSystem:
    """Build the positive system for a Cartan type (or a string like ``"E8"``)."""
    ct = parse_cartan_type(ct)
    simple = _simple_roots(ct)
    found = _generate_positive(simple)
    order = sorted(found)
    cart = [[pairing(a, b) for b in simple] for a in simple]
    # omega_i = sum_k M[i][k] alpha_k with M @ cart = I, i.e. cart^T @ M^T = I
    n = len(simple)
    cart_t = [[cart[k][j] for k in range(n)] for j in range(n)]
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    mt = _solve(cart_t, eye)
    weights = []
    for i in range(n):
        w = tuple(Fraction(0) for _ in simple[0])
        for k in range(n):
            w = _add(w, _scale(mt[k][i], simple[k]))
        weights.append(w)
    return RootSystem(
        cartan_type=ct,
        simple_roots=tuple(simple),
        positive_roots=tuple(order),
        coefficients=tuple(found[a] for a in order),
        root_index={a: i for i, a in enumerate(order)},
        fundamental_weights=tuple(weights),
    )


def weight_from_fundamental(rs: RootSystem, coeffs: Iterable[int]) -> Vec:
    """Return lambda = sum_i coeffs[i] * omega_i."""
    coeffs = list(coeffs)
    if len(coeffs) != rs.rank:
        raise WrongLength(f"{rs.cartan_type} needs {rs.rank} coefficients, got {len(coeffs)}")
    if any(int(c) != c or c < 0 for c in coeffs):
        raise ValueError(f"coefficients must be nonnegative integers: {coeffs}")
    if not any(coeffs):
        raise ZeroWeight("zero highest weight gives the trivial representation")
    lam = tuple(Fraction(0) for _ in range(rs.dim))
    for c, w in zip(coeffs, rs.fundamental_weights):
        lam = _add(lam, _scale(int(c), w))
    return lam


def isoparametric_check(rs: RootSystem) -> Fraction:
    """max ||a||^2 ||h||^2 / <a, h>^2 over roots a not orthogonal to the highest root h.

    The crystallographic property keeps this at most 4, i.e. 1/|cos| <= 2.
    """
    top = rs.positive_roots[rs.highest_root]
    tt = inner(top, top)
    best = Fraction(0)
    for a in rs.positive_roots:
        ip = inner(a, top)
        if ip != 0:
            best = max(best, inner(a, a) * tt / (ip * ip))
    return best
