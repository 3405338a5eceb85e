"""Curvature constants per Cartan type and the focal-radius lower bound."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import atan, isqrt, sqrt
from typing import Iterable, List, Optional

import numpy as np

from .curvature import estimate_sum_batch
from .rootsys import CartanType, build_root_system, parse_cartan_type

__all__ = [
    "NotClassical",
    "BoundConstant",
    "FocalBound",
    "ClassicalReport",
    "TABLE1",
    "table1_constant",
    "combine_constants",
    "focal_lower_bound",
    "classical_family_check",
    "arccot",
    "worker_count",
]

# squared curvature constants per family; E is keyed by rank
TABLE1 = {"A": 12, "B": 24, "C": 24, "D": 24, "G": 6, "F": 28, "E6": 40, "E7": 64, "E8": 112}

# sqrt(2): lower floor from the torus/product argument, also the real-form multiplier
TORUS_FLOOR = 2

WORKERS_ENV = "ORBITFOCAL_WORKERS"
SAMPLE_CHUNK = 2048


class NotClassical(ValueError):
    pass


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def arccot(c: float) -> float:
    return atan(1.0 / c) if c else np.pi / 2


@dataclass(frozen=True)
class BoundConstant:
    c_squared: int

    @property
    def c_float(self) -> float:
        return sqrt(self.c_squared)

    def __str__(self) -> str:
        root = isqrt(self.c_squared)
        if root * root == self.c_squared:
            return str(root)
        return f"sqrt({self.c_squared})"


def table1_constant(ct) -> BoundConstant:
    ct = parse_cartan_type(ct)
    key = f"E{ct.rank}" if ct.family == "E" else ct.family
    return BoundConstant(TABLE1[key])


def _types(types: Iterable) -> List[CartanType]:
    return [parse_cartan_type(t) for t in types]


def combine_constants(types: Iterable) -> int:
    """max(2, C_T^2 over the simple factors); an empty list is a pure torus."""
    return max([TORUS_FLOOR] + [table1_constant(t).c_squared for t in _types(types)])


@dataclass(frozen=True)
class FocalBound:
    c_squared: int
    real_form: bool
    factors: tuple

    @property
    def effective_c_squared(self) -> int:
        """Squared constant after the sqrt(2) multiplier for non-complex representations."""
        return self.c_squared * (2 if self.real_form else 1)

    @property
    def c_float(self) -> float:
        return sqrt(self.effective_c_squared)

    @property
    def bound_radians(self) -> float:
        return arccot(self.c_float)


def focal_lower_bound(types: Iterable, is_complex: bool = True) -> FocalBound:
    ts = _types(types)
    return FocalBound(c_squared=combine_constants(ts), real_form=not is_complex, factors=tuple(ts))


@dataclass
class ClassicalReport:
    cartan_type: CartanType
    samples: int
    seed: int
    max_value: float
    bound: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def __bool__(self) -> bool:
        return self.passed


def _chunk_values(rs, seed: int, k: int, size: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
    R = np.abs(rng.standard_normal((size, rs.n_positive)))
    R /= np.linalg.norm(R, axis=1, keepdims=True)
    return estimate_sum_batch(rs, R)


def classical_family_check(ct, samples: int = 10_000, seed: int = 0, workers: Optional[int] = None) -> ClassicalReport:
    """Sample uniform nonnegative unit r and compare estimate_sum with C_T^2.

    Samples are drawn in fixed chunks with their own seed streams, so the
    report does not depend on the number of workers.
    """
    ct = parse_cartan_type(ct)
    if not ct.is_classical:
        raise NotClassical(f"{ct} is not of type A, B, C or D")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rs = build_root_system(ct)
    bound = table1_constant(ct).c_squared
    sizes = [min(SAMPLE_CHUNK, samples - s) for s in range(0, samples, SAMPLE_CHUNK)]
    workers = workers or worker_count()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ks: _chunk_values(rs, seed, *ks), enumerate(sizes)))
    else:
        parts = [_chunk_values(rs, seed, k, s) for k, s in enumerate(sizes)]
    vals = np.concatenate(parts)
    return ClassicalReport(
        cartan_type=ct,
        samples=samples,
        seed=seed,
        max_value=float(vals.max()),
        bound=bound,
        violations=int(np.sum(vals > bound + 1e-9)),
    )
