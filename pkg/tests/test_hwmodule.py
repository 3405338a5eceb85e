import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import ctx_of, rs_of, tbl_of
from oracles import adjoint_model, sl2_model
from orbitfocal.hwmodule import (
    DegreeCapExceeded,
    apply_e,
    lowering_norm_sq,
    make_context,
    root_sum,
    shapovalov_inner,
)
from orbitfocal.rootsys import pairing, vec, weight_from_fundamental


def monomials(n, max_deg):
    for d in range(max_deg + 1):
        yield from itertools.product(range(n), repeat=d)


def is_psd_exact(M):
    """Symmetric elimination over Q; a zero pivot must come with a zero row."""
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    for k in range(n):
        p = M[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(M[k][j] != 0 for j in range(k, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = M[i][k] / p
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return True


def principal_minors_nonneg(M):
    n = len(M)
    S = sympy.Matrix(M)
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            if S.extract(list(idx), list(idx)).det() < 0:
                return False
    return True


# examples ------------------------------------------------------------------

def test_apply_e_examples():
    ctx = ctx_of("A3", [1, 2, 1])
    for d in range(6):
        assert apply_e(ctx, d, (d,)) == ({(): Fraction(ctx.lam_pair[d])} if ctx.lam_pair[d] else {})
        assert apply_e(ctx, d, ()) == {}
    rs = ctx.rs
    x, y = rs.index(vec(1, -1, 0, 0)), rs.index(vec(0, 0, 1, -1))
    assert apply_e(ctx, x, (y,)) == {}


def test_lowering_norms_a2():
    rs = rs_of("A2")
    ctx = ctx_of("A2", [1, 0])
    a1, a2 = rs.simple_indices
    a12 = rs.sum_index(a1, a2)
    assert lowering_norm_sq(ctx, a1) == 1
    assert lowering_norm_sq(ctx, a2) == 0
    assert lowering_norm_sq(ctx, a12) == 1
    for a in range(3):
        assert lowering_norm_sq(ctx, a) == shapovalov_inner(ctx, (a,), (a,))
        for b in range(3):
            if a != b:
                assert shapovalov_inner(ctx, (a,), (b,)) == 0


@pytest.mark.parametrize("name,coeffs", [("A2", [2, 1]), ("B3", [1, 0, 1]), ("G2", [1, 1]), ("C3", [0, 1, 2])])
def test_degree_one_norms(name, coeffs):
    ctx = ctx_of(name, coeffs)
    for a in range(ctx.rs.n_positive):
        assert shapovalov_inner(ctx, (a,), (a,)) == pairing(ctx.lam, ctx.rs.positive_roots[a])


@pytest.mark.parametrize("k", range(0, 9))
def test_sl2_matrix_model(k):
    rs = rs_of("A1")
    ctx = make_context(rs, weight_from_fundamental(rs, [k]) if k else vec(0, 0), tbl_of("A1"))
    E, F, H = sl2_model(k)
    v = sympy.zeros(k + 1, 1)
    v[0] = 1
    vecs = [v]
    for _ in range(4):
        vecs.append(F * vecs[-1])
    for d in range(5):
        want = sympy.nsimplify((vecs[d].T * vecs[d])[0])
        assert shapovalov_inner(ctx, (0,) * d, (0,) * d) == Fraction(int(want.p), int(want.q))
    assert shapovalov_inner(ctx, (0, 0), (0, 0)) == 2 * k * (k - 1)
    assert shapovalov_inner(ctx, (0, 0, 0), (0, 0, 0)) == 6 * k * (k - 1) * (k - 2)


def _model_inner(ad, form, ids, basis, top, F, G):
    v = sympy.zeros(len(basis), 1)
    v[ids[top]] = 1

    def act(M):
        w = v
        for a in reversed(M):
            w = ad[ids[type(top)("F", a)]] * w
        return w

    x, y = act(F), act(G)
    return (x.T * form * y)[0] / (v.T * form * v)[0]


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_adjoint_representation_model(name):
    rs, tbl = rs_of(name), tbl_of(name)
    ad, form, basis, ids = adjoint_model(tbl)
    theta = rs.highest_root
    ctx = make_context(rs, rs.positive_roots[theta], tbl)
    top = type(basis[0])("E", theta)
    monos = list(monomials(rs.n_positive, 2))
    for F, G in itertools.combinations_with_replacement(monos, 2):
        if root_sum(rs, F) != root_sum(rs, G):
            continue
        want = _model_inner(ad, form, ids, basis, top, F, G)
        assert shapovalov_inner(ctx, F, G) == Fraction(int(want.p), int(want.q)), (F, G)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_defining_representation_norms(n):
    # sl(n+1) on C^(n+1): f for theta_i - theta_j is the matrix unit E_ji
    rs = rs_of(f"A{n}")
    ctx = ctx_of(f"A{n}", [1] + [0] * (n - 1))
    dim = n + 1
    units = []
    for root in rs.positive_roots:
        i = next(k for k, c in enumerate(root) if c == 1)
        j = next(k for k, c in enumerate(root) if c == -1)
        M = np.zeros((dim, dim), dtype=int)
        M[j, i] = 1
        units.append(M)
    v = np.zeros(dim, dtype=int)
    v[0] = 1
    for F in monomials(rs.n_positive, 3):
        w = v
        for a in reversed(F):
            w = units[a] @ w
        assert shapovalov_inner(ctx, F, F) == int(w @ w)


# properties ----------------------------------------------------------------

GRID = [("A2", [1, 1]), ("A2", [2, 0]), ("B2", [1, 1]), ("B2", [0, 2]), ("G2", [1, 0]), ("G2", [0, 1]),
        ("A3", [1, 0, 1]), ("B3", [0, 1, 1]), ("C3", [1, 1, 0])]


@pytest.mark.parametrize("name,coeffs", GRID)
def test_orthogonality_and_symmetry(name, coeffs):
    ctx = ctx_of(name, coeffs)
    rs = ctx.rs
    monos = list(monomials(rs.n_positive, 2))
    for F, G in itertools.product(monos, repeat=2):
        val = shapovalov_inner(ctx, F, G)
        if root_sum(rs, F) != root_sum(rs, G):
            assert val == 0
        assert val == shapovalov_inner(ctx, G, F)


@pytest.mark.parametrize("name,coeffs", GRID)
def test_level_grams_psd(name, coeffs):
    ctx = ctx_of(name, coeffs)
    rs = ctx.rs
    levels = {}
    for F in monomials(rs.n_positive, 2):
        levels.setdefault(root_sum(rs, F), []).append(F)
    for monos in levels.values():
        M = [[shapovalov_inner(ctx, F, G) for G in monos] for F in monos]
        assert is_psd_exact(M)
        if len(monos) <= 6:
            assert principal_minors_nonneg(M)


def test_psd_helper_rejects_indefinite():
    assert not is_psd_exact([[1, 2], [2, 1]])
    assert not is_psd_exact([[0, 1], [1, 0]])
    assert is_psd_exact([[1, 1], [1, 1]])


@pytest.mark.parametrize("name,coeffs", [("A2", [1, 1]), ("A2", [2, 1]), ("B2", [1, 2]), ("G2", [1, 1]),
                                         ("A3", [1, 1, 1]), ("B3", [1, 0, 1]), ("C3", [0, 1, 1])])
def test_norm_identity(name, coeffs):
    # ||f_a w||^2 - ||e_a w||^2 = <mu, a^vee> ||w||^2 for w = F v of weight mu
    ctx = ctx_of(name, coeffs)
    rs = ctx.rs
    for F in monomials(rs.n_positive, 2):
        nw = shapovalov_inner(ctx, F, F)
        for a in range(rs.n_positive):
            fa = shapovalov_inner(ctx, (a,) + F, (a,) + F)
            ew = apply_e(ctx, a, F)
            ea = sum(c * d * shapovalov_inner(ctx, M, N)
                     for M, c in ew.items() for N, d in ew.items())
            assert fa - ea == ctx.weight_pairing(F, a) * nw


def test_apply_e_is_weight_homogeneous():
    ctx = ctx_of("B3", [1, 1, 1])
    rs = ctx.rs
    for F in monomials(rs.n_positive, 2):
        for d in range(rs.n_positive):
            sums = {root_sum(rs, M) for M in apply_e(ctx, d, F)}
            assert len(sums) <= 1
            assert all(c != 0 for c in apply_e(ctx, d, F).values())


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_monomials(data):
    name = data.draw(st.sampled_from(["A2", "B2", "G2", "A3"]))
    rs = rs_of(name)
    coeffs = data.draw(st.lists(st.integers(0, 3), min_size=rs.rank, max_size=rs.rank).filter(any))
    ctx = ctx_of(name, coeffs)
    mono = st.lists(st.integers(0, rs.n_positive - 1), max_size=3).map(tuple)
    F, G = data.draw(mono), data.draw(mono)
    val = shapovalov_inner(ctx, F, G)
    assert val == shapovalov_inner(ctx, G, F)
    if root_sum(rs, F) != root_sum(rs, G):
        assert val == 0
    assert shapovalov_inner(ctx, F, F) >= 0


def test_degree_cap():
    ctx = ctx_of("A2", [1, 1])
    shapovalov_inner(ctx, (0, 1, 2, 0), (0, 1, 2, 0))
    with pytest.raises(DegreeCapExceeded):
        shapovalov_inner(ctx, (0,) * 5, (0,) * 5)
    with pytest.raises(DegreeCapExceeded):
        apply_e(ctx, 0, (0,) * 5)


def test_rejects_bad_weights():
    rs = rs_of("A2")
    with pytest.raises(ValueError):
        make_context(rs, vec(Fraction(1, 3), 0, 0), tbl_of("A2"))
    with pytest.raises(ValueError):
        make_context(rs, vec(0, 1, 0), tbl_of("A2"))  # -omega1 + omega2 type weight, not dominant


def test_concurrent_reads_agree():
    ctx = ctx_of("B3", [1, 1, 1])
    rs = ctx.rs
    work = [(F, F) for F in monomials(rs.n_positive, 2)]
    fresh = ctx_of("B3", [1, 1, 1])
    expect = [shapovalov_inner(fresh, F, G) for F, G in work]
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda fg: shapovalov_inner(ctx, *fg), work))
    assert got == expect
