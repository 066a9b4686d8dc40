from __future__ import annotations

import numpy as np
import pytest

from cyclicforge.gradings import (
    AsymmetricDims,
    DimensionMismatch,
    GradedElement,
    IllConditioned,
    ModulusTooSmall,
    build_sl_grading,
    build_so_grading,
    detect_cyclic_roots,
    jordan_chevalley,
    levi_from_element,
    root_decomposition,
)

RNG = np.random.default_rng(7)


def _graded_dim(alg, j):
    return sum(1 for _, k in alg.basis if k == j % alg.m)


# -- builders ---------------------------------------------------------------------


def test_sl_grading_dimensions():
    alg = build_sl_grading(3, (1, 1, 1))
    assert _graded_dim(alg, 0) == 2
    assert _graded_dim(alg, 1) == 3
    assert _graded_dim(alg, -1) == 3
    assert abs(np.linalg.det(alg.grading_element) - 1.0) < 1e-12


def test_sl_rejects_bad_input():
    with pytest.raises(ModulusTooSmall):
        build_sl_grading(2, (2,))
    with pytest.raises(DimensionMismatch):
        build_sl_grading(4, (1, 1, 1))


def test_so_rejects_asymmetric_dims():
    with pytest.raises(AsymmetricDims):
        build_so_grading((1, 2, 1))


def test_so_total_dimension():
    # m = 2n grading of so_{2n-1+k+1} with one fat self-paired block
    for n_alt, k in ((2, 1), (3, 2)):
        dims = [1] * (2 * n_alt)
        dims[n_alt] = k + 1
        alg = build_so_grading(tuple(dims))
        n = alg.n
        assert n == 2 * n_alt - 1 + k + 1
        assert len(alg.basis) == n * (n - 1) // 2
        # q-skewness of every basis element
        for b, _ in alg.basis:
            assert np.max(np.abs(alg.q @ b + b.T @ alg.q)) < 1e-14


def test_so_lambda2w_line():
    # m=3, dims (n,2,2): grade 1 contains the one-dimensional Lambda^2 W space
    alg = build_so_grading((3, 2, 2))
    rd = root_decomposition(alg)
    r = rd.find("e(1,1)+e(1,2)", 1)
    assert r is not None
    assert r.dimension() == 1


def test_grading_automorphism_order():
    alg = build_sl_grading(4, (1, 1, 1, 1))
    x = alg.random_element(RNG)
    y = x.copy()
    for _ in range(alg.m):
        y = alg.theta(y)
    assert np.max(np.abs(y - x)) < 1e-12


# -- projections and bracket law ---------------------------------------------------


@pytest.mark.parametrize("builder,args", [
    (build_sl_grading, (3, (1, 1, 1))),
    (build_sl_grading, (4, (1, 1, 1, 1))),
    (build_so_grading, ((3, 2, 2),)),
    (build_so_grading, ((1, 1, 2, 1),)),
])
def test_projection_resolution_of_identity(builder, args):
    alg = builder(*args)
    x = alg.random_element(RNG)
    total = sum(alg.project(x, j) for j in range(alg.m))
    assert np.max(np.abs(total - x)) < 1e-12
    for j in range(alg.m):
        pj = alg.project(x, j)
        assert np.max(np.abs(alg.project(pj, j) - pj)) < 1e-14
        for k in range(alg.m):
            if k != j:
                assert np.max(np.abs(alg.project(pj, k))) < 1e-14


def test_eigenspace_idempotence():
    alg = build_sl_grading(3, (1, 1, 1))
    x1 = alg.random_element(RNG, grade=1)
    assert np.max(np.abs(alg.project(x1, 1) - x1)) < 1e-14
    assert np.max(np.abs(alg.project(x1, 0))) < 1e-14
    assert np.max(np.abs(alg.theta(x1) - alg.zeta * x1)) < 1e-12


def test_grading_law_all_pairs():
    alg = build_so_grading((1, 1, 2, 1))
    for j in range(alg.m):
        for k in range(alg.m):
            x = alg.random_element(RNG, grade=j)
            y = alg.random_element(RNG, grade=k)
            z = x @ y - y @ x
            for l in range(alg.m):
                if (l - j - k) % alg.m != 0:
                    assert np.max(np.abs(alg.project(z, l))) < 1e-12


def test_bracket_containments_m_ge_3():
    for alg in (build_sl_grading(4, (1, 1, 1, 1)), build_so_grading((3, 2, 2))):
        x = alg.random_element(RNG, grade=1)
        y = alg.random_element(RNG, grade=1)
        z = x @ y - y @ x
        assert np.max(np.abs(alg.project(z, 1))) < 1e-12
        assert np.max(np.abs(alg.project(z, 0))) < 1e-12


def test_bracket_jacobi_identity():
    alg = build_sl_grading(4, (1, 1, 1, 1))
    a, b, c = (GradedElement(alg, alg.random_element(RNG)) for _ in range(3))
    j1 = a.bracket(b.bracket(c)).value
    j2 = b.bracket(c.bracket(a)).value
    j3 = c.bracket(a.bracket(b)).value
    assert np.max(np.abs(j1 + j2 + j3)) < 1e-12


def test_tau_properties():
    alg = build_so_grading((1, 1, 2, 1))
    x = alg.random_element(RNG)
    y = alg.random_element(RNG)
    # tau is an involution and flips grades
    assert np.max(np.abs(alg.tau(alg.tau(x)) - x)) < 1e-14
    x1 = alg.project(x, 1)
    assert np.max(np.abs(alg.project(alg.tau(x1), -1) - alg.tau(x1))) < 1e-13
    # B_tau positive definite
    assert alg.inner(x, x).real > 0
    # tau preserves brackets
    z = x @ y - y @ x
    tz = alg.tau(x) @ alg.tau(y) - alg.tau(y) @ alg.tau(x)
    assert np.max(np.abs(alg.tau(z) - tz)) < 1e-12


def test_tau_theta_commute():
    alg = build_sl_grading(4, (1, 1, 1, 1))
    x = alg.random_element(RNG)
    assert np.max(np.abs(alg.tau(alg.theta(x)) - alg.theta(alg.tau(x)))) < 1e-12


def test_root_space_projection_expansion():
    alg = build_sl_grading(3, (1, 1, 1))
    rd = detect_cyclic_roots(alg, root_decomposition(alg))
    x = alg.random_element(RNG, grade=1)
    total = np.zeros_like(x)
    for r in rd.roots:
        if r.grade == 1:
            for b in r.space:
                total = total + alg.project_line(x, b)
    assert np.max(np.abs(total - x)) < 1e-12


# -- root data ----------------------------------------------------------------------


def test_sl111_root_count_and_labels():
    alg = build_sl_grading(3, (1, 1, 1))
    rd = root_decomposition(alg)
    assert len(rd.roots) == 6
    assert all(r.dimension() == 1 for r in rd.roots)
    assert rd.find("e(0,1)-e(1,1)", 1) is not None


def test_cyclic_root_detection_appendix_families():
    # sl with d0 = d1 = 1
    alg = build_sl_grading(3, (1, 1, 1))
    rd = detect_cyclic_roots(alg, root_decomposition(alg))
    r = rd.find("e(0,1)-e(1,1)", 1)
    assert r is not None and r.is_cyclic and not r.heuristic
    # so with d0 = d1 = 1: -e(1,1) cyclic at grade 1
    alg = build_so_grading((1, 1, 1))
    rd = detect_cyclic_roots(alg, root_decomposition(alg))
    r = rd.find("-e(1,1)", 1)
    assert r is not None and r.is_cyclic
    # so (n,2,2): e(1,1)+e(1,2) cyclic, one-dimensional
    alg = build_so_grading((3, 2, 2))
    rd = detect_cyclic_roots(alg, root_decomposition(alg))
    r = rd.find("e(1,1)+e(1,2)", 1)
    assert r is not None and r.is_cyclic and r.dimension() == 1


def test_no_cyclic_roots_for_fat_sl_blocks():
    alg = build_sl_grading(6, (2, 2, 2))
    rd = detect_cyclic_roots(alg, root_decomposition(alg))
    assert all(not r.is_cyclic for r in rd.roots if r.grade == 1)


# -- Jordan-Chevalley -----------------------------------------------------------------


def test_jordan_chevalley_diagonalizable():
    d = np.diag(np.array([1.0, 2.0, -3.0], dtype=complex))
    v = RNG.standard_normal((3, 3)) + 1j * RNG.standard_normal((3, 3))
    x = v @ d @ np.linalg.inv(v)
    s, n = jordan_chevalley(x)
    assert np.max(np.abs(n)) < 1e-9
    assert np.max(np.abs(s - x)) < 1e-9


def test_jordan_chevalley_nilpotent():
    x = np.triu(RNG.standard_normal((4, 4)), k=1).astype(complex)
    s, n = jordan_chevalley(x)
    assert np.max(np.abs(s)) < 1e-10
    assert np.max(np.abs(n - x)) < 1e-10


def test_jordan_chevalley_properties_random():
    for _ in range(10):
        x = RNG.standard_normal((5, 5)) + 1j * RNG.standard_normal((5, 5))
        x -= np.trace(x) / 5 * np.eye(5)
        s, n = jordan_chevalley(x)
        assert np.max(np.abs(s + n - x)) < 1e-10
        assert np.max(np.abs(s @ n - n @ s)) < 1e-9
        # nilpotency and vanishing trace pairing
        p = np.linalg.matrix_power(n, 5)
        assert np.max(np.abs(p)) < 1e-8
        assert abs(np.trace(s @ n)) < 1e-9


def test_jordan_chevalley_ill_conditioned_chain():
    # eigenvalues chained at spacing below tolerance over a wide range
    vals = np.arange(12) * 5e-9
    x = np.diag(vals.astype(complex)) + np.triu(np.ones((12, 12)), k=1) * 0.0
    x[0, -1] = 1.0
    with pytest.raises(IllConditioned):
        jordan_chevalley(x)


# -- Levi ---------------------------------------------------------------------------


def test_levi_from_element_sl3():
    alg = build_sl_grading(3, (1, 1, 1))
    h = np.diag(np.array([1.0, 0.0, -1.0], dtype=complex))
    levi, para = levi_from_element(alg, h)
    assert len(levi) == 2
    assert len(para) == 5


def test_levi_trivial_and_regular():
    alg = build_sl_grading(3, (1, 1, 1))
    levi, para = levi_from_element(alg, np.zeros((3, 3), dtype=complex))
    assert len(levi) == 8 and len(para) == 8
    levi, _ = levi_from_element(alg, np.diag(np.array([3.0, 1.0, -4.0], dtype=complex)))
    assert len(levi) == 2  # diagonal Cartan
