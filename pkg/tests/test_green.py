import numpy as np
import pytest
from conftest import PROFILE, assembler, default_params, green_table

from osgreen.green import (GreenAssembler, NearEigenvalueError, default_x_grid, default_z_grid, evans,
                           evans_tietjens, tables_parallel)
from osgreen.profile import make_params


def test_match_matrix_solution_and_blocks():
    A = assembler(1e-4)
    coef = A.interior(0.3)
    M = coef["M"]
    assert coef["residual"] < 1e-12
    v = M.solve()
    approx, nrm = M.block_solve(terms=8)
    # away from the layer the coupling is weak and the Neumann series converges fast
    assert nrm < 0.1
    assert np.max(np.abs(approx - v)) < 1e-10 * np.max(np.abs(v))
    assert M.CAinv_norm() < 0.1
    assert M.condition() < A.cond_max
    assert np.allclose(np.block([[M.A, M.B], [M.C, M.D]]), M.entries)


@pytest.mark.parametrize("nu", [1e-4, 1e-5])
def test_jump_and_continuity(nu):
    T = green_table(nu)
    assert np.max(T.jump_errors) < 1e-3
    assert np.max(T.continuity_errors) < 1e-6
    assert np.max(T.boundary_errors) < 1e-8


def test_table_shape_and_rows():
    T = green_table(1e-4)
    assert T.G.shape == (T.x_grid.size, T.z_grid.size)
    rows = list(T.rows())
    assert len(rows) == T.G.size
    x, z, g, dg = rows[T.z_grid.size + 1]
    assert (x, z, g, dg) == (T.x_grid[1], T.z_grid[1], T.G[1, 1], T.dzG[1, 1])


def test_evans_close_to_corrected_tietjens():
    # the corrected leading-order form is much closer than the literal one
    for nu in (1e-4, 1e-5, 1e-6):
        p = default_params(nu)
        W = evans(p)
        good = abs(W - evans_tietjens(p)) / abs(W)
        bad = abs(W - evans_tietjens(p, corrected=False)) / abs(W)
        assert good < 0.5
        assert good < bad


def test_tables_parallel_matches_serial():
    ps = [default_params(1e-4), default_params(1e-4, c_re=0.6)]
    xg = default_x_grid(ps[0])[:3]
    zg = default_z_grid(ps[0], xg)[::7]
    ser = tables_parallel(ps, xg, zg, jobs=1)
    par = tables_parallel(ps, xg, zg, jobs=2)
    for a, b in zip(ser, par):
        assert np.array_equal(a.G, b.G)
        assert np.array_equal(a.dzG, b.dzG)


def test_near_eigenvalue_is_refused():
    p = default_params(1e-4)
    W = abs(evans(p))
    q = make_params(PROFILE, p.nu, p.alpha, p.c, sigma0=2 * W, check_gap=False)
    with pytest.raises(NearEigenvalueError) as info:
        GreenAssembler(q)
    assert abs(info.value.value) == pytest.approx(W, rel=1e-12)
    with pytest.raises(NearEigenvalueError):
        GreenAssembler(p, cond_max=1.0).interior(0.3)
