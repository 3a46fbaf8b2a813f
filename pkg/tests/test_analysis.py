import numpy as np
import pytest

from acoustics2d.analysis import (
    convergence_order,
    exact_stationarity_determinant,
    spectral_radius_scan,
    stationarity_determinant,
    symbol,
)
from acoustics2d.core import AcousticConfig, BoundaryKind, FieldSet
from acoustics2d.exact import PlaneWave
from acoustics2d.schemes import SchemeKind, step

MD, SPLIT = SchemeKind.MULTIDIM_GODUNOV, SchemeKind.SPLIT_UPWIND


@pytest.mark.parametrize("scheme", list(SchemeKind))
def test_symbol_identity_at_zero(scheme):
    assert np.allclose(symbol(scheme, AcousticConfig(cfl=0.7), 0.0, 0.0), np.eye(3), atol=1e-15)


@pytest.mark.parametrize("scheme", list(SchemeKind))
def test_symbol_matches_direct_stepping(scheme):
    n = 16
    cfg = AcousticConfig(dx=0.1, dy=0.15, cfl=0.6, epsilon=0.5)
    rng = np.random.default_rng(20)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    for _ in range(16):
        kx, ky = rng.integers(-n // 2, n // 2, size=2)
        tx, ty = 2 * np.pi * kx / n, 2 * np.pi * ky / n
        amp = rng.normal(size=3) + 1j * rng.normal(size=3)
        wave = np.exp(1j * (tx * i + ty * j))
        q = amp[:, None, None] * wave
        re, _ = step(FieldSet.from_array(q.real), cfg, BoundaryKind.PERIODIC, scheme)
        im, _ = step(FieldSet.from_array(q.imag), cfg, BoundaryKind.PERIODIC, scheme)
        out = re.as_array() + 1j * im.as_array()
        expect = (symbol(scheme, cfg, tx, ty) @ amp)[:, None, None] * wave
        assert np.max(np.abs(out - expect)) <= 1e-12


def test_split_symbol_in_x_matches_1d_upwind():
    cfg = AcousticConfig(cfl=0.4)
    lam = cfg.speed * cfg.dt / cfg.dx
    th = np.pi
    G = symbol(SPLIT, cfg, th, 0.0)
    # 1D upwind on (u, p): diag term 1 - lam (1 - cos th), off-diagonal -i lam sin th
    d = 1 - lam * (1 - np.cos(th))
    o = -1j * lam * np.sin(th)
    expect = np.array([[d, 0, o], [0, 1, 0], [o, 0, d]])
    assert np.allclose(G, expect, atol=1e-15)


def test_symbol_has_xy_symmetry():
    cfg = AcousticConfig(cfl=0.8)
    P = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    G = symbol(MD, cfg, 0.7, -1.9)
    assert np.allclose(P @ G @ P, symbol(MD, cfg, -1.9, 0.7), atol=1e-15)


def test_symbol_independent_of_epsilon_at_fixed_cfl():
    for scheme in SchemeKind:
        a = symbol(scheme, AcousticConfig(cfl=0.6, epsilon=1.0), 1.1, 0.3)
        b = symbol(scheme, AcousticConfig(cfl=0.6, epsilon=1e-2), 1.1, 0.3)
        assert np.allclose(a, b, atol=1e-14)


def test_stability_domains():
    assert spectral_radius_scan(MD, AcousticConfig(cfl=0.99))[0] <= 1 + 1e-10
    assert spectral_radius_scan(SPLIT, AcousticConfig(cfl=0.45))[0] <= 1 + 1e-10
    assert spectral_radius_scan(SPLIT, AcousticConfig(cfl=0.60))[0] > 1 + 1e-4
    assert spectral_radius_scan(MD, AcousticConfig(cfl=1.2))[0] > 1 + 1e-4


def test_scan_symmetric_under_theta_reflection():
    cfg = AcousticConfig(cfl=0.7)
    for tx, ty in ((0.4, 1.3), (2.0, -0.5)):
        r1 = np.max(np.abs(np.linalg.eigvals(symbol(MD, cfg, tx, ty))))
        r2 = np.max(np.abs(np.linalg.eigvals(symbol(MD, cfg, -tx, -ty))))
        assert r1 == pytest.approx(r2, abs=1e-14)


def test_scan_requires_resolution():
    with pytest.raises(ValueError):
        spectral_radius_scan(MD, AcousticConfig(), 32)


def test_stationarity_determinants():
    for scheme in SchemeKind:
        assert abs(stationarity_determinant(scheme, AcousticConfig(), 0.0, 0.0)) < 1e-15
    for eps in (1.0, 1e-2):
        cfg = AcousticConfig(cfl=0.5, epsilon=eps)
        assert abs(stationarity_determinant(MD, cfg, np.pi / 2, np.pi / 2)) > 1e-6
        assert abs(exact_stationarity_determinant(cfg, np.pi / 2, np.pi / 2)) < 1e-12
    rng = np.random.default_rng(21)
    cfg = AcousticConfig(cfl=0.5)
    for tx, ty in rng.uniform(-np.pi, np.pi, size=(10, 2)):
        assert abs(exact_stationarity_determinant(cfg, tx, ty)) < 1e-12


def test_stationarity_determinant_continuous_near_zero():
    cfg = AcousticConfig(cfl=0.5)
    vals = [abs(stationarity_determinant(MD, cfg, h, h)) for h in (1e-1, 1e-2, 1e-3)]
    assert vals[0] > vals[1] > vals[2]


def _wave():
    k = np.array([2 * np.pi, 2 * np.pi, 0.0])
    return PlaneWave(tuple(k), tuple(k / np.linalg.norm(k)), 1.0)


def test_first_order_convergence():
    res = convergence_order(MD, AcousticConfig(cfl=0.45), _wave())
    assert 0.7 <= res.order <= 1.3
    assert res.errors[0] > res.errors[1] > res.errors[2]


def test_exact_stand_in_is_degenerate():
    res = convergence_order("exact", AcousticConfig(cfl=0.45), _wave())
    assert res.degenerate and np.isnan(res.order)
    assert max(res.errors) < 1e-12


def test_halving_cfl_changes_error_boundedly():
    a = convergence_order(MD, AcousticConfig(cfl=0.45), _wave(), resolutions=(32, 64))
    b = convergence_order(MD, AcousticConfig(cfl=0.225), _wave(), resolutions=(32, 64))
    for ea, eb in zip(a.errors, b.errors):
        assert 0.2 < eb / ea < 5.0
