import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combrec.errors import DimensionError
from combrec.fourier import (
    Signal,
    Spectrum,
    dft_matrix,
    forward_dft,
    frequency_limit,
    indicator,
    inverse_dft,
    plancherel_defect,
    spectrum_support,
)
from combrec.lattice import Grid, LatticeSet


def naive_dft(f: Signal) -> np.ndarray:
    """Character sum evaluated one frequency at a time."""
    g = f.grid
    c = g.coord_array
    out = np.empty(g.size, dtype=complex)
    for m in range(g.size):
        phase = (c @ c[m]) % g.N
        out[m] = np.sum(np.exp(-2j * np.pi * phase / g.N) * f.values) / g.size
    return out


@st.composite
def signals(draw, max_size=128):
    d = draw(st.integers(1, 2))
    N = draw(st.integers(2, 11 if d == 2 else max_size))
    g = Grid(N, d)
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return Signal(g, rng.normal(size=g.size) + 1j * rng.normal(size=g.size))


def test_delta_transforms_to_constant():
    g = Grid(8)
    F = forward_dft(indicator(g, g.subset([0])))
    assert np.allclose(F.values, 1 / 8, atol=0)


def test_subgroup_indicator():
    g = Grid(4)
    F = forward_dft(indicator(g, g.subset([0, 2])))
    assert np.allclose(F.values, [0.5, 0, 0.5, 0], atol=1e-15)


def test_inverse_examples():
    g = Grid(8)
    f = inverse_dft(Spectrum(g, np.full(8, 1 / 8)))
    assert np.allclose(f.values, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15)
    assert np.array_equal(inverse_dft(Spectrum(g, np.zeros(8))).values, np.zeros(8))


def test_matches_naive_sum_2d():
    rng = np.random.default_rng(0)
    g = Grid(5, 2)
    f = Signal(g, rng.normal(size=25) + 1j * rng.normal(size=25))
    assert np.allclose(forward_dft(f).values, naive_dft(f), atol=1e-13)
    assert np.allclose(dft_matrix(g) @ f.values, naive_dft(f), atol=1e-13)


def test_dft_matrix_submatrix():
    g = Grid(6)
    full = dft_matrix(g)
    sub = dft_matrix(g, rows=[1, 4], cols=[0, 5])
    assert np.array_equal(sub, full[np.ix_([1, 4], [0, 5])])


def test_plancherel_examples():
    g = Grid(8)
    assert plancherel_defect(indicator(g, g.subset([0]))) == 0
    assert plancherel_defect(Signal(g, np.zeros(8))) == 0
    rng = np.random.default_rng(32)
    f = Signal(Grid(32), rng.normal(size=32) + 1j * rng.normal(size=32))
    assert plancherel_defect(f) < 1e-10


def test_frequency_limit_examples():
    g = Grid(4)
    f = indicator(g, g.subset([0, 2]))
    assert np.allclose(frequency_limit(f, g.full()).values, f.values)
    assert np.allclose(frequency_limit(f, g.empty()).values, 0)
    assert np.allclose(frequency_limit(f, g.subset([0])).values, 0.5)
    with pytest.raises(DimensionError):
        frequency_limit(f, Grid(5).full())


def test_spectrum_support_examples():
    g4, g8 = Grid(4), Grid(8)
    assert spectrum_support(forward_dft(indicator(g4, g4.subset([0, 2]))), 1e-9) == g4.subset([0, 2])
    assert spectrum_support(Spectrum(g8, np.zeros(8))) == g8.empty()
    assert spectrum_support(forward_dft(indicator(g8, g8.subset([0])))) == g8.full()
    with pytest.raises(ValueError):
        spectrum_support(Spectrum(g8, np.zeros(8)), -1)


def test_rejects_nonfinite_and_wrong_length():
    g = Grid(4)
    with pytest.raises(ValueError):
        Signal(g, [0, 1, np.nan, 0])
    with pytest.raises(DimensionError):
        Signal(g, [0, 1, 2])


def test_unknown_method():
    with pytest.raises(ValueError):
        forward_dft(Signal(Grid(4), np.zeros(4)), method="magic")


def test_json_roundtrip():
    g = Grid(3, 2)
    f = Signal(g, np.arange(9) + 1j)
    data = json.loads(json.dumps(f.to_json()))
    assert data["N"] == 3 and data["d"] == 2 and data["values"][1] == [1.0, 1.0]
    assert np.array_equal(Signal.from_json(data).values, f.values)
    F = forward_dft(f)
    assert np.array_equal(Spectrum.from_json(F.to_json()).values, F.values)


@given(signals())
@settings(max_examples=60, deadline=None)
def test_roundtrip(f):
    back = inverse_dft(forward_dft(f))
    assert np.max(np.abs(back.values - f.values)) <= 1e-12 * np.max(np.abs(f.values))


@given(signals())
@settings(max_examples=60, deadline=None)
def test_fft_path_agrees(f):
    assert np.allclose(forward_dft(f).values, forward_dft(f, method="fft").values, atol=1e-10)
    F = forward_dft(f)
    assert np.allclose(inverse_dft(F).values, inverse_dft(F, method="fft").values, atol=1e-10)


@given(signals(), st.data())
@settings(max_examples=40, deadline=None)
def test_projection_is_idempotent(f, data):
    idx = data.draw(st.lists(st.integers(0, f.grid.size - 1), max_size=f.grid.size))
    sigma = LatticeSet(f.grid, idx)
    once = frequency_limit(f, sigma)
    assert np.allclose(frequency_limit(once, sigma).values, once.values, atol=1e-10)
    assert spectrum_support(forward_dft(once), 1e-9).issubset(sigma)


@given(signals(), st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10))
@settings(max_examples=40, deadline=None)
def test_linearity(f, a, b):
    g = Signal(f.grid, np.roll(f.values, 1) * 2j)
    lhs = forward_dft(a * f + b * g).values
    rhs = a * forward_dft(f).values + b * forward_dft(g).values
    assert np.allclose(lhs, rhs, atol=1e-10)
