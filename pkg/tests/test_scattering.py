"""Scattering module: momenta, transfer matrices, amplitudes."""

import numpy as np
import pytest

import geoscat as gs
from geoscat.greens import ResonatorQuantities

from conftest import RECT_X1, RECT_X2, TRI_X1, TRI_X2


def _random_quantities(rng, lam=None):
    g = rng.uniform(0.1, 1.0) * rng.choice([-1.0, 1.0])
    xi1 = rng.uniform(-2.0, 2.0)
    xi2 = rng.uniform(-2.0, 2.0)
    lam = lam if lam is not None else rng.uniform(5.0, 80.0)
    return ResonatorQuantities(g=g, xi1=xi1, xi2=xi2, z1=xi1, z2=xi2,
                               dd=g * g - xi1 * xi2, lam=lam)


def test_momenta_ballistic():
    assert gs.momenta(4.0, 0.0) == (2.0, 2.0)


def test_momenta_gate():
    k1, k2 = gs.momenta(2.0, 2.0)
    assert k1 == pytest.approx(np.sqrt(3.0), rel=1e-15)
    assert k2 == pytest.approx(1.0, rel=1e-15)


def test_momenta_threshold():
    k1, k2 = gs.momenta(1.0, 2.0)
    assert k2 == 0.0
    with pytest.raises(gs.BelowThresholdError):
        gs.momenta(0.999, 2.0)
    with pytest.raises(ValueError):
        gs.momenta(1.0, -0.5)


def test_natural_coupling_values():
    c = gs.CouplingParams.natural(0.05)
    assert c.a1 == pytest.approx(10.0, rel=1e-15)
    assert c.c1.real == pytest.approx(1.0 / np.sqrt(2.0 * np.pi * 0.05), rel=1e-15)
    assert c.c1.real == pytest.approx(1.78412, abs=1e-5)
    assert c.d1 == pytest.approx(-np.log(0.05), rel=1e-15)
    assert c.d1 == pytest.approx(2.99573, abs=1e-5)
    assert c.symmetric


def test_coupling_validation():
    with pytest.raises(ValueError):
        gs.CouplingParams(1.0, 0.0, 0.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        gs.CouplingParams.make_symmetric(1.0, 1.0 + 2.0j, 0.0)
    general = gs.CouplingParams(1.0, 1.0 + 2.0j, 0.0, 1.0, 1.0 + 2.0j, 0.0)
    assert not general.symmetric


def test_symmetric_matches_general_specialization(rng_seed=5):
    rng = np.random.default_rng(rng_seed)
    for _ in range(50):
        q = _random_quantities(rng)
        a, c, d = rng.uniform(0.0, 3.0), rng.uniform(0.5, 2.5), rng.uniform(-2, 2)
        sym = gs.transfer_matrix_symmetric(q, a, c, d)
        gen = gs.transfer_matrix_general(
            q, gs.CouplingParams.make_symmetric(a, c, d))
        for attr in ("l11", "l12", "l21", "l22"):
            assert getattr(sym, attr) == pytest.approx(
                getattr(gen, attr), rel=1e-12, abs=1e-12)


def test_general_determinant_formula():
    rng = np.random.default_rng(6)
    for _ in range(100):
        q = _random_quantities(rng)
        c1 = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1.0, 1.0)
        c2 = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1.0, 1.0)
        coup = gs.CouplingParams(rng.uniform(0, 2), c1, 0.0,
                                 rng.uniform(0, 2), c2, 0.0)
        matrix = gs.transfer_matrix_general(q, coup)
        expect = -np.conj(c2) * c1 / (np.conj(c1) * c2)
        assert matrix.det == pytest.approx(expect, abs=1e-10)


def test_equal_complex_couplings_det_minus_one():
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = _random_quantities(rng)
        c = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1.0, 1.0)
        coup = gs.CouplingParams(1.3, c, 0.4, 1.3, c, 0.4)
        matrix = gs.transfer_matrix_general(q, coup)
        assert matrix.det == pytest.approx(-1.0, abs=1e-10)


def test_singular_transfer_rejected():
    q = ResonatorQuantities(g=0.0, xi1=1.0, xi2=1.0, z1=1.0, z2=1.0,
                            dd=-1.0, lam=10.0)
    with pytest.raises(gs.SingularTransferError):
        gs.transfer_matrix_symmetric(q, 0.0, 1.0, 0.0)


def test_amplitudes_transparent_junction():
    identity = gs.TransferMatrix(1.0, 0.0, 0.0, 1.0, lam=4.0)
    amp = gs.amplitudes(identity, 2.0, 2.0)
    assert amp.t == pytest.approx(1.0, rel=1e-15)
    assert amp.r == pytest.approx(0.0, abs=1e-15)


def test_amplitudes_threshold_total_reflection(tri_table_1e5, natural_coupling):
    # k2 = 0: the outgoing channel carries no flux, |r| = 1
    v_g = 8.0
    lam = v_g / 2.0
    k1, k2 = gs.momenta(lam, v_g)
    assert k2 == 0.0
    q = gs.resonator_quantities(tri_table_1e5, TRI_X1, TRI_X2, lam,
                                d1=natural_coupling.d1, d2=natural_coupling.d2)
    amp = gs.amplitudes(gs.transfer_matrix(q, natural_coupling), k1, k2)
    assert abs(amp.r) == pytest.approx(1.0, rel=1e-12)


def test_ballistic_unitarity_random(rect_table_1e5):
    rng = np.random.default_rng(8)
    count = 0
    while count < 60:
        lam = rng.uniform(5.0, 90.0)
        if abs(rect_table_1e5.nearest_eigenvalue(lam) - lam) < 0.05:
            continue
        a, c, d = rng.uniform(0, 3), rng.uniform(0.5, 3.0), rng.uniform(-2, 2)
        coup = gs.CouplingParams.make_symmetric(a, c, d)
        q = gs.resonator_quantities(rect_table_1e5, RECT_X1, RECT_X2, lam,
                                    d1=d, d2=d)
        k1, k2 = gs.momenta(lam, 0.0)
        amp = gs.amplitudes(gs.transfer_matrix(q, coup), k1, k2)
        assert amp.reflection + amp.transmission == pytest.approx(1.0, abs=1e-8)
        count += 1


def test_flux_conservation_with_gate_and_complex_couplings(rect_table_1e5):
    rng = np.random.default_rng(9)
    count = 0
    while count < 60:
        lam = rng.uniform(5.0, 90.0)
        if abs(rect_table_1e5.nearest_eigenvalue(lam) - lam) < 0.05:
            continue
        v_g = rng.uniform(0.0, 2.0 * lam)
        if lam < v_g / 2.0:
            continue
        c1 = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1, 1)
        c2 = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1, 1)
        coup = gs.CouplingParams(rng.uniform(0, 2), c1, rng.uniform(-2, 2),
                                 rng.uniform(0, 2), c2, rng.uniform(-2, 2))
        q = gs.resonator_quantities(rect_table_1e5, RECT_X1, RECT_X2, lam,
                                    d1=coup.d1, d2=coup.d2)
        k1, k2 = gs.momenta(lam, v_g)
        amp = gs.amplitudes(gs.transfer_matrix(q, coup), k1, k2)
        assert abs(gs.flux_residual(amp)) < 1e-8
        count += 1


def test_two_path_transmission_agreement(tri_table_1e5, natural_coupling):
    a, c, d = (natural_coupling.a1, natural_coupling.c1.real,
               natural_coupling.d1)
    rng = np.random.default_rng(10)
    count = 0
    while count < 25:
        lam = rng.uniform(3.0, 80.0)
        if abs(tri_table_1e5.nearest_eigenvalue(lam) - lam) < 0.03:
            continue
        v_g = rng.uniform(0.0, lam)
        k1, k2 = gs.momenta(lam, v_g)
        q = gs.resonator_quantities(tri_table_1e5, TRI_X1, TRI_X2, lam,
                                    d1=d, d2=d)
        via_matrix = gs.amplitudes(
            gs.transfer_matrix(q, natural_coupling), k1, k2).transmission
        direct = abs(gs.transmission_amplitude_direct(q, a, c, d, k1, k2)) ** 2
        assert via_matrix == pytest.approx(direct, rel=1e-10, abs=1e-300)
        count += 1


def test_transmission_probability_composition(tri_table_1e5, natural_coupling):
    lam, v_g = 30.0, 3.0
    t2 = gs.transmission_probability(tri_table_1e5, TRI_X1, TRI_X2,
                                     natural_coupling, lam, v_g)
    k1, k2 = gs.momenta(lam, v_g)
    q = gs.resonator_quantities(tri_table_1e5, TRI_X1, TRI_X2, lam,
                                d1=natural_coupling.d1,
                                d2=natural_coupling.d2)
    amp = gs.amplitudes(gs.transfer_matrix(q, natural_coupling), k1, k2)
    assert t2 == amp.transmission


def test_weak_hybridization_peaks_near_eigenvalue(rect_table_1e5):
    # large C suppresses the DD/C^2 term: |t|^2 is resonant at eigenvalues
    coup = gs.CouplingParams.make_symmetric(0.0, 5.0, 0.0)
    lam1 = 5.0 * np.pi ** 2 / 4.0
    lams = np.linspace(lam1 - 0.5, lam1 + 0.5, 800)
    vals = [gs.transmission_probability(rect_table_1e5, RECT_X1, RECT_X2,
                                        coup, float(l)) for l in lams]
    peak = lams[int(np.argmax(vals))]
    assert abs(peak - lam1) < 0.01 * lam1
    assert max(vals) > 0.5


def test_decoupling_limit_scaling(rect_table_1e5):
    # |t|^2 ~ C^4 as C -> 0
    lam = 30.0
    t_small = gs.transmission_probability(
        rect_table_1e5, RECT_X1, RECT_X2,
        gs.CouplingParams.make_symmetric(0.0, 1e-3, 0.0), lam)
    t_smaller = gs.transmission_probability(
        rect_table_1e5, RECT_X1, RECT_X2,
        gs.CouplingParams.make_symmetric(0.0, 1e-4, 0.0), lam)
    assert t_small < 1e-6
    ratio = t_small / t_smaller
    assert ratio == pytest.approx(1e4, rel=0.05)


def test_gate_voltage_can_exceed_unity(tri_table_1e5, natural_coupling):
    # with V_g > 0 the transmission probability may exceed 1
    v_g = 40.0
    lams = np.linspace(v_g / 2.0 + 0.3, v_g / 2.0 + 30.0, 1500)
    best = 0.0
    for lam in lams:
        try:
            best = max(best, gs.transmission_probability(
                tri_table_1e5, TRI_X1, TRI_X2, natural_coupling,
                float(lam), v_g))
        except gs.GeoscatError:
            continue
    assert best > 1.0


def test_junction_swap_invariance(rect_table_1e5, natural_coupling):
    for lam in (14.0, 30.0, 55.5):
        a = gs.transmission_probability(rect_table_1e5, RECT_X1, RECT_X2,
                                        natural_coupling, lam)
        b = gs.transmission_probability(rect_table_1e5, RECT_X2, RECT_X1,
                                        natural_coupling, lam)
        assert a == pytest.approx(b, rel=1e-12)
