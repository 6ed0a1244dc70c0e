import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from psnci.errors import (
    DegenerateStateError,
    DomainError,
    UnsupportedStateError,
)
from psnci.grids import PhaseGrid
from psnci.indicators import (
    delta_indicator,
    eta_indicator,
    sweep_a,
    sweep_r,
    von_neumann_entropy,
)
from psnci.phasespace import build_term_table
from psnci.states import (
    SingleModeState,
    TwoModeState,
    entangled_state,
    fock,
    squeezed_fock,
    squeezed_vacuum_superposition,
)

import oracles


def _single(prim):
    return SingleModeState(((1.0, prim),))


def test_delta_vacuum_is_zero():
    # Wigner and Husimi vacuum distributions are non-negative, so the
    # negativity volume vanishes; the Kirkwood real part oscillates as
    # cos(qp) and keeps a genuine nonzero volume even for the vacuum.
    for rep in ("wigner", "husimi"):
        res = delta_indicator(build_term_table(_single(fock(0)), rep))
        assert abs(res.value) < 1e-6
        assert res.valid
    rivier = delta_indicator(build_term_table(_single(fock(0)), "rivier"))
    assert 0.0 < rivier.value < 0.5
    assert rivier.valid


def test_delta_fock1_matches_radial_oracle():
    res = delta_indicator(build_term_table(_single(fock(1)), "wigner"))
    assert abs(res.value - oracles.delta_fock1()) < 1e-3
    assert res.error_estimate >= 0.0
    assert res.representation == "wigner"


def test_delta_husimi_vanishes():
    for state in (_single(fock(1)), squeezed_vacuum_superposition(0.5, 1.0),
                  entangled_state(0, 1, 0.5)):
        table = build_term_table(state, "husimi")
        assert abs(delta_indicator(table).value) < 1e-9


def test_delta_nonnegative():
    for state in (_single(fock(2)), _single(squeezed_fock(1, 0.5))):
        for rep in ("wigner", "rivier"):
            val = delta_indicator(build_term_table(state, rep)).value
            assert val >= -1e-9


def test_delta_squeezing_invariance_single():
    base = delta_indicator(build_term_table(_single(fock(1)), "wigner")).value
    moved = delta_indicator(
        build_term_table(_single(squeezed_fock(1, 0.5)), "wigner")).value
    assert abs(base - moved) < 2e-3


def test_eta_vacuum_zero():
    # zero for the everywhere-positive vacuum tables; for the oscillatory
    # Kirkwood real part the single-term value must equal delta/(delta+2)
    for rep in ("wigner", "husimi"):
        res = eta_indicator(build_term_table(_single(fock(0)), rep))
        assert abs(res.value) < 1e-9
    table = build_term_table(_single(fock(0)), "rivier")
    eta = eta_indicator(table).value
    delta = delta_indicator(table).value
    assert_allclose(eta, delta / (delta + 2.0), atol=1e-12)


def test_eta_unsqueezed_superposition_is_zero():
    st = squeezed_vacuum_superposition(0.5, 0.0)
    res = eta_indicator(build_term_table(st, "wigner"))
    assert abs(res.value) < 1e-9


def test_eta_single_product_endpoint():
    # a = 0 leaves the lone product term |1, 0>; eta reduces to
    # delta(|1>) / (delta(|1>) + 2)
    st = entangled_state(0, 1, 0.0)
    res = eta_indicator(build_term_table(st, "wigner", threads=2), threads=2)
    d1 = oracles.delta_fock1()
    assert abs(res.value - d1 / (d1 + 2.0)) < 2e-3


def test_eta_bounds():
    for state in (entangled_state(1, 2, 0.5), squeezed_vacuum_superposition(0.7, 1.5)):
        for rep in ("wigner", "husimi", "rivier"):
            val = eta_indicator(build_term_table(state, rep, threads=2),
                                threads=2).value
            assert -1e-9 <= val <= 1.0 + 1e-9


def test_eta_degenerate_denominator():
    table = build_term_table(_single(fock(0)), "wigner").with_amplitudes((0.0,))
    with pytest.raises(DegenerateStateError):
        eta_indicator(table)


def test_entropy_bell_point():
    bell = entangled_state(0, 1, 0.5)
    assert_allclose(von_neumann_entropy(bell, log_base=2), 1.0, atol=1e-12)
    assert_allclose(von_neumann_entropy(bell, log_base="e"), math.log(2.0),
                    atol=1e-12)


def test_entropy_product_states():
    for a_sq in (0.0, 1.0):
        assert abs(von_neumann_entropy(entangled_state(0, 1, a_sq))) < 1e-12


def test_entropy_two_term_formula():
    a_sq = 0.25
    expected = -(a_sq * math.log(a_sq) + (1 - a_sq) * math.log(1 - a_sq))
    got = von_neumann_entropy(entangled_state(0, 1, a_sq), log_base="e")
    assert_allclose(got, expected, atol=1e-12)
    assert_allclose(got, 0.5623351446188083, atol=1e-12)


def test_entropy_svd_handles_shared_labels():
    # terms landing on the same Fock labels must be summed coherently
    half = math.sqrt(0.5)
    st = TwoModeState((
        (half / 2, fock(0), fock(1)),
        (half / 2, fock(0), fock(1)),
        (half, fock(1), fock(0)),
    ))
    assert_allclose(von_neumann_entropy(st, log_base=2), 1.0, atol=1e-10)


def test_entropy_rejects_squeezed_and_unnormalized():
    st = TwoModeState(((1.0, squeezed_fock(0, 1.0), fock(0)),))
    with pytest.raises(UnsupportedStateError):
        von_neumann_entropy(st)
    with pytest.raises(DomainError):
        von_neumann_entropy(TwoModeState(((0.5, fock(0), fock(1)),)))
    with pytest.raises(DomainError):
        von_neumann_entropy(entangled_state(0, 1, 0.5), log_base=10)


# ---------------------------------------------------------------------------
# Sweeps (mechanics on a coarse grid; value-level checks live in acceptance)
# ---------------------------------------------------------------------------

COARSE = PhaseGrid.two_mode(points=61)


def test_sweep_a_rows_and_consistency():
    a_sq_values = [0.0, 0.25, 0.5, 0.75, 1.0]
    rows = sweep_a((0, 1), a_sq_values, ["wigner", "husimi"], COARSE, threads=2)
    assert [r.param for r in rows] == a_sq_values
    for row in rows:
        assert set(row.eta) == {"wigner", "husimi"}
        assert set(row.delta) == {"wigner"}
        assert abs(row.norm_check["wigner"] - 1.0) < 1e-3
    # endpoint entropies vanish, Bell entropy is 1 (base 2)
    assert abs(rows[0].entropy) < 1e-12
    assert abs(rows[-1].entropy) < 1e-12
    assert_allclose(rows[2].entropy, 1.0, atol=1e-12)
    # cached-amplitude path agrees with a fresh per-state computation
    st = entangled_state(0, 1, 0.25)
    table = build_term_table(st, "wigner", COARSE, threads=2)
    fresh_eta = eta_indicator(table, threads=2).value
    fresh_delta = delta_indicator(table, threads=2).value
    assert abs(rows[1].eta["wigner"] - fresh_eta) < 1e-9
    assert abs(rows[1].delta["wigner"] - fresh_delta) < 1e-9


def test_sweep_a_symmetry_and_maximum():
    a_sq_values = np.linspace(0.0, 1.0, 9)
    rows = sweep_a((0, 1), a_sq_values, ["wigner"], COARSE, threads=2)
    eta = [r.eta["wigner"] for r in rows]
    assert int(np.argmax(eta)) == 4
    for i in range(9):
        assert abs(eta[i] - eta[8 - i]) < 1e-12


def test_sweep_a_validation():
    with pytest.raises(DomainError):
        sweep_a((1, 1), [0.5], ["wigner"], COARSE)
    with pytest.raises(DomainError):
        sweep_a((0, 1), [1.5], ["wigner"], COARSE)
    with pytest.raises(DomainError):
        sweep_a((0, 1), [], ["wigner"], COARSE)


def test_sweep_r_rows_and_zero_point():
    rows = sweep_r("psi00r", [0.0, 0.5, 1.0], [0.3, 0.6], "wigner", threads=2)
    assert len(rows) == 6
    assert [r.amplitude for r in rows] == [0.3, 0.3, 0.3, 0.6, 0.6, 0.6]
    assert [r.param for r in rows[:3]] == [0.0, 0.5, 1.0]
    for row in rows:
        if row.param == 0.0:
            assert abs(row.eta["wigner"]) < 1e-6
        assert abs(row.norm_check["wigner"] - 1.0) < 1e-3
    grouped = [r.eta["wigner"] for r in rows[:3]]
    assert grouped[1] < grouped[2]


def test_sweep_r_convention_flag_changes_values():
    base = sweep_r("psi00r", [1.0], [0.5], "wigner")[0].eta["wigner"]
    printed = sweep_r("psi00r", [1.0], [0.5], "wigner",
                      convention="printed")[0].eta["wigner"]
    assert abs(base - printed) > 1e-4


def test_sweep_r_validation():
    with pytest.raises(DomainError):
        sweep_r("psi02r", [0.5], [0.5], "wigner")
    with pytest.raises(DomainError):
        sweep_r("psi00r", [2.5], [0.5], "wigner")
    with pytest.raises(DomainError):
        sweep_r("psi00r", [0.5], [1.0], "wigner")
