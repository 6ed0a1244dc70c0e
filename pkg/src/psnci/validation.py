"""Self-check suite behind the ``validate`` CLI command.

Every check recomputes its reference quantity through an independent
route (direct kernel quadrature on the total wavefunction, closed vs
numeric evaluation, bitwise comparison across worker counts) rather than
trusting the code paths it is checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhaseSpaceError
from .indicators import eta_indicator
from .phasespace import (
    Representation,
    build_term_table,
    cross_wigner_fock_closed,
    cross_wigner_numeric,
    default_grid,
)
from .quadrature import abs_4d_with_estimate
from .states import (
    SingleModeState,
    TwoModeState,
    entangled_state,
    fock,
    position_wavefunction,
    squeezed_excited_superposition,
    squeezed_fock,
    squeezed_vacuum_superposition,
)

NORMALIZATION_TOL = 1e-4
MARGINAL_TOL = 1e-4
DECOMPOSITION_TOL = 1e-10
CLOSED_NUMERIC_TOL = 1e-8
HUSIMI_FLOOR = -1e-14
ETA_SLACK = 1e-9

_QUARTIC_ROOT_PI = math.pi ** -0.25


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_states():
    return [
        ("vacuum", SingleModeState(((1.0, fock(0)),))),
        ("fock1", SingleModeState(((1.0, fock(1)),))),
        ("fock2", SingleModeState(((1.0, fock(2)),))),
        ("squeezed_fock1_r0.8", SingleModeState(((1.0, squeezed_fock(1, 0.8)),))),
        ("entangled01_bell", entangled_state(0, 1, 0.5)),
        ("entangled12_bell", entangled_state(1, 2, 0.5)),
        ("psi00r_a0.5_r1", squeezed_vacuum_superposition(0.5, 1.0)),
        ("psi01r_a0.5_r1", squeezed_excited_superposition(0.5, 1.0)),
    ]


# ---------------------------------------------------------------------------
# Independent direct evaluation of the total distribution
# ---------------------------------------------------------------------------

def _direct_nodes(state, p_absmax):
    prims = (state.primitives if isinstance(state, SingleModeState)
             else state.mode_primitives(0) + state.mode_primitives(1))
    half = max(p.support_radius for p in prims) + 4.0
    bandwidth = 2.0 * max(p.momentum_radius for p in prims) + 2.0 * p_absmax + 12.0
    dx = 2.0 * math.pi / (1.7 * bandwidth + 24.0)
    n = max(128, int(math.ceil(2.0 * half / dx)))
    dx = 2.0 * half / n
    return -half + (np.arange(n) + 0.5) * dx, dx


def _direct_single(state: SingleModeState, rep: Representation, q: float, p: float) -> float:
    x, dx = _direct_nodes(state, abs(p))
    if rep is Representation.WIGNER:
        f = state.wavefunction(q + x) * np.conj(state.wavefunction(q - x))
        return float(np.real(np.sum(f * np.exp(-2j * p * x)) * dx / math.pi))
    if rep is Representation.HUSIMI:
        coh = np.exp(-0.5 * (x - math.sqrt(2.0) * q) ** 2
                     + 1j * (q * p - math.sqrt(2.0) * p * x))
        amp = _QUARTIC_ROOT_PI * np.sum(coh * state.wavefunction(x)) * dx
        return float(abs(amp) ** 2 / math.pi)
    phi = np.sum(state.wavefunction(x) * np.exp(-1j * x * p)) * dx / math.sqrt(2.0 * math.pi)
    kirk = state.wavefunction(np.array(q))[()] * np.conj(phi) * np.exp(-1j * q * p)
    return float(np.real(kirk / math.sqrt(2.0 * math.pi)))


def _two_mode_wavefunction_grid(state: TwoModeState, x1, x2):
    psi = np.zeros((x1.size, x2.size), dtype=complex)
    for c, p1, p2 in state.terms:
        psi += c * np.outer(position_wavefunction(p1, x1), position_wavefunction(p2, x2))
    return psi


def _direct_two_mode(state: TwoModeState, rep: Representation, z1, z2) -> float:
    q1, p1 = z1
    q2, p2 = z2
    x, dx = _direct_nodes(state, max(abs(p1), abs(p2)))
    if rep is Representation.WIGNER:
        a = _two_mode_wavefunction_grid(state, q1 + x, q2 + x)
        b = np.conj(_two_mode_wavefunction_grid(state, q1 - x, q2 - x))
        e1 = np.exp(-2j * p1 * x)
        e2 = np.exp(-2j * p2 * x)
        val = e1 @ (a * b) @ e2 * dx * dx / math.pi**2
        return float(np.real(val))
    if rep is Representation.HUSIMI:
        psi = _two_mode_wavefunction_grid(state, x, x)
        c1 = np.exp(-0.5 * (x - math.sqrt(2.0) * q1) ** 2
                    + 1j * (q1 * p1 - math.sqrt(2.0) * p1 * x))
        c2 = np.exp(-0.5 * (x - math.sqrt(2.0) * q2) ** 2
                    + 1j * (q2 * p2 - math.sqrt(2.0) * p2 * x))
        amp = _QUARTIC_ROOT_PI**2 * (c1 @ psi @ c2) * dx * dx
        return float(abs(amp) ** 2 / math.pi**2)
    psi = _two_mode_wavefunction_grid(state, x, x)
    f1 = np.exp(-1j * x * p1)
    f2 = np.exp(-1j * x * p2)
    phi = (f1 @ psi @ f2) * dx * dx / (2.0 * math.pi)
    amp_q = np.zeros((), dtype=complex)
    for c, pa, pb in state.terms:
        amp_q = amp_q + c * position_wavefunction(pa, q1) * position_wavefunction(pb, q2)
    kirk = amp_q * np.conj(phi) * np.exp(-1j * (q1 * p1 + q2 * p2)) / (2.0 * math.pi)
    return float(np.real(kirk))


def _reconstruct_two_mode(table, idx1, idx2) -> float:
    total = 0.0
    for g, h in table.real_products():
        total += g[idx1] * h[idx2]
    return total


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def _norm_and_tables(states, reps, extent, points, threads, results):
    tables = {}
    for sname, state in states:
        for rep in reps:
            name = f"normalization[{sname},{rep.value}]"
            try:
                grid = default_grid(state, extent=extent, points=points)
                table = build_term_table(state, rep, grid, threads=threads)
            except PhaseSpaceError as exc:
                results.append(CheckResult(name, False, f"build failed: {exc}"))
                continue
            norm = table.norm_check
            ok = abs(norm - 1.0) <= NORMALIZATION_TOL
            results.append(CheckResult(name, ok, f"integral = {norm:.8f}"))
            tables[(sname, rep)] = (state, table)
    return tables


def _marginal_checks(tables, results):
    for (sname, rep), (state, table) in tables.items():
        if rep is not Representation.WIGNER or table.n_modes != 1:
            continue
        mode = table.grid.mode(0)
        marginal = np.sum(table.total_values(), axis=1) * mode.p.delta
        density = np.abs(state.wavefunction(mode.q.centers)) ** 2
        worst = float(np.max(np.abs(marginal - density)))
        ok = worst <= MARGINAL_TOL
        results.append(CheckResult(f"wigner_marginals[{sname}]", ok,
                                   f"max |int W dp - |psi|^2| = {worst:.3e}"))


def _decomposition_checks(tables, results, rng):
    for (sname, rep), (state, table) in tables.items():
        if table.n_modes == 1:
            mode = table.grid.mode(0)
            iq = rng.integers(0, mode.q.n, size=8)
            ip = rng.integers(0, mode.p.n, size=8)
            total = table.total_values()
            worst = 0.0
            for a, b in zip(iq, ip):
                direct = _direct_single(state, rep,
                                        float(mode.q.centers[a]), float(mode.p.centers[b]))
                worst = max(worst, abs(total[a, b] - direct))
        else:
            m1, m2 = table.grid.mode(0), table.grid.mode(1)
            worst = 0.0
            for _ in range(6):
                i1 = int(rng.integers(0, m1.q.n))
                j1 = int(rng.integers(0, m1.p.n))
                i2 = int(rng.integers(0, m2.q.n))
                j2 = int(rng.integers(0, m2.p.n))
                z1 = (float(m1.q.centers[i1]), float(m1.p.centers[j1]))
                z2 = (float(m2.q.centers[i2]), float(m2.p.centers[j2]))
                direct = _direct_two_mode(state, rep, z1, z2)
                recon = _reconstruct_two_mode(table, (i1, j1), (i2, j2))
                worst = max(worst, abs(recon - direct))
        ok = worst <= DECOMPOSITION_TOL
        results.append(CheckResult(f"decomposition[{sname},{rep.value}]", ok,
                                   f"max |sum f_ij - direct| = {worst:.3e}"))


def _closed_vs_numeric_check(results, rng):
    worst = 0.0
    for m in range(5):
        for n in range(m, 5):
            pts = rng.uniform(-3.0, 3.0, size=(10, 2))
            closed = cross_wigner_fock_closed(m, n, pts[:, 0], pts[:, 1])
            numeric = cross_wigner_numeric(fock(m), fock(n), pts[:, 0], pts[:, 1])
            worst = max(worst, float(np.max(np.abs(closed - numeric))))
    ok = worst <= CLOSED_NUMERIC_TOL
    results.append(CheckResult("closed_vs_numeric_cross_wigner", ok,
                               f"max |closed - numeric| = {worst:.3e} over 150 points"))


def _husimi_checks(tables, results):
    for (sname, rep), (state, table) in tables.items():
        if rep is not Representation.HUSIMI:
            continue
        worst = 0.0
        if table.n_modes == 1:
            for i in range(len(table.primitives)):
                worst = min(worst, float(np.min(table.pair_values(i, i))))
            total_min = float(np.min(table.total_values()))
            ok = worst >= HUSIMI_FLOOR and total_min >= -1e-12
            detail = f"diag min = {worst:.3e}, total min = {total_min:.3e}"
        else:
            for k in range(len(table.amplitudes)):
                for _, d1, d2 in table.products(k, k):
                    diag_min = min(float(np.min(d1.real)), float(np.min(d2.real)))
                    worst = min(worst, diag_min)
            ok = worst >= HUSIMI_FLOOR
            detail = f"per-mode diag min = {worst:.3e}"
        results.append(CheckResult(f"husimi_positivity[{sname}]", ok, detail))


def _eta_checks(tables, results, threads):
    for (sname, rep), (_, table) in tables.items():
        try:
            eta = eta_indicator(table, threads=threads).value
        except PhaseSpaceError as exc:
            results.append(CheckResult(f"eta_range[{sname},{rep.value}]", False, str(exc)))
            continue
        ok = -ETA_SLACK <= eta <= 1.0 + ETA_SLACK
        results.append(CheckResult(f"eta_range[{sname},{rep.value}]", ok,
                                   f"eta = {eta:.6f}"))


def _determinism_check(tables, results):
    pick = None
    for (sname, rep), (_, table) in tables.items():
        if table.n_modes == 2 and rep is Representation.WIGNER:
            pick = table
            break
    if pick is None:
        results.append(CheckResult("determinism_threads", True,
                                   "skipped: no two-mode Wigner table built"))
        return
    products = pick.real_products()
    serial = abs_4d_with_estimate(products, pick.grid, threads=1)[0]
    pooled = abs_4d_with_estimate(products, pick.grid, threads=2)[0]
    again = abs_4d_with_estimate(products, pick.grid, threads=2)[0]
    ok = serial == pooled == again
    results.append(CheckResult(
        "determinism_threads", ok,
        f"serial = {serial!r}, threads=2 -> {pooled!r}"))


def run_validation(*, extent=None, points=None, reps=None, threads: int = 1):
    """Run every invariant check; returns (results, all_passed)."""
    rep_list = ([Representation.parse(r) for r in reps] if reps
                else list(Representation))
    results = []
    rng = np.random.default_rng(20240811)
    states = _check_states()
    tables = _norm_and_tables(states, rep_list, extent, points, threads, results)
    _marginal_checks(tables, results)
    _decomposition_checks(tables, results, rng)
    if Representation.WIGNER in rep_list:
        _closed_vs_numeric_check(results, rng)
    _husimi_checks(tables, results)
    _eta_checks(tables, results, threads)
    _determinism_check(tables, results)
    return results, all(r.passed for r in results)
