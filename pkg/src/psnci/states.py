"""States: finite superpositions of Fock and squeezed-Fock primitives.

Dimensionless oscillator units are used throughout (hbar = 1, unit mass
and frequency). The number-state wavefunction is

    psi_n(q) = pi^(-1/4) (2^n n!)^(-1/2) H_n(q) exp(-q^2 / 2),

and a positive squeezing parameter r contracts position by e^r:

    psi_{n,r}(q) = e^(r/2) psi_n(e^r q),

which dilates the momentum wavefunction by the same factor. Squeezed and
unsqueezed primitives are generally not orthogonal, so norms and overlaps
are computed by position-space quadrature rather than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import specialfn
from .errors import (
    DegenerateStateError,
    DomainError,
    QuadratureError,
    StateFormatError,
)

MAX_SQUEEZING = 5.0

FOCK = "fock"
SQUEEZED = "squeezed"

# Beyond this radius (in natural position units, before squeezing) the
# low-order oscillator wavefunctions are below double-precision noise.
_SUPPORT_MARGIN = 6.0


@dataclass(frozen=True)
class Primitive:
    """One basis primitive: Fock(n) or SqueezedFock(n, r)."""

    kind: str
    n: int
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in (FOCK, SQUEEZED):
            raise DomainError(f"unknown primitive kind {self.kind!r}")
        specialfn._check_order("n", self.n)
        if self.kind == FOCK:
            if self.r != 0.0:
                raise DomainError("Fock primitives carry no squeezing parameter")
        else:
            if not np.isfinite(self.r) or abs(self.r) > MAX_SQUEEZING:
                raise DomainError(
                    f"squeezing parameter must satisfy |r| <= {MAX_SQUEEZING}, got {self.r}"
                )

    @property
    def position_scale(self) -> float:
        """Characteristic width factor of the position wavefunction."""
        return math.exp(-self.r)

    @property
    def support_radius(self) -> float:
        """Position radius beyond which the wavefunction is negligible."""
        return (math.sqrt(2.0 * self.n + 1.0) + _SUPPORT_MARGIN) * math.exp(-self.r)

    @property
    def momentum_radius(self) -> float:
        return (math.sqrt(2.0 * self.n + 1.0) + _SUPPORT_MARGIN) * math.exp(self.r)


def fock(n: int) -> Primitive:
    return Primitive(FOCK, int(n))


def squeezed_fock(n: int, r: float) -> Primitive:
    return Primitive(SQUEEZED, int(n), float(r))


def fock_psi(n: int, q):
    """Number-state position wavefunction psi_n(q).

    Evaluated with the orthonormal-function recurrence
    psi_{k+1} = sqrt(2/(k+1)) q psi_k - sqrt(k/(k+1)) psi_{k-1},
    which avoids overflow of H_n and n! for moderate n.
    """
    specialfn._check_order("n", n)
    qa = np.asarray(q, dtype=float)
    psi_prev = np.pi ** -0.25 * np.exp(-0.5 * qa * qa)
    if n == 0:
        return specialfn._as_input_like(psi_prev, q)
    psi_cur = math.sqrt(2.0) * qa * psi_prev
    for k in range(1, n):
        psi_cur, psi_prev = (
            math.sqrt(2.0 / (k + 1.0)) * qa * psi_cur
            - math.sqrt(k / (k + 1.0)) * psi_prev,
            psi_cur,
        )
    return specialfn._as_input_like(psi_cur, q)


def squeezed_fock_psi(n: int, r: float, q):
    """Position wavefunction of the squeezed number state, e^(r/2) psi_n(e^r q)."""
    if not np.isfinite(r) or abs(r) > MAX_SQUEEZING:
        raise DomainError(f"|r| <= {MAX_SQUEEZING} required, got {r}")
    s = math.exp(r)
    return math.sqrt(s) * fock_psi(n, np.multiply(q, s))


def position_wavefunction(prim: Primitive, q):
    if prim.kind == FOCK:
        return fock_psi(prim.n, q)
    return squeezed_fock_psi(prim.n, prim.r, q)


def momentum_wavefunction(prim: Primitive, p):
    """Momentum wavefunction phi(p) = (2 pi)^(-1/2) int psi(q) e^(-iqp) dq.

    Closed form: phi_n(p) = (-i)^n psi_n(p) for Fock states, and
    (-i)^n e^(-r/2) psi_n(e^(-r) p) for squeezed ones.
    """
    phase = (-1j) ** prim.n
    if prim.kind == FOCK:
        return phase * np.asarray(fock_psi(prim.n, p), dtype=complex)
    s = math.exp(-prim.r)
    pa = np.asarray(p, dtype=float)
    return phase * math.sqrt(s) * np.asarray(fock_psi(prim.n, s * pa), dtype=complex)


def _validate_amplitude(c) -> complex:
    c = complex(c)
    if not (np.isfinite(c.real) and np.isfinite(c.imag)):
        raise DomainError("amplitudes must be finite")
    return c


@dataclass(frozen=True)
class SingleModeState:
    """Finite superposition sum_i c_i |prim_i> of one mode."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise DomainError("state needs at least one term")
        checked = tuple((_validate_amplitude(c), prim) for c, prim in self.terms)
        object.__setattr__(self, "terms", checked)

    @property
    def n_modes(self) -> int:
        return 1

    @property
    def amplitudes(self) -> tuple:
        return tuple(c for c, _ in self.terms)

    @property
    def primitives(self) -> tuple:
        return tuple(p for _, p in self.terms)

    def wavefunction(self, q):
        qa = np.asarray(q, dtype=float)
        total = np.zeros(qa.shape, dtype=complex)
        for c, prim in self.terms:
            total = total + c * position_wavefunction(prim, qa)
        return total

    def with_amplitudes(self, amplitudes) -> "SingleModeState":
        if len(amplitudes) != len(self.terms):
            raise DomainError("amplitude count mismatch")
        return SingleModeState(tuple(
            (c, prim) for c, (_, prim) in zip(amplitudes, self.terms)
        ))


@dataclass(frozen=True)
class TwoModeState:
    """Finite superposition sum_k c_k |u_k>|v_k> of two modes."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise DomainError("state needs at least one term")
        checked = tuple(
            (_validate_amplitude(c), p1, p2) for c, p1, p2 in self.terms
        )
        object.__setattr__(self, "terms", checked)

    @property
    def n_modes(self) -> int:
        return 2

    @property
    def amplitudes(self) -> tuple:
        return tuple(c for c, _, _ in self.terms)

    def mode_primitives(self, mode: int) -> tuple:
        if mode == 0:
            return tuple(p1 for _, p1, _ in self.terms)
        if mode == 1:
            return tuple(p2 for _, _, p2 in self.terms)
        raise DomainError(f"mode must be 0 or 1, got {mode}")

    def swapped(self) -> "TwoModeState":
        return TwoModeState(tuple((c, p2, p1) for c, p1, p2 in self.terms))

    def with_amplitudes(self, amplitudes) -> "TwoModeState":
        if len(amplitudes) != len(self.terms):
            raise DomainError("amplitude count mismatch")
        return TwoModeState(tuple(
            (c, p1, p2) for c, (_, p1, p2) in zip(amplitudes, self.terms)
        ))


# ---------------------------------------------------------------------------
# Overlaps and normalization
# ---------------------------------------------------------------------------

_OVERLAP_START_NODES = 256
_OVERLAP_MAX_DOUBLINGS = 7


def primitive_overlap(p1: Primitive, p2: Primitive, tol: float = 1e-10) -> complex:
    """<p1|p2> by midpoint quadrature with grid doubling to absolute error tol."""
    half_width = max(p1.support_radius, p2.support_radius)
    n = _OVERLAP_START_NODES
    prev = None
    for _ in range(_OVERLAP_MAX_DOUBLINGS + 1):
        dx = 2.0 * half_width / n
        x = -half_width + (np.arange(n) + 0.5) * dx
        val = complex(np.sum(position_wavefunction(p1, x) * position_wavefunction(p2, x)) * dx)
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
        n *= 2
    raise QuadratureError(
        f"overlap quadrature did not converge to {tol:g}",
        achieved=abs(val - prev), values=(prev, val),
    )


def overlap(s1: SingleModeState, s2: SingleModeState, tol: float = 1e-10) -> complex:
    """<s1|s2> including cross terms between non-orthogonal primitives."""
    total = 0.0 + 0.0j
    cache = {}
    for c1, p1 in s1.terms:
        for c2, p2 in s2.terms:
            key = (p1, p2)
            if key not in cache:
                cache[key] = primitive_overlap(p1, p2, tol)
            total += np.conj(c1) * c2 * cache[key]
    return total


def state_norm(state, tol: float = 1e-10) -> float:
    if isinstance(state, SingleModeState):
        return math.sqrt(max(overlap(state, state, tol).real, 0.0))
    if isinstance(state, TwoModeState):
        total = 0.0 + 0.0j
        cache1, cache2 = {}, {}
        for ck, uk, vk in state.terms:
            for cl, ul, vl in state.terms:
                k1 = (uk, ul)
                if k1 not in cache1:
                    cache1[k1] = primitive_overlap(uk, ul, tol)
                k2 = (vk, vl)
                if k2 not in cache2:
                    cache2[k2] = primitive_overlap(vk, vl, tol)
                total += np.conj(ck) * cl * cache1[k1] * cache2[k2]
        return math.sqrt(max(total.real, 0.0))
    raise DomainError(f"unsupported state type {type(state)!r}")


def normalize(state, tol: float = 1e-10):
    """Return the state rescaled to unit norm. Idempotent."""
    norm = state_norm(state, tol)
    if norm <= 1e-12:
        raise DegenerateStateError(f"cannot normalize state with norm {norm:g}")
    return state.with_amplitudes([c / norm for c in state.amplitudes])


# ---------------------------------------------------------------------------
# State families used by the sweeps
# ---------------------------------------------------------------------------

COEFF_CONVENTIONS = ("sqrt", "printed")


def entangled_state(n_low: int, n_high: int, a_sq: float) -> TwoModeState:
    """a |n_low, n_high> + sqrt(1 - a^2) |n_high, n_low>, a = sqrt(a_sq)."""
    if not 0 <= n_low < n_high <= specialfn.MAX_ORDER:
        raise DomainError(f"need 0 <= n_low < n_high, got ({n_low}, {n_high})")
    if not 0.0 <= a_sq <= 1.0:
        raise DomainError(f"a_sq must lie in [0, 1], got {a_sq}")
    a = math.sqrt(a_sq)
    b = math.sqrt(max(0.0, 1.0 - a_sq))
    return TwoModeState((
        (a, fock(n_low), fock(n_high)),
        (b, fock(n_high), fock(n_low)),
    ))


def _superposition_with_squeezed(a: float, squeezed_prim: Primitive,
                                 convention: str) -> SingleModeState:
    if convention not in COEFF_CONVENTIONS:
        raise DomainError(f"convention must be one of {COEFF_CONVENTIONS}, got {convention!r}")
    if not -1.0 <= a <= 1.0:
        raise DomainError(f"amplitude a must lie in [-1, 1], got {a}")
    c0 = (1.0 - a * a) if convention == "printed" else math.sqrt(1.0 - a * a)
    raw = SingleModeState(((c0, fock(0)), (a, squeezed_prim)))
    return normalize(raw)


def squeezed_vacuum_superposition(a: float, r: float,
                                  convention: str = "sqrt") -> SingleModeState:
    """Normalized superposition of |0> and the squeezed vacuum |0, r>.

    The two components are non-orthogonal, so the printed coefficients are
    renormalized numerically including their overlap.
    """
    return _superposition_with_squeezed(a, squeezed_fock(0, r), convention)


def squeezed_excited_superposition(a: float, r: float,
                                   convention: str = "sqrt") -> SingleModeState:
    """Normalized superposition of |0> and the squeezed one-photon state |1, r>."""
    return _superposition_with_squeezed(a, squeezed_fock(1, r), convention)


# ---------------------------------------------------------------------------
# JSON state description (CLI wire format)
# ---------------------------------------------------------------------------

def _primitive_from_dict(obj, where: str) -> Primitive:
    if not isinstance(obj, dict):
        raise StateFormatError(f"{where} must be an object")
    allowed = {"type", "n", "r"}
    unknown = set(obj) - allowed
    if unknown:
        raise StateFormatError(f"{where} has unknown keys {sorted(unknown)}")
    kind = obj.get("type")
    if kind not in (FOCK, SQUEEZED):
        raise StateFormatError(f"{where}.type must be 'fock' or 'squeezed'")
    if "n" not in obj or not isinstance(obj["n"], int) or obj["n"] < 0:
        raise StateFormatError(f"{where}.n must be a non-negative integer")
    try:
        if kind == FOCK:
            if "r" in obj:
                raise StateFormatError(f"{where}: fock primitives take no 'r'")
            return fock(obj["n"])
        if "r" not in obj or not isinstance(obj["r"], (int, float)):
            raise StateFormatError(f"{where}: squeezed primitives need a numeric 'r'")
        return squeezed_fock(obj["n"], float(obj["r"]))
    except DomainError as exc:
        raise StateFormatError(f"{where}: {exc}") from exc


def state_from_dict(data):
    if not isinstance(data, dict):
        raise StateFormatError("state description must be a JSON object")
    unknown = set(data) - {"modes", "terms"}
    if unknown:
        raise StateFormatError(f"unknown top-level keys {sorted(unknown)}")
    modes = data.get("modes")
    if modes not in (1, 2):
        raise StateFormatError("'modes' must be 1 or 2")
    terms = data.get("terms")
    if not isinstance(terms, list) or not terms:
        raise StateFormatError("'terms' must be a non-empty list")
    parsed = []
    for idx, term in enumerate(terms):
        where = f"terms[{idx}]"
        if not isinstance(term, dict):
            raise StateFormatError(f"{where} must be an object")
        allowed = {"amp_re", "amp_im", "mode1", "mode2"}
        unknown = set(term) - allowed
        if unknown:
            raise StateFormatError(f"{where} has unknown keys {sorted(unknown)}")
        if "amp_re" not in term or not isinstance(term["amp_re"], (int, float)):
            raise StateFormatError(f"{where}.amp_re must be a number")
        amp_im = term.get("amp_im", 0.0)
        if not isinstance(amp_im, (int, float)):
            raise StateFormatError(f"{where}.amp_im must be a number")
        amp = complex(float(term["amp_re"]), float(amp_im))
        p1 = _primitive_from_dict(term.get("mode1"), f"{where}.mode1")
        if modes == 1:
            if "mode2" in term:
                raise StateFormatError(f"{where}: mode2 given for a single-mode state")
            parsed.append((amp, p1))
        else:
            p2 = _primitive_from_dict(term.get("mode2"), f"{where}.mode2")
            parsed.append((amp, p1, p2))
    try:
        if modes == 1:
            return SingleModeState(tuple(parsed))
        return TwoModeState(tuple(parsed))
    except DomainError as exc:
        raise StateFormatError(str(exc)) from exc


def state_from_json(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from exc
    return state_from_dict(data)


def _primitive_to_dict(prim: Primitive) -> dict:
    if prim.kind == FOCK:
        return {"type": FOCK, "n": prim.n}
    return {"type": SQUEEZED, "n": prim.n, "r": prim.r}


def state_to_dict(state) -> dict:
    if isinstance(state, SingleModeState):
        return {
            "modes": 1,
            "terms": [
                {"amp_re": c.real, "amp_im": c.imag, "mode1": _primitive_to_dict(p)}
                for c, p in state.terms
            ],
        }
    if isinstance(state, TwoModeState):
        return {
            "modes": 2,
            "terms": [
                {
                    "amp_re": c.real,
                    "amp_im": c.imag,
                    "mode1": _primitive_to_dict(p1),
                    "mode2": _primitive_to_dict(p2),
                }
                for c, p1, p2 in state.terms
            ],
        }
    raise DomainError(f"unsupported state type {type(state)!r}")
