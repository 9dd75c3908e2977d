"""Circuit parameterization: chain, leads, chain-lead bonds and flux gauge.

Energies are measured in units of the lead hopping ``t0``.  Dots are
indexed 1..N in docstrings and 0..N-1 in arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidDetuning, InvalidSize, InvalidSpec

PT_TOL = 1e-12


def _freeze(values, dtype=complex) -> tuple:
    return tuple(dtype(v) for v in values)


@dataclass(frozen=True)
class ChainSpec:
    """On-site energies ``E_l`` and hoppings ``t_l`` (``t_l`` couples dot l -> l+1)."""

    onsite: tuple
    hoppings: tuple

    def __post_init__(self):
        object.__setattr__(self, "onsite", _freeze(self.onsite))
        object.__setattr__(self, "hoppings", _freeze(self.hoppings))
        n = len(self.onsite)
        if n < 1:
            raise InvalidSize("a chain needs at least one dot")
        if len(self.hoppings) != n - 1:
            raise InvalidSpec(f"{n} dots need {n - 1} hoppings, got {len(self.hoppings)}")
        if not all(np.isfinite(v) for v in self.onsite + self.hoppings):
            raise InvalidSpec("chain parameters must be finite")

    @property
    def n_dots(self) -> int:
        return len(self.onsite)


@dataclass(frozen=True)
class LeadSpec:
    t0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.t0) and self.t0 > 0):
            raise InvalidSpec(f"lead hopping t0 must be positive, got {self.t0}")


class Allocation(enum.Enum):
    """How the flux phase is distributed over the four chain-lead bonds."""

    SYMMETRIC = "symmetric"
    LEFT_SHIFTED = "left_shifted"


# phase per unit flux on (v_L1, v_LN, v_R1, v_RN)
_PHASE_WEIGHTS = {
    Allocation.SYMMETRIC: (0.25, -0.25, -0.25, 0.25),
    # every dot operator rotated by exp(-i phi/4) relative to SYMMETRIC
    Allocation.LEFT_SHIFTED: (0.5, 0.0, 0.0, 0.5),
}


@dataclass(frozen=True)
class CouplingSpec:
    """Chain-lead bonds.

    ``magnitudes`` holds ``(|v_L1|, |v_LN|, |v_R1|, |v_RN|)``; when omitted
    every bond has magnitude ``v0``.
    """

    v0: float = 1.0
    flux: float = 0.0
    allocation: Allocation = Allocation.SYMMETRIC
    magnitudes: tuple | None = None

    def __post_init__(self):
        if not (math.isfinite(self.v0) and self.v0 >= 0):
            raise InvalidSpec(f"v0 must be a non-negative real, got {self.v0}")
        if not math.isfinite(self.flux):
            raise InvalidSpec("flux must be finite")
        if isinstance(self.allocation, str):
            object.__setattr__(self, "allocation", Allocation(self.allocation))
        if self.magnitudes is not None:
            mags = tuple(float(m) for m in self.magnitudes)
            if len(mags) != 4 or not all(math.isfinite(m) and m >= 0 for m in mags):
                raise InvalidSpec("magnitudes must be four non-negative reals")
            object.__setattr__(self, "magnitudes", mags)

    @property
    def bond_magnitudes(self) -> tuple:
        return self.magnitudes if self.magnitudes is not None else (self.v0,) * 4

    @property
    def is_uniform(self) -> bool:
        return all(abs(m - self.v0) <= PT_TOL * max(1.0, self.v0) for m in self.bond_magnitudes)


@dataclass(frozen=True)
class CircuitSpec:
    chain: ChainSpec
    lead: LeadSpec = field(default_factory=LeadSpec)
    coupling: CouplingSpec = field(default_factory=CouplingSpec)

    @property
    def n_dots(self) -> int:
        return self.chain.n_dots

    @property
    def t0(self) -> float:
        return self.lead.t0

    def with_flux(self, phi: float) -> CircuitSpec:
        return replace(self, coupling=replace(self.coupling, flux=float(phi)))

    def with_allocation(self, allocation: Allocation) -> CircuitSpec:
        return replace(self, coupling=replace(self.coupling, allocation=allocation))

    def with_v0(self, v0: float) -> CircuitSpec:
        return replace(self, coupling=replace(self.coupling, v0=float(v0), magnitudes=None))

    def with_gain_loss(self, gamma: float) -> CircuitSpec:
        """Replace the imaginary parts of the terminal levels by -i*gamma (dot 1) and +i*gamma (dot N)."""
        onsite = list(self.chain.onsite)
        if len(onsite) < 2:
            raise InvalidSize("gain/loss needs two distinct terminal dots")
        onsite[0] = complex(onsite[0].real, -gamma)
        onsite[-1] = complex(onsite[-1].real, gamma)
        return replace(self, chain=ChainSpec(onsite, self.chain.hoppings))

    def swap_leads(self) -> CircuitSpec:
        """Exchange the roles of the left and right leads (bond amplitudes included)."""
        c = self.coupling
        if c.allocation is not Allocation.SYMMETRIC:
            raise InvalidSpec("lead swap is defined for the symmetric gauge only")
        vl1, vln, vr1, vrn = c.bond_magnitudes
        # swapping L<->R in the symmetric gauge is the same as phi -> -phi
        return replace(self, coupling=replace(c, magnitudes=(vr1, vrn, vl1, vln), flux=-c.flux))


def make_pt_chain(n: int, e0: float = 0.0, t_c: float = 0.5, gamma: float = 0.0,
                  center_delta: float = 0.0) -> ChainSpec:
    """Uniform chain with PT-conjugate terminal levels ``E0 -/+ i*gamma``.

    ``center_delta`` shifts the middle dot (odd ``n`` only).
    """
    if n < 2:
        raise InvalidSize(f"PT chain needs n >= 2, got {n}")
    if center_delta != 0 and n % 2 == 0:
        raise InvalidDetuning("center detuning needs an odd number of dots")
    onsite = [complex(e0)] * n
    if center_delta != 0:
        onsite[n // 2] = complex(e0 + center_delta)
    onsite[0] = complex(e0, -gamma)
    onsite[-1] = complex(e0, gamma)
    return ChainSpec(onsite, [complex(t_c)] * (n - 1))


def make_circuit(n: int, e0: float = 0.0, t_c: float = 0.5, gamma: float = 0.0,
                 center_delta: float = 0.0, v0: float = 1.0, phi: float = 0.0,
                 t0: float = 1.0, allocation: Allocation = Allocation.SYMMETRIC) -> CircuitSpec:
    """Default circuit used throughout: t0=1, v0=1, E0=0, t_c=0.5."""
    return CircuitSpec(make_pt_chain(n, e0, t_c, gamma, center_delta), LeadSpec(t0),
                       CouplingSpec(v0=v0, flux=phi, allocation=allocation))


def coupling_phases(coupling: CouplingSpec) -> tuple:
    """Complex bond amplitudes ``(v_L1, v_LN, v_R1, v_RN)``."""
    weights = _PHASE_WEIGHTS[coupling.allocation]
    return tuple(m * np.exp(1j * w * coupling.flux) if w else complex(m)
                 for m, w in zip(coupling.bond_magnitudes, weights))


def lead_vectors(spec: CircuitSpec) -> tuple[np.ndarray, np.ndarray]:
    """N-vectors ``u_L``, ``u_R`` holding each lead's bond amplitudes on dots 1 and N."""
    vl1, vln, vr1, vrn = coupling_phases(spec.coupling)
    n = spec.n_dots
    u_l = np.zeros(n, dtype=complex)
    u_r = np.zeros(n, dtype=complex)
    u_l[0] += vl1
    u_l[n - 1] += vln
    u_r[0] += vr1
    u_r[n - 1] += vrn
    return u_l, u_r


def chain_hamiltonian(chain: ChainSpec) -> np.ndarray:
    n = chain.n_dots
    h = np.diag(np.asarray(chain.onsite, dtype=complex))
    if n > 1:
        t = np.asarray(chain.hoppings, dtype=complex)
        idx = np.arange(n - 1)
        h[idx + 1, idx] = t
        h[idx, idx + 1] = t.conj()
    return h


def check_pt_symmetry(spec: CircuitSpec, tol: float = PT_TOL) -> bool:
    """True when hoppings are uniform, ``E_l = E*_{N+1-l}`` and ``v_a1 = v*_{a'N}``."""
    e = np.asarray(spec.chain.onsite)
    t = np.asarray(spec.chain.hoppings)
    if t.size and np.max(np.abs(t - t[0])) > tol:
        return False
    if np.max(np.abs(e - e[::-1].conj())) > tol:
        return False
    vl1, vln, vr1, vrn = coupling_phases(spec.coupling)
    return abs(vl1 - np.conj(vrn)) <= tol and abs(vr1 - np.conj(vln)) <= tol
