"""Molecular-orbital picture of the chain.

The chain Hamiltonian is diagonalised, and each lead's coupling to molecular
state m is ``w_am = sum_j v_aj conj(eta[j, m])``.  The sum runs over the two
terminal dots.  States are labelled 1..N in ascending order of the real part
of their energy.  A state whose couplings to both leads vanish is decoupled:
it is a bound state in the continuum, and it leaves an antiresonance in the
transmission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import InvalidSize, InvalidSpec, NoInnerChain, UnsupportedCouplingPattern
from .model import ChainSpec, CircuitSpec, chain_hamiltonian, lead_vectors

DECOUPLED_TOL = 1e-10
DEGENERACY_GAP = 1e-10


@dataclass(frozen=True)
class MolecularDecomposition:
    """Energies ``e_m`` with eigenvector columns ``eta[:, m]``; couplings are optional."""

    energies: np.ndarray
    eta: np.ndarray
    couplings_L: np.ndarray | None = None
    couplings_R: np.ndarray | None = None
    degenerate: bool = False

    @property
    def n_states(self) -> int:
        return len(self.energies)


def _ordering(energies: np.ndarray) -> np.ndarray:
    # ties in the real part (up to solver noise) are broken by the imaginary part
    return np.lexsort((energies.imag, np.round(energies.real, 9)))


def _has_degeneracy(energies: np.ndarray) -> bool:
    if len(energies) < 2:
        return False
    gaps = np.abs(energies[:, None] - energies[None, :])
    np.fill_diagonal(gaps, np.inf)
    return bool(gaps.min() < DEGENERACY_GAP)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Unit norm; the first component that is clearly nonzero becomes real positive."""
    vec = vec / np.linalg.norm(vec)
    big = np.flatnonzero(np.abs(vec) > 1e-8 * np.abs(vec).max())
    lead = vec[big[0]]
    return vec * (abs(lead) / lead)


def uniform_chain_eigensystem(n: int, e0: float = 0.0, t_c: float = 0.5) -> MolecularDecomposition:
    """Closed-form spectrum of the uniform Hermitian chain.

    ``e_m = E0 - 2 t_c cos(m pi / (N+1))``.  Column m of ``eta`` holds
    ``sqrt(2/(N+1)) sin((N+1-m)(N+1-l) pi / (N+1))`` for l = 1..N.  This is
    the textbook sine vector with an alternating sign, re-indexed so that
    column m belongs to ``e_m``.  No phase normalisation is applied, so the
    N=2 bonding column is ``(-1, 1)/sqrt(2)``.
    """
    if n < 1:
        raise InvalidSize(f"need n >= 1, got {n}")
    if not t_c > 0:
        raise InvalidSpec(f"t_c must be positive, got {t_c}")
    k = n + 1
    m = np.arange(1, n + 1)
    energies = (e0 - 2.0 * t_c * np.cos(m * np.pi / k)).astype(complex)
    l = np.arange(1, n + 1)
    eta = math.sqrt(2.0 / k) * np.sin(np.outer(k - l, k - m) * np.pi / k)
    return MolecularDecomposition(energies, eta.astype(complex))


def eigendecompose_chain(chain: ChainSpec) -> MolecularDecomposition:
    """Numeric eigen-decomposition of ``H_c``; sorted, unit-norm, phase-fixed columns."""
    h = chain_hamiltonian(chain)
    vals, vecs = linalg.eig(h)
    order = _ordering(vals)
    vals = vals[order]
    eta = np.column_stack([_fix_phase(vecs[:, i]) for i in order])
    return MolecularDecomposition(vals, eta, degenerate=_has_degeneracy(vals))


def molecular_couplings(spec: CircuitSpec, decomp: MolecularDecomposition) -> tuple[np.ndarray, np.ndarray]:
    """``(w_L, w_R)``, where ``w_am = sum_j v_aj conj(eta[j, m])`` uses the circuit's gauge phases."""
    if not spec.coupling.is_uniform:
        raise UnsupportedCouplingPattern("molecular couplings need |v_a1| = |v_aN| = v0 on both leads")
    if decomp.eta.shape != (spec.n_dots, spec.n_dots):
        raise InvalidSpec("decomposition does not match the chain size")
    u_l, u_r = lead_vectors(spec)
    eta_h = decomp.eta.conj().T
    return eta_h @ u_l, eta_h @ u_r


def decompose(spec: CircuitSpec) -> MolecularDecomposition:
    """Numeric decomposition of ``spec.chain`` with the lead couplings filled in."""
    decomp = eigendecompose_chain(spec.chain)
    w_l, w_r = molecular_couplings(spec, decomp)
    return replace(decomp, couplings_L=w_l, couplings_R=w_r)


def classify_decoupled(spec: CircuitSpec, decomp: MolecularDecomposition | None = None) -> set[int]:
    """1-based labels m with ``max(|w_Lm|, |w_Rm|) < 1e-10 * v0``."""
    if decomp is None:
        decomp = eigendecompose_chain(spec.chain)
    w_l, w_r = molecular_couplings(spec, decomp)
    strength = np.maximum(np.abs(w_l), np.abs(w_r))
    return {int(m) + 1 for m in np.flatnonzero(strength < DECOUPLED_TOL * spec.coupling.v0)}


def subchain_eigenvalues(chain: ChainSpec) -> np.ndarray:
    """Spectrum of the inner chain left after deleting dots 1 and N."""
    if chain.n_dots < 3:
        raise NoInnerChain(f"an inner chain needs n >= 3, got {chain.n_dots}")
    inner = ChainSpec(chain.onsite[1:-1], chain.hoppings[1:-1])
    vals, _ = linalg.eig(chain_hamiltonian(inner))
    return vals[_ordering(vals)]
