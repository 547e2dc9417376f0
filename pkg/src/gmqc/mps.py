"""Bond-dimension-2 matrix-product form of the AKLT ground state.

Each bulk site carries the Kraus triple ``K_alpha = <alpha|M> / sqrt(3)``
acting on a two-dimensional bond space. The chain state is

    sum_alpha |alpha_1 .. alpha_N> (1 (x) K_{alpha_N} ... K_{alpha_1}) |singlet>

on the bond indices of sites 0 and N+1. The bond index is the conjugate
spin-1/2 representation: the physical boundary spins are obtained by
applying ``BOUNDARY_FRAME`` (a spin flip, ``Y``) to both bond factors. With
that identification the state is annihilated by the ``P32`` boundary terms.

Logical vectors always live in the bond frame of site N+1.
"""

import itertools
from dataclasses import dataclass, replace

import numpy as np

from . import spin
from .errors import ImpossibleOutcomeError

BOUNDARY_FRAME = spin.Y
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
KRAUS_TOL = 1e-12
ZERO_BRANCH = 1e-14


def _site_kraus():
    m = spin.m_matrices()
    k = np.stack([m[a] for a in (1, 2, 3)]) / np.sqrt(3)
    k.flags.writeable = False
    return k


_SITE_KRAUS = _site_kraus()


def site_kraus():
    """Array of shape ``(3, 2, 2)``: ``<alpha|M> / sqrt(3)`` for alpha = 1, 2, 3 (read-only)."""
    return _SITE_KRAUS


def kraus_for_state(frame_coeffs):
    """Bond operator for projecting a site onto ``sum_alpha c_alpha |alpha>``.

    ``<gamma|M>/sqrt(3) = sum_alpha conj(c_alpha) K_alpha``.
    """
    c = np.asarray(frame_coeffs, dtype=complex)
    return np.tensordot(c.conj(), site_kraus(), axes=(0, 0))


@dataclass(frozen=True)
class MpsChain:
    """AKLT chain of ``n_sites`` bulk sites in matrix-product form.

    ``logical`` is ``None`` while the boundary singlet is intact; after
    initialisation it is the bond-frame 2-vector attached at site N+1.
    ``measured`` counts consumed bulk sites.
    """

    n_sites: int
    kraus: np.ndarray
    logical: np.ndarray = None
    measured: int = 0

    @property
    def remaining(self):
        return self.n_sites - self.measured


def build_aklt_mps(n_sites):
    if n_sites < 1:
        raise ValueError("a chain needs at least one spin-1 site")
    k = site_kraus()
    completeness = sum(a.conj().T @ a for a in k)
    assert np.allclose(completeness, np.eye(2), atol=KRAUS_TOL)
    return MpsChain(n_sites, k)


def with_logical(chain, vector):
    v = np.asarray(vector, dtype=complex)
    return replace(chain, logical=v / np.linalg.norm(v))


def _bond_product(chain, alphas):
    op = np.eye(2, dtype=complex)
    for a in alphas:
        op = chain.kraus[a - 1] @ op
    return op


def _bond_tensor(chain):
    """Bond-frame amplitudes ``(2, 3, ..., 3, 2)`` over ``(site 0, alphas, site N+1)``."""
    n = chain.n_sites
    t = np.zeros((2,) + (3,) * n + (2,), dtype=complex)
    for alphas in itertools.product((1, 2, 3), repeat=n):
        amp = np.kron(np.eye(2), _bond_product(chain, alphas)) @ SINGLET
        t[(slice(None),) + tuple(a - 1 for a in alphas) + (slice(None),)] = amp.reshape(2, 2)
    return t


def to_dense(chain, frame="physical"):
    """Dense state vector of an unmeasured chain with both boundary spins.

    Tensor order ``site 0, 1..N, N+1``; bulk sites in the ``S^z`` basis.
    ``frame="bond"`` skips the boundary spin flip.
    """
    if chain.measured or chain.logical is not None:
        raise ValueError("dense expansion is only defined for the unmeasured chain")
    t = _bond_tensor(chain)
    w_t = spin.frame_change().T
    for k in range(1, chain.n_sites + 1):
        t = np.moveaxis(np.tensordot(w_t, t, axes=(1, k)), 0, k)
    if frame == "physical":
        t = np.tensordot(BOUNDARY_FRAME, t, axes=(1, 0))
        t = np.moveaxis(np.tensordot(BOUNDARY_FRAME, t, axes=(1, t.ndim - 1)), 0, -1)
    elif frame != "bond":
        raise ValueError(f"unknown frame {frame!r}")
    return t.reshape(-1)


def amplitude(chain, alphas, left, right):
    """Amplitude ``<left, alpha_1..alpha_N, right | G>``.

    ``alphas`` are measurement-frame labels in ``{1, 2, 3}``; ``left`` and
    ``right`` are physical boundary labels, 0 for ``up`` and 1 for ``down``.
    """
    alphas = tuple(alphas)
    if len(alphas) != chain.n_sites:
        raise ValueError(f"expected {chain.n_sites} site labels, got {len(alphas)}")
    if any(a not in (1, 2, 3) for a in alphas):
        raise ValueError(f"site labels must be 1, 2 or 3: {alphas}")
    if left not in (0, 1) or right not in (0, 1):
        raise ValueError("boundary labels must be 0 (up) or 1 (down)")
    bond = np.kron(np.eye(2), _bond_product(chain, alphas)) @ SINGLET
    bra = np.kron(np.eye(2)[left] @ BOUNDARY_FRAME, np.eye(2)[right] @ BOUNDARY_FRAME)
    return complex(bra @ bond)


def transfer_map(chain, op=None):
    """Bond superoperator ``rho -> sum <b|op|a> K_a rho K_b^dagger`` (4x4).

    ``op`` is a 3x3 operator in the ``S^z`` basis, or ``None`` for identity.
    The matrix acts on row-major ``vec(rho)``.
    """
    if op is None:
        o = np.eye(3)
    else:
        w = spin.frame_change().conj()
        o = w @ np.asarray(op) @ w.conj().T
    e = np.zeros((4, 4), dtype=complex)
    for a in range(3):
        for b in range(3):
            if o[b, a] != 0:
                e += o[b, a] * np.kron(chain.kraus[a], chain.kraus[b].conj())
    return e


def expectation(chain, ops):
    """``<G| prod_k ops[k] |G>`` for single-site operators ``{site: 3x3}``.

    Contracted site by site with 4x4 transfer maps starting from the bond
    reduced state ``1/2`` of the boundary singlet.
    """
    rho = (np.eye(2) / 2).reshape(-1).astype(complex)
    plain = transfer_map(chain)
    for k in range(1, chain.n_sites + 1):
        rho = (transfer_map(chain, ops[k]) if k in ops else plain) @ rho
    return complex(np.trace(rho.reshape(2, 2)))


def correlator(n_sites, j, jp, axis):
    """``<S^axis_j S^axis_jp>`` on the N-site AKLT ground state."""
    if not 1 <= j <= jp <= n_sites:
        raise ValueError(f"need 1 <= j <= j' <= N, got j={j}, j'={jp}, N={n_sites}")
    s = dict(zip(spin.AXES, spin.spin1_operators()))[axis]
    chain = build_aklt_mps(n_sites)
    ops = {j: s @ s} if j == jp else {j: s, jp: s}
    return expectation(chain, ops).real


def apply_site_operator(chain, op):
    """Consume one site with bond operator ``op``.

    Returns the updated chain (renormalised logical vector) and the branch
    probability ``||op v||^2``.
    """
    if chain.logical is None:
        raise ValueError("chain has no logical vector yet")
    if chain.remaining <= 0:
        raise ValueError("no unmeasured sites left")
    w = np.asarray(op) @ chain.logical
    p = float(np.vdot(w, w).real)
    if p < ZERO_BRANCH:
        raise ImpossibleOutcomeError(f"branch probability {p:.2e} at site {chain.measured + 1}")
    return replace(chain, logical=w / np.sqrt(p), measured=chain.measured + 1), p
