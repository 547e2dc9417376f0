"""AKLT chain Hamiltonians with optional spin-1/2 boundary sites.

Site layout of a chain with both boundaries: ``0, 1, ..., N, N+1`` where
``0`` and ``N+1`` are spin-1/2 and ``1..N`` are spin-1. A missing boundary
simply drops that site from the tensor product.

All terms are real in the ``S^z`` basis, so dense Hamiltonians are stored as
real ``float64`` arrays.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionCapError, GroundSpaceError
from .spin import AXES, PAULI, projector_spin2, projector_spin32, rotation

MAX_DIM = 8748
GROUND_TOL = 1e-9
GAP_TOL = 1e-6

_CONFIGS = {
    "both": (True, True),
    "left": (True, False),
    "right": (False, True),
    "none": (False, False),
}


@dataclass(frozen=True)
class ChainSpec:
    """Chain of ``n_sites`` spin-1 particles with optional boundary spins."""

    n_sites: int
    left_boundary: bool = True
    right_boundary: bool = True
    J: float = 1.0

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("a chain needs at least one spin-1 site")
        if self.J <= 0:
            raise ValueError("J must be positive")

    @classmethod
    def from_config(cls, n_sites, boundaries="both", J=1.0):
        """``boundaries`` is one of ``both``, ``left``, ``right``, ``none``."""
        try:
            left, right = _CONFIGS[boundaries]
        except KeyError:
            raise ValueError(f"unknown boundary configuration {boundaries!r}") from None
        return cls(n_sites, left, right, J)

    @property
    def dims(self):
        return [2] * self.left_boundary + [3] * self.n_sites + [2] * self.right_boundary

    @property
    def dim(self):
        return 3**self.n_sites * 2 ** (self.left_boundary + self.right_boundary)

    @property
    def n_boundaries(self):
        return int(self.left_boundary) + int(self.right_boundary)

    def position(self, site):
        """Tensor-factor index of chain site ``site`` (0 and N+1 are boundaries)."""
        if site == 0:
            if not self.left_boundary:
                raise ValueError("chain has no left boundary site")
            return 0
        if site == self.n_sites + 1:
            if not self.right_boundary:
                raise ValueError("chain has no right boundary site")
            return self.n_sites + int(self.left_boundary)
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} outside 0..{self.n_sites + 1}")
        return site - 1 + int(self.left_boundary)


def _check_cap(spec):
    if spec.dim > MAX_DIM:
        raise DimensionCapError(
            f"Hilbert-space dimension {spec.dim} exceeds the dense cap {MAX_DIM} "
            f"(N={spec.n_sites}, {spec.n_boundaries} boundary spins)"
        )


def terms(spec, first_bulk=1, include_left=None):
    """Local summands of ``H / J`` as ``(name, tensor position, matrix)``.

    ``first_bulk`` drops the bulk bonds ``k < first_bulk``; ``include_left``
    defaults to ``spec.left_boundary``.
    """
    if include_left is None:
        include_left = spec.left_boundary
    out = []
    p2 = projector_spin2().real
    if include_left and spec.left_boundary:
        out.append(("P32(0,1)", 0, projector_spin32(half_first=True).real))
    for k in range(max(first_bulk, 1), spec.n_sites):
        out.append((f"P2({k},{k + 1})", spec.position(k), p2))
    if spec.right_boundary and first_bulk <= spec.n_sites:
        n = spec.n_sites
        out.append((f"P32({n},{n + 1})", spec.position(n), projector_spin32(half_first=False).real))
    return out


def _assemble(spec, term_list):
    _check_cap(spec)
    h = np.zeros((spec.dim, spec.dim))
    for _, pos, op in term_list:
        linalg.add_local_inplace(h, op, pos, spec.dims, scale=spec.J)
    return h


def build_hamiltonian(spec):
    """Dense ``H = J [sum P2 + boundary P32 terms]`` for ``spec``.

    Raises
    ------
    DimensionCapError
        If the Hilbert space is larger than ``MAX_DIM``.
    """
    return _assemble(spec, terms(spec))


def residual_hamiltonian(spec, j):
    """``H(j)``: bulk bonds ``k = j..N-1`` plus the right boundary term.

    Acts on the full Hilbert space of ``spec`` (identity on sites ``< j`` and
    on the left boundary spin, whose coupling is off).
    """
    if not spec.right_boundary:
        raise ValueError("the residual Hamiltonian needs the right boundary spin")
    if not 1 <= j <= spec.n_sites:
        raise ValueError(f"residual index j={j} outside 1..{spec.n_sites}")
    return _assemble(spec, terms(spec, first_bulk=j, include_left=False))


def magnetization(spec):
    """Twice the total ``S^z`` of every basis state (integers)."""
    local = []
    for d in spec.dims:
        local.append(np.array([1, -1]) if d == 2 else np.array([2, 0, -2]))
    m = np.zeros(1, dtype=int)
    for loc in local:
        m = (m[:, None] + loc[None, :]).reshape(-1)
    return m


def _sector_eigh(h, sectors, vectors):
    evals, evecs = [], []
    for m in np.unique(sectors):
        idx = np.flatnonzero(sectors == m)
        block = h[np.ix_(idx, idx)]
        if vectors:
            w, v = linalg.eigh(block)
            full = np.zeros((h.shape[0], len(idx)), dtype=v.dtype)
            full[idx] = v
            evecs.append(full)
        else:
            w = linalg.eigvalsh(block)
        evals.append(w)
    evals = np.concatenate(evals)
    order = np.argsort(evals, kind="stable")
    if vectors:
        return evals[order], np.concatenate(evecs, axis=1)[:, order]
    return evals[order]


def spectrum(spec):
    """All eigenvalues of ``H``, diagonalised block by block in ``S^z_total``."""
    return _sector_eigh(build_hamiltonian(spec), magnetization(spec), vectors=False)


def ground_space(h, tol=GROUND_TOL, sectors=None):
    """Ground energy and an orthonormal basis of the ground eigenspace.

    Parameters
    ----------
    h : ndarray
        Hermitian Hamiltonian.
    tol : float
        Eigenvalues below ``tol`` count as ground energy (absolute, in the
        units of ``h``).
    sectors : array_like, optional
        Conserved quantum number per basis state; when given, ``h`` is
        diagonalised block by block.

    Returns
    -------
    energy : float
        Lowest eigenvalue.
    basis : ndarray
        Ground vectors as columns.

    Raises
    ------
    GroundSpaceError
        If no eigenvalue lies below ``tol``.
    """
    if sectors is None:
        evals, evecs = linalg.eigh(h)
    else:
        evals, evecs = _sector_eigh(h, np.asarray(sectors), vectors=True)
    mask = evals < tol
    if not mask.any():
        raise GroundSpaceError(f"lowest eigenvalue {evals[0]:.3e} is above the ground tolerance {tol:g}")
    return float(evals[0]), evecs[:, mask]


def chain_ground_space(spec):
    h = build_hamiltonian(spec)
    return ground_space(h, GROUND_TOL * spec.J, sectors=magnetization(spec))


def spectral_gap(spec):
    """Gap ``Delta E / J``: first eigenvalue above ``GAP_TOL * J``."""
    evals = spectrum(spec) / spec.J
    if evals[0] >= GROUND_TOL:
        raise GroundSpaceError(f"lowest eigenvalue {evals[0]:.3e} J is not zero")
    return float(evals[evals > GAP_TOL][0])


def string_operator(spec, j, axis):
    """``exp(i pi sum_{k=j..N} S^axis_k) (x) sigma^axis_{N+1}`` on the full chain."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if not spec.right_boundary:
        raise ValueError("string operators need the right boundary spin")
    if not 1 <= j <= spec.n_sites:
        raise ValueError(f"residual index j={j} outside 1..{spec.n_sites}")
    _check_cap(spec)
    flip = rotation(axis, np.pi)
    factors = []
    if spec.left_boundary:
        factors.append(np.eye(2))
    for k in range(1, spec.n_sites + 1):
        factors.append(flip if k >= j else np.eye(3))
    factors.append(PAULI[axis])
    return linalg.kron(*factors)


def frustration_residuals(spec, basis):
    """Largest ``||J * term @ v||`` over every summand and ground vector."""
    basis = np.asarray(basis)
    if basis.ndim == 1:
        basis = basis[:, None]
    worst = 0.0
    for _, pos, op in terms(spec):
        sites = [pos, pos + 1]
        for v in basis.T:
            r = linalg.apply_local(spec.J * op, v, sites, spec.dims)
            worst = max(worst, float(np.linalg.norm(r)))
    return worst
