"""Small dense linear-algebra helpers on top of numpy.

Everything here works on plain ``numpy.ndarray`` objects. Multi-site
operators are laid out with the first site as the most significant tensor
factor, matching ``numpy.kron``.
"""

from functools import reduce

import numpy as np

from .errors import NotHermitianError

HERMITIAN_TOL = 1e-12


def kron(*ops):
    """Kronecker product of any number of matrices (or vectors)."""
    if not ops:
        return np.ones((1, 1))
    return reduce(np.kron, ops)


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol * scale)


def eigh(h, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    h : ndarray
        Square Hermitian matrix.
    tol : float
        Allowed ``max|h - h^dagger|`` relative to ``max(1, max|h|)``.

    Returns
    -------
    evals : ndarray
        Real eigenvalues in ascending order.
    evecs : ndarray
        Orthonormal eigenvectors as columns.

    Raises
    ------
    NotHermitianError
        If ``h`` is not square or not Hermitian within ``tol``.
    """
    h = np.asarray(h)
    if not is_hermitian(h, tol):
        raise NotHermitianError(f"matrix of shape {h.shape} is not Hermitian within {tol:g}")
    return np.linalg.eigh(h)


def eigvalsh(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    if not is_hermitian(h, tol):
        raise NotHermitianError(f"matrix of shape {h.shape} is not Hermitian within {tol:g}")
    return np.linalg.eigvalsh(h)


def op_norm(a):
    """Spectral (largest singular value) norm."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def embed(op, first, dims):
    """Embed an operator acting on consecutive sites into the full space.

    ``op`` acts on ``dims[first:first + k]`` for the ``k`` sites it spans;
    identity elsewhere.
    """
    dims = list(dims)
    span, k = 1, 0
    while span < op.shape[0]:
        span *= dims[first + k]
        k += 1
    if span != op.shape[0]:
        raise ValueError(f"operator of size {op.shape[0]} does not match sites starting at {first}")
    left = int(np.prod(dims[:first], dtype=np.int64))
    right = int(np.prod(dims[first + k:], dtype=np.int64))
    return kron(np.eye(left), op, np.eye(right))


def add_local_inplace(h, op, first, dims, scale=1.0):
    """``h += scale * embed(op, first, dims)`` without allocating the embedding."""
    size = op.shape[0]
    left = int(np.prod(dims[:first], dtype=np.int64))
    right = h.shape[0] // (left * size)
    view = h.reshape(left, size, right, left, size, right)
    block = scale * op
    for i in range(left):
        for k in range(right):
            view[i, :, k, i, :, k] += block
    return h


def apply_local(op, psi, sites, dims):
    """Apply an operator on ``sites`` (consecutive or not) to a state vector.

    ``op`` is a matrix over the ordered tensor product of the listed sites.
    Returns a new flat vector.
    """
    dims = list(dims)
    sites = list(sites)
    local = [dims[s] for s in sites]
    t = np.asarray(psi).reshape(dims)
    opt = np.asarray(op).reshape(local + local)
    k = len(sites)
    out = np.tensordot(opt, t, axes=(list(range(k, 2 * k)), sites))
    out = np.moveaxis(out, list(range(k)), sites)
    return out.reshape(-1)


def fidelity(a, b):
    """``|<a|b>|^2`` for normalised vectors; insensitive to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)
