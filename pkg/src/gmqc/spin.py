"""Spin operators, two-body projectors and the AKLT local measurement frame.

Basis conventions used everywhere in the package:

* spin-1 sites: ``(|Sz=+1>, |Sz=0>, |Sz=-1>)``
* spin-1/2 sites: ``(|up>, |down>)`` with ``|up> = |sz=+1/2>``

The measurement frame ``{|1>, |2>, |3>}`` is related to the ``S^z`` basis by

    |1> = -(|+1> - |-1>)/sqrt(2),  |2> = (|+1> + |-1>)/sqrt(2),  |3> = |0>.
"""

import enum

import numpy as np

_R2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": X, "y": Y, "z": Z}

AXES = ("x", "y", "z")


def spin1_operators():
    """Return ``(Sx, Sy, Sz)`` for spin 1 in the ``S^z`` basis."""
    sx = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _R2
    sy = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _R2
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return sx, sy, sz


def spin_half_operators():
    """Return ``(sx, sy, sz)`` = Pauli / 2."""
    return X / 2, Y / 2, Z / 2


def _dot(a_ops, b_ops):
    return sum(np.kron(a, b) for a, b in zip(a_ops, b_ops))


def projector_spin2():
    """Projector onto total spin 2 of two spin-1 sites (9x9).

    Built from ``S.S`` as ``(S.S + (S.S)^2 / 3) / 2 + 1/3``.
    """
    s = spin1_operators()
    ss = _dot(s, s)
    p = 0.5 * (ss + ss @ ss / 3.0) + np.eye(9) / 3.0
    return p.real.astype(complex)


def projector_spin32(half_first=True):
    """Projector onto total spin 3/2 of a spin-1/2 and a spin-1 site (6x6).

    ``half_first`` selects the tensor order: ``spin-1/2 (x) spin-1`` for the
    left boundary, ``spin-1 (x) spin-1/2`` for the right one.
    """
    s, big = spin_half_operators(), spin1_operators()
    sdot = _dot(s, big) if half_first else _dot(big, s)
    p = 2.0 / 3.0 * (np.eye(6) + sdot)
    return p.real.astype(complex)


class LocalBasis(enum.Enum):
    SZ = "sz"
    M = "m"


def frame_change():
    """Unitary ``W`` whose rows are ``|1>, |2>, |3>`` in ``S^z`` coordinates.

    A vector of ``S^z`` amplitudes ``c`` becomes ``W.conj() @ c`` in the
    measurement frame; a frame vector ``d`` becomes ``W.T @ d``.
    """
    return np.array(
        [[-1 / _R2, 0, 1 / _R2], [1 / _R2, 0, 1 / _R2], [0, 1, 0]], dtype=complex
    )


def to_sz(frame_coeffs):
    """Convert amplitudes on ``|1>, |2>, |3>`` to ``S^z`` amplitudes."""
    return frame_change().T @ np.asarray(frame_coeffs, dtype=complex)


def to_frame(sz_coeffs):
    return frame_change().conj() @ np.asarray(sz_coeffs, dtype=complex)


def m_matrices():
    """Bond matrices ``<alpha|M>`` for alpha in 1, 2, 3.

    ``|M> = X|1> - iY|2> + Z|3>``, so the map is ``{1: X, 2: -iY, 3: Z}``.
    Note ``-iY == XZ``.
    """
    return {1: X.copy(), 2: -1j * Y, 3: Z.copy()}


def rotation(axis, theta):
    """``exp(i theta S^axis)`` on spin 1, via the eigendecomposition of ``S^axis``.

    At ``theta = pi`` every eigenphase is exactly ``+-1``.
    """
    s = dict(zip(AXES, spin1_operators()))[axis]
    w, v = np.linalg.eigh(s)
    phases = np.exp(1j * theta * np.round(w))
    return (v * phases) @ v.conj().T


def total_spin_rotation(axis, theta):
    """``exp(i theta (S^axis (x) 1 + 1 (x) S^axis))`` on two spin-1 sites."""
    r = rotation(axis, theta)
    return np.kron(r, r)
