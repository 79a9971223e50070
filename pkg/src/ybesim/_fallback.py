"""Numpy implementation of the grid kernel, used when the compiled one is absent."""
import numpy as np


def _A(t):
    m = np.zeros(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = np.exp(-1j * t)
    m[..., 1, 1] = np.exp(1j * t)
    return m


def _B(t):
    c, s = np.cos(t), np.sin(t)
    m = np.empty(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = c
    m[..., 1, 1] = c
    m[..., 0, 1] = -1j * s
    m[..., 1, 0] = -1j * s
    return m


def fidelity_grid(theta1, theta2, theta3, probes, num_threads=0):
    """Return ``F[i2, i1, k] = |<p_k| lhs^dagger rhs |p_k>|`` on the outer grid.

    ``num_threads`` is accepted for signature parity and ignored.
    """
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    probes = np.asarray(probes, dtype=complex)
    a1, b1 = _A(t1)[None], _B(t1)[None]
    a2, b2 = _A(t2)[:, None], _B(t2)[:, None]
    t3 = np.asarray(float(theta3))
    a3, b3 = _A(t3), _B(t3)
    left = a1 @ b2 @ a3
    right = b3 @ a2 @ b1
    u = np.conj(np.swapaxes(left, -1, -2)) @ right
    # <p|u|p> for every probe: (n2, n1, P)
    up = np.einsum("...ij,kj->...ki", u, probes)
    return np.abs(np.einsum("ki,...ki->...k", probes.conj(), up))
