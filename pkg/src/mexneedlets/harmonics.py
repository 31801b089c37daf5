"""Sphere eigendata, Legendre polynomials and real spherical harmonics.

The real orthonormal basis Y_{l,q} (0 <= l, -l <= q <= l) is normalized
against the raw area measure on S^2, so that

    integral_{S^2} Y_{l,q} Y_{l',q'} dmu = delta_{ll'} delta_{qq'}

and the addition theorem reads

    sum_q Y_{l,q}(x) Y_{l,q}(y) = (2l+1)/(4 pi) P_l(x . y).

Coefficient vectors are flat arrays of length (L+1)^2 with layout
index = l^2 + l + q.
"""

import math

import numpy as np


def sphere_eigenvalue(l):
    """Laplace-Beltrami eigenvalue l(l+1) on S^2."""
    if l < 0 or int(l) != l:
        raise ValueError("degree l must be a nonnegative integer")
    return float(l * (l + 1))


def multiplicity(l):
    """Dimension 2l+1 of the degree-l spherical harmonic space."""
    if l < 0 or int(l) != l:
        raise ValueError("degree l must be a nonnegative integer")
    return 2 * l + 1


def legendre_eval(l, x):
    """P_l(x) by the stable three-term recurrence; x scalar or array in [-1, 1]."""
    if l < 0 or int(l) != l:
        raise ValueError("degree l must be a nonnegative integer")
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + 1e-12):
        raise ValueError("argument must lie in [-1, 1]")
    p_prev = np.ones(x.shape)
    if l == 0:
        return float(p_prev) if scalar else p_prev
    p_cur = x.copy()
    for n in range(1, l):
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    return float(p_cur) if scalar else p_cur


def legendre_table(L, x):
    """All P_l(x) for 0 <= l <= L; shape (L+1,) + x.shape."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((L + 1,) + x.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = x
    for n in range(1, L):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def n_coeffs(L):
    return (L + 1) * (L + 1)


def sh_index(l, q):
    """Flat index of the (l, q) coefficient."""
    if abs(q) > l:
        raise ValueError("order |q| must not exceed degree l")
    return l * l + l + q


def degree_of_index(L):
    """Array mapping flat coefficient index -> degree l."""
    ls = np.empty(n_coeffs(L), dtype=int)
    for l in range(L + 1):
        ls[l * l : (l + 1) * (l + 1)] = l
    return ls


def _lm(l, m):
    # packed index over 0 <= m <= l
    return l * (l + 1) // 2 + m


def norm_assoc_legendre(L, cos_theta):
    """Table of 4pi-normalized associated Legendre values.

    Returns shape (npts, (L+1)(L+2)/2) with column _lm(l, m); the values
    are N_{l,m} P_l^m(cos theta) such that the real harmonics below are
    orthonormal.  Standard increasing-degree recurrence, stable for the
    desk-scale degrees used here.
    """
    ct = np.atleast_1d(np.asarray(cos_theta, dtype=float))
    st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, 1.0))
    npts = ct.shape[0]
    table = np.zeros((npts, (L + 1) * (L + 2) // 2))
    table[:, 0] = math.sqrt(1.0 / (4.0 * math.pi))
    for m in range(1, L + 1):
        table[:, _lm(m, m)] = table[:, _lm(m - 1, m - 1)] * st * math.sqrt((2 * m + 1) / (2.0 * m))
    for m in range(0, L):
        table[:, _lm(m + 1, m)] = math.sqrt(2 * m + 3.0) * ct * table[:, _lm(m, m)]
    for m in range(0, L + 1):
        for l in range(m + 2, L + 1):
            alm = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            blm = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            table[:, _lm(l, m)] = alm * (ct * table[:, _lm(l - 1, m)] - blm * table[:, _lm(l - 2, m)])
    return table


def real_sh_matrix(L, xyz):
    """Matrix of Y_{l,q}(x_i): shape (npts, (L+1)^2) for unit vectors xyz."""
    xyz = np.atleast_2d(np.asarray(xyz, dtype=float))
    ct = np.clip(xyz[:, 2], -1.0, 1.0)
    phi = np.arctan2(xyz[:, 1], xyz[:, 0])
    plm = norm_assoc_legendre(L, ct)
    out = np.zeros((xyz.shape[0], n_coeffs(L)))
    sqrt2 = math.sqrt(2.0)
    for l in range(L + 1):
        out[:, sh_index(l, 0)] = plm[:, _lm(l, 0)]
        for m in range(1, l + 1):
            base = sqrt2 * plm[:, _lm(l, m)]
            out[:, sh_index(l, m)] = base * np.cos(m * phi)
            out[:, sh_index(l, -m)] = base * np.sin(m * phi)
    return out


def sph_to_xyz(theta, phi):
    """Unit vectors from colatitude/longitude arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def geodesic_distance(x, y):
    """Great-circle distance between unit vectors (broadcasting on the left)."""
    dot = np.clip(np.sum(np.asarray(x) * np.asarray(y), axis=-1), -1.0, 1.0)
    return np.arccos(dot)
