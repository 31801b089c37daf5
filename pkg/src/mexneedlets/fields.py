"""Band-limited fields on the sphere in the real orthonormal basis."""

import csv

import numpy as np

from .errors import ZeroFieldError
from .harmonics import n_coeffs, real_sh_matrix, sh_index


class HarmonicField:
    """Mean-zero-capable band-limited function stored as Y_{l,q} coefficients."""

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        L = int(round(np.sqrt(coeffs.size))) - 1
        if n_coeffs(L) != coeffs.size:
            raise ValueError("coefficient vector length must be (L+1)^2")
        self.coeffs = coeffs
        self.L_max = L

    @classmethod
    def zeros(cls, L):
        return cls(np.zeros(n_coeffs(L)))

    @classmethod
    def single_harmonic(cls, l, q, L=None):
        L = l if L is None else L
        field = cls.zeros(L)
        field.coeffs[sh_index(l, q)] = 1.0
        return field

    @classmethod
    def random_mean_zero(cls, L, rng, normalize=True):
        """I.i.d. standard normal coefficients with the constant mode zeroed."""
        coeffs = rng.standard_normal(n_coeffs(L))
        coeffs[0] = 0.0
        if normalize:
            coeffs /= np.linalg.norm(coeffs)
        return cls(coeffs)

    def coeff(self, l, q):
        return float(self.coeffs[sh_index(l, q)])

    @property
    def mean_zero(self):
        return self.coeffs[0] == 0.0

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def copy(self):
        return HarmonicField(self.coeffs.copy())

    def padded(self, L):
        """Same field viewed at a larger band limit."""
        if L < self.L_max:
            raise ValueError("cannot pad to a smaller band limit")
        out = np.zeros(n_coeffs(L))
        out[: self.coeffs.size] = self.coeffs
        return HarmonicField(out)

    def __repr__(self):
        return "HarmonicField(L_max=%d, norm=%.6g)" % (self.L_max, self.norm())


def evaluate_field(field, xyz):
    """Pointwise values of the field at unit vectors xyz (scalar for one point)."""
    xyz = np.asarray(xyz, dtype=float)
    single = xyz.ndim == 1
    values = real_sh_matrix(field.L_max, np.atleast_2d(xyz)) @ field.coeffs
    return float(values[0]) if single else values


def require_nonzero(field):
    if field.norm() == 0.0:
        raise ZeroFieldError("field is identically zero")


def field_to_csv(field, path):
    """Write the coefficient table as 'l,q,coeff' rows, l then q ascending."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "q", "coeff"])
        for l in range(field.L_max + 1):
            for q in range(-l, l + 1):
                writer.writerow([l, q, repr(field.coeff(l, q))])
