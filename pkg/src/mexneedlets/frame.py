"""Frame construction, analysis coefficients and the summation operator.

The frame element for scale j and cell k is, in spectral form,

    phi_{j,k}[l,q] = mu(E_{j,k})^{1/2} w_j(l) Y_{l,q}(x_{j,k}),

with w_j(l) the filter multiplier of the eigenvalue l(l+1) at scale a^j.
With this normalization the summation operator is
S F = sum_{j,k} <F, phi_{j,k}> phi_{j,k}, and all inner products are exact
spectral dot products in the band-limited space (no quadrature).
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .daubechies import eigen_daubechies_sum
from .errors import BandLimitError
from .fields import HarmonicField, require_nonzero
from .harmonics import degree_of_index, n_coeffs, real_sh_matrix, sphere_eigenvalue
from .partition import build_partition

ADEQUACY_EPS = 1e-6


def default_scale_window(filt, a, L_max, eps=ADEQUACY_EPS):
    """Smallest scale window [j_lo, j_hi] capturing the ladder sums.

    Chosen so that the windowed ladder sum retains a (1 - eps) fraction
    of the full sum at every eigenvalue carried by the band limit; the
    low-j edge is driven by lambda_{L_max}, the high-j edge by lambda_1.
    """
    lam_hi = sphere_eigenvalue(L_max)
    lam_lo = sphere_eigenvalue(1)

    def tail_edge(lam, direction):
        g = eigen_daubechies_sum(filt, a, lam)
        budget = 0.5 * eps * g
        floor = 1e-25 * g
        j_peak = int(round(-math.log(lam) / (2.0 * math.log(a))))
        js, terms = [], []
        j = j_peak
        while True:
            w = float(filt.multiplier(a ** j, lam))
            js.append(j)
            terms.append(w * w)
            j += direction
            if terms[-1] < floor and len(terms) > 2:
                break
            if abs(j) > 20000:
                raise RuntimeError("scale window search failed")
        # drop scales from the far end inward while the dropped mass fits
        dropped = 0.0
        for idx in range(len(terms) - 1, -1, -1):
            if dropped + terms[idx] > budget:
                return js[idx]
            dropped += terms[idx]
        return j_peak

    j_lo = tail_edge(lam_hi, -1)
    j_hi = tail_edge(lam_lo, +1)
    return j_lo, j_hi


class FrameSpec:
    """Filter + dilation + fineness + per-scale partitions + band limit."""

    def __init__(self, filt, a, b, L_max, partitions):
        self.filter = filt
        self.a = a
        self.b = b
        self.L_max = L_max
        self.partitions = dict(sorted(partitions.items()))
        self.j_min = min(self.partitions)
        self.j_max = max(self.partitions)
        self._degree_of_index = degree_of_index(L_max)
        self._weights = {}

    @classmethod
    def build(cls, filt, a, b, L_max, j_range=None, adequacy_eps=ADEQUACY_EPS):
        if a <= 1:
            raise ValueError("dilation a must be > 1")
        if L_max < 1:
            raise ValueError("band limit must be at least 1")
        if j_range is None:
            j_range = default_scale_window(filt, a, L_max, adequacy_eps)
        j_lo, j_hi = int(j_range[0]), int(j_range[1])
        if j_hi < j_lo:
            raise ValueError("empty scale range")
        partitions = {j: build_partition(j, a, b) for j in range(j_lo, j_hi + 1)}
        return cls(filt, a, b, L_max, partitions)

    @property
    def scales(self):
        return list(self.partitions)

    def weight_vector(self, j):
        """Multiplier w_j(l) for l = 0..L_max (w_j(0) = 0)."""
        if j not in self._weights:
            ls = np.arange(self.L_max + 1, dtype=float)
            w = self.filter.multiplier(self.a ** j, ls * (ls + 1.0))
            w[0] = 0.0
            self._weights[j] = w
        return self._weights[j]

    def coeff_weights(self, j):
        return self.weight_vector(j)[self._degree_of_index]

    def n_cells(self, j):
        return self.partitions[j].n_cells

    def band_adequacy_residual(self):
        """max_j |w_j(lambda_{L_max+1})|: response just beyond the band limit."""
        lam = sphere_eigenvalue(self.L_max + 1)
        return max(abs(float(self.filter.multiplier(self.a ** j, lam))) for j in self.scales)

    def total_cells(self):
        return sum(self.n_cells(j) for j in self.scales)


def _check_field(spec, field):
    # constants are allowed everywhere: the frame annihilates them exactly
    if field.L_max > spec.L_max and np.any(field.coeffs[n_coeffs(spec.L_max):] != 0.0):
        raise BandLimitError("field carries degrees beyond the frame band limit")
    if field.L_max < spec.L_max:
        return field.padded(spec.L_max)
    if field.L_max > spec.L_max:
        return HarmonicField(field.coeffs[: n_coeffs(spec.L_max)].copy())
    return field


def scale_values(spec, field, j):
    """G_j(x_{j,k}) = [f(a^{2j} Delta) F](x_{j,k}) at every cell center."""
    field = _check_field(spec, field)
    return spec.partitions[j].synthesis(spec.coeff_weights(j) * field.coeffs)


class FrameCoefficients:
    """Analysis coefficients <F, phi_{j,k}> stored per scale."""

    def __init__(self, per_scale):
        self.per_scale = per_scale

    def value(self, j, k):
        return float(self.per_scale[j][k])

    def scale_array(self, j):
        return self.per_scale[j]

    def total_energy(self):
        return float(sum(np.dot(v, v) for v in self.per_scale.values()))

    def items(self):
        return self.per_scale.items()


def analyze(spec, field):
    """All frame coefficients of a mean-zero band-limited field (exact)."""
    field = _check_field(spec, field)
    per_scale = {}
    for j in spec.scales:
        part = spec.partitions[j]
        values = part.synthesis(spec.coeff_weights(j) * field.coeffs)
        per_scale[j] = np.sqrt(part.measures()) * values
    return FrameCoefficients(per_scale)


def frame_element(spec, j, k):
    """phi_{j,k} as a band-limited field."""
    part = spec.partitions[j]
    center = part.center_of(k)
    ymat = real_sh_matrix(spec.L_max, center[None, :])[0]
    coeffs = math.sqrt(part.measure_of(k)) * spec.coeff_weights(j) * ymat
    return HarmonicField(coeffs)


def _iter_scale_terms(spec, field, scales=None, masks=None):
    """Yield (j, measures-masked, values) per scale; shared by the S forms."""
    field = _check_field(spec, field)
    use = spec.scales if scales is None else [j for j in spec.scales if j in set(scales)]
    for j in use:
        part = spec.partitions[j]
        values = part.synthesis(spec.coeff_weights(j) * field.coeffs)
        mu = part.measures()
        if masks is not None and j in masks:
            mask = masks[j]
            mu = np.where(mask, mu, 0.0)
        yield j, part, mu, values


def quadratic_form(spec, field, scales=None, masks=None):
    """<S F, F> = sum_{j,k} mu_k G_j(x_k)^2 over the selected index set."""
    total = 0.0
    for _, _, mu, values in _iter_scale_terms(spec, field, scales, masks):
        total += float(np.dot(mu, values * values))
    return total


def apply_summation(spec, field, scales=None, masks=None):
    """S F (or a restricted S_I F) in spectral form; always mean-zero."""
    out = np.zeros(n_coeffs(spec.L_max))
    for j, part, mu, values in _iter_scale_terms(spec, field, scales, masks):
        out += spec.coeff_weights(j) * part.adjoint(mu * values, spec.L_max)
    return HarmonicField(out)


def rayleigh_quotient(spec, field):
    """<S F, F> / <F, F> for a nonzero mean-zero field."""
    require_nonzero(field)
    if not field.mean_zero:
        raise ValueError("Rayleigh quotient is defined on mean-zero fields")
    return quadratic_form(spec, field) / field.norm() ** 2


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    ratio: float
    trials: int
    seed: int

    def as_dict(self):
        return {"A_emp": self.lower, "B_emp": self.upper, "ratio": self.ratio,
                "trials": self.trials, "seed": self.seed}


def empirical_frame_bounds(spec, trials, seed=0):
    """Extremes of the Rayleigh quotient over seeded random unit fields."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    lo, hi = math.inf, -math.inf
    for _ in range(trials):
        field = HarmonicField.random_mean_zero(spec.L_max, rng)
        q = rayleigh_quotient(spec, field)
        lo = min(lo, q)
        hi = max(hi, q)
    return FrameBounds(lower=lo, upper=hi, ratio=hi / lo if lo > 0 else math.inf,
                       trials=trials, seed=seed)


def spectral_multiplier_energy(spec, field, j):
    """Exact ||f(a^{2j} Delta) F||^2 = sum_{l,q} w_j(l)^2 c_{l,q}^2."""
    field = _check_field(spec, field)
    w = spec.coeff_weights(j)
    return float(np.sum((w * field.coeffs) ** 2))


def coefficients_to_csv(spec, coeffs, path):
    """Export analysis coefficients with cell metadata, scales ascending."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "k", "center_x", "center_y", "center_z",
                         "measure", "coefficient"])
        for j, values in coeffs.items():
            part = spec.partitions[j]
            mu = part.measures()
            centers = part.center_points()
            for k in range(part.n_cells):
                c = centers[k]
                writer.writerow([j, k, repr(float(c[0])), repr(float(c[1])),
                                 repr(float(c[2])), repr(float(mu[k])),
                                 repr(float(values[k]))])
