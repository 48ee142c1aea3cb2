"""Block averaging between the fine and coarse lattices.

The restriction operator sends a fine field to the coarse field

    (R phi)(x) = sum_z q(z) phi(L x + z),

where the weight profile q is a tensor product of per-axis windows summing
to one.  The naive profile averages the block of l sites centred on each
coarse point (l odd); convolving it with itself sharpens the momentum
cutoff, which is the smooth family.  Prolongation is the adjoint of
restriction under the volume-weighted inner products, so

    (P psi)(u) = (vol_c / vol_f) sum_x q(u - L x) psi(x).

Both operators are thin wrappers over the asymmetric kernel machinery; the
composite P R is a coarse-invariant kernel on the fine lattice whose
momentum fibers are rank one:

    fiber(k)[l, l'] = qhat(-(k + l)) qhat(k + l'),

with qhat the momentum response of the profile.  R P acts on the coarse
lattice by a translation-invariant stencil, the identity for the naive
profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve

from .lattice import FieldVector, LatticeFamily, LatticeSpec
from .periodic_op import BlochFiber
from .periodization import (
    ZKernel,
    ZKernelCF,
    ZKernelFC,
    apply_cf,
    apply_fc,
    window_offsets,
    zkernel,
    zkernel_cf,
    zkernel_fc,
)

__all__ = [
    "Profile",
    "naive_profile",
    "smooth_profile",
    "dirichlet_average",
    "profile_hat",
    "restriction_kernel",
    "prolongation_kernel",
    "restrict_field",
    "prolong_field",
    "restrict_prolong_profile",
    "prolong_restrict_kernel",
    "prolong_restrict_fiber",
]


@dataclass(frozen=True)
class Profile:
    """Tensor-product averaging weights, one symmetric window per axis.

    ``axis_weights[a]`` has length ``2 * radii[a] + 1``, is real, and sums
    to one; the full weight at offset z is the product over axes.
    """

    spec: LatticeSpec
    radii: tuple[int, ...]
    axis_weights: tuple[np.ndarray, ...]

    def window(self) -> np.ndarray:
        """Flattened row-major tensor of weights over the support window."""
        grid = self.axis_weights[0]
        for w in self.axis_weights[1:]:
            grid = np.multiply.outer(grid, w)
        return grid.reshape(-1)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr, dtype=float)
    out.flags.writeable = False
    return out


def naive_profile(spec: LatticeSpec) -> Profile:
    """Flat average over the block of l sites centred on each coarse point."""
    weights = []
    radii = []
    for axis, l in enumerate(spec.ratios()):
        l = int(l)
        if l % 2 == 0:
            name = "time" if axis == 0 else f"space {axis - 1}"
            raise ValueError(
                f"centred block average needs an odd block size, got {l} "
                f"along the {name} axis"
            )
        radii.append((l - 1) // 2)
        weights.append(_frozen(np.full(l, 1.0 / l)))
    return Profile(spec, tuple(radii), tuple(weights))


def smooth_profile(spec: LatticeSpec, width: int) -> Profile:
    """The naive profile convolved with itself ``width`` times."""
    if int(width) < 1:
        raise ValueError(f"convolution width must be at least 1, got {width}")
    base = naive_profile(spec)
    weights = []
    radii = []
    for r, w in zip(base.radii, base.axis_weights):
        acc = np.asarray(w)
        for _ in range(int(width) - 1):
            acc = convolve(acc, np.asarray(w), mode="full", method="direct")
        weights.append(_frozen(acc))
        radii.append(int(width) * r)
    return Profile(spec, tuple(radii), tuple(weights))


def dirichlet_average(points: int, theta) -> np.ndarray:
    """Momentum response of a flat odd-width average: the cosine sum
    (1 + 2 sum_j cos(j theta)) / points."""
    points = int(points)
    if points < 1 or points % 2 == 0:
        raise ValueError(f"window must have odd positive width, got {points}")
    theta = np.asarray(theta, dtype=float)
    half = (points - 1) // 2
    acc = np.ones_like(theta)
    for j in range(1, half + 1):
        acc = acc + 2.0 * np.cos(j * theta)
    return acc / points


def profile_hat(profile: Profile, k) -> complex:
    """Momentum response sum_z q(z) exp(i k.z) at possibly complex k."""
    spec = profile.spec
    k = np.asarray(k)
    if k.shape != (spec.n_axes,):
        raise ValueError(
            f"momentum must have {spec.n_axes} components, got shape {k.shape}"
        )
    eps = spec.spacings()
    out = 1.0 + 0.0j
    for axis, (r, w) in enumerate(zip(profile.radii, profile.axis_weights)):
        z = np.arange(-r, r + 1) * eps[axis]
        out = out * np.sum(w * np.exp(1j * k[axis] * z))
    return complex(out)


def _coarse_radii(profile: Profile) -> tuple[int, ...]:
    ratios = profile.spec.ratios()
    return tuple(
        (r + int(l) - 1) // int(l) for r, l in zip(profile.radii, ratios)
    )


def _asymmetric_entries(profile: Profile) -> tuple[tuple[int, ...], np.ndarray]:
    """Window table q(w - L m) / vol_f over block rows and coarse offsets."""
    spec = profile.spec
    radii_c = _coarse_radii(profile)
    ratios = spec.ratios()
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    block = np.indices(tuple(int(r) for r in ratios)).reshape(spec.n_axes, -1).T
    offsets = window_offsets(spec, radii_c)
    entries = np.zeros((len(block), len(offsets)), dtype=complex)
    for wi, w in enumerate(block):
        for mi, m in enumerate(offsets):
            z = w - m * ratios
            if (np.abs(z) <= profile.radii).all():
                val = 1.0
                for axis, weights in enumerate(profile.axis_weights):
                    val *= weights[int(z[axis]) + profile.radii[axis]]
                entries[wi, mi] = val / vol_f
    return radii_c, entries


def restriction_kernel(profile: Profile) -> ZKernelCF:
    """Coarse-from-fine kernel of the block average."""
    radii_c, entries = _asymmetric_entries(profile)
    return zkernel_cf(profile.spec, radii_c, entries)


def prolongation_kernel(profile: Profile) -> ZKernelFC:
    """Fine-from-coarse kernel of the adjoint of the block average."""
    radii_c, entries = _asymmetric_entries(profile)
    return zkernel_fc(profile.spec, radii_c, entries)


def restrict_field(family: LatticeFamily, profile: Profile,
                   phi: FieldVector) -> FieldVector:
    return apply_cf(family, restriction_kernel(profile), phi)


def prolong_field(family: LatticeFamily, profile: Profile,
                  psi: FieldVector) -> FieldVector:
    return apply_fc(family, prolongation_kernel(profile), psi)


def restrict_prolong_profile(profile: Profile) -> tuple[tuple[int, ...], tuple[np.ndarray, ...]]:
    """Stencil of restrict-then-prolong on the coarse lattice.

    Returns per-axis radii and weight arrays; the naive profile gives the
    identity stencil because distinct blocks do not overlap.
    """
    spec = profile.spec
    ratios = spec.ratios()
    radii_out = []
    weights_out = []
    for axis, (r, w) in enumerate(zip(profile.radii, profile.axis_weights)):
        l = int(ratios[axis])
        m = (2 * r) // l
        vals = np.zeros(2 * m + 1)
        z = np.arange(-r, r + 1)
        for y in range(-m, m + 1):
            zz = z - l * y
            mask = np.abs(zz) <= r
            vals[y + m] = l * np.sum(w[mask] * w[zz[mask] + r])
        radii_out.append(m)
        weights_out.append(_frozen(vals))
    return tuple(radii_out), tuple(weights_out)


def prolong_restrict_kernel(profile: Profile) -> ZKernel:
    """Coarse-invariant fine-lattice kernel of prolong-then-restrict."""
    spec = profile.spec
    ratios = spec.ratios()
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    vol_c = vol_f * float(np.prod(ratios))
    radii = tuple(2 * r for r in profile.radii)
    # per-axis pair sums g[w, d] = sum_x q(w - l x) q(w + d - l x)
    tables = []
    for axis, (r, w) in enumerate(zip(profile.radii, profile.axis_weights)):
        l = int(ratios[axis])
        g = np.zeros((l, 4 * r + 1))
        for wa in range(l):
            for d in range(-2 * r, 2 * r + 1):
                lo = -((r - wa) // l + 2)
                hi = (r + wa) // l + 2
                total = 0.0
                for x in range(lo, hi + 1):
                    z0 = wa - l * x
                    z1 = wa + d - l * x
                    if abs(z0) <= r and abs(z1) <= r:
                        total += w[z0 + r] * w[z1 + r]
                g[wa, d + 2 * r] = total
        tables.append(g)
    block = np.indices(tuple(int(r) for r in ratios)).reshape(spec.n_axes, -1).T
    offsets = window_offsets(spec, radii)
    entries = np.zeros((len(block), len(offsets)), dtype=complex)
    pref = vol_c / vol_f**2
    for wi, wc in enumerate(block):
        for di, d in enumerate(offsets):
            val = pref
            for axis in range(spec.n_axes):
                val *= tables[axis][int(wc[axis]), int(d[axis]) + 2 * profile.radii[axis]]
            entries[wi, di] = val
    return zkernel(spec, radii, entries)


def prolong_restrict_fiber(profile: Profile, k) -> BlochFiber:
    """Rank-one momentum fiber of prolong-then-restrict at momentum k."""
    spec = profile.spec
    k = np.asarray(k, dtype=complex)
    ratios = spec.ratios().astype(float)
    eps = spec.spacings()
    bhat = np.indices(tuple(int(r) for r in ratios)).reshape(spec.n_axes, -1).T
    ells = 2.0 * np.pi * bhat / (eps * ratios)
    left = np.array([profile_hat(profile, -(k + ell)) for ell in ells])
    right = np.array([profile_hat(profile, k + ell) for ell in ells])
    entries = np.outer(left, right)
    entries.flags.writeable = False
    return BlochFiber(k, entries, None)
