"""Exponentially weighted operator norms and decay bounds from fibers.

The norm of a kernel a with mass m is

    |a|_m = max( sup_row  sum_col vol * exp(m dist) |a| ,
                 sup_col  sum_row vol * exp(m dist) |a| ),

with the cell volume of the summed variable and the physical distance
between row and column sites (geodesic on the torus, Euclidean on the
infinite lattices).  It is submultiplicative under operator composition.

A kernel of known support radius can be bounded through its momentum
fibers.  Writing the inversion quadrature along the contour shifted by an
imaginary momentum eta picks up a factor exp(eta . d) on the offset-d
entry; choosing eta of size m against the direction of d therefore bounds
every entry by exp(-m |d|) times a sup of the shifted fiber over the real
quadrature grid.  Since the quadrature is exact, the resulting inequality
is a theorem, not a heuristic: summing it against exp(m' |d|) controls
|a|_{m'} by ``decay_constant(m - m') / vol_c`` times that sup.
"""

from __future__ import annotations

import numpy as np

from .lattice import distance_matrix
from .periodic_op import PeriodicKernel
from .periodization import (
    FiberFunction,
    ZKernel,
    ZKernelCF,
    ZKernelFC,
    _block_coords,
    _block_index,
    _block_phase_matrix,
    _quadrature_nodes,
    normalize_radii,
    window_offsets,
    zkernel,
)

__all__ = [
    "weighted_norm",
    "decay_constant",
    "fiber_decay_bound",
    "decay_norm_bound",
    "inverse_fiber_shifted",
]


def _torus_norm(kernel: PeriodicKernel, mass: float) -> float:
    fam = kernel.family
    weight = np.exp(mass * distance_matrix(fam.spec, "fine")) * np.abs(kernel.entries)
    rows = fam.vol_f * weight.sum(axis=1).max()
    cols = fam.vol_f * weight.sum(axis=0).max()
    return float(max(rows, cols))


def _z_norm(a: ZKernel, mass: float) -> float:
    spec = a.spec
    offsets = window_offsets(spec, a.radii)
    dist = np.linalg.norm(offsets * spec.spacings(), axis=1)
    weight = np.exp(mass * dist)
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    rows = (np.abs(a.entries) * weight).sum(axis=1).max()
    block = _block_coords(spec)
    slots = np.arange(len(offsets))
    cols = 0.0
    for v in block:
        src = _block_index(spec, v - offsets)  # row class of the pair (v - d, v)
        cols = max(cols, float((np.abs(a.entries[src, slots]) * weight).sum()))
    return float(vol_f * max(rows, cols))


def _asym_sums(spec, radii, entries, mass: float) -> tuple[float, float]:
    """(coarse-weighted row sup, fine-weighted column sup) shared by fc/cf."""
    eps = spec.spacings()
    ratios = spec.ratios()
    offsets = window_offsets(spec, radii)
    block = _block_coords(spec)
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    vol_c = vol_f * float(np.prod(ratios))
    # fine point w against coarse point at offset m: both in physical units
    coarse_sum = 0.0
    for wi, w in enumerate(block):
        d = (w - offsets * ratios) * eps
        coarse_sum = max(
            coarse_sum,
            float(vol_c * (np.abs(entries[wi]) * np.exp(mass * np.linalg.norm(d, axis=1))).sum()),
        )
    # all fine points against the coarse origin: u = w - L m carries entry (w, m)
    fine_sum = 0.0
    for wi, w in enumerate(block):
        u = (w - offsets * ratios) * eps
        fine_sum += float(
            vol_f * (np.abs(entries[wi]) * np.exp(mass * np.linalg.norm(u, axis=1))).sum()
        )
    return coarse_sum, fine_sum


def weighted_norm(kernel, mass: float) -> float:
    """Exponentially weighted norm, dispatching on the kernel kind."""
    mass = float(mass)
    if isinstance(kernel, PeriodicKernel):
        return _torus_norm(kernel, mass)
    if isinstance(kernel, ZKernel):
        return _z_norm(kernel, mass)
    if isinstance(kernel, (ZKernelFC, ZKernelCF)):
        coarse_sum, fine_sum = _asym_sums(
            kernel.spec, kernel.radii, np.asarray(kernel.entries), mass
        )
        return max(coarse_sum, fine_sum)
    raise TypeError(f"no weighted norm defined for {type(kernel).__name__}")


def decay_constant(gap: float, spacings) -> float:
    """vol * sum over the integer lattice of exp(-gap * |physical point|).

    The enumeration cutoff is chosen so the neglected tail is below 1e-15
    of the result.
    """
    gap = float(gap)
    if gap <= 0.0:
        raise ValueError(f"decay gap must be positive, got {gap}")
    eps = np.asarray(spacings, dtype=float).reshape(-1)
    if (eps <= 0).any():
        raise ValueError(f"spacings must be positive, got {spacings!r}")
    n = len(eps)
    step = gap * eps.min()
    # shell at sup-radius R has at most 2n(2R+1)^(n-1) points, each of
    # physical norm at least R * min(eps)
    radius = 1
    while 2 * n * (2 * radius + 1) ** (n - 1) * np.exp(-step * radius) > 1e-16 * (
        1.0 - np.exp(-step)
    ):
        radius += 1
    total = 0.0
    axis = np.arange(-radius, radius + 1)
    rest = np.stack(
        np.meshgrid(*([axis] * (n - 1)), indexing="ij"), axis=-1
    ).reshape(-1, n - 1) if n > 1 else np.zeros((1, 0), dtype=np.int64)
    rest_phys = rest * eps[1:]
    for j in axis:
        pts = np.concatenate(
            [np.full((len(rest), 1), j * eps[0]), rest_phys], axis=1
        )
        total += np.exp(-gap * np.linalg.norm(pts, axis=1)).sum()
    return float(np.prod(eps) * total)


def _shifted_sums(f: FiberFunction, radii, mass: float, grid_points):
    """Per-entry averages of |shifted fiber| and the plain shifted inversion.

    Returns (bound, value): both (n_block, n_window); ``value`` is the
    contour-shifted inversion result, ``bound`` its termwise absolute value
    with the exp(-mass |d|) decay factored in.
    """
    spec = f.spec
    radii = normalize_radii(spec, radii)
    offsets = window_offsets(spec, radii)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_c = (spec.eps_t * spec.l_t) * (spec.eps_x * spec.l_x) ** spec.dim
    ew = _block_phase_matrix(spec, block)
    vmap = np.stack([_block_index(spec, w + offsets) for w in block])
    if grid_points is None:
        grid = tuple(2 * r + 1 for r in radii)
    else:
        arr = np.asarray(grid_points, dtype=np.int64)
        grid = tuple(int(x) for x in (np.full(spec.n_axes, int(arr)) if arr.ndim == 0 else arr))
    nodes = _quadrature_nodes(spec, grid)

    d_phys = offsets * eps
    lengths = np.linalg.norm(d_phys, axis=1)
    bound = np.zeros((len(block), len(offsets)))
    value = np.zeros((len(block), len(offsets)), dtype=complex)
    for di, d in enumerate(d_phys):
        if lengths[di] > 0.0:
            eta = -mass * d / lengths[di]
        else:
            eta = np.zeros(spec.n_axes)
        col = vmap[:, di]
        acc_abs = np.zeros(len(block))
        acc = np.zeros(len(block), dtype=complex)
        for k in nodes:
            s = ew.T @ np.asarray(f.matrix_at(k + 1j * eta)) @ np.conj(ew)
            picked = s[np.arange(len(block)), col]
            acc_abs += np.abs(picked)
            acc += np.exp(-1j * (k + 1j * eta) @ d) * picked
        bound[:, di] = np.exp(-mass * lengths[di]) * acc_abs / (vol_c * len(nodes))
        value[:, di] = acc / (vol_c * len(nodes))
    return bound, value


def fiber_decay_bound(f: FiberFunction, radii, mass: float, *,
                      grid_points=None) -> np.ndarray:
    """Entrywise bound exp(-mass |d|) sup |shifted fiber| on the window.

    Every entry of the kernel recovered by ``inverse_fiber`` is bounded in
    absolute value by the returned array.
    """
    bound, _ = _shifted_sums(f, radii, float(mass), grid_points)
    return bound


def inverse_fiber_shifted(f: FiberFunction, radii, eta, *,
                          grid_points=None) -> ZKernel:
    """Invert the fiber transform along the contour shifted by i * eta.

    Analyticity and quasi-periodicity make the result independent of eta;
    comparing against the real-contour inversion is a quantitative check of
    both.
    """
    spec = f.spec
    radii = normalize_radii(spec, radii)
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (spec.n_axes,):
        raise ValueError(
            f"imaginary shift must have {spec.n_axes} components, got {eta.shape}"
        )
    offsets = window_offsets(spec, radii)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_c = (spec.eps_t * spec.l_t) * (spec.eps_x * spec.l_x) ** spec.dim
    ew = _block_phase_matrix(spec, block)
    vmap = np.stack([_block_index(spec, w + offsets) for w in block])
    if grid_points is None:
        grid = tuple(2 * r + 1 for r in radii)
    else:
        arr = np.asarray(grid_points, dtype=np.int64)
        grid = tuple(int(x) for x in (np.full(spec.n_axes, int(arr)) if arr.ndim == 0 else arr))
    nodes = _quadrature_nodes(spec, grid)
    acc = np.zeros((len(block), len(offsets)), dtype=complex)
    for k in nodes:
        kc = k + 1j * eta
        s = ew.T @ np.asarray(f.matrix_at(kc)) @ np.conj(ew)
        acc += np.exp(-1j * (offsets * eps) @ kc) * np.take_along_axis(s, vmap, axis=1)
    acc /= vol_c * len(nodes)
    return zkernel(spec, radii, acc)


def decay_norm_bound(f: FiberFunction, radii, mass: float, target_mass: float,
                     *, grid_points=None) -> float:
    """Bound on the weighted norm at ``target_mass`` of the kernel behind f.

    Combines the entrywise fiber bound at ``mass`` with the summed decay
    constant at the mass gap; requires mass > target_mass.
    """
    mass = float(mass)
    target_mass = float(target_mass)
    if mass <= target_mass:
        raise ValueError(
            f"need a positive mass gap, got mass={mass} <= target={target_mass}"
        )
    spec = f.spec
    radii = normalize_radii(spec, radii)
    bound, _ = _shifted_sums(f, radii, mass, grid_points)
    offsets = window_offsets(spec, radii)
    lengths = np.linalg.norm(offsets * spec.spacings(), axis=1)
    # peel the decay factor back off: envelope = sup of the averaged |fiber|
    envelope = float((bound * np.exp(mass * lengths)).max())
    return decay_constant(mass - target_mass, spec.spacings()) * envelope
