"""Infinite-lattice kernels, their periodizations, and momentum fibers.

Kernels a(u, u') on the infinite fine lattice that are invariant under the
coarse sublattice and supported in a window |u' - u| <= radius are stored as
one finitely supported row per block representative.  Wrapping the second
argument around the torus gives the periodized kernel

    A([u], [u']) = sum_z a(u, u' + z),    z over the torus period lattice,

which is exact (one term per pair) as long as the window fits inside a
single period.  The momentum fiber of such a kernel,

    fiber(k)[l, l'] = vol_f / n_block * sum_{w in block, u' in lattice}
                      exp(-i l.w) a(w, u') exp(i l'.u') exp(-i k.(w - u')),

is an entire function of k (the sums are finite) and quasi-periodic under
the dual-block reciprocal lattice: fiber(k + p) equals fiber(k) with both
dual-block indices shifted by p.  ``inverse_fiber`` undoes the transform by
quadrature over the dual-coarse Brillouin zone; the integrand is a
trigonometric polynomial, so a uniform grid of ``2 * radius + 1`` nodes per
axis is always exact.

Asymmetric kernels map between the coarse and fine lattices: b(u, x) rows
are fine, columns coarse ("fc"); c(x, u) the reverse ("cf").  Both carry a
single dual-block index in momentum space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lattice import FieldVector, LatticeFamily, LatticeSpec, extents, steps
from .periodic_op import BlochFiber, PeriodicKernel, periodic_kernel

__all__ = [
    "ZKernel",
    "ZKernelFC",
    "ZKernelCF",
    "ZField",
    "FiberFunction",
    "window_offsets",
    "window_shape",
    "zkernel",
    "zkernel_fc",
    "zkernel_cf",
    "identity_zkernel",
    "shift_zkernel",
    "translation_invariant_zkernel",
    "periodize",
    "compose_z",
    "transpose_z",
    "transpose_fc",
    "transpose_cf",
    "fiber_hat",
    "fiber_function",
    "fiber_hat_fc",
    "fiber_hat_cf",
    "inverse_fiber",
    "apply_fc",
    "apply_cf",
    "zfield",
    "apply_z",
    "z_inner",
    "exact_grid_sizes",
]

QUASI_PERIOD_RTOL = 1e-10

AXIS_NAMES = {0: "time"}


def _axis_name(axis: int) -> str:
    return AXIS_NAMES.get(axis, f"space {axis - 1}")


def normalize_radii(spec: LatticeSpec, radii) -> tuple[int, ...]:
    """Broadcast a scalar support radius to one value per axis."""
    arr = np.asarray(radii, dtype=np.int64)
    if arr.ndim == 0:
        arr = np.full(spec.n_axes, int(arr), dtype=np.int64)
    if arr.shape != (spec.n_axes,) or (arr < 0).any():
        raise ValueError(
            f"support radii must be {spec.n_axes} nonnegative integers, got {radii!r}"
        )
    return tuple(int(r) for r in arr)


def window_shape(spec: LatticeSpec, radii) -> tuple[int, ...]:
    return tuple(2 * r + 1 for r in normalize_radii(spec, radii))


def window_offsets(spec: LatticeSpec, radii) -> np.ndarray:
    """Integer offsets of the support window, shape (prod(2r+1), 1+dim)."""
    radii = normalize_radii(spec, radii)
    grids = np.indices(window_shape(spec, radii)).reshape(spec.n_axes, -1).T
    return grids.astype(np.int64) - np.asarray(radii, dtype=np.int64)


def _block_coords(spec: LatticeSpec) -> np.ndarray:
    grids = np.indices(tuple(int(r) for r in spec.ratios()))
    return grids.reshape(spec.n_axes, -1).T.astype(np.int64)


def _block_index(spec: LatticeSpec, coords: np.ndarray) -> np.ndarray:
    ratios = spec.ratios()
    arr = np.asarray(coords, dtype=np.int64) % ratios
    return np.ravel_multi_index(tuple(arr.T), tuple(int(r) for r in ratios))


def _n_block(spec: LatticeSpec) -> int:
    return int(np.prod(spec.ratios()))


@dataclass(frozen=True)
class ZKernel:
    """Coarse-invariant kernel on the infinite fine lattice.

    ``entries[w, d]`` holds a(w, w + offset(d)) with w over block
    representatives in canonical order and offsets over the window, flattened
    row-major; the kernel value anywhere follows by coarse invariance.
    """

    spec: LatticeSpec
    radii: tuple[int, ...]
    entries: np.ndarray  # (n_block, prod(2r+1)) complex


@dataclass(frozen=True)
class ZKernelFC:
    """Kernel b(u, x), fine rows and coarse columns, coarse-invariant.

    ``entries[w, m]`` holds b(w, x) at the coarse point x with coarse-step
    offset m over the window.
    """

    spec: LatticeSpec
    radii: tuple[int, ...]
    entries: np.ndarray


@dataclass(frozen=True)
class ZKernelCF:
    """Kernel c(x, u), coarse rows and fine columns, coarse-invariant.

    ``entries[w, m]`` holds c(x, w) at the coarse point x with coarse-step
    offset m over the window.
    """

    spec: LatticeSpec
    radii: tuple[int, ...]
    entries: np.ndarray


@dataclass(frozen=True)
class FiberFunction:
    """A momentum-fiber evaluator k -> dual-block matrix.

    Carries the lattice geometry so consumers can probe the quasi-periodicity
    that any legitimate fiber function must satisfy.
    """

    spec: LatticeSpec
    matrix_at: Callable[[np.ndarray], np.ndarray]


def _wrap_entries(spec: LatticeSpec, radii, entries) -> tuple[tuple[int, ...], np.ndarray]:
    radii = normalize_radii(spec, radii)
    n_window = int(np.prod(window_shape(spec, radii)))
    arr = np.array(entries, dtype=complex).reshape(_n_block(spec), n_window)
    arr.flags.writeable = False
    return radii, arr


def zkernel(spec: LatticeSpec, radii, entries) -> ZKernel:
    radii, arr = _wrap_entries(spec, radii, entries)
    return ZKernel(spec, radii, arr)


def zkernel_fc(spec: LatticeSpec, radii, entries) -> ZKernelFC:
    radii, arr = _wrap_entries(spec, radii, entries)
    return ZKernelFC(spec, radii, arr)


def zkernel_cf(spec: LatticeSpec, radii, entries) -> ZKernelCF:
    radii, arr = _wrap_entries(spec, radii, entries)
    return ZKernelCF(spec, radii, arr)


def identity_zkernel(spec: LatticeSpec) -> ZKernel:
    """Kernel of the identity operator: (1/vol_f) at zero offset."""
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    entries = np.zeros((_n_block(spec), 1), dtype=complex)
    entries[:, 0] = 1.0 / vol_f
    return zkernel(spec, 0, entries)


def shift_zkernel(spec: LatticeSpec, shift) -> ZKernel:
    """Kernel of translation by a fixed fine-lattice vector."""
    shift = np.asarray(shift, dtype=np.int64)
    radii = tuple(int(abs(s)) for s in shift)
    offsets = window_offsets(spec, radii)
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    entries = np.zeros((_n_block(spec), len(offsets)), dtype=complex)
    entries[:, int(np.flatnonzero((offsets == shift).all(axis=1))[0])] = 1.0 / vol_f
    return zkernel(spec, radii, entries)


def translation_invariant_zkernel(spec: LatticeSpec, radii, profile) -> ZKernel:
    """Kernel a(u, u') = alpha(u' - u) from a window of profile values."""
    radii = normalize_radii(spec, radii)
    row = np.asarray(profile, dtype=complex).reshape(-1)
    entries = np.tile(row, (_n_block(spec), 1))
    return zkernel(spec, radii, entries)


# ---------------------------------------------------------------------------
# periodization and algebra
# ---------------------------------------------------------------------------


def _check_window_fits(spec: LatticeSpec, radii, torus_extents) -> None:
    for axis, (r, ext) in enumerate(zip(radii, torus_extents)):
        if 2 * r + 1 > ext:
            raise ValueError(
                f"support window wraps onto itself along the {_axis_name(axis)} "
                f"axis: width {2 * r + 1} exceeds torus extent {int(ext)}"
            )


def periodize(a: ZKernel, family: LatticeFamily) -> PeriodicKernel:
    """Wrap an infinite-lattice kernel around the torus.

    Exact because the window fits inside one period, so at most one image of
    each entry lands on any torus pair.
    """
    spec = a.spec
    if family.spec != spec:
        raise ValueError("kernel and family carry different lattice specs")
    _check_window_fits(spec, a.radii, extents(spec, "fine"))
    offsets = window_offsets(spec, a.radii)
    block = _block_coords(spec)
    entries = np.zeros((family.n_fine, family.n_fine), dtype=complex)
    coarse_fine = family.coords("coarse") * spec.ratios()
    for w_idx, w in enumerate(block):
        for x in coarse_fine:
            row = family.index("fine", w + x)
            cols = family.indices("fine", w + x + offsets)
            entries[row, cols] = a.entries[w_idx]
    return periodic_kernel(family, entries)


def compose_z(a: ZKernel, b: ZKernel) -> ZKernel:
    """Operator product vol_f * sum_u'' a(u, u'') b(u'', u')."""
    spec = a.spec
    if b.spec != spec:
        raise ValueError("kernels carry different lattice specs")
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    radii = tuple(ra + rb for ra, rb in zip(a.radii, b.radii))
    shape_c = window_shape(spec, radii)
    shape_b = window_shape(spec, b.radii)
    block = _block_coords(spec)
    offs_a = window_offsets(spec, a.radii)
    n_block = _n_block(spec)
    out = np.zeros((n_block,) + shape_c, dtype=complex)
    b_grid = b.entries.reshape((n_block,) + shape_b)
    for w_idx, w in enumerate(block):
        mids = _block_index(spec, w + offs_a)
        for a_val, d_mid, mid_idx in zip(a.entries[w_idx], offs_a, mids):
            if a_val == 0.0:
                continue
            # b row at the block class of w + d_mid, shifted by d_mid
            corner = tuple(
                slice(rc + dm - rb, rc + dm + rb + 1)
                for rc, dm, rb in zip(radii, d_mid, b.radii)
            )
            out[w_idx][corner] += vol_f * a_val * b_grid[mid_idx]
    return zkernel(spec, radii, out.reshape(n_block, -1))


def transpose_z(a: ZKernel) -> ZKernel:
    """Kernel of the transposed operator, a*(u, u') = a(u', u)."""
    spec = a.spec
    offsets = window_offsets(spec, a.radii)
    block = _block_coords(spec)
    neg = np.asarray(
        [int(np.flatnonzero((offsets == -d).all(axis=1))[0]) for d in offsets]
    )
    out = np.empty_like(np.asarray(a.entries))
    for w_idx, w in enumerate(block):
        rows = _block_index(spec, w + offsets)  # class of u' = w + d
        out[w_idx] = a.entries[rows, neg]
    return zkernel(spec, a.radii, out)


def transpose_fc(b: ZKernelFC) -> ZKernelCF:
    """b*(x, u) = b(u, x); the stored window is reinterpreted in place."""
    return zkernel_cf(b.spec, b.radii, np.asarray(b.entries))


def transpose_cf(c: ZKernelCF) -> ZKernelFC:
    """c*(u, x) = c(x, u); the stored window is reinterpreted in place."""
    return zkernel_fc(c.spec, c.radii, np.asarray(c.entries))


# ---------------------------------------------------------------------------
# momentum fibers
# ---------------------------------------------------------------------------


def _block_phase_matrix(spec: LatticeSpec, direct_coords: np.ndarray) -> np.ndarray:
    """exp(i l.v): dual-block momenta as rows, fine-step coords as columns."""
    ratios = spec.ratios().astype(float)
    bhat = _block_coords(spec)
    t = (bhat / ratios) @ np.asarray(direct_coords, dtype=np.int64).T
    return np.exp(2j * np.pi * t)


def _momentum(spec: LatticeSpec, k) -> np.ndarray:
    arr = np.asarray(k)
    if arr.shape != (spec.n_axes,):
        raise ValueError(
            f"momentum must have {spec.n_axes} components, got shape {arr.shape}"
        )
    return arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)


def fiber_hat(a: ZKernel, k) -> BlochFiber:
    """Momentum fiber of an infinite-lattice kernel at (possibly complex) k."""
    spec = a.spec
    k = _momentum(spec, k)
    offsets = window_offsets(spec, a.radii)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    ekd = np.exp(1j * (offsets * eps) @ k)  # exp(i k.d)
    eld = _block_phase_matrix(spec, offsets)  # exp(i l.d)
    ew = _block_phase_matrix(spec, block)  # exp(i l.w)
    g = a.entries @ (ekd[None, :] * eld).T  # (w, l')
    entries = (vol_f / _n_block(spec)) * (np.conj(ew) @ (ew.T * g))
    entries.flags.writeable = False
    return BlochFiber(k, entries, None)


def fiber_function(a: ZKernel) -> FiberFunction:
    """Wrap a kernel's fiber transform as an evaluator."""
    return FiberFunction(a.spec, lambda k: fiber_hat(a, k).entries)


def fiber_hat_fc(b: ZKernelFC, k) -> np.ndarray:
    """Dual-block column vector of a fine-from-coarse kernel at momentum k."""
    spec = b.spec
    k = _momentum(spec, k)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    coarse_off = window_offsets(spec, b.radii) * spec.ratios()
    g = b.entries @ np.exp(1j * (coarse_off * eps) @ k)  # sum over x, exp(i k.x)
    ekw = np.exp(-1j * (block * eps) @ k)  # exp(-i k.w)
    ew = _block_phase_matrix(spec, block)
    return vol_f * (np.conj(ew) @ (ekw * g))


def fiber_hat_cf(c: ZKernelCF, k) -> np.ndarray:
    """Dual-block row vector of a coarse-from-fine kernel at momentum k."""
    spec = c.spec
    k = _momentum(spec, k)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    coarse_off = window_offsets(spec, c.radii) * spec.ratios()
    g = c.entries @ np.exp(-1j * (coarse_off * eps) @ k)  # sum over x, exp(-i k.x)
    ekw = np.exp(1j * (block * eps) @ k)  # exp(i k.w)
    ew = _block_phase_matrix(spec, block)
    return vol_f * (ew @ (ekw * g))


def exact_grid_sizes(spec: LatticeSpec, radii) -> tuple[int, ...]:
    """Smallest per-axis quadrature grids that integrate the inversion
    integrand exactly: N * l > 2 * radius along each axis."""
    radii = normalize_radii(spec, radii)
    ratios = spec.ratios()
    return tuple(int(2 * r // l + 1) for r, l in zip(radii, ratios))


def _quadrature_nodes(spec: LatticeSpec, grid: tuple[int, ...]) -> np.ndarray:
    """Uniform tensor grid over the dual-coarse Brillouin zone, (prod N, axes)."""
    circumference = steps(spec, "dual_block")  # 2*pi / (eps * l) per axis
    axes = [circumference[a] * np.arange(n) / n for a, n in enumerate(grid)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


def _probe_quasi_periodicity(f: FiberFunction, rng: np.random.Generator) -> None:
    spec = f.spec
    recip = steps(spec, "dual_block")
    ratios = spec.ratios()
    shape = tuple(int(r) for r in ratios)
    for _ in range(3):
        k = rng.uniform(0.0, 1.0, size=spec.n_axes) * recip
        t = rng.integers(-2, 3, size=spec.n_axes)
        base = np.asarray(f.matrix_at(k))
        shifted = np.asarray(f.matrix_at(k + t * recip))
        scale = float(np.abs(base).max()) or 1.0
        # index shift of both dual-block labels by t, modulo the block
        grid = base.reshape(shape + shape)
        rolled = np.roll(grid, shift=tuple(-t) + tuple(-t),
                         axis=tuple(range(2 * spec.n_axes)))
        dev = float(np.abs(shifted - rolled.reshape(base.shape)).max())
        if dev > QUASI_PERIOD_RTOL * scale:
            raise ValueError(
                "fiber function violates quasi-periodicity: deviation "
                f"{dev:.3e} at k={k!r}, shift={t!r} exceeds "
                f"{QUASI_PERIOD_RTOL:.0e} * max|fiber| = {QUASI_PERIOD_RTOL * scale:.3e}"
            )


def inverse_fiber(
    f: FiberFunction,
    radii,
    min_grid_points: int = 0,
    *,
    grid_points=None,
    probe_seed: int = 5,
) -> ZKernel:
    """Recover the kernel of known support from its fiber function.

    The quadrature grid per axis defaults to ``max(2 * radius + 1,
    min_grid_points)``, which is always exact for a kernel supported in the
    window.  ``grid_points`` overrides the grid verbatim (per axis when a
    tuple), allowing deliberate undersampling experiments; no exactness
    guarantee then.
    """
    spec = f.spec
    radii = normalize_radii(spec, radii)
    _probe_quasi_periodicity(f, np.random.Generator(np.random.PCG64(probe_seed)))
    if grid_points is None:
        grid = tuple(max(2 * r + 1, int(min_grid_points)) for r in radii)
    else:
        arr = np.asarray(grid_points, dtype=np.int64)
        if arr.ndim == 0:
            arr = np.full(spec.n_axes, int(arr))
        grid = tuple(int(n) for n in arr)
    if any(n < 1 for n in grid):
        raise ValueError(f"quadrature grid must be positive, got {grid}")

    offsets = window_offsets(spec, radii)
    block = _block_coords(spec)
    eps = spec.spacings()
    vol_c = (spec.eps_t * spec.l_t) * (spec.eps_x * spec.l_x) ** spec.dim
    ew = _block_phase_matrix(spec, block)
    vmap = np.stack(
        [_block_index(spec, w + offsets) for w in block]
    )  # (n_block, window): block class of w + d
    acc = np.zeros((_n_block(spec), len(offsets)), dtype=complex)
    nodes = _quadrature_nodes(spec, grid)
    for k in nodes:
        s = ew.T @ np.asarray(f.matrix_at(k)) @ np.conj(ew)
        acc += np.exp(-1j * (offsets * eps) @ k) * np.take_along_axis(s, vmap, axis=1)
    acc /= vol_c * len(nodes)
    return zkernel(spec, radii, acc)


# ---------------------------------------------------------------------------
# torus actions of asymmetric kernels
# ---------------------------------------------------------------------------


def _fine_site_table(family: LatticeFamily) -> np.ndarray:
    """Fine torus index of w + x over block reps (rows) and coarse sites (cols)."""
    spec = family.spec
    block = _block_coords(spec)
    coarse_fine = family.coords("coarse") * spec.ratios()
    return np.stack(
        [family.indices("fine", w + coarse_fine) for w in block]
    )


def apply_fc(family: LatticeFamily, b: ZKernelFC, psi: FieldVector) -> FieldVector:
    """Torus action of the periodized kernel: fine field from a coarse one."""
    if psi.tag != "coarse":
        raise ValueError(f"fc kernel acts on coarse fields, got {psi.tag!r}")
    spec = b.spec
    if family.spec != spec:
        raise ValueError("kernel and family carry different lattice specs")
    _check_window_fits(spec, b.radii, extents(spec, "coarse"))
    table = _fine_site_table(family)
    ext_c = family.extents("coarse")
    coarse = family.coords("coarse")
    out = np.zeros(family.n_fine, dtype=complex)
    for m_idx, m in enumerate(window_offsets(spec, b.radii)):
        vals = psi.values[family.indices("coarse", coarse + m)]
        out[table] += family.vol_c * np.outer(b.entries[:, m_idx], vals)
    return family.field("fine", out)


def apply_cf(family: LatticeFamily, c: ZKernelCF, phi: FieldVector) -> FieldVector:
    """Torus action of the periodized kernel: coarse field from a fine one."""
    if phi.tag != "fine":
        raise ValueError(f"cf kernel acts on fine fields, got {phi.tag!r}")
    spec = c.spec
    if family.spec != spec:
        raise ValueError("kernel and family carry different lattice specs")
    _check_window_fits(spec, c.radii, extents(spec, "coarse"))
    table = _fine_site_table(family)
    coarse = family.coords("coarse")
    out = np.zeros(family.n_coarse, dtype=complex)
    for m_idx, m in enumerate(window_offsets(spec, c.radii)):
        cols = family.indices("coarse", coarse - m)
        gathered = phi.values[table[:, cols]]  # (n_block, n_coarse)
        out += family.vol_f * c.entries[:, m_idx] @ gathered
    return family.field("coarse", out)


# ---------------------------------------------------------------------------
# finitely supported fields on the infinite lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZField:
    """Finitely supported field on an infinite lattice ('fine' or 'coarse')."""

    spec: LatticeSpec
    kind: str
    coords: np.ndarray  # (n, 1+dim) integer, in the lattice's own steps
    values: np.ndarray  # (n,) complex


def zfield(spec: LatticeSpec, kind: str, coords, values) -> ZField:
    if kind not in ("fine", "coarse"):
        raise ValueError(f"kind must be 'fine' or 'coarse', got {kind!r}")
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, spec.n_axes)
    values = np.asarray(values, dtype=complex).reshape(-1)
    if len(coords) != len(values):
        raise ValueError("coords and values disagree in length")
    # merge duplicate support points so equality tests are canonical
    order = np.lexsort(coords.T[::-1])
    coords, values = coords[order], values[order]
    keep_coords, keep_values = [], []
    for pt, val in zip(coords, values):
        if keep_coords and (keep_coords[-1] == pt).all():
            keep_values[-1] += val
        else:
            keep_coords.append(pt)
            keep_values.append(val)
    return ZField(spec, kind, np.asarray(keep_coords, dtype=np.int64),
                  np.asarray(keep_values, dtype=complex))


def apply_z(a: ZKernel, phi: ZField) -> ZField:
    """(a phi)(u) = vol_f * sum_u' a(u, u') phi(u'), finite support in, out."""
    spec = a.spec
    if phi.spec != spec or phi.kind != "fine":
        raise ValueError("field must be a fine-lattice field on the same spec")
    vol_f = spec.eps_t * spec.eps_x**spec.dim
    offsets = window_offsets(spec, a.radii)
    ratios = spec.ratios()
    acc: dict[tuple[int, ...], complex] = {}
    for pt, val in zip(phi.coords, phi.values):
        for col, d in enumerate(offsets):
            u = pt - d
            w_idx = int(_block_index(spec, u[None, :])[0])
            a_val = a.entries[w_idx, col]
            if a_val == 0.0:
                continue
            key = tuple(int(c) for c in u)
            acc[key] = acc.get(key, 0.0) + vol_f * a_val * val
    if not acc:
        return zfield(spec, "fine", np.zeros((1, spec.n_axes), dtype=np.int64), [0.0])
    coords = np.asarray(list(acc.keys()), dtype=np.int64)
    values = np.asarray(list(acc.values()), dtype=complex)
    return zfield(spec, "fine", coords, values)


def z_inner(a: ZField, b: ZField) -> complex:
    """Cell-volume weighted inner product, conjugate-linear in ``a``."""
    if a.spec != b.spec or a.kind != b.kind:
        raise ValueError("fields live on different lattices")
    spec = a.spec
    vol = spec.eps_t * spec.eps_x**spec.dim
    if a.kind == "coarse":
        vol *= spec.l_t * spec.l_x**spec.dim
    lookup = {tuple(int(c) for c in pt): val for pt, val in zip(b.coords, b.values)}
    total = 0.0 + 0.0j
    for pt, val in zip(a.coords, a.values):
        other = lookup.get(tuple(int(c) for c in pt))
        if other is not None:
            total += np.conj(val) * other
    return complex(vol * total)
