"""Torus operators invariant under coarse translations, and their fibers.

A kernel A(u, u') on the fine torus acts by (A phi)(u) = vol_f * sum_u'
A(u, u') phi(u').  Invariance under the coarse sublattice makes its momentum
matrix

    A_hat(p, p') = vol_f / n_fine * sum_{u, u'} exp(-i p.u) A(u, u') exp(i p'.u')

block diagonal over dual-coarse classes: A_hat(p, p') = 0 unless p and p'
project to the same dual-coarse momentum.  The nonzero blocks are the fibers
fiber(k)[l, l'] = A_hat(k + l, k + l') with l, l' running over the dual
block; ``reconstruct`` resums them into the kernel,

    A(u, u') = 1 / (vol_c * n_coarse) * sum_{k, l, l'}
               exp(i l.u) A_hat(k+l, k+l') exp(-i l'.u') exp(i k.(u-u')),

one summand per dual-coarse class, independent of the chosen class
representatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import FieldVector, LatticeFamily

__all__ = [
    "PeriodicKernel",
    "MomentumMatrix",
    "BlochFiber",
    "periodic_kernel",
    "identity_kernel",
    "apply_kernel",
    "compose",
    "momentum_matrix",
    "kernel_from_momentum",
    "bloch_fibers",
    "reconstruct",
    "transpose_kernel",
]

PERIODICITY_RTOL = 1e-10


@dataclass(frozen=True)
class PeriodicKernel:
    """Dense kernel on the fine torus, coarse-translation invariant."""

    family: LatticeFamily
    entries: np.ndarray  # (n_fine, n_fine) complex


@dataclass(frozen=True)
class MomentumMatrix:
    """Momentum-space matrix over the fine dual, canonical order."""

    family: LatticeFamily
    entries: np.ndarray  # (n_fine, n_fine) complex


@dataclass(frozen=True)
class BlochFiber:
    """One momentum fiber: a dual-block matrix attached to momentum ``k``.

    ``k`` is the physical momentum vector (complex entries allowed off the
    real torus); ``rep`` carries the integer dual-coarse representative when
    the fiber belongs to a finite-torus operator, and is None for fibers of
    infinite-lattice kernels evaluated at continuous momenta.
    """

    k: np.ndarray
    entries: np.ndarray  # (n_block, n_block) complex
    rep: tuple[int, ...] | None = None


def _coarse_shift_permutation(family: LatticeFamily, axis: int) -> np.ndarray:
    """Fine-site index permutation for translation by one coarse step."""
    shift = np.zeros(family.spec.n_axes, dtype=np.int64)
    shift[axis] = family.spec.ratios()[axis]
    return family.indices("fine", family.coords("fine") + shift)


def periodic_kernel(family: LatticeFamily, entries,
                    check: bool = True) -> PeriodicKernel:
    """Wrap dense entries, verifying coarse-translation invariance.

    Invariance is checked on the coarse generators only (they generate the
    group) to relative tolerance 1e-10 of the largest entry.
    """
    arr = np.array(entries, dtype=complex)
    n = family.n_fine
    if arr.shape != (n, n):
        raise ValueError(f"expected entries of shape ({n}, {n}), got {arr.shape}")
    if check:
        scale = float(np.abs(arr).max()) or 1.0
        for axis in range(family.spec.n_axes):
            perm = _coarse_shift_permutation(family, axis)
            dev = float(np.abs(arr[np.ix_(perm, perm)] - arr).max())
            if dev > PERIODICITY_RTOL * scale:
                raise ValueError(
                    "kernel is not invariant under coarse translations: "
                    f"axis {axis} deviation {dev:.3e} exceeds "
                    f"{PERIODICITY_RTOL:.0e} * max|A| = {PERIODICITY_RTOL * scale:.3e}"
                )
    arr.flags.writeable = False
    return PeriodicKernel(family, arr)


def identity_kernel(family: LatticeFamily) -> PeriodicKernel:
    """Kernel of the identity operator, (1/vol_f) on the diagonal."""
    return periodic_kernel(
        family, np.eye(family.n_fine, dtype=complex) / family.vol_f, check=False
    )


def apply_kernel(kernel: PeriodicKernel, field: FieldVector) -> FieldVector:
    """Position-space action vol_f * sum_u' A(u, u') phi(u')."""
    if field.tag != "fine":
        raise ValueError(f"kernel acts on fine-lattice fields, got {field.tag!r}")
    fam = kernel.family
    return fam.field("fine", fam.vol_f * kernel.entries @ field.values)


def compose(a: PeriodicKernel, b: PeriodicKernel) -> PeriodicKernel:
    """Kernel of the operator product, vol_f * sum_u'' A(u,u'') B(u'',u')."""
    if a.family.spec != b.family.spec:
        raise ValueError("kernels live on different lattice families")
    return periodic_kernel(
        a.family, a.family.vol_f * a.entries @ b.entries, check=False
    )


def transpose_kernel(a: PeriodicKernel) -> PeriodicKernel:
    """Kernel of the transposed operator, A*(u, u') = A(u', u)."""
    return periodic_kernel(a.family, a.entries.T, check=False)


def _site_phases(family: LatticeFamily) -> np.ndarray:
    """exp(i p.u) with momenta as rows, fine sites as columns."""
    return family.pairing_phases(
        "dual_fine", family.coords("dual_fine"), "fine", family.coords("fine")
    )


def momentum_matrix(kernel: PeriodicKernel) -> MomentumMatrix:
    """Two-sided transform of the kernel into momentum space."""
    fam = kernel.family
    ph = _site_phases(fam)
    out = (fam.vol_f / fam.n_fine) * (np.conj(ph) @ kernel.entries @ ph.T)
    out.flags.writeable = False
    return MomentumMatrix(fam, out)


def kernel_from_momentum(m: MomentumMatrix, check: bool = True) -> PeriodicKernel:
    """Invert :func:`momentum_matrix` by the double momentum sum."""
    fam = m.family
    ph = _site_phases(fam)
    factor = fam.hvol_f / (2.0 * np.pi) ** (1 + fam.spec.dim)
    entries = factor * (ph.T @ m.entries @ np.conj(ph))
    return periodic_kernel(fam, entries, check=check)


def _canonical_reps(family: LatticeFamily) -> np.ndarray:
    return family.coords("dual_coarse")


def _fiber_momentum_indices(family: LatticeFamily, rep) -> np.ndarray:
    """Fine-dual flat indices of rep + l for l over the dual block."""
    lift = family.extents("dual_fine") // family.extents("dual_block")
    p = np.asarray(rep, dtype=np.int64) + family.coords("dual_block") * lift
    return family.indices("dual_fine", p)


def bloch_fibers(kernel: PeriodicKernel, reps=None) -> list[BlochFiber]:
    """Extract the momentum fibers, one per dual-coarse class.

    ``reps`` may list arbitrary integer representatives (not necessarily
    reduced); exactly one per dual-coarse class is required.
    """
    fam = kernel.family
    if reps is None:
        reps = _canonical_reps(fam)
    reps = [tuple(int(c) for c in r) for r in np.asarray(reps, dtype=np.int64)]
    ext_c = fam.extents("dual_coarse")
    classes = {tuple(np.asarray(r) % ext_c) for r in reps}
    if len(classes) != fam.n_coarse or len(reps) != fam.n_coarse:
        raise ValueError(
            f"need exactly one representative per dual-coarse class "
            f"({fam.n_coarse} classes), got {len(reps)} reps covering "
            f"{len(classes)} classes"
        )
    m = momentum_matrix(kernel)
    k_steps = fam.steps("dual_coarse")
    fibers = []
    for rep in reps:
        idx = _fiber_momentum_indices(fam, rep)
        entries = np.ascontiguousarray(m.entries[np.ix_(idx, idx)])
        entries.flags.writeable = False
        fibers.append(BlochFiber(np.asarray(rep) * k_steps, entries, rep))
    return fibers


def reconstruct(family: LatticeFamily, fibers: list[BlochFiber]) -> PeriodicKernel:
    """Resum fibers into the position-space kernel.

    The result does not depend on which representative each fiber was
    extracted at: shifting a representative by a dual-block-lattice vector
    permutes the fiber entries and the compensating phases below cancel.
    """
    ext_c = family.extents("dual_coarse")
    classes = set()
    for fiber in fibers:
        if fiber.rep is None:
            raise ValueError("reconstruct needs fibers carrying integer reps")
        classes.add(tuple(np.asarray(fiber.rep, dtype=np.int64) % ext_c))
    if len(classes) != family.n_coarse or len(fibers) != family.n_coarse:
        raise ValueError(
            f"need exactly one fiber per dual-coarse class ({family.n_coarse}), "
            f"got {len(fibers)} fibers covering {len(classes)} classes"
        )
    sites = family.coords("fine")
    block_phases = family.pairing_phases(
        "dual_block", family.coords("dual_block"), "fine", sites
    )  # (n_block, n_fine)
    entries = np.zeros((family.n_fine, family.n_fine), dtype=complex)
    for fiber in fibers:
        rep = np.asarray(fiber.rep, dtype=np.int64)
        # exp(i k.u) for the representative momentum, exact integer phases
        ku = family.pairing_phases("dual_coarse", rep, "fine", sites)[0]
        inner = block_phases.T @ fiber.entries @ np.conj(block_phases)
        entries += (ku[:, None] * np.conj(ku)[None, :]) * inner
    entries /= family.vol_c * family.n_coarse
    return periodic_kernel(family, entries)
