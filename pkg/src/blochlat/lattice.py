"""Fine/coarse torus lattices, their duals, and index arithmetic.

The geometry is a (1+dim)-dimensional rectangular torus: one time axis with
spacing ``eps_t`` and ``big_l_t`` sites, and ``dim`` space axes with spacing
``eps_x`` and ``big_l_x`` sites each.  The coarse sublattice keeps every
``l_t``-th (``l_x``-th) site along the respective axis; a block is one
fundamental cell of the coarse sublattice.  Dual lattices follow the usual
reciprocal construction, momenta carrying units of 2*pi over a length.

Sites and momenta are stored as integer multi-indices in the canonical range
``[0, extent)``; physical coordinates are derived on demand so that modular
arithmetic never touches floats.  Six lattice tags name the members of the
family:

=============  =====================================  =================
tag            step per axis                          extent per axis
=============  =====================================  =================
fine           eps                                    big_l
coarse         eps * l                                big_l // l
block          eps                                    l
dual_fine      2*pi / (eps * big_l)                   big_l
dual_coarse    2*pi / (eps * big_l)                   big_l // l
dual_block     2*pi / (eps * l)                       l
=============  =====================================  =================

where ``eps``/``l``/``big_l`` stand for the time value on axis 0 and the
space value on the remaining axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "TAGS",
    "DIRECT_TAGS",
    "DUAL_TAGS",
    "DUAL_OF",
    "DIRECT_OF",
    "LatticeSpec",
    "LatticeFamily",
    "Site",
    "FieldVector",
    "SpectrumVector",
    "build_family",
    "project_dual",
    "torus_distance",
    "distance_matrix",
    "inner",
]

TAGS = ("fine", "coarse", "block", "dual_fine", "dual_coarse", "dual_block")
DIRECT_TAGS = ("fine", "coarse", "block")
DUAL_TAGS = ("dual_fine", "dual_coarse", "dual_block")
DUAL_OF = {"fine": "dual_fine", "coarse": "dual_coarse", "block": "dual_block"}
DIRECT_OF = {v: k for k, v in DUAL_OF.items()}


def _check_tag(tag: str) -> None:
    if tag not in TAGS:
        raise ValueError(f"unknown lattice tag {tag!r}; expected one of {TAGS}")


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry parameters: spacings, coarsening ratios, torus extents.

    ``big_l_t`` must be divisible by ``l_t`` and ``big_l_x`` by ``l_x`` so
    that the coarse sublattice closes on the torus.
    """

    eps_t: float
    eps_x: float
    l_t: int
    l_x: int
    big_l_t: int
    big_l_x: int
    dim: int = 1

    def __post_init__(self) -> None:
        for name in ("eps_t", "eps_x"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"{name} must be strictly positive, got {value}")
        for name in ("l_t", "l_x", "big_l_t", "big_l_x", "dim"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.big_l_t % self.l_t != 0:
            raise ValueError(
                f"l_t={self.l_t} does not divide big_l_t={self.big_l_t}"
            )
        if self.big_l_x % self.l_x != 0:
            raise ValueError(
                f"l_x={self.l_x} does not divide big_l_x={self.big_l_x}"
            )

    @property
    def n_axes(self) -> int:
        return 1 + self.dim

    def spacings(self) -> np.ndarray:
        """Fine lattice step per axis, shape (1+dim,)."""
        return np.array([self.eps_t] + [self.eps_x] * self.dim, dtype=float)

    def ratios(self) -> np.ndarray:
        """Coarsening ratio per axis (block extent), shape (1+dim,)."""
        return np.array([self.l_t] + [self.l_x] * self.dim, dtype=np.int64)

    def fine_extents(self) -> np.ndarray:
        """Fine torus extent in steps per axis, shape (1+dim,)."""
        return np.array([self.big_l_t] + [self.big_l_x] * self.dim, dtype=np.int64)


def extents(spec: LatticeSpec, tag: str) -> np.ndarray:
    """Number of sites along each axis of the tagged lattice."""
    _check_tag(tag)
    fine = spec.fine_extents()
    if tag in ("fine", "dual_fine"):
        return fine
    if tag in ("coarse", "dual_coarse"):
        return fine // spec.ratios()
    return spec.ratios().copy()


def steps(spec: LatticeSpec, tag: str) -> np.ndarray:
    """Physical step along each axis of the tagged lattice."""
    _check_tag(tag)
    eps = spec.spacings()
    if tag in ("fine", "block"):
        return eps
    if tag == "coarse":
        return eps * spec.ratios()
    if tag in ("dual_fine", "dual_coarse"):
        return 2.0 * np.pi / (eps * spec.fine_extents())
    return 2.0 * np.pi / (eps * spec.ratios())


def _fine_unit_factor(spec: LatticeSpec, tag: str) -> np.ndarray:
    """Multiplier taking tagged integer coords to fine-step units.

    Direct tags convert to fine steps, dual tags to dual-fine steps; with
    these units the pairing phase is exp(2*pi*i * sum(m*n / big_l)) for any
    tag combination.
    """
    if tag in ("fine", "block", "dual_fine", "dual_coarse"):
        return np.ones(spec.n_axes, dtype=np.int64)
    if tag == "coarse":
        return spec.ratios()
    return spec.fine_extents() // spec.ratios()  # dual_block


@lru_cache(maxsize=None)
def _coords_cache(spec: LatticeSpec, tag: str) -> np.ndarray:
    ext = extents(spec, tag)
    grids = np.indices(tuple(int(e) for e in ext)).reshape(spec.n_axes, -1).T
    out = np.ascontiguousarray(grids.astype(np.int64))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def distance_matrix(spec: LatticeSpec, tag: str) -> np.ndarray:
    """All pairwise geodesic torus distances on the tagged lattice."""
    pts = _coords_cache(spec, tag)
    ext = extents(spec, tag)
    stp = steps(spec, tag)
    delta = (pts[:, None, :] - pts[None, :, :]) % ext
    delta = np.minimum(delta, ext - delta).astype(float) * stp
    out = np.sqrt((delta**2).sum(axis=-1))
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Site:
    """A point of one family member, in canonical reduced coordinates."""

    coords: tuple[int, ...]
    tag: str


@dataclass(frozen=True)
class FieldVector:
    """Values over all sites of a direct lattice, canonical order."""

    values: np.ndarray
    tag: str


@dataclass(frozen=True)
class SpectrumVector:
    """Values over all momenta of a dual lattice, canonical order."""

    values: np.ndarray
    tag: str


@dataclass(frozen=True)
class LatticeFamily:
    """A consistent bundle of the six lattices with cell volumes.

    ``vol_f``/``vol_c`` are the fine and coarse cell volumes, ``hvol_f``/
    ``hvol_c``/``hvol_b`` the dual cell volumes; they satisfy
    ``vol_f * hvol_f = (2*pi)**(1+dim) / n_fine`` and
    ``vol_c * hvol_c = (2*pi)**(1+dim) / n_coarse`` exactly.
    """

    spec: LatticeSpec
    vol_f: float
    vol_c: float
    hvol_f: float
    hvol_c: float
    hvol_b: float
    n_fine: int
    n_coarse: int
    n_block: int

    # -- geometry -------------------------------------------------------

    def extents(self, tag: str) -> np.ndarray:
        return extents(self.spec, tag)

    def steps(self, tag: str) -> np.ndarray:
        return steps(self.spec, tag)

    def count(self, tag: str) -> int:
        return int(np.prod(extents(self.spec, tag)))

    def volume(self, tag: str) -> float:
        """Cell volume of the tagged lattice (block cells are fine cells)."""
        _check_tag(tag)
        return {
            "fine": self.vol_f,
            "coarse": self.vol_c,
            "block": self.vol_f,
            "dual_fine": self.hvol_f,
            "dual_coarse": self.hvol_c,
            "dual_block": self.hvol_b,
        }[tag]

    # -- sites ----------------------------------------------------------

    def coords(self, tag: str) -> np.ndarray:
        """Integer coords of every site, shape (count, 1+dim), row-major."""
        return _coords_cache(self.spec, tag)

    def site(self, tag: str, coords) -> Site:
        """Canonicalize ``coords`` (any integers) onto the tagged torus."""
        _check_tag(tag)
        ext = extents(self.spec, tag)
        arr = np.asarray(coords, dtype=np.int64)
        if arr.shape != (self.spec.n_axes,):
            raise ValueError(
                f"expected {self.spec.n_axes} coordinates for {tag!r}, "
                f"got shape {arr.shape}"
            )
        return Site(tuple(int(c) for c in arr % ext), tag)

    def index(self, tag: str, coords) -> int:
        """Flat canonical index of (possibly unreduced) integer coords."""
        ext = extents(self.spec, tag)
        arr = np.asarray(coords, dtype=np.int64) % ext
        return int(np.ravel_multi_index(tuple(arr.T), tuple(int(e) for e in ext)))

    def indices(self, tag: str, coords) -> np.ndarray:
        """Vectorized :meth:`index` for an (N, 1+dim) coordinate array."""
        ext = extents(self.spec, tag)
        arr = np.asarray(coords, dtype=np.int64) % ext
        return np.ravel_multi_index(tuple(arr.T), tuple(int(e) for e in ext))

    def positions(self, tag: str, coords=None) -> np.ndarray:
        """Physical coordinates; all sites when ``coords`` is omitted."""
        if coords is None:
            coords = self.coords(tag)
        return np.asarray(coords, dtype=float) * steps(self.spec, tag)

    # -- pairing phases --------------------------------------------------

    def pairing_phases(self, dual_tag: str, dual_coords, direct_tag: str,
                       direct_coords) -> np.ndarray:
        """Matrix exp(i p.u) over dual (rows) and direct (cols) coords.

        Works for every tag combination; the dot product is evaluated from
        integer multi-indices so the result is 2*pi-periodic exactly.
        """
        _check_tag(dual_tag)
        _check_tag(direct_tag)
        if dual_tag not in DUAL_TAGS or direct_tag not in DIRECT_TAGS:
            raise ValueError(
                f"pairing needs a dual and a direct tag, got {dual_tag!r}, "
                f"{direct_tag!r}"
            )
        spec = self.spec
        m = np.atleast_2d(np.asarray(dual_coords, dtype=np.int64))
        n = np.atleast_2d(np.asarray(direct_coords, dtype=np.int64))
        mf = m * _fine_unit_factor(spec, dual_tag)
        nf = n * _fine_unit_factor(spec, direct_tag)
        t = (mf / spec.fine_extents().astype(float)) @ nf.T
        return np.exp(2j * np.pi * t)

    # -- fields ----------------------------------------------------------

    def field(self, tag: str, values) -> FieldVector:
        if tag not in DIRECT_TAGS:
            raise ValueError(f"field values live on a direct lattice, got {tag!r}")
        arr = np.array(values, dtype=complex)
        if arr.shape != (self.count(tag),):
            raise ValueError(
                f"expected {self.count(tag)} values for {tag!r}, got shape {arr.shape}"
            )
        arr.flags.writeable = False
        return FieldVector(arr, tag)

    def spectrum(self, tag: str, values) -> SpectrumVector:
        if tag not in DUAL_TAGS:
            raise ValueError(f"spectrum values live on a dual lattice, got {tag!r}")
        arr = np.array(values, dtype=complex)
        if arr.shape != (self.count(tag),):
            raise ValueError(
                f"expected {self.count(tag)} values for {tag!r}, got shape {arr.shape}"
            )
        arr.flags.writeable = False
        return SpectrumVector(arr, tag)


def build_family(spec: LatticeSpec) -> LatticeFamily:
    """Construct the six-lattice family with its cell volumes."""
    d = spec.dim
    two_pi_pow = (2.0 * np.pi) ** (1 + d)
    vol_f = spec.eps_t * spec.eps_x**d
    vol_c = (spec.eps_t * spec.l_t) * (spec.eps_x * spec.l_x) ** d
    hvol_f = two_pi_pow / ((spec.eps_t * spec.big_l_t) * (spec.eps_x * spec.big_l_x) ** d)
    hvol_b = two_pi_pow / ((spec.eps_t * spec.l_t) * (spec.eps_x * spec.l_x) ** d)
    n_fine = spec.big_l_t * spec.big_l_x**d
    n_coarse = (spec.big_l_t // spec.l_t) * (spec.big_l_x // spec.l_x) ** d
    n_block = spec.l_t * spec.l_x**d
    return LatticeFamily(
        spec=spec,
        vol_f=vol_f,
        vol_c=vol_c,
        hvol_f=hvol_f,
        hvol_c=hvol_f,
        hvol_b=hvol_b,
        n_fine=n_fine,
        n_coarse=n_coarse,
        n_block=n_block,
    )


def project_dual(family: LatticeFamily, p: Site) -> Site:
    """Canonical projection of a dual-fine momentum onto the dual-coarse torus.

    The kernel is exactly the dual-block lattice, and exp(i p.x) equals
    exp(i project_dual(p).x) for every coarse site x.
    """
    if p.tag != "dual_fine":
        raise ValueError(f"project_dual expects a dual_fine momentum, got {p.tag!r}")
    ext = extents(family.spec, "dual_coarse")
    reduced = np.asarray(p.coords, dtype=np.int64) % ext
    return Site(tuple(int(c) for c in reduced), "dual_coarse")


def torus_distance(family: LatticeFamily, a: Site, b: Site) -> float:
    """Geodesic distance between two sites of the same torus, physical units."""
    if a.tag != b.tag:
        raise ValueError(f"sites live on different lattices: {a.tag!r} vs {b.tag!r}")
    ext = extents(family.spec, a.tag)
    stp = steps(family.spec, a.tag)
    delta = (np.asarray(a.coords, dtype=np.int64) - np.asarray(b.coords)) % ext
    delta = np.minimum(delta, ext - delta).astype(float) * stp
    return float(np.sqrt((delta**2).sum()))


def inner(family: LatticeFamily, f: FieldVector, g: FieldVector) -> complex:
    """Cell-volume weighted inner product, conjugate-linear in ``f``."""
    if f.tag != g.tag:
        raise ValueError(f"fields live on different lattices: {f.tag!r} vs {g.tag!r}")
    return complex(family.volume(f.tag) * np.vdot(f.values, g.values))
