"""Batch front end.

Reads an INI-style job configuration, runs one task against the configured
lattice and kernel, and writes machine-readable reports:

* ``report.json``   deterministic given (config, seed); byte-identical
                    across repeated runs
* ``summary.json``  the same rows plus ``elapsed_ms``
* ``<task>.csv``    bulk numeric output where the task produces matrices

Config sections are ``[lattice]``, ``[kernel]``, ``[task]``, ``[params]``;
unknown sections or keys are rejected by name so typos cannot silently
change a run.

Exit codes: 0 all checks passed; 1 a numerical check failed or a numerical
precondition was violated while running; 2 malformed configuration;
3 output could not be written.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
import time

import numpy as np

from .averaging import naive_profile, prolong_restrict_kernel, smooth_profile
from .lattice import LatticeSpec, build_family, steps
from .norms import decay_norm_bound, fiber_decay_bound, weighted_norm
from .opfunc import (
    FUNCTIONS,
    Circle,
    function_norm_bound,
    function_of_operator,
    make_polynomial,
)
from .periodic_op import bloch_fibers
from .periodization import (
    fiber_function,
    fiber_hat,
    normalize_radii,
    periodize,
    window_offsets,
    zkernel,
)
from .rand import random_zkernel, rng_from_seed
from .verify import CheckResult, all_passed, verify_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

TASKS = ("fibers", "norms", "decay", "funcalc", "verify")
KERNEL_TYPES = ("naive_qstarq", "smooth_qstarq", "explicit", "random")

_LATTICE_KEYS = {"eps_t", "eps_x", "l_t", "l_x", "big_l_t", "big_l_x", "dim"}
_KERNEL_KEYS_BY_TYPE = {
    "naive_qstarq": set(),
    "smooth_qstarq": {"width"},
    "explicit": {"entries"},
    "random": {"seed", "support_radius"},
}
_PARAM_KEYS_BY_TASK = {
    "fibers": set(),
    "norms": {"masses"},
    "decay": {"mass", "target_mass"},
    "funcalc": {"function", "coefficients", "contour_center", "contour_radius", "mass"},
    "verify": set(),
}


class ConfigError(Exception):
    """Configuration rejected; the message names the offending field."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _get_float(section, key, default=None) -> float:
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required key {section.name}.{key}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section.name}.{key} must be a number, got {raw!r}")


def _get_int(section, key, default=None) -> int:
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required key {section.name}.{key}")
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section.name}.{key} must be an integer, got {raw!r}")


def _float_list(section, key, default) -> list[float]:
    raw = section.get(key)
    if raw is None:
        return list(default)
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{section.name}.{key} must be comma-separated numbers")


def _load_config(path: str) -> configparser.ConfigParser:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}")
    return parser


def _validate_keys(parser: configparser.ConfigParser, task: str, kind: str) -> None:
    known_sections = {"lattice", "kernel", "task", "params"}
    for section in parser.sections():
        if section not in known_sections:
            raise ConfigError(f"unknown section '{section}'")
    for key in parser["lattice"]:
        if key not in _LATTICE_KEYS:
            raise ConfigError(f"unknown key lattice.{key}")
    allowed = {"type"} | _KERNEL_KEYS_BY_TYPE[kind]
    for key in parser["kernel"]:
        if key not in allowed:
            raise ConfigError(
                f"unknown key kernel.{key} for kernel type '{kind}'"
            )
    for key in parser["task"]:
        if key != "name":
            raise ConfigError(f"unknown key task.{key}")
    if parser.has_section("params"):
        for key in parser["params"]:
            if key not in _PARAM_KEYS_BY_TASK[task]:
                raise ConfigError(f"unknown key params.{key} for task '{task}'")


def _build_spec(section) -> LatticeSpec:
    try:
        return LatticeSpec(
            eps_t=_get_float(section, "eps_t", 1.0),
            eps_x=_get_float(section, "eps_x", 1.0),
            l_t=_get_int(section, "l_t"),
            l_x=_get_int(section, "l_x"),
            big_l_t=_get_int(section, "big_l_t"),
            big_l_x=_get_int(section, "big_l_x"),
            dim=_get_int(section, "dim", 1),
        )
    except ValueError as exc:
        raise ConfigError(f"lattice: {exc}")


def _read_explicit_entries(spec: LatticeSpec, path: str):
    if not os.path.isfile(path):
        raise ConfigError(f"kernel.entries file not found: {path}")
    n = spec.n_axes
    rows = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = [p.strip() for p in text.split(",")]
            if lineno == 1 and any(not _is_number(p) for p in parts):
                continue  # optional header row
            if len(parts) != 2 * n + 2:
                raise ConfigError(
                    f"kernel.entries line {lineno}: expected {2 * n + 2} "
                    f"columns, got {len(parts)}"
                )
            try:
                values = [float(p) for p in parts]
            except ValueError:
                raise ConfigError(f"kernel.entries line {lineno}: non-numeric field")
            rows.append((lineno, values))
    if not rows:
        raise ConfigError(f"kernel.entries file {path} holds no entries")
    ratios = spec.ratios()
    radii = [0] * n
    for lineno, values in rows:
        w = values[:n]
        d = values[n:2 * n]
        if any(c != int(c) for c in w + d):
            raise ConfigError(f"kernel.entries line {lineno}: coordinates must be integers")
        if any(not (0 <= int(c) < r) for c, r in zip(w, ratios)):
            raise ConfigError(
                f"kernel.entries line {lineno}: block site outside the block"
            )
        radii = [max(r, abs(int(c))) for r, c in zip(radii, d)]
    radii = tuple(radii)
    offsets = window_offsets(spec, radii)
    n_window = len(offsets)
    strides = {}
    for idx, off in enumerate(offsets):
        strides[tuple(int(c) for c in off)] = idx
    n_block = int(np.prod(ratios))
    entries = np.zeros((n_block, n_window), dtype=complex)
    seen = set()
    for lineno, values in rows:
        w = tuple(int(c) for c in values[:n])
        d = tuple(int(c) for c in values[n:2 * n])
        w_idx = int(np.ravel_multi_index(w, tuple(int(r) for r in ratios)))
        key = (w_idx, strides[d])
        if key in seen:
            raise ConfigError(f"kernel.entries line {lineno}: duplicate entry for {w}, {d}")
        seen.add(key)
        entries[w_idx, strides[d]] = values[-2] + 1j * values[-1]
    return zkernel(spec, radii, entries)


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _build_kernel(spec: LatticeSpec, section, kind: str, seed: int):
    try:
        if kind == "naive_qstarq":
            return prolong_restrict_kernel(naive_profile(spec))
        if kind == "smooth_qstarq":
            width = _get_int(section, "width")
            return prolong_restrict_kernel(smooth_profile(spec, width))
        if kind == "explicit":
            path = section.get("entries")
            if path is None:
                raise ConfigError("missing required key kernel.entries")
            return _read_explicit_entries(spec, path)
        radius = section.get("support_radius", "2")
        try:
            radii = normalize_radii(
                spec, tuple(int(p) for p in radius.split(",")) if "," in radius
                else int(radius)
            )
        except ValueError:
            raise ConfigError(f"kernel.support_radius invalid: {radius!r}")
        return random_zkernel(spec, radii, rng_from_seed(_get_int(section, "seed", seed)))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"kernel: {exc}")


class Job:
    """A validated run: lattice, kernel, task, parameters."""

    def __init__(self, parser: configparser.ConfigParser, seed: int):
        for name in ("lattice", "kernel", "task"):
            if not parser.has_section(name):
                raise ConfigError(f"missing section [{name}]")
        task = parser["task"].get("name")
        if task not in TASKS:
            raise ConfigError(
                f"task.name must be one of {', '.join(TASKS)}, got {task!r}"
            )
        kind = parser["kernel"].get("type")
        if kind not in KERNEL_TYPES:
            raise ConfigError(
                f"kernel.type must be one of {', '.join(KERNEL_TYPES)}, got {kind!r}"
            )
        _validate_keys(parser, task, kind)
        self.task = task
        self.seed = seed
        self.spec = _build_spec(parser["lattice"])
        self.kernel = _build_kernel(self.spec, parser["kernel"], kind, seed)
        self.params = parser["params"] if parser.has_section("params") else {}
        self.family = build_family(self.spec)
        if task in ("norms", "funcalc", "verify"):
            try:
                self.torus = periodize(self.kernel, self.family)
            except ValueError as exc:
                raise ConfigError(f"kernel does not fit the torus: {exc}")
        if task == "decay":
            mass = _get_float(self.params, "mass", 0.5) if self.params else 0.5
            target = self.params.get("target_mass") if self.params else None
            if target is not None and float(target) >= mass:
                raise ConfigError(
                    "params.target_mass must be smaller than params.mass"
                )
        if task == "funcalc":
            self.contour = self._build_contour()
            self.fn_name, self.fn = self._build_function()

    def _build_contour(self) -> Circle:
        center_raw = self.params.get("contour_center", "10") if self.params else "10"
        try:
            center = complex(center_raw.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"params.contour_center invalid: {center_raw!r}")
        radius = _get_float(self.params, "contour_radius", 5.0) if self.params else 5.0
        try:
            return Circle(center, radius)
        except ValueError as exc:
            raise ConfigError(f"params: {exc}")

    def _build_function(self):
        name = self.params.get("function", "identity") if self.params else "identity"
        if name == "polynomial":
            raw = self.params.get("coefficients")
            if raw is None:
                raise ConfigError("params.coefficients required for polynomial")
            try:
                coeffs = [float(p) for p in raw.split(",") if p.strip()]
                return name, make_polynomial(coeffs)
            except ValueError as exc:
                raise ConfigError(f"params.coefficients: {exc}")
        if name not in FUNCTIONS:
            choices = ", ".join(sorted(FUNCTIONS) + ["polynomial"])
            raise ConfigError(f"params.function must be one of {choices}, got {name!r}")
        return name, FUNCTIONS[name]


def _eq_row(name, anchor, deviation, tol, witness=None) -> CheckResult:
    dev = float(deviation)
    return CheckResult(name, anchor, dev, float(tol), dev <= tol, witness)


def _le_row(name, anchor, lhs, rhs, witness=None) -> CheckResult:
    lhs, rhs = float(lhs), float(rhs)
    return CheckResult(name, anchor, lhs, rhs, lhs <= rhs * (1.0 + 1e-12), witness)


def _fiber_rows(spec, matrices):
    """CSV rows (k indices, flat row/col labels, re, im) per fiber matrix."""
    rows = []
    for rep, matrix in matrices:
        base = [str(int(c)) for c in rep]
        for i in range(matrix.shape[0]):
            for j in range(matrix.shape[1]):
                rows.append(base + [str(i), str(j),
                                    _fmt(matrix[i, j].real), _fmt(matrix[i, j].imag)])
    return rows


def _fiber_header(spec) -> list[str]:
    return [f"k_index_{a}" for a in range(spec.n_axes)] + [
        "ell_row", "ell_col", "re", "im",
    ]


def _run_fibers(job: Job, outdir: str):
    spec = job.spec
    step = steps(spec, "dual_coarse")
    matrices = [
        (rep, fiber_hat(job.kernel, rep * step).entries)
        for rep in job.family.coords("dual_coarse")
    ]
    _write_csv(os.path.join(outdir, "fibers.csv"), _fiber_header(spec),
               _fiber_rows(spec, matrices))
    return []


def _run_norms(job: Job, outdir: str):
    masses = _float_list(job.params, "masses", (1.0, 0.5, 0.25)) if job.params \
        else [1.0, 0.5, 0.25]
    if not masses or any(m < 0 for m in masses):
        raise ConfigError("params.masses must be non-negative numbers")
    rng = rng_from_seed(job.seed)
    checks, table = [], []
    for mass in masses:
        z_norm = weighted_norm(job.kernel, mass)
        t_norm = weighted_norm(job.torus, mass)
        table.append([_fmt(mass), _fmt(z_norm), _fmt(t_norm)])
        checks.append(_le_row(f"torus_norm_dominated[m={mass:g}]",
                              "lemBOlonelinfty.b", t_norm, z_norm))
        sup = 0.0
        width = 2.0 * np.pi / (job.spec.spacings() * job.spec.ratios())
        for _ in range(40):
            re = rng.uniform(0.0, 1.0, size=job.spec.n_axes) * width
            im = rng.normal(size=job.spec.n_axes)
            im *= rng.uniform(0.0, 0.99) * mass / max(np.linalg.norm(im), 1e-12)
            sup = max(sup, np.abs(fiber_hat(job.kernel, re + 1j * im).entries).max())
        checks.append(_le_row(f"fiber_sup_bound[m={mass:g}]",
                              "lemBOlonelinfty.a", sup, z_norm))
    _write_csv(os.path.join(outdir, "norms.csv"),
               ["mass", "window_norm", "torus_norm"], table)
    return checks


def _run_decay(job: Job, outdir: str):
    mass = _get_float(job.params, "mass", 0.5) if job.params else 0.5
    f = fiber_function(job.kernel)
    bound = fiber_decay_bound(f, job.kernel.radii, mass)
    entries = np.abs(np.asarray(job.kernel.entries))
    offsets = window_offsets(job.spec, job.kernel.radii)
    ratios = tuple(int(r) for r in job.spec.ratios())
    table = []
    for w_idx in range(entries.shape[0]):
        w = np.unravel_index(w_idx, ratios)
        for d_idx, d in enumerate(offsets):
            table.append([str(int(c)) for c in w]
                         + [str(int(c)) for c in d]
                         + [_fmt(entries[w_idx, d_idx]), _fmt(bound[w_idx, d_idx])])
    header = [f"w_index_{a}" for a in range(job.spec.n_axes)] + [
        f"d_index_{a}" for a in range(job.spec.n_axes)] + ["abs_entry", "bound"]
    _write_csv(os.path.join(outdir, "decay.csv"), header, table)
    scale = max(entries.max(), 1e-300)
    checks = [_le_row(f"entrywise_decay_bound[m={mass:g}]", "lemBOlonelinfty.b",
                      float((entries - bound).max()), 1e-12 * scale)]
    target = job.params.get("target_mass") if job.params else None
    if target is not None:
        target = float(target)
        checks.append(_le_row(
            f"decay_norm_bound[m={mass:g},m''={target:g}]", "lemBOlonelinfty.b",
            weighted_norm(job.kernel, target),
            decay_norm_bound(f, job.kernel.radii, mass, target)))
    return checks


def _run_funcalc(job: Job, outdir: str):
    result = function_of_operator(job.torus, job.fn, job.contour)
    matrices = [
        (fiber.rep, np.asarray(fiber.entries)) for fiber in bloch_fibers(result)
    ]
    _write_csv(os.path.join(outdir, "funcalc.csv"), _fiber_header(job.spec),
               _fiber_rows(job.spec, matrices))
    checks = []
    mass = job.params.get("mass") if job.params else None
    if mass is not None:
        mass = _get_float(job.params, "mass")
        checks.append(_le_row(
            f"function_norm_bound[m={mass:g}]", "lemBOfnbnd",
            weighted_norm(result, mass),
            function_norm_bound(job.torus, job.fn, job.contour, mass),
            witness=f"function={job.fn_name}"))
    return checks


def _run_verify(job: Job, outdir: str):
    return verify_suite(job.spec, job.kernel, job.seed)


_RUNNERS = {
    "fibers": _run_fibers,
    "norms": _run_norms,
    "decay": _run_decay,
    "funcalc": _run_funcalc,
    "verify": _run_verify,
}


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _check_payload(results) -> list[dict]:
    payload = []
    for r in results:
        row = {"name": r.name, "anchor": r.anchor, "lhs": float(r.lhs),
               "rhs": float(r.rhs), "pass": bool(r.passed)}
        if r.witness is not None:
            row["witness"] = r.witness
        payload.append(row)
    return payload


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="blochlat",
        description="Fiber decompositions, norm bounds, operator functions, "
                    "and the library self-check suite, driven by a config file.",
    )
    parser.add_argument("--config", required=True, help="path to the INI job config")
    parser.add_argument("--output", default=".", help="directory for reports")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    parser.add_argument("--verbose", action="store_true", help="print one line per check")
    args = parser.parse_args(argv)

    started = time.perf_counter()
    try:
        job = Job(_load_config(args.config), args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        os.makedirs(args.output, exist_ok=True)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        results = _RUNNERS[job.task](job, args.output)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    payload = _check_payload(results)
    elapsed_ms = int(round((time.perf_counter() - started) * 1000.0))
    report = {"task": job.task, "checks": payload}
    summary = {"checks": payload, "elapsed_ms": elapsed_ms}
    try:
        with open(os.path.join(args.output, "report.json"), "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        with open(os.path.join(args.output, "summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.verbose:
        for row in results:
            mark = "pass" if row.passed else "FAIL"
            extra = f"  [{row.witness}]" if row.witness else ""
            print(f"{mark}  {row.name}  {row.anchor}  "
                  f"lhs={row.lhs:.6g} rhs={row.rhs:.6g}{extra}")
    n_pass = sum(1 for r in results if r.passed)
    print(f"{job.task}: {n_pass}/{len(results)} checks passed; "
          f"reports in {args.output}")
    return EXIT_OK if all_passed(results) else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
