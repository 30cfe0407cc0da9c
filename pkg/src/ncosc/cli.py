"""Batch driver: one JSON run configuration in, one report out.

Usage::

    ncosc --config run.json [--output report.json] [--format json|csv] [--quiet]

Exit status: 0 success, 2 invalid configuration or arguments, 3 numerical
failure (eigensolver residual, no Levi factor found, no matching sign).
All quantities are dimensionless with hbar = 1; ``M`` and ``omega`` set the
scales.
"""

from __future__ import annotations

import argparse
import contextlib
import copy
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any

import jsonschema
import numpy as np

from . import dirac_osc, lie_core, spectra
from .fock2d import FockBasis
from .irrep import IrrepError, IrrepSpec, casimir_report
from .nc_hamiltonian import NCParams, SectorError

SCHEMA_VERSION = 1
COMMANDS = ("algebra-check", "levi", "spectrum", "perturb-small", "perturb-large",
            "dirac-equivalence", "converge")
CSV_COMMANDS = ("spectrum", "perturb-small")
NEEDS_IRREP = ("spectrum", "perturb-small", "perturb-large", "converge")
NEEDS_SECTOR = NEEDS_IRREP

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ncosc run configuration",
    "type": "object",
    "required": ["schema_version", "command"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "params": {
            "type": "object", "additionalProperties": False,
            "properties": {"M": _pos, "omega": _pos,
                           "theta": {"type": "number", "minimum": 0},
                           "kappa": {"type": "number", "minimum": 0}},
        },
        "irrep": {
            "type": "object", "additionalProperties": False,
            "required": ["class", "window"],
            "properties": {
                "class": {"enum": ["discrete_plus", "discrete_minus", "continuous"]},
                "k": _pos, "lambda": _num,
                "grid": {"enum": ["integer", "half-integer"]},
                "window": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
            },
        },
        "sector": {"type": "object", "additionalProperties": False,
                   "required": ["j"], "properties": {"j": _num}},
        "truncation": {
            "type": "object", "additionalProperties": False,
            "properties": {"n_max": {"type": "integer", "minimum": 0},
                           "refine": {"type": "integer", "minimum": 1},
                           "ladder": {"type": "array", "minItems": 3,
                                      "items": {"type": "array", "minItems": 2, "maxItems": 2,
                                                "items": {"type": "integer", "minimum": 0}}}},
        },
        "output": {"type": "object", "additionalProperties": False,
                   "properties": {"path": {"type": ["string", "null"]},
                                  "format": {"enum": ["json", "csv"]}}},
        "tolerances": {"type": "object", "additionalProperties": False,
                       "properties": {"convergence_rtol": _pos, "residual_tol": _pos,
                                      "exact_rtol": _pos}},
        "options": {
            "type": "object", "additionalProperties": False,
            "properties": {"t_grid": {"type": "array", "items": _pos, "minItems": 2},
                           "reference": {"enum": list(spectra.REFERENCES)},
                           "count": {"type": "integer", "minimum": 1},
                           "n_levels": {"type": "integer", "minimum": 1},
                           "omega_physical": {"type": "number", "minimum": 0}},
        },
    },
}

DEFAULTS = {
    "params": {"M": 1.0, "omega": 1.0, "theta": 0.0, "kappa": 0.0},
    "truncation": {"n_max": 12, "refine": 4},
    "output": {"path": None, "format": "json"},
    "tolerances": {"convergence_rtol": spectra.CONVERGENCE_RTOL,
                   "residual_tol": spectra.RESIDUAL_TOL,
                   "exact_rtol": dirac_osc.EXACT_RTOL},
    "options": {},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: NCParams
    irrep: IrrepSpec | None
    j: float | None
    truncation: dict
    output: dict
    tolerances: dict
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": {k: float(v) for k, v in self.params.to_dict().items()},
            "truncation": dict(self.truncation),
            "output": dict(self.output),
            "tolerances": dict(self.tolerances),
            "options": dict(self.options),
        }
        if self.irrep is not None:
            d["irrep"] = self.irrep.to_dict()
        if self.j is not None:
            d["sector"] = {"j": self.j}
        return d


def parse_config(doc: dict | str) -> RunConfig:
    """Validate a configuration document and fill in defaults."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {exc.message}") from None
    merged = copy.deepcopy(DEFAULTS)
    for key in ("params", "truncation", "output", "tolerances", "options"):
        merged[key].update(doc.get(key, {}))
    cmd = doc["command"]
    try:
        params = NCParams(**{k: float(v) for k, v in merged["params"].items()})
        irrep = IrrepSpec.from_dict(doc["irrep"]) if "irrep" in doc else None
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    j = float(doc["sector"]["j"]) if "sector" in doc else None
    if cmd in NEEDS_IRREP and irrep is None:
        raise ConfigError(f"command {cmd!r} needs an 'irrep' block")
    if cmd in NEEDS_SECTOR and j is None:
        raise ConfigError(f"command {cmd!r} needs a 'sector' block")
    if merged["output"]["format"] == "csv" and cmd not in CSV_COMMANDS:
        raise ConfigError(f"csv output is only available for {', '.join(CSV_COMMANDS)}")
    return RunConfig(cmd, params, irrep, j, merged["truncation"], merged["output"],
                     merged["tolerances"], merged["options"])


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)


@contextlib.contextmanager
def _tolerances(tol: dict):
    saved = (spectra.CONVERGENCE_RTOL, spectra.RESIDUAL_TOL, dirac_osc.EXACT_RTOL)
    spectra.CONVERGENCE_RTOL = tol["convergence_rtol"]
    spectra.RESIDUAL_TOL = tol["residual_tol"]
    dirac_osc.EXACT_RTOL = tol["exact_rtol"]
    try:
        yield
    finally:
        spectra.CONVERGENCE_RTOL, spectra.RESIDUAL_TOL, dirac_osc.EXACT_RTOL = saved


# --------------------------------------------------------------------------
# commands; each returns (report dict, csv rows or None, one-line summary)


def _algebra_check(cfg: RunConfig):
    p = cfg.params
    alg = lie_core.deformed_heisenberg(p.theta, p.kappa)
    rep = {"jacobi_residual": lie_core.jacobi_residual(alg),
           "dim": alg.dim,
           "derived_dim": lie_core.derived_subalgebra(alg).dim}
    if cfg.irrep is not None:
        rep["casimir"] = casimir_report(cfg.irrep)
    return rep, None, f"Jacobi residual {rep['jacobi_residual']:.3e}"


def _levi(cfg: RunConfig):
    p = cfg.params
    alg = lie_core.deformed_heisenberg(p.theta, p.kappa)
    rep = lie_core.levi_decompose(alg)
    out = rep.summary()
    out["shifted_generators_in_radical"] = [
        float(rep.radical.residual(v)) for v in lie_core.shifted_radical_vectors(alg, p.theta, p.kappa)]
    return out, None, (f"radical dim {out['radical_dim']}, complement dim "
                       f"{out['complement_dim']} ({out['method']})")


def _spectrum(cfg: RunConfig):
    t = cfg.truncation
    rep = spectra.spectrum_report(cfg.params, cfg.irrep, cfg.j, t["n_max"],
                                  cfg.options.get("count"), t["refine"])
    return rep.to_dict(), rep.rows(), f"{len(rep.eigenvalues)} levels, lowest {rep.eigenvalues[0]:.12g}"


def _perturb_small(cfg: RunConfig):
    t = cfg.truncation
    rep = spectra.residual_scaling(cfg.params, cfg.irrep, cfg.j,
                                   cfg.options.get("t_grid", [1.0, 2.0, 4.0, 8.0]),
                                   n_max=t["n_max"], n_levels=cfg.options.get("n_levels", 10),
                                   reference=cfg.options.get("reference", "closed_form"),
                                   refine=t["refine"])
    d = rep.to_dict()
    slopes = [lv["slope"] for lv in d["levels"]]
    return d, rep.rows(), f"{len(slopes)} levels, min slope {min(slopes, default=float('nan')):.3f}"


def _perturb_large(cfg: RunConfig):
    t = cfg.truncation
    rep = spectra.large_z_check(cfg.params, cfg.irrep, cfg.j, t["n_max"], t["refine"])
    return rep, None, f"C = {rep['C']:.3f}, gap ratio {rep['gap_ratio']:.3g}"


def _dirac(cfg: RunConfig):
    p = cfg.params
    fock = FockBasis(cfg.truncation["n_max"])
    basis = dirac_osc.SpinorBasis(fock, cfg.irrep)
    w = cfg.options.get("omega_physical", p.omega)
    rep = dirac_osc.landau_equivalence_check(w, p, basis)
    if rep["unique"]:
        rep["message"] = f"exact match, sign = {rep['sign']:+d}"
    else:
        rep["message"] = "exact match for both signs"
    return rep, None, rep["message"]


def _converge(cfg: RunConfig):
    t = cfg.truncation
    n = t["n_max"]
    ladder = t.get("ladder") or [[n, 0], [n + 2, 2], [n + 4, 4]]
    table = spectra.convergence_study(spectra.sector_builder(cfg.params, cfg.irrep, cfg.j),
                                      [tuple(x) for x in ladder], cfg.options.get("count", 10))
    d = table.to_dict()
    return d, None, f"{sum(table.converged_mask)}/{len(table.converged_mask)} levels converged"


HANDLERS = {
    "algebra-check": _algebra_check, "levi": _levi, "spectrum": _spectrum,
    "perturb-small": _perturb_small, "perturb-large": _perturb_large,
    "dirac-equivalence": _dirac, "converge": _converge,
}


def run(cfg: RunConfig) -> tuple[str, str]:
    """Execute a validated configuration; returns (report text, summary line)."""
    with _tolerances(cfg.tolerances):
        report, rows, summary = HANDLERS[cfg.command](cfg)
    if cfg.output["format"] == "csv":
        return spectra.rows_to_csv(rows), summary
    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command,
           "config": cfg.to_dict(), "report": report}
    return spectra.report_json(doc) + "\n", summary


def _check_writable(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise ConfigError(f"output path not writable: {path}")
    if os.path.isdir(path):
        raise ConfigError(f"output path is a directory: {path}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncosc", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--output", help="report path (overrides the configuration; '-' for stdout)")
    ap.add_argument("--format", choices=("json", "csv"), help="report format")
    ap.add_argument("--quiet", action="store_true", help="suppress the summary line")
    ap.add_argument("--print-schema", action="store_true", help="print the configuration schema")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    if args.print_schema:
        print(json.dumps(CONFIG_SCHEMA, indent=2, sort_keys=True))
        return EXIT_OK
    if not args.config:
        print("error: --config is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        if args.output is not None:
            doc.setdefault("output", {})["path"] = None if args.output == "-" else args.output
        if args.format is not None:
            doc.setdefault("output", {})["format"] = args.format
        cfg = parse_config(doc)
        path = cfg.output["path"]
        if path:
            _check_writable(path)
        text, summary = run(cfg)
    except (OSError, json.JSONDecodeError, ConfigError, IrrepError, SectorError,
            lie_core.SolvableAlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (spectra.NumericalError, lie_core.LeviError, dirac_osc.ConventionError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(f"{cfg.command}: {summary}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
