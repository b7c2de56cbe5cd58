"""Adelic cohomology on P^1 over Z at desk scale.

Thin wrappers over the compiled ``_adelix`` module. Every report-producing
helper routes through the same dispatcher as the ``adelix`` binary, so the
JSON here is the JSON the CLI prints and validates against the shipped
schema.
"""

from __future__ import annotations

import json
from typing import Any

try:
    from ._adelix import (
        AdelixError,
        curve_h0_h1,
        deg_ar,
        h0_ar,
        h1_ar,
        render_expr,
        rr_defect,
        run,
    )
except ImportError:  # build-tree layout: extension next to the package
    from _adelix import (  # type: ignore
        AdelixError,
        curve_h0_h1,
        deg_ar,
        h0_ar,
        h1_ar,
        render_expr,
        rr_defect,
        run,
    )

__all__ = [
    "AdelixError",
    "arith_rr",
    "curve_coh",
    "curve_h0_h1",
    "deg_ar",
    "h0_ar",
    "h1_ar",
    "render_expr",
    "report",
    "residue",
    "rr_defect",
    "run",
    "selftest",
    "surface_check",
]


def report(args: list[str]) -> dict[str, Any]:
    """Run a CLI invocation with --json and return the parsed report.

    Raises RuntimeError with the stderr text when the command does not
    produce a report (usage errors, precision exhaustion).
    """
    code, out, err = run([*args, "--json"])
    if not out.strip():
        raise RuntimeError(f"adelix {' '.join(args)} produced no report (exit {code}): {err.strip()}")
    doc = json.loads(out)
    doc["exit_code"] = code
    return doc


def residue(field: str, form: str, p: int | None = None) -> dict[str, Any]:
    args = ["residue", "--field", field, "--form", form]
    if p is not None:
        args += ["--p", str(p)]
    return report(args)


def curve_coh(p: int, divisor: str) -> dict[str, Any]:
    return report(["curve-coh", "--p", str(p), "--divisor", divisor])


def arith_rr(gram: list[list[float]] | None = None, divisor: str | None = None) -> dict[str, Any]:
    if (gram is None) == (divisor is None):
        raise ValueError("pass exactly one of gram= or divisor=")
    if gram is not None:
        return report(["arith-rr", "--gram", json.dumps(gram)])
    return report(["arith-rr", "--divisor", divisor])


def surface_check(kind: str, form: str, at: str) -> dict[str, Any]:
    return report(["surface", "check", kind, "--form", form, "--at", at])


def selftest(quick: bool = True) -> bool:
    args = ["selftest"] + (["--quick"] if quick else [])
    code, _out, _err = run(args)
    return code == 0
