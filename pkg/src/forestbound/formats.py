"""Serialization of families, paths, and curves.

The forest file is canonical JSON: a header with m and the atom sizes, then
the regions as {i, j, zeta} records sorted by (depth, i).  Depth is derived
and never serialized.  Parsing followed by serialization reproduces a
canonically ordered input byte for byte.

Paths travel as single-column CSV (``hypothesis_index``), p-values as
single-column CSV (``p_value``), and curves as CSV with one row per step.
All numeric rendering is locale-independent.
"""

from __future__ import annotations

import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .curve import BoundCurve, fdp_curve
from .errors import FormatError
from .forest import ForestFamily, RegionKey, build_family


def dump_forest(family: ForestFamily) -> str:
    """Canonical textual form of a family."""
    regions = sorted(family.regions(), key=lambda r: (r.depth, r.key.i))
    doc = {
        "m": family.m,
        "atom_sizes": list(family.atom_sizes),
        "regions": [
            {"i": r.key.i, "j": r.key.j, "zeta": r.zeta} for r in regions
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_forest(text: str) -> ForestFamily:
    """Parse the canonical forest format, validating every invariant."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("forest file must be a JSON object")
    try:
        m = doc["m"]
        atom_sizes = doc["atom_sizes"]
        regions = [(r["i"], r["j"], r["zeta"]) for r in doc["regions"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"forest file missing or malformed field: {exc}") from None
    return build_family(m, atom_sizes, regions)


def read_forest(path) -> ForestFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_forest(fh.read())


def write_forest(path, family: ForestFamily) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_forest(family))


def dump_path_csv(path_indices: Sequence[int]) -> str:
    lines = ["hypothesis_index"]
    lines.extend(str(int(i)) for i in path_indices)
    return "\n".join(lines) + "\n"


def parse_path_csv(text: str) -> list[int]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "hypothesis_index":
        raise FormatError("path CSV must start with a 'hypothesis_index' header")
    try:
        return [int(ln) for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"bad path entry: {exc}") from None


def parse_pvalues_csv(text: str) -> list[float]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "p_value":
        raise FormatError("p-value CSV must start with a 'p_value' header")
    try:
        return [float(ln) for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"bad p-value entry: {exc}") from None


def dump_pvalues_csv(pvalues: Sequence[float]) -> str:
    lines = ["p_value"]
    lines.extend(format(float(p), ".17g") for p in pvalues)
    return "\n".join(lines) + "\n"


def dump_curve_csv(path_indices: Sequence[int], curve: BoundCurve) -> str:
    """Per-step curve rows: t, the hypothesis added at t, V_t, V_t / t."""
    if len(curve) != len(path_indices) + 1:
        raise FormatError(
            f"curve has {len(curve)} values for {len(path_indices)} path steps"
        )
    fdp = fdp_curve(curve)
    lines = ["t,hypothesis_index,V_t,fdp_bound"]
    for t, (idx, bound) in enumerate(zip(path_indices, fdp), start=1):
        lines.append(f"{t},{int(idx)},{curve[t]},{_decimal17(bound)}")
    return "\n".join(lines) + "\n"


def _decimal17(value: Fraction) -> str:
    # The exact rational rounded to 17 significant digits (not the nearest
    # binary double, whose rendering can differ in the last digit).
    with localcontext() as ctx:
        ctx.prec = 17
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def dump_removed_csv(removed) -> str:
    """Pruning report: one row per removed region key."""
    lines = ["i,j"]
    for key in sorted(RegionKey(*k) for k in removed):
        lines.append(f"{key.i},{key.j}")
    return "\n".join(lines) + "\n"
