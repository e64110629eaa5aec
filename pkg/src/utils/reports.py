"""
Text tables and deterministic JSON for command line reports.
"""
import json
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from src.modules.dg_module import BlockDGModule, SemiFreeDGModule
from src.ring.truncated_ring import P_ADIC, TruncatedRing


def format_invariants(ring: TruncatedRing, invariants: Sequence[int]) -> str:
    """[1, 2] over a precision-2 ring reads 'R/(t) + R'."""
    if not invariants:
        return "0"
    var = "p" if ring.kind == P_ADIC else "t"
    parts = []
    for e in invariants:
        if e >= ring.precision:
            parts.append("R")
        elif e == 1:
            parts.append(f"R/({var})")
        else:
            parts.append(f"R/({var}^{e})")
    return " + ".join(parts)


def homology_table(ring: TruncatedRing, homology: Dict[int, List[int]]) -> pd.DataFrame:
    rows = []
    for n in sorted(homology):
        inv = np.array(homology[n], dtype=int)
        rows.append({
            "degree": n,
            "homology": format_invariants(ring, homology[n]),
            "free_rank": int(np.sum(inv >= ring.precision)),
            "torsion_summands": int(np.sum(inv < ring.precision)),
        })
    return pd.DataFrame(rows, columns=["degree", "homology", "free_rank", "torsion_summands"])


def transcript_table(records: Iterable[dict]) -> pd.DataFrame:
    rows = [{key: record.get(key) for key in ("variable", "n", "solved", "delta_valuation")}
            for record in records]
    frame = pd.DataFrame(rows, columns=["variable", "n", "solved", "delta_valuation"])
    if frame["variable"].isna().all():
        frame = frame.drop(columns=["variable"])
    return frame


def betti_table(counts: Dict[int, int]) -> pd.DataFrame:
    return pd.DataFrame([{"degree": d, "generators": n} for d, n in sorted(counts.items())],
                        columns=["degree", "generators"])


def render(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(empty)"
    return frame.to_string(index=False)


def _semifree(module: Union[SemiFreeDGModule, BlockDGModule]) -> SemiFreeDGModule:
    return module.underlying if isinstance(module, BlockDGModule) else module


def describe_module(module: Union[SemiFreeDGModule, BlockDGModule]) -> List[str]:
    """One line per semi-basis element: its degree, alpha and (for block modules) delta."""
    m = _semifree(module)
    lines = []
    for b, deg in enumerate(m.degrees):
        alpha = _render_vector(m, m.values[b], deg - 1)
        line = f"{m.label(b)} (degree {deg}): d = {alpha}"
        if isinstance(module, BlockDGModule):
            line += f", delta = {_render_vector(m, module.delta[b], deg - 2)}"
        lines.append(line)
    return lines


def _render_vector(module: SemiFreeDGModule, vec: Sequence, degree: int) -> str:
    terms = []
    for c, key in zip(vec, module.basis(degree)):
        if c.is_zero():
            continue
        coeff = str(c)
        name = module.describe_key(key)
        terms.append(name if coeff == "1" else f"({coeff})*{name}")
    return " + ".join(terms) if terms else "0"


def module_summary(module: Union[SemiFreeDGModule, BlockDGModule]) -> dict:
    m = _semifree(module)
    data = {
        "form": "block" if isinstance(module, BlockDGModule) else "semifree",
        "algebra": m.algebra.name,
        "semibasis": {str(d): n for d, n in sorted(m.semibasis_counts().items())},
        "differential": describe_module(module),
    }
    if m.truncated_at is not None:
        data["truncated_at"] = m.truncated_at
    return data


def to_json(data) -> str:
    """Byte-for-byte stable rendering."""
    return json.dumps(data, sort_keys=True, indent=2, default=str)


def write_json(path: str, data):
    with open(path, 'w') as f:
        f.write(to_json(data) + "\n")


def write_transcript(path: str, records: Iterable[dict]):
    """One JSON object per line."""
    with open(path, 'w') as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True, default=str) + "\n")
