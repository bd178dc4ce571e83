"""Multiplication tables as JSON, and table-backed systems read back from them.

Layout::

    {"header": {"theta": "1/2", "epsilon": "symbolic", "window": 2, "central": true},
     "products": [{"left": "L(-2)", "right": "L(-2)", "result": [...]}, ...]}

Every coefficient is an exact string.  Products are listed in basis order, so
dumping the same system twice gives identical bytes.
"""
from __future__ import annotations

import json
from typing import Dict, Tuple

from .checker import Window
from .exactfield import GaussianRational, RatFun
from .structures import (
    Basis,
    C,
    Element,
    FAMILIES,
    Mode,
    Sector,
    StructureSystem,
    parse_basis,
)

__all__ = ["product_table", "dump_table", "load_table", "TableFormatError"]


class TableFormatError(ValueError):
    pass


def product_table(sys: StructureSystem, window: Window) -> dict:
    basis = window.basis_for(sys)
    rows = []
    for x in basis:
        for y in basis:
            rows.append({"left": str(x), "right": str(y), "result": sys.basis_product(x, y).to_json()})
    header = {
        "theta": str(sys.sector),
        "epsilon": "symbolic" if sys.symbolic else str(sys.epsilon),
        "window": window.N,
        "central": sys.central,
    }
    return {"header": header, "products": rows}


def dump_table(table: dict) -> str:
    """One product per line; stable for a given table."""
    lines = ["{", f' "header": {json.dumps(table["header"])},', ' "products": [']
    rows = table["products"]
    for i, row in enumerate(rows):
        lines.append("  " + json.dumps(row) + ("," if i + 1 < len(rows) else ""))
    lines.append(" ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


_FAMILY_OF = {"LL": ("f", "phi"), "LG": ("g", "psi"), "GL": ("h", "rho"), "GG": ("d", "sigma")}


def load_table(text: str) -> StructureSystem:
    """Table-backed system holding exactly the products listed in ``text``."""
    try:
        data = json.loads(text)
        header = data["header"]
        sector = Sector.parse(str(header["theta"]))
        eps_text = header.get("epsilon", "symbolic")
        central = bool(header.get("central", True))
        rows = data["products"]
    except (ValueError, KeyError, TypeError) as exc:
        raise TableFormatError(f"malformed table: {exc}") from None
    if eps_text == "symbolic":
        epsilon, scalar = None, RatFun.parse
    else:
        epsilon, scalar = GaussianRational.parse(eps_text), GaussianRational.parse
    tables: Dict[str, dict] = {fam: {} for fam in FAMILIES}
    c_products: Dict[Tuple[Basis, Basis], Element] = {}
    for row in rows:
        try:
            x, y = parse_basis(row["left"]), parse_basis(row["right"])
            result = Element((parse_basis(t["basis"]), scalar(t["coeff"])) for t in row["result"])
        except (ValueError, KeyError, TypeError) as exc:
            raise TableFormatError(f"bad product row {row!r}: {exc}") from None
        if x.kind == "C" or y.kind == "C":
            c_products[x, y] = result
            continue
        main_fam, c_fam = _FAMILY_OF[x.kind + y.kind]
        target = Basis("L" if x.kind == y.kind else "G", x.index + y.index)
        extra = set(result.support()) - {target, C}
        if extra:
            raise TableFormatError(f"{x}*{y} has terms outside the graded ansatz: {sorted(map(str, extra))}")
        zero = RatFun() if epsilon is None else GaussianRational(0)
        key = (x.index, y.index)
        tables[main_fam][key] = result.coefficient(target) or zero
        if central:
            tables[c_fam][key] = result.coefficient(C) or zero
    return StructureSystem(sector, Mode.TABLE, epsilon, tables=tables, c_products=c_products, central=central)

