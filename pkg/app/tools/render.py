"""
Renderers for coset tables and Steenrod tables: a basis listing and a
"u | P^k" grid as text, plus JSON, CSV and LaTeX exports.
"""
import csv
import io
import json
from typing import Dict, List, Optional, Sequence

from app.errors import DomainError
from app.steenrod import SteenrodTable
from app.weyl import CosetTable, WeylElement

SCHEMA_VERSION = 1
NO_ACTIONS = "(no nontrivial actions)"


def format_expansion(table: SteenrodTable, terms: Sequence[tuple]) -> str:
    """``[(w, 2), (w', 1)]`` -> ``"2 s_{3,2} + s_{4,1}"``; empty -> ``"0"``."""
    if not terms:
        return "0"
    return " + ".join(table.label(w) if c == 1 else f"{c} {table.label(w)}" for w, c in terms)


def _columns(tables: Sequence[SteenrodTable]):
    for t in tables:
        for k in t.k_list:
            yield t, k


def _column_title(t: SteenrodTable, k: int, many_primes: bool) -> str:
    name = t.operation_name(k)
    return f"p={t.prime} {name}" if many_primes else name


def _rows(tables: Sequence[SteenrodTable]) -> List[WeylElement]:
    cosets = tables[0].cosets
    return [u for u in cosets.elements() if any(t.is_nontrivial(u) for t in tables)]


def _check_same_cosets(tables: Sequence[SteenrodTable]) -> None:
    if not tables:
        raise DomainError("nothing to render")
    first = tables[0].cosets
    if any(t.cosets is not first and t.cosets.grades != first.grades for t in tables[1:]):
        raise DomainError("tables are computed on different coset sets")


# -----------------------------------------------------------------------------
# Text
# -----------------------------------------------------------------------------
def render_basis_text(cosets: CosetTable) -> str:
    lines = [f"{cosets.label(w)}: {w.sigma()}" for w in cosets.elements() if w.length > 0]
    return "\n".join(lines) + "\n"


def render_steenrod_text(tables: Sequence[SteenrodTable]) -> str:
    """One row per class with a nonzero expansion, one column per (p, k)."""
    _check_same_cosets(tables)
    many = len({t.prime for t in tables}) > 1
    rows = _rows(tables)
    if not rows:
        return NO_ACTIONS + "\n"
    cols = list(_columns(tables))
    lines = [" | ".join(["u"] + [_column_title(t, k, many) for t, k in cols])]
    for u in rows:
        cells = [format_expansion(t, t.expansion(k, u)) for t, k in cols]
        lines.append(" | ".join([tables[0].label(u)] + cells))
    return "\n".join(lines) + "\n"


# -----------------------------------------------------------------------------
# JSON
# -----------------------------------------------------------------------------
def _context(cosets: CosetTable, prime: Optional[int], k_list: Sequence[int]) -> Dict[str, object]:
    C = cosets.cartan
    return {
        "cartan": [list(r) for r in C.matrix],
        "labels": list(C.labels),
        "parabolic": list(cosets.parabolic),
        "prime": prime,
        "k_list": list(k_list),
        "types": C.classify(),
    }


def _grades(cosets: CosetTable) -> List[Dict[str, object]]:
    return [
        {
            "length": r,
            "elements": [
                {"label": cosets.label(w), "word": list(w.word), "image": list(w.image)} for w in grade
            ],
        }
        for r, grade in enumerate(cosets.grades)
    ]


def basis_document(cosets: CosetTable) -> Dict[str, object]:
    return {
        "schema_version": SCHEMA_VERSION,
        "context": _context(cosets, None, []),
        "grades": _grades(cosets),
        "coefficients": [],
    }


def steenrod_document(table: SteenrodTable) -> Dict[str, object]:
    """Every computed coefficient, zeros included, sorted by (k, u, w)."""
    cosets = table.cosets
    coefficients = [
        {
            "k": k,
            "u_label": cosets.label(cosets.element(*upos), prefix="s"),
            "w_label": cosets.label(cosets.element(*wpos), prefix="s"),
            "value": value,
        }
        for (k, upos, wpos), value in table.sorted_entries()
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "context": _context(cosets, table.prime, table.k_list),
        "grades": _grades(cosets),
        "coefficients": coefficients,
    }


def to_json_document(obj) -> str:
    """Stable JSON text for a CosetTable, a SteenrodTable or a list of SteenrodTables."""
    if isinstance(obj, CosetTable):
        doc = basis_document(obj)
    elif isinstance(obj, SteenrodTable):
        doc = steenrod_document(obj)
    else:
        docs = [steenrod_document(t) for t in obj]
        doc = docs[0] if len(docs) == 1 else docs
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -----------------------------------------------------------------------------
# CSV / LaTeX
# -----------------------------------------------------------------------------
def render_csv(tables: Sequence[SteenrodTable]) -> str:
    """``k,u_label,w_label,value``; a leading ``p`` column when several primes are present."""
    _check_same_cosets(tables)
    many = len({t.prime for t in tables}) > 1
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((["p"] if many else []) + ["k", "u_label", "w_label", "value"])
    for t in tables:
        cosets = t.cosets
        for (k, upos, wpos), value in t.sorted_entries():
            row = [k, cosets.label(cosets.element(*upos), prefix="s"), cosets.label(cosets.element(*wpos), prefix="s"), value]
            writer.writerow(([t.prime] if many else []) + row)
    return buf.getvalue()


def render_latex(tables: Sequence[SteenrodTable]) -> str:
    _check_same_cosets(tables)
    many = len({t.prime for t in tables}) > 1
    cols = list(_columns(tables))
    lines = [
        "\\begin{tabular}{l" + "l" * len(cols) + "}",
        "\\hline",
        " & ".join(["$u$"] + [f"${_column_title(t, k, many)}$" for t, k in cols]) + " \\\\",
        "\\hline",
    ]
    rows = _rows(tables)
    for u in rows:
        cells = [f"${format_expansion(t, t.expansion(k, u))}$" for t, k in cols]
        lines.append(" & ".join([f"${tables[0].label(u)}$"] + cells) + " \\\\")
    if not rows:
        lines.append(f"\\multicolumn{{{len(cols) + 1}}}{{l}}{{{NO_ACTIONS}}} \\\\")
    lines += ["\\hline", "\\end{tabular}"]
    return "\n".join(lines) + "\n"
