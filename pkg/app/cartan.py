"""
Cartan matrices of the finite simple types and the simple reflections they
induce on weight coordinates.

Convention: ``C[i][j] = 2(b_i, b_j) / (b_j, b_j)`` with simple roots ordered as
in Humphreys' tables.  A weight is stored by its coordinates in the
fundamental-weight basis, so the simple reflection ``s_i`` reads

    v'[j] = v[j] - v[i] * C[i][j]

and the all-ones vector ``rho`` is regular for every finite type.
"""
import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.errors import CartanError

logger = logging.getLogger(__name__)

WeightVector = Tuple[int, ...]

_ALLOWED_OFF_DIAGONAL = {0, -1, -2, -3}
_COXETER_EXPONENT = {0: 2, 1: 3, 2: 4, 3: 6}
_EXCEPTIONAL_ORDERS = {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}


# -----------------------------------------------------------------------------
# Builtin types
# -----------------------------------------------------------------------------
def _valid_pair(letter: str, rank: int) -> bool:
    if letter == "A":
        return rank >= 1
    if letter in ("B", "C"):
        return rank >= 2
    if letter == "D":
        return rank >= 3
    if letter == "E":
        return 6 <= rank <= 8
    if letter == "F":
        return rank == 4
    if letter == "G":
        return rank == 2
    return False


def _dynkin_matrix(letter: str, rank: int) -> np.ndarray:
    A = 2 * np.eye(rank, dtype=int)
    if letter in ("A", "B", "C", "D", "F"):
        A[range(rank - 1), range(1, rank)] = -1
        A[range(1, rank), range(rank - 1)] = -1
    if letter == "B":
        # last root short
        A[rank - 2, rank - 1] = -2
    elif letter == "C":
        # last root long
        A[rank - 1, rank - 2] = -2
    elif letter == "D":
        # n-2 is the branch node, joined to both n-1 and n
        A[rank - 2, rank - 1] = A[rank - 1, rank - 2] = 0
        A[rank - 3, rank - 1] = A[rank - 1, rank - 3] = -1
    elif letter == "E":
        # 1 - 3 - 4 - 5 - ... - n, with 2 hanging off 4
        for i, j in [(1, 3), (2, 4), (3, 4)] + [(t, t + 1) for t in range(4, rank)]:
            A[i - 1, j - 1] = A[j - 1, i - 1] = -1
    elif letter == "F":
        A[1, 2] = -2
    elif letter == "G":
        A[0, 1] = -1
        A[1, 0] = -3
    return A


def builtin_cartan(type_letter: str, rank: int) -> "CartanData":
    """Cartan matrix of a finite simple type, e.g. ``builtin_cartan("G", 2)``."""
    letter = str(type_letter).strip().upper()
    if not isinstance(rank, (int, np.integer)) or not _valid_pair(letter, int(rank)):
        raise CartanError(f"no finite Cartan type for {(type_letter, rank)!r}")
    rows = _dynkin_matrix(letter, int(rank)).tolist()
    return CartanData.from_matrix(rows)


def parse_type(name: str) -> "CartanData":
    """``"D6"`` -> ``builtin_cartan("D", 6)``."""
    name = (name or "").strip()
    if len(name) < 2 or not name[1:].isdigit():
        raise CartanError(f"cannot parse Lie type {name!r}; expected e.g. 'G2' or 'D6'")
    return builtin_cartan(name[0], int(name[1:]))


def load_cartan_file(path: str | Path) -> "CartanData":
    """Read ``{"matrix": [...], "labels": [...]}`` or a bare list of rows."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise CartanError(f"cannot read Cartan file {str(path)!r}: {e}") from e
    if isinstance(doc, dict):
        return CartanData.from_matrix(doc.get("matrix"), labels=doc.get("labels"))
    return CartanData.from_matrix(doc)


# -----------------------------------------------------------------------------
# CartanData
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class CartanData:
    rank: int
    matrix: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]
    _symmetrizer: Tuple[Fraction, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def from_matrix(cls, rows: Optional[Sequence[Sequence[int]]], labels: Optional[Iterable[str]] = None) -> "CartanData":
        if rows is None or len(rows) == 0:
            raise CartanError("Cartan matrix is empty")
        try:
            mat = tuple(tuple(_as_int(x) for x in row) for row in rows)
        except (TypeError, ValueError) as e:
            raise CartanError(f"Cartan matrix entries must be integers: {e}") from e
        n = len(mat)
        if any(len(row) != n for row in mat):
            raise CartanError(f"Cartan matrix must be square, got row lengths {[len(r) for r in mat]}")
        for i in range(n):
            if mat[i][i] != 2:
                raise CartanError(f"diagonal entry C[{i + 1}][{i + 1}] = {mat[i][i]}, expected 2")
            for j in range(n):
                if i == j:
                    continue
                if mat[i][j] not in _ALLOWED_OFF_DIAGONAL:
                    raise CartanError(f"off-diagonal entry C[{i + 1}][{j + 1}] = {mat[i][j]} not in {{0,-1,-2,-3}}")
                if (mat[i][j] == 0) != (mat[j][i] == 0):
                    raise CartanError(f"C[{i + 1}][{j + 1}] and C[{j + 1}][{i + 1}] must vanish together")
        sym = _symmetrizer(mat)
        _check_positive_definite(mat, sym)

        names = tuple(str(x) for x in labels) if labels is not None else tuple(str(i + 1) for i in range(n))
        if len(names) != n:
            raise CartanError(f"expected {n} labels, got {len(names)}")
        return cls(rank=n, matrix=mat, labels=names, _symmetrizer=sym)

    def entry(self, i: int, j: int) -> int:
        """1-based Cartan number ``b_i o b_j``."""
        self.check_node(i)
        self.check_node(j)
        return self.matrix[i - 1][j - 1]

    def check_node(self, i: int) -> None:
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.rank:
            raise CartanError(f"node index {i!r} out of range 1..{self.rank}")

    def rho(self) -> WeightVector:
        return (1,) * self.rank

    def coxeter_exponent(self, i: int, j: int) -> int:
        if i == j:
            self.check_node(i)
            return 1
        return _COXETER_EXPONENT[self.entry(i, j) * self.entry(j, i)]

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=int)

    def root_lengths(self) -> Tuple[Fraction, ...]:
        """Squared root lengths up to a common factor per component."""
        return self._symmetrizer

    # -- components and classification ---------------------------------------
    def components(self) -> List[List[int]]:
        seen: set[int] = set()
        out: List[List[int]] = []
        for start in range(self.rank):
            if start in seen:
                continue
            comp, queue = [], deque([start])
            seen.add(start)
            while queue:
                i = queue.popleft()
                comp.append(i + 1)
                for j in range(self.rank):
                    if j not in seen and self.matrix[i][j] != 0:
                        seen.add(j)
                        queue.append(j)
            out.append(sorted(comp))
        return out

    def classify(self) -> List[str]:
        """Type label (``"F4"``, ``"A6"``, ...) of each connected component."""
        return [_classify_component(self, comp) for comp in self.components()]

    def weyl_order(self) -> int:
        order = 1
        for label in self.classify():
            order *= _weyl_order_of(label[0], int(label[1:]))
        return order

    def restrict(self, nodes: Iterable[int]) -> Optional["CartanData"]:
        """Sub-Cartan matrix on ``nodes`` (the Levi part), None when empty."""
        idx = sorted(set(nodes))
        if not idx:
            return None
        for i in idx:
            self.check_node(i)
        rows = [[self.matrix[i - 1][j - 1] for j in idx] for i in idx]
        return CartanData.from_matrix(rows, labels=[self.labels[i - 1] for i in idx])

    def to_json(self) -> Dict[str, object]:
        return {"matrix": [list(r) for r in self.matrix], "labels": list(self.labels)}


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError(f"{x!r} is not an integer")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise TypeError(f"{x!r} is not an integer")


def _symmetrizer(mat: Tuple[Tuple[int, ...], ...]) -> Tuple[Fraction, ...]:
    # d_j = d_i * C[j][i] / C[i][j]  makes  C[i][j] * d_j  symmetric
    n = len(mat)
    d: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i == j or mat[i][j] == 0:
                    continue
                want = d[i] * Fraction(mat[j][i], mat[i][j])
                if d[j] is None:
                    d[j] = want
                    queue.append(j)
                elif d[j] != want:
                    raise CartanError("Cartan matrix is not symmetrizable")
    return tuple(d)  # type: ignore[arg-type]


def _check_positive_definite(mat, sym) -> None:
    n = len(mat)
    B = np.array([[float(mat[i][j] * sym[j]) for j in range(n)] for i in range(n)])
    try:
        np.linalg.cholesky(B)
    except np.linalg.LinAlgError as e:
        raise CartanError("Cartan matrix is not of finite type (symmetrization is not positive definite)") from e


def _classify_component(C: CartanData, comp: List[int]) -> str:
    n = len(comp)
    if n == 1:
        return "A1"
    edges = {}
    degree = {i: 0 for i in comp}
    for a in comp:
        for b in comp:
            if a < b and C.matrix[a - 1][b - 1] != 0:
                edges[(a, b)] = C.matrix[a - 1][b - 1] * C.matrix[b - 1][a - 1]
                degree[a] += 1
                degree[b] += 1
    products = set(edges.values())
    if 3 in products:
        return "G2"
    if 2 in products:
        (a, b), = [e for e, v in edges.items() if v == 2]
        if n == 4 and degree[a] == 2 and degree[b] == 2:
            return "F4"
        if n == 2:
            return "B2"
        end, other = (a, b) if degree[a] == 1 else (b, a)
        lengths = C.root_lengths()
        # B: the end node of the double bond carries the short root
        return f"B{n}" if lengths[end - 1] < lengths[other - 1] else f"C{n}"
    branch = [i for i in comp if degree[i] == 3]
    if not branch:
        return f"A{n}"
    arms = _arm_lengths(C, comp, branch[0])
    if arms.count(1) >= 2:
        return f"D{n}"
    return f"E{n}"


def _arm_lengths(C: CartanData, comp: List[int], centre: int) -> List[int]:
    arms = []
    for nb in comp:
        if nb == centre or C.matrix[centre - 1][nb - 1] == 0:
            continue
        length, prev, cur = 1, centre, nb
        while True:
            nxt = [x for x in comp if x not in (prev, cur) and C.matrix[cur - 1][x - 1] != 0]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def _weyl_order_of(letter: str, n: int) -> int:
    if letter == "A":
        return math.factorial(n + 1)
    if letter in ("B", "C"):
        return 2 ** n * math.factorial(n)
    if letter == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return _EXCEPTIONAL_ORDERS[(letter, n)]


# -----------------------------------------------------------------------------
# Reflections
# -----------------------------------------------------------------------------
def reflect(C: CartanData, i: int, v: Sequence[int]) -> WeightVector:
    """Simple reflection ``s_i`` (1-based) in fundamental-weight coordinates."""
    C.check_node(i)
    if len(v) != C.rank:
        raise CartanError(f"weight vector has {len(v)} coordinates, expected {C.rank}")
    row = C.matrix[i - 1]
    c = v[i - 1]
    if c == 0:
        return tuple(v)
    return tuple(vj - c * rj for vj, rj in zip(v, row))


def apply_word(C: CartanData, word: Sequence[int], v: Sequence[int]) -> WeightVector:
    """``s_{w1} o ... o s_{wm} (v)``: the rightmost letter acts first."""
    out = tuple(v)
    for i in reversed(word):
        out = reflect(C, i, out)
    return out
