"""
Exact sparse polynomials over Z or Z/p, the monomial symmetric functions
m_{k,p} and the integration functional T_A of a strictly upper triangular
integer matrix.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, MutableMapping, Optional, Sequence, Tuple

from app.errors import DomainError

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


# -----------------------------------------------------------------------------
# SparsePoly
# -----------------------------------------------------------------------------
class SparsePoly:
    """Immutable map exponent-vector -> nonzero coefficient."""

    __slots__ = ("nvars", "terms", "modulus")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponents, int]] = None, modulus: Optional[int] = None):
        if nvars < 0:
            raise DomainError(f"variable count must be >= 0, got {nvars}")
        if modulus is not None and modulus < 2:
            raise DomainError(f"modulus must be >= 2, got {modulus}")
        clean: Dict[Exponents, int] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise DomainError(f"exponent vector {exps} has {len(exps)} entries, expected {nvars}")
            if any(e < 0 for e in exps):
                raise DomainError(f"negative exponent in {exps}")
            if modulus is not None:
                c %= modulus
            if c:
                clean[exps] = c
        self.nvars = nvars
        self.terms = clean
        self.modulus = modulus

    # -- constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, modulus: Optional[int] = None) -> "SparsePoly":
        return cls(nvars, {}, modulus)

    @classmethod
    def constant(cls, c: int, nvars: int, modulus: Optional[int] = None) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c}, modulus)

    @classmethod
    def variable(cls, i: int, nvars: int, modulus: Optional[int] = None) -> "SparsePoly":
        """``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise DomainError(f"variable x{i} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(nvars, {tuple(exps): 1}, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1, modulus: Optional[int] = None) -> "SparsePoly":
        return cls(len(exps), {tuple(exps): coef}, modulus)

    # -- arithmetic ------------------------------------------------------------
    def _combine(self, other: "SparsePoly") -> Optional[int]:
        if self.nvars != other.nvars:
            raise DomainError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")
        if self.modulus and other.modulus and self.modulus != other.modulus:
            raise DomainError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
        return self.modulus or other.modulus

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, int):
            return SparsePoly.constant(other, self.nvars, self.modulus)
        return NotImplemented

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        mod = self._combine(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePoly(self.nvars, out, mod)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()}, self.modulus)

    def __sub__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return SparsePoly(self.nvars, {e: c * other for e, c in self.terms.items()}, self.modulus)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        mod = self._combine(other)
        out: Dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(self.nvars, out, mod)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if not isinstance(k, int) or k < 0:
            raise DomainError(f"power must be a non-negative integer, got {k!r}")
        result = SparsePoly.constant(1, self.nvars, self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.constant(other, self.nvars, self.modulus)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, self.modulus, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        mod = f" mod {self.modulus}" if self.modulus else ""
        return f"SparsePoly({self}{mod})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- grading ---------------------------------------------------------------
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: Optional[int] = None) -> bool:
        degrees = {sum(e) for e in self.terms}
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return d is None or degrees == {d}

    def homogeneous_part(self, d: int) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d}, self.modulus)

    # -- structure -------------------------------------------------------------
    def coefficient_of(self, exps: Sequence[int]) -> int:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise DomainError(f"exponent vector {exps} has {len(exps)} entries, expected {self.nvars}")
        return self.terms.get(exps, 0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def reduce_mod(self, p: int) -> "SparsePoly":
        return SparsePoly(self.nvars, self.terms, p)

    def lift(self) -> "SparsePoly":
        """Same coefficients read in Z."""
        return SparsePoly(self.nvars, self.terms, None)

    def extend(self, nvars: int) -> "SparsePoly":
        if nvars < self.nvars:
            raise DomainError(f"cannot shrink {self.nvars} variables to {nvars}")
        pad = (0,) * (nvars - self.nvars)
        return SparsePoly(nvars, {e + pad: c for e, c in self.terms.items()}, self.modulus)

    def swap(self, i: int, j: int) -> "SparsePoly":
        """Exchange ``x_i`` and ``x_j`` (1-based)."""
        a, b = i - 1, j - 1
        out = {}
        for e, c in self.terms.items():
            f = list(e)
            f[a], f[b] = f[b], f[a]
            out[tuple(f)] = c
        return SparsePoly(self.nvars, out, self.modulus)

    def substitute(self, mapping: Mapping[int, "SparsePoly"]) -> "SparsePoly":
        """Replace ``x_i`` by ``mapping[i]`` (1-based) for every key of ``mapping``."""
        for i, q in mapping.items():
            if not 1 <= i <= self.nvars:
                raise DomainError(f"variable x{i} out of range 1..{self.nvars}")
            if q.nvars != self.nvars:
                raise DomainError(f"variable-count mismatch: {q.nvars} vs {self.nvars}")
        mod = self.modulus
        for q in mapping.values():
            mod = mod or q.modulus
        powers: Dict[Tuple[int, int], SparsePoly] = {}

        def _power(i: int, k: int) -> SparsePoly:
            if (i, k) not in powers:
                powers[(i, k)] = mapping[i] ** k
            return powers[(i, k)]

        result = SparsePoly.zero(self.nvars, mod)
        for e, c in self.terms.items():
            kept = tuple(0 if (i + 1) in mapping else k for i, k in enumerate(e))
            term = SparsePoly(self.nvars, {kept: c}, mod)
            for i, k in enumerate(e):
                if k and (i + 1) in mapping:
                    term = term * _power(i + 1, k)
            result = result + term
        return result


# -----------------------------------------------------------------------------
# Monomial symmetric functions
# -----------------------------------------------------------------------------
def monomial_symmetric(positions: Iterable[int], k: int, p: int, m: int, modulus: Optional[int] = None) -> SparsePoly:
    """
    m_{k,p}(x_{i1}, ..., x_{ir}): the sum of all distinct monomials with
    exponent p on k of the chosen variables and 1 on the remaining r - k.
    """
    pos = sorted(positions)
    r = len(pos)
    if len(set(pos)) != r:
        raise DomainError(f"positions {list(positions)} repeat a variable")
    if any(not 1 <= i <= m for i in pos):
        raise DomainError(f"positions {pos} out of range 1..{m}")
    if not 1 <= k <= r:
        raise DomainError(f"partition (p^{k}, 1^{r - k}) does not exist for k={k}, r={r}")
    return SparsePoly(m, monomial_symmetric_terms(pos, k, p, m), modulus)


def monomial_symmetric_terms(positions: Sequence[int], k: int, p: int, m: int) -> Dict[Exponents, int]:
    """Term dict of m_{k,p}; no validation, used on the hot path."""
    base = [0] * m
    for i in positions:
        base[i - 1] = 1
    out: Dict[Exponents, int] = {}
    for chosen in combinations(positions, k):
        e = list(base)
        for i in chosen:
            e[i - 1] = p
        out[tuple(e)] = 1
    return out


# -----------------------------------------------------------------------------
# T_A
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class WordCartanMatrix:
    """Strictly upper triangular ``a[i][j]`` (stored 0-based)."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != m:
                raise DomainError(f"row {i + 1} has {len(row)} entries, expected {m}")
            if any(row[j] != 0 for j in range(i + 1)):
                raise DomainError(f"matrix is not strictly upper triangular at row {i + 1}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "WordCartanMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> int:
        """1-based ``a_{i,j}``."""
        return self.entries[i - 1][j - 1]


def _prefix_ok(e: Sequence[int]) -> bool:
    # substitution only moves degree towards lower indices, and the final
    # step needs exactly x_1; a prefix of degree > its length can never
    # be consumed
    s = 0
    for t, k in enumerate(e, 1):
        s += k
        if s > t:
            return False
    return True


class TAEvaluator:
    """
    T_A with a memo table on (size, packed exponent vector).

    One evaluator per (matrix, modulus); reuse it for every polynomial
    integrated against the same matrix.
    """

    def __init__(self, A: WordCartanMatrix, modulus: Optional[int] = None):
        if A.size > 255:
            raise DomainError(f"matrix size {A.size} exceeds the packed-exponent width")
        self.A = A
        self.modulus = modulus
        self.memo: Dict[bytes, int] = {}
        self._columns = [
            tuple((i, A.entries[i][j]) for i in range(j) if A.entries[i][j] != 0)
            for j in range(A.size)
        ]
        self._expansions: Dict[Tuple[int, int, Tuple[int, ...], int], List[Tuple[Tuple[Tuple[int, int], ...], int]]] = {}

    def __call__(self, h: SparsePoly) -> int:
        m = self.A.size
        if h.nvars != m:
            raise DomainError(f"T_A needs a polynomial in {m} variables, got {h.nvars}")
        if not h.is_homogeneous(m):
            raise DomainError(f"T_A needs a homogeneous polynomial of degree {m}")
        return self.evaluate_terms(h.terms)

    def evaluate_terms(self, terms: Mapping[Exponents, int]) -> int:
        total = 0
        for e, c in terms.items():
            if _prefix_ok(e):
                total += c * self._t(tuple(e))
        return total % self.modulus if self.modulus else total

    def _reduce(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def _expansion(self, j: int, s: int, caps: Tuple[int, ...], need_last: int):
        """
        Terms of ``(sum_i a_{i,j} x_i)^s`` as ((index, power), ...) -> coefficient,
        restricted to the ones that can still integrate to something nonzero:
        the degree added up to the t-th column entry stays within ``caps[t]``
        and ``x_j`` (the new last variable) receives at least ``need_last``.
        """
        key = (j, s, caps, need_last)
        hit = self._expansions.get(key)
        if hit is not None:
            return hit
        column = self._columns[j]
        last = len(column) - 1
        out: List[Tuple[Tuple[Tuple[int, int], ...], int]] = []

        def _walk(t: int, left: int, added: int, parts: Tuple[Tuple[int, int], ...], coef: int):
            i, a = column[t]
            if t == last:
                if left < need_last or added + left > caps[t]:
                    return
                coef = self._reduce(coef * a ** left)
                if coef:
                    out.append((parts + ((i, left),) if left else parts, coef))
                return
            for c in range(min(left - need_last, caps[t] - added) + 1):
                nxt = self._reduce(coef * math.comb(left, c) * a ** c)
                if nxt:
                    _walk(t + 1, left - c, added + c, parts + ((i, c),) if c else parts, nxt)

        if column and s <= caps[-1]:
            _walk(0, s, 0, (), 1)
        self._expansions[key] = out
        return out

    def _t(self, e: Exponents) -> int:
        j = len(e)
        if j == 0:
            return 1
        r = e[-1]
        if r == 0:
            return 0
        if j == 1:
            return 1
        key = bytes(e)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        base = e[:-1]
        if r == 1:
            value = self._t(base)
        else:
            value = 0
            column = self._columns[j - 1]
            # slack[t]: how much more degree the prefix base[:t+1] can absorb
            slack, total = [], 0
            for t, k in enumerate(base, 1):
                total += k
                slack.append(t - total)
            for t in range(len(slack) - 2, -1, -1):
                slack[t] = min(slack[t], slack[t + 1])
            need_last = 0 if base[-1] else 1
            if column and (not need_last or column[-1][0] == j - 2):
                caps = tuple(slack[i] for i, _ in column)
                for parts, coef in self._expansion(j - 1, r - 1, caps, need_last):
                    f = list(base)
                    for i, c in parts:
                        f[i] += c
                    value += coef * self._t(tuple(f))
        value = self._reduce(value)
        self.memo[key] = value
        return value


def t_a_evaluate(
    A: WordCartanMatrix,
    h: SparsePoly,
    modulus: Optional[int] = None,
    memo: Optional[MutableMapping[bytes, int]] = None,
) -> int:
    """
    T_A(h) for h homogeneous of degree m in m variables:

    1) terms without x_m vanish;  2) T(x_1) = 1;
    3) T_A(h x_m^r) = T_{A'}(h (a_{1,m} x_1 + ... + a_{m-1,m} x_{m-1})^{r-1}).

    ``memo`` may be shared between calls with the same matrix and modulus.
    """
    ev = TAEvaluator(A, modulus if modulus is not None else h.modulus)
    if memo is not None:
        ev.memo = memo  # type: ignore[assignment]
    return ev(h)
