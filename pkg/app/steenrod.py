"""
Reduced powers on Schubert classes of G/H, straight from the Cartan matrix.

For u, w minimal coset representatives with l(u) = r and
l(w) = m = r + k(p - 1), and w = s_{b1} ... s_{bm} a reduced word:

    a^k_{w,u} = T_{A_w}[ sum over J = [i1 < ... < ir] with s_J = u of m_{k,p}(x_{i1}, ..., x_{ir}) ]  mod p

where A_w is the strictly upper triangular matrix a_{ij} = -b_i o b_j.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.cartan import CartanData, apply_word, reflect
from app.errors import DomainError
from app.poly import TAEvaluator, WordCartanMatrix, monomial_symmetric_terms
from app.weyl import DEFAULT_BUDGET, CosetTable, WeylElement, enumerate_cosets, is_reduced

logger = logging.getLogger(__name__)

Position = Tuple[int, int]   # (length r, 1-based index i) of w_{r,i}
EntryKey = Tuple[int, Position, Position]


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"p={p!r} is not a prime")


# -----------------------------------------------------------------------------
# Building blocks
# -----------------------------------------------------------------------------
def cartan_matrix_of_word(C: CartanData, word: Sequence[int]) -> WordCartanMatrix:
    """``a[i][j] = -C[word[i]][word[j]]`` for i < j, zero elsewhere."""
    for i in word:
        C.check_node(i)
    m = len(word)
    rows = [[(-C.matrix[word[i] - 1][word[j] - 1] if i < j else 0) for j in range(m)] for i in range(m)]
    return WordCartanMatrix.from_rows(rows)


def solve_subsequences(table: CosetTable, w_word: Sequence[int], u: WeylElement) -> List[Tuple[int, ...]]:
    """
    All 1-based position sets J, |J| = l(u), with s_J = u.

    Positions are chosen left to right against the remaining target
    ``s_{j_t} ... s_{j_1} u``: the next letter must be a left descent of it,
    which is exactly the condition that every factor of the product raises
    length.  A branch also dies once too few positions remain.
    """
    C = table.cartan
    m, r = len(w_word), u.length
    out: List[Tuple[int, ...]] = []
    if r > m:
        return out

    def _search(start: int, target: Tuple[int, ...], remaining: int, chosen: Tuple[int, ...]):
        if remaining == 0:
            out.append(chosen)
            return
        for pos in range(start, m - remaining + 1):
            s = w_word[pos]
            if target[s - 1] < 0:
                _search(pos + 1, reflect(C, s, target), remaining - 1, chosen + (pos + 1,))

    _search(0, u.image, r, ())
    return out


def steenrod_coefficient(
    table: CosetTable,
    p: int,
    k: int,
    u: WeylElement,
    w: WeylElement,
    word: Optional[Sequence[int]] = None,
    evaluator: Optional[TAEvaluator] = None,
) -> int:
    """a^k_{w,u} in {0..p-1}; ``word`` overrides w's minimal decomposition."""
    _check_prime(p)
    C = table.cartan
    if word is None:
        word = w.word
    else:
        word = tuple(word)
        if not is_reduced(C, word) or apply_word(C, word, C.rho()) != w.image:
            raise DomainError(f"{word} is not a reduced word of {w.sigma()}")
    m, r = len(word), u.length
    if k < 0 or m != r + k * (p - 1):
        raise DomainError(f"degree constraint l(w) = l(u) + k(p-1) fails: {m} != {r} + {k}*{p - 1}")
    if k == 0:
        return 1 if u.image == w.image else 0
    if k > r:
        return 0
    subsets = solve_subsequences(table, word, u)
    if not subsets:
        return 0
    terms: Dict[Tuple[int, ...], int] = {}
    for J in subsets:
        for e, c in monomial_symmetric_terms(J, k, p, m).items():
            terms[e] = (terms.get(e, 0) + c) % p
    if evaluator is None:
        evaluator = TAEvaluator(cartan_matrix_of_word(C, word), modulus=p)
    value = evaluator.evaluate_terms(terms)
    logger.debug("[STEENROD] p=%d k=%d u=%s w=%s |J|=%d -> %d", p, k, u.word, word, len(subsets), value)
    return value


# -----------------------------------------------------------------------------
# Tables
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class SteenrodTable:
    cosets: CosetTable
    prime: int
    k_list: Tuple[int, ...]
    entries: Dict[EntryKey, int] = field(default_factory=dict, repr=False)

    @property
    def cartan(self) -> CartanData:
        return self.cosets.cartan

    @property
    def parabolic(self) -> Tuple[int, ...]:
        return self.cosets.parabolic

    def operation_name(self, k: int) -> str:
        return f"Sq^{{{2 * k}}}" if self.prime == 2 else f"P^{{{k}}}"

    def label(self, w: WeylElement) -> str:
        return self.cosets.label(w, prefix="s")

    def coefficient(self, k: int, u: WeylElement, w: WeylElement) -> int:
        key = (k, self.cosets.position(u), self.cosets.position(w))
        if key not in self.entries:
            raise DomainError(f"no coefficient for k={k}, u={self.label(u)}, w={self.label(w)}")
        return self.entries[key]

    def expansion(self, k: int, u: WeylElement) -> List[Tuple[WeylElement, int]]:
        """Nonzero terms of P^k(s_u), in table order."""
        r = u.length + k * (self.prime - 1)
        upos = self.cosets.position(u)
        out = []
        for i, w in enumerate(self.cosets.grade(r), 1):
            c = self.entries.get((k, upos, (r, i)), 0)
            if c:
                out.append((w, c))
        return out

    def is_nontrivial(self, u: WeylElement) -> bool:
        return any(self.expansion(k, u) for k in self.k_list)

    def nontrivial_rows(self) -> List[WeylElement]:
        return [u for u in self.cosets.elements() if self.is_nontrivial(u)]

    def matrix(self, k: int, r: int) -> np.ndarray:
        """Matrix of P^k from degree r: rows W^{r+k(p-1)}, columns W^r."""
        target = r + k * (self.prime - 1)
        src, dst = self.cosets.grade(r), self.cosets.grade(target)
        M = np.zeros((len(dst), len(src)), dtype=np.int64)
        for j in range(len(src)):
            for i in range(len(dst)):
                M[i, j] = self.entries.get((k, (r, j + 1), (target, i + 1)), 0)
        return M

    def sorted_entries(self) -> List[Tuple[EntryKey, int]]:
        return sorted(self.entries.items())


def adem_defect(table: SteenrodTable, r: int) -> np.ndarray:
    """
    P^1 P^1 - 2 P^2 (odd p) or Sq^2 Sq^2 (p = 2) on degree r, mod p.

    Both vanish in the Steenrod algebra on even-dimensional torsion-free
    cohomology, so the result is a zero matrix when the table is right.
    """
    p = table.prime
    first = table.matrix(1, r)
    twice = table.matrix(1, r + (p - 1)) @ first
    if p == 2:
        return twice % 2
    return (twice - 2 * table.matrix(2, r)) % p


_WORKER: Dict[str, object] = {}


def _init_worker(cosets: CosetTable, p: int, k_list: Tuple[int, ...]) -> None:
    _WORKER.update(cosets=cosets, p=p, k_list=k_list)


def _coefficients_for(wpos: Position) -> List[Tuple[EntryKey, int]]:
    return _coefficients_for_w(_WORKER["cosets"], _WORKER["p"], _WORKER["k_list"], wpos)  # type: ignore[arg-type]


def _coefficients_for_w(cosets: CosetTable, p: int, k_list: Tuple[int, ...], wpos: Position) -> List[Tuple[EntryKey, int]]:
    w = cosets.element(*wpos)
    m = w.length
    evaluator = TAEvaluator(cartan_matrix_of_word(cosets.cartan, w.word), modulus=p)
    out = []
    for k in k_list:
        r = m - k * (p - 1)
        if r < 0:
            continue
        for i, u in enumerate(cosets.grade(r), 1):
            value = steenrod_coefficient(cosets, p, k, u, w, evaluator=evaluator)
            out.append(((k, (r, i), wpos), value))
    return out


def steenrod_table(
    C: CartanData,
    parabolic: Iterable[int],
    p: int,
    k_range: Iterable[int],
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cosets: Optional[CosetTable] = None,
) -> SteenrodTable:
    """Every a^k_{w,u} for k in ``k_range``; sharded by w across ``threads`` processes."""
    _check_prime(p)
    k_list = tuple(sorted(set(int(k) for k in k_range)))
    if any(k < 0 for k in k_list):
        raise DomainError(f"k must be >= 0, got {list(k_list)}")
    if cosets is None:
        cosets = enumerate_cosets(C, parabolic, budget=budget)
    positions = [(r, i) for r, grade in enumerate(cosets.grades) for i in range(1, len(grade) + 1)]

    entries: Dict[EntryKey, int] = {}
    if threads > 1 and len(positions) > 1:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(cosets, p, k_list)) as pool:
            for chunk in pool.map(_coefficients_for, positions, chunksize=max(1, len(positions) // (4 * threads))):
                entries.update(chunk)
    else:
        for wpos in positions:
            entries.update(_coefficients_for_w(cosets, p, k_list, wpos))

    table = SteenrodTable(cosets=cosets, prime=p, k_list=k_list, entries=dict(sorted(entries.items())))
    logger.info(
        "[STEENROD] p=%d k=%s: %d coefficients, %d nontrivial classes",
        p, list(k_list), len(entries), len(table.nontrivial_rows()),
    )
    return table
