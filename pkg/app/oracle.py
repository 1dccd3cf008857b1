"""
Type A cross-check through Schubert polynomials.

Works in Z_p[x_1..x_n] with permutations in one-line notation and never
touches the Weyl orbit code or T_A: the class of u is its Schubert
polynomial, each degree-2 generator obeys P(x) = x + x^p, and the coefficient
of S_w in a homogeneous polynomial g of degree l(w) is the constant
``d_w g`` left after the divided differences along a reduced word of w.
"""
import logging
import math
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.cartan import builtin_cartan
from app.errors import DomainError
from app.poly import SparsePoly

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]


# -----------------------------------------------------------------------------
# Permutations
# -----------------------------------------------------------------------------
def word_to_permutation(word: Sequence[int], n: int) -> Perm:
    """``s_{w1} s_{w2} ... `` with s_i the transposition (i, i+1)."""
    perm = list(range(1, n + 1))
    for i in word:
        if not 1 <= i < n:
            raise DomainError(f"s_{i} is not a generator of S_{n}")
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def inversions(perm: Perm) -> int:
    return sum(1 for a, b in combinations(perm, 2) if a > b)


def right_descents(perm: Perm) -> List[int]:
    return [i + 1 for i in range(len(perm) - 1) if perm[i] > perm[i + 1]]


def left_descents(perm: Perm) -> List[int]:
    pos = {v: i for i, v in enumerate(perm)}
    return [a for a in range(1, len(perm)) if pos[a] > pos[a + 1]]


def _times_s(perm: Perm, i: int) -> Perm:
    p = list(perm)
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def _s_times(perm: Perm, a: int) -> Perm:
    return tuple(a + 1 if v == a else a if v == a + 1 else v for v in perm)


def reduced_word(perm: Perm) -> Tuple[int, ...]:
    """Some reduced word (a_1, ..., a_l) with perm = s_{a1} ... s_{al}."""
    rev = []
    while True:
        d = right_descents(perm)
        if not d:
            break
        rev.append(d[0])
        perm = _times_s(perm, d[0])
    return tuple(reversed(rev))


def grassmannian_cosets(n: int, parabolic: Iterable[int]) -> Dict[int, List[Perm]]:
    """Minimal coset representatives of S_n / W' graded by length: no descent on ``parabolic``."""
    nodes = set(parabolic)
    if any(not 1 <= i < n for i in nodes):
        raise DomainError(f"parabolic {sorted(nodes)} not inside 1..{n - 1}")
    graded: Dict[int, List[Perm]] = {}
    for perm in permutations(range(1, n + 1)):
        if any(perm[i - 1] > perm[i] for i in nodes):
            continue
        graded.setdefault(inversions(perm), []).append(perm)
    return graded


# -----------------------------------------------------------------------------
# Divided differences and Schubert polynomials
# -----------------------------------------------------------------------------
def divided_difference(i: int, f: SparsePoly) -> SparsePoly:
    """(f - s_i f) / (x_i - x_{i+1}), computed monomial by monomial."""
    if not 1 <= i < f.nvars:
        raise DomainError(f"divided difference d_{i} needs 1 <= i < {f.nvars}")
    a_idx, b_idx = i - 1, i
    out: Dict[Tuple[int, ...], int] = {}
    for e, c in f.terms.items():
        a, b = e[a_idx], e[b_idx]
        if a == b:
            continue
        # x^a y^b - x^b y^a over x - y is a signed geometric sum
        lo, hi, sign = (b, a, 1) if a > b else (a, b, -1)
        for t in range(hi - lo):
            g = list(e)
            g[a_idx] = hi - 1 - t
            g[b_idx] = lo + t
            key = tuple(g)
            out[key] = out.get(key, 0) + sign * c
    return SparsePoly(f.nvars, out, f.modulus)


class SchubertPolyBasis:
    """Schubert polynomials of S_n, computed on demand from the top one."""

    def __init__(self, n: int, modulus: Optional[int] = None):
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        self.n = n
        self.modulus = modulus
        self.w0: Perm = tuple(range(n, 0, -1))
        top = tuple(n - 1 - i for i in range(n))
        self.elements: Dict[Perm, SparsePoly] = {self.w0: SparsePoly(n, {top: 1}, modulus)}

    @classmethod
    def build(cls, n: int, modulus: Optional[int] = None) -> "SchubertPolyBasis":
        """Every Schubert polynomial of S_n."""
        basis = cls(n, modulus)
        for perm in permutations(range(1, n + 1)):
            basis.schubert_polynomial(perm)
        return basis

    def __getitem__(self, perm: Perm) -> SparsePoly:
        return self.schubert_polynomial(perm)

    def schubert_polynomial(self, perm: Perm) -> SparsePoly:
        perm = tuple(perm)
        if sorted(perm) != list(range(1, self.n + 1)):
            raise DomainError(f"{perm} is not a permutation of 1..{self.n}")
        if perm in self.elements:
            return self.elements[perm]
        # u = w0 * (s_{j1} ... s_{jm}) with lengths dropping by one at each step
        v = tuple(self.n + 1 - x for x in perm)
        current, poly = self.w0, self.elements[self.w0]
        for j in reduced_word(v):
            current = _times_s(current, j)
            if current not in self.elements:
                self.elements[current] = divided_difference(j, poly)
            poly = self.elements[current]
        return poly


def schubert_polynomial(perm: Sequence[int], modulus: Optional[int] = None) -> SparsePoly:
    return SchubertPolyBasis(len(perm), modulus)[tuple(perm)]


def reduced_power(f: SparsePoly, p: int, k: int) -> SparsePoly:
    """
    P^k of a polynomial in degree-2 classes: the part of f(x + x^p) of degree
    deg f + k(p-1), reduced mod p.  Each monomial splits k among its variables.
    """
    out: Dict[Tuple[int, ...], int] = {}
    for e, c in f.terms.items():
        support = [i for i, k_i in enumerate(e) if k_i]
        for split in _splits(k, [e[i] for i in support]):
            coef = c
            g = list(e)
            for i, t in zip(support, split):
                coef *= math.comb(e[i], t)
                g[i] += t * (p - 1)
            coef %= p
            if coef:
                key = tuple(g)
                out[key] = (out.get(key, 0) + coef) % p
    return SparsePoly(f.nvars, out, p)


def _splits(k: int, caps: Sequence[int]):
    if not caps:
        if k == 0:
            yield ()
        return
    for t in range(min(k, caps[0]) + 1):
        for rest in _splits(k - t, caps[1:]):
            yield (t,) + rest


def schubert_coefficients(g: SparsePoly, targets: Iterable[Perm]) -> Dict[Perm, int]:
    """Coefficient of S_w in homogeneous g for each target w with l(w) = deg g."""
    cache: Dict[Perm, SparsePoly] = {}
    n = g.nvars
    identity = tuple(range(1, n + 1))
    cache[identity] = g

    def _apply(y: Perm) -> SparsePoly:
        # d_y = d_a o d_{y'} for y = s_a y' reduced
        if y in cache:
            return cache[y]
        a = left_descents(y)[0]
        prev = _apply(_s_times(y, a))
        result = divided_difference(a, prev) if prev else prev
        cache[y] = result
        return result

    out: Dict[Perm, int] = {}
    for w in targets:
        h = _apply(tuple(w))
        if h.degree() > 0:
            raise DomainError(f"divided-difference ladder for {w} left a nonconstant remainder")
        out[tuple(w)] = h.constant_term()
    return out


# -----------------------------------------------------------------------------
# Oracle
# -----------------------------------------------------------------------------
def oracle_steenrod(
    n: int,
    parabolic: Iterable[int],
    p: int,
    k: int,
    u: Perm,
    basis: Optional[SchubertPolyBasis] = None,
) -> Dict[Perm, int]:
    """Nonzero coefficients of P^k(s_u) in the Schubert basis of S_n / W', mod p."""
    nodes = set(parabolic)
    u = tuple(u)
    if any(u[i - 1] > u[i] for i in nodes):
        raise DomainError(f"{u} is not a minimal coset representative for parabolic {sorted(nodes)}")
    if k == 0:
        return {u: 1}
    basis = basis or SchubertPolyBasis(n, modulus=p)
    r = inversions(u)
    targets = grassmannian_cosets(n, nodes).get(r + k * (p - 1), [])
    if not targets:
        return {}
    g = reduced_power(basis[u], p, k)
    coeffs = schubert_coefficients(g, targets)
    return {w: c % p for w, c in coeffs.items() if c % p}


def oracle_table(n: int, parabolic: Iterable[int], p: int, k_list: Iterable[int]) -> Dict[Tuple[int, Perm, Perm], int]:
    """Every coefficient, zeros included, keyed (k, u, w) like a Steenrod table."""
    nodes = tuple(sorted(set(parabolic)))
    graded = grassmannian_cosets(n, nodes)
    basis = SchubertPolyBasis(n, modulus=p)
    out: Dict[Tuple[int, Perm, Perm], int] = {}
    for k in sorted(set(k_list)):
        for r, grade in sorted(graded.items()):
            targets = graded.get(r + k * (p - 1), [])
            for u in grade:
                expansion = oracle_steenrod(n, nodes, p, k, u, basis=basis) if targets else {}
                for w in targets:
                    out[(k, u, w)] = expansion.get(w, 0)
    logger.debug("[ORACLE] A%d parabolic=%s p=%d: %d coefficients", n - 1, list(nodes), p, len(out))
    return out


def type_a_rank(cosets) -> int:
    """n with the Cartan matrix equal to the builtin A_{n-1}; DomainError otherwise."""
    C = cosets.cartan
    if C.matrix != builtin_cartan("A", C.rank).matrix:
        raise DomainError(f"oracle needs a type A Cartan matrix in standard order, got {'+'.join(C.classify())}")
    return C.rank + 1


def cross_check(table) -> List[Tuple[int, str, str, int, int]]:
    """(k, u_label, w_label, engine, oracle) for every disagreeing coefficient."""
    cosets = table.cosets
    n = type_a_rank(cosets)
    p = table.prime
    basis = SchubertPolyBasis(n, modulus=p)
    perm_of = {w.image: word_to_permutation(w.word, n) for w in cosets.elements()}
    mismatches = []
    for k in table.k_list:
        for u in cosets.elements():
            expected = oracle_steenrod(n, cosets.parabolic, p, k, perm_of[u.image], basis=basis)
            for w in cosets.grade(u.length + k * (p - 1)):
                got = table.coefficient(k, u, w)
                want = expected.get(perm_of[w.image], 0)
                if got != want:
                    mismatches.append((k, table.label(u), table.label(w), got, want))
    logger.info("[ORACLE] A%d parabolic=%s p=%d k=%s: %d mismatches",
                n - 1, list(cosets.parabolic), p, list(table.k_list), len(mismatches))
    return mismatches
