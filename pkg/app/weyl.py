"""
Minimal coset representatives W/W' by breadth-first orbit enumeration.

The parabolic subgroup W' is generated by the simple reflections of the nodes
in ``parabolic``.  It is the stabilizer of the dominant vector ``v0`` (0 on
those nodes, 1 elsewhere), so cosets are orbit points of ``v0`` and the BFS
depth of a point is the length of its minimal representative.  Every element
also carries its image of ``rho``, which pins down the group element itself.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.cartan import CartanData, WeightVector, reflect
from app.errors import BudgetExceeded, DomainError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class WeylElement:
    image: WeightVector          # w(rho)
    word: Tuple[int, ...]        # minimal reduced decomposition
    orbit_point: WeightVector    # w(v0), the coset key

    @property
    def length(self) -> int:
        return len(self.word)

    def sigma(self) -> str:
        return "".join(f"σ{i}" for i in self.word) or "1"


def identity(C: CartanData, parabolic: Iterable[int] = ()) -> WeylElement:
    return WeylElement(image=C.rho(), word=(), orbit_point=base_point(C, parabolic))


def base_point(C: CartanData, parabolic: Iterable[int]) -> WeightVector:
    nodes = set(parabolic)
    for i in nodes:
        C.check_node(i)
    return tuple(0 if i + 1 in nodes else 1 for i in range(C.rank))


# -----------------------------------------------------------------------------
# Words
# -----------------------------------------------------------------------------
def minimal_word(image: Sequence[int], C: CartanData, table: Optional["CosetTable"] = None) -> Tuple[int, ...]:
    """
    Lexicographically least reduced word of the element with ``w(rho) = image``.

    Greedy: the first letter of any reduced word is a left descent, i.e. a node
    whose coordinate in ``w(rho)`` is negative; take the smallest, strip it and
    repeat.
    """
    v = tuple(image)
    if len(v) != C.rank:
        raise DomainError(f"image has {len(v)} coordinates, expected {C.rank}")
    if table is not None and table.find(v) is None:
        raise DomainError(f"element with image {v} is not in the enumerated orbit")
    word: List[int] = []
    while True:
        i = next((j for j, c in enumerate(v) if c < 0), None)
        if i is None:
            break
        word.append(i + 1)
        v = reflect(C, i + 1, v)
    if v != C.rho():
        raise DomainError(f"{tuple(image)} is not in the Weyl orbit of rho")
    return tuple(word)


def reduced_words(C: CartanData, image: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Every reduced word of the element, in lexicographic order."""
    v = tuple(image)
    descents = [j + 1 for j, c in enumerate(v) if c < 0]
    if not descents:
        if v != C.rho():
            raise DomainError(f"{v} is not in the Weyl orbit of rho")
        yield ()
        return
    for i in descents:
        for rest in reduced_words(C, reflect(C, i, v)):
            yield (i,) + rest


def is_reduced(C: CartanData, word: Sequence[int]) -> bool:
    v = C.rho()
    for i in reversed(word):
        if v[i - 1] < 0:
            return False
        v = reflect(C, i, v)
    return True


def element_of_word(C: CartanData, word: Sequence[int], parabolic: Iterable[int] = ()) -> WeylElement:
    """Group element ``s_{w1} o ... o s_{wm}``, labelled by its minimal word."""
    image, point = C.rho(), base_point(C, parabolic)
    for i in reversed(word):
        image = reflect(C, i, image)
        point = reflect(C, i, point)
    return WeylElement(image=image, word=minimal_word(image, C), orbit_point=point)


def compose(C: CartanData, w: WeylElement, i: int) -> WeylElement:
    """Left multiplication ``s_i * w``."""
    image = reflect(C, i, w.image)
    return WeylElement(image=image, word=minimal_word(image, C), orbit_point=reflect(C, i, w.orbit_point))


def length_change(C: CartanData, w: WeylElement, i: int) -> int:
    """+1 when ``l(s_i w) > l(w)``, else -1."""
    C.check_node(i)
    return 1 if w.image[i - 1] > 0 else -1


# -----------------------------------------------------------------------------
# Coset table
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class CosetTable:
    cartan: CartanData
    parabolic: Tuple[int, ...]
    grades: Tuple[Tuple[WeylElement, ...], ...]
    _index: Dict[WeightVector, Tuple[int, int]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[WeightVector, Tuple[int, int]] = {}
        for r, grade in enumerate(self.grades):
            for i, w in enumerate(grade, 1):
                index[w.image] = (r, i)
                index[w.orbit_point] = (r, i)
        object.__setattr__(self, "_index", index)

    @property
    def total_size(self) -> int:
        return sum(len(g) for g in self.grades)

    @property
    def top_length(self) -> int:
        return len(self.grades) - 1

    def grade(self, r: int) -> Tuple[WeylElement, ...]:
        if 0 <= r < len(self.grades):
            return self.grades[r]
        return ()

    def elements(self) -> Iterator[WeylElement]:
        for grade in self.grades:
            yield from grade

    def element(self, r: int, i: int) -> WeylElement:
        """``w_{r,i}`` with 1-based ``i``."""
        grade = self.grade(r)
        if not 1 <= i <= len(grade):
            raise DomainError(f"no element w_{{{r},{i}}} (grade {r} has {len(grade)} elements)")
        return grade[i - 1]

    def find(self, vector: Sequence[int]) -> Optional[Tuple[int, int]]:
        """(r, i) of the element whose rho-image or orbit point is ``vector``."""
        return self._index.get(tuple(vector))

    def position(self, w: WeylElement) -> Tuple[int, int]:
        pos = self.find(w.image)
        if pos is None:
            raise DomainError(f"{w.sigma()} is not a minimal coset representative of this table")
        return pos

    def label(self, w: WeylElement, prefix: str = "w") -> str:
        r, i = self.position(w)
        return f"{prefix}_{{{r},{i}}}"

    def poincare(self) -> List[int]:
        return [len(g) for g in self.grades]

    def expected_size(self) -> int:
        """|W| / |W'| from the known Weyl group orders."""
        levi = self.cartan.restrict(self.parabolic)
        return self.cartan.weyl_order() // (levi.weyl_order() if levi else 1)


def weyl_order(C: CartanData, budget: int = DEFAULT_BUDGET) -> int:
    """|W| counted as the orbit of rho."""
    return enumerate_cosets(C, (), budget=budget).total_size


def enumerate_cosets(
    C: CartanData,
    parabolic: Iterable[int] = (),
    max_length: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
) -> CosetTable:
    """Grades ``W^r`` of minimal coset representatives, each sorted by minimal word."""
    nodes = tuple(sorted(set(parabolic)))
    v0 = base_point(C, nodes)
    rho = C.rho()
    rows = C.matrix
    n = C.rank

    def _reflect(v: WeightVector, i: int) -> WeightVector:
        c = v[i]
        return tuple(a - c * b for a, b in zip(v, rows[i]))

    seen = {v0}
    frontier: List[Tuple[WeightVector, WeightVector]] = [(v0, rho)]
    layers = [frontier]
    while frontier and (max_length is None or len(layers) <= max_length):
        nxt: List[Tuple[WeightVector, WeightVector]] = []
        for point, image in frontier:
            for i in range(n):
                if point[i] <= 0:
                    continue
                p2 = _reflect(point, i)
                if p2 in seen:
                    continue
                seen.add(p2)
                if len(seen) > budget:
                    raise BudgetExceeded(budget)
                nxt.append((p2, _reflect(image, i)))
        if not nxt:
            break
        layers.append(nxt)
        frontier = nxt

    grades = []
    for r, layer in enumerate(layers):
        elems = [WeylElement(image=img, word=minimal_word(img, C), orbit_point=pt) for pt, img in layer]
        elems.sort(key=lambda w: w.word)
        grades.append(tuple(elems))
        logger.debug("[ENUM] grade %d: %d elements", r, len(elems))

    table = CosetTable(cartan=C, parabolic=nodes, grades=tuple(grades))
    logger.info(
        "[ENUM] types=%s parabolic=%s: %d cosets, top length %d",
        "+".join(C.classify()), list(nodes), table.total_size, table.top_length,
    )
    return table
