import hashlib
import json
import logging
from pathlib import Path
from typing import Iterable, Optional

from app.cartan import CartanData, apply_word
from app.errors import CacheError
from app.weyl import DEFAULT_BUDGET, CosetTable, WeylElement, base_point, enumerate_cosets, is_reduced, minimal_word

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def cache_key(C: CartanData, parabolic: Iterable[int]) -> str:
    """sha256 over the canonical (matrix, parabolic) pair."""
    payload = json.dumps(
        {"matrix": [list(r) for r in C.matrix], "parabolic": sorted(set(parabolic))},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def cache_path(cache_dir: str | Path, C: CartanData, parabolic: Iterable[int]) -> Path:
    return Path(cache_dir) / f"{cache_key(C, parabolic)}.json"


def table_to_json(table: CosetTable) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "cartan": [list(r) for r in table.cartan.matrix],
        "parabolic": list(table.parabolic),
        "grades": [
            {
                "length": r,
                "elements": [
                    {"word": list(w.word), "image": list(w.image), "orbit_point": list(w.orbit_point)}
                    for w in grade
                ],
            }
            for r, grade in enumerate(table.grades)
        ],
    }


def save_table(table: CosetTable, cache_dir: str | Path) -> Path:
    path = cache_path(cache_dir, table.cartan, table.parabolic)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(table_to_json(table), sort_keys=True, separators=(",", ":")), encoding="utf-8")
    tmp.replace(path)
    logger.info("[CACHE] saved %d cosets to %s", table.total_size, path)
    return path


def table_from_json(doc: dict, C: CartanData, parabolic: Iterable[int]) -> CosetTable:
    """Rebuild a CosetTable, replaying every stored word; CacheError on any inconsistency."""
    nodes = tuple(sorted(set(parabolic)))
    try:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise CacheError(f"schema_version {doc.get('schema_version')!r} != {SCHEMA_VERSION}")
        if [tuple(r) for r in doc["cartan"]] != list(C.matrix):
            raise CacheError("cached Cartan matrix differs from the requested one")
        if tuple(doc["parabolic"]) != nodes:
            raise CacheError(f"cached parabolic {doc['parabolic']} != {list(nodes)}")
        rho, v0 = C.rho(), base_point(C, nodes)
        grades = []
        seen = set()
        for r, grade in enumerate(doc["grades"]):
            if grade["length"] != r:
                raise CacheError(f"grade {r} is stored with length {grade['length']}")
            elems = []
            for item in grade["elements"]:
                word = tuple(int(i) for i in item["word"])
                image, point = tuple(item["image"]), tuple(item["orbit_point"])
                if len(word) != r or not is_reduced(C, word):
                    raise CacheError(f"word {list(word)} is not a reduced word of length {r}")
                if apply_word(C, word, rho) != image or apply_word(C, word, v0) != point:
                    raise CacheError(f"word {list(word)} does not reproduce its stored images")
                if any(not is_reduced(C, word + (j,)) for j in nodes):
                    raise CacheError(f"word {list(word)} is not a minimal coset representative")
                if word != minimal_word(image, C):
                    raise CacheError(f"word {list(word)} is not the least reduced word of its element")
                if point in seen:
                    raise CacheError(f"coset {list(point)} is stored twice")
                seen.add(point)
                elems.append(WeylElement(image=image, word=word, orbit_point=point))
            if [w.word for w in elems] != sorted(w.word for w in elems):
                raise CacheError(f"grade {r} is not sorted by word")
            grades.append(tuple(elems))
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise CacheError(f"malformed cache document: {e!r}") from e
    table = CosetTable(cartan=C, parabolic=nodes, grades=tuple(grades))
    if table.total_size != table.expected_size():
        raise CacheError(f"cache holds {table.total_size} cosets, expected {table.expected_size()}")
    return table


def load_table(cache_dir: str | Path, C: CartanData, parabolic: Iterable[int]) -> Optional[CosetTable]:
    """Cached table, None when there is no cache file; CacheError when it fails validation."""
    path = cache_path(cache_dir, C, parabolic)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise CacheError(f"cannot read {path}: {e}") from e
    if not isinstance(doc, dict):
        raise CacheError(f"{path} does not hold a JSON object")
    table = table_from_json(doc, C, parabolic)
    logger.info("[CACHE] loaded %d cosets from %s", table.total_size, path)
    return table


def cached_cosets(
    C: CartanData,
    parabolic: Iterable[int],
    cache_dir: Optional[str | Path] = None,
    budget: int = DEFAULT_BUDGET,
) -> CosetTable:
    """Load from ``cache_dir`` when possible, otherwise enumerate and save."""
    nodes = tuple(sorted(set(parabolic)))
    if not cache_dir:
        return enumerate_cosets(C, nodes, budget=budget)
    try:
        table = load_table(cache_dir, C, nodes)
        if table is not None:
            return table
    except CacheError as e:
        logger.warning("[CACHE] discarding %s: %s", cache_path(cache_dir, C, nodes), e)
    table = enumerate_cosets(C, nodes, budget=budget)
    try:
        save_table(table, cache_dir)
    except OSError as e:
        logger.warning("[CACHE] cannot write to %s: %s", cache_dir, e)
    return table
