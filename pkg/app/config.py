import os
import re
from typing import Dict, List, Mapping, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator, model_validator

from app.cartan import CartanData, load_cartan_file, parse_type
from app.errors import ConfigError
from app.steenrod import is_prime
from app.weyl import DEFAULT_BUDGET

load_dotenv()

CACHE_DIR = os.getenv("STEENROD_CACHE_DIR", ".cache/cosets")
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")

# job field -> environment variable holding its default; read per job, not at import
ENV_FIELDS = {
    "budget": "STEENROD_BUDGET",
    "threads": "STEENROD_THREADS",
    "format": "STEENROD_FORMAT",
}

FORMATS = ("text", "json", "csv", "latex")

_TYPE_RE = re.compile(r"^[A-Ga-g][0-9]+$")
_RANGE_RE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_k_list(text) -> List[int]:
    """``"1..3"`` -> [1, 2, 3]; ``"1,2,5"`` -> [1, 2, 5]; ``"2"`` -> [2]."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(k) for k in text]
    text = str(text or "").strip()
    m = _RANGE_RE.match(text)
    try:
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ConfigError(f"k range {text!r} is empty")
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise ConfigError(f"cannot parse k list {text!r}: {e}") from e


def parse_nodes(text) -> List[int]:
    """``"2,3,4"`` or ``"1..5"`` -> node list; empty string -> []."""
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return parse_k_list(text) if str(text).strip() else []


class JobDefaults(BaseModel):
    """Settings with an environment default."""

    format: str = "text"
    budget: int = DEFAULT_BUDGET
    threads: int = 1

    @field_validator("format")
    @classmethod
    def _known_format(cls, v: str) -> str:
        if v not in FORMATS:
            raise ValueError(f"format {v!r} not in {list(FORMATS)}")
        return v

    @field_validator("budget", "threads")
    @classmethod
    def _at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v


class JobConfig(JobDefaults):
    lie_type: Optional[str] = None
    cartan_file: Optional[str] = None
    parabolic: List[int] = []
    primes: List[int] = []
    k_list: List[int] = [1]
    cache_dir: Optional[str] = CACHE_DIR

    @field_validator("lie_type")
    @classmethod
    def _lie_type_shape(cls, v: Optional[str]) -> Optional[str]:
        if v is None:
            return v
        v = v.strip()
        if not _TYPE_RE.match(v):
            raise ValueError(f"{v!r} is not <letter><rank>, e.g. G2 or D6")
        return v[0].upper() + v[1:]

    @field_validator("primes")
    @classmethod
    def _primes_are_prime(cls, v: List[int]) -> List[int]:
        bad = [p for p in v if not is_prime(p)]
        if bad:
            raise ValueError(f"{bad} not prime (need p >= 2 prime)")
        return sorted(set(v))

    @field_validator("k_list")
    @classmethod
    def _k_list_positive(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("k list is empty")
        if any(k < 1 for k in v):
            raise ValueError(f"every k must be >= 1, got {v}")
        return sorted(set(v))

    @model_validator(mode="after")
    def _one_cartan_source(self) -> "JobConfig":
        if (self.lie_type is None) == (self.cartan_file is None):
            raise ValueError("give exactly one of lie_type / cartan_file")
        return self

    @property
    def parabolic_nodes(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.parabolic)))

    def cartan(self) -> CartanData:
        """Resolve the Cartan matrix and check the parabolic nodes against its rank."""
        C = parse_type(self.lie_type) if self.lie_type else load_cartan_file(self.cartan_file)
        bad = [i for i in self.parabolic if not 1 <= i <= C.rank]
        if bad:
            raise ConfigError(f"parabolic: nodes {bad} outside 1..{C.rank}")
        return C

    def require_primes(self) -> List[int]:
        if not self.primes:
            raise ConfigError("primes: at least one prime is required for this command")
        return self.primes


def _config_error(e: ValidationError, names: Mapping[str, str]) -> ConfigError:
    parts = []
    for err in e.errors():
        loc = ".".join(str(x) for x in err.get("loc", ())) or "config"
        parts.append(f"{names.get(loc, loc)}: {err.get('msg')}")
    return ConfigError("; ".join(parts))


def load_defaults(skip: Tuple[str, ...] = ()) -> JobDefaults:
    """JobDefaults from the environment; a bad value is a ConfigError naming its variable."""
    raw: Dict[str, str] = {}
    for name, var in ENV_FIELDS.items():
        value = os.getenv(var, "").strip()
        if value and name not in skip:
            raw[name] = value
    try:
        return JobDefaults(**raw)
    except ValidationError as e:
        raise _config_error(e, ENV_FIELDS) from e


def build_config(**fields) -> JobConfig:
    """JobConfig with pydantic failures re-raised as ConfigError naming each field."""
    given = {k: v for k, v in fields.items() if v is not None}
    defaults = load_defaults(skip=tuple(given)).model_dump()
    try:
        return JobConfig(**{**defaults, **given})
    except ValidationError as e:
        raise _config_error(e, {}) from e
