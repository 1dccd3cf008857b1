class SteenrodError(Exception):
    """Base class for every error raised by the app package."""

    kind = "steenrod_error"


class CartanError(SteenrodError, ValueError):
    kind = "cartan_error"


class DomainError(SteenrodError, ValueError):
    kind = "domain_error"


class BudgetExceeded(SteenrodError, RuntimeError):
    kind = "budget_exceeded"

    def __init__(self, budget: int, message: str | None = None):
        self.budget = budget
        super().__init__(message or f"orbit exceeds the element budget of {budget} points")


class ConfigError(SteenrodError, ValueError):
    kind = "config_error"


class CacheError(SteenrodError):
    kind = "cache_error"
