"""Shared exception types and the global node budget."""

import os

DEFAULT_MAX_NODES = 10**8


class DomainError(ValueError):
    """Input outside the domain of the map or operation."""


class DepthError(ValueError):
    """A backward orbit is too shallow for the requested coordinate."""


class ResourceCapError(RuntimeError):
    """An enumeration exceeded the configured node budget."""


class TowerError(ValueError):
    """A renormalization tower violates divisibility or entropy consistency."""


class PartitionError(ValueError):
    """A block partition could not be built at the requested scale."""


def node_budget() -> int:
    """Maximum number of tree/grid nodes any single enumeration may create.

    Overridable through the ILIM_MAX_NODES environment variable.
    """
    raw = os.environ.get("ILIM_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"ILIM_MAX_NODES must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise ValueError("ILIM_MAX_NODES must be positive")
    return cap


def charge(count: int, used: int) -> int:
    """Add `count` nodes to `used`, raising once the budget is exhausted."""
    used += count
    if used > node_budget():
        raise ResourceCapError(
            f"enumeration needs more than {node_budget()} nodes "
            "(raise ILIM_MAX_NODES to override)"
        )
    return used
