"""Runtime limits shared by the oracles and constructors.

Defaults can be overridden through environment variables so that scripts
and the CLI can raise them without code changes:

    PCENTERED_ORACLE_LIMIT        max vertices for exhaustive oracles (12)
    PCENTERED_THREAT_MAX_SIZE     default max_size for threat enumeration (10)
    PCENTERED_NABLA_LIMIT         max vertices for exact shallow-minor density (10)
    PCENTERED_MATERIALIZE_LIMIT   max vertices a constructor may build (10**6)
"""

from __future__ import annotations

import os
from dataclasses import dataclass


class InputError(ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class OracleLimitError(InputError):
    """An exhaustive routine was asked to run beyond its configured size."""


class MaterializationError(InputError):
    """A constructor would build a graph larger than the configured guard."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{name} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class Limits:
    oracle_vertices: int = 12
    threat_max_size: int = 10
    nabla_vertices: int = 10
    materialize_vertices: int = 10**6

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            oracle_vertices=_env_int("PCENTERED_ORACLE_LIMIT", 12),
            threat_max_size=_env_int("PCENTERED_THREAT_MAX_SIZE", 10),
            nabla_vertices=_env_int("PCENTERED_NABLA_LIMIT", 10),
            materialize_vertices=_env_int("PCENTERED_MATERIALIZE_LIMIT", 10**6),
        )


def limits() -> Limits:
    # read on every call so tests can monkeypatch the environment
    return Limits.from_env()


def check_oracle_size(n: int, limit: int | None, what: str) -> None:
    if limit is None:
        limit = limits().oracle_vertices
    if n > limit:
        raise OracleLimitError(
            f"{what}: graph has {n} vertices, oracle limit is {limit} "
            f"(raise it with the limit argument or PCENTERED_ORACLE_LIMIT)"
        )
