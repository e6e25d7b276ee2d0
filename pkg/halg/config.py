"""
halg/config.py

Runtime configuration for halg, read from the environment (and a local .env
file when present). Every value has a default so the library works with no
configuration at all.

  HALG_TOL             global tolerance used by predicates and checks
  HALG_EXACT_TOL       threshold for identities that hold exactly
  HALG_CLOSURE_BOUND   max order reached when closing permutation generators
  HALG_SUBGROUP_BOUND  max group order for which all_subgroups enumerates
  HALG_TRIALS          random trials per property check
  HALG_SEED            root seed for the verifier
  HALG_WORKERS         process pool size for catalog runs
  HALG_LOG_LEVEL       logging level name
"""

import os
from typing import Callable, List, TypeVar

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()

T = TypeVar("T")

# malformed settings found at import; reported by check_config()
CONFIG_PROBLEMS: List[str] = []


def env_value(name: str, cast: Callable[[str], T], default: T) -> T:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        CONFIG_PROBLEMS.append(f"{name}={raw!r} is not a valid {cast.__name__}")
        return default


# ---------------------------
# CONFIG (from .env)
# ---------------------------
DEFAULT_TOLERANCE = env_value("HALG_TOL", float, 1e-9)
EXACT_TOLERANCE = env_value("HALG_EXACT_TOL", float, 1e-12)
CLOSURE_BOUND = env_value("HALG_CLOSURE_BOUND", int, 5040)
SUBGROUP_BOUND = env_value("HALG_SUBGROUP_BOUND", int, 120)
DEFAULT_TRIALS = env_value("HALG_TRIALS", int, 100)
DEFAULT_SEED = env_value("HALG_SEED", int, 7)
WORKERS = env_value("HALG_WORKERS", int, 1)
LOG_LEVEL = os.getenv("HALG_LOG_LEVEL", "WARNING").upper()

# log-uniform range for random rho values
RHO_RANGE = (0.1, 10.0)

REPORT_VERSION = "1.0"


def get_tolerance() -> float:
    """Current tolerance; HALG_TOL is re-read so late environment changes count."""
    raw = os.getenv("HALG_TOL")
    if raw is None or not raw.strip():
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"HALG_TOL={raw!r} is not a valid float")


def check_config() -> None:
    """Raise ConfigError for every malformed HALG_* setting, including a HALG_TOL changed since import."""
    problems = list(CONFIG_PROBLEMS)
    try:
        get_tolerance()
    except ConfigError as e:
        if str(e) not in problems:
            problems.append(str(e))
    if problems:
        raise ConfigError("; ".join(problems))
