"""
Environment defaults for the command line tool.
"""
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"⚠️ Ignoring {name}={raw!r}: not an integer")
        return default


@dataclass(frozen=True)
class Settings:
    default_field: str = "F2"
    default_precision: int = 2
    window_padding: int = 1
    max_stages: Optional[int] = None
    verbose: bool = False


def get_settings() -> Settings:
    """Read DGLIFT_* variables, falling back to the defaults above."""
    return Settings(
        default_field=os.getenv("DGLIFT_DEFAULT_FIELD", "F2"),
        default_precision=_int_env("DGLIFT_DEFAULT_PRECISION", 2),
        window_padding=_int_env("DGLIFT_WINDOW_PADDING", 1),
        max_stages=_int_env("DGLIFT_MAX_STAGES", None),
        verbose=os.getenv("DGLIFT_VERBOSE", "0").lower() in ("1", "true", "yes"),
    )


def field_spec(name: str):
    """'Q', 'F3' or 'Z5' as the ring mapping used in problem files (precision added by the caller)."""
    name = name.strip()
    if name.upper() == "Q":
        return {"field": "Q"}
    if name[:1].upper() == "F" and name[1:].isdigit():
        return {"field": {"Fp": int(name[1:])}}
    if name[:1].upper() == "Z" and name[1:].isdigit():
        return {"Zp": int(name[1:])}
    raise ValueError(f"Unknown ring '{name}'; use Q, Fp (e.g. F2) or Zp (e.g. Z3)")
