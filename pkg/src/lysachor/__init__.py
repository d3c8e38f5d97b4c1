"""IoT process analysis: parsing, control flow analysis, compilation to
communicating machines, compatibility checking and global graph extraction."""
from pathlib import Path

__version__ = "0.1.0"

_DATA = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    """Path of a bundled example, e.g. ``fixture_path("acc_final.lysa")``."""
    path = _DATA / name
    if not path.exists():
        raise FileNotFoundError(f"no bundled example {name!r}")
    return path
