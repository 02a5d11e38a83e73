from __future__ import annotations

from pathlib import Path

_PACKAGE_DIR = Path(__file__).resolve().parents[1]


def app_base_dir() -> Path:
    """Checkout root: .../src/dsubh_bounds/config/paths.py -> 3 parents up."""
    return _PACKAGE_DIR.parents[1]


def env_file_path() -> Path:
    return app_base_dir() / ".env"


def package_data_dir() -> Path:
    return _PACKAGE_DIR / "verify" / "data"


def default_corpus_path() -> Path:
    """Location of the corpus shipped inside the package."""
    return package_data_dir() / "default_corpus.json"
