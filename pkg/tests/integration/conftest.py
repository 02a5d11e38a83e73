from __future__ import annotations

import copy
import json
from pathlib import Path

import pytest

SMALL_CORPUS = {
    "functions": {"f": {"rational": {"zeros": [[2.0, 0.0]]}}},
    "measures": {"seg": {"kind": "polyline_length", "vertices": [[0.0, 0.0], [1.0, 0.0]]}},
    "cases": [
        {
            "label": "curve",
            "theorem": "COR-CURVE",
            "function": "f",
            "measure": "seg",
            "r": 1,
            "R": 3,
        },
        {
            "label": "curve-sweep",
            "theorem": "COR-CURVE-SWEEP",
            "function": "f",
            "measure": {"kind": "polyline_length", "vertices": [[-1.0, 0.0], [1.0, 0.0]]},
            "sweep": {"kind": "constant", "radii": [0.5, 1.0], "c": 0.75},
        },
        {
            "label": "atom",
            "theorem": "T1",
            "function": "f",
            "measure": {"kind": "atomic", "points": [[0.5, 0.0]], "masses": [1.0]},
            "r": 1,
            "R": 3,
        },
        {"label": "broken", "theorem": "T1", "function": "nowhere.json", "r": 1, "R": 3},
    ],
}


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


@pytest.fixture()
def small_corpus(tmp_path) -> Path:
    return write_json(tmp_path / "corpus.json", SMALL_CORPUS)


@pytest.fixture()
def corpus_payload() -> dict:
    return copy.deepcopy(SMALL_CORPUS)


@pytest.fixture()
def json_file(tmp_path):
    """Factory writing a payload to tmp_path/<name> and returning the path."""

    def _write(name: str, payload) -> Path:
        return write_json(tmp_path / name, payload)

    return _write
