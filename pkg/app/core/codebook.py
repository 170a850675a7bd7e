"""Load the CRM codebook (scales, root causes, risk matrix) from JSON."""

from __future__ import annotations

import json
import logging
from functools import lru_cache
from pathlib import Path

from config import settings

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def load_codebook(path: str | None = None) -> dict:
    """Read and cache the codebook JSON.

    Args:
        path: Optional override; defaults to ``settings.codebook_path``.

    Raises:
        FileNotFoundError: If the codebook file does not exist.
    """
    codebook_path = Path(path or settings.codebook_path)
    if not codebook_path.exists():
        raise FileNotFoundError(f"Codebook not found: {codebook_path}")
    with open(codebook_path, "r", encoding="utf-8") as f:
        codebook = json.load(f)
    logger.debug(f"Loaded codebook '{codebook.get('name', codebook_path.stem)}'")
    return codebook


def describe_codebook(path: str | None = None) -> dict:
    """Return the human-readable parts of the codebook for dumps and reports."""
    codebook = load_codebook(path)
    return {
        "name": codebook.get("name", ""),
        "description": codebook.get("description", ""),
        "root_causes": [
            {"category": rc["category"], "label": rc["label"], "description": rc["description"]}
            for rc in codebook["root_causes"]
        ],
        "probability": [
            {"label": p["label"], "value": p["value"], "letter": p["letter"], "description": p["description"]}
            for p in codebook["probability"]
        ],
        "severity": [
            {
                "label": s["label"],
                "value": s["value"],
                "numeral": s["numeral"],
                "aliases": list(s.get("aliases", [])),
                "description": s["description"],
            }
            for s in codebook["severity"]
        ],
        "tiers": [{"code": t["code"], "label": t["label"]} for t in codebook.get("tiers", [])],
    }
