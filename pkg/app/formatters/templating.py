"""Jinja2 environment shared by the markdown, SVG and text formatters."""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal
from functools import lru_cache

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

from config import settings


def format_fixed(value, places: int = 2) -> str:
    """Display form of a cell: floats rounded half-to-even to *places* decimals."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        quantum = Decimal(1).scaleb(-places)
        return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))
    if value is None:
        return ""
    return str(value)


def markdown_cell(value) -> str:
    return format_fixed(value).replace("|", "\\|").replace("\n", " ")


@lru_cache(maxsize=None)
def get_environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(settings.templates_dir),
        autoescape=select_autoescape(enabled_extensions=("svg.j2",), default_for_string=False, default=False),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["fixed"] = format_fixed
    env.filters["md_cell"] = markdown_cell
    return env


def render_template(name: str, **context) -> str:
    return get_environment().get_template(name).render(**context)
