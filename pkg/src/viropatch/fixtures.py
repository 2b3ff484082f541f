"""Shipped fixture bundles.

The files live in ``viropatch/data/fixtures`` and are regenerated by
``scripts/make_fixtures.py``.
"""

from __future__ import annotations

from importlib import resources

from .bundle import Bundle, loads

HAND_BUILT = ("conic", "line3", "nodal2")
# double planes small enough to work out by hand: two spheres, a torus, a Klein bottle
SYNTHETIC = ("disk2", "annulus2", "band2")
FAMILY = ("family_2_2", "family_2_3", "family_3_2", "family_3_3")
SURFACE_442 = "surface_442"


def fixture_names() -> list[str]:
    root = resources.files("viropatch").joinpath("data/fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str):
    """Path-like handle of a shipped bundle (use ``resources.as_file`` for a real path)."""
    return resources.files("viropatch").joinpath(f"data/fixtures/{name}.json")


def load_fixture(name: str) -> Bundle:
    p = fixture_path(name)
    if not p.is_file():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return loads(p.read_text(encoding="utf-8"))
