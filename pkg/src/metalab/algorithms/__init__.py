"""Optimizer registry.

Twelve optimizers are implemented; four further comparison algorithms
are listed for reference with ``implemented=False``.
"""
from __future__ import annotations

from ..core import ConfigError
from . import ao, de, ebcm, eo, gsk, hgsa, igoa, imfo, mfla, mpa, msca, sdcs
from .base import TAXONOMY, AlgorithmSpec, Param
from .presets import TUNED
from .toys import ORIGIN_MAGNET, RANDOM_SEARCH

IMPLEMENTED_IDS = ("de", "ebcm", "sdcs", "msca", "imfo", "ao", "igoa", "hgsa",
                   "mfla", "gsk", "mpa", "eo")

_MODULES = (de, ebcm, sdcs, msca, imfo, ao, igoa, hgsa, mfla, gsk, mpa, eo)

_REFERENCE_ONLY = (
    AlgorithmSpec("nlshade", "NL-SHADE-RSP", ("EA",), (), implemented=False,
                  note="internals not specified; listed for reference"),
    AlgorithmSpec("hses", "Hybrid Sampling Evolution Strategy", ("EA",), (), implemented=False,
                  note="internals not specified; listed for reference"),
    AlgorithmSpec("ls-spa", "LSHADE-SPACMA", ("EA",), (), implemented=False,
                  note="internals not specified; listed for reference"),
    AlgorithmSpec("ed-eb", "EDE-EBDE", ("EA",), (), implemented=False,
                  note="internals not specified; listed for reference"),
)

_SPECS: dict[str, AlgorithmSpec] = {}
for _mod in _MODULES:
    _spec = _mod.SPEC
    _spec.presets = dict(TUNED.get(_spec.id, {}))
    _SPECS[_spec.id] = _spec
for _spec in _REFERENCE_ONLY:
    _SPECS[_spec.id] = _spec
for _spec in (ORIGIN_MAGNET, RANDOM_SEARCH):
    _SPECS[_spec.id] = _spec


def registry() -> list[AlgorithmSpec]:
    """The twelve implemented optimizers in their canonical order."""
    return [_SPECS[i] for i in IMPLEMENTED_IDS]


def lookup(algo_id: str) -> AlgorithmSpec:
    try:
        return _SPECS[algo_id]
    except KeyError:
        raise ConfigError(f"unknown algorithm id {algo_id!r}") from None


def all_ids() -> list[str]:
    return list(_SPECS)


__all__ = ["TAXONOMY", "AlgorithmSpec", "Param", "IMPLEMENTED_IDS", "registry", "lookup",
           "all_ids", "ORIGIN_MAGNET", "RANDOM_SEARCH"]
