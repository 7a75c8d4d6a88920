"""Engine-wide caps and search bounds.

Caps are hard limits: hitting one raises DegreeBoundExceeded rather than
truncating.  The search degree bounds the completeness of syzygy-style
searches; results obtained under it carry a "bounded" certification status.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    degree_cap: int = 24
    valuation_cap: int = 64
    search_degree: int = 4


DEFAULT_CONFIG = EngineConfig()
