"""Arithmetic operation counting for the projection algorithms.

Every counted algorithm takes a length-3 ``int64`` array and increments it as
it works; the array is the counting context. Slot :data:`DIV` holds divisions,
:data:`MUL` multiplications and :data:`LOW` everything else that is charged.

Counting policy
---------------
Charged as one low-complexity operation each:

* additions, subtractions and negations of real values, including the
  signed update ``a + theta_i * b`` (a branch on ``theta_i`` then one add/sub),
* comparisons between two real values and comparisons against constants other
  than zero (``v > 1``, ``min(x, 1)``, ``sgn(x - 0.5)``),
* absolute values ``|t|``.

Free:

* comparisons with 0 and ``max(x, 0)``,
* tests of the form ``theta_i == 1`` / ``theta_i == -1`` (boolean storage),
* assignments, swaps and index permutations,
* integer bookkeeping: loop indices, set cardinalities, the right-hand side
  ``p`` and the active-set sizes used as divisors or multipliers.

Multiplying a real value by an integer counter (``zeta * t``) is charged as a
multiplication; dividing by one is a division.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

DIV = 0
MUL = 1
LOW = 2


class Algorithm(enum.Enum):
    FIX = "fix"
    ZHANG_SIEGEL = "zhang-siegel"
    WASSON_DRAPER = "wasson-draper"

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        key = name.strip().lower().replace("_", "-")
        aliases = {"zs": "zhang-siegel", "zhangsiegel": "zhang-siegel",
                   "wd": "wasson-draper", "wassondraper": "wasson-draper"}
        key = aliases.get(key, key)
        for algo in cls:
            if algo.value == key:
                return algo
        raise ValueError(f"unknown algorithm {name!r}")


@dataclass(frozen=True)
class OpCounters:
    """Operation counts of one or more projections."""

    divisions: int = 0
    multiplications: int = 0
    low_complexity: int = 0

    @classmethod
    def from_array(cls, counts: np.ndarray) -> "OpCounters":
        return cls(int(counts[DIV]), int(counts[MUL]), int(counts[LOW]))

    @property
    def total(self) -> int:
        return self.divisions + self.multiplications + self.low_complexity

    def __add__(self, other: "OpCounters") -> "OpCounters":
        return OpCounters(
            self.divisions + other.divisions,
            self.multiplications + other.multiplications,
            self.low_complexity + other.low_complexity,
        )


def new_counts() -> np.ndarray:
    return np.zeros(3, dtype=np.int64)


def counted_projection(algo, x, kind):
    """Run one projection and return ``(z, OpCounters)``.

    ``algo`` is an :class:`Algorithm` (or its name). The returned ``z`` is the
    same array the uncounted entry point produces; counting never touches the
    arithmetic.
    """
    from . import baselines, fix
    from .geometry import ParityKind, as_real_vector

    if not isinstance(algo, Algorithm):
        algo = Algorithm.parse(str(algo))
    kind = ParityKind.parse(kind)
    x = as_real_vector(x)
    counts = new_counts()
    odd = kind is ParityKind.ODD
    if algo is Algorithm.FIX:
        z = fix.project_array(x, kind, counts)
    elif algo is Algorithm.ZHANG_SIEGEL:
        z = baselines._zhang_siegel_kernel(x, odd, counts)
    else:
        z = baselines._wasson_draper_kernel(x, odd, counts)
    return z, OpCounters.from_array(counts)
