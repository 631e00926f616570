"""Normal weight functions on [0, 1) and the weighted-space parameters.

A weight here is ``w(r) = (1-r)**alpha * (log(e/(1-r)))**log_exponent``
together with user-supplied normality witnesses ``0 < s < t``: the ratio
``w(r)/(1-r)**s`` must fall to zero and ``w(r)/(1-r)**t`` must climb to
infinity as ``r`` increases to 1.  Witnesses are validated on a dyadic
grid, never inferred, because the boundary test functions downstream
depend on the stored ``t`` explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disk_functions import DomainError

__all__ = ["NormalWeight", "NormalityReport", "SpaceSpec", "check_normality"]

NORMALITY_GRID_DEPTH = 40


@dataclass(frozen=True)
class NormalWeight:
    """Power-times-log-power weight with normality witnesses ``(s, t)``."""

    alpha: float
    log_exponent: float = 0.0
    s: float = None  # type: ignore[assignment]
    t: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        s = self.alpha / 2.0 if self.s is None else float(self.s)
        t = 1.5 * self.alpha if self.t is None else float(self.t)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "log_exponent", float(self.log_exponent))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        if not (0.0 < self.s < self.t):
            raise ValueError("witnesses must satisfy 0 < s < t strictly")

    def __call__(self, r):
        arr = np.asarray(r, dtype=float)
        if np.any(arr < 0.0) or np.any(arr >= 1.0):
            raise DomainError("weight argument must lie in [0, 1)")
        value = self.value_from_gap(1.0 - arr)
        if np.ndim(r) == 0:
            return float(value)
        return value

    def value_from_gap(self, x):
        """Weight value expressed through the gap ``x = 1 - r``.

        Quadrature works directly in ``x`` to keep precision near the
        boundary, so this is the primitive evaluator.
        """
        x = np.asarray(x, dtype=float)
        out = x**self.alpha
        if self.log_exponent != 0.0:
            out = out * (1.0 - np.log(x)) ** self.log_exponent
        return out

    def log_value_from_gap(self, log_x):
        """``log w`` as a function of ``log x``; overflow-safe form."""
        log_x = np.asarray(log_x, dtype=float)
        out = self.alpha * log_x
        if self.log_exponent != 0.0:
            out = out + self.log_exponent * np.log(1.0 - log_x)
        return out


@dataclass(frozen=True)
class NormalityReport:
    ok: bool
    detail: str = ""
    failed_at: int | None = None
    condition: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_normality(weight: NormalWeight, depth: int = NORMALITY_GRID_DEPTH) -> NormalityReport:
    """Validate the witness conditions on the grid ``r_k = 1 - 2**-k``.

    The ``s`` ratio must be nonincreasing across the grid and decay
    overall; the ``t`` ratio must be nondecreasing and grow overall.
    Returns the first violating grid index on failure.
    """
    log_x = -np.log(2.0) * np.arange(depth + 1)
    log_w = weight.log_value_from_gap(log_x)
    log_ratio_s = log_w - weight.s * log_x
    log_ratio_t = log_w - weight.t * log_x

    slack = 1e-12
    rising = np.nonzero(np.diff(log_ratio_s) > slack)[0]
    if rising.size:
        k = int(rising[0])
        return NormalityReport(
            False, f"w(r)/(1-r)^s increases between grid indices {k} and {k + 1}", k, "s"
        )
    if log_ratio_s[-1] > log_ratio_s[0] + np.log(0.9):
        return NormalityReport(
            False, "w(r)/(1-r)^s does not decay toward zero on the grid", depth, "s"
        )
    falling = np.nonzero(np.diff(log_ratio_t) < -slack)[0]
    if falling.size:
        k = int(falling[0])
        return NormalityReport(
            False, f"w(r)/(1-r)^t decreases between grid indices {k} and {k + 1}", k, "t"
        )
    if log_ratio_t[-1] < log_ratio_t[0] - np.log(0.9):
        return NormalityReport(
            False, "w(r)/(1-r)^t does not grow toward infinity on the grid", depth, "t"
        )
    return NormalityReport(True)


@dataclass(frozen=True)
class SpaceSpec:
    """Integrability exponent ``p`` plus the radial weight."""

    p: float
    weight: NormalWeight

    def __post_init__(self):
        p = float(self.p)
        if not (p > 0.0 and np.isfinite(p)):
            raise ValueError("p must be finite and positive")
        object.__setattr__(self, "p", p)

    @classmethod
    def bergman(cls, p: float) -> "SpaceSpec":
        """The classical Bergman space: weight ``(1-r)**(1/p)``.

        Default witnesses are ``s = 1/(2p)`` and ``t = 3/(2p)``.
        """
        alpha = 1.0 / float(p)
        return cls(float(p), NormalWeight(alpha, 0.0, alpha / 2.0, 1.5 * alpha))
