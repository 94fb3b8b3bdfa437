"""Model definition: parameters, equilibria, and right-hand sides.

The reduced system couples two interacting densities u and v with a
discrete delay s in the u-equation and a memory variable w standing in
for an exponentially weighted integral over the past of u*v:

    u' = r1*u*(1 - a1*u) - b1*r1*u(t-s)*v(t-s)
    v' = r2*v*(1 - a2*v) + b2*r2*w
    w' = u*v - (mu + r)*w

With the unnormalized weight kernel exp(-(mu+r)*tau) the w-equation is
the exact reduction of the distributed form; ``distributed_w_oracle``
evaluates that integral directly so the reduction can be cross-checked
against quadrature instead of trusted blindly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "ModelParams",
    "State",
    "EquilibriumLabel",
    "Stability",
    "Equilibrium",
    "WOracleResult",
    "equilibria",
    "reduced_rhs",
    "distributed_w_oracle",
]

_PARAM_FIELDS = ("r1", "r2", "a1", "a2", "b1", "b2", "mu", "r", "s")


class State(NamedTuple):
    """Point of the reduced system: densities u, v and memory variable w."""

    u: float
    v: float
    w: float


@dataclass(frozen=True)
class ModelParams:
    """All rate, capacity, and delay constants of the model.

    r1, r2  growth rates of u and v (positive)
    a1, a2  inverse carrying capacities (positive)
    b1, b2  cross-interaction rates (either sign)
    mu      loss rate (nonnegative)
    r       memory-kernel rate (positive)
    s       discrete delay in the u-equation (nonnegative)
    """

    r1: float
    r2: float
    a1: float
    a2: float
    b1: float
    b2: float
    mu: float
    r: float
    s: float

    def __post_init__(self) -> None:
        for name in _PARAM_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        for name in ("r1", "r2", "a1", "a2", "r"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu!r}")
        if not self.s >= 0:
            raise ValueError(f"s must be nonnegative, got {self.s!r}")


class EquilibriumLabel(str, Enum):
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    ESTAR = "EStar"


class Stability(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Equilibrium:
    label: EquilibriumLabel
    point: State
    exists: bool
    local_stability: Stability


def reduced_rhs(current: State, delayed: State, params: ModelParams) -> State:
    """Time derivative of the reduced system.

    The delayed state enters only through the interaction term of the
    u-equation; every other term uses the instantaneous state.
    """
    du = (params.r1 * current.u * (1.0 - params.a1 * current.u)
          - params.b1 * params.r1 * delayed.u * delayed.v)
    dv = (params.r2 * current.v * (1.0 - params.a2 * current.v)
          + params.b2 * params.r2 * current.w)
    dw = current.u * current.v - (params.mu + params.r) * current.w
    return State(du, dv, dw)


def estar_exists(params: ModelParams) -> bool:
    """Existence predicate for the coexistence equilibrium.

    Equivalent to componentwise positivity of the closed forms in
    ``equilibria``; in particular it forces the shared denominator
    a1*a2*(mu+r) + b1*b2 to be positive.
    """
    mr = params.mu + params.r
    return (params.b1 < params.a2
            and params.a1 * params.a2 * mr > max(-params.b1 * params.b2,
                                                 -params.a2 * params.b2))


def equilibria(params: ModelParams) -> list[Equilibrium]:
    """All four equilibria with existence and stability verdicts.

    E0 (both extinct), E1 (u only), E2 (v only) always exist. The
    coexistence point EStar exists exactly when ``estar_exists`` holds.
    Stability verdicts for E0/E1/E2 come from the zero-delay spectrum;
    E2 in particular can be delay-destabilized even when b1 > a2, which
    the flag deliberately ignores. The EStar verdict is delegated to the
    characteristic-equation machinery in the stability module and is
    reported Undetermined here.
    """
    mr = params.mu + params.r
    out = [Equilibrium(EquilibriumLabel.E0, State(0.0, 0.0, 0.0), True,
                       Stability.UNSTABLE)]

    # E1: the u-only vertex. Its v-w block has negative determinant when
    # mu + r + b2/a1 > 0, giving a saddle; otherwise nothing is claimed.
    e1_stab = (Stability.UNSTABLE if mr + params.b2 / params.a1 > 0
               else Stability.UNDETERMINED)
    out.append(Equilibrium(EquilibriumLabel.E1, State(1.0 / params.a1, 0.0, 0.0),
                           True, e1_stab))

    if params.b1 > params.a2:
        e2_stab = Stability.STABLE
    elif params.b1 < params.a2:
        e2_stab = Stability.UNSTABLE
    else:
        e2_stab = Stability.UNDETERMINED
    out.append(Equilibrium(EquilibriumLabel.E2, State(0.0, 1.0 / params.a2, 0.0),
                           True, e2_stab))

    exists = estar_exists(params)
    den = params.a1 * params.a2 * mr + params.b1 * params.b2
    if den != 0.0:
        u_star = (params.a2 - params.b1) * mr / den
        v_star = (params.a1 * mr + params.b2) / den
        # w* = u*v*/(mu+r) by construction; identical to the closed form
        # (a2-b1)(a1(mu+r)+b2)/den^2 after the mr factor cancels.
        point = State(u_star, v_star, u_star * v_star / mr)
    else:
        # degenerate shared denominator: no coexistence point to report
        point = State(math.nan, math.nan, math.nan)
    out.append(Equilibrium(EquilibriumLabel.ESTAR, point, exists,
                           Stability.UNDETERMINED))
    return out


def coexistence(params: ModelParams) -> Equilibrium:
    """The EStar entry of ``equilibria``, existing or not."""
    return equilibria(params)[3]


class WOracleResult(NamedTuple):
    value: float
    truncation_bound: float


def distributed_w_oracle(times: Sequence[float],
                         u: Sequence[float],
                         v: Sequence[float],
                         params: ModelParams) -> WOracleResult:
    """Exponentially weighted integral of u*v over a stored history.

    Evaluates int_0^T exp(-(mu+r)*tau) * u(t-tau) * v(t-tau) dtau by
    composite trapezoid on the given grid, where t = times[-1] and
    T = times[-1] - times[0]. Truncating the infinite past at T discards
    at most exp(-(mu+r)*T) * sup|uv| / (mu+r), which is returned
    alongside the value. The history must span at least 30/(mu+r) so the
    discarded tail is at the exp(-30) level.

    On a constant history (u0, v0) the value is u0*v0/(mu+r) up to
    quadrature error, which is also the consistent starting value for
    the memory variable w of the reduced system.
    """
    t_arr = np.asarray(times, dtype=float)
    u_arr = np.asarray(u, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    if t_arr.ndim != 1 or t_arr.shape != u_arr.shape or t_arr.shape != v_arr.shape:
        raise ValueError("times, u, v must be 1-D arrays of equal length")
    if t_arr.size < 2:
        raise ValueError("history needs at least two samples")
    mr = params.mu + params.r
    span = float(t_arr[-1] - t_arr[0])
    if span * mr < 30.0 * (1.0 - 1e-12):
        raise ValueError(
            f"history span {span:g} too short: need at least 30/(mu+r) = {30.0 / mr:g}")
    prod = u_arr * v_arr
    integrand = np.exp(-mr * (t_arr[-1] - t_arr)) * prod
    value = float(np.trapezoid(integrand, t_arr))
    bound = math.exp(-mr * span) * float(np.max(np.abs(prod))) / mr
    return WOracleResult(value, bound)
