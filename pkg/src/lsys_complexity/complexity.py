"""Generating-function system of a classified grammar and its K0 complexity.

Each class ``i`` gets a function

    V_i(z) = sum_p w_ip * z**k_ip * V_left(z) * V_right(z) / D_i

evaluated by fixpoint iteration from V = 1.  Terminal classes are the
constant 1.  The radius R is the largest z in [0, 1] at which the iteration
settles within the budget, found by bisection, and K0 = -ln R.

Two weightings are supported:

``normalized``
    w_ip = n_ip and D_i = sum_q n_iq (the multiplicity-weighted average).
``count``
    w_ip = 1 and D_i = 1, one term per distinct variant.

Under ``normalized`` weighting z = 1 is always a fixed point (every V_i
stays exactly 1), so K0 is 0 for every window.  ``count`` weighting is
the variant whose radius actually reflects how many distinct rules a
class has.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .encoding import BitString
from .errors import DomainError
from .grammar import Grammar, build_tree, classify

KMode = Literal["unit", "inverse"]
Weighting = Literal["normalized", "count"]
K_MODES = ("unit", "inverse")
WEIGHTINGS = ("normalized", "count")


@dataclass(frozen=True)
class ConvergenceParams:
    m_max: int = 200
    eps: float = 1e-9
    value_cap: float = 1e100
    bisect_iters: int = 40

    def __post_init__(self) -> None:
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if not self.value_cap > 1:
            raise ValueError("value_cap must be > 1")
        if self.bisect_iters < 1:
            raise ValueError("bisect_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class GenFunSystem:
    """Flattened variant table; row ``t`` is one term of class ``owner[t]``."""

    n_classes: int
    root: int
    k_mode: str
    weighting: str
    terminal: np.ndarray  # bool per class (0-based)
    owner: np.ndarray     # class index of each internal term
    left: np.ndarray
    right: np.ndarray
    weight: np.ndarray    # w_ip
    exponent: np.ndarray  # k_ip
    denom: np.ndarray     # D_i per class, 1 for terminals
    starts: np.ndarray    # first term row of each internal class, in owner order
    internal: np.ndarray  # class indices that own terms, aligned with starts

    def describe(self) -> list[str]:
        """Human-readable equations, 1-based class ids."""
        lines = []
        for i in range(self.n_classes):
            if self.terminal[i]:
                lines.append(f"V{i + 1}(z) = 1")
                continue
            terms = []
            for t in np.flatnonzero(self.owner == i):
                w = self.weight[t]
                k = self.exponent[t]
                zk = "z" if k == 1 else f"z^({_fraction(k)})"
                coef = "" if w == 1 else f"{int(w)}"
                terms.append(f"{coef}{zk} V{self.left[t] + 1} V{self.right[t] + 1}")
            body = " + ".join(terms)
            d = int(self.denom[i])
            lines.append(f"V{i + 1}(z) = ({body})/{d}" if d != 1 else f"V{i + 1}(z) = {body}")
        return lines


def _fraction(k: float) -> str:
    n = round(1 / k)
    return f"1/{n}" if math.isclose(1 / n, k) else repr(k)


def system_from_grammar(g: Grammar, k_mode: KMode = "unit", weighting: Weighting = "normalized") -> GenFunSystem:
    if k_mode not in K_MODES:
        raise ValueError(f"k_mode must be one of {K_MODES}, got {k_mode!r}")
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    n = g.total_classes
    terminal = np.zeros(n, dtype=bool)
    denom = np.ones(n, dtype=np.float64)
    owner, left, right, weight, exponent = [], [], [], [], []
    for c in g.classes:
        i = c.id - 1
        if c.terminal:
            terminal[i] = True
            continue
        if weighting == "normalized":
            denom[i] = c.total
        for v in c.variants:
            owner.append(i)
            left.append(v.left - 1)
            right.append(v.right - 1)
            weight.append(v.multiplicity if weighting == "normalized" else 1)
            exponent.append(1.0 if k_mode == "unit" else 1.0 / v.multiplicity)
    owner_a = np.asarray(owner, dtype=np.intp)
    internal, starts = np.unique(owner_a, return_index=True)
    return GenFunSystem(
        n_classes=n,
        root=g.root_class - 1,
        k_mode=k_mode,
        weighting=weighting,
        terminal=terminal,
        owner=owner_a,
        left=np.asarray(left, dtype=np.intp),
        right=np.asarray(right, dtype=np.intp),
        weight=np.asarray(weight, dtype=np.float64),
        exponent=np.asarray(exponent, dtype=np.float64),
        denom=denom,
        starts=starts,
        internal=internal,
    )


@dataclass
class IterationResult:
    converged: bool
    values: np.ndarray
    iterations: int
    history: list[np.ndarray] | None = None

    @property
    def root_value(self) -> float:
        return float(self.values[0])


def _step(system: GenFunSystem, zk: np.ndarray, values: np.ndarray) -> np.ndarray:
    new = values.copy()
    if not len(system.owner):
        return new
    # V_l * V_r first so the product is symmetric under a left/right mirror
    terms = system.weight * zk * (values[system.left] * values[system.right])
    # summing each class's terms in sorted order makes the result depend only
    # on the multiset of terms, not on how classes happened to be numbered
    order = np.lexsort((terms, system.owner))
    sums = np.add.reduceat(terms[order], system.starts)
    new[system.internal] = sums / system.denom[system.internal]
    return new


def iterate(
    system: GenFunSystem,
    z: float,
    params: ConvergenceParams | None = None,
    record: bool = False,
) -> IterationResult:
    """Run V^m from V^0 = 1 until successive iterates agree within eps."""
    params = params or ConvergenceParams()
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [0, 1], got {z}")
    zk = np.power(z, system.exponent)
    values = np.ones(system.n_classes, dtype=np.float64)
    history = [values] if record else None
    normalized = system.weighting == "normalized"
    for m in range(1, params.m_max + 1):
        new = _step(system, zk, values)
        if record:
            history.append(new)
        if normalized and np.any(new > values):
            raise AssertionError(f"iterate increased at m={m}, z={z}")
        if not np.all(np.isfinite(new)) or np.any(new > params.value_cap):
            return IterationResult(False, new, m, history)
        if np.max(np.abs(new - values)) <= params.eps:
            return IterationResult(True, new, m, history)
        values = new
    return IterationResult(False, values, params.m_max, history)


@dataclass
class ComplexityResult:
    R: float
    K0: float
    converged_at_one: bool
    trace: list[tuple[float, bool, int]] = field(default_factory=list)


def radius(system: GenFunSystem, params: ConvergenceParams | None = None) -> ComplexityResult:
    """Bisect [0, 1] for the largest z whose iteration converges."""
    params = params or ConvergenceParams()
    at_one = iterate(system, 1.0, params)
    trace = [(1.0, at_one.converged, at_one.iterations)]
    if at_one.converged:
        return ComplexityResult(1.0, 0.0, True, trace)
    lo, hi = 0.0, 1.0
    for _ in range(params.bisect_iters):
        mid = 0.5 * (lo + hi)
        res = iterate(system, mid, params)
        trace.append((mid, res.converged, res.iterations))
        if res.converged:
            lo = mid
        else:
            hi = mid
    k0 = math.inf if lo == 0.0 else -math.log(lo)
    return ComplexityResult(lo, k0, False, trace)


def k0_of_window(
    window: BitString,
    iso_depth: int = 2,
    k_mode: KMode = "unit",
    params: ConvergenceParams | None = None,
    weighting: Weighting = "normalized",
) -> ComplexityResult:
    grammar = classify(build_tree(window), iso_depth)
    return radius(system_from_grammar(grammar, k_mode, weighting), params)
