"""Certification of lifts: exact symbolic check and numeric flow comparison.

The symbolic check is the authority: for every lifted coordinate, the Lie
derivative of its x-expansion along the original field must equal the
corresponding affine row, as an exact polynomial identity. That is the
differential form of the projection identity between the two flows, and it
implies agreement for all time.

The numeric check is advisory: it integrates both systems with the same
fixed-step RK4 grid (identical settings, so integration error is the only
residual) and reports the worst projection error over the samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DimensionMismatchError, DivergenceError
from .numeric import integrate
from .poly import Polynomial, lie_derivative
from .sysparse import PolySystem


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: strictly increasing times, one state per sample."""

    times: tuple
    states: tuple

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("one state per sample time is required")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the symbolic check; falsy on failure, with the culprit row."""

    ok: bool
    failed_row: Optional[int] = None  # 1-based lifted coordinate index
    failed_name: Optional[str] = None
    residual: Optional[Polynomial] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "symbolic verification: PASS"
        return (
            f"symbolic verification: FAIL at row {self.failed_row} "
            f"({self.failed_name}): residual {self.residual.render()}"
        )


def verify_symbolic(sys: PolySystem, sl) -> VerifyReport:
    """Check L_f(q_i) == sum_j A_ij q_j + D_i for every lifted coordinate.

    q_i is coordinate i's expansion in x (the variable itself for i <= n).
    Fails fast with the first offending row and its exact residual.
    """
    if sl.n != sys.dim or tuple(sl.var_names[: sl.n]) != tuple(sys.vars.names):
        raise DimensionMismatchError(
            f"lift is over {sl.var_names[: sl.n]}, system over {sys.vars.names}"
        )
    expansions = sl.x_expansions()
    for i in range(sl.dim):
        rhs = Polynomial.constant(sys.vars, sl.D[i])
        for j, a in enumerate(sl.A[i]):
            if a:
                rhs = rhs + expansions[j] * a
        residual = lie_derivative(expansions[i], sys.rhs) - rhs
        if not residual.is_zero():
            return VerifyReport(
                ok=False,
                failed_row=i + 1,
                failed_name=sl.var_names[i],
                residual=residual,
            )
    return VerifyReport(ok=True)


def simulate(
    field: Sequence[Polynomial], x0: Sequence[float], t_end: float, step: float
) -> Trajectory:
    """Classic fixed-step RK4 sampled at t = 0, step, 2*step, ..., t_end.

    Raises DivergenceError (carrying the last finite sample time) when the
    state leaves the finite range.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if any(not math.isfinite(v) for v in x0):
        raise ValueError("initial state must be finite")
    n_steps = int(round(t_end / step))
    if (n_steps + 1) * len(field) > 200_000_000:
        raise ValueError(
            f"{n_steps} steps of a {len(field)}-dimensional system would not fit "
            "in memory; increase the step or shorten the horizon"
        )
    states, completed = integrate(field, x0, step, n_steps)
    dim = len(field)
    if completed < n_steps:
        raise DivergenceError(completed * step)
    times = tuple(k * step for k in range(n_steps + 1))
    grouped = tuple(
        tuple(states[k * dim : (k + 1) * dim]) for k in range(n_steps + 1)
    )
    return Trajectory(times, grouped)


def verify_numeric(
    sys: PolySystem, sl, x0: Sequence[float], t_end: float, step: float
) -> float:
    """Max projection error between the two flows on a shared RK4 grid.

    Integrates dx/dt = f(x) from x0 and dz/dt = A z + D from (x0, p(x0)) and
    returns max over samples of the infinity norm of the first n coordinates
    of z minus x.
    """
    if sl.n != sys.dim:
        raise DimensionMismatchError(
            f"lift has n={sl.n}, system has dimension {sys.dim}"
        )
    x_traj = simulate(sys.rhs, x0, t_end, step)
    z0 = [float(v) for v in x0]
    z0.extend(obs.expansion.evaluate(x0) for obs in sl.observables)
    z_traj = simulate(sl.field(), z0, t_end, step)
    worst = 0.0
    n = sys.dim
    for xs, zs in zip(x_traj.states, z_traj.states):
        for i in range(n):
            err = abs(zs[i] - xs[i])
            if err > worst:
                worst = err
    return worst


def write_trajectory_csv(traj: Trajectory, names: Sequence[str], fh) -> None:
    """CSV with header ``t,<var1>,...``; floats rendered round-trip safe."""
    fh.write("t," + ",".join(names) + "\n")
    for t, state in zip(traj.times, traj.states):
        fh.write(repr(t) + "," + ",".join(repr(v) for v in state) + "\n")
