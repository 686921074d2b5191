"""Fixed-step SSP-RK3 time integration with energy tracing.

The step-size rule ties dt to the mesh size so the third-order integrator
does not limit the spatial order: dt = h^e(p) / 20 with exponent
e = 1, 4/3, 5/3, 2, 7/3 for p = 2..6.  The final step is shortened so the
integration lands exactly on the requested final time.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import diagnostics
from .field import DGField1D, DGField2D, write_columns_csv
from .scheme1d import SolverConfig, rhs_arrays_1d
from .scheme2d import rhs_arrays_2d

_DT_EXPONENTS = {2: 1.0, 3: 4.0 / 3.0, 4: 5.0 / 3.0, 5: 2.0, 6: 7.0 / 3.0}

BLOWUP_LIMIT = 1e12


class SolverAbort(RuntimeError):
    """Raised when the state blows up or turns non-finite mid-run."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


def dt_rule(p: int, h: float) -> float:
    """Mesh-size-based time step h^e(p)/20 for degrees p = 2..6."""
    try:
        e = _DT_EXPONENTS[p]
    except KeyError:
        raise ValueError(
            f"no built-in time step rule for degree {p}; supply dt explicitly") from None
    return h**e / 20.0


@dataclass(frozen=True)
class TimePlan:
    """Step sizes landing exactly on t_final: steps-1 full steps plus last_dt."""

    dt: float
    steps: int
    last_dt: float
    t_final: float


def make_time_plan(t_final: float, dt: float) -> TimePlan:
    if t_final <= 0.0 or dt <= 0.0:
        raise ValueError("final time and dt must be positive")
    steps = max(1, math.ceil(t_final / dt - 1e-12))
    last = t_final - (steps - 1) * dt
    return TimePlan(dt=dt, steps=steps, last_dt=last, t_final=t_final)


def _axpy(state, deriv, dt):
    if isinstance(state, tuple):
        return tuple(s + dt * d for s, d in zip(state, deriv))
    return state + dt * deriv


def _combine(c0, s0, c1, s1):
    if isinstance(s0, tuple):
        return tuple(c0 * a + c1 * b for a, b in zip(s0, s1))
    return c0 * s0 + c1 * s1


def ssp_rk3_step(state, rhs, dt):
    """One three-stage strong-stability-preserving third-order step.

    state may be a single array or a tuple of arrays; rhs maps a state to
    its time derivative with the same structure.
    """
    s1 = _axpy(state, rhs(state), dt)
    s2 = _combine(0.75, state, 0.25, _axpy(s1, rhs(s1), dt))
    return _combine(1.0 / 3.0, state, 2.0 / 3.0, _axpy(s2, rhs(s2), dt))


@dataclass
class EnergyTrace:
    """Sampled discrete energy; `nonlinear` holds the source-augmented form."""

    times: list
    energies: list
    nonlinear: list | None = None

    def write_csv(self, path: str | os.PathLike) -> None:
        cols = {"time": np.asarray(self.times), "energy": np.asarray(self.energies)}
        if self.nonlinear is not None:
            cols["nonlinear_energy"] = np.asarray(self.nonlinear)
        write_columns_csv(path, cols)

    def max_relative_growth(self) -> float:
        """Largest per-step ratio E(t_{n+1})/max(E(t_n), tiny) - 1."""
        e = np.asarray(self.energies)
        if len(e) < 2:
            return 0.0
        prev = np.maximum(e[:-1], 1e-300)
        return float(np.max((e[1:] - e[:-1]) / prev))


def _check_state(state, step: int) -> None:
    for arr in state:
        if not np.all(np.isfinite(arr)):
            raise SolverAbort("non-finite state detected", step)
        if np.max(np.abs(arr)) > BLOWUP_LIMIT:
            raise SolverAbort("state magnitude exceeds blow-up threshold", step)


def integrate(u, v, config: SolverConfig, t_final: float, dt: float | None = None,
              sample_every: int = 1):
    """Advance (u, v) to t_final; returns final fields and the energy trace.

    dt defaults to the degree-based rule evaluated at the global mesh size.
    The energy is sampled every `sample_every` steps (and always at the two
    endpoints); for runs with a source term the source-augmented energy is
    recorded alongside the quadratic one.
    """
    mesh = u.mesh
    if isinstance(u, DGField1D):
        def rhs(state):
            return rhs_arrays_1d(state[0], state[1], mesh, config)
        wrap = (lambda c: DGField1D(mesh, config.p, c), lambda c: DGField1D(mesh, config.q, c))
    elif isinstance(u, DGField2D):
        def rhs(state):
            return rhs_arrays_2d(state[0], state[1], mesh, config)
        wrap = (lambda c: DGField2D(mesh, config.p, c), lambda c: DGField2D(mesh, config.q, c))
    else:
        raise TypeError("integrate expects DGField1D or DGField2D states")

    plan = make_time_plan(t_final, dt if dt is not None else dt_rule(config.p, mesh.h))
    state = (u.coeffs.copy(), v.coeffs.copy())

    trace = EnergyTrace(times=[0.0], energies=[], nonlinear=None)
    with_source = config.source is not None
    if with_source:
        trace.nonlinear = []

    def record(st):
        uf, vf = wrap[0](st[0]), wrap[1](st[1])
        trace.energies.append(diagnostics.energy(uf, vf))
        if with_source:
            trace.nonlinear.append(diagnostics.energy(uf, vf, source=config.source))

    record(state)
    t = 0.0
    for n in range(plan.steps):
        step_dt = plan.dt if n < plan.steps - 1 else plan.last_dt
        state = ssp_rk3_step(state, rhs, step_dt)
        t += step_dt
        _check_state(state, n + 1)
        if (n + 1) % sample_every == 0 or n == plan.steps - 1:
            trace.times.append(t)
            record(state)
    return wrap[0](state[0]), wrap[1](state[1]), trace
