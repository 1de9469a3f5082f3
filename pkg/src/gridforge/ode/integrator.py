"""Adaptive Runge-Kutta streamline integration.

Streamlines of a vector field v are reparameterized by a scalar f whose
gradient is supplied, dp/df = v / (v . grad f), so they arrive exactly at the
requested parameter values. Many streamlines sharing the parameter advance in
one state vector; batches have a fixed size so step selection, and hence every
result bit, does not depend on the thread count. The error norm of the stepper
is an RMS over the state, so tolerances are divided by sqrt(batch size) to
bound the error of each line rather than the batch average.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.integrate import DOP853, RK45, OdeSolver

from gridforge.config import get_settings
from gridforge.flux.models import FloatArray
from gridforge.shared.errors import DenominatorVanishingError, StepFailureError

logger = structlog.get_logger()

VectorField = Callable[[FloatArray, FloatArray], tuple[FloatArray, FloatArray]]
ParamGradient = Callable[[FloatArray, FloatArray], tuple[FloatArray, FloatArray]]
AuxRHS = Callable[[FloatArray, FloatArray, FloatArray], FloatArray]
RHS = Callable[[float, FloatArray], FloatArray]

_METHODS: dict[str, type[OdeSolver]] = {"RK45": RK45, "DOP853": DOP853}


class IntegratorConfig(BaseModel):
    """Error control for the embedded Runge-Kutta pair."""

    rtol: float = Field(default=1e-11, gt=0)
    atol: float = Field(default=1e-13, gt=0)
    max_steps: int = Field(default=200_000, ge=1)
    initial_step: float | None = Field(default=None, gt=0)
    method: Literal["RK45", "DOP853"] = "RK45"
    denominator_floor: float = Field(
        default=1e-12, gt=0, description="Relative floor for v . grad f"
    )

    def tightened(self, factor: float = 0.5) -> IntegratorConfig:
        return self.model_copy(update={"rtol": self.rtol * factor, "atol": self.atol * factor})


@dataclass(frozen=True, slots=True)
class BatchSolution:
    params: FloatArray
    states: FloatArray  # (len(params), state size)
    steps: int


def solve_batch(
    rhs: RHS,
    param_from: float,
    state: FloatArray,
    targets: Sequence[float] | FloatArray,
    config: IntegratorConfig,
) -> BatchSolution:
    """Integrate to each target in turn, carrying the step size across segments."""
    stepper = _METHODS[config.method]
    t = float(param_from)
    y = np.array(state, dtype=float)
    h = config.initial_step
    steps = 0
    out = np.empty((len(targets), y.size))
    for k, target in enumerate(np.asarray(targets, dtype=float)):
        span = abs(target - t)
        if span == 0.0:
            out[k] = y
            continue
        first = None if h is None else min(h, span)
        solver = stepper(
            rhs,
            t,
            y,
            float(target),
            rtol=config.rtol,
            atol=config.atol,
            first_step=first,
        )
        while solver.status == "running":
            message = solver.step()
            steps += 1
            if solver.status == "failed":
                raise StepFailureError(str(message), steps, float(solver.t))
            if steps > config.max_steps:
                raise StepFailureError("Step budget exhausted", steps, float(solver.t))
        # the last step is clipped to the target; reuse the controller's proposal
        h = float(getattr(solver, "h_abs", span))
        t = float(target)
        y = solver.y
        out[k] = y
    return BatchSolution(params=np.asarray(targets, dtype=float), states=out, steps=steps)


def streamline_rhs(
    vfield: VectorField,
    n_lines: int,
    *,
    param_gradient: ParamGradient | None = None,
    aux_rhs: AuxRHS | None = None,
    n_aux: int = 0,
    floor: float = 1e-12,
) -> RHS:
    """Right-hand side for ``n_lines`` streamlines packed as [x, y, aux...]."""

    def rhs(t: float, state: FloatArray) -> FloatArray:
        x = state[:n_lines]
        y = state[n_lines : 2 * n_lines]
        vx, vy = vfield(x, y)
        vx = np.asarray(vx, dtype=float)
        vy = np.asarray(vy, dtype=float)
        if param_gradient is not None:
            gx, gy = param_gradient(x, y)
            denom = vx * gx + vy * gy
            scale = np.hypot(vx, vy) * np.hypot(gx, gy)
            bad = ~(np.abs(denom) > floor * scale)
            if np.any(bad):
                raise DenominatorVanishingError(float(denom[bad][0]), t)
            vx = vx / denom
            vy = vy / denom
        parts = [vx, vy]
        if aux_rhs is not None:
            aux = state[2 * n_lines :].reshape(n_aux, n_lines)
            parts.append(np.asarray(aux_rhs(x, y, aux), dtype=float).reshape(-1))
        return np.concatenate(parts)

    return rhs


def integrate_streamlines(
    vfield: VectorField,
    starts: FloatArray,
    param_from: float,
    targets: Sequence[float] | FloatArray,
    config: IntegratorConfig | None = None,
    *,
    param_gradient: ParamGradient | None = None,
    aux_rhs: AuxRHS | None = None,
    aux_start: FloatArray | None = None,
) -> tuple[FloatArray, FloatArray | None]:
    """Trace many streamlines to a shared list of parameter values.

    Returns points of shape (len(targets), n, 2) and, when ``aux_rhs`` is given,
    auxiliary values of shape (len(targets), n, n_aux).
    """
    config = config or IntegratorConfig()
    settings = get_settings()
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    n = starts.shape[0]
    aux0 = None
    n_aux = 0
    if aux_rhs is not None:
        aux0 = np.asarray(aux_start, dtype=float).reshape(n, -1)
        n_aux = aux0.shape[1]
    chunk = settings.streamline_chunk
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]

    def run(bound: tuple[int, int]) -> BatchSolution:
        lo, hi = bound
        m = hi - lo
        parts = [starts[lo:hi, 0], starts[lo:hi, 1]]
        if aux0 is not None:
            parts.append(aux0[lo:hi].T.reshape(-1))
        rhs = streamline_rhs(
            vfield,
            m,
            param_gradient=param_gradient,
            aux_rhs=aux_rhs,
            n_aux=n_aux,
            floor=config.denominator_floor,
        )
        # scipy controls the RMS error over the whole state vector
        batch_config = config.tightened(1.0 / np.sqrt(m))
        return solve_batch(rhs, param_from, np.concatenate(parts), targets, batch_config)

    workers = min(settings.threads, len(bounds)) or 1
    if workers == 1:
        results = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, bounds))

    k = len(targets)
    points = np.empty((k, n, 2))
    aux = np.empty((k, n, n_aux)) if aux_rhs is not None else None
    total_steps = 0
    for (lo, hi), sol in zip(bounds, results, strict=True):
        m = hi - lo
        points[:, lo:hi, 0] = sol.states[:, :m]
        points[:, lo:hi, 1] = sol.states[:, m : 2 * m]
        if aux is not None:
            aux[:, lo:hi, :] = sol.states[:, 2 * m :].reshape(k, n_aux, m).transpose(0, 2, 1)
        total_steps += sol.steps
    logger.debug("Integrated streamlines", lines=n, targets=k, steps=total_steps)
    return points, aux


@dataclass(frozen=True, slots=True)
class Streamline:
    end: FloatArray
    samples: FloatArray | None = None
    aux_end: FloatArray | None = None
    aux_samples: FloatArray | None = None


def integrate_streamline(
    vfield: VectorField,
    start: tuple[float, float],
    param_from: float,
    param_to: float,
    config: IntegratorConfig | None = None,
    *,
    param_gradient: ParamGradient | None = None,
    dense: Sequence[float] | None = None,
) -> Streamline:
    """Single streamline from ``param_from`` to ``param_to``.

    ``dense`` lists intermediate parameter values; each is reached by
    integration, not interpolation.
    """
    targets = [*(dense or []), param_to]
    points, _ = integrate_streamlines(
        vfield,
        np.asarray([start], dtype=float),
        param_from,
        targets,
        config,
        param_gradient=param_gradient,
    )
    samples = points[:-1, 0, :] if dense else None
    return Streamline(end=points[-1, 0, :], samples=samples)


def integrate_with_aux(
    vfield: VectorField,
    aux_rhs: AuxRHS,
    start: tuple[float, float],
    aux_start: float | Sequence[float],
    param_from: float,
    param_to: float,
    config: IntegratorConfig | None = None,
    *,
    param_gradient: ParamGradient | None = None,
    dense: Sequence[float] | None = None,
) -> Streamline:
    """As ``integrate_streamline`` with auxiliary scalars in the same controlled step."""
    targets = [*(dense or []), param_to]
    aux0 = np.atleast_1d(np.asarray(aux_start, dtype=float)).reshape(1, -1)
    points, aux = integrate_streamlines(
        vfield,
        np.asarray([start], dtype=float),
        param_from,
        targets,
        config,
        param_gradient=param_gradient,
        aux_rhs=aux_rhs,
        aux_start=aux0,
    )
    assert aux is not None
    return Streamline(
        end=points[-1, 0, :],
        samples=points[:-1, 0, :] if dense else None,
        aux_end=aux[-1, 0, :],
        aux_samples=aux[:-1, 0, :] if dense else None,
    )
