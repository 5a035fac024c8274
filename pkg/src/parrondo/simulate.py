"""Independent checks on verdicts: Monte Carlo walks and stationary velocity.

The simulator is reproducible by construction.  Replicate r of a run with
seed s draws its uniforms from a counter-based Philox stream keyed by
(s, r), consumed in fixed-size blocks, so results are bit-identical across
runs, thread counts, and scheduling; replicates may execute concurrently.
The inner walk loop is compiled (numba, nogil) and threads only overlap
stream generation with walking -- they never touch shared state.

The stationary-velocity diagnostic solves the residue chain directly and is
advisory: on disagreement the spectral verdict is authoritative.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .classify import DEFAULT_TOL, classify_kernel
from .errors import InconclusiveSimulation, InvalidKernel, ReducibleResidueChain
from .kernels import EnvironmentKernel, mean_step

_CHUNK = 1 << 19
_MASK64 = (1 << 64) - 1


@njit(cache=True, nogil=True)
def _walk_chunk(u, cum, offs, nxt, r0):  # pragma: no cover - compiled
    x = 0
    r = r0
    n_choices = cum.shape[1]
    for n in range(u.shape[0]):
        un = u[n]
        k = 0
        while k < n_choices - 1 and un >= cum[r, k]:
            k += 1
        x += offs[r, k]
        r = nxt[r, k]
    return x, r


def _step_tables(kernel: EnvironmentKernel):
    n = kernel.period
    widest = max(len(d.probs) for d in kernel.steps)
    cum = np.full((n, widest), np.inf)
    offs = np.zeros((n, widest), dtype=np.int64)
    for r, dist in enumerate(kernel.steps):
        ordered = list(dist.probs.items())
        cum[r, :len(ordered)] = np.cumsum([p for _, p in ordered])
        offs[r, :len(ordered)] = [o for o, _ in ordered]
        offs[r, len(ordered):] = ordered[-1][0]
    nxt = (np.arange(n)[:, None] + offs) % n
    return cum, offs, nxt


def _replicate_displacement(seed, rep, steps, cum, offs, nxt):
    key = np.array([seed & _MASK64, rep], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    x = 0
    r = 0
    done = 0
    while done < steps:
        u = gen.random(min(_CHUNK, steps - done))
        dx, r = _walk_chunk(u, cum, offs, nxt, r)
        x += dx
        done += len(u)
    return x


@dataclass(frozen=True)
class DriftEstimate:
    """Mean velocity across replicates with a 95% normal-approximation CI."""

    velocity: float
    half_width: float
    steps: int
    replicates: int
    seed: int

    def to_json(self) -> str:
        hw = self.half_width if math.isfinite(self.half_width) else None
        return json.dumps({
            "velocity": self.velocity,
            "half_width": hw,
            "steps": self.steps,
            "replicates": self.replicates,
            "seed": self.seed,
        })


def simulate(kernel: EnvironmentKernel, steps: int, replicates: int,
             seed: int = 0, workers: Optional[int] = None) -> DriftEstimate:
    """Run independent walks from position 0 and estimate the drift velocity.

    ``workers`` only affects speed; the estimate is a pure function of
    (kernel, steps, replicates, seed).  A confidence half-width needs at
    least 8 replicates and is NaN below that.
    """
    if not isinstance(kernel, EnvironmentKernel):
        raise InvalidKernel(f"expected an EnvironmentKernel, got {type(kernel).__name__}")
    if steps < 1 or replicates < 1:
        raise ValueError("steps and replicates must both be at least 1")
    cum, offs, nxt = _step_tables(kernel)
    if workers is None:
        workers = min(replicates, os.cpu_count() or 1)
    displacements = np.empty(replicates, dtype=np.int64)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            jobs = [pool.submit(_replicate_displacement, seed, rep, steps, cum, offs, nxt)
                    for rep in range(replicates)]
            for rep, job in enumerate(jobs):
                displacements[rep] = job.result()
    else:
        for rep in range(replicates):
            displacements[rep] = _replicate_displacement(seed, rep, steps, cum, offs, nxt)
    velocities = displacements / steps
    if replicates >= 8:
        half_width = 1.96 * float(np.std(velocities, ddof=1)) / math.sqrt(replicates)
    else:
        half_width = float("nan")
    return DriftEstimate(float(np.mean(velocities)), half_width, steps, replicates, seed)


def residue_transition_matrix(kernel: EnvironmentKernel) -> np.ndarray:
    """Transition matrix of the walk's residue (position mod N) chain."""
    n = kernel.period
    p = np.zeros((n, n))
    for r, dist in enumerate(kernel.steps):
        for o, prob in dist.probs.items():
            p[r, (r + o) % n] += prob
    return p


def _strongly_connected(p: np.ndarray) -> bool:
    n = len(p)
    for adjacency in (p > 0, p.T > 0):
        seen = {0}
        frontier = [0]
        while frontier:
            r = frontier.pop()
            for s in np.nonzero(adjacency[r])[0]:
                if s not in seen:
                    seen.add(int(s))
                    frontier.append(int(s))
        if len(seen) != n:
            return False
    return True


def long_run_velocity(kernel: EnvironmentKernel) -> float:
    """Stationary-average mean step of the residue chain."""
    p = residue_transition_matrix(kernel)
    if not _strongly_connected(p):
        raise ReducibleResidueChain("residue chain is not irreducible")
    n = kernel.period
    a = (p.T - np.eye(n)).copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    return float(sum(pi[r] * mean_step(kernel.steps[r]) for r in range(n)))


def agreement_check(kernel: EnvironmentKernel, tol: float = DEFAULT_TOL,
                    steps: int = 1_000_000, replicates: int = 32,
                    seed: int = 0) -> bool:
    """True iff the simulated drift sign matches the spectral verdict.

    Requires a conclusive verdict (|ln_c| > tol) and a CI that excludes 0.
    """
    report = classify_kernel(kernel, tol)
    if abs(report.ln_c) <= tol:
        raise ValueError("verdict is Fair at this tolerance; drift sign is undefined")
    est = simulate(kernel, steps, replicates, seed)
    if not math.isfinite(est.half_width) or abs(est.velocity) <= est.half_width:
        raise InconclusiveSimulation(
            f"velocity {est.velocity:.3e} +- {est.half_width:.3e} straddles zero")
    agrees = (est.velocity > 0) == (report.ln_c > 0)
    if not agrees:
        # advisory diagnostic only: the spectral verdict stays authoritative
        logging.getLogger(__name__).warning(
            "drift sign %+d disagrees with spectral verdict %s (ln_c=%.3e)",
            1 if est.velocity > 0 else -1, report.verdict.value, report.ln_c)
    return agrees
