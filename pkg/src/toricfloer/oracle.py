"""Brute-force grid oracle for balanced fibers.

Scans a dense grid of interior fiber positions and holonomy vectors for
small balanced residuals, then polishes the best grid cells with local
least squares. Serves as an independent completeness check on the exact
and Newton pipelines; the per-cell scan is the package's hot loop.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .kernels import grid_min_residual
from .lattice import Polytope

# probe values separating the area filtration levels: vanishing of the
# residual at several generic t in (0,1) forces per-level vanishing
PROBE_T = (0.31830988618379067, 0.5641895835477563, 0.7853981633974483)


@dataclass(frozen=True)
class OracleCandidate:
    point: tuple[float, ...]
    nu: tuple[float, ...]
    residual: float


def _residual_fun(p: Polytope):
    v = np.array(p.normals, dtype=float)
    lam = np.array([float(l) for l in p.offsets])
    n = p.dim

    def fun(x):
        a, nu = x[:n], x[n:]
        ell = v @ a - lam
        out = []
        for t in PROBE_T:
            w = t ** ell
            s = (w * np.exp(1j * (v @ nu))) @ v
            out.extend(s.real)
            out.extend(s.imag)
        return np.array(out)

    return fun


def _grids(p: Polytope, n_a: int | None, n_nu: int | None):
    n = p.dim
    if n_a is None:
        n_a = 200 if n <= 2 else 32
    if n_nu is None:
        n_nu = 60 if n <= 2 else 16
    verts = p.vertices()
    lo = [min(float(v[i]) for v in verts) for i in range(n)]
    hi = [max(float(v[i]) for v in verts) for i in range(n)]
    axes = [np.linspace(lo[i], hi[i], n_a + 2)[1:-1] for i in range(n)]
    a_grid = np.stack([g.ravel() for g in np.meshgrid(*axes)], axis=-1)
    nu_axis = np.arange(n_nu) * (2 * math.pi / n_nu)
    nu_grid = np.stack(
        [g.ravel() for g in np.meshgrid(*([nu_axis] * n))], axis=-1)
    return a_grid, nu_grid


def grid_scan(p: Polytope, n_a: int | None = None, n_nu: int | None = None):
    """Minimum balanced residual over the holonomy grid, per interior
    fiber grid point. Returns (points, nus, min_residuals)."""
    v = np.array(p.normals, dtype=float)
    lam = np.array([float(l) for l in p.offsets])
    a_grid, nu_grid = _grids(p, n_a, n_nu)
    ell = a_grid @ v.T - lam
    interior = (ell > 1e-9).all(axis=1)
    a_grid, ell = a_grid[interior], ell[interior]
    phase = np.exp(1j * (nu_grid @ v.T))
    minres, argnu = grid_min_residual(
        ell, phase.real, phase.imag, v, np.array(PROBE_T))
    return a_grid, nu_grid[argnu], minres


def balanced_oracle(p: Polytope, n_a: int | None = None,
                    n_nu: int | None = None, polish_top: int = 40,
                    accept_tol: float = 1e-8) -> list[OracleCandidate]:
    """Balanced candidates from a grid scan plus local polishing."""
    a_grid, nu_best, minres = grid_scan(p, n_a, n_nu)
    order = np.argsort(minres)
    fun = _residual_fun(p)
    seeds = []
    for s in order[:10 * polish_top]:
        a = a_grid[s]
        if any(np.max(np.abs(a - np.array(prev))) < 0.5 for prev, _ in seeds):
            continue
        seeds.append((tuple(a), tuple(nu_best[s])))
        if len(seeds) >= polish_top:
            break
    out: list[OracleCandidate] = []
    # per-coordinate holonomy restart offsets so mixed holonomies such as
    # (0, pi) are reachable from any seed cell
    offs = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
    for a, nu in seeds:
        starts = [nu] + [
            tuple((x + o) % (2 * math.pi) for x, o in zip(nu, shift))
            for shift in itertools.product(offs, repeat=p.dim)
            if any(shift)]
        for nu0 in starts:
            x0 = np.concatenate([np.array(a), np.array(nu0)])
            fit = least_squares(fun, x0, method="lm", xtol=1e-15,
                                ftol=1e-15, gtol=1e-15)
            resid = float(np.linalg.norm(fun(fit.x)))
            if resid > accept_tol:
                continue
            a_sol = fit.x[:p.dim]
            nu_sol = np.mod(fit.x[p.dim:], 2 * math.pi)
            nu_sol[nu_sol > 2 * math.pi - 1e-9] = 0.0
            ell = np.array([float(l) for l in p.ell(a_sol)])
            if (ell <= 1e-9).any():
                continue
            dup = False
            for cand in out:
                da = np.max(np.abs(np.array(cand.point) - a_sol))
                dn = max(_circ(x, y) for x, y in zip(cand.nu, nu_sol))
                if max(da, dn) < 1e-4:
                    dup = True
                    break
            if not dup:
                out.append(OracleCandidate(
                    tuple(float(x) for x in a_sol),
                    tuple(float(x) for x in nu_sol), resid))
    out.sort(key=lambda c: (c.point, c.nu))
    return out


def _circ(x: float, y: float) -> float:
    d = abs(x - y) % (2 * math.pi)
    return min(d, 2 * math.pi - d)
