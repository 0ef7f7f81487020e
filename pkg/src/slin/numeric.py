"""Double-precision integration kernels for polynomial vector fields.

A vector field is flattened once into CSR-style arrays (`compile_field`) and
then stepped with classic fixed-step RK4. The stepping kernel exists twice
with identical semantics: a Cython extension (`slin._rk4core`, built at
install time) and the pure-Python twin below. Both perform the same IEEE
double operations in the same order, so their trajectories agree bit for bit;
`benchmarks/bench_rk4.py` compares their speed.

The extension is picked at import when present. Set ``SLIN_PURE_PYTHON=1``
to force the fallback (useful for benchmarking and debugging).
"""

from __future__ import annotations

import math
import os
from array import array
from dataclasses import dataclass
from typing import Sequence, Tuple

from .poly import Polynomial, grlex_key


@dataclass(frozen=True)
class CompiledField:
    """Flattened sparse polynomial vector field.

    Component c owns terms comp_ptr[c]:comp_ptr[c+1]; term t has coefficient
    coeff[t] and factors term_ptr[t]:term_ptr[t+1], each factor being
    variable fvar[f] raised to fexp[f] (by repeated multiplication, so
    overflow saturates to inf instead of raising).
    """

    dim: int
    comp_ptr: array
    coeff: array
    term_ptr: array
    fvar: array
    fexp: array


def compile_field(field: Sequence[Polynomial]) -> CompiledField:
    dim = len(field)
    comp_ptr = array("i", [0])
    coeff = array("d")
    term_ptr = array("i", [0])
    fvar = array("i")
    fexp = array("i")
    for p in field:
        if len(p.space) != dim:
            raise ValueError("field must be square: one component per variable")
        for mono in sorted(p.terms, key=grlex_key, reverse=True):
            coeff.append(float(p.terms[mono]))
            for var, e in enumerate(mono):
                if e:
                    fvar.append(var)
                    fexp.append(e)
            term_ptr.append(len(fvar))
        comp_ptr.append(len(coeff))
    return CompiledField(dim, comp_ptr, coeff, term_ptr, fvar, fexp)


def _eval_into(cf_arrays, y, res):
    comp_ptr, coeff, term_ptr, fvar, fexp = cf_arrays
    dim = len(res)
    for c in range(dim):
        acc = 0.0
        for t in range(comp_ptr[c], comp_ptr[c + 1]):
            v = coeff[t]
            for f in range(term_ptr[t], term_ptr[t + 1]):
                x = y[fvar[f]]
                for _ in range(fexp[f]):
                    v *= x
            acc += v
        res[c] = acc


def rk4_kernel_python(
    comp_ptr, coeff, term_ptr, fvar, fexp, y, step, n_steps, out
) -> int:
    """Pure-Python RK4 stepping; mirrors the Cython kernel operation-for-operation.

    `y` is the start state (not modified), `out` has room for
    (n_steps + 1) * dim doubles. Returns the number of completed steps with a
    finite state; fewer than n_steps means divergence.
    """
    arrays = (comp_ptr, coeff, term_ptr, fvar, fexp)
    dim = len(y)
    y = list(y)
    lost = [0.0] * dim  # Kahan compensation per component
    k1 = [0.0] * dim
    k2 = [0.0] * dim
    k3 = [0.0] * dim
    k4 = [0.0] * dim
    ytmp = [0.0] * dim
    half = 0.5 * step
    sixth = step / 6.0
    out[0:dim] = array("d", y)
    for s in range(n_steps):
        _eval_into(arrays, y, k1)
        for i in range(dim):
            ytmp[i] = y[i] + half * k1[i]
        _eval_into(arrays, ytmp, k2)
        for i in range(dim):
            ytmp[i] = y[i] + half * k2[i]
        _eval_into(arrays, ytmp, k3)
        for i in range(dim):
            ytmp[i] = y[i] + step * k3[i]
        _eval_into(arrays, ytmp, k4)
        ok = True
        for i in range(dim):
            # Compensated accumulation keeps the roundoff floor of long
            # integrations below the truncation error's 4th-order decay.
            delta = sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) + lost[i]
            t = y[i] + delta
            lost[i] = delta - (t - y[i])
            y[i] = t
            if not math.isfinite(t):
                ok = False
        if not ok:
            return s
        base = (s + 1) * dim
        out[base : base + dim] = array("d", y)
    return n_steps


def _select_backend():
    if os.environ.get("SLIN_PURE_PYTHON") == "1":
        return rk4_kernel_python, "python"
    try:
        from ._rk4core import rk4_kernel as compiled
    except ImportError:
        return rk4_kernel_python, "python"
    return compiled, "cython"


RK4_KERNEL, BACKEND = _select_backend()


def integrate(
    field: Sequence[Polynomial], y0: Sequence[float], step: float, n_steps: int
) -> Tuple[array, int]:
    """Run RK4 with the selected backend; see `rk4_kernel_python` for the contract."""
    cf = compile_field(field)
    return integrate_compiled(cf, y0, step, n_steps, RK4_KERNEL)


def integrate_compiled(
    cf: CompiledField, y0: Sequence[float], step: float, n_steps: int, kernel=None
) -> Tuple[array, int]:
    if len(y0) != cf.dim:
        raise ValueError(f"state has {len(y0)} entries, field has {cf.dim}")
    kernel = kernel or RK4_KERNEL
    y = array("d", [float(v) for v in y0])
    out = array("d", bytes(8 * (n_steps + 1) * cf.dim))
    completed = kernel(
        cf.comp_ptr, cf.coeff, cf.term_ptr, cf.fvar, cf.fexp, y, step, n_steps, out
    )
    return out[: (completed + 1) * cf.dim], completed
