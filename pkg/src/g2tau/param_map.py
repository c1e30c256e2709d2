"""Two-way map between amplifier couplings and the state they generate.

Running H = c a†² + c* a² + b a + b* a† on the vacuum-side thermal state for
a time t prepares a displaced-squeezed thermal state; this module inverts that
relation.  `hamiltonian_from_state` answers "which (b, c) prepare this state
in time t", and `state_from_hamiltonian` runs the map forward again.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .gaussian_core import GaussianStateParams, SqueezeParam, alpha_of_tau

__all__ = [
    "SQUEEZE_EPS",
    "HamiltonianParams",
    "GenerationSpec",
    "hamiltonian_from_state",
    "state_from_hamiltonian",
]

# Below this squeeze magnitude the inverse map uses the series form of
# r/tanh(r/2); the truncated terms are O(r^4).
SQUEEZE_EPS = 1e-8


@dataclass(frozen=True)
class HamiltonianParams:
    """Amplifier couplings: b multiplies a (linear drive), c multiplies a†² (pair pump)."""

    b: complex = 0j
    c: complex = 0j

    def __post_init__(self) -> None:
        for name, value in (("b", self.b), ("c", self.c)):
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"coupling {name} must be finite, got {value}")


@dataclass(frozen=True)
class GenerationSpec:
    """A target state together with the time t > 0 the amplifier runs to prepare it."""

    state: GaussianStateParams
    t: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and self.t > 0.0):
            raise ValueError(f"generation time must be finite and > 0, got {self.t}")


def hamiltonian_from_state(spec: GenerationSpec) -> HamiltonianParams:
    """Couplings (b, c) that prepare spec.state in time spec.t.

    t*c = -(i/2) r e^{i*theta} and
    t*b = -(i/2) (alpha e^{-i*theta} + alpha* coth(r/2)) r, with the r -> 0
    series r*coth(r/2) = 2 + r^2/6 + O(r^4) taken below SQUEEZE_EPS (at r = 0
    this gives exactly b = -i alpha* / t, c = 0).
    """
    state = spec.state
    r = state.xi.r
    alpha = state.alpha
    phase = cmath.exp(1j * state.xi.theta)

    tc = -0.5j * r * phase
    if r < SQUEEZE_EPS:
        tb = -0.5j * (
            alpha * phase.conjugate() * r
            + alpha.conjugate() * (2.0 + r * r / 6.0)
        )
    else:
        tb = -0.5j * (
            alpha * phase.conjugate()
            + alpha.conjugate() / math.tanh(0.5 * r)
        ) * r
    return HamiltonianParams(b=tb / spec.t, c=tc / spec.t)


def state_from_hamiltonian(
    params: HamiltonianParams, t: float, nbar: float = 0.0
) -> GaussianStateParams:
    """State the couplings prepare after running for time t; nbar passes through.

    The squeeze parameter is xi(t) = 2i*t*c and the displacement is the
    accumulated flow shift alpha(t).
    """
    if not (math.isfinite(t) and t > 0.0):
        raise ValueError(f"generation time must be finite and > 0, got {t}")
    return GaussianStateParams(
        alpha=alpha_of_tau(params.b, params.c, t),
        xi=SqueezeParam.from_complex(2j * t * params.c),
        nbar=nbar,
    )
