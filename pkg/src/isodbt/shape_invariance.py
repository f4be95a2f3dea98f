"""Hereditary shape invariance of the extended potentials.

For a regular chain the superpartner built on the ground state satisfies
V~^(chain)(x; a) = V^(chain)(x; a + 1) + 2 omega, and the obstruction term
Delta^(chain) vanishes identically. Both are checked here as exact identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .chain import (ChainSpec, ExtendedPotential, eigenstate_wronskian, extended_potential,
                    transported_rs)
from .exact import GaugedFunction, RationalFn, wronskian
from .isotonic import IsotonicParams, physical_state, rs_function, seed_energy

__all__ = ["SIReport", "superpartner", "delta_chain", "si_check", "energy_differences_invariant",
           "ground_rs"]


def ground_rs(chain: ChainSpec) -> GaugedFunction:
    """w_0^(chain) = -psi_0'/psi_0 for the ground state of the extension."""
    if not chain.m:
        return rs_function(0, chain.params).total
    return eigenstate_wronskian(chain, 0).fn.rs_function()


def superpartner(chain: ChainSpec) -> ExtendedPotential:
    """V^(chain) + 2 (w_0^(chain))'.

    This is the Crum extension by the seeds followed by the physical ground
    state, so the closed form uses W(phi_1, ..., phi_m, psi_0) and the iterated
    form adds 2 w_0' to the chain potential.
    """
    base = extended_potential(chain)
    fns = [s.fn for s in chain.seeds] + [physical_state(0, chain.params)]
    W = wronskian(fns)
    correction = W.log_derivative().differentiate() * -2
    iterated = base.iterated_correction + ground_rs(chain).differentiate() * 2
    return ExtendedPotential(chain, W, W.body.num.primitive(), correction, iterated)


def delta_chain(chain: ChainSpec) -> GaugedFunction:
    """E_m(a) / (v(a) - w_0(a)) + w_0(a) + v(a + 1), all built on the prefix.

    v is the last seed's RS function carried through the first m - 1 steps and
    w_0 the ground RS function of the prefix extension.
    """
    if not chain.m:
        return GaugedFunction.zero(chain.omega)
    prefix = chain.prefix(chain.m - 1)
    n_m, i_m = chain.steps[-1]
    shifted = chain.with_params(chain.params.shifted(1))
    v_a = transported_rs(chain)[-1]
    v_a1 = transported_rs(shifted)[-1]
    w0 = ground_rs(prefix)
    e_m = seed_energy(n_m, i_m, chain.params)
    return e_m / (v_a - w0) + w0 + v_a1


def energy_differences_invariant(params: IsotonicParams, n_max: int = 5) -> bool:
    """E_{n,i}(a+1) - E_{m,j}(a+1) == E_{n,i}(a) - E_{m,j}(a) for i, j in {+, -}."""
    up = params.shifted(1)
    for (n, i), (m, j) in product(product(range(n_max + 1), (1, -1)), repeat=2):
        lhs = seed_energy(n, i, up) - seed_energy(m, j, up)
        rhs = seed_energy(n, i, params) - seed_energy(m, j, params)
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class SIReport:
    chain_label: str
    params: IsotonicParams
    delta_residual: GaugedFunction
    si_residual: RationalFn
    energy_ok: bool
    forms_agree: bool

    @property
    def passed(self) -> bool:
        return (self.delta_residual.is_zero() and self.si_residual.is_zero()
                and self.energy_ok and self.forms_agree)

    def as_dict(self) -> dict:
        return {
            "chain": self.chain_label,
            "omega": self.params.omega,
            "a": self.params.a,
            "delta_residual_zero": self.delta_residual.is_zero(),
            "si_residual_zero": self.si_residual.is_zero(),
            "si_residual": str(self.si_residual),
            "energy_differences_invariant": self.energy_ok,
            "superpartner_forms_agree": self.forms_agree,
            "passed": self.passed,
        }


def si_check(chain: ChainSpec) -> SIReport:
    """Residual V~^(chain)(a) - V^(chain)(a + 1) - 2 omega as a reduced rational function of z."""
    sp = superpartner(chain)
    up = extended_potential(chain.with_params(chain.params.shifted(1)))
    residual = sp.closed_form - up.closed_form - GaugedFunction.constant(2 * chain.omega, chain.omega)
    return SIReport(chain.label(), chain.params, delta_chain(chain), residual.as_z_rational(),
                    energy_differences_invariant(chain.params), sp.forms_agree)
