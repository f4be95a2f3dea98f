"""Which chains give regular, strictly isospectral extensions.

The charge conditions are the predicted classification; the exact Sturm count
of the Wronskian polynomial D on (0, inf) is the certificate. Both are
reported, together with the boundary behaviour of the transported last seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .chain import ChainSpec, DegenerateChain, extended_potential
from .exact import GaugedFunction, sturm_count, wronskian
from .isotonic import ConstraintViolation, IsotonicParams, parse_sign, seed_state, sign_symbol

__all__ = [
    "ChargeRecord", "AdmissibilityReport", "AsymptoticData", "charge", "admissible",
    "origin_exponent", "transported_seed", "two_step_leading", "two_step_predicted",
    "inverse_state_exponent", "inverse_state_unphysical", "charge_conditions",
]


@dataclass(frozen=True)
class ChargeRecord:
    q_plus: int
    q_minus: int

    @property
    def q(self) -> int:
        return self.q_plus - self.q_minus

    @property
    def length(self) -> int:
        return self.q_plus + self.q_minus


def _signs(steps) -> list[int]:
    if isinstance(steps, ChainSpec):
        return [i for _, i in steps.steps]
    out = []
    for s in steps:
        if isinstance(s, tuple):
            s = s[1]
        out.append(parse_sign(s))
    return out


def charge(steps) -> ChargeRecord:
    """Count '+' and '-' steps; accepts a ChainSpec, (n, i) pairs or bare signs."""
    signs = _signs(steps)
    if any(i == 3 for i in signs):
        raise ValueError("Gamma_3 steps carry no charge in this scheme")
    qp = sum(1 for i in signs if i == 1)
    return ChargeRecord(qp, len(signs) - qp)


def _step_condition(i: int, a: Fraction, q_prefix: int) -> bool:
    # '+': a > -q(prefix); '-': a > 1 - q(prefix)
    return a > -q_prefix if i == 1 else a > 1 - q_prefix


def charge_conditions(chain: ChainSpec, reorder: bool = True) -> list[bool]:
    """Per-step charge condition on each prefix (of the '+'-first reordering by default)."""
    ordered = chain.reordered() if reorder else chain
    a = chain.params.a
    out, q = [], 0
    for _, i in ordered.steps:
        out.append(_step_condition(i, a, q))
        q += i
    return out


def transported_seed(chain: ChainSpec) -> GaugedFunction:
    """The last seed carried through the other steps: W(all) / W(all but last)."""
    if not chain.m:
        raise ValueError("empty chain has no last seed")
    fns = [s.fn for s in chain.seeds]
    head = wronskian(fns[:-1]) if chain.m > 1 else GaugedFunction.constant(1, chain.omega)
    full = wronskian(fns)
    if full.is_zero() or head.is_zero():
        raise DegenerateChain(f"Wronskian of {chain.label()} vanishes identically")
    return full / head


def origin_exponent(chain: ChainSpec, exact: bool = False) -> Fraction:
    """Exponent of x at 0+ of the transported last seed, i_m (alpha + q) - 1/2.

    With ``exact`` the exponent is read off the canonical form of
    W(all)/W(prefix), whose body is finite and nonzero at z = 0.
    """
    if not chain.m:
        raise ValueError("origin exponent of an empty chain")
    if exact:
        return transported_seed(chain).x_power
    i_m = chain.steps[-1][1]
    return i_m * (chain.params.alpha + chain.q) - Fraction(1, 2)


def inverse_state_exponent(chain: ChainSpec) -> Fraction:
    return -origin_exponent(chain)


def inverse_state_unphysical(chain: ChainSpec) -> bool:
    """1/phi (phi the transported last seed) solves the extended equation at the
    seed energy; it must break the Dirichlet condition at 0+ or at infinity."""
    phi = transported_seed(chain)
    fails_at_zero = -phi.x_power <= 0
    fails_at_infinity = -phi.exp_coeff >= 0
    return fails_at_zero or fails_at_infinity


@dataclass(frozen=True)
class AdmissibilityReport:
    chain_label: str
    params: IsotonicParams
    charge: ChargeRecord
    seed_ok: tuple
    condition_ok: tuple
    reordered_label: str
    failing_prefix: int | None
    nodeless_certificate: int | None
    origin_exponent: Fraction | None
    origin_exponent_exact: Fraction | None
    infinity_class: str | None
    reasons: tuple = ()

    @property
    def predicted(self) -> bool:
        return all(self.seed_ok) and all(self.condition_ok)

    @property
    def certified(self) -> bool:
        return all(self.seed_ok) and self.nodeless_certificate == 0

    @property
    def admissible(self) -> bool:
        return self.predicted and self.certified

    @property
    def consistent(self) -> bool:
        """Sufficiency: predicted admissibility must come with a clean certificate."""
        return not self.predicted or self.certified

    def as_dict(self) -> dict:
        return {
            "chain": self.chain_label,
            "omega": self.params.omega,
            "a": self.params.a,
            "q_plus": self.charge.q_plus,
            "q_minus": self.charge.q_minus,
            "q": self.charge.q,
            "seed_ok": list(self.seed_ok),
            "condition_ok": list(self.condition_ok),
            "reordered": self.reordered_label,
            "failing_prefix": self.failing_prefix,
            "nodeless_certificate": self.nodeless_certificate,
            "origin_exponent": self.origin_exponent,
            "origin_exponent_exact": self.origin_exponent_exact,
            "infinity_class": self.infinity_class,
            "predicted": self.predicted,
            "certified": self.certified,
            "admissible": self.admissible,
            "reasons": list(self.reasons),
        }


def admissible(steps, params: IsotonicParams | None = None) -> AdmissibilityReport:
    """Full verdict for a chain; never raises for parameter-constraint failures.

    ``steps`` is a ChainSpec, or a step list together with ``params``.
    """
    if isinstance(steps, ChainSpec):
        params = steps.params
        raw = list(steps.steps)
    else:
        if params is None:
            raise ValueError("params are required when steps is not a ChainSpec")
        raw = [(int(n), parse_sign(i)) for n, i in steps]
    label = ",".join(f"{n}{sign_symbol(i)}" for n, i in raw) or "(empty)"
    reasons = []
    seed_ok = []
    for n, i in raw:
        try:
            seed_state(n, i, params)
            seed_ok.append(True)
        except ConstraintViolation as exc:
            seed_ok.append(False)
            reasons.append(f"seed {n}{sign_symbol(i)}: {exc}")
    rec = charge(raw)
    plus = [s for s in raw if s[1] == 1]
    minus = [s for s in raw if s[1] == -1]
    reordered = plus + minus
    cond, q = [], 0
    for _, i in reordered:
        cond.append(_step_condition(i, params.a, q))
        q += i
    failing = next((j + 1 for j, ok in enumerate(cond) if not ok), None)
    if failing is not None:
        n, i = reordered[failing - 1]
        reasons.append(f"charge condition fails at reordered prefix {failing} (step {n}{sign_symbol(i)})")
    ordered_label = ",".join(f"{n}{sign_symbol(i)}" for n, i in reordered) or "(empty)"

    certificate = origin = origin_exact = None
    inf_class = None
    if all(seed_ok):
        try:
            chain = ChainSpec(tuple(raw), params)
            D = extended_potential(chain).D
            certificate = sturm_count(D) if D.degree > 0 else 0
            if certificate:
                reasons.append(f"Wronskian polynomial has {certificate} zero(s) on (0, inf)")
            if chain.m:
                origin = origin_exponent(chain)
                phi = transported_seed(chain)
                origin_exact = phi.x_power
                inf_class = "diverges" if phi.exp_coeff > 0 else "vanishes"
        except (ConstraintViolation, DegenerateChain) as exc:
            reasons.append(str(exc))
            certificate = None
    return AdmissibilityReport(label, params, rec, tuple(seed_ok), tuple(cond), ordered_label,
                               failing, certificate, origin, origin_exact, inf_class, tuple(reasons))


@dataclass(frozen=True)
class AsymptoticData:
    """phi ~ c0 x^e0 at 0+ and phi ~ cinf x^einf e^{c z} at infinity."""

    exponent_zero: Fraction
    sign_zero: int
    exponent_infinity: Fraction
    sign_infinity: int
    exp_coeff: Fraction
    coeff_zero: Fraction | None = None
    coeff_infinity: Fraction | None = None

    @property
    def infinity_class(self) -> str:
        return "diverges" if self.exp_coeff > 0 else "vanishes"


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def two_step_leading(chain: ChainSpec) -> AsymptoticData:
    """Exact leading behaviour of W(phi_1, phi_2)/phi_1 at 0+ and at infinity."""
    if chain.m != 2:
        raise ValueError("two_step_leading needs a chain of length 2")
    phi = transported_seed(chain)
    num, den = phi.body.num, phi.body.den
    c0 = num(0) / den(0)
    d = num.degree - den.degree
    # z^d = (omega/2)^d x^(2d)
    cinf = num.lc / den.lc * (chain.omega / 2) ** d
    return AsymptoticData(phi.x_power, _sgn(c0), phi.x_power + 2 * d, _sgn(cinf),
                          phi.exp_coeff, c0, cinf)


def _falling_product(top: Fraction, count: int) -> Fraction:
    out = Fraction(1)
    for j in range(count):
        out *= top - j
    return out


def _binom(top: Fraction, k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    return _falling_product(top, k) / factorial(k)


def two_step_predicted(chain: ChainSpec) -> AsymptoticData:
    """The closed-form leading terms of the four two-step cases.

    Exponents, signs and the 0+ coefficients follow the standard closed forms.
    The coefficients at infinity carry a factor (omega/2)^(n2-1) (equal signs)
    or 2 (mixed signs) that the short forms drop; both are kept here so the
    comparison with the Wronskian expansion can be exact.
    """
    if chain.m != 2:
        raise ValueError("two_step_predicted needs a chain of length 2")
    (n1, i1), (n2, i2) = chain.steps
    al, w = chain.params.alpha, chain.omega
    sgn = _sgn(n2 - n1)
    if i1 == i2 and n2 == 0:
        raise ValueError("the equal-sign closed forms divide by n2 and need n2 >= 1")
    if i1 == i2 == 1:
        c0 = w * _binom(n2 + al, n2 - 1) * Fraction(n2 - n1, n2)
        cinf = w * (n2 - n1) / Fraction(factorial(n2)) * (w / 2) ** (n2 - 1)
        return AsymptoticData(al + Fraction(3, 2), sgn, 2 * n2 + al - Fraction(1, 2), sgn,
                              Fraction(1, 2), c0, cinf)
    if i1 == i2 == -1:
        s = (-1) ** n2 * sgn
        c0 = -w * _binom(n2 - al, n2 - 1) * Fraction(n2 - n1, n2)
        cinf = (-1) ** n2 * w * (n2 - n1) / Fraction(factorial(n2)) * (w / 2) ** (n2 - 1)
        return AsymptoticData(-(al - 2) - Fraction(1, 2), s, 2 * n2 - al - Fraction(1, 2), s,
                              Fraction(-1, 2), c0, cinf)
    if i1 == -1 and i2 == 1:
        # (alpha + n2) ... alpha has n2 + 1 factors
        c0 = 2 * _falling_product(al + n2, n2 + 1) / factorial(n2)
        cinf = 2 * (w / 2) ** (n2 + 1) / factorial(n2)
        return AsymptoticData(al - Fraction(1, 2), 1, 2 * n2 + chain.params.a + 1, 1,
                              Fraction(1, 2), c0, cinf)
    s = (-1) ** (n2 + 1)
    # (alpha - n2) ... alpha, again n2 + 1 factors
    c0 = s * 2 * _falling_product(al, n2 + 1) / factorial(n2)
    cinf = s * 2 * (w / 2) ** (n2 + 1) / factorial(n2)
    return AsymptoticData(-al - Fraction(1, 2), s, 2 * n2 - chain.params.a + 2, s,
                          Fraction(-1, 2), c0, cinf)
