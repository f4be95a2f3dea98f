"""scikit-learn style facade over the exact constructions.

``fit`` does the exact work (chain, potential, eigenstates, norms); ``transform``
only evaluates floats. Hyperparameters are the chain string and the exact
parameters, so the estimators clone and grid-search like any other.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .admissibility import admissible
from .chain import eigenstate_wronskian, extended_potential, weight_function
from .cli import ChainInputError, parse_chain
from .isotonic import potential
from .numeric import orthogonality_matrix

__all__ = ["IsotonicExtension", "ExceptionalLaguerreFeatures"]


def _build(chain, omega, a, n_levels):
    if not isinstance(n_levels, (int, np.integer)) or n_levels < 1:
        raise ValueError(f"n_levels must be a positive integer, got {n_levels!r}")
    try:
        spec = parse_chain(chain, omega, a)
    except ChainInputError as exc:
        raise ValueError(exc.message) from None
    report = admissible(spec)
    if spec.m and not report.admissible:
        raise ValueError(f"chain {spec.label()} is not admissible: {'; '.join(report.reasons)}")
    return spec, report


class IsotonicExtension(BaseEstimator, TransformerMixin):
    """Eigenstates psi_0..psi_{n_levels-1} of the extended isotonic oscillator as features of x.

    X is a column of positions x > 0. With ``normalize`` each column has unit
    L2 norm on the half-line (norms from the exact weight by quadrature).
    """

    def __init__(self, chain="1+", omega="1", a="2", n_levels=4, normalize=True):
        self.chain = chain
        self.omega = omega
        self.a = a
        self.n_levels = n_levels
        self.normalize = normalize

    def fit(self, X=None, y=None):
        spec, report = _build(self.chain, self.omega, self.a, self.n_levels)
        self.chain_ = spec
        self.admissibility_ = report
        self.states_ = [eigenstate_wronskian(spec, k) for k in range(self.n_levels)]
        self.energies_ = np.array([float(s.energy) for s in self.states_])
        if self.normalize:
            gram = orthogonality_matrix(spec, self.n_levels)
            # int psi^2 dx = (2/omega)^(alpha+q) / omega * int P^2 w dz
            w = float(spec.omega)
            scale = (2 / w) ** gram.exponent / w
            self.norms_ = np.sqrt(scale * np.diag(gram.matrix))
        else:
            self.norms_ = np.ones(self.n_levels)
        self.n_features_in_ = 1
        return self

    def _positions(self, X):
        X = check_array(X, ensure_2d=False, dtype=float)
        x = X.ravel() if X.ndim == 1 or X.shape[1] == 1 else None
        if x is None:
            raise ValueError(f"expected a single column of positions, got shape {X.shape}")
        if np.any(x <= 0):
            raise ValueError("positions must be strictly positive")
        return x

    def transform(self, X):
        check_is_fitted(self, "states_")
        x = self._positions(X)
        cols = [np.asarray(s.fn.evaluate(x), dtype=float) / n
                for s, n in zip(self.states_, self.norms_)]
        return np.column_stack(cols)

    def potential(self, X):
        """V^(chain)(x), or the bare oscillator for the empty chain."""
        check_is_fitted(self, "states_")
        x = self._positions(X)
        V = extended_potential(self.chain_) if self.chain_.m else potential(self.chain_.params)
        return np.asarray(V(x), dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.array([f"psi_{k}" for k in range(self.n_levels)], dtype=object)


class ExceptionalLaguerreFeatures(BaseEstimator, TransformerMixin):
    """Exceptional Laguerre polynomials P_k(z) of a chain evaluated at z.

    With ``weighted`` the columns are sqrt(weight(z)) P_k(z), which are
    orthogonal in plain L2(0, inf).
    """

    def __init__(self, chain="1+", omega="1", a="2", degree=4, weighted=False):
        self.chain = chain
        self.omega = omega
        self.a = a
        self.degree = degree
        self.weighted = weighted

    def fit(self, X=None, y=None):
        spec, _ = _build(self.chain, self.omega, self.a, self.degree)
        self.chain_ = spec
        self.polys_ = [eigenstate_wronskian(spec, k).numerator_poly for k in range(self.degree)]
        self.weight_ = weight_function(spec)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "polys_")
        Z = check_array(X, ensure_2d=False, dtype=float)
        if Z.ndim == 2 and Z.shape[1] != 1:
            raise ValueError(f"expected a single column of z values, got shape {Z.shape}")
        z = Z.ravel()
        if np.any(z < 0):
            raise ValueError("z must be nonnegative")
        out = np.column_stack([p.evaluate_float(z) for p in self.polys_])
        if self.weighted:
            with np.errstate(divide="ignore"):
                out = out * np.exp(0.5 * self.weight_.log_weight(z))[:, None]
        return out

    def degrees(self):
        check_is_fitted(self, "polys_")
        return [p.degree for p in self.polys_]

