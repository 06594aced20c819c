"""Sparse complex polynomials in v_1..v_S and their conjugate partners vb_1..vb_S.

The conjugate variables are independent symbols here. A monomial is keyed by
an exponent tuple of length 2S: the first S entries belong to v, the rest to vb.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np


class VPolynomial:
    __slots__ = ("sites", "terms")

    def __init__(self, sites: int, terms: dict | None = None):
        self.sites = sites
        self.terms: dict[tuple[int, ...], complex] = {}
        for expo, coef in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != 2 * sites or min(expo, default=0) < 0:
                raise ValueError(f"bad exponent {expo} for {sites} sites")
            if coef != 0:
                self.terms[expo] = self.terms.get(expo, 0) + complex(coef)
        self._prune()

    def _prune(self):
        self.terms = {e: c for e, c in self.terms.items() if c != 0}

    # construction helpers
    @classmethod
    def constant(cls, sites: int, value: complex = 1.0) -> "VPolynomial":
        return cls(sites, {(0,) * (2 * sites): value})

    @classmethod
    def var(cls, sites: int, j: int, conj: bool = False) -> "VPolynomial":
        expo = [0] * (2 * sites)
        expo[j + (sites if conj else 0)] = 1
        return cls(sites, {tuple(expo): 1.0})

    @classmethod
    def casimir(cls, sites: int) -> "VPolynomial":
        """v . vb = sum_j v_j vb_j."""
        out = cls(sites)
        for j in range(sites):
            out = out + cls.var(sites, j) * cls.var(sites, j, conj=True)
        return out

    @classmethod
    def random(cls, rng: np.random.Generator, sites: int, degree: int, n_terms: int) -> "VPolynomial":
        terms = {}
        for _ in range(n_terms):
            total = rng.integers(0, degree + 1)
            cuts = np.sort(rng.integers(0, total + 1, size=2 * sites - 1))
            expo = np.diff(np.concatenate([[0], cuts, [total]]))
            terms[tuple(expo)] = complex(rng.normal(), rng.normal())
        return cls(sites, terms)

    # algebra
    def _check(self, other):
        if self.sites != other.sites:
            raise ValueError("site counts differ")

    def __add__(self, other):
        if not isinstance(other, VPolynomial):
            other = VPolynomial.constant(self.sites, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return VPolynomial(self.sites, out)

    __radd__ = __add__

    def __neg__(self):
        return VPolynomial(self.sites, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, VPolynomial):
            return VPolynomial(self.sites, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out = defaultdict(complex)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return VPolynomial(self.sites, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = VPolynomial.constant(self.sites)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, index: int) -> "VPolynomial":
        """Partial derivative in raw variable ``index`` (0..2S-1)."""
        out = {}
        for e, c in self.terms.items():
            if e[index]:
                ne = list(e)
                ne[index] -= 1
                out[tuple(ne)] = c * e[index]
        return VPolynomial(self.sites, out)

    def times_var(self, index: int) -> "VPolynomial":
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[index] += 1
            out[tuple(ne)] = c
        return VPolynomial(self.sites, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def evaluate(self, v, vb) -> complex:
        x = np.concatenate([np.asarray(v, complex), np.asarray(vb, complex)])
        return complex(sum(c * np.prod(x ** np.array(e)) for e, c in self.terms.items()))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs_coefficient() <= tol

    def __eq__(self, other):
        return isinstance(other, VPolynomial) and self.sites == other.sites and self.terms == other.terms

    def __repr__(self):
        return f"VPolynomial({self.sites}, {self.terms!r})"
