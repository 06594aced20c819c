"""Generators acting on polynomials in (v, vb) and the two-site semigroups.

    L0   = sum_ij eps_ij (v_i d/dv_j - vb_i d/dvb_j)
    Lint = u sum_j (v_j^2 d^2/dv_j^2 - vb_j^2 d^2/dvb_j^2)
    LP   = 2u (P'/P)(x) sum_j v_j vb_j (v_j d/dv_j - vb_j d/dvb_j),  x = v.vb

For P(x) = x^m the factor P'/P = m/x is rational, so ``apply_LP`` returns
the numerator and callers divide by v.vb themselves. The intertwining
identity (L0 + Lint)(P f) = P (L0 + Lint + LP) f is checked after
multiplying both sides by v.vb.

Two-site quadratic variables are n1 = v1 vb1, n2 = v2 vb2, q = v1 vb2,
qb = vb1 v2 (qb is not assumed to be the conjugate of q).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polynomial import VPolynomial


def _check_dims(f: VPolynomial, eps) -> np.ndarray:
    eps = np.asarray(eps)
    if eps.shape != (f.sites, f.sites):
        raise ValueError(f"hopping shape {eps.shape} does not match {f.sites} sites")
    return eps


def apply_L0(f: VPolynomial, eps) -> VPolynomial:
    eps = _check_dims(f, eps)
    s = f.sites
    out = VPolynomial(s)
    for j in range(s):
        dv = f.diff(j)
        dvb = f.diff(s + j)
        for i in range(s):
            if eps[i, j] != 0:
                out = out + (dv.times_var(i) - dvb.times_var(s + i)) * eps[i, j]
    return out


def apply_Lint(f: VPolynomial, u: float) -> VPolynomial:
    # monomials are eigenfunctions: v^2 d^2/dv^2 v^a = a(a-1) v^a
    s = f.sites
    out = {}
    for e, c in f.terms.items():
        w = sum(e[j] * (e[j] - 1) - e[s + j] * (e[s + j] - 1) for j in range(s))
        out[e] = u * w * c
    return VPolynomial(s, out)


def _euler_difference(f: VPolynomial, j: int) -> VPolynomial:
    """(v_j d/dv_j - vb_j d/dvb_j) f: multiplies each monomial by a_j - ab_j."""
    s = f.sites
    return VPolynomial(s, {e: (e[j] - e[s + j]) * c for e, c in f.terms.items()})


def apply_LP(f: VPolynomial, u: float, m: int) -> VPolynomial:
    """Numerator of LP f for P = x^m, i.e. (v.vb) * LP f."""
    if m < 1:
        raise ValueError("P exponent m must be >= 1")
    s = f.sites
    out = VPolynomial(s)
    for j in range(s):
        out = out + _euler_difference(f, j).times_var(j).times_var(s + j)
    return out * (2.0 * u * m)


def check_girsanov_identity(f: VPolynomial, m: int, eps, u: float) -> float:
    """Max coefficient gap between (x)(L0+Lint)(P f) and P[(x)(L0+Lint) f + (x) LP f]."""
    x = VPolynomial.casimir(f.sites)
    p = x ** m

    def gen(g):
        return apply_L0(g, eps) + apply_Lint(g, u)

    lhs = x * gen(p * f)
    rhs = p * (x * gen(f) + apply_LP(f, u, m))
    return (lhs - rhs).max_abs_coefficient()


def quadratic_variables() -> dict[str, VPolynomial]:
    """n1, n2, q, qb as polynomials on two sites."""
    v1, v2 = VPolynomial.var(2, 0), VPolynomial.var(2, 1)
    b1, b2 = VPolynomial.var(2, 0, True), VPolynomial.var(2, 1, True)
    return {"n1": v1 * b1, "n2": v2 * b2, "q": v1 * b2, "qb": b1 * v2}


@dataclass(frozen=True)
class QuadPoint:
    n1: complex
    n2: complex
    q: complex
    qbar: complex

    def as_vector(self) -> np.ndarray:
        return np.array([self.n1, self.n2, self.q, self.qbar], dtype=complex)

    @classmethod
    def from_vector(cls, x) -> "QuadPoint":
        return cls(*(complex(c) for c in x))


_SIGMA = np.array([[1.0, -1.0], [-1.0, 1.0]])
HOP_BLOCK = np.block([[np.zeros((2, 2)), _SIGMA], [_SIGMA, np.zeros((2, 2))]])


@dataclass(frozen=True)
class RotationMatrix4:
    matrix: np.ndarray

    def __matmul__(self, other: "RotationMatrix4") -> "RotationMatrix4":
        return RotationMatrix4(self.matrix @ other.matrix)

    def apply(self, point: QuadPoint) -> QuadPoint:
        return QuadPoint.from_vector(self.matrix @ point.as_vector())


def hopping_generator(eps: float) -> np.ndarray:
    """A with R_t = exp(-i t A) acting on (n1, n2, q, qb)."""
    return -eps * HOP_BLOCK


def rotation_Rt(eps: float, t: float) -> RotationMatrix4:
    """Entry table: cos^2, sin^2 on the number and q blocks, +-i sin cos across."""
    c, s = math.cos(eps * t), math.sin(eps * t)
    cc, ss, cs = c * c, s * s, 1j * s * c
    mat = np.array([
        [cc, ss, cs, -cs],
        [ss, cc, -cs, cs],
        [cs, -cs, cc, ss],
        [-cs, cs, ss, cc],
    ], dtype=complex)
    return RotationMatrix4(mat)


def apply_exp_Leps(func, eps: float, t: float):
    """e^{-itL_eps} F = F(R_t x): returns the transformed callable on QuadPoint."""
    rot = rotation_Rt(eps, t)
    return lambda point: func(rot.apply(point))


@dataclass(frozen=True)
class ExpLuAction:
    multiplier: complex
    n1: complex
    n2: complex


def _p_ratio(new_total, old_total, mode: str, n_total: int | None):
    if mode == "coherent":
        return np.exp(new_total - old_total)
    if mode == "number":
        if n_total is None or n_total < 1:
            raise ValueError("number mode needs n_total >= 1")
        if old_total == 0:
            raise ValueError("P(n1 + n2) vanishes in number mode")
        return (new_total / old_total) ** (n_total - 1)
    raise ValueError(f"unknown P mode {mode!r}")


def apply_exp_Lu(point: QuadPoint, b: int, bbar: int, u: float, t: float, mode: str = "coherent", n_total: int | None = None) -> ExpLuAction:
    """Action of e^{-itL_u} on G(n1, n2) q^b qb^bbar at ``point``.

    The result is G(n1', n2') * multiplier * q^b qb^bbar with rotated
    arguments n1' = e^{-i th} n1, n2' = e^{i th} n2, th = 2ut(b - bbar) and
    multiplier P(n1' + n2') / P(n1 + n2); P = e^x (coherent) or x^(N-1).
    """
    theta = 2.0 * u * t * (b - bbar)
    n1 = complex(math.cos(theta), -math.sin(theta)) * point.n1
    n2 = complex(math.cos(theta), math.sin(theta)) * point.n2
    mult = complex(_p_ratio(n1 + n2, point.n1 + point.n2, mode, n_total))
    return ExpLuAction(mult, n1, n2)


def exp_Lu_transform(g_func, b: int, bbar: int, u: float, t: float, mode: str = "coherent", n_total: int | None = None):
    """Return the function e^{-itL_u}[G(n1, n2) q^b qb^bbar] as a new G-type callable.

    The output has the same (b, bbar) sector, so it can be transformed again.
    """
    def transformed(n1, n2):
        act = apply_exp_Lu(QuadPoint(n1, n2, 0, 0), b, bbar, u, t, mode, n_total)
        return g_func(act.n1, act.n2) * act.multiplier

    return transformed


def evaluate_sector_function(g_func, b: int, bbar: int, point: QuadPoint) -> complex:
    return g_func(point.n1, point.n2) * point.q ** b * point.qbar ** bbar


def factorization_ratio(site: int, u: float, t: float) -> complex:
    """<n_s q>_u / (<n_s>_u <q>_u) = e^{-2iut} for site 1, e^{+2iut} for site 2."""
    if site not in (1, 2):
        raise ValueError("site must be 1 or 2")
    sign = -1.0 if site == 1 else 1.0
    return complex(math.cos(2.0 * u * t), sign * math.sin(2.0 * u * t))


def factorization_ratio_from_action(site: int, point: QuadPoint, u: float, t: float, mode: str = "coherent", n_total: int | None = None) -> complex:
    """Same ratio assembled from apply_exp_Lu at a sample point."""
    act_q = apply_exp_Lu(point, 1, 0, u, t, mode, n_total)
    act_n = apply_exp_Lu(point, 0, 0, u, t, mode, n_total)
    n_site_q = (act_q.n1 if site == 1 else act_q.n2) * act_q.multiplier * point.q
    n_site = (act_n.n1 if site == 1 else act_n.n2) * act_n.multiplier
    q_only = act_q.multiplier * point.q
    return n_site_q / (n_site * q_only)
