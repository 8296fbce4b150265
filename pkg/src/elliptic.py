"""Jacobi elliptic functions and complete elliptic integrals

All public functions take the modulus k (not the parameter m = k**2 used by
scipy.special) and broadcast over numpy arrays. Scalars in, floats out.
"""
from typing import List, Tuple, Union

import numpy as np
from scipy.special import ellipkinc

from src.exceptions import DomainError

ArrayLike = Union[float, np.ndarray]

# Above this modulus the Landen chain is replaced by first-order hyperbolic forms
NEAR_ONE = 1.0 - 1e-9
# Largest m1 * cosh(u)**2 for which the hyperbolic forms stay below 1e-13
_ASYMPTOTIC_REACH = 1e-7
_MAX_ITER = 32
_EPS = np.finfo(float).eps


def _check_modulus(k: ArrayLike) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    bad = ~np.isfinite(k) | (k < 0.0) | (k > 1.0)
    if np.any(bad):
        raise DomainError(float(k[bad].flat[0]) if k.ndim else float(k))
    return k


def _out(x: np.ndarray, scalar: bool) -> ArrayLike:
    return float(x) if scalar else x


def complementary_modulus(k: ArrayLike) -> ArrayLike:
    """k' = sqrt(1 - k**2) computed without cancellation near k = 1"""
    k = _check_modulus(k)
    return _out(np.sqrt((1.0 - k) * (1.0 + k)), k.ndim == 0)


def _agm_chain(k: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Arithmetic-geometric mean sequences (a_n, c_n) started at (1, k', k)"""
    a = np.ones_like(k)
    b = np.sqrt((1.0 - k) * (1.0 + k))
    c = k.copy()
    a_seq, c_seq = [a], [c]
    for _ in range(_MAX_ITER):
        if np.all(np.abs(c) <= _EPS * a):
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def complete_integrals(k: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Complete elliptic integrals of the first and second kind

    Args:
        k: elliptic modulus in [0, 1]

    Returns:
        (K(k), E(k)); K is +inf at k = 1

    Raises:
        DomainError: if k is outside [0, 1]
    """
    k = _check_modulus(k)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    degenerate = k == 1.0
    a_seq, c_seq = _agm_chain(np.where(degenerate, 0.0, k))

    # E / K = 1 - sum_n 2**(n - 1) c_n**2
    total = np.zeros_like(k)
    for n, c in enumerate(c_seq):
        total += 2.0 ** (n - 1) * c ** 2

    big_k = np.pi / (2.0 * a_seq[-1])
    big_e = big_k * (1.0 - total)
    big_k = np.where(degenerate, np.inf, big_k)
    big_e = np.where(degenerate, 1.0, big_e)

    if scalar:
        return float(big_k[0]), float(big_e[0])
    return big_k, big_e


def _landen(u: np.ndarray, k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Amplitude and Jacobi zeta by the descending Landen transformation"""
    a_seq, c_seq = _agm_chain(k)
    n_steps = len(a_seq) - 1
    phi = 2.0 ** n_steps * a_seq[-1] * u
    zeta = np.zeros_like(phi)
    for n in range(n_steps, 0, -1):
        zeta += c_seq[n] * np.sin(phi)
        phi = 0.5 * (phi + np.arcsin(c_seq[n] / a_seq[n] * np.sin(phi)))
    return phi, zeta


def _hyperbolic(
    u: np.ndarray, k: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """First-order expansion in m1 = 1 - k**2 around the hyperbolic limit"""
    m1 = (1.0 - k) * (1.0 + k)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(u)
        gd = np.arctan(np.sinh(u))
        shch = np.where(m1 > 0.0, np.sinh(u) * np.cosh(u), 0.0)
    tanh = np.tanh(u)

    sn = tanh + 0.25 * m1 * (shch - u) * sech ** 2
    cn = sech - 0.25 * m1 * (shch - u) * tanh * sech
    dn = sech + 0.25 * m1 * (shch + u) * tanh * sech
    am = gd + 0.25 * m1 * (shch - u) * sech
    eps = tanh + 0.25 * m1 * (2.0 * u - tanh - u * sech ** 2)
    return sn, cn, dn, am, eps


def _evaluate(u: ArrayLike, k: ArrayLike):
    k = _check_modulus(k)
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0 and k.ndim == 0
    u, k = np.broadcast_arrays(np.atleast_1d(u), np.atleast_1d(k))
    u = u.astype(float)
    k = k.astype(float)

    m1 = (1.0 - k) * (1.0 + k)
    reach = m1 * np.cosh(np.minimum(np.abs(u), 350.0)) ** 2
    asymptotic = ((k > NEAR_ONE) & (reach < _ASYMPTOTIC_REACH)) | (k == 1.0)

    am = np.empty_like(u)
    eps = np.empty_like(u)
    sn = np.empty_like(u)
    cn = np.empty_like(u)
    dn = np.empty_like(u)

    landen = ~asymptotic
    if np.any(landen):
        ul, kl = u[landen], k[landen]
        phi, zeta = _landen(ul, kl)
        big_k, big_e = complete_integrals(kl)
        am[landen] = phi
        sn[landen] = np.sin(phi)
        cn[landen] = np.cos(phi)
        # dn**2 = k'**2 + k**2 cn**2 has no cancellation anywhere on [0, 1)
        dn[landen] = np.sqrt(m1[landen] + kl ** 2 * cn[landen] ** 2)
        eps[landen] = big_e / big_k * ul + zeta

    if np.any(asymptotic):
        parts = _hyperbolic(u[asymptotic], k[asymptotic])
        for target, value in zip((sn, cn, dn, am, eps), parts):
            target[asymptotic] = value

    return scalar, sn, cn, dn, am, eps


def jacobi_sn_cn_dn(u: ArrayLike, k: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """Jacobi elliptic functions sn, cn, dn

    Args:
        u: argument, any real
        k: elliptic modulus in [0, 1]

    Returns:
        (sn(u, k), cn(u, k), dn(u, k))

    Raises:
        DomainError: if k is outside [0, 1]
    """
    scalar, sn, cn, dn, _, _ = _evaluate(u, k)
    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def jacobi_am(u: ArrayLike, k: ArrayLike) -> ArrayLike:
    """Jacobi amplitude, continuous in u (am(u + 2K) = am(u) + pi)"""
    scalar, _, _, _, am, _ = _evaluate(u, k)
    return float(am[0]) if scalar else am


def jacobi_epsilon(u: ArrayLike, k: ArrayLike) -> ArrayLike:
    """Jacobi epsilon function, the integral of dn(s, k)**2 over [0, u]

    Args:
        u: argument, any real
        k: elliptic modulus in [0, 1]

    Returns:
        epsilon(u, k)

    Raises:
        DomainError: if k is outside [0, 1]
    """
    scalar, _, _, _, _, eps = _evaluate(u, k)
    return float(eps[0]) if scalar else eps


def jacobi_all(u: ArrayLike, k: float) -> Tuple[np.ndarray, ...]:
    """sn, cn, dn, am and epsilon in one Landen pass, always as arrays"""
    _, sn, cn, dn, am, eps = _evaluate(u, k)
    return sn, cn, dn, am, eps


def incomplete_first_kind(amplitude: ArrayLike, k: ArrayLike) -> ArrayLike:
    """Incomplete integral of the first kind F(amplitude, k), inverse of jacobi_am"""
    k = _check_modulus(k)
    return ellipkinc(amplitude, k ** 2)
