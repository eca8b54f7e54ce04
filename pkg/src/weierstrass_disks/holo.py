"""Holomorphic data ``h_a = u_a + i v_a`` and its derivative.

    h_a(z)     = sum_j  arctan((z - b_j) / a) / (2**(j-1) * a)
    dh_a/dz(z) = sum_j  2**(1-j) / ((z - b_j)**2 + a**2)

The principal complex arctan is used pointwise.  Its cuts sit on
``{x = b_j, |y| >= a}`` while the domain only reaches ``|y| <= a**1.5 / 2``
there, so it coincides with continuation from ``z0 = 0``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import domain as _domain
from .params import ConstructionParams

POLE_GUARD = 1e-12


class DomainError(ValueError):
    """A point was passed outside the domain it must belong to."""


@dataclass(frozen=True)
class HoloSample:
    z: np.ndarray
    h: np.ndarray
    dzh: np.ndarray

    @property
    def u(self):
        return self.h.real

    @property
    def v(self):
        return self.h.imag


def _neumaier(terms):
    """Compensated sum over axis 0 of a real array."""
    s = np.zeros(terms.shape[1:])
    c = np.zeros(terms.shape[1:])
    for t in terms:
        tmp = s + t
        c += np.where(np.abs(s) >= np.abs(t), (s - tmp) + t, (t - tmp) + s)
        s = tmp
    return s + c


def _csum(terms):
    return _neumaier(terms.real) + 1j * _neumaier(terms.imag)


def _pole_check(params: ConstructionParams, z):
    b = np.asarray(params.points).reshape((-1,) + (1,) * z.ndim)
    for sign in (1, -1):
        if np.any(np.abs(z[None, ...] - (b + sign * 1j * params.a)) < POLE_GUARD):
            raise DomainError("evaluation at a pole b_j +- i a of dh/dz")


def _prepare(params, z, check_domain):
    z = np.asarray(z, dtype=complex)
    if check_domain:
        inside = _domain.contains(_domain.build_domain(params), z)
        if not np.all(inside):
            bad = np.atleast_1d(z)[~np.atleast_1d(inside)][0]
            raise DomainError(f"point {bad} lies outside the domain for {params}")
    _pole_check(params, z)
    return z


def _terms(params, z):
    b = np.asarray(params.points).reshape((-1,) + (1,) * z.ndim)
    weight = (0.5 ** np.arange(params.n)).reshape(b.shape)
    return b, weight


def h_values(params: ConstructionParams, z, check_domain: bool = False):
    z = _prepare(params, z, check_domain)
    b, weight = _terms(params, z)
    a = params.a
    return _csum(weight / a * np.arctan((z[None, ...] - b) / a))


def dzh_values(params: ConstructionParams, z, check_domain: bool = False):
    z = _prepare(params, z, check_domain)
    b, weight = _terms(params, z)
    return _csum(weight / ((z[None, ...] - b) ** 2 + params.a**2))


def eval_h(params: ConstructionParams, z, check_domain: bool = True) -> HoloSample:
    """Evaluate ``h_a`` and ``dh_a/dz`` at ``z`` (scalar or array)."""
    z = _prepare(params, z, check_domain)
    return HoloSample(z=z, h=h_values(params, z), dzh=dzh_values(params, z))


def eval_dz_h(params: ConstructionParams, z, check_domain: bool = True):
    return dzh_values(params, z, check_domain)


def dzh_expanded(params: ConstructionParams, z):
    """``dh_a/dz`` written out in real and imaginary parts (second line of its closed form)."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    re = np.zeros(z.shape)
    im = np.zeros(z.shape)
    for j, b in enumerate(params.points):
        p = (x - b) ** 2 + params.a**2 - y**2
        den = p**2 + 4 * (x - b) ** 2 * y**2
        re = re + 0.5**j * p / den
        im = im - 0.5**j * 2 * (x - b) * y / den
    return re + 1j * im


def _segment_integral(params, z0, z1, tol):
    d = z1 - z0

    def re(t):
        return (dzh_values(params, z0 + t * d) * d).real

    def im(t):
        return (dzh_values(params, z0 + t * d) * d).imag

    # a tolerance near machine precision trips QUADPACK's roundoff warning; the
    # returned gap is what callers judge, so the warning carries no information
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        r, _ = integrate.quad(re, 0.0, 1.0, epsabs=tol, epsrel=0, limit=200)
        i, _ = integrate.quad(im, 0.0, 1.0, epsabs=tol, epsrel=0, limit=200)
    return r + 1j * i


def path_in_domain(spec, path, samples_per_segment: int = 256) -> bool:
    path = np.asarray(path, dtype=complex)
    t = np.linspace(0.0, 1.0, samples_per_segment)
    for z0, z1 in zip(path[:-1], path[1:]):
        if not np.all(_domain.contains(spec, z0 + t * (z1 - z0))):
            return False
    return bool(np.all(_domain.contains(spec, path)))


def continuation_check(params: ConstructionParams, path, tol: float = 1e-13) -> float:
    """Largest gap between ``h_a`` and ``h_a(0) + int_path dh_a/dz`` over path vertices.

    ``path`` is a polyline starting at 0; it must stay inside the domain.
    """
    path = np.atleast_1d(np.asarray(path, dtype=complex))
    if path[0] != 0:
        raise ValueError("path must start at the base point 0")
    spec = _domain.build_domain(params)
    if not path_in_domain(spec, path):
        raise DomainError("path leaves the domain")
    h0 = complex(h_values(params, 0.0))
    acc = h0
    worst = 0.0
    for z0, z1 in zip(path[:-1], path[1:]):
        if z1 != z0:
            acc = acc + _segment_integral(params, z0, z1, tol)
        worst = max(worst, abs(complex(h_values(params, z1)) - acc))
    return worst


class FamilyData:
    """``h_a`` of the construction, packaged for the immersion engine."""

    name = "family"

    def __init__(self, params: ConstructionParams):
        self.params = params

    def h(self, z):
        return h_values(self.params, z)

    def dzh(self, z):
        return dzh_values(self.params, z)

    def contains(self, z):
        return _domain.contains(_domain.build_domain(self.params), z)

    def describe(self) -> dict:
        return {"data": self.name, **self.params.to_dict()}


class HelicoidData:
    """``h(z) = z``: the helicoid, used as a closed-form oracle."""

    name = "helicoid"

    def h(self, z):
        return np.asarray(z, dtype=complex)

    def dzh(self, z):
        return np.ones(np.shape(z), dtype=complex)

    def contains(self, z):
        z = np.asarray(z)
        return np.ones(z.shape, dtype=bool) if z.ndim else True

    def describe(self) -> dict:
        return {"data": self.name}


def as_data(data):
    if isinstance(data, ConstructionParams):
        return FamilyData(data)
    return data
