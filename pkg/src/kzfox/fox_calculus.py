"""Fox derivatives and Fox pairings on the truncated free algebra.

A Fox pairing is a bilinear map rho: A x A -> A that is a left Fox derivative
in its first slot and a right Fox derivative in its second slot:

    rho(ab, c) = a rho(b, c) + rho(a, c) eps(b)
    rho(a, bc) = rho(a, b) c + eps(b) rho(a, c)

Pairings are first-class values so downstream modules stay generic over rho.
"""

from __future__ import annotations

from typing import Callable

from .errors import ShapeError
from .free_hopf import FreeSeries

KIND_KKS = "kks"
KIND_INNER = "inner"
KIND_LEFT = "left"
KIND_RIGHT = "right"
KIND_CUSTOM = "custom"


def d_right(m: int, a: FreeSeries) -> FreeSeries:
    """Strip a leading x_m: coeff of w in d_right(m, a) = coeff of (m, *w) in a."""
    terms = {}
    for w, c in a.coeffs.items():
        if w and w[0] == m:
            key = w[1:]
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
    return FreeSeries(a.n, a.degree, terms, a.backend)


def d_left(m: int, a: FreeSeries) -> FreeSeries:
    """Strip a trailing x_m."""
    terms = {}
    for w, c in a.coeffs.items():
        if w and w[-1] == m:
            key = w[:-1]
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
    return FreeSeries(a.n, a.degree, terms, a.backend)


def _without_counit(a: FreeSeries) -> FreeSeries:
    return a - FreeSeries.unit(a.n, a.degree, a.backend, a.counit())


class FoxPairing:
    """Bilinear pairing object; ``pair(a, b)`` evaluates it."""

    def __init__(self, kind: str, func: Callable[[FreeSeries, FreeSeries], FreeSeries]):
        self.kind = kind
        self._func = func

    def __call__(self, a: FreeSeries, b: FreeSeries) -> FreeSeries:
        if (a.n, a.degree, a.backend) != (b.n, b.degree, b.backend):
            raise ShapeError("pairing arguments have mismatched shapes")
        return self._func(a, b)

    def transpose(self) -> "FoxPairing":
        """The transposed pairing a, b -> S(rho(S(b), S(a)))."""

        def func(a: FreeSeries, b: FreeSeries) -> FreeSeries:
            return self._func(b.antipode(), a.antipode()).antipode()

        return FoxPairing(KIND_CUSTOM, func)


def _rho_kks_func(a: FreeSeries, b: FreeSeries) -> FreeSeries:
    # monomial rule: rho(h_1..h_m, k_1..k_r) = h_1..h_{m-1} rho(h_m, k_1) k_2..k_r
    # with rho(x_i, x_j) = delta_ij x_i; zero if either word is empty.
    terms = {}
    D = a.degree
    for wa, ca in a.coeffs.items():
        if not wa:
            continue
        for wb, cb in b.coeffs.items():
            if not wb or wa[-1] != wb[0]:
                continue
            w = wa + wb[1:]
            if len(w) > D:
                continue
            c = ca * cb
            acc = terms.get(w)
            terms[w] = c if acc is None else acc + c
    return FreeSeries(a.n, a.degree, terms, a.backend)


def rho_kks_pairing() -> FoxPairing:
    return FoxPairing(KIND_KKS, _rho_kks_func)


def rho_kks(a: FreeSeries, b: FreeSeries) -> FreeSeries:
    if (a.n, a.degree, a.backend) != (b.n, b.degree, b.backend):
        raise ShapeError("pairing arguments have mismatched shapes")
    return _rho_kks_func(a, b)


def rho_inner(g: FreeSeries) -> FoxPairing:
    """rho_g(a, b) = (a - eps(a)) g (b - eps(b))."""

    def func(a: FreeSeries, b: FreeSeries) -> FreeSeries:
        return _without_counit(a) * g * _without_counit(b)

    return FoxPairing(KIND_INNER, func)


def rho_left(m: int) -> FoxPairing:
    """rho_{L,m}(a, b) = d_left(m, a) (b - eps(b))."""

    def func(a: FreeSeries, b: FreeSeries) -> FreeSeries:
        return d_left(m, a) * _without_counit(b)

    return FoxPairing(KIND_LEFT, func)


def rho_right(m: int) -> FoxPairing:
    """rho_{R,m}(a, b) = (a - eps(a)) d_right(m, b)."""

    def func(a: FreeSeries, b: FreeSeries) -> FreeSeries:
        return _without_counit(a) * d_right(m, b)

    return FoxPairing(KIND_RIGHT, func)


def transpose(rho: FoxPairing) -> FoxPairing:
    return rho.transpose()
