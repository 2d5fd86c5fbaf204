"""Double brackets, coaction maps, and the cyclic-word Lie bialgebra.

Builds the double bracket attached to a skew-symmetric Fox pairing, the
adjacent-letter reduced coaction and its induced coaction on cyclic words,
the bracket/cobracket on cyclic words, and the alpha/beta twists relating Fox
derivatives to double derivations.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .errors import ShapeError
from .fox_calculus import FoxPairing, d_left, d_right, rho_kks_pairing
from .free_hopf import (
    CyclicSeries,
    FreeSeries,
    TensorSeries,
    Word,
    _is_stored_zero,
    cyclic_min,
    word_sort_key,
)


# ---------------------------------------------------------------------------
# sparse containers for |A| (x) A and |A| wedge |A|
# ---------------------------------------------------------------------------
class CyclicByFree:
    """Sparse element of |A| (x) A keyed by (cyclic word, word)."""

    __slots__ = ("n", "degree", "backend", "coeffs")

    def __init__(self, n, degree, terms=None, backend="rational"):
        self.n = n
        self.degree = degree
        self.backend = backend
        coeffs: Dict[Tuple[Word, Word], object] = {}
        if terms:
            for (cw, w), c in terms.items() if isinstance(terms, dict) else terms:
                cw, w = cyclic_min(tuple(cw)), tuple(w)
                if len(cw) + len(w) > degree:
                    continue
                acc = coeffs.get((cw, w))
                c = c if acc is None else acc + c
                if _is_stored_zero(backend, c):
                    coeffs.pop((cw, w), None)
                else:
                    coeffs[(cw, w)] = c
        self.coeffs = coeffs

    @classmethod
    def from_tensor(cls, t: TensorSeries) -> "CyclicByFree":
        terms: Dict[Tuple[Word, Word], object] = {}
        for (a, b), c in t.coeffs.items():
            key = (cyclic_min(a), b)
            acc = terms.get(key)
            c = c if acc is None else acc + c
            if _is_stored_zero(t.backend, c):
                terms.pop(key, None)
            else:
                terms[key] = c
        return cls(t.n, t.degree, terms, t.backend)

    def _binop(self, other, f):
        if (self.n, self.degree, self.backend) != (other.n, other.degree, other.backend):
            raise ShapeError("mismatched shapes")
        terms = dict(self.coeffs)
        for k, c in other.coeffs.items():
            acc = terms.get(k)
            c = f(c) if acc is None else acc + f(c)
            if _is_stored_zero(self.backend, c):
                terms.pop(k, None)
            else:
                terms[k] = c
        return CyclicByFree(self.n, self.degree, terms, self.backend)

    def __add__(self, other):
        return self._binop(other, lambda c: c)

    def __sub__(self, other):
        return self._binop(other, lambda c: -c)

    def norm_inf(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def is_zero(self):
        return not self.coeffs

    def allclose(self, other, tol):
        return (self - other).norm_inf() <= tol

    def __eq__(self, other):
        return (
            isinstance(other, CyclicByFree)
            and (self.n, self.degree, self.backend) == (other.n, other.degree, other.backend)
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __repr__(self):
        return f"CyclicByFree({len(self.coeffs)} terms)"


class CyclicWedge:
    """Antisymmetrized element of |A| (x) |A|, keyed with ordered cyclic words.

    A term c * (u (x) v) is stored on the key (min(u,v), max(u,v)) in
    (length, lex) order with the sign adjusted; diagonal terms vanish.
    The stored object represents sums of c * (u (x) v - v (x) u).
    """

    __slots__ = ("n", "degree", "backend", "coeffs")

    def __init__(self, n, degree, backend="rational"):
        self.n = n
        self.degree = degree
        self.backend = backend
        self.coeffs: Dict[Tuple[Word, Word], object] = {}

    def add_term(self, u: Word, v: Word, c):
        """Accumulate c * (|u| (x) |v|) into the antisymmetrized store."""
        u, v = cyclic_min(tuple(u)), cyclic_min(tuple(v))
        if len(u) + len(v) > self.degree:
            return
        if u == v:
            return
        if word_sort_key(v) < word_sort_key(u):
            u, v, c = v, u, -c
        key = (u, v)
        acc = self.coeffs.get(key)
        c = c if acc is None else acc + c
        if _is_stored_zero(self.backend, c):
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = c

    @classmethod
    def from_tensor_halves(cls, t: TensorSeries) -> "CyclicWedge":
        """Read t as sum c * u (x) v and store c * (|u| (x) |v|) antisymmetrized.

        This realizes |t| - |P21 t| when t is fed in un-symmetrized.
        """
        out = cls(t.n, t.degree, t.backend)
        for (a, b), c in t.coeffs.items():
            out.add_term(a, b, c)
        return out

    @classmethod
    def wedge(cls, x: CyclicSeries, y: CyclicSeries) -> "CyclicWedge":
        """|x| wedge |y| = x (x) y - y (x) x, bilinear."""
        if (x.n, x.degree, x.backend) != (y.n, y.degree, y.backend):
            raise ShapeError("mismatched shapes")
        out = cls(x.n, x.degree, x.backend)
        for u, cu in x.coeffs.items():
            for v, cv in y.coeffs.items():
                out.add_term(u, v, cu * cv)
        return out

    def _binop(self, other, sign):
        if (self.n, self.degree, self.backend) != (other.n, other.degree, other.backend):
            raise ShapeError("mismatched shapes")
        out = CyclicWedge(self.n, self.degree, self.backend)
        out.coeffs = dict(self.coeffs)
        for (u, v), c in other.coeffs.items():
            out.add_term(u, v, sign * c)
        return out

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def scale(self, s):
        out = CyclicWedge(self.n, self.degree, self.backend)
        for (u, v), c in self.coeffs.items():
            out.add_term(u, v, c * s)
        return out

    def norm_inf(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def is_zero(self):
        return not self.coeffs

    def allclose(self, other, tol):
        return (self - other).norm_inf() <= tol

    def __eq__(self, other):
        return (
            isinstance(other, CyclicWedge)
            and (self.n, self.degree, self.backend) == (other.n, other.degree, other.backend)
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __repr__(self):
        return f"CyclicWedge({len(self.coeffs)} terms)"


# ---------------------------------------------------------------------------
# double bracket from a Fox pairing
# ---------------------------------------------------------------------------
def double_bracket_from_pairing(
    rho: FoxPairing, a: FreeSeries, b: FreeSeries
) -> TensorSeries:
    """{{a, b}} = b' S(rho(a'', b'')') a'  (x)  rho(a'', b'')''.

    rho must be skew-symmetric for the double-bracket axioms to hold
    (caller-asserted; exercised in tests).
    """
    a._check(b)
    n, D, backend = a.n, a.degree, a.backend
    da = a.coproduct()
    db = b.coproduct()
    terms: Dict[Tuple[Word, Word], object] = {}
    for (a1, a2), ca in da.coeffs.items():
        fa2 = FreeSeries.from_word(a2, n, D, backend)
        for (b1, b2), cb in db.coeffs.items():
            r = rho(fa2, FreeSeries.from_word(b2, n, D, backend))
            if r.is_zero():
                continue
            cab = ca * cb
            for (r1, r2), cr in r.coproduct().coeffs.items():
                # b1 * S(r1) * a1  (x)  r2
                sgn = 1 if len(r1) % 2 == 0 else -1
                left = b1 + r1[::-1] + a1
                if len(left) + len(r2) > D:
                    continue
                key = (left, r2)
                c = cab * cr * sgn
                acc = terms.get(key)
                terms[key] = c if acc is None else acc + c
    return TensorSeries(n, D, terms, backend)


def double_bracket_kks(a: FreeSeries, b: FreeSeries) -> TensorSeries:
    return double_bracket_from_pairing(rho_kks_pairing(), a, b)


# ---------------------------------------------------------------------------
# reduced coaction and coaction
# ---------------------------------------------------------------------------
def mu_bar_kks(a: FreeSeries) -> FreeSeries:
    """Adjacent equal-letter contraction: on each word, sum over positions i
    with w[i] == w[i+1] of the word with one of the pair removed."""
    terms: Dict[Word, object] = {}
    for w, c in a.coeffs.items():
        for i in range(len(w) - 1):
            if w[i] == w[i + 1]:
                key = w[:i] + w[i + 1 :]
                acc = terms.get(key)
                terms[key] = c if acc is None else acc + c
    return FreeSeries(a.n, a.degree, terms, a.backend)


def d_mu_bar(mu_bar, a: FreeSeries) -> TensorSeries:
    """d(a) = a' S(mubar(a'')')  (x)  mubar(a'')''  (first leg not yet cyclic)."""
    n, D, backend = a.n, a.degree, a.backend
    terms: Dict[Tuple[Word, Word], object] = {}
    for (a1, a2), ca in a.coproduct().coeffs.items():
        m = mu_bar(FreeSeries.from_word(a2, n, D, backend))
        if m.is_zero():
            continue
        for (m1, m2), cm in m.coproduct().coeffs.items():
            sgn = 1 if len(m1) % 2 == 0 else -1
            left = a1 + m1[::-1]
            if len(left) + len(m2) > D:
                continue
            key = (left, m2)
            c = ca * cm * sgn
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
    return TensorSeries(n, D, terms, backend)


def coaction_mu(mu_bar, a: FreeSeries) -> CyclicByFree:
    """mu(a) = |a' S(mubar(a'')')| (x) mubar(a'')''."""
    return CyclicByFree.from_tensor(d_mu_bar(mu_bar, a))


def coaction_mu_kks(a: FreeSeries) -> CyclicByFree:
    return coaction_mu(mu_bar_kks, a)


# ---------------------------------------------------------------------------
# bracket and cobracket on cyclic words
# ---------------------------------------------------------------------------
def necklace_bracket(a: FreeSeries, b: FreeSeries) -> CyclicSeries:
    """{|a|, |b|} = |{{a,b}}' {{a,b}}''| for the adjacent-letter pairing."""
    return double_bracket_kks(a, b).multiply_legs().cyclic_project()


def necklace_cobracket(a: FreeSeries) -> CyclicWedge:
    """delta(|a|) = |d(a)| - |P21 d(a)|, both legs cyclically projected."""
    return CyclicWedge.from_tensor_halves(d_mu_bar(mu_bar_kks, a))


# ---------------------------------------------------------------------------
# alpha / beta twists and double derivations
# ---------------------------------------------------------------------------
def _tensor_from_parts(n, D, backend, gen):
    terms: Dict[Tuple[Word, Word], object] = {}
    for (u, v), c in gen:
        if len(u) + len(v) > D:
            continue
        acc = terms.get((u, v))
        terms[(u, v)] = c if acc is None else acc + c
    return TensorSeries(n, D, terms, backend)


def _split_words(w: Word):
    """All coproduct splittings of a word into ordered subsequences."""
    m = len(w)
    for mask in range(1 << m):
        left = tuple(w[i] for i in range(m) if mask >> i & 1)
        right = tuple(w[i] for i in range(m) if not (mask >> i & 1))
        yield left, right


def alpha(t: TensorSeries) -> TensorSeries:
    """a (x) b -> a S(b') (x) b''."""

    def gen():
        for (a, b), c in t.coeffs.items():
            for b1, b2 in _split_words(b):
                sgn = 1 if len(b1) % 2 == 0 else -1
                yield (a + b1[::-1], b2), c * sgn

    return _tensor_from_parts(t.n, t.degree, t.backend, gen())


def alpha_inv(t: TensorSeries) -> TensorSeries:
    """c (x) d -> c d' (x) d''."""

    def gen():
        for (cw, d), c in t.coeffs.items():
            for d1, d2 in _split_words(d):
                yield (cw + d1, d2), c

    return _tensor_from_parts(t.n, t.degree, t.backend, gen())


def beta(t: TensorSeries) -> TensorSeries:
    """a (x) b -> b' (x) S(b'') a."""

    def gen():
        for (a, b), c in t.coeffs.items():
            for b1, b2 in _split_words(b):
                sgn = 1 if len(b2) % 2 == 0 else -1
                yield (b1, b2[::-1] + a), c * sgn

    return _tensor_from_parts(t.n, t.degree, t.backend, gen())


def beta_inv(t: TensorSeries) -> TensorSeries:
    """c (x) d -> c'' d (x) c'."""

    def gen():
        for (cw, d), c in t.coeffs.items():
            for c1, c2 in _split_words(cw):
                yield (c2 + d, c1), c

    return _tensor_from_parts(t.n, t.degree, t.backend, gen())


def double_derivation_from_fox(kind: str, m: int, a: FreeSeries) -> TensorSeries:
    """alpha . (id (x) d_right_m) . coproduct, or beta . (id (x) d_left_m) . coproduct."""
    da = a.coproduct()
    if kind == "right":
        return alpha(da.map_right(lambda s: d_right(m, s)))
    if kind == "left":
        return beta(da.map_right(lambda s: d_left(m, s)))
    raise ValueError(f"kind must be 'left' or 'right', got {kind!r}")
