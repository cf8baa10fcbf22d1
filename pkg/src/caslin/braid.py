"""Braid words, Markov moves and the Burau/Alexander check.

A braid word on ``n`` strands is a tuple of nonzero integers; ``+i`` stands
for the Artin generator sigma_i and ``-i`` for its inverse.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

import sympy
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix


class BraidError(ValueError):
    """Malformed braid input, or an operation whose precondition fails."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple = ()

    def __post_init__(self):
        if not isinstance(self.strands, int) or self.strands < 2:
            raise BraidError(f"strand count must be an integer >= 2, got {self.strands!r}")
        letters = tuple(int(e) for e in self.letters)
        for e in letters:
            if e == 0 or abs(e) >= self.strands:
                raise BraidError(f"letter {e} out of range for {self.strands} strands")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return f"{self.strands}: " + " ".join(str(e) for e in self.letters)

    def __mul__(self, other):
        if other.strands != self.strands:
            raise BraidError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self):
        return BraidWord(self.strands, tuple(-e for e in reversed(self.letters)))

    def mirror(self):
        return BraidWord(self.strands, tuple(-e for e in self.letters))

    def to_json(self):
        return {"strands": self.strands, "word": list(self.letters)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["strands"]), tuple(obj["word"]))


_HEADER = re.compile(r"^\s*([^:\s]+)\s*:(.*)$", re.S)


def parse_braid(text):
    """Parse ``"<n>: e1 e2 ... ek"`` into a :class:`BraidWord`."""
    m = _HEADER.match(text)
    if m is None:
        raise BraidError(f"expected '<strands>: <letters>', got {text!r}")
    head, body = m.groups()
    try:
        n = int(head)
    except ValueError:
        raise BraidError(f"bad strand count token {head!r}") from None
    if n < 2:
        raise BraidError(f"bad strand count token {head!r}: need at least 2 strands")
    letters = []
    for tok in body.replace(",", " ").split():
        try:
            e = int(tok)
        except ValueError:
            raise BraidError(f"bad letter token {tok!r}") from None
        if e == 0 or abs(e) >= n:
            raise BraidError(f"bad letter token {tok!r}: need 1 <= |e| <= {n - 1}")
        letters.append(e)
    return BraidWord(n, tuple(letters))


def permutation(b):
    """``images[s - 1]`` is the final position of the strand starting at ``s``."""
    pos = list(range(1, b.strands + 1))  # pos[s] = current position of strand s
    for e in b.letters:
        i = abs(e)
        for s, p in enumerate(pos):
            if p == i:
                pos[s] = i + 1
            elif p == i + 1:
                pos[s] = i
    return tuple(pos)


def is_knot(b):
    """True iff the closure of ``b`` has one component."""
    perm = permutation(b)
    seen, p = 1, perm[0]
    while p != 1:
        p = perm[p - 1]
        seen += 1
    return seen == b.strands


def free_reduce(b):
    out = []
    for e in b.letters:
        if out and out[-1] == -e:
            out.pop()
        else:
            out.append(e)
    return BraidWord(b.strands, tuple(out))


def cyclic_reduce(b):
    """Free reduction followed by cancelling inverse pairs across the ends."""
    letters = list(free_reduce(b).letters)
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        letters = letters[1:-1]
    return BraidWord(b.strands, tuple(letters))


def exponent_sum(b):
    return sum(1 if e > 0 else -1 for e in b.letters)


def markov_conjugate(b, xi):
    """Type I move: ``xi^-1 b xi`` (not reduced)."""
    if xi.strands != b.strands:
        raise BraidError("conjugating word has a different strand count")
    return xi.inverse() * b * xi


def markov_stabilize(b, sign=1):
    """Type II move: ``sigma_n^sign b`` in B_{n+1}."""
    if sign not in (1, -1):
        raise BraidError("stabilization sign must be +1 or -1")
    n = b.strands
    return BraidWord(n + 1, (sign * n,) + b.letters)


def markov_destabilize(b):
    """Inverse type II move.

    Requires exactly one occurrence of the top generator after free
    reduction.  Writing the word as ``A s B`` with ``s`` that letter, the
    result is ``B A`` on one strand fewer (``A s B`` is conjugate to
    ``B A s``).
    """
    w = free_reduce(b)
    top = w.strands - 1
    where = [k for k, e in enumerate(w.letters) if abs(e) == top]
    if w.strands < 3 or len(where) != 1:
        raise BraidError("not destabilizable")
    k = where[0]
    return BraidWord(w.strands - 1, w.letters[k + 1:] + w.letters[:k])


def markov_simplify(b):
    """Shrink ``b`` by cyclic reduction and destabilization.

    Returns ``(core, steps)``.  Read backwards, the steps rebuild ``b`` from
    ``core`` up to free reduction: ``("conjugate", p)`` means the word
    before the step was ``p w p^-1`` with ``w`` the word after it, and
    ``("destabilize", sign)`` means it was ``sigma_{n-1}^sign w``.
    """
    steps = []
    w = free_reduce(b)
    while True:
        x, n = w.letters, w.strands
        k = 0
        while 2 * k + 1 < len(x) and x[k] == -x[-1 - k]:
            k += 1
        if k:
            steps.append(("conjugate", BraidWord(n, x[:k])))
            w = BraidWord(n, x[k:len(x) - k])
            x = w.letters
        where = [j for j, e in enumerate(x) if abs(e) == n - 1]
        if n < 3 or len(where) != 1:
            return w, steps
        j = where[0]
        if j:
            steps.append(("conjugate", BraidWord(n, x[:j])))
        steps.append(("destabilize", 1 if x[j] > 0 else -1))
        w = free_reduce(BraidWord(n - 1, x[j + 1:] + x[:j]))


# -- Burau / Alexander ------------------------------------------------------

T = sympy.Symbol("t")


def _reduced_generator(n, e, t):
    """Reduced Burau matrix of sigma_|e|^sign(e), size (n-1)."""
    i = abs(e)
    m = sympy.eye(n - 1)
    r = i - 1  # row/col of the generator, 0-based
    m[r, r] = -t
    if r > 0:
        m[r - 1, r] = t
    if r < n - 2:
        m[r + 1, r] = 1
    if e < 0:
        m = m.inv()
    return m


def reduced_burau(b, t=T):
    """Reduced Burau matrix of ``b`` at ``t`` (a symbol or an exact number)."""
    t = sympy.nsimplify(t) if not isinstance(t, sympy.Basic) else t
    m = sympy.eye(b.strands - 1)
    for e in b.letters:
        m = m * _reduced_generator(b.strands, e, t)
    return m.applyfunc(sympy.cancel)


def _scaled_generator(R, n, e):
    """t^[e < 0] times the reduced Burau matrix of sigma_|e|^sign(e), over R = ZZ[t]."""
    t, one, zero = R.gens[0], R.one, R.zero
    r = abs(e) - 1
    diag = one if e > 0 else t
    rows = [[diag if j == k else zero for k in range(n - 1)] for j in range(n - 1)]
    if e > 0:
        rows[r][r] = -t
        if r > 0:
            rows[r - 1][r] = t
        if r < n - 2:
            rows[r + 1][r] = one
    else:
        rows[r][r] = -one
        if r > 0:
            rows[r - 1][r] = t
        if r < n - 2:
            rows[r + 1][r] = one
    return DomainMatrix(rows, (n - 1, n - 1), R)


def _alexander_coeffs(b):
    """Integer coefficients (lowest degree first) of the symmetric Alexander
    polynomial times t^(degree/2), with Delta(1) = 1."""
    if not is_knot(b):
        raise BraidError("closure is not a knot")
    n = b.strands
    R = ZZ[T]
    k = sum(1 for e in b.letters if e < 0)
    P = DomainMatrix.eye(n - 1, R)
    for e in b.letters:
        P = P * _scaled_generator(R, n, e)
    # det(t^k I - P) = t^(k (n-1)) det(I - psi)
    d = (DomainMatrix.eye(n - 1, R) * R.gens[0] ** k - P).det() if n > 1 else R.one
    q, rem = divmod(R.to_sympy(d).as_poly(T), sympy.Poly(sum(T**j for j in range(n)), T))
    if not rem.is_zero:
        raise ArithmeticError("Burau determinant not divisible by 1 + t + ... + t^(n-1)")
    coeffs = [int(c) for c in reversed(q.all_coeffs())]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if sum(coeffs) < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def alexander_polynomial(b):
    """Alexander polynomial of the closure as a sympy expression in ``T``.

    Normalized to be symmetric under t -> 1/t with Delta(1) = 1.
    """
    coeffs = _alexander_coeffs(b)
    shift = sympy.Rational(len(coeffs) - 1, 2)
    return sympy.expand(sum(c * T**(j - shift) for j, c in enumerate(coeffs)))


def alexander_at(b, t):
    """``|Delta(t)|`` at a nonzero rational ``t``, as an exact Fraction."""
    t = Fraction(t)
    if t == 0:
        raise BraidError("t must be nonzero")
    coeffs = _alexander_coeffs(b)
    # knot polynomials have even span, so the symmetric shift is integral
    half = (len(coeffs) - 1) // 2
    return abs(sum(c * t**(j - half) for j, c in enumerate(coeffs)))
