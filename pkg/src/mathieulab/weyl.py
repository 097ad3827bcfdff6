"""Weyl algebra elements in right-normal order z^a d^b, with symbol maps.

Reordering uses the closed-form rewrite

    d^b z^a = sum_k  C(b,k) C(a,k) k!  z^(a-k) d^(b-k)

applied multi-index-wise, which keeps intermediate results small.  Binomial
bookkeeping happens over the integers and is reduced into the coefficient
ring at the end, so characteristic-p elements work too.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from .poly import Polynomial, VariableSet
from .rings import RingDescriptor


def _falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1)."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


class WeylElement:
    """Element of A_n acting on polynomials in the given z-variables."""

    __slots__ = ("ring", "z_names", "terms")

    def __init__(self, ring: RingDescriptor, z_names, terms=None):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "z_names", tuple(z_names))
        clean = {}
        n = len(self.z_names)
        for (a, b), c in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != n or len(b) != n:
                raise ValueError("exponent tuple length mismatch")
            if any(e < 0 for e in a + b):
                raise ValueError("negative exponents in a Weyl element")
            if c:
                key = (a, b)
                clean[key] = clean[key] + c if key in clean else c
                if not clean[key]:
                    del clean[key]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("WeylElement is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ring, z_names):
        return WeylElement(ring, z_names, {})

    @staticmethod
    def one(ring, z_names):
        n = len(z_names)
        return WeylElement(ring, z_names, {((0,) * n, (0,) * n): ring.one()})

    @staticmethod
    def z_var(ring, z_names, i: int):
        """Multiplication by z_i (1-based index)."""
        n = len(z_names)
        a = tuple(1 if j == i - 1 else 0 for j in range(n))
        return WeylElement(ring, z_names, {(a, (0,) * n): ring.one()})

    @staticmethod
    def d_var(ring, z_names, i: int):
        """The derivation d/dz_i (1-based index)."""
        n = len(z_names)
        b = tuple(1 if j == i - 1 else 0 for j in range(n))
        return WeylElement(ring, z_names, {((0,) * n, b): ring.one()})

    @staticmethod
    def from_z_polynomial(p: Polynomial) -> "WeylElement":
        """Multiplication operator by a polynomial in the z-variables."""
        n = len(p.variables)
        return WeylElement(p.ring, p.variables.names,
                           {(exps, (0,) * n): c for exps, c in p.terms.items()})

    @staticmethod
    def constant_coefficient(p: Polynomial, z_names) -> "WeylElement":
        """Operator from a polynomial in d-symbols, read positionally.

        The i-th variable of `p` becomes d/dz_i; e.g. d1^2+d2^2 is the Laplacian.
        """
        if len(p.variables) != len(z_names):
            raise ValueError("d-symbol count must match the z-variable count")
        n = len(z_names)
        return WeylElement(p.ring, z_names,
                           {((0,) * n, exps): c for exps, c in p.terms.items()})

    # -- structure ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return (self.ring == other.ring and self.z_names == other.z_names
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.z_names,
                     frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "<WeylElement 0>"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            mono = "*".join(
                [f"{n}^{e}" if e != 1 else n for n, e in zip(self.z_names, a) if e] +
                [f"d{n}^{e}" if e != 1 else f"d{n}" for n, e in zip(self.z_names, b) if e])
            bits.append(f"{c}*{mono}" if mono else str(c))
        return f"<WeylElement {' + '.join(bits)}>"

    def _compat(self, other):
        if self.ring != other.ring or self.z_names != other.z_names:
            raise ValueError("Weyl elements live over different rings or variables")

    def __add__(self, other):
        self._compat(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            if key in terms:
                s = terms[key] + c
                if s:
                    terms[key] = s
                else:
                    del terms[key]
            else:
                terms[key] = c
        return WeylElement(self.ring, self.z_names, terms)

    def __neg__(self):
        return WeylElement(self.ring, self.z_names,
                           {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int):
            c = self.ring.from_int(c)
        if not c:
            return WeylElement.zero(self.ring, self.z_names)
        return WeylElement(self.ring, self.z_names,
                           {k: coeff * c for k, coeff in self.terms.items()})

    # -- action and composition --------------------------------------

    def apply(self, f: Polynomial) -> Polynomial:
        """Act on a polynomial in exactly the element's z-variables."""
        if f.ring != self.ring:
            raise ValueError("coefficient ring mismatch")
        if f.variables.names != self.z_names:
            raise ValueError("variable mismatch between operator and argument")
        out_terms = {}
        for (a, b), c in self.terms.items():
            for exps, fc in f.terms.items():
                scale = 1
                ok = True
                for e, db in zip(exps, b):
                    if e < db:
                        ok = False
                        break
                    scale *= _falling(e, db)
                if not ok:
                    continue
                coeff = c * fc * self.ring.from_int(scale)
                if not coeff:
                    continue
                key = tuple(e - db + za for e, db, za in zip(exps, b, a))
                if key in out_terms:
                    s = out_terms[key] + coeff
                    if s:
                        out_terms[key] = s
                    else:
                        del out_terms[key]
                else:
                    out_terms[key] = coeff
        return Polynomial(self.ring, f.variables, out_terms)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """Normal-ordered product: self acts after `other`."""
        self._compat(other)
        result = {}
        n = len(self.z_names)
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                base = c1 * c2
                for k in _box(tuple(min(x, y) for x, y in zip(b1, a2))):
                    scale = 1
                    for j in range(n):
                        scale *= comb(b1[j], k[j]) * comb(a2[j], k[j]) * factorial(k[j])
                    coeff = base * self.ring.from_int(scale)
                    if not coeff:
                        continue
                    key = (tuple(a1[j] + a2[j] - k[j] for j in range(n)),
                           tuple(b1[j] + b2[j] - k[j] for j in range(n)))
                    if key in result:
                        s = result[key] + coeff
                        if s:
                            result[key] = s
                        else:
                            del result[key]
                    else:
                        result[key] = coeff
        return WeylElement(self.ring, self.z_names, result)

    def power(self, m: int) -> "WeylElement":
        if m < 0:
            raise ValueError("negative operator power")
        out = WeylElement.one(self.ring, self.z_names)
        for _ in range(m):
            out = out.compose(self)
        return out

    def left_normal_terms(self) -> dict:
        """Rewrite into left-normal order: dict (b, a) -> coeff for d^b z^a."""
        out = {}
        n = len(self.z_names)
        for (a, b), c in self.terms.items():
            for k in _box(tuple(min(x, y) for x, y in zip(a, b))):
                scale = 1
                for j in range(n):
                    scale *= comb(a[j], k[j]) * comb(b[j], k[j]) * factorial(k[j])
                if sum(k) % 2:
                    scale = -scale
                coeff = c * self.ring.from_int(scale)
                if not coeff:
                    continue
                key = (tuple(b[j] - k[j] for j in range(n)),
                       tuple(a[j] - k[j] for j in range(n)))
                if key in out:
                    s = out[key] + coeff
                    if s:
                        out[key] = s
                    else:
                        del out[key]
                else:
                    out[key] = coeff
        return out


def _box(bounds):
    """All integer multi-indices 0 <= k <= bounds, componentwise."""
    if not bounds:
        yield ()
        return
    for head in range(bounds[0] + 1):
        for tail in _box(bounds[1:]):
            yield (head,) + tail


# -- symbol maps ------------------------------------------------------

def left_symbol(w: WeylElement, symbol_vars: VariableSet) -> Polynomial:
    """Send d^a z^b (left-normal order) to zeta^a z^b.

    `symbol_vars` must list the zeta-stand-ins first, then the z-variables,
    matching the element's variable count.
    """
    n = len(w.z_names)
    _check_symbol_vars(symbol_vars, n)
    terms = {}
    for (b, a), c in w.left_normal_terms().items():
        terms[b + a] = c
    return Polynomial(w.ring, symbol_vars, terms)


def from_left_symbol(p: Polynomial, z_names) -> WeylElement:
    """Inverse of `left_symbol`: zeta^a z^b becomes the operator d^a z^b."""
    n = len(z_names)
    _check_symbol_vars(p.variables, n)
    out = WeylElement.zero(p.ring, z_names)
    for exps, c in p.terms.items():
        a, b = exps[:n], exps[n:]
        # d^a z^b in right-normal order
        piece = {}
        for k in _box(tuple(min(x, y) for x, y in zip(a, b))):
            scale = 1
            for j in range(n):
                scale *= comb(a[j], k[j]) * comb(b[j], k[j]) * factorial(k[j])
            coeff = c * p.ring.from_int(scale)
            if not coeff:
                continue
            key = (tuple(b[j] - k[j] for j in range(n)),
                   tuple(a[j] - k[j] for j in range(n)))
            piece[key] = piece.get(key, p.ring.zero()) + coeff
        out = out + WeylElement(p.ring, z_names, piece)
    return out


def right_symbol(w: WeylElement, symbol_vars: VariableSet) -> Polynomial:
    """Send z^a d^b (the stored normal form) to z^a zeta^b."""
    n = len(w.z_names)
    _check_symbol_vars(symbol_vars, n)
    terms = {}
    for (a, b), c in w.terms.items():
        terms[b + a] = c
    return Polynomial(w.ring, symbol_vars, terms)


def from_right_symbol(p: Polynomial, z_names) -> WeylElement:
    n = len(z_names)
    _check_symbol_vars(p.variables, n)
    terms = {}
    for exps, c in p.terms.items():
        terms[(exps[n:], exps[:n])] = c
    return WeylElement(p.ring, z_names, terms)


def _check_symbol_vars(symbol_vars: VariableSet, n: int):
    if len(symbol_vars) != 2 * n:
        raise ValueError("symbol variable set must pair each z with a zeta stand-in")
    if symbol_vars.laurent:
        raise ValueError("symbol variables cannot be Laurent")


# -- commuting first-order operators ----------------------------------

@dataclass(frozen=True)
class FirstOrderOperator:
    """Operator sum_v c_v d/dv + g, with polynomial coefficients."""

    coeffs: dict
    shift: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "coeffs", dict(self.coeffs))
        for v, c in self.coeffs.items():
            self.shift._compat(c)
            self.shift.variables.index(v)

    @staticmethod
    def derivation_minus(ring, variables, derivative_var: str,
                         multiplier: Polynomial) -> "FirstOrderOperator":
        """The operator d/dv - a for a multiplication polynomial a."""
        return FirstOrderOperator(
            {derivative_var: Polynomial.one(ring, variables)}, -multiplier)

    def apply(self, h: Polynomial) -> Polynomial:
        out = self.shift * h
        for v, c in self.coeffs.items():
            out = out + c * h.partial(v)
        return out

    def commutator_vanishes(self, other: "FirstOrderOperator") -> bool:
        """Exact symbolic check that [self, other] = 0."""
        ring, variables = self.shift.ring, self.shift.variables
        zero = Polynomial.zero(ring, variables)
        for w in set(self.coeffs) | set(other.coeffs):
            lhs = zero
            for v, c in self.coeffs.items():
                lhs = lhs + c * other.coeffs.get(w, zero).partial(v)
            for v, d in other.coeffs.items():
                lhs = lhs - d * self.coeffs.get(w, zero).partial(v)
            if not lhs.is_zero():
                return False
        order_zero = zero
        for v, c in self.coeffs.items():
            order_zero = order_zero + c * other.shift.partial(v)
        for v, d in other.coeffs.items():
            order_zero = order_zero - d * self.shift.partial(v)
        return order_zero.is_zero()


class DiffOperatorSpec:
    """A commuting family of first-order operators; construction checks commutativity."""

    def __init__(self, operators):
        self.operators = list(operators)
        for i, a in enumerate(self.operators):
            for b in self.operators[i + 1:]:
                if not a.commutator_vanishes(b):
                    raise ValueError("operators do not commute")

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)
