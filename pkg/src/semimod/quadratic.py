"""Real quadratic fields, their ideals, and sign-twisted ideals over O_{F+}.

``O_{F+}`` is the semiring of totally nonnegative integers of ``F = Q(sqrt d)``.
A sign-twisted ideal ``(I, (s1, s2))`` stands for the O_{F+}-module
``{a in I : s1*sigma1(a) >= 0, s2*sigma2(a) >= 0}``; the untwisted case is
``I_+ = I cap F_+``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

__all__ = [
    "QuadError",
    "QuadField",
    "QuadElement",
    "FractionalIdeal",
    "SignTwistedIdeal",
    "ClassGroup",
    "ReflexiveCertificate",
    "squarefree",
    "ideal_mul",
    "ideal_inverse",
    "principal_ideal",
    "fundamental_unit",
    "principal_generator",
    "generator_with_signs",
    "is_principal_totally_positive",
    "prime_ideals_up_to",
    "minkowski_bound",
    "class_group",
    "narrow_class_group",
    "plus_part",
    "module_dual",
    "is_reflexive",
    "refl_modules_isomorphic",
    "refl_pic_group",
    "non_invertibility_certificate",
    "module_patch",
    "patch_indecomposables",
]

WITNESS_BOUND = 50


class QuadError(ValueError):
    pass


def squarefree(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _sign_of(u: Fraction, v: Fraction, d: int) -> int:
    """Sign of u + v*sqrt(d), exactly."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    # opposite signs: compare u^2 with v^2 d
    c = u * u - v * v * d
    return su if c > 0 else sv


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if not squarefree(self.d):
            raise QuadError(f"d must be a squarefree integer > 1, got {self.d}")

    @property
    def half_integral(self) -> bool:
        return self.d % 4 == 1

    @property
    def discriminant(self) -> int:
        return self.d if self.half_integral else 4 * self.d

    @property
    def trace_omega(self) -> int:
        return 1 if self.half_integral else 0

    @property
    def omega_sq_const(self) -> int:
        # omega^2 = t*omega + c
        return (self.d - 1) // 4 if self.half_integral else self.d

    def omega_name(self) -> str:
        return "(1+sqrt(%d))/2" % self.d if self.half_integral else "sqrt(%d)" % self.d

    def element(self, a, b=0) -> "QuadElement":
        return QuadElement(self, Fraction(a), Fraction(b))

    def one(self) -> "QuadElement":
        return self.element(1, 0)

    def omega(self) -> "QuadElement":
        return self.element(0, 1)

    def sqrt_d(self) -> "QuadElement":
        return self.element(-1, 2) if self.half_integral else self.element(0, 1)

    def unit_ideal(self) -> "FractionalIdeal":
        return FractionalIdeal.from_generators(self, [self.one(), self.omega()])

    def to_json(self) -> dict:
        return {"d": self.d, "discriminant": self.discriminant, "omega": self.omega_name()}


@dataclass(frozen=True)
class QuadElement:
    """a + b*omega."""

    field: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "QuadElement":
        if isinstance(other, QuadElement):
            if other.field != self.field:
                raise QuadError("elements of different fields")
            return other
        return self.field.element(other, 0)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        t, c = self.field.trace_omega, self.field.omega_sq_const
        bb = self.b * o.b
        return QuadElement(self.field, self.a * o.a + c * bb, self.a * o.b + self.b * o.a + t * bb)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElement":
        t = self.field.trace_omega
        return QuadElement(self.field, self.a + t * self.b, -self.b)

    def norm(self) -> Fraction:
        t, c = self.field.trace_omega, self.field.omega_sq_const
        return self.a * self.a + t * self.a * self.b - c * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.field.trace_omega * self.b

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate()
        return QuadElement(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def sqrt_form(self) -> tuple:
        """(u, v) with self = u + v*sqrt(d)."""
        if self.field.half_integral:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def signs(self) -> tuple:
        """Signs at sigma1 (sqrt d > 0) and sigma2 (sqrt d < 0)."""
        u, v = self.sqrt_form()
        d = self.field.d
        return _sign_of(u, v, d), _sign_of(u, -v, d)

    def is_totally_positive(self) -> bool:
        return self.signs() == (1, 1)

    def is_totally_nonnegative(self) -> bool:
        return all(s >= 0 for s in self.signs())

    def embeddings(self) -> tuple:
        """Floating-point values, for display only."""
        u, v = self.sqrt_form()
        r = math.sqrt(self.field.d)
        return float(u) + float(v) * r, float(u) - float(v) * r

    def __str__(self):
        u, v = self.sqrt_form()
        if v == 0:
            return _fmt(u)
        if self.field.half_integral and self.a.denominator == 1 and self.b.denominator == 1 and self.b % 2:
            # display as (x + y sqrt d)/2
            x, y = 2 * u, 2 * v
            return f"({_fmt_sum(x, y, self.field.d)})/2"
        return _fmt_sum(u, v, self.field.d)

    def to_json(self) -> dict:
        u, v = self.sqrt_form()
        return {"omega_coords": [_fmt(self.a), _fmt(self.b)], "text": str(self), "signs": list(self.signs())}


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_sum(u, v, d) -> str:
    r = f"sqrt({d})"
    vs = r if v == 1 else f"-{r}" if v == -1 else f"{_fmt(v)}*{r}"
    if u == 0:
        return vs
    if v < 0:
        return f"{_fmt(u)} - {vs[1:]}"
    return f"{_fmt(u)} + {vs}"


# -- ideals -------------------------------------------------------------------

def _hnf2(vectors) -> tuple:
    """Row HNF (a, 0), (b, g) of the Z-span of integer 2-vectors; a, g > 0, 0 <= b < a."""
    # g: gcd of second coordinates; combine to get a vector (b, g)
    vecs = [tuple(v) for v in vectors if v[0] or v[1]]
    g, row = 0, (0, 0)
    firsts = []
    for x, y in vecs:
        if y == 0:
            firsts.append(x)
            continue
        if g == 0:
            if y < 0:
                x, y = -x, -y
            g, row = y, (x, y)
            continue
        # extended gcd on (g, y)
        s, t, h = _egcd(g, y)
        new = (s * row[0] + t * x, h)
        # the eliminated combination has zero second coordinate
        firsts.append((y // h) * row[0] - (g // h) * x)
        g, row = h, new
    a = 0
    for x in firsts:
        a = gcd(a, x)
    if a == 0 or g == 0:
        raise QuadError("the lattice is not of full rank")
    return a, row[0] % a, g


def _egcd(a, b):
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


@dataclass(frozen=True)
class FractionalIdeal:
    """(1/q) * (a Z + (b + g omega) Z), q minimal."""

    field: QuadField
    q: int
    a: int
    b: int
    g: int

    def __post_init__(self):
        for name in ("q", "a", "b", "g"):
            v = getattr(self, name)
            if isinstance(v, Fraction) and v.denominator == 1:
                object.__setattr__(self, name, int(v))
            elif not isinstance(v, int) or isinstance(v, bool):
                raise QuadError(f"HNF entry {name} must be an integer, got {v!r} (use from_hnf for rational q)")
        if self.q <= 0 or self.a <= 0 or self.g <= 0:
            raise QuadError("q, a and g must be positive")
        if not 0 <= self.b < self.a:
            raise QuadError("HNF needs 0 <= b < a")
        if gcd(gcd(self.q, self.a), gcd(self.b, self.g)) != 1:
            raise QuadError("HNF is not reduced: gcd(q, a, b, g) must be 1")
        # O_F-stability: omega times each basis vector stays in the lattice
        for e in self.basis():
            if not self.contains(e * self.field.omega()):
                raise QuadError(f"{self.to_json()} is not closed under multiplication by omega")

    @classmethod
    def from_hnf(cls, field: QuadField, q, a, b, g) -> "FractionalIdeal":
        """Reduce arbitrary (q, a, b, g) data (q may be a positive rational)."""
        q = Fraction(q)
        if q <= 0:
            raise QuadError("q must be positive")
        gens = [field.element(Fraction(a) / q, 0), field.element(Fraction(b) / q, Fraction(g) / q)]
        return cls.from_generators(field, gens, check=True)

    @classmethod
    def from_generators(cls, field: QuadField, gens, check: bool = False) -> "FractionalIdeal":
        """The Z-lattice spanned by ``gens``; with ``check=False`` the caller
        guarantees it is an O_F-module (e.g. gens include alpha and alpha*omega)."""
        gens = list(gens)
        den = 1
        for e in gens:
            for x in (e.a, e.b):
                den = den * x.denominator // gcd(den, x.denominator)
        ints = [(int(e.a * den), int(e.b * den)) for e in gens]
        a, b, g = _hnf2(ints)
        c = gcd(gcd(den, a), gcd(b, g))
        return cls(field, den // c, a // c, b // c, g // c)

    @classmethod
    def from_json(cls, field: QuadField, obj: dict) -> "FractionalIdeal":
        try:
            return cls.from_hnf(field, Fraction(str(obj["q"])), int(obj["a"]), int(obj["b"]), int(obj["g"]))
        except KeyError as e:
            raise QuadError(f"ideal is missing field {e.args[0]!r}") from None

    def basis(self) -> tuple:
        F = self.field
        return F.element(Fraction(self.a, self.q), 0), F.element(Fraction(self.b, self.q), Fraction(self.g, self.q))

    def contains(self, x: QuadElement) -> bool:
        # x = m*(a/q) + n*((b + g omega)/q): n = q*x.b/g, m = (q*x.a - n*b)/a
        n = Fraction(self.q) * x.b / self.g
        if n.denominator != 1:
            return False
        m = (Fraction(self.q) * x.a - n * self.b) / self.a
        return m.denominator == 1

    def norm(self) -> Fraction:
        return Fraction(self.a * self.g, self.q * self.q)

    def conjugate(self) -> "FractionalIdeal":
        return FractionalIdeal.from_generators(self.field, [e.conjugate() for e in self.basis()])

    def scale(self, x: QuadElement) -> "FractionalIdeal":
        e1, e2 = self.basis()
        return FractionalIdeal.from_generators(self.field, [x * e1, x * e2])

    def is_integral(self) -> bool:
        return self.q == 1

    def __mul__(self, other):
        return ideal_mul(self, other)

    def to_json(self) -> dict:
        return {"q": str(self.q), "a": str(self.a), "b": str(self.b), "g": str(self.g)}

    def __str__(self):
        e1, e2 = self.basis()
        return f"<{e1}, {e2}>"


def ideal_mul(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    if I.field != J.field:
        raise QuadError(f"field mismatch: d={I.field.d} vs d={J.field.d}")
    gens = [x * y for x in I.basis() for y in J.basis()]
    return FractionalIdeal.from_generators(I.field, gens)


def ideal_inverse(I: FractionalIdeal) -> FractionalIdeal:
    c = I.conjugate()
    n = I.norm()
    inv = c.scale(I.field.element(1 / n, 0))
    if ideal_mul(I, inv) != I.field.unit_ideal():
        raise AssertionError("inverse check failed")
    return inv


def principal_ideal(x: QuadElement) -> FractionalIdeal:
    if x.is_zero():
        raise QuadError("the zero ideal is not a fractional ideal")
    return FractionalIdeal.from_generators(x.field, [x, x * x.field.omega()])


# -- continued fractions -------------------------------------------------------

def _cf_expand(P: int, Q: int, N: int, stop_at=None, max_steps: int = 100_000):
    """Complete quotients (P_k + sqrt N)/Q_k with partial quotients a_k.

    Yields (k, P_k, Q_k, a_k). Requires Q | N - P^2; runs until ``stop_at``
    returns True or a reduced (P, Q) repeats.
    """
    s = isqrt(N)
    seen = set()
    for k in range(max_steps):
        if Q > 0:
            a = (P + s) // Q
        else:
            a = (-P - s - 1) // (-Q)
        yield k, P, Q, a
        if (P, Q) in seen:
            return
        # (P + sqrt N)/Q reduced: > 1 with conjugate in (-1, 0)
        if Q > 0 and 0 < P + s and P <= s and s - Q < P:
            seen.add((P, Q))
        P2 = a * Q - P
        Q2 = (N - P2 * P2) // Q
        P, Q = P2, Q2
    raise QuadError("continued fraction did not become periodic")  # pragma: no cover


def _pq_of_omega(F: QuadField):
    return (1, 2) if F.half_integral else (0, 1)


def _quotient_element(F: QuadField, P: int, Q: int) -> QuadElement:
    """(P + sqrt d)/Q as an element."""
    r = F.sqrt_d()
    return (r + P) * F.element(Fraction(1, Q))


def _mat_mul(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def _cf_table(P, Q, N):
    """{(P_k, Q_k): M_k} with x = M_k(x_k) for every complete quotient x_k."""
    table = {}
    M = ((1, 0), (0, 1))
    for k, Pk, Qk, a in _cf_expand(P, Q, N):
        table.setdefault((Pk, Qk), M)
        M = _mat_mul(M, ((a, 1), (1, 0)))
    return table


@dataclass(frozen=True)
class FundamentalUnit:
    unit: QuadElement
    norm: int
    period: int

    def to_json(self) -> dict:
        return {"unit": self.unit.to_json(), "norm": self.norm, "period": self.period}


_UNIT_CACHE: dict = {}


def fundamental_unit(F: QuadField) -> FundamentalUnit:
    """The fundamental unit > 1, from the period of the expansion of omega.

    If tau is the first complete quotient to recur, tau = (p tau + q)/(r tau + s)
    for the period matrix, so r*tau + s multiplies Z + Z tau = O_F into itself.
    """
    if F in _UNIT_CACHE:
        return _UNIT_CACHE[F]
    P0, Q0 = _pq_of_omega(F)
    steps = []
    first_at = {}
    for k, P, Q, a in _cf_expand(P0, Q0, F.d):
        if (P, Q) in first_at:
            i, j = first_at[(P, Q)], k
            break
        first_at[(P, Q)] = k
        steps.append((P, Q, a))
    T = ((1, 0), (0, 1))
    for _, _, a in steps[i:j]:
        T = _mat_mul(T, ((a, 1), (1, 0)))
    tau = _quotient_element(F, steps[i][0], steps[i][1])
    eps = tau * T[1][0] + T[1][1]
    if eps.embeddings()[0] < 0:
        eps = -eps
    if eps.embeddings()[0] < 1:
        eps = eps.inverse()
    n = eps.norm()
    if abs(n) != 1 or not eps.is_integral():
        raise AssertionError(f"period element {eps} is not a unit")
    out = FundamentalUnit(eps, int(n), j - i)
    _UNIT_CACHE[F] = out
    return out


def principal_generator(I: FractionalIdeal) -> Optional[QuadElement]:
    """Some beta with beta*O_F = I, or None.

    Writes I = c*J with J = A Z + (B + omega) Z primitive, then compares the
    cycle of theta = (B + omega)/A with the cycle of omega: they meet exactly
    when Z + Z theta is homothetic to O_F.
    """
    F = I.field
    # HNF ideals have g | a and g | b
    A, B = I.a // I.g, I.b // I.g
    c = Fraction(I.g, I.q)
    if F.half_integral:
        P, Q = 2 * B + 1, 2 * A
    else:
        P, Q = B, A
    om = _cf_table(*_pq_of_omega(F), F.d)
    M = ((1, 0), (0, 1))
    for k, Pk, Qk, a in _cf_expand(P, Q, F.d):
        if (Pk, Qk) in om:
            Nmat = om[(Pk, Qk)]
            # theta = M(x), omega = Nmat(x)  =>  theta = G(omega), G = M * Nmat^{-1}
            det = Nmat[0][0] * Nmat[1][1] - Nmat[0][1] * Nmat[1][0]
            Ninv = ((Nmat[1][1] * det, -Nmat[0][1] * det), (-Nmat[1][0] * det, Nmat[0][0] * det))
            G = _mat_mul(M, Ninv)
            denom = F.omega() * G[1][0] + G[1][1]
            beta = F.element(A * c) / denom
            if principal_ideal(beta) != I:
                raise AssertionError("principal generator check failed")
            return beta
        M = _mat_mul(M, ((a, 1), (1, 0)))
    return None


def generator_with_signs(I: FractionalIdeal, pattern: tuple) -> Optional[QuadElement]:
    """A generator of I with the given sign pattern at (sigma1, sigma2), or None."""
    beta = principal_generator(I)
    if beta is None:
        return None
    eps = fundamental_unit(I.field).unit
    for u in (beta, -beta, beta * eps, -(beta * eps)):
        if u.signs() == tuple(pattern):
            return u
    return None


def is_principal_totally_positive(I: FractionalIdeal) -> Optional[QuadElement]:
    return generator_with_signs(I, (1, 1))


# -- class groups ---------------------------------------------------------------

def minkowski_bound(F: QuadField) -> float:
    return math.sqrt(F.discriminant) / 2


def _primes_upto(n: int) -> list:
    return [p for p in range(2, n + 1) if all(p % r for r in range(2, isqrt(p) + 1))]


def prime_ideals_up_to(F: QuadField, bound: int) -> list:
    """Prime ideals of norm <= bound, ordered by (norm, HNF data)."""
    out = []
    t, c = F.trace_omega, F.omega_sq_const
    for p in _primes_upto(bound):
        roots = [r for r in range(p) if (r * r - t * r - c) % p == 0]
        if roots:
            for r in roots:
                out.append(FractionalIdeal(F, 1, p, (-r) % p, 1))
        elif p * p <= bound:
            out.append(FractionalIdeal(F, 1, p, 0, p))
    out.sort(key=lambda I: (I.norm(), I.a, I.b, I.g))
    return out


@dataclass(frozen=True)
class ClassGroup:
    field: QuadField
    narrow: bool
    representatives: tuple
    table: tuple  # table[i][j] = index of class of rep_i * rep_j

    @property
    def order(self) -> int:
        return len(self.representatives)

    def to_json(self) -> dict:
        return {
            "d": self.field.d,
            "narrow": self.narrow,
            "order": self.order,
            "representatives": [I.to_json() for I in self.representatives],
            "norms": [_fmt(I.norm()) for I in self.representatives],
            "table": [list(r) for r in self.table],
        }


def _equivalent(I, J, narrow: bool) -> bool:
    X = ideal_mul(I, ideal_inverse(J))
    if narrow:
        return is_principal_totally_positive(X) is not None
    return principal_generator(X) is not None


def class_group(F: QuadField, bound: Optional[int] = None, narrow: bool = False) -> ClassGroup:
    """Classes generated by primes of norm <= bound (default: the Minkowski bound)."""
    mb = minkowski_bound(F)
    if bound is None:
        bound = max(1, math.floor(mb))
    if bound < math.floor(mb):
        raise QuadError(f"bound {bound} is below the Minkowski bound {mb:.3f}")
    gens = prime_ideals_up_to(F, bound)
    if narrow:
        # the kernel of narrow -> wide classes is generated by any (gamma) with N(gamma) < 0
        gens.append(principal_ideal(_scaling_witness(F, (1, -1))))
    reps = [F.unit_ideal()]

    def find(X):
        for k, R in enumerate(reps):
            if _equivalent(X, R, narrow):
                return k
        return None

    queue = [0]
    while queue:
        i = queue.pop(0)
        for P in gens:
            X = ideal_mul(reps[i], P)
            if find(X) is None:
                reps.append(X)
                queue.append(len(reps) - 1)
    table = tuple(
        tuple(find(ideal_mul(reps[i], reps[j])) for j in range(len(reps))) for i in range(len(reps))
    )
    return ClassGroup(F, narrow, tuple(reps), table)


def narrow_class_group(F: QuadField, bound: Optional[int] = None) -> ClassGroup:
    return class_group(F, bound, narrow=True)


# -- sign-twisted ideals --------------------------------------------------------

@dataclass(frozen=True)
class SignTwistedIdeal:
    ideal: FractionalIdeal
    signs: tuple = (1, 1)

    def __post_init__(self):
        s = tuple(int(x) for x in self.signs)
        if len(s) != 2 or any(x not in (1, -1) for x in s):
            raise QuadError(f"signs must be a pair of +1/-1, got {self.signs!r}")
        object.__setattr__(self, "signs", s)

    @property
    def field(self) -> QuadField:
        return self.ideal.field

    def contains(self, x: QuadElement) -> bool:
        if not self.ideal.contains(x):
            return False
        return all(s * e >= 0 for s, e in zip(self.signs, x.signs()))

    def to_json(self) -> dict:
        return {"ideal": self.ideal.to_json(), "signs": ["+" if s > 0 else "-" for s in self.signs]}

    def __str__(self):
        tag = "".join("+" if s > 0 else "-" for s in self.signs)
        return f"({self.ideal}, {tag})"


def plus_part(I: FractionalIdeal) -> SignTwistedIdeal:
    return SignTwistedIdeal(I, (1, 1))


def _scaling_witness(F: QuadField, signs: tuple) -> QuadElement:
    """Some gamma in O_F with sign pattern ``signs``, via bounded search."""
    for r in range(0, WITNESS_BOUND + 1):
        for a in range(-r, r + 1):
            for b in (-r, r) if abs(a) != r else range(-r, r + 1):
                x = F.element(a, b)
                if not x.is_zero() and x.signs() == tuple(signs):
                    return x
    raise QuadError(f"no scaling witness with signs {signs} in |a|, |b| <= {WITNESS_BOUND}")


def module_dual(M: SignTwistedIdeal) -> SignTwistedIdeal:
    """{beta : beta*M in O_{F+}}.

    For signs (+,+) this is (I^{-1})_+. Otherwise pick gamma with the twist's
    sign pattern: gamma*M = (gamma I)_+, so the dual is gamma times the dual
    of (gamma I)_+, which again carries the twist.
    """
    if M.signs == (1, 1):
        return SignTwistedIdeal(ideal_inverse(M.ideal), (1, 1))
    gamma = _scaling_witness(M.field, M.signs)
    N = module_dual(plus_part(M.ideal.scale(gamma)))
    out = SignTwistedIdeal(N.ideal.scale(gamma), M.signs)
    # gamma * (gamma^{-1} I^{-1})_+ consists of y in I^{-1} with sign(y) = sign(gamma)
    if out.ideal != ideal_inverse(M.ideal):
        raise AssertionError("twisted dual does not match I^{-1}")
    return out


def is_reflexive(M: SignTwistedIdeal) -> bool:
    return module_dual(module_dual(M)) == M


def refl_modules_isomorphic(M: SignTwistedIdeal, N: SignTwistedIdeal) -> Optional[QuadElement]:
    """beta with beta*M = N, or None."""
    if M.field != N.field:
        raise QuadError("modules over different fields")
    X = ideal_mul(N.ideal, ideal_inverse(M.ideal))
    pattern = (M.signs[0] * N.signs[0], M.signs[1] * N.signs[1])
    return generator_with_signs(X, pattern)


def refl_pic_group(F: QuadField, bound: Optional[int] = None) -> dict:
    """Narrow classes mapped to reflexive modules I -> I_+, with checks."""
    G = narrow_class_group(F, bound)
    mods = [plus_part(I) for I in G.representatives]
    for i in range(len(mods)):
        if not is_reflexive(mods[i]):
            raise AssertionError(f"{mods[i]} is not reflexive")
        for j in range(i):
            if refl_modules_isomorphic(mods[i], mods[j]) is not None:
                raise AssertionError(f"representatives {j} and {i} are isomorphic")
    for i in range(len(mods)):
        for j in range(len(mods)):
            prod = plus_part(ideal_mul(mods[i].ideal, mods[j].ideal))
            if refl_modules_isomorphic(prod, mods[G.table[i][j]]) is None:
                raise AssertionError("group law does not match ideal multiplication")
    return {"group": G, "modules": tuple(mods)}


# -- the norm-gap certificate ---------------------------------------------------

@dataclass(frozen=True)
class ReflexiveCertificate:
    module: SignTwistedIdeal
    unit: QuadElement
    unit_norm: int
    norm_gap: Fraction  # every nonzero alpha in M has |N(alpha)| >= norm_gap
    product_bound: Fraction  # every nonzero alpha*beta has xy >= product_bound
    checked_pairs: int

    def steps(self) -> list:
        return [
            f"fundamental unit {self.unit} has norm +1, so no unit has mixed signs",
            f"the ideal has no generator of negative norm, so |N(alpha)| >= {_fmt(self.norm_gap)} on M",
            f"every nonzero alpha*beta (alpha in M, beta in the dual) is totally positive with norm >= {_fmt(self.product_bound)}",
            "a sum of points with x*y >= 4 cannot equal (1, 1): each summand would need x, y <= 1",
        ]

    def to_json(self) -> dict:
        return {
            "module": self.module.to_json(),
            "unit": self.unit.to_json(),
            "unit_norm": self.unit_norm,
            "norm_gap": _fmt(self.norm_gap),
            "product_bound": _fmt(self.product_bound),
            "checked_pairs": self.checked_pairs,
            "steps": self.steps(),
        }


def non_invertibility_certificate(M: SignTwistedIdeal, patch: int = 6) -> Optional[ReflexiveCertificate]:
    """Certificate that the evaluation M (x) M^dual -> O_{F+} misses 1, or None.

    Applies to mixed-sign twists. A pair alpha in M, beta in M^dual has
    alpha*beta totally nonnegative; the certificate shows its norm is >= 4
    whenever it is nonzero, so no sum of such products is 1. Elements on a
    bounded patch are checked against the bound as a sanity test.
    """
    if M.signs[0] == M.signs[1]:
        return None
    F = M.field
    fu = fundamental_unit(F)
    if fu.norm != 1:
        return None
    I = M.ideal
    gen = principal_generator(I)
    if gen is not None and gen.norm() < 0:
        # then I = (gen) and M is (O_F)_+ up to scaling
        return None
    # nonzero alpha in M has N(alpha) < 0 and N(alpha) in N(I)*Z; |N(alpha)| = N(I) would make alpha a generator
    gap = 2 * I.norm()
    Md = module_dual(M)
    gap_dual = 2 * Md.ideal.norm()
    bound = gap * gap_dual
    pairs = 0
    for x in module_patch(M, patch):
        if abs(x.norm()) < gap:
            raise AssertionError(f"{x} violates the norm gap")
        for y in module_patch(Md, patch // 2):
            p = x * y
            if not p.is_totally_positive() or p.norm() < bound:
                raise AssertionError(f"{x} * {y} violates the product bound")
            pairs += 1
    return ReflexiveCertificate(M, fu.unit, fu.norm, gap, bound, pairs)


# -- element patches --------------------------------------------------------------

def module_patch(M: SignTwistedIdeal, bound: int) -> list:
    """Nonzero m*e1 + n*e2 in M with |m|, |n| <= bound (e1, e2 the HNF basis of I)."""
    e1, e2 = M.ideal.basis()
    out = []
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if m == 0 and n == 0:
                continue
            x = e1 * m + e2 * n
            if M.contains(x):
                out.append(x)
    return out


def patch_indecomposables(M: SignTwistedIdeal, bound: int) -> list:
    """Patch elements that are not a sum of two nonzero patch elements.

    Experimental data on generating sets of ``I_+``: the count can be watched
    as ``bound`` grows, nothing is claimed about finite generation.
    """
    pts = module_patch(M, bound)
    keys = {(x.a, x.b) for x in pts}
    out = []
    for x in pts:
        if not any((x.a - y.a, x.b - y.b) in keys for y in pts if y != x):
            out.append(x)
    return out
