# backend/services/fields.py
"""
Exact arithmetic in GF(p) and GF(p^k).

Elements are coefficient vectors over GF(p), low degree first, reduced modulo
the lexicographically least monic irreducible of degree k. The same vector
order gives the total element order used for every tie-break downstream.
"""
import functools
import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import config
from exceptions import CanonicalizationError, ExtensionCapError, FieldError, FieldMismatchError

logger = logging.getLogger(__name__)

Coeffs = Tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _int_poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> List[int]:
    """Remainder of num by the monic den over GF(p)."""
    rem = [c % p for c in num]
    d = len(den) - 1
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c:
            for j in range(d + 1):
                rem[i - d + j] = (rem[i - d + j] - c * den[j]) % p
    return rem[:d]


def _int_trim(a: List[int]) -> List[int]:
    while a and not a[-1]:
        a.pop()
    return a


def _int_poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _int_trim(_int_poly_rem(prod, mod, p))


def _int_poly_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> List[int]:
    result, base = [1], list(base)
    while e:
        if e & 1:
            result = _int_poly_mulmod(result, base, mod, p)
        base = _int_poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _int_poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = _int_trim(list(a)), _int_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        a, b = b, _int_trim(_int_poly_rem(a, [c * inv % p for c in b], p))
    return a


def _minus_x(h: Sequence[int], p: int) -> List[int]:
    h = list(h) + [0] * (2 - len(h))
    h[1] = (h[1] - 1) % p
    return _int_trim(h)


def _prime_divisors(n: int) -> List[int]:
    return [r for r in range(2, n + 1) if n % r == 0 and _is_prime(r)]


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic poly of degree k >= 2.

    Irreducible iff x^(p^k) = x mod poly and x^(p^(k/r)) - x is coprime to poly
    for every prime r dividing k.
    """
    k = len(poly) - 1
    frobenius = {0: [0, 1]}
    for i in range(1, k + 1):
        frobenius[i] = _int_poly_powmod(frobenius[i - 1], p, poly, p)
    if _minus_x(frobenius[k], p):
        return False
    return all(len(_int_poly_gcd(_minus_x(frobenius[k // r], p), poly, p)) == 1 for r in _prime_divisors(k))


def _least_irreducible(p: int, k: int) -> Coeffs:
    if k == 1:
        return (0, 1)
    # c0 = 0 means x divides the candidate
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=k - 1):
            candidate = (c0,) + rest + (1,)
            if _is_irreducible(candidate, p):
                return candidate
    raise CanonicalizationError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """GF(p^k). Build through field_create so each (p, k) has one instance."""

    __slots__ = ("p", "k", "modulus", "order")

    def __init__(self, p: int, k: int, modulus: Coeffs):
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p ** k

    @property
    def name(self) -> str:
        return f"{self.p}^{self.k}"

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    def __call__(self, value: Union[int, str, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Lenient coercion: ints and coefficient lists are reduced mod p."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"element of GF({value.field.name}) used in GF({self.name})")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            raise FieldError(f"{len(coeffs)} coefficients given for GF({self.name})")
        return FieldElement(self, tuple(coeffs) + (0,) * (self.k - len(coeffs)))

    def parse(self, value: Union[int, str]) -> "FieldElement":
        """Strict wire parsing: "c" or "c0,c1,..." with every coefficient in [0, p)."""
        if isinstance(value, bool):
            raise FieldError(f"not a field element: {value!r}")
        if isinstance(value, int):
            parts = [value]
        elif isinstance(value, str):
            try:
                parts = [int(part) for part in value.split(",")]
            except ValueError:
                raise FieldError(f"not a field element: {value!r}")
        else:
            raise FieldError(f"not a field element: {value!r}")

        if len(parts) not in (1, self.k):
            raise FieldError(f"expected 1 or {self.k} coefficients, got {len(parts)}: {value!r}")
        if any(c < 0 or c >= self.p for c in parts):
            raise FieldError(f"element out of range for GF({self.name}): {value!r}")
        return FieldElement(self, tuple(parts) + (0,) * (self.k - len(parts)))

    def elements(self) -> Iterator["FieldElement"]:
        """Every element, in element order."""
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, coeffs)

    def element_at(self, index: int) -> "FieldElement":
        digits = []
        for _ in range(self.k):
            digits.append(index % self.p)
            index //= self.p
        return FieldElement(self, tuple(reversed(digits)))

    def index_of(self, x: "FieldElement") -> int:
        index = 0
        for c in x.coeffs:
            index = index * self.p + c
        return index

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.p == other.p and self.k == other.k

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    def __reduce__(self):
        return field_create, (self.p, self.k)

    def __repr__(self) -> str:
        return f"Field({self.name})"


@functools.total_ordering
class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"GF({self.field.name}) and GF({other.field.name}) operands")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, _mul_coeffs(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.field.name})")
        if self.field.k == 1:
            p = self.field.p
            return FieldElement(self.field, (pow(self.coeffs[0], p - 2, p),))
        return self ** (self.field.order - 2)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self.coeffs[0] == other % self.field.p and not any(self.coeffs[1:])
        return NotImplemented

    def __lt__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"cannot order GF({self.field.name}) against GF({other.field.name})")
        return self.coeffs < other.coeffs

    def __hash__(self) -> int:
        # constants hash like the int they equal
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __str__(self) -> str:
        if self.field.k == 1:
            return str(self.coeffs[0])
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement({self}, GF({self.field.name}))"


def _mul_coeffs(field: Field, a: Coeffs, b: Coeffs) -> Coeffs:
    p, k = field.p, field.k
    if k == 1:
        return ((a[0] * b[0]) % p,)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    modulus = field.modulus
    # x^k = -(m0 + m1 x + ... + m_{k-1} x^{k-1})
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d] % p
        if c:
            base = d - k
            for i in range(k):
                prod[base + i] -= c * modulus[i]
        prod[d] = 0
    return tuple(c % p for c in prod[:k])


def field_create(p: int, k: int = 1) -> Field:
    """The unique Field for (p, k); repeated calls return the same instance."""
    if not isinstance(p, int) or isinstance(p, bool) or not _is_prime(p):
        raise FieldError(f"characteristic must be prime, got {p!r}")
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= config.MAX_EXTENSION_DEGREE:
        raise FieldError(f"extension degree must be in 1..{config.MAX_EXTENSION_DEGREE}, got {k!r}")
    return _field_create(p, k)


@functools.lru_cache(maxsize=None)
def _field_create(p: int, k: int) -> Field:
    modulus = _least_irreducible(p, k)
    logger.debug("Built GF(%s^%s) with modulus %s", p, k, modulus)
    return Field(p, k, modulus)


def field_from_name(name: str) -> Field:
    """Parse the wire name "p^k" (a bare "p" means k = 1).

    Named fields are limited to CANONIX_MAX_FIELD_ORDER elements; extensions the
    canonicalizer builds are bounded by the degree cap alone.
    """
    text = str(name).strip()
    try:
        p_text, sep, k_text = text.partition("^")
        p, k = int(p_text), int(k_text) if sep else 1
    except ValueError:
        raise FieldError(f"bad field name {name!r}, expected p^k")
    if 1 <= k <= config.MAX_EXTENSION_DEGREE and p ** k > config.MAX_FIELD_ORDER:
        raise FieldError(f"GF({p}^{k}) exceeds the configured field order limit {config.MAX_FIELD_ORDER}")
    return field_create(p, k)


# Polynomials over a Field: lists of FieldElement, low degree first, no trailing zeros.

def _trim(a: List[FieldElement]) -> List[FieldElement]:
    while a and not a[-1]:
        a.pop()
    return a


def _monic(a: List[FieldElement]) -> List[FieldElement]:
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _poly_eval(poly: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _poly_add(a, b) -> List[FieldElement]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def _poly_sub(a, b) -> List[FieldElement]:
    return _poly_add(a, [-c for c in b])


def _poly_mul(a, b) -> List[FieldElement]:
    if not a or not b:
        return []
    zero = a[0].field.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return _trim(out)


def _poly_divmod(a, b) -> Tuple[List[FieldElement], List[FieldElement]]:
    rem = _trim(list(a))
    db = len(b) - 1
    inv = b[-1].inverse()
    zero = b[0].field.zero
    quotient = [zero] * max(len(rem) - db, 0)
    while rem and len(rem) - 1 >= db:
        c = rem[-1] * inv
        shift = len(rem) - 1 - db
        quotient[shift] = c
        for i, bi in enumerate(b):
            rem[shift + i] = rem[shift + i] - c * bi
        rem.pop()
        _trim(rem)
    return _trim(quotient), rem


def _poly_mulmod(a, b, mod) -> List[FieldElement]:
    return _poly_divmod(_poly_mul(a, b), mod)[1]


def _poly_powmod(base, e: int, mod) -> List[FieldElement]:
    result = [mod[0].field.one]
    base = _poly_divmod(base, mod)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod)
        base = _poly_mulmod(base, base, mod)
        e >>= 1
    return result


def _poly_gcd(a, b) -> List[FieldElement]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    return _monic(a)


def roots_by_enumeration(poly: Sequence[FieldElement]) -> List[FieldElement]:
    """Zero set of poly by evaluating it at every element; already sorted."""
    field = poly[0].field
    return [x for x in field.elements() if not _poly_eval(poly, x)]


def roots_by_splitting(poly: Sequence[FieldElement]) -> List[FieldElement]:
    """Zero set of poly via gcd with x^q - x and equal-degree splitting."""
    f = _monic(_trim(list(poly)))
    if len(f) < 2:
        return []
    field = f[0].field
    x = [field.zero, field.one]
    xq = _poly_powmod(x, field.order, f)
    linear_part = _poly_gcd(f, _poly_sub(xq, x))
    return sorted(_split_linear(linear_part, field))


def _splitting_probe(g, shift: FieldElement, field: Field) -> List[FieldElement]:
    if field.p != 2:
        w = _poly_powmod([shift, field.one], (field.order - 1) // 2, g)
        return _poly_sub(w, [field.one])
    # absolute trace of shift * x, modulo g
    term = _poly_divmod([field.zero, shift], g)[1]
    acc = list(term)
    for _ in range(field.k - 1):
        term = _poly_mulmod(term, term, g)
        acc = _poly_add(acc, term)
    return acc


def _split_linear(g, field: Field) -> List[FieldElement]:
    degree = len(g) - 1
    if degree <= 0:
        return []
    if degree == 1:
        return [-g[0] / g[1]]
    for shift in field.elements():
        h = _poly_gcd(g, _splitting_probe(g, shift, field))
        if 1 <= len(h) - 1 < degree:
            quotient, _ = _poly_divmod(g, h)
            return _split_linear(h, field) + _split_linear(quotient, field)
    raise CanonicalizationError(f"could not split a degree-{degree} factor over GF({field.name})")


def _poly_roots(poly: Sequence[FieldElement]) -> List[FieldElement]:
    field = poly[0].field
    if field.order <= config.EXHAUSTIVE_ROOT_LIMIT:
        return roots_by_enumeration(poly)
    return roots_by_splitting(poly)


def _common_field(values: Sequence[FieldElement]) -> Field:
    fields = {v.field for v in values if isinstance(v, FieldElement)}
    if not fields:
        raise FieldError("at least one coefficient must be a field element")
    if len(fields) > 1:
        raise FieldMismatchError("coefficients from different fields")
    return fields.pop()


def roots_deg_le3(c0, c1, c2, c3) -> List[FieldElement]:
    """All roots of c0 + c1 t + c2 t^2 + c3 t^3 in the coefficients' field, sorted."""
    field = _common_field((c0, c1, c2, c3))
    poly = [field(c) for c in (c0, c1, c2, c3)]
    if not (poly[1] or poly[2] or poly[3]):
        raise FieldError("constant polynomial has no roots to find")
    return _poly_roots(poly)


def sqrt_min(x: FieldElement) -> Optional[FieldElement]:
    """Least r with r*r == x, or None when x is a non-square."""
    field = x.field
    roots = _poly_roots([-x, field.zero, field.one])
    return roots[0] if roots else None


def splitting_extension(c0, c1, c2, c3, field: Field) -> Tuple[Field, FieldElement]:
    """Smallest GF(p^(k*d)) holding a root of a quadratic or cubic, with its least root there."""
    poly = [field(c) for c in (c0, c1, c2, c3)]
    degree = max((i for i, c in enumerate(poly) if c), default=0)
    if degree not in (2, 3):
        raise FieldError(f"splitting_extension needs degree 2 or 3, got {degree}")

    roots = _poly_roots(poly)
    if roots:
        return field, roots[0]

    # no root means irreducible, so the extension degree is the polynomial degree
    target_k = field.k * degree
    if target_k > config.MAX_EXTENSION_DEGREE:
        raise ExtensionCapError(
            f"root needs GF({field.p}^{target_k}), above the cap {config.MAX_EXTENSION_DEGREE}"
        )
    extension = field_create(field.p, target_k)

    logger.debug("Extending GF(%s) to GF(%s) for a degree-%s root", field.name, extension.name, degree)
    roots = _poly_roots([embed(c, extension) for c in poly])
    if not roots:
        raise CanonicalizationError(f"irreducible degree-{degree} polynomial has no root in GF({extension.name})")
    return extension, roots[0]


@functools.lru_cache(maxsize=None)
def _generator_image(p: int, source_k: int, target_k: int) -> FieldElement:
    source = field_create(p, source_k)
    target = field_create(p, target_k)
    roots = _poly_roots([target(c) for c in source.modulus])
    if not roots:
        raise CanonicalizationError(f"GF({source.name}) modulus has no root in GF({target.name})")
    return roots[0]


def embed(x: FieldElement, target: Field) -> FieldElement:
    """Image of x under the fixed embedding of its field into target."""
    source = x.field
    if source == target:
        return x
    if source.p != target.p or target.k % source.k:
        raise FieldMismatchError(f"GF({source.name}) does not embed in GF({target.name})")
    if source.k == 1:
        return target(x.coeffs[0])

    theta = _generator_image(source.p, source.k, target.k)
    result = target.zero
    power = target.one
    for c in x.coeffs:
        if c:
            result = result + c * power
        power = power * theta
    return result
