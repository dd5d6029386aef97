# backend/services/canonicalizer.py
"""
Canonical forms for two-dimensional algebras.

Every non-zero MSC is moved, by an explicit change of basis, onto exactly one
member of the canonical families for its characteristic class. Every matrix
along the way is recomputed with msc_core.transform; the scalar expressions in
the branch conditions only decide which step to take next.
"""
import itertools
import logging
import math
from dataclasses import replace
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import config
from exceptions import (
    CanonicalizationError,
    CharacteristicMismatchError,
    ExtensionCapError,
    FieldMismatchError,
    MalformedInputError,
    PreconditionError,
)
from models import CHAR2, CHAR3, GENERAL, GL2, MSC, ClassResult, FamilyLabel
from services import msc_core
from services.fields import Field, FieldElement, field_create, roots_deg_le3, splitting_extension, sqrt_min

logger = logging.getLogger(__name__)

ARITY = {1: 4, 2: 3, 3: 2, 4: 2, 5: 1, 6: 2, 7: 1, 8: 1, 9: 0, 10: 0, 11: 0, 12: 0}

# (row, column) of each parameter inside the canonical matrix
_A1, _A2, _A4, _B1, _B2 = (0, 0), (0, 1), (0, 3), (1, 0), (1, 1)
PARAM_SLOTS: Dict[str, Dict[int, Tuple[Tuple[int, int], ...]]] = {
    GENERAL: {
        1: (_A1, _A2, _A4, _B1), 2: (_A1, _B1, _B2), 3: (_B1, _B2), 4: (_A1, _B2),
        5: (_A1,), 6: (_A1, _B1), 7: (_B1,), 8: (_A1,), 9: (), 10: (), 11: (), 12: (),
    },
}
PARAM_SLOTS[CHAR3] = dict(PARAM_SLOTS[GENERAL])
PARAM_SLOTS[CHAR2] = {**PARAM_SLOTS[GENERAL], 3: (_A1, _B2), 7: (_A1,)}

Rows = Tuple[Tuple[object, ...], Tuple[object, ...]]

_GENERAL_TABLE: Dict[int, Callable[..., Rows]] = {
    1: lambda one, a1, a2, a4, b1: ((a1, a2, a2 + 1, a4), (b1, -a1, 1 - a1, -a2)),
    2: lambda one, a1, b1, b2: ((a1, 0, 0, 1), (b1, b2, 1 - a1, 0)),
    3: lambda one, b1, b2: ((0, 1, 1, 0), (b1, b2, 1, -1)),
    4: lambda one, a1, b2: ((a1, 0, 0, 0), (0, b2, 1 - a1, 0)),
    5: lambda one, a1: ((a1, 0, 0, 0), (1, 2 * a1 - 1, 1 - a1, 0)),
    6: lambda one, a1, b1: ((a1, 0, 0, 1), (b1, 1 - a1, -a1, 0)),
    7: lambda one, b1: ((0, 1, 1, 0), (b1, 1, 0, -1)),
    8: lambda one, a1: ((a1, 0, 0, 0), (0, 1 - a1, -a1, 0)),
    9: lambda one: ((one / 3, 0, 0, 0), (1, 2 * one / 3, -one / 3, 0)),
    10: lambda one: ((0, 1, 1, 0), (0, 0, 0, -1)),
    11: lambda one: ((0, 1, 1, 0), (1, 0, 0, -1)),
    12: lambda one: ((0, 0, 0, 0), (1, 0, 0, 0)),
}

# The char-2 family 3 ends in 1, which is -1 there.
_CHAR2_TABLE = {
    **_GENERAL_TABLE,
    3: lambda one, a1, b2: ((a1, 1, 1, 0), (0, b2, 1 - a1, 1)),
    5: lambda one, a1: ((a1, 0, 0, 0), (1, 1, 1 - a1, 0)),
    7: lambda one, a1: ((a1, 1, 1, 0), (0, 1 - a1, -a1, -1)),
    9: lambda one: ((1, 0, 0, 0), (1, 0, 1, 0)),
    11: lambda one: ((1, 1, 1, 0), (0, -1, -1, -1)),
}

_CHAR3_TABLE = {
    **_GENERAL_TABLE,
    5: lambda one, a1: ((a1, 0, 0, 0), (1, -1 - a1, 1 - a1, 0)),
    9: lambda one: ((0, 1, 1, 0), (1, 0, 0, -1)),
    11: lambda one: ((1, 0, 0, 0), (1, -1, -1, 0)),
}

FAMILY_TABLES = {GENERAL: _GENERAL_TABLE, CHAR2: _CHAR2_TABLE, CHAR3: _CHAR3_TABLE}

# Subsets a family's members fall into.
ORIGIN_SUBSETS = {
    GENERAL: {1: {1}, 2: {2, 3}, 3: {2, 3}, 4: {2, 3}, 5: {2, 3}, 6: {4}, 7: {4}, 8: {4}, 9: {4},
              10: {5}, 11: {5}, 12: {5}},
}
ORIGIN_SUBSETS[CHAR2] = dict(ORIGIN_SUBSETS[GENERAL])
ORIGIN_SUBSETS[CHAR3] = {**ORIGIN_SUBSETS[GENERAL], 9: {5}}

# (1,0,0,0; 0,-1,-1,0) is carried onto family 10 by these; rows as integers.
BRIDGE_SOURCE = ((1, 0, 0, 0), (0, -1, -1, 0))
BRIDGE_WITNESSES = {
    GENERAL: ((0, 1), (-1, 0)),
    CHAR2: ((0, 1), (1, 0)),
    CHAR3: ((0, 1), (-1, 0)),
}

# diag(1, -1) sends beta1 to -beta1 in families 2 and 6
SIGN_FLIP = ((1, 0), (0, -1))


class _NeedsExtension(Exception):
    def __init__(self, field: Field):
        super().__init__(f"root lives in GF({field.name})")
        self.field = field


def char_class_of(field: Field) -> str:
    if field.p == 2:
        return CHAR2
    if field.p == 3:
        return CHAR3
    return GENERAL


def bridge_witness(field: Field) -> GL2:
    (a, b), (c, d) = BRIDGE_WITNESSES[char_class_of(field)]
    return GL2.of(field, a, b, c, d)


def bridge_source(field: Field) -> MSC:
    return MSC.from_rows(field, BRIDGE_SOURCE)


def _sign_flip(field: Field) -> GL2:
    (a, b), (c, d) = SIGN_FLIP
    return GL2.of(field, a, b, c, d)


def materialize(label: FamilyLabel, field: Field) -> MSC:
    """The canonical matrix of a label, with its params substituted."""
    if label.is_trivial:
        return MSC.zero(field)
    expected = char_class_of(field)
    if label.char_class != expected:
        raise CharacteristicMismatchError(
            f"class {label.char_class} does not fit GF({field.name}), which is {expected}"
        )
    table = FAMILY_TABLES[label.char_class]
    if label.family not in table:
        raise MalformedInputError(f"unknown family {label.family}")
    if len(label.params) != ARITY[label.family]:
        raise MalformedInputError(
            f"family {label.family} takes {ARITY[label.family]} params, got {len(label.params)}"
        )
    params = tuple(field(x) for x in label.params)
    return MSC.from_rows(field, table[label.family](field.one, *params))


def normalize_label(label: FamilyLabel) -> FamilyLabel:
    """Pick min(beta1, -beta1) for the families identified up to that sign."""
    if label.char_class in (GENERAL, CHAR3) and label.family in (2, 6):
        params = list(label.params)
        params[1] = min(params[1], -params[1])
        return replace(label, params=tuple(params))
    return label


def _least_root(field: Field, c0, c1, c2, c3) -> FieldElement:
    coeffs = [field(c) for c in (c0, c1, c2, c3)]
    roots = roots_deg_le3(*coeffs)
    if roots:
        return roots[0]
    extension, _ = splitting_extension(*coeffs, field)
    raise _NeedsExtension(extension)


def _least_sqrt(x: FieldElement) -> FieldElement:
    root = sqrt_min(x)
    if root is not None:
        return root
    extension, _ = splitting_extension(-x, 0, 1, 0, x.field)
    raise _NeedsExtension(extension)


def _finish(A: MSC, witness: GL2, char_class: str, family: int) -> ClassResult:
    canonical = msc_core.transform(A, witness)
    params = tuple(canonical.rows[r][c] for r, c in PARAM_SLOTS[char_class][family])
    label = FamilyLabel(char_class, family, params)
    normalized = normalize_label(label)
    if normalized != label:
        witness = _sign_flip(A.field) @ witness
        canonical = msc_core.transform(A, witness)

    expected = materialize(normalized, A.field)
    if canonical != expected:
        raise CanonicalizationError(
            f"{A} reduced to {canonical}, which is not the {normalized} matrix {expected}"
        )
    return ClassResult(normalized, witness, A.field, canonical)


def _reduce_subset1(A: MSC) -> ClassResult:
    P, delta = msc_core.p_matrix(A)
    if not delta:
        raise PreconditionError("subset-1 reduction needs det P(A) != 0")
    g = GL2.of(A.field, P[0][0], P[0][1], P[1][0], P[1][1])
    return _finish(A, g, char_class_of(A.field), 1)


def _reduce_subset23(A: MSC) -> ClassResult:
    field = A.field
    char_class = char_class_of(field)
    one, zero = field.one, field.zero

    # make Tr1 = (1, 0)
    t1 = msc_core.traces(A).tr1
    if t1[0]:
        g0 = GL2.of(field, t1[0], t1[1], 0, 1)
    else:
        g0 = GL2.of(field, t1[0], t1[1], 1, 0)
    B = msc_core.transform(A, g0)
    lam = msc_core.traces(B).tr2[0]
    a1, a2, _, a4 = B.alpha
    b1 = B.beta[0]

    # residual changes of basis have inverse (1, 0; xi2, eta2)
    if a4:
        xi2 = -a2 / a4
        eta2 = _least_sqrt(a4).inverse()
        family = 2
    elif a2:
        eta2 = a2.inverse()
        if field.p == 2:
            xi2 = _least_root(field, b1, 1 + lam - 3 * a1, -3 * a2, 0)
        else:
            xi2 = -a1 / (2 * a2)
        family = 3
    else:
        coefficient = 1 + lam - 3 * a1
        if coefficient:
            xi2, eta2, family = -b1 / coefficient, one, 4
        elif b1:
            xi2, eta2, family = zero, b1, 5
        else:
            xi2, eta2, family = zero, one, 4

    logger.debug("subset 2/3: lambda=%s, branch to family %s", lam, family)
    residual = GL2.from_inverse(field, 1, 0, xi2, eta2)
    return _finish(A, residual @ g0, char_class, family)


def _reduce_subset4(A: MSC) -> ClassResult:
    char_class = char_class_of(A.field)
    inner = _reduce_subset23(msc_core.opposite(A))
    family = {2: 6, 3: 7, 4: 8, 5: 9}[inner.label.family]
    if family == 9 and char_class == CHAR3:
        raise CanonicalizationError(f"{A} reached family 9 through subset 4 in characteristic 3")
    return _finish(A, inner.witness, char_class, family)


def _reduce_subset5(A: MSC) -> ClassResult:
    field = A.field
    char_class = char_class_of(field)
    one, zero = field.one, field.zero
    if A.is_zero():
        raise PreconditionError("the zero algebra has no canonical family")

    a1, a2, _, a4 = A.alpha
    b1 = A.beta[0]
    g1 = GL2.identity(field)
    if a4:
        # second basis vector (1, t) with t a root of b1 - 3a1 t - 3a2 t^2 - a4 t^3 kills alpha4
        t = _least_root(field, b1, -3 * a1, -3 * a2, -a4)
        g1 = GL2.from_inverse(field, 0, 1, 1, t)
        B = msc_core.transform(A, g1)
        a1, a2, _, a4 = B.alpha
        b1 = B.beta[0]
        if a4:
            raise CanonicalizationError(f"alpha4 survived the cubic-root step on {A}")

    bridge = False
    if char_class == CHAR3:
        if a2:
            xi1 = _least_sqrt((b1 * a2).inverse()) if b1 else one
            xi2 = -a1 * xi1 / (2 * a2)
            eta2 = a2.inverse()
            family = 9 if b1 else 10
        elif b1:
            xi1 = a1.inverse() if a1 else one
            xi2 = zero
            eta2 = xi1 * xi1 * b1
            family = 11 if a1 else 12
        else:
            xi1, xi2, eta2 = a1.inverse(), zero, one
            bridge, family = True, 10
    elif a2:
        eta2 = a2.inverse()
        if char_class == GENERAL:
            r = -a1 / (2 * a2)
            discriminant = 3 * a1 * a1 + 4 * a2 * b1
            xi1 = _least_sqrt(4 / discriminant) if discriminant else one
            family = 11 if discriminant else 10
        else:
            r = _least_root(field, b1, -3 * a1, -3 * a2, 0)
            xi1 = a1.inverse() if a1 else one
            family = 11 if a1 else 10
        xi2 = r * xi1
    elif a1:
        xi1 = a1.inverse()
        xi2 = b1 / (3 * a1) * xi1
        eta2 = one
        bridge, family = True, 10
    else:
        xi1, xi2, eta2 = one, zero, b1
        family = 12

    logger.debug("subset 5: branch to family %s (bridge=%s)", family, bridge)
    witness = GL2.from_inverse(field, xi1, 0, xi2, eta2) @ g1
    if bridge:
        witness = bridge_witness(field) @ witness
    return _finish(A, witness, char_class, family)


def _reduce(A: MSC) -> ClassResult:
    if A.is_zero():
        return ClassResult(FamilyLabel.trivial(), GL2.identity(A.field), A.field, A)
    index = msc_core.subset_of(A).index
    if index == 1:
        return _reduce_subset1(A)
    if index in (2, 3):
        return _reduce_subset23(A)
    if index == 4:
        return _reduce_subset4(A)
    return _reduce_subset5(A)


def _solve(A: MSC, reducer: Callable[[MSC], ClassResult], start: Optional[Field] = None) -> ClassResult:
    """Run reducer, restarting over a larger field whenever a root is missing.

    Each attempt embeds the original input directly, so every result for A
    uses the same embedding of its base field.
    """
    base = A.field
    field = start or base
    while True:
        try:
            return reducer(A.embed(field))
        except _NeedsExtension as needed:
            target_k = math.lcm(field.k, needed.field.k)
            if target_k > config.MAX_EXTENSION_DEGREE:
                raise ExtensionCapError(
                    f"classifying over GF({base.name}) needs GF({base.p}^{target_k}), above the cap"
                )
            logger.debug("Restarting reduction of %s over GF(%s^%s)", A, base.p, target_k)
            field = field_create(base.p, target_k)


def canonicalize(A: MSC) -> ClassResult:
    return _solve(A, _reduce)


def canonicalize_in(A: MSC, field: Field) -> ClassResult:
    """canonicalize, starting from a chosen extension of A's field."""
    return _solve(A, _reduce, start=field)


def canon_subset1(A: MSC) -> ClassResult:
    if not msc_core.p_matrix(A)[1]:
        raise PreconditionError("canon_subset1 needs det P(A) != 0")
    return _solve(A, _reduce_subset1)


def canon_subset23(A: MSC) -> ClassResult:
    index = msc_core.subset_of(A).index
    if index not in (2, 3):
        raise PreconditionError(f"canon_subset23 needs subset 2 or 3, got {index}")
    return _solve(A, _reduce_subset23)


def canon_subset4(A: MSC) -> ClassResult:
    index = msc_core.subset_of(A).index
    if index != 4:
        raise PreconditionError(f"canon_subset4 needs subset 4, got {index}")
    return _solve(A, _reduce_subset4)


def canon_subset5(A: MSC) -> ClassResult:
    index = msc_core.subset_of(A).index
    if index != 5 or A.is_zero():
        raise PreconditionError("canon_subset5 needs a non-zero subset-5 matrix")
    return _solve(A, _reduce_subset5)


def canonicalize_pair(A: MSC, B: MSC) -> Tuple[ClassResult, ClassResult]:
    """Canonicalize A and B over one common field."""
    if A.field != B.field:
        raise FieldMismatchError(f"GF({A.field.name}) and GF({B.field.name}) inputs")
    field = A.field
    while True:
        result_a = canonicalize_in(A, field)
        result_b = canonicalize_in(B, field)
        if result_a.field == result_b.field:
            return result_a, result_b
        target_k = math.lcm(result_a.field.k, result_b.field.k)
        if target_k > config.MAX_EXTENSION_DEGREE:
            raise ExtensionCapError(f"no common field within the cap for {A} and {B}")
        field = field_create(field.p, target_k)


def labels_agree(A: MSC, result_a: ClassResult, B: MSC, result_b: ClassResult) -> bool:
    if result_a.field == result_b.field:
        return result_a.label == result_b.label
    result_a, result_b = canonicalize_pair(A, B)
    return result_a.label == result_b.label


def is_isomorphic(A: MSC, B: MSC) -> Optional[GL2]:
    """A verified witness w with transform(A, w) = B over a common field, or None."""
    result_a, result_b = canonicalize_pair(A, B)
    if result_a.label != result_b.label:
        return None
    witness = result_b.witness.inverse() @ result_a.witness
    field = witness.field
    if msc_core.transform(A.embed(field), witness) != B.embed(field):
        raise CanonicalizationError(f"composed witness does not carry {A} to {B}")
    return witness


def family_grid(field: Field, values: Iterable[int] = (0, 1, 2)) -> List[FamilyLabel]:
    """Every normalized label of the field's class with params drawn from values."""
    char_class = char_class_of(field)
    elements = [field(v) for v in values]
    seen = set()
    labels = []
    for family in range(1, 13):
        for params in itertools.product(elements, repeat=ARITY[family]):
            label = normalize_label(FamilyLabel(char_class, family, params))
            if label not in seen:
                seen.add(label)
                labels.append(label)
    return labels


def family_from_name(name: str) -> int:
    """CLI family names "A1".."A12"."""
    text = name.strip().upper()
    if text.startswith("A") and text[1:].isdigit() and 1 <= int(text[1:]) <= 12:
        return int(text[1:])
    raise MalformedInputError(f"unknown family name {name!r}, expected A1..A12")
