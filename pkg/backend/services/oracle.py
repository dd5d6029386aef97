# backend/services/oracle.py
"""
Brute-force ground truth for the canonicalizer.

Field elements become indices 0..q-1 in element order and the field operations
become lookup tables, so the action of a whole slice of GL(2, q) on one matrix
is a handful of numpy gathers. Slices follow the enumeration order of GL2
(lexicographic in a, b, c, d), one slice per value of a.
"""
import functools
import itertools
import logging
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

import config
from exceptions import ExtensionCapError, PolicyBoundError
from models import GL2, MSC, CensusTable, ClassResult, FamilyLabel, OrbitReport
from services import canonicalizer, msc_core
from services.fields import Field, field_create

logger = logging.getLogger(__name__)


class FieldTables:
    """Addition, multiplication, negation and inversion of GF(q) as index tables."""

    def __init__(self, field: Field):
        q = field.order
        self.field = field
        self.q = q
        self.elements = list(field.elements())
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j in range(i, q):
                y = self.elements[j]
                add[i, j] = add[j, i] = field.index_of(x + y)
                mul[i, j] = mul[j, i] = field.index_of(x * y)
        self.add = add.ravel()
        self.mul = mul.ravel()
        self.neg = np.array([field.index_of(-x) for x in self.elements], dtype=np.int64)
        self.inv = np.array([field.index_of(x.inverse()) if x else 0 for x in self.elements], dtype=np.int64)

    def plus(self, x, y):
        return self.add[x * self.q + y]

    def times(self, x, y):
        return self.mul[x * self.q + y]

    def encode(self, A: MSC) -> int:
        code = 0
        for x in A.entries():
            code = code * self.q + self.field.index_of(x)
        return code

    def entries_of(self, code: int) -> List[int]:
        digits = []
        for _ in range(8):
            digits.append(code % self.q)
            code //= self.q
        return digits[::-1]

    def decode(self, code: int) -> MSC:
        values = [self.elements[i] for i in self.entries_of(int(code))]
        return MSC(self.field, tuple(values[:4]), tuple(values[4:]))


@dataclass
class _GroupSlice:
    g: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    h: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


@functools.lru_cache(maxsize=8)
def field_tables(field: Field) -> FieldTables:
    logger.debug("Building lookup tables for GF(%s)", field.name)
    return FieldTables(field)


def _check_bound(field: Field, max_q: Optional[int] = None) -> None:
    bound = config.MAX_ENUM_Q if max_q is None else max_q
    if field.order > bound:
        raise PolicyBoundError(f"GF({field.name}) has {field.order} elements; enumeration is limited to q <= {bound}")


def _group_slices(tables: FieldTables) -> Iterator[_GroupSlice]:
    q = tables.q
    b, c, d = np.indices((q, q, q)).reshape(3, -1)
    for a_value in range(q):
        a = np.full(b.shape, a_value, dtype=np.int64)
        det = tables.plus(tables.times(a, d), tables.neg[tables.times(b, c)])
        keep = det != 0
        ga, gb, gc, gd, det = a[keep], b[keep], c[keep], d[keep], det[keep]
        dinv = tables.inv[det]
        h = (
            tables.times(gd, dinv),
            tables.times(tables.neg[gb], dinv),
            tables.times(tables.neg[gc], dinv),
            tables.times(ga, dinv),
        )
        yield _GroupSlice((ga, gb, gc, gd), h)


def _act(tables: FieldTables, entries: Sequence[int], group: _GroupSlice) -> np.ndarray:
    """Rows of g A (g^-1 tensor g^-1) for every g in the slice; shape (8, n)."""
    hm = ((group.h[0], group.h[1]), (group.h[2], group.h[3]))
    pairs = ((0, 0), (0, 1), (1, 0), (1, 1))
    kron = [[tables.times(hm[i][k], hm[j][l]) for (k, l) in pairs] for (i, j) in pairs]
    zeros = np.zeros(group.g[0].shape, dtype=np.int64)

    partial = []
    for row in (entries[:4], entries[4:]):
        cols = []
        for col in range(4):
            acc = zeros
            for m in range(4):
                if row[m]:
                    acc = tables.plus(acc, tables.times(row[m], kron[m][col]))
            cols.append(acc)
        partial.append(cols)

    gm = ((group.g[0], group.g[1]), (group.g[2], group.g[3]))
    out = [
        tables.plus(tables.times(gm[r][0], partial[0][col]), tables.times(gm[r][1], partial[1][col]))
        for r in range(2)
        for col in range(4)
    ]
    return np.stack(out)


def _codes(tables: FieldTables, images: np.ndarray) -> np.ndarray:
    codes = np.zeros(images.shape[1], dtype=np.int64)
    for row in images:
        codes = codes * tables.q + row
    return codes


def _orbit_codes(tables: FieldTables, entries: Sequence[int]) -> np.ndarray:
    chunks = [_codes(tables, _act(tables, entries, group)) for group in _group_slices(tables)]
    return np.unique(np.concatenate(chunks))


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


def gl2_enumerate(field: Field, max_q: Optional[int] = None) -> Iterator[GL2]:
    """Every invertible 2x2 matrix once, lexicographic in (a, b, c, d)."""
    _check_bound(field, max_q)
    elements = list(field.elements())
    for a, b, c, d in itertools.product(elements, repeat=4):
        if a * d - b * c:
            yield GL2.of(field, a, b, c, d)


def encode_msc(A: MSC) -> int:
    """Position of A in the lexicographic listing of all q^8 matrices."""
    return field_tables(A.field).encode(A)


def orbit_codes(A: MSC, max_q: Optional[int] = None) -> np.ndarray:
    """Sorted codes (see encode_msc) of every matrix in the orbit of A."""
    _check_bound(A.field, max_q)
    tables = field_tables(A.field)
    return _orbit_codes(tables, tables.entries_of(tables.encode(A)))


def orbit(A: MSC, max_q: Optional[int] = None) -> OrbitReport:
    codes = orbit_codes(A, max_q)
    tables = field_tables(A.field)
    representative = tables.decode(int(codes[0]))
    result = canonicalizer.canonicalize(representative)
    return OrbitReport(representative, int(codes.size), msc_core.subset_of(representative), result.label, result.field)


def brute_isomorphic(A: MSC, B: MSC, field: Field, max_q: Optional[int] = None) -> Optional[GL2]:
    """First g over field, in enumeration order, with transform(A, g) = B; None if there is none."""
    _check_bound(field, max_q)
    A, B = A.embed(field), B.embed(field)
    tables = field_tables(field)
    entries = tables.entries_of(tables.encode(A))
    target = np.array(tables.entries_of(tables.encode(B)), dtype=np.int64)[:, None]
    for group in _group_slices(tables):
        hits = np.flatnonzero(np.all(_act(tables, entries, group) == target, axis=0))
        if hits.size:
            i = int(hits[0])
            a, b, c, d = (tables.elements[int(x[i])] for x in group.g)
            return GL2.of(field, a, b, c, d)
    return None


def _shared_label_groups(field: Field, representatives: List[MSC], results: List[ClassResult]) -> Tuple[Tuple[int, ...], ...]:
    """Orbits whose labels coincide once every label lives over one common field."""
    k = functools.reduce(math.lcm, (r.field.k for r in results), 1)
    while True:
        if k > config.MAX_EXTENSION_DEGREE:
            raise ExtensionCapError(f"census labels over GF({field.name}) need degree {k}")
        common = field_create(field.p, k)
        again = [canonicalizer.canonicalize_in(rep, common) for rep in representatives]
        widened = functools.reduce(math.lcm, (r.field.k for r in again), k)
        if widened == k:
            break
        k = widened

    groups: Dict[FamilyLabel, List[int]] = defaultdict(list)
    for i, result in enumerate(again):
        if not result.label.is_trivial:
            groups[result.label].append(i)
    return tuple(tuple(group) for group in groups.values() if len(group) > 1)


def census(
    field: Field,
    max_q: Optional[int] = None,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
) -> CensusTable:
    """Partition matrices over field into orbits and check the canonicalizer on every member.

    Without sample the sweep covers all q^8 matrices; with sample it covers the
    orbits of that many random matrices.
    """
    q = field.order
    bound = config.CENSUS_MAX_Q if max_q is None else max_q
    if sample is None and q > bound:
        raise PolicyBoundError(f"full census over GF({field.name}) exceeds q <= {bound}; pass a sample size")
    _check_bound(field, max(bound, config.MAX_ENUM_Q))
    space = q ** 8
    if sample is None and space > config.MAX_CENSUS_MATRICES:
        raise PolicyBoundError(
            f"full census over GF({field.name}) covers {space} matrices, above {config.MAX_CENSUS_MATRICES}"
        )
    tables = field_tables(field)

    if sample is None:
        candidates = range(space)
        visited = np.zeros(space, dtype=bool)
        is_visited = lambda code: bool(visited[code])  # noqa: E731
        mark = lambda codes: visited.__setitem__(codes, True)  # noqa: E731
    else:
        rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
        candidates = [rng.randrange(space) for _ in range(sample)]
        seen = set()
        is_visited = lambda code: code in seen  # noqa: E731
        mark = lambda codes: seen.update(int(c) for c in codes)  # noqa: E731

    rows: List[OrbitReport] = []
    representatives: List[MSC] = []
    results: List[ClassResult] = []
    inhomogeneous: List[int] = []
    for code in candidates:
        if is_visited(code):
            continue
        members = _orbit_codes(tables, tables.entries_of(code))
        mark(members)
        representative = tables.decode(int(members[0]))
        rep_result = canonicalizer.canonicalize(representative)

        for member_code in members:
            member = tables.decode(int(member_code))
            member_result = canonicalizer.canonicalize(member)
            if not canonicalizer.labels_agree(representative, rep_result, member, member_result):
                logger.warning("Orbit of %s is not label-homogeneous: %s has %s", representative, member, member_result.label)
                inhomogeneous.append(len(rows))
                break

        rows.append(OrbitReport(
            representative,
            int(members.size),
            msc_core.subset_of(representative),
            rep_result.label,
            rep_result.field,
        ))
        representatives.append(representative)
        results.append(rep_result)
        if len(rows) % 50 == 0:
            logger.info("Census GF(%s): %s orbits so far", field.name, len(rows))

    total = sum(row.size for row in rows)
    logger.info("Census GF(%s): %s orbits covering %s matrices", field.name, len(rows), total)
    return CensusTable(
        field,
        tuple(rows),
        total,
        complete=sample is None,
        shared_labels=_shared_label_groups(field, representatives, results),
        inhomogeneous=tuple(inhomogeneous),
    )
