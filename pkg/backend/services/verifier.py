# backend/services/verifier.py
"""Named property suites behind `cli verify`.

Each suite draws from its own seeded random.Random, so a report is reproducible
from (suite, field, samples, seed) alone.
"""
import logging
import random
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import config
from exceptions import ExtensionCapError, MalformedInputError
from models import GL2, MSC, FamilyLabel, SuiteReport
from services import canonicalizer, msc_core, oracle
from services.fields import Field, FieldElement, field_from_name

logger = logging.getLogger(__name__)

DEFAULT_FIELDS = ("7^1", "2^3", "3^2")
SUITE_FIELDS = {
    "bridges": ("7^1", "2^1", "3^1"),
    "census": ("2^1",),
}
MAX_REPORTED_FAILURES = 20


def random_element(field: Field, rng: random.Random) -> FieldElement:
    return field.element_at(rng.randrange(field.order))


def random_msc(field: Field, rng: random.Random) -> MSC:
    values = [random_element(field, rng) for _ in range(8)]
    return MSC(field, tuple(values[:4]), tuple(values[4:]))


def random_gl2(field: Field, rng: random.Random) -> GL2:
    while True:
        a, b, c, d = (random_element(field, rng) for _ in range(4))
        if a * d - b * c:
            return GL2.of(field, a, b, c, d)


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.passed = 0
        self.failed = 0
        self.skipped = 0
        self.failures: List[str] = []

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(describe())

    def skip(self, reason: str) -> None:
        self.skipped += 1
        logger.debug("Skipped in %s: %s", self.name, reason)

    def report(self) -> SuiteReport:
        return SuiteReport(self.name, self.passed, self.failed, tuple(self.failures), self.skipped)


def _row_times(row, h) -> tuple:
    return row[0] * h[0][0] + row[1] * h[1][0], row[0] * h[0][1] + row[1] * h[1][1]


def check_traces(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    """Tr1 and Tr2 of transform(A, g) are those of A times g^-1."""
    for _ in range(samples):
        A, g = random_msc(field, rng), random_gl2(field, rng)
        before, after = msc_core.traces(A), msc_core.traces(msc_core.transform(A, g))
        h = g.inverse_matrix
        ok = after.tr1 == _row_times(before.tr1, h) and after.tr2 == _row_times(before.tr2, h)
        tally.check(ok, lambda: f"GF({field.name}) traces of {A} under {g.to_rows()}")


def check_action(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    identity = GL2.identity(field)
    for _ in range(samples):
        A = random_msc(field, rng)
        g1, g2 = random_gl2(field, rng), random_gl2(field, rng)
        tally.check(msc_core.transform(A, identity) == A, lambda: f"GF({field.name}) identity moved {A}")
        composed = msc_core.transform(msc_core.transform(A, g1), g2) == msc_core.transform(A, g2 @ g1)
        tally.check(composed, lambda: f"GF({field.name}) composition law fails for {A}")

        # new coordinates of a product, computed in either basis
        B = msc_core.transform(A, g1)
        h = g1.inverse()
        u = (random_element(field, rng), random_element(field, rng))
        v = (random_element(field, rng), random_element(field, rng))
        coherent = g1.apply(msc_core.multiply(A, h.apply(u), h.apply(v))) == msc_core.multiply(B, u, v)
        tally.check(coherent, lambda: f"GF({field.name}) multiply incoherent for {A}")


def check_subset1(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    """Under g = P(A) a subset-1 matrix takes the shape of family 1."""
    done = 0
    while done < samples:
        A = random_msc(field, rng)
        (tr1, tr2), delta = msc_core.p_matrix(A)
        if not delta:
            continue
        done += 1
        B = msc_core.transform(A, GL2.of(field, tr1[0], tr1[1], tr2[0], tr2[1]))
        a1, a2, a3, a4 = B.alpha
        b1, b2, b3, b4 = B.beta
        ok = a1 == -b2 and a3 == a2 + 1 and b3 == b2 + 1 and b4 == -a2
        tally.check(ok, lambda: f"GF({field.name}) {A} gave {B}")


def check_invariance(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    for _ in range(samples):
        A, g = random_msc(field, rng), random_gl2(field, rng)
        B = msc_core.transform(A, g)
        try:
            result_a, result_b = canonicalizer.canonicalize(A), canonicalizer.canonicalize(B)
            ok = canonicalizer.labels_agree(A, result_a, B, result_b)
        except ExtensionCapError as e:
            tally.skip(str(e))
            continue
        tally.check(ok, lambda: f"GF({field.name}) {A} -> {result_a.label} but {B} -> {result_b.label}")


def check_witness(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    for _ in range(samples):
        A = random_msc(field, rng)
        try:
            result = canonicalizer.canonicalize(A)
        except ExtensionCapError as e:
            tally.skip(str(e))
            continue
        image = msc_core.transform(A.embed(result.field), result.witness)
        expected = canonicalizer.materialize(result.label, result.field)
        tally.check(image == expected == result.canonical, lambda: f"GF({field.name}) witness for {A} gives {image}")


def check_idempotence(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    for label in canonicalizer.family_grid(field):
        result = canonicalizer.canonicalize(canonicalizer.materialize(label, field))
        tally.check(result.label == label, lambda: f"GF({field.name}) {label} came back as {result.label}")


def check_bridges(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    target = canonicalizer.materialize(FamilyLabel(canonicalizer.char_class_of(field), 10), field)
    image = msc_core.transform(canonicalizer.bridge_source(field), canonicalizer.bridge_witness(field))
    tally.check(image == target, lambda: f"GF({field.name}) bridge witness gives {image}")


def check_census(tally: _Tally, field: Field, samples: int, rng: random.Random) -> None:
    sample = None if field.order <= config.CENSUS_MAX_Q else samples
    table = oracle.census(field, sample=sample, seed=rng.randrange(2 ** 31))
    bad = set(table.inhomogeneous)
    for i, row in enumerate(table.rows):
        tally.check(i not in bad, lambda: f"GF({field.name}) orbit of {row.representative} is not label-homogeneous")
    if sample is None:
        tally.check(table.total == field.order ** 8, lambda: f"GF({field.name}) census covered {table.total} matrices")


SUITES: Dict[str, Callable[[_Tally, Field, int, random.Random], None]] = {
    "traces": check_traces,
    "action": check_action,
    "subset1": check_subset1,
    "invariance": check_invariance,
    "witness": check_witness,
    "idempotence": check_idempotence,
    "bridges": check_bridges,
    "census": check_census,
}


def run_suite(name: str, fields: Sequence[Field], samples: int, seed: int) -> SuiteReport:
    check = SUITES[name]
    tally = _Tally(name)
    for field in fields:
        logger.info("Suite %s over GF(%s)", name, field.name)
        rng = random.Random(f"{seed}:{name}:{field.name}")
        check(tally, field, samples, rng)
    report = tally.report()
    if not report.ok:
        logger.warning("Suite %s: %s failures", name, report.failed)
    return report


def run_suites(
    names: Optional[Iterable[str]] = None,
    fields: Optional[Sequence[Field]] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[SuiteReport]:
    """Run the named suites (all by default) and return one report each.

    Without explicit fields each suite uses its own default fields.
    """
    samples = config.DEFAULT_SAMPLES if samples is None else samples
    seed = config.DEFAULT_SEED if seed is None else seed
    reports = []
    for name in names or SUITES:
        if name not in SUITES:
            raise MalformedInputError(f"unknown suite {name!r}, expected one of {', '.join(SUITES)}")
        suite_fields = fields or [field_from_name(n) for n in SUITE_FIELDS.get(name, DEFAULT_FIELDS)]
        reports.append(run_suite(name, suite_fields, samples, seed))
    return reports
