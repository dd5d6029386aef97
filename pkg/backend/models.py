# backend/models.py
"""Immutable data model shared by the services, the routes and the CLI."""
import csv
import io
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from exceptions import FieldMismatchError, MalformedInputError
from services.fields import Field, FieldElement, embed, field_from_name

Pair = Tuple[FieldElement, FieldElement]

GENERAL = "general"
CHAR2 = "char2"
CHAR3 = "char3"
TRIVIAL = "trivial"
CHAR_CLASSES = (GENERAL, CHAR2, CHAR3)


def _check_same_field(field: Field, values: Sequence[Any], what: str) -> None:
    for value in values:
        if not isinstance(value, FieldElement):
            raise MalformedInputError(f"{what} entries must be field elements, got {value!r}")
        if value.field != field:
            raise FieldMismatchError(f"{what} mixes GF({value.field.name}) into GF({field.name})")


@dataclass(frozen=True)
class MSC:
    """Structure constants: row alpha holds the e1-coordinates of e_i e_j, row beta the e2-coordinates.

    Columns follow the basis pairs (1,1), (1,2), (2,1), (2,2).
    """

    field: Field
    alpha: Tuple[FieldElement, FieldElement, FieldElement, FieldElement]
    beta: Tuple[FieldElement, FieldElement, FieldElement, FieldElement]

    def __post_init__(self):
        if len(self.alpha) != 4 or len(self.beta) != 4:
            raise MalformedInputError("an MSC has two rows of four entries")
        _check_same_field(self.field, self.alpha + self.beta, "MSC")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]], strict: bool = False) -> "MSC":
        if len(rows) != 2 or any(not isinstance(row, (list, tuple)) or len(row) != 4 for row in rows):
            raise MalformedInputError("an MSC has two rows of four entries")
        convert = field.parse if strict else field
        alpha = tuple(convert(x) for x in rows[0])
        beta = tuple(convert(x) for x in rows[1])
        return cls(field, alpha, beta)

    @classmethod
    def zero(cls, field: Field) -> "MSC":
        return cls(field, (field.zero,) * 4, (field.zero,) * 4)

    @property
    def rows(self) -> Tuple[Tuple[FieldElement, ...], Tuple[FieldElement, ...]]:
        return self.alpha, self.beta

    def entries(self) -> Tuple[FieldElement, ...]:
        return self.alpha + self.beta

    def is_zero(self) -> bool:
        return not any(self.entries())

    def embed(self, target: Field) -> "MSC":
        if target == self.field:
            return self
        return MSC(
            target,
            tuple(embed(x, target) for x in self.alpha),
            tuple(embed(x, target) for x in self.beta),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.name,
            "entries": [[str(x) for x in self.alpha], [str(x) for x in self.beta]],
        }

    @classmethod
    def from_dict(cls, data: Any, field: Optional[Field] = None) -> "MSC":
        """Accept {"field": "p^k", "entries": [[...],[...]]} or a bare 2x4 list with an explicit field."""
        if isinstance(data, dict):
            if "entries" not in data:
                raise MalformedInputError("MSC payload needs an 'entries' list")
            if data.get("field") is not None:
                named = field_from_name(data["field"])
                if field is not None and named != field:
                    raise FieldMismatchError(f"payload field {named.name} differs from {field.name}")
                field = named
            rows = data["entries"]
        else:
            rows = data
        if field is None:
            raise MalformedInputError("MSC payload needs a field")
        if not isinstance(rows, (list, tuple)):
            raise MalformedInputError("MSC entries must be a 2x4 array")
        return cls.from_rows(field, rows, strict=True)

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.alpha)) + "; " + ", ".join(map(str, self.beta)) + ")"


@dataclass(frozen=True)
class GL2:
    """g = (a, b; c, d) together with g^-1 = (xi1, eta1; xi2, eta2)."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement
    xi1: FieldElement
    eta1: FieldElement
    xi2: FieldElement
    eta2: FieldElement

    def __post_init__(self):
        field = self.a.field
        _check_same_field(field, (self.b, self.c, self.d, self.xi1, self.eta1, self.xi2, self.eta2), "GL2")
        if not self.det:
            raise MalformedInputError("singular matrix is not in GL2")
        one, zero = field.one, field.zero
        product = (
            self.a * self.xi1 + self.b * self.xi2,
            self.a * self.eta1 + self.b * self.eta2,
            self.c * self.xi1 + self.d * self.xi2,
            self.c * self.eta1 + self.d * self.eta2,
        )
        if product != (one, zero, zero, one):
            raise MalformedInputError("stored inverse does not match the matrix")

    @classmethod
    def of(cls, field: Field, a, b, c, d) -> "GL2":
        a, b, c, d = field(a), field(b), field(c), field(d)
        det = a * d - b * c
        if not det:
            raise MalformedInputError("singular matrix is not in GL2")
        inv = det.inverse()
        return cls(a, b, c, d, d * inv, -b * inv, -c * inv, a * inv)

    @classmethod
    def from_inverse(cls, field: Field, xi1, eta1, xi2, eta2) -> "GL2":
        return cls.of(field, xi1, eta1, xi2, eta2).inverse()

    @classmethod
    def identity(cls, field: Field) -> "GL2":
        return cls.of(field, 1, 0, 0, 1)

    @property
    def field(self) -> Field:
        return self.a.field

    @property
    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> Tuple[Pair, Pair]:
        return (self.a, self.b), (self.c, self.d)

    @property
    def inverse_matrix(self) -> Tuple[Pair, Pair]:
        return (self.xi1, self.eta1), (self.xi2, self.eta2)

    def inverse(self) -> "GL2":
        return GL2(self.xi1, self.eta1, self.xi2, self.eta2, self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "GL2") -> "GL2":
        if not isinstance(other, GL2):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("GL2 product over different fields")
        # (g h)^-1 = h^-1 g^-1
        return GL2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            other.xi1 * self.xi1 + other.eta1 * self.xi2,
            other.xi1 * self.eta1 + other.eta1 * self.eta2,
            other.xi2 * self.xi1 + other.eta2 * self.xi2,
            other.xi2 * self.eta1 + other.eta2 * self.eta2,
        )

    def apply(self, u: Pair) -> Pair:
        return self.a * u[0] + self.b * u[1], self.c * u[0] + self.d * u[1]

    def embed(self, target: Field) -> "GL2":
        if target == self.field:
            return self
        return GL2(*(embed(x, target) for x in (self.a, self.b, self.c, self.d,
                                                 self.xi1, self.eta1, self.xi2, self.eta2)))

    def to_rows(self) -> List[List[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]]) -> "GL2":
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise MalformedInputError("a GL2 witness is a 2x2 array")
        (a, b), (c, d) = rows
        return cls.of(field, field.parse(a), field.parse(b), field.parse(c), field.parse(d))


@dataclass(frozen=True)
class TracePair:
    tr1: Pair
    tr2: Pair


@dataclass(frozen=True)
class SubsetInfo:
    index: int
    lam: Optional[FieldElement] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "lambda": None if self.lam is None else str(self.lam)}


@dataclass(frozen=True)
class FamilyLabel:
    char_class: str
    family: int
    params: Tuple[FieldElement, ...] = ()

    @classmethod
    def trivial(cls) -> "FamilyLabel":
        return cls(TRIVIAL, 0, ())

    @property
    def is_trivial(self) -> bool:
        return self.char_class == TRIVIAL

    @property
    def name(self) -> str:
        return "trivial" if self.is_trivial else f"A{self.family}"

    def key(self) -> Tuple[Any, ...]:
        return self.char_class, self.family, tuple(str(x) for x in self.params)

    def to_dict(self) -> Dict[str, Any]:
        return {"class": self.char_class, "family": self.family, "params": [str(x) for x in self.params]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], field: Field) -> "FamilyLabel":
        try:
            return cls(data["class"], int(data["family"]), tuple(field.parse(x) for x in data.get("params", [])))
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"bad label payload: {e}")

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return f"{self.char_class}/{self.name}(" + ", ".join(map(str, self.params)) + ")"


@dataclass(frozen=True)
class ClassResult:
    label: FamilyLabel
    witness: GL2
    field: Field
    canonical: MSC

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label.to_dict(),
            "field": self.field.name,
            "witness": self.witness.to_rows(),
            "canonical": self.canonical.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassResult":
        field = field_from_name(data["field"])
        return cls(
            FamilyLabel.from_dict(data["label"], field),
            GL2.from_rows(field, data["witness"]),
            field,
            MSC.from_dict(data["canonical"]),
        )


@dataclass(frozen=True)
class OrbitReport:
    representative: MSC
    size: int
    subset: SubsetInfo
    label: FamilyLabel
    label_field: Field

    def to_dict(self) -> Dict[str, Any]:
        return {
            "representative": self.representative.to_dict(),
            "size": self.size,
            "subset": self.subset.to_dict(),
            "label": self.label.to_dict(),
            "labelField": self.label_field.name,
        }


@dataclass(frozen=True)
class CensusTable:
    field: Field
    rows: Tuple[OrbitReport, ...]
    total: int
    complete: bool = True
    shared_labels: Tuple[Tuple[int, ...], ...] = ()
    inhomogeneous: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.name,
            "total": self.total,
            "complete": self.complete,
            "orbits": len(self.rows),
            "rows": [row.to_dict() for row in self.rows],
            "sharedLabels": [list(group) for group in self.shared_labels],
            "inhomogeneous": list(self.inhomogeneous),
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["representative", "size", "subset", "class", "family", "params", "label_field"])
        for row in self.rows:
            writer.writerow([
                str(row.representative),
                row.size,
                row.subset.index,
                row.label.char_class,
                row.label.family,
                " ".join(str(x) for x in row.label.params),
                row.label_field.name,
            ])
        return out.getvalue()


@dataclass(frozen=True)
class SuiteReport:
    name: str
    passed: int
    failed: int
    failures: Tuple[str, ...] = ()
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "failures": list(self.failures),
        }
