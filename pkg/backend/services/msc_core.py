# backend/services/msc_core.py
"""The GL(2) action on structure constants, trace invariants and the subset split."""
import logging
from typing import List, Tuple

from exceptions import FieldMismatchError
from models import GL2, MSC, SubsetInfo, TracePair
from services.fields import FieldElement

logger = logging.getLogger(__name__)

Matrix = List[List[FieldElement]]


def kron2(g: GL2) -> Matrix:
    """(g^-1) tensor (g^-1): entry [(i,j),(k,l)] = h_ik * h_jl with h = g^-1."""
    h = g.inverse_matrix
    pairs = ((0, 0), (0, 1), (1, 0), (1, 1))
    return [[h[i][k] * h[j][l] for (k, l) in pairs] for (i, j) in pairs]


def transform(A: MSC, g: GL2) -> MSC:
    """g A (g^-1 tensor g^-1), by plain matrix products."""
    if g.field != A.field:
        raise FieldMismatchError(f"GL2 over GF({g.field.name}) acting on MSC over GF({A.field.name})")
    K = kron2(g)
    zero = A.field.zero
    rows = A.rows
    AK = []
    for row in rows:
        out = []
        for col in range(4):
            acc = zero
            for m in range(4):
                if row[m]:
                    acc = acc + row[m] * K[m][col]
            out.append(acc)
        AK.append(out)
    g_rows = g.matrix
    alpha = tuple(g_rows[0][0] * AK[0][col] + g_rows[0][1] * AK[1][col] for col in range(4))
    beta = tuple(g_rows[1][0] * AK[0][col] + g_rows[1][1] * AK[1][col] for col in range(4))
    return MSC(A.field, alpha, beta)


def opposite(A: MSC) -> MSC:
    """The algebra with product x*y := y x (columns 2 and 3 exchanged)."""
    a, b = A.alpha, A.beta
    return MSC(A.field, (a[0], a[2], a[1], a[3]), (b[0], b[2], b[1], b[3]))


def traces(A: MSC) -> TracePair:
    a1, a2, a3, a4 = A.alpha
    b1, b2, b3, b4 = A.beta
    return TracePair((a1 + b3, a2 + b4), (a1 + b2, a3 + b4))


def subset_of(A: MSC) -> SubsetInfo:
    tp = traces(A)
    tr1, tr2 = tp.tr1, tp.tr2
    tr1_zero = not (tr1[0] or tr1[1])
    tr2_zero = not (tr2[0] or tr2[1])
    if tr1_zero and tr2_zero:
        return SubsetInfo(5)
    if tr1_zero:
        return SubsetInfo(4)
    if tr2_zero:
        return SubsetInfo(3, A.field.zero)
    if tr1[0] * tr2[1] - tr1[1] * tr2[0]:
        return SubsetInfo(1)
    i = 0 if tr1[0] else 1
    return SubsetInfo(2, tr2[i] / tr1[i])


def p_matrix(A: MSC) -> Tuple[Tuple[Tuple[FieldElement, FieldElement], Tuple[FieldElement, FieldElement]], FieldElement]:
    """P(A) with rows Tr1, Tr2, and its determinant."""
    tp = traces(A)
    a1, a2, a3, a4 = A.alpha
    b1, b2, b3, b4 = A.beta
    delta = a1 * (a3 - a2) + b4 * (b3 - b2) + a3 * b3 - a2 * b2
    return (tp.tr1, tp.tr2), delta


def multiply(A: MSC, u: Tuple[FieldElement, FieldElement], v: Tuple[FieldElement, FieldElement]) -> Tuple[FieldElement, FieldElement]:
    """Coordinates of u*v: A (u1v1, u1v2, u2v1, u2v2)^T."""
    field = A.field
    u = (field(u[0]), field(u[1]))
    v = (field(v[0]), field(v[1]))
    tensor = (u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1])
    first = field.zero
    second = field.zero
    for m in range(4):
        first = first + A.alpha[m] * tensor[m]
        second = second + A.beta[m] * tensor[m]
    return first, second
