import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptions import FieldMismatchError, MalformedInputError
from models import GL2, MSC
from services import msc_core
from services.fields import field_create
from tests.strategies import elements, field_msc_gl2, fields, gl2s, mscs, nonzero_elements, pairs


def _row_times(row, h):
    return row[0] * h[0][0] + row[1] * h[1][0], row[0] * h[0][1] + row[1] * h[1][1]


class TestKron2:
    def test_identity(self, gf7):
        K = msc_core.kron2(GL2.identity(gf7))
        assert K == [[1 if i == j else 0 for j in range(4)] for i in range(4)]

    def test_swap_is_a_permutation(self, gf7):
        K = msc_core.kron2(GL2.of(gf7, 0, 1, 1, 0))
        assert K == [
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [1, 0, 0, 0],
        ]

    def test_diagonal(self, gf7):
        s, t = gf7(2), gf7(3)
        # kron2 takes the inverse part: g = diag(1/s, 1/t) has g^-1 = diag(s, t)
        K = msc_core.kron2(GL2.of(gf7, s.inverse(), 0, 0, t.inverse()))
        diagonal = [K[i][i] for i in range(4)]
        assert diagonal == [s * s, s * t, s * t, t * t]
        assert all(K[i][j] == 0 for i in range(4) for j in range(4) if i != j)


class TestTransform:
    def test_swap_moves_e2e2(self):
        gf5 = field_create(5)
        A = MSC.from_rows(gf5, [[0, 0, 0, 0], [1, 0, 0, 0]])
        B = msc_core.transform(A, GL2.of(gf5, 0, 1, 1, 0))
        assert B == MSC.from_rows(gf5, [[0, 0, 0, 1], [0, 0, 0, 0]])

    def test_field_mismatch(self, gf7, gf3):
        with pytest.raises(FieldMismatchError):
            msc_core.transform(MSC.zero(gf7), GL2.identity(gf3))

    @given(st.data())
    def test_identity_law(self, data):
        field = data.draw(fields())
        A = data.draw(mscs(field))
        assert msc_core.transform(A, GL2.identity(field)) == A

    @given(st.data())
    def test_composition_law(self, data):
        field = data.draw(fields())
        A, g, h = data.draw(mscs(field)), data.draw(gl2s(field)), data.draw(gl2s(field))
        assert msc_core.transform(msc_core.transform(A, g), h) == msc_core.transform(A, h @ g)

    @given(field_msc_gl2())
    def test_inverse_undoes(self, case):
        field, A, g = case
        assert msc_core.transform(msc_core.transform(A, g), g.inverse()) == A

    @given(field_msc_gl2())
    def test_trace_identities(self, case):
        field, A, g = case
        before, after = msc_core.traces(A), msc_core.traces(msc_core.transform(A, g))
        assert after.tr1 == _row_times(before.tr1, g.inverse_matrix)
        assert after.tr2 == _row_times(before.tr2, g.inverse_matrix)

    @given(st.data())
    def test_multiply_is_coherent_with_change_of_basis(self, data):
        field = data.draw(fields())
        A, g = data.draw(mscs(field)), data.draw(gl2s(field))
        u, v = data.draw(pairs(field)), data.draw(pairs(field))
        B = msc_core.transform(A, g)
        h = g.inverse()
        assert g.apply(msc_core.multiply(A, h.apply(u), h.apply(v))) == msc_core.multiply(B, u, v)


class TestOpposite:
    @given(field_msc_gl2())
    def test_commutes_with_transform(self, case):
        field, A, g = case
        assert msc_core.opposite(msc_core.transform(A, g)) == msc_core.transform(msc_core.opposite(A), g)

    @given(st.data())
    def test_exchanges_traces_and_is_an_involution(self, data):
        field = data.draw(fields())
        A = data.draw(mscs(field))
        op = msc_core.opposite(A)
        assert msc_core.traces(op).tr1 == msc_core.traces(A).tr2
        assert msc_core.traces(op).tr2 == msc_core.traces(A).tr1
        assert msc_core.opposite(op) == A


class TestTraces:
    def test_family_1_member(self, gf7):
        A = MSC.from_rows(gf7, [[3, 2, 3, 5], [6, -3, -2, -2]])
        tp = msc_core.traces(A)
        assert tp.tr1 == (1, 0)
        assert tp.tr2 == (0, 1)

    def test_family_10(self, gf7):
        tp = msc_core.traces(MSC.from_rows(gf7, [[0, 1, 1, 0], [0, 0, 0, -1]]))
        assert tp.tr1 == (0, 0) and tp.tr2 == (0, 0)

    def test_zero(self, gf7):
        tp = msc_core.traces(MSC.zero(gf7))
        assert tp.tr1 == (0, 0) and tp.tr2 == (0, 0)


class TestSubsets:
    def test_family_2_member(self, gf7):
        # (a1, 0, 0, 1; b1, b2, 1 - a1, 0) with a1 + b2 = 5
        A = MSC.from_rows(gf7, [[2, 0, 0, 1], [4, 3, -1, 0]])
        info = msc_core.subset_of(A)
        assert info.index == 2
        assert info.lam == 5

    def test_lambda_zero_is_subset_3(self, gf7):
        A = MSC.from_rows(gf7, [[2, 0, 0, 1], [4, -2, -1, 0]])
        info = msc_core.subset_of(A)
        assert info.index == 3 and info.lam == 0

    def test_family_6_member(self, gf7):
        A = MSC.from_rows(gf7, [[3, 0, 0, 1], [2, -2, -3, 0]])
        assert msc_core.subset_of(A).index == 4

    def test_zero_is_subset_5(self, gf7):
        assert msc_core.subset_of(MSC.zero(gf7)).index == 5

    def test_family_1_is_subset_1(self, gf7):
        A = MSC.from_rows(gf7, [[3, 2, 3, 5], [6, -3, -2, -2]])
        assert msc_core.subset_of(A).index == 1

    def test_lambda_uses_second_coordinate_when_first_vanishes(self, gf7):
        # tr1 = (0, 1), tr2 = (0, 3)
        A = MSC.from_rows(gf7, [[0, 1, 3, 0], [0, 0, 0, 0]])
        info = msc_core.subset_of(A)
        assert info.index == 2 and info.lam == 3

    @given(field_msc_gl2())
    def test_subset_and_lambda_are_invariant(self, case):
        field, A, g = case
        assert msc_core.subset_of(msc_core.transform(A, g)) == msc_core.subset_of(A)


class TestPMatrix:
    def test_family_1_member(self, gf7):
        A = MSC.from_rows(gf7, [[3, 2, 3, 5], [6, -3, -2, -2]])
        P, delta = msc_core.p_matrix(A)
        assert P == ((1, 0), (0, 1))
        assert delta == 1

    def test_zero(self, gf7):
        P, delta = msc_core.p_matrix(MSC.zero(gf7))
        assert P == ((0, 0), (0, 0))
        assert delta == 0

    @given(st.data())
    def test_delta_is_the_determinant(self, data):
        field = data.draw(fields())
        A = data.draw(mscs(field))
        (tr1, tr2), delta = msc_core.p_matrix(A)
        assert delta == tr1[0] * tr2[1] - tr1[1] * tr2[0]


class TestMultiply:
    def test_first_column(self, gf7):
        A = MSC.from_rows(gf7, [[3, 2, 1, 5], [6, 4, 0, 2]])
        assert msc_core.multiply(A, (1, 0), (1, 0)) == (3, 6)
        assert msc_core.multiply(A, (1, 0), (0, 1)) == (2, 4)
        assert msc_core.multiply(A, (0, 1), (1, 0)) == (1, 0)
        assert msc_core.multiply(A, (0, 1), (0, 1)) == (5, 2)


def _trace_one_zero(field, a1, a2, a4, b1, b2):
    """Tr1 = (1, 0) and Tr2 proportional to it: a3 = a2, b3 = 1 - a1, b4 = -a2."""
    return MSC(field, (a1, a2, a2, a4), (b1, b2, 1 - a1, -a2))


def _traceless(field, a1, a2, a4, b1):
    """Both traces zero: a3 = a2, b2 = b3 = -a1, b4 = -a2."""
    return MSC(field, (a1, a2, a2, a4), (b1, -a1, -a1, -a2))


class TestClosedForms:
    """Scalar formulas for the residual changes of basis, checked against transform."""

    @given(st.data())
    def test_subset23_residual(self, data):
        field = data.draw(fields([(5, 1), (7, 1), (11, 1), (3, 2), (2, 2)]))
        a1, a2, a4, b1, b2, s = (data.draw(elements(field)) for _ in range(6))
        t = data.draw(nonzero_elements(field))
        A = _trace_one_zero(field, a1, a2, a4, b1, b2)
        lam = msc_core.traces(A).tr2[0]
        B = msc_core.transform(A, GL2.from_inverse(field, 1, 0, s, t))
        assert B.alpha[0] == a1 + 2 * a2 * s + a4 * s * s
        assert B.alpha[1] == t * (a2 + a4 * s)
        assert B.alpha[3] == t * t * a4
        assert B.beta[0] == (b1 + (1 + lam - 3 * a1) * s - 3 * a2 * s * s - a4 * s ** 3) / t

    @given(st.data())
    def test_subcase_beta1_formula(self, data):
        field = data.draw(fields([(5, 1), (7, 1), (11, 1), (13, 1)]))
        a1, b1, b2 = (data.draw(elements(field)) for _ in range(3))
        a2 = data.draw(nonzero_elements(field))
        A = _trace_one_zero(field, a1, a2, field.zero, b1, b2)
        lam = msc_core.traces(A).tr2[0]
        B = msc_core.transform(A, GL2.from_inverse(field, 1, 0, -a1 / (2 * a2), a2.inverse()))
        assert B.alpha[0] == 0
        assert B.alpha[1] == 1
        assert B.beta[0] == a2 * b1 - (2 + 2 * lam - 3 * a1) / 4 * a1

    @given(st.data())
    def test_subset5_alpha4(self, data):
        field = data.draw(fields([(5, 1), (7, 1), (3, 1), (2, 2), (3, 2)]))
        a1, a2, a4, b1 = (data.draw(elements(field)) for _ in range(4))
        A = _traceless(field, a1, a2, a4, b1)
        g = data.draw(gl2s(field))
        eta1, eta2 = g.eta1, g.eta2
        cubic = b1 * eta1 ** 3 - 3 * a1 * eta1 ** 2 * eta2 - 3 * a2 * eta1 * eta2 ** 2 - a4 * eta2 ** 3
        assert msc_core.transform(A, g).alpha[3] == -cubic / g.inverse().det

    @given(st.data())
    def test_subset5_with_eta1_zero(self, data):
        field = data.draw(fields([(5, 1), (7, 1), (3, 1), (2, 2), (3, 2)]))
        a1, a2, b1, xi2 = (data.draw(elements(field)) for _ in range(4))
        xi1, eta2 = data.draw(nonzero_elements(field)), data.draw(nonzero_elements(field))
        A = _traceless(field, a1, a2, field.zero, b1)
        B = msc_core.transform(A, GL2.from_inverse(field, xi1, 0, xi2, eta2))
        assert B.alpha[0] == a1 * xi1 + 2 * a2 * xi2
        assert B.alpha[1] == a2 * eta2
        assert B.beta[0] == (b1 * xi1 * xi1 - 3 * a1 * xi1 * xi2 - 3 * a2 * xi2 * xi2) / eta2


class TestModels:
    def test_gl2_rejects_singular(self, gf7):
        with pytest.raises(MalformedInputError):
            GL2.of(gf7, 1, 2, 2, 4)

    def test_gl2_rejects_wrong_inverse(self, gf7):
        one, zero = gf7.one, gf7.zero
        with pytest.raises(MalformedInputError):
            GL2(one, zero, zero, one, one, one, zero, one)

    def test_msc_arity(self, gf7):
        with pytest.raises(MalformedInputError):
            MSC.from_rows(gf7, [[1, 2, 3], [4, 5, 6, 0]])

    def test_msc_from_dict(self, gf9):
        A = MSC.from_dict({"field": "3^2", "entries": [["1,2", 0, 0, 1], [0, "2", 0, "0,1"]]})
        assert A.field is gf9
        assert A.alpha[0] == gf9.parse("1,2")
        assert MSC.from_dict(A.to_dict()) == A

    def test_msc_from_dict_rejects_out_of_range(self, gf7):
        with pytest.raises(ValueError):
            MSC.from_dict([[7, 0, 0, 0], [0, 0, 0, 0]], gf7)
