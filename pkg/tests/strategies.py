from hypothesis import strategies as st

from models import GL2, MSC
from services.fields import field_create

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)]


def fields(choices=SMALL_FIELDS):
    return st.sampled_from(choices).map(lambda pk: field_create(*pk))


def elements(field):
    return st.integers(min_value=0, max_value=field.order - 1).map(field.element_at)


def nonzero_elements(field):
    return st.integers(min_value=1, max_value=field.order - 1).map(field.element_at)


def mscs(field):
    return st.lists(elements(field), min_size=8, max_size=8).map(
        lambda values: MSC(field, tuple(values[:4]), tuple(values[4:]))
    )


def gl2s(field):
    return (
        st.lists(elements(field), min_size=4, max_size=4)
        .filter(lambda v: v[0] * v[3] - v[1] * v[2])
        .map(lambda v: GL2.of(field, *v))
    )


def pairs(field):
    return st.tuples(elements(field), elements(field))


@st.composite
def field_and_msc(draw, choices=SMALL_FIELDS):
    field = draw(fields(choices))
    return field, draw(mscs(field))


@st.composite
def field_msc_gl2(draw, choices=SMALL_FIELDS):
    field = draw(fields(choices))
    return field, draw(mscs(field)), draw(gl2s(field))
