from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from talentflow.dates import Month, format_years, months_between, years_between


def test_parse_and_str_roundtrip():
    assert str(Month.parse("2017-03")) == "2017-03"
    assert Month.parse("2017-03") == Month(2017, 3)


@pytest.mark.parametrize("bad", ["2017-13", "2017-00", "17-03", "2017/03", "2017-3", "x"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        Month.parse(bad)


def test_ordering_is_chronological():
    assert Month(2017, 3) < Month(2017, 4) < Month(2018, 1)


def test_months_and_years_between():
    assert months_between(Month(2010, 6), Month(2013, 6)) == 36
    assert years_between(Month(2010, 6), Month(2013, 6)) == 3
    assert years_between(Month(2015, 1), Month(2015, 5)) == Fraction(1, 3)
    assert years_between(Month(2015, 1), Month(2014, 1)) == -1


def test_format_years_is_decimal():
    assert format_years(Fraction(1, 2)) == "0.5"
    assert format_years(Fraction(1, 3)) == "0.3333333333333333"


months = st.builds(Month, st.integers(min_value=1900, max_value=2100),
                   st.integers(min_value=1, max_value=12))


@given(months)
def test_str_parse_roundtrip(month):
    assert Month.parse(str(month)) == month


@given(months, months)
def test_ordinal_distance_matches_ordering(a, b):
    assert (months_between(a, b) > 0) == (b > a)
    assert months_between(a, b) == -months_between(b, a)
