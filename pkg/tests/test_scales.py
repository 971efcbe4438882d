import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sclab.exceptions import DomainError
from sclab.scales import (
    PROVENANCE,
    Provenance,
    as_bracket,
    crossover_widths,
    g_of_alpha,
    hierarchy_report,
    interpolation_F,
    template_compatibility_F,
)


def test_g_of_alpha_reference_values():
    assert g_of_alpha(0.99) == pytest.approx(21.7, abs=0.05)
    assert g_of_alpha(0.992) == pytest.approx(25.9, abs=0.05)
    assert g_of_alpha(1 - 1 / math.e) == pytest.approx(math.e, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
def test_g_of_alpha_domain(alpha):
    with pytest.raises(DomainError):
        g_of_alpha(alpha)


def test_template_compatibility_values():
    assert template_compatibility_F(100) == pytest.approx(1000.0, rel=1e-14)
    assert template_compatibility_F(2048) == pytest.approx(92682, abs=1)
    assert template_compatibility_F(400) / template_compatibility_F(200) == pytest.approx(2**1.5)
    assert template_compatibility_F(100, s=2, C1=1, C2=2) == pytest.approx(4 * 1000 * 2**-2.5)


def test_template_condition_is_tight():
    # at the returned F the two sides of the compatibility inequality agree
    d, s, C1, C2 = 300.0, 3.0, 1.3, 0.7
    F = template_compatibility_F(d, s, C1, C2)
    assert C1 * s / math.sqrt(d) == pytest.approx(C2 * d**0.25 / (math.sqrt(F) * s**0.25), rel=1e-12)


def test_as_bracket_values():
    lo, hi = as_bracket(math.e**2)
    assert lo == pytest.approx(math.e**4 / 4, rel=1e-12)
    assert hi == pytest.approx(math.e**4 / 2, rel=1e-12)
    assert as_bracket(2304).upper == pytest.approx(686000, rel=0.01)
    assert as_bracket(2048).upper == pytest.approx(550200, rel=0.01)
    assert as_bracket(1152).upper == pytest.approx(188200, rel=0.01)
    assert "log-factor" in as_bracket(10).note
    with pytest.raises(DomainError):
        as_bracket(2)


def test_crossover_widths():
    dh, das = crossover_widths(0.99)
    assert dh == pytest.approx(472, abs=0.5)
    assert das / math.log(das) ** 2 == pytest.approx(g_of_alpha(0.99), rel=1e-10)
    assert crossover_widths(0.992)[0] == pytest.approx(670, abs=0.5)


def test_crossover_no_root():
    with pytest.raises(DomainError):
        crossover_widths(1 - 1e-15)


def test_interpolation_endpoints():
    assert interpolation_F(100) == pytest.approx(1000)
    assert interpolation_F(100, gamma=0.5) == pytest.approx(10000)
    with pytest.raises(DomainError):
        interpolation_F(100, gamma=0.6)


@settings(max_examples=50, deadline=None)
@given(d=st.floats(3, 1e6), gamma=st.floats(0, 0.5))
def test_interpolation_between_template_and_quadratic(d, gamma):
    F = interpolation_F(d, gamma=gamma)
    assert d**1.5 * (1 - 1e-12) <= F <= d**2 * (1 + 1e-12)


@settings(max_examples=50, deadline=None)
@given(n=st.floats(3, 1e8))
def test_as_bracket_ordered(n):
    lo, hi = as_bracket(n)
    assert lo <= hi


def test_provenance_tags():
    assert PROVENANCE["F_interp"] is Provenance.CONDITIONAL
    assert PROVENANCE["F_H_template"] is Provenance.PROVED_HERE
    assert PROVENANCE["F_AS_lower"] is Provenance.PROVED_IMPORTED
    assert PROVENANCE["g_alpha"] is Provenance.REFERENCE_ONLY


def test_hierarchy_d2048():
    rep = hierarchy_report(2048, 0.99)
    assert rep.F_CS == pytest.approx(2048 * 21.71, rel=1e-3)
    assert rep.F_CS == pytest.approx(44400, rel=0.01)
    assert rep.F_H_template == pytest.approx(92682, abs=1)
    assert rep.F_CS < rep.F_H_template
    assert ("F_CS", "F_H_template") not in rep.unseparated


def test_hierarchy_d100_flags_cs_above_template():
    rep = hierarchy_report(100, 0.99)
    assert rep.F_CS > rep.F_H_template
    assert ("F_CS", "F_H_template") in rep.unseparated
    assert not rep.ordering_holds


def test_hierarchy_large_d_fully_ordered():
    assert hierarchy_report(1e7, 0.99).ordering_holds


def test_hierarchy_report_serializes():
    rep = hierarchy_report(1152, 0.99, F_obs=9216)
    data = json.loads(rep.to_json())
    assert data["provenance"]["F_interp"] == "CONDITIONAL"
    table = rep.to_table()
    assert "39,100" in table and "188,262" in table and "0.24" in table
    assert "CONDITIONAL" in table


def test_hierarchy_domain():
    with pytest.raises(DomainError):
        hierarchy_report(2, 0.99)
    with pytest.raises(DomainError):
        hierarchy_report(100, 1.5)
