"""One PASS/FAIL line per acceptance criterion (printed even under capture).

Criterion 4 is recorded as unattainable with the genus-5 input as given: its
lift induces five cells rather than eight unimodular triangles. The check runs
unchanged and must keep reporting that; the same criterion is also run on the
A2 input, which meets it.
"""
import pytest

from tropants.regress import CRITERIA, genus5_structure, run_criterion

KNOWN_UNATTAINABLE = {4}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
        if number in KNOWN_UNATTAINABLE:
            print(f"  recorded as unattainable: {res.detail['messages'][0]}")
    if number in KNOWN_UNATTAINABLE:
        assert not res.ok
        assert res.detail["induced_cells"] == 5
        assert res.detail["checks"]["unimodular"] is False
    else:
        assert res.ok, res.detail


def test_genus5_criterion_on_a2_input(capsys):
    ok, detail = genus5_structure("genus5_a2")
    with capsys.disabled():
        print("\n" + ("PASS" if ok else "FAIL") + " criterion 4 on the A2 input")
    assert ok, detail
    assert detail["genus"] == 5 and detail["induced_cells"] == 8
