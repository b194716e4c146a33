import numpy as np
import pytest

from specialkahler.catalog import catalog_entries, catalog_get, catalog_names, check_entry
from specialkahler.local import prepotential_exists
from specialkahler.modelfile import parse_model_text


def test_required_entries_present():
    names = catalog_names()
    for required in ("paper-n1", "paper-n1-dual", "stu", "rigid-quadratic"):
        assert required in names
    assert sum(e.flavor == "rigid" for e in catalog_entries()) >= 3


def test_unknown_name_lists_available():
    with pytest.raises(KeyError) as info:
        catalog_get("nope")
    assert "paper-n1" in str(info.value)


@pytest.mark.parametrize("name", catalog_names())
def test_expected_values_reproduce(name):
    results = check_entry(catalog_get(name))
    assert results
    failed = [(r.expected.quantity, r.expected.point, r.error) for r in results if not r.passed]
    assert not failed


@pytest.mark.parametrize("name", catalog_names())
def test_entries_serialize_to_model_files(name):
    entry = catalog_get(name)
    text = entry.to_text()
    again = parse_model_text(text)
    assert again.to_text() == text
    assert again.digest == entry.model.digest
    a, b = entry.model.build_section(), again.build_section()
    z = entry.base_point
    np.testing.assert_array_equal(a.values(z), b.values(z))


def test_worked_example_entry_table():
    entry = catalog_get("paper-n1")
    assert entry.prepotential == "-i*X0*X1"
    assert entry.coords == ("1", "z")
    kin = [e for e in entry.expected if e.quantity == "kinetic" and e.point == (1 + 0j,)]
    np.testing.assert_allclose(kin[0].value, np.diag([-1j, -1j]))
    assert all(e.provenance == "paper" for e in entry.expected)


def test_dual_entry_has_no_prepotential():
    entry = catalog_get("paper-n1-dual")
    assert entry.model.kind == "section"
    assert not prepotential_exists(entry.model.build_section(), 1)


def test_stu_provenance_tag():
    assert catalog_get("stu").provenance == "non-paper"


def test_rigid_quadratic_metric():
    entry = catalog_get("rigid-quadratic")
    g = [e for e in entry.expected if e.quantity == "metric"][0]
    assert g.value[0, 0] == 2
