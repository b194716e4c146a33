import numpy as np
import pytest

from specialkahler.errors import ModelFileError
from specialkahler.local import LocalPrepotentialModel, LocalSectionModel
from specialkahler.modelfile import load_model, parse_box, parse_complex, parse_model_text
from specialkahler.rigid import RigidPrepotentialModel, RigidSectionModel

LOCAL = """
# the worked example
[metadata]
name = "example"   # trailing comment
flavor = "local"

[variables]
names = "z"
base_point = "1"

[local]
fields = "X0", "X1"
prepotential = "-i*X0*X1"
coords = "1", "z"

[scan]
box = "0.1:3, -2:2"
"""


def test_parse_local_prepotential():
    d = parse_model_text(LOCAL)
    assert d.name == "example" and d.flavor == "local" and d.kind == "prepotential"
    assert d.variables == ("z",) and d.base_point == (1 + 0j,)
    assert d.boxes == ((0.1, 3.0, -2.0, 2.0),)
    assert isinstance(d.build(), LocalPrepotentialModel)
    assert isinstance(d.build_section(), LocalSectionModel)


@pytest.mark.parametrize("flavor, body, cls", [
    ("rigid", 'fields = "X1"\nprepotential = "0.5*i*X1^2"\ncoords = "z"', RigidPrepotentialModel),
    ("rigid", 'section = "z", "i*z"', RigidSectionModel),
    ("local", 'section = "1", "i", "-i*z", "z"', LocalSectionModel),
])
def test_each_model_kind(flavor, body, cls):
    text = f'[metadata]\nname = "m"\nflavor = "{flavor}"\n[variables]\nnames = "z"\nbase_point = "1"\n[{flavor}]\n{body}\n'
    assert isinstance(parse_model_text(text).build(), cls)


def test_custom_symplectic_form():
    text = ('[metadata]\nname = "m"\nflavor = "rigid"\n[variables]\nnames = "z"\n[rigid]\n'
            'section = "z", "i*z"\nomega = "0 2; -2 0"\n')
    d = parse_model_text(text)
    np.testing.assert_array_equal(d.omega, [[0, 2], [-2, 0]])
    assert not d.build().frame.is_canonical
    assert parse_model_text(d.to_text()).to_text() == d.to_text()


@pytest.mark.parametrize("text, line, fragment", [
    ('[metadata]\nname = "m"\nflavor = "local"\n[variables]\nnames = "z"\n[local]\nsection = "1", "z+", "1", "2"\n',
     7, "position"),
    ('[metadata]\nname = "m"\nflavor = "other"\n', 3, "flavor"),
    ('[metadata]\nname = m\n', 2, "double-quoted"),
    ('name = "m"\n', 1, "outside"),
    ('[metadata]\nname = "m"\n[bogus]\n', 3, "unknown section"),
    ('[metadata]\nname = "m"\ncolor = "red"\n', 3, "unknown key"),
    ('[metadata]\nname = "m"\nname = "n"\n', 3, "duplicate"),
    ('[metadata]\nname = "m"\nflavor = "local"\n[variables]\nnames = "z"\nbase_point = "1", "2"\n[local]\n'
     'section = "1", "z", "1", "z"\n', 6, "one value per variable"),
    ('[metadata]\nname = "m"\nflavor = "local"\n[variables]\nnames = "z"\n[local]\nsection = "1", "w", "1", "z"\n',
     7, "w"),
    ('[metadata]\nname = "m"\nflavor = "rigid"\n[variables]\nnames = "z"\n[rigid]\nsection = "z", "z"\n'
     '[scan]\nbox = "1:0, 0:1"\n', 9, "empty box"),
    ('[metadata]\nname = "m"\nflavor = "rigid"\n[variables]\nnames = "z"\n[rigid]\nsection = "z", "z"\n'
     'omega = "1 0; 0 1"\n', 8, "omega"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ModelFileError) as info:
        parse_model_text(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}:")


def test_missing_pieces():
    with pytest.raises(ModelFileError):
        parse_model_text('[metadata]\nname = "m"\nflavor = "local"\n[variables]\nnames = "z"\n')
    with pytest.raises(ModelFileError):
        parse_model_text('[metadata]\nname = "m"\nflavor = "local"\n[variables]\nnames = "z"\n[local]\n'
                         'section = "1", "z", "1", "z"\nprepotential = "X0"\n')


def test_hash_inside_quotes_is_not_a_comment():
    text = LOCAL.replace('name = "example"', 'name = "model #1"')
    assert parse_model_text(text).name == "model #1"


def test_load_from_file(tmp_path):
    path = tmp_path / "m.skm"
    path.write_text(LOCAL)
    assert load_model(path).name == "example"


def test_small_parsers():
    assert parse_complex("2+i") == 2 + 1j
    assert parse_complex("-0.5i") == -0.5j
    assert parse_box(" -1:1 , 0:2") == (-1, 1, 0, 2)
    with pytest.raises(ValueError):
        parse_box("1:2")


def test_digest_changes_with_content():
    a = parse_model_text(LOCAL)
    b = parse_model_text(LOCAL.replace("-i*X0*X1", "-2i*X0*X1"))
    assert a.digest != b.digest
