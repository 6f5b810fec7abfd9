import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logitprior.io import config_hash, csv_text, provenance_line, read_csv, write_csv


def test_provenance():
    assert provenance_line("fit", 3, {"a": 1}) == f"logitprior fit seed=3 config={config_hash({'a': 1})}"
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=20))
def test_round_trip(values):
    import tempfile, pathlib

    path = pathlib.Path(tempfile.mkdtemp()) / "x.csv"
    write_csv(path, ["v"], [[v] for v in values], "prov")
    cols, data, prov = read_csv(path)
    assert cols == ["v"] and prov == "prov"
    assert np.array_equal(data[:, 0], np.array(values))


def test_stdout(capsys):
    write_csv("-", ["a"], [[1.5]])
    assert capsys.readouterr().out == "a\n1.5\n"
    assert csv_text(["a"], [[1.0]], "p").startswith("# p\n")
