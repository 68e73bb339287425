import numpy as np
import pytest

from mukit import fileio
from mukit.errors import InputError


def test_round_trip_exact(tmp_path, rng):
    M = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    M[0, 0] = 1 / 3 + 1e-300j
    path = tmp_path / "m.json"
    fileio.write_matrix(path, M)
    np.testing.assert_array_equal(fileio.read_matrix(path), M)


def test_one_row_per_line():
    text = fileio.dumps_matrix(np.eye(3))
    assert text.count("\n") == 5
    assert '"n": 3' in text


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"n": 1}',
        '{"entries": []}',
        '{"entries": [[[1, 0], [2, 0]], [[1, 0]]]}',
        '{"entries": [[[1, 0, 3]]]}',
        '{"entries": [[["a", 0]]]}',
        '{"entries": [[[NaN, 0]]]}',
        '{"entries": [[[Infinity, 0]]]}',
        '{"n": 2, "entries": [[[1, 0]]]}',
    ],
)
def test_rejects_bad_files(text):
    with pytest.raises(InputError):
        fileio.loads_matrix(text)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        fileio.read_matrix(tmp_path / "absent.json")


def test_write_rejects_non_finite():
    with pytest.raises(InputError):
        fileio.dumps_matrix(np.array([[np.inf]]))
