import numpy as np
import pytest

from selfsort.errors import StreamFormatError
from selfsort.streams import MAGIC, read_permutations, read_stream, write_permutations, write_stream


@pytest.mark.parametrize("binary", [False, True])
def test_roundtrip_exact(tmp_path, binary, rng):
    rows = rng.normal(size=(17, 5)) * 1e3
    p = tmp_path / "s.dat"
    write_stream(p, rows, binary=binary)
    np.testing.assert_array_equal(read_stream(p), rows)


def test_binary_magic(tmp_path):
    p = tmp_path / "s.bin"
    write_stream(p, np.zeros((2, 3)), binary=True)
    assert p.read_bytes().startswith(MAGIC)


def test_text_header(tmp_path):
    p = tmp_path / "s.txt"
    write_stream(p, [[1.0, 2.5]])
    assert p.read_text().splitlines() == ["n=2 count=1", "1.0 2.5"]


@pytest.mark.parametrize("body", ["n=2 count=1\n1.0\n", "n=2 count=2\n1 2\n", "garbage\n", "n=1 count=1\nnan\n"])
def test_malformed_text(tmp_path, body):
    p = tmp_path / "bad.txt"
    p.write_text(body)
    with pytest.raises(StreamFormatError):
        read_stream(p)


def test_truncated_binary(tmp_path):
    p = tmp_path / "s.bin"
    write_stream(p, np.ones((4, 4)), binary=True)
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(StreamFormatError):
        read_stream(p)


def test_permutations_one_based(tmp_path):
    p = tmp_path / "perm.txt"
    write_permutations(p, [[2, 0, 1]])
    assert p.read_text() == "3 1 2\n"
    assert read_permutations(p) == [[2, 0, 1]]
