import struct

import numpy as np
import pytest

from sclab.codes import CodeKind, random_unit_code
from sclab.exceptions import ContractError, FormatError
from sclab.io import CODE_MAGIC, dumps_matrix, loads_matrix, read_code, read_readout, write_code, write_readout
from sclab.readouts import least_squares_readout


def test_code_round_trip(tmp_path):
    c = random_unit_code(6, 20, seed=3)
    p = tmp_path / "c.sclb"
    write_code(p, c)
    back = read_code(p)
    assert back.columns.tobytes() == c.columns.tobytes()
    assert back.kind is CodeKind.EXTERNAL
    assert p.stat().st_size == 12 + 8 * 6 * 20


def test_readout_round_trip(tmp_path):
    c = random_unit_code(4, 9, seed=1)
    r = least_squares_readout(c)
    p = tmp_path / "r.sclr"
    write_readout(p, r)
    back = read_readout(p)
    np.testing.assert_array_equal(back.G, r.G)
    assert not back.unit_diagonal


def test_layout_is_column_major():
    m = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    data = dumps_matrix(m, CODE_MAGIC)
    assert struct.unpack_from("<4sII", data) == (b"SCLB", 3, 2)
    assert struct.unpack_from("<6d", data, 12) == (1.0, 3.0, 5.0, 2.0, 4.0, 6.0)


@pytest.mark.parametrize("cut", [0, 5, 11, 12, 20, 59])
def test_truncated_reports_offset(cut):
    data = dumps_matrix(np.eye(2, 3) + 0.5, CODE_MAGIC)
    with pytest.raises(FormatError) as info:
        loads_matrix(data[:cut], CODE_MAGIC)
    assert info.value.offset == cut
    assert f"byte offset {cut}" in str(info.value)


def test_bad_magic_and_trailing_bytes():
    data = dumps_matrix(np.ones((2, 2)), CODE_MAGIC)
    with pytest.raises(FormatError) as info:
        loads_matrix(b"XXXX" + data[4:], CODE_MAGIC)
    assert info.value.offset == 0
    with pytest.raises(FormatError) as info:
        loads_matrix(data + b"\0", CODE_MAGIC)
    assert info.value.offset == len(data)


def test_non_finite_entry_offset():
    m = np.ones((2, 2))
    m[1, 1] = np.nan
    with pytest.raises(FormatError) as info:
        loads_matrix(dumps_matrix(m, CODE_MAGIC), CODE_MAGIC)
    assert info.value.offset == 12 + 8 * 3


def test_read_code_normalization(tmp_path):
    p = tmp_path / "raw.sclb"
    p.write_bytes(dumps_matrix(np.array([[3.0, 1.0], [4.0, 0.0]]), CODE_MAGIC))
    with pytest.raises(ContractError):
        read_code(p)
    np.testing.assert_allclose(np.linalg.norm(read_code(p, normalize=True).columns, axis=0), 1.0)
