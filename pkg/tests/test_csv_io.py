import numpy as np
import pytest
from numpy.testing import assert_allclose

from bregman_info.errors import DomainViolation
from bregman_info.utils.csv_io import (
    normalize_weights,
    read_joint,
    read_point_and_direction,
    read_table,
    read_weighted_rows,
)


def write(tmp_path, text, name="table.csv"):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return path


def test_header_is_detected(tmp_path):
    table = read_table(write(tmp_path, "a,b\n1,2\n3,4\n"))
    assert table.header == ["a", "b"]
    assert_allclose(table.values, [[1.0, 2.0], [3.0, 4.0]])
    assert read_table(write(tmp_path, "1,2\n", "plain.csv")).header is None


def test_single_column_is_two_dimensional(tmp_path):
    assert read_table(write(tmp_path, "1\n2\n3\n")).values.shape == (3, 1)


@pytest.mark.parametrize("text", ["", "a,b\n", "a,b\n1,2,3\n", "1,nan\n", "1,x\n2,y\n3,z\n"])
def test_malformed_tables(tmp_path, text):
    with pytest.raises(DomainViolation):
        read_table(write(tmp_path, text))


def test_uniform_weights_without_a_weight_column(tmp_path):
    rows = read_weighted_rows(write(tmp_path, "0,1\n2,3\n4,5\n6,7\n"))
    assert_allclose(rows.weights, [0.25] * 4)
    assert rows.points.shape == (4, 2)


def test_weight_column_by_name_and_by_index(tmp_path):
    path = write(tmp_path, "x,mass\n0,1\n4,3\n")
    by_name = read_weighted_rows(path, "mass")
    assert_allclose(by_name.weights, [0.25, 0.75])
    assert_allclose(by_name.points, [[0.0], [4.0]])
    by_index = read_weighted_rows(path, "1")
    assert_allclose(by_index.weights, by_name.weights)
    with pytest.raises(DomainViolation):
        read_weighted_rows(path, "weight")


def test_weights_must_be_usable():
    with pytest.raises(DomainViolation):
        normalize_weights(np.array([0.5, -0.1]))
    with pytest.raises(DomainViolation):
        normalize_weights(np.zeros(3))
    assert_allclose(normalize_weights(np.array([2.0, 2.0])), [0.5, 0.5])


def test_joint_takes_the_first_column_as_the_marginal(tmp_path):
    rows = read_joint(write(tmp_path, "0.5,1,0\n0.5,0,1\n"))
    assert_allclose(rows.weights, [0.5, 0.5])
    assert_allclose(rows.points, np.eye(2))
    with pytest.raises(DomainViolation):
        read_joint(write(tmp_path, "1\n", "marginal_only.csv"))


def test_point_and_direction(tmp_path):
    x, delta = read_point_and_direction(write(tmp_path, "0.5,0.5\n1,-1\n"))
    assert_allclose(x, [0.5, 0.5])
    assert_allclose(delta, [1.0, -1.0])
    with pytest.raises(DomainViolation):
        read_point_and_direction(write(tmp_path, "1,2\n", "short.csv"))


def test_byte_order_mark_is_not_a_header(tmp_path):
    path = tmp_path / "excel.csv"
    path.write_bytes("\ufeff0.0\n2.0\n".encode('utf-8'))
    rows = read_weighted_rows(path)
    assert_allclose(rows.points, [[0.0], [2.0]])
    assert_allclose(rows.weights, [0.5, 0.5])


def test_byte_order_mark_before_a_weight_header(tmp_path):
    path = tmp_path / "excel.csv"
    path.write_bytes("\ufeffweight,x\n1,0\n3,4\n".encode('utf-8'))
    rows = read_weighted_rows(path)
    assert_allclose(rows.weights, [0.25, 0.75])
    assert_allclose(rows.points, [[0.0], [4.0]])
