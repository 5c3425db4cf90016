import numpy as np
import pytest

from feasbo.dataset import Dataset


def small_dataset():
    x = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
    y = np.array([[1.0, -1.0], [2.0, -2.0], [3.0, -3.0]])
    return Dataset(x, y)


def test_shapes_and_counts():
    ds = small_dataset()
    assert ds.n_points == 3
    assert ds.n_dims == 2
    assert ds.n_constraints == 2
    assert len(ds) == 3


def test_row_count_mismatch_rejected():
    with pytest.raises(ValueError):
        Dataset(np.zeros((3, 2)), np.zeros((2, 1)))


def test_duplicate_inputs_rejected_by_default():
    x = np.array([[1.0, 2.0], [1.0, 2.0]])
    y = np.zeros((2, 1))
    with pytest.raises(ValueError, match="duplicate"):
        Dataset(x, y)
    ds = Dataset(x, y, allow_duplicates=True)
    assert ds.n_points == 2


def test_near_duplicates_allowed():
    # only bitwise-identical rows count as duplicates
    x = np.array([[1.0, 2.0], [1.0, np.nextafter(2.0, 3.0)]])
    ds = Dataset(x, np.zeros((2, 1)))
    assert ds.n_points == 2


def test_arrays_are_readonly():
    ds = small_dataset()
    with pytest.raises(ValueError):
        ds.inputs[0, 0] = 99.0


def test_extend_appends_and_preserves_original():
    ds = small_dataset()
    bigger = ds.extend([[6.0, 7.0]], [[4.0, -4.0]])
    assert bigger.n_points == 4
    assert ds.n_points == 3
    assert np.array_equal(bigger.inputs[-1], [6.0, 7.0])


def test_extend_rejects_nonfinite_observations():
    ds = small_dataset()
    with pytest.raises(ValueError):
        ds.extend([[9.0, 9.0]], [[np.nan, 0.0]])


def test_extend_dimension_mismatch():
    ds = small_dataset()
    with pytest.raises(ValueError):
        ds.extend([[1.0, 2.0, 3.0]], [[0.0, 0.0]])
    with pytest.raises(ValueError):
        ds.extend([[9.0, 9.0]], [[0.0, 0.0, 0.0]])


def test_column_access():
    ds = small_dataset()
    assert np.array_equal(ds.column(1), [-1.0, -2.0, -3.0])
    with pytest.raises(IndexError):
        ds.column(2)


def test_status_column_round_trip():
    ds = Dataset(np.array([[0.0], [1.0]]), np.array([[1.0], [2.0]]),
                 status=[10.0, 20.0])
    grown = ds.extend([[2.0]], [[3.0]])
    assert np.isnan(grown.status[-1])
    grown = grown.extend([[3.0]], [[4.0]], status=[30.0])
    assert grown.status[-1] == 30.0


def test_status_on_statusless_dataset_rejected():
    ds = small_dataset()
    with pytest.raises(ValueError, match="status"):
        ds.extend([[9.0, 9.0]], [[0.0, 0.0]], status=[1.0])


def test_csv_round_trip(tmp_path):
    ds = Dataset(np.array([[0.1, 0.2], [0.3, 0.4]]),
                 np.array([[1.5], [2.5]]), status=[7.25, np.nan])
    path = tmp_path / "data.csv"
    ds.to_csv(path)
    back = Dataset.from_csv(path)
    assert np.array_equal(back.inputs, ds.inputs)
    assert np.array_equal(back.observations, ds.observations)
    assert np.array_equal(back.status, ds.status, equal_nan=True)


def test_csv_full_precision(tmp_path):
    # repr round-trips doubles exactly
    x = np.array([[1.0 / 3.0, np.pi], [np.e, 2.0 / 7.0]])
    y = np.array([[1e-17], [123456789.123456789]])
    ds = Dataset(x, y)
    path = tmp_path / "data.csv"
    ds.to_csv(path)
    back = Dataset.from_csv(path)
    assert np.array_equal(back.inputs, ds.inputs)
    assert np.array_equal(back.observations, ds.observations)


def test_csv_header(tmp_path):
    ds = small_dataset()
    path = tmp_path / "data.csv"
    ds.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == "x1,x2,c1,c2"


def test_json_round_trip_with_missing_status():
    import json
    ds = Dataset(np.array([[0.0], [1.0]]), np.array([[1.0], [2.0]]),
                 status=[5.0, np.nan])
    payload = json.loads(json.dumps(ds.to_dict()))
    back = Dataset.from_dict(payload)
    assert np.array_equal(back.inputs, ds.inputs)
    assert np.array_equal(back.status, ds.status, equal_nan=True)
