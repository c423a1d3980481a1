from pathlib import Path

import numpy as np
import pytest

from horst.fwi import (Acquisition, FreqDataset, FrequencyData,
                       GatherFormatError, MissingFrequencyError,
                       read_dataset, write_dataset)

pytestmark = pytest.mark.smoke


@pytest.fixture
def dataset() -> FreqDataset:
    rng = np.random.default_rng(0)
    acquisition = Acquisition(rng.uniform(0, 100, (3, 3)),
                              rng.uniform(0, 100, (5, 3)),
                              reciprocity=False)
    items = []
    for frequency in (2.5, 3.75):
        gather = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        mask = rng.random((3, 5)) > 0.3
        items.append(FrequencyData(frequency, gather, mask,
                                   np.array([1.0, 0.5j, -2.0])))
    return FreqDataset(acquisition, items)


def test_round_trip(tmp_path: Path, dataset: FreqDataset):
    path = write_dataset(dataset, tmp_path / "gathers")
    assert path.suffix == '.fdg'
    loaded = read_dataset(path)

    assert loaded.frequencies == dataset.frequencies
    assert loaded.acquisition.reciprocity is False
    np.testing.assert_array_equal(loaded.acquisition.sources,
                                  dataset.acquisition.sources)
    for a, b in zip(loaded, dataset):
        assert a.gather.dtype == np.complex64
        np.testing.assert_array_equal(a.gather, b.gather)
        np.testing.assert_array_equal(a.mask, b.mask)
        np.testing.assert_array_equal(a.signatures, b.signatures)


def test_truncated_file(tmp_path: Path, dataset: FreqDataset):
    path = write_dataset(dataset, tmp_path / "gathers.fdg")
    payload = path.read_bytes()
    path.write_bytes(payload[:len(payload) // 2])
    with pytest.raises(GatherFormatError, match="offset"):
        read_dataset(path)


def test_bad_magic(tmp_path: Path):
    path = tmp_path / "junk.fdg"
    path.write_bytes(b"NOPE" + bytes(16))
    with pytest.raises(GatherFormatError):
        read_dataset(path)


def test_missing_file(tmp_path: Path):
    with pytest.raises(FileNotFoundError):
        read_dataset(tmp_path / "absent.fdg")


def test_missing_frequency(dataset: FreqDataset):
    assert dataset.has(3.75)
    assert dataset.at(2.5 + 1e-12).frequency == 2.5
    with pytest.raises(MissingFrequencyError):
        dataset.at(5.0)
    with pytest.raises(KeyError):
        dataset.at(5.0)


def test_gather_shape_must_match_acquisition(dataset: FreqDataset):
    with pytest.raises(ValueError):
        dataset.add(FrequencyData(6.0, np.zeros((2, 5))))


def test_frequency_data_defaults():
    item = FrequencyData(3.0, np.ones((2, 4)))
    assert item.mask.all()
    np.testing.assert_array_equal(item.signatures, np.ones(2))
    with pytest.raises(ValueError):
        FrequencyData(3.0, np.ones((2, 4)), mask=np.ones((4, 2)))
    with pytest.raises(ValueError):
        FrequencyData(3.0, np.ones((2, 4)), signatures=np.ones(3))


def test_acquisition_table(tmp_path: Path, dataset: FreqDataset):
    path = dataset.acquisition.to_csv(tmp_path / "acquisition.csv")
    loaded = Acquisition.from_csv(path)
    np.testing.assert_allclose(loaded.receivers,
                               dataset.acquisition.receivers)
    swapped = loaded.swapped()
    assert swapped.n_src == 5
    assert swapped.n_rec == 3


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
