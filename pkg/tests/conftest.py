import numpy as np
import pytest

from antnet import LabeledDataset, zscore_normalize


@pytest.fixture(scope="session")
def iris_dataset() -> LabeledDataset:
    from sklearn.datasets import load_iris

    data = load_iris()
    return LabeledDataset(data.data, data.target)


@pytest.fixture(scope="session")
def iris_zscored(iris_dataset) -> LabeledDataset:
    return zscore_normalize(iris_dataset)


@pytest.fixture(scope="session")
def wine_dataset() -> LabeledDataset:
    from sklearn.datasets import load_wine

    data = load_wine()
    return LabeledDataset(data.data, data.target)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
