from pathlib import Path

import pytest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def table4_csv(data_dir) -> Path:
    return data_dir / "table4_rows.csv"


@pytest.fixture(scope="session")
def synthetic_200_csv(data_dir) -> Path:
    return data_dir / "synthetic_200.csv"


@pytest.fixture(scope="session")
def synthetic_5000_csv(data_dir) -> Path:
    return data_dir / "synthetic_5000.csv"


@pytest.fixture(scope="session")
def embeddings_path(data_dir) -> Path:
    return data_dir / "mini_embeddings.txt"


@pytest.fixture(scope="session")
def topics_path(data_dir) -> Path:
    return data_dir / "trending_topics.txt"
