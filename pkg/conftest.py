"""
Shared fixtures: small synthetic datasets and isolated data/results/log folders.
"""

import numpy as np
import pytest

from faabe import config
from faabe.datasets import Dataset, Feature, FeatureKind, FeatureSchema, Project, dataset_available

TOY_CSV = """\
ID,Size,Team,Language,Effort
1,10,3,cobol,120
2,20,4,cobol,260
3,15,2,c,150
4,40,6,c,500
5,25,5,java,300
6,30,3,java,330
7,12,2,cobol,140
8,35,7,c,420
9,18,4,java,210
10,22,3,c,250
11,28,6,java,350
12,45,8,cobol,560
"""

TOY_MANIFEST = """\
name    = toy
effort  = Effort
nominal = Language
ordinal = Team
ignore  = ID
"""


def make_dataset(rows, kinds=None, name="synthetic", names=None):
    """Dataset from (feature values..., effort) tuples; features f1..fk are numeric unless ``kinds`` says otherwise."""
    k = len(rows[0]) - 1
    kinds = kinds or [FeatureKind.NUMERIC] * k
    names = names or [f"f{i + 1}" for i in range(k)]
    schema = FeatureSchema(tuple(Feature(n, kind) for n, kind in zip(names, kinds)), "effort")
    projects = [Project(tuple(row[:-1]), row[-1]) for row in rows]
    return Dataset(name, schema, projects)


def linear_rows(n=30, seed=5):
    """effort = 10 * f1; f2 is uniform noise unrelated to effort."""
    rng = np.random.default_rng(seed)
    f1 = rng.uniform(1.0, 10.0, n)
    f2 = rng.uniform(0.0, 100.0, n)
    return [(float(a), float(b), float(10.0 * a)) for a, b in zip(f1, f2)]


@pytest.fixture
def linear_dataset():
    return make_dataset(linear_rows(), name="linear")


@pytest.fixture(autouse=True)
def isolated_paths(tmp_path, monkeypatch):
    """Point results and logs at tmp_path so tests never write into the repo."""
    monkeypatch.setattr(config, "RESULTS_DIR", tmp_path / "results")
    monkeypatch.setattr(config, "LOG_DIR", tmp_path / "logs")
    monkeypatch.setattr(config, "LOG_TO_FILE", False)
    return tmp_path


@pytest.fixture
def toy_data_dir(tmp_path, monkeypatch):
    """A data folder holding toy.csv + manifests/toy.manifest, registered as dataset 'toy'."""
    data_dir = tmp_path / "data"
    (data_dir / "manifests").mkdir(parents=True)
    (data_dir / "toy.csv").write_text(TOY_CSV)
    (data_dir / "manifests" / "toy.manifest").write_text(TOY_MANIFEST)
    monkeypatch.setattr(config, "DATA_DIR", data_dir)
    monkeypatch.setattr(config, "MANIFEST_DIR", data_dir / "manifests")
    monkeypatch.setattr(config, "DATASETS", ["toy"])
    return data_dir


def real_dataset_missing(name):
    """True when the benchmark CSV for ``name`` has not been placed under data/."""
    return not dataset_available(name)
