import json
from pathlib import Path

import numpy as np
import pytest

from scmq.fock import read_fcidump
from scmq.pointgroup import irrep_from_label
from scmq.scm import SymmetryConfiguration

DATA = Path(__file__).resolve().parents[1] / "data"
KCAL = 627.5094740631


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def reference():
    return json.loads((DATA / "reference.json").read_text())


@pytest.fixture(scope="session")
def f2():
    return read_fcidump(DATA / "f2_sto3g_frozencore_1.40.fcidump")


@pytest.fixture(scope="session")
def h2():
    return read_fcidump(DATA / "h2_sto3g.fcidump")


@pytest.fixture(scope="session")
def ag_block():
    return SymmetryConfiguration(n=14, sz=0, irrep=irrep_from_label("Ag"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_symmetric(rng, dim):
    a = rng.normal(size=(dim, dim))
    return (a + a.T) / 2
