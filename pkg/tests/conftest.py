import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles module


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


@pytest.fixture
def blob_dataset():
    """One tight Gaussian blob left of center, 2000 samples."""
    import uncrowd as uc
    gen = np.random.default_rng(11)
    pts = gen.normal(loc=(0.35, 0.5), scale=0.04, size=(2000, 2))
    return uc.validate_dataset(np.clip(pts, 0.0, 1.0), normalize=False)
