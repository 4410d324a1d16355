import numpy as np
import pytest

from quasimeasure import AtomicMeasure, DensityMeasure
from quasimeasure.presets import (
    crossing_fields,
    crossing_measure,
    crossing_regions,
    standard_frame,
)


@pytest.fixture(scope="session")
def frame64():
    return standard_frame(64)


@pytest.fixture(scope="session")
def crossing():
    return crossing_measure()


@pytest.fixture(scope="session")
def regions64(frame64):
    return crossing_regions(frame64)


@pytest.fixture(scope="session")
def golden_pair(frame64):
    return crossing_fields(frame64, 1.0)


@pytest.fixture(scope="session")
def lebesgue():
    return DensityMeasure(1.0)


@pytest.fixture(scope="session")
def spikes():
    return AtomicMeasure(np.array([[3.13, 7.21], [6.47, 2.93], [5.11, 5.57]]),
                         np.array([1.0, 2.5, 0.25]))
