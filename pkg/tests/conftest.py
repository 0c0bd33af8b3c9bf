"""Shared fixtures: mode tables are expensive enough to build once."""

import numpy as np
import pytest

import geoscat as gs

TRI_X1 = gs.Junction(0.1, 0.2)
TRI_X2 = gs.Junction(1.0, 5.0 / np.sqrt(3.0))
RECT_X1 = gs.Junction(0.2, 0.1)
RECT_X2 = gs.Junction(1.8, 0.9)


@pytest.fixture(scope="session")
def rect():
    return gs.Rectangle(2.0, 1.0)


@pytest.fixture(scope="session")
def tri():
    return gs.Triangle()


@pytest.fixture(scope="session")
def rect_table_small(rect):
    return gs.enumerate_modes(rect, 500.0)


@pytest.fixture(scope="session")
def tri_table_small(tri):
    return gs.enumerate_modes(tri, 500.0)


@pytest.fixture(scope="session")
def rect_table_1e5(rect):
    return gs.enumerate_modes(rect, 1e5)


@pytest.fixture(scope="session")
def tri_table_1e5(tri):
    return gs.enumerate_modes(tri, 1e5)


@pytest.fixture(scope="session")
def natural_coupling():
    return gs.CouplingParams.natural(0.05)
