import pytest

from orthoglide.cube import CubeParams, largest_cube
from orthoglide.workspace import WorkspaceParams, compute_workspace


@pytest.fixture(scope="session")
def coarse_run():
    return compute_workspace(WorkspaceParams(epsilon=0.2))


@pytest.fixture(scope="session")
def fine_run():
    return compute_workspace(WorkspaceParams(epsilon=0.05))


@pytest.fixture(scope="session")
def cube_run():
    pruned = []
    result = largest_cube(CubeParams(alpha=0.001), on_prune=lambda c, R: pruned.append((c, R)))
    return result, pruned
