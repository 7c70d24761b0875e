import pytest

from natanzon import NatanzonParams, build_zmap, preset_pt2, preset_rm

# generic admissible set with three bound levels
GENERIC = NatanzonParams(1.0, 1.0, 1.0, 80.0, 10.0, 20.0)


@pytest.fixture(scope="session")
def pt2():
    return preset_pt2(4.5, 1.5, 1.0)


@pytest.fixture(scope="session")
def rm():
    return preset_rm(3.0, 2.0, 1.0)


@pytest.fixture(scope="session")
def generic():
    return GENERIC


@pytest.fixture(scope="session")
def pt2_map(pt2):
    return build_zmap(pt2)


@pytest.fixture(scope="session")
def rm_map(rm):
    return build_zmap(rm)


@pytest.fixture(scope="session")
def generic_map(generic):
    return build_zmap(generic)
