import pytest

from crnlump import BisimMode, Partition, running_example


def blocks_of(crn, *groups):
    """Partition from species-name strings, e.g. blocks_of(crn, "AB", "C")."""
    return Partition(
        crn.species, [[crn.by_name(name) for name in group] for group in groups]
    )


@pytest.fixture
def crn():
    return running_example()


@pytest.fixture
def h_o(crn):
    # {{A}, {B}, {C, E}, {D}}: the forward-aggregating partition
    return blocks_of(crn, "A", "B", "CE", "D")


@pytest.fixture
def h_e(crn):
    # {{A, B}, {C}, {D}, {E}}: the backward-aggregating partition
    return blocks_of(crn, "AB", "C", "D", "E")


@pytest.fixture
def mixed(crn):
    # {{A, B}, {C, E}, {D}}: neither forward nor backward
    return blocks_of(crn, "AB", "CE", "D")


@pytest.fixture(params=[BisimMode.FORWARD, BisimMode.BACKWARD], ids=["fb", "bb"])
def mode(request):
    return request.param
