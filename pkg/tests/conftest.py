import pytest

from transgress.invariants import pfaffian, symmetrized_trace
from transgress.lie import (
    ReductiveSplit,
    abelian_algebra,
    gl_algebra,
    gl_subalgebra_split,
    so_algebra,
    so_subalgebra_split,
    su2_algebra,
    su2_diagonal_split,
    trivial_split,
)
from transgress.weil import UniversalSetup


@pytest.fixture(scope="session")
def so4_setup():
    algebra = so_algebra(4)
    return UniversalSetup(algebra, so_subalgebra_split(algebra, 3))


@pytest.fixture(scope="session")
def so5_setup():
    algebra = so_algebra(5)
    return UniversalSetup(algebra, so_subalgebra_split(algebra, 4))


@pytest.fixture(scope="session")
def so6_setup():
    algebra = so_algebra(6)
    return UniversalSetup(algebra, so_subalgebra_split(algebra, 5))


@pytest.fixture(scope="session")
def gl3_setup():
    algebra = gl_algebra(3)
    return UniversalSetup(algebra, gl_subalgebra_split(algebra, 2))


@pytest.fixture(scope="session")
def su2_setup():
    algebra = su2_algebra()
    return UniversalSetup(algebra, su2_diagonal_split(algebra))


@pytest.fixture(scope="session")
def so3_cs_setup():
    """Chern-Simons limit: empty subalgebra of so(3)."""
    algebra = so_algebra(3)
    return UniversalSetup(algebra, trivial_split(algebra))


@pytest.fixture(scope="session")
def abelian_setup():
    algebra = abelian_algebra(2)
    return UniversalSetup(algebra, ReductiveSplit.from_h(algebra.dim, (0,)))


@pytest.fixture(scope="session")
def shipped_setups(so4_setup, so5_setup, so6_setup, gl3_setup, su2_setup,
                   so3_cs_setup, abelian_setup):
    return {
        "so4/so3": so4_setup,
        "so5/so4": so5_setup,
        "so6/so5": so6_setup,
        "gl3/gl2": gl3_setup,
        "su2/u1": su2_setup,
        "so3/none": so3_cs_setup,
        "abelian2/x1": abelian_setup,
    }


@pytest.fixture(scope="session")
def pf_so4(so4_setup):
    return pfaffian(so4_setup.algebra)


@pytest.fixture(scope="session")
def pf_so6(so6_setup):
    return pfaffian(so6_setup.algebra)


@pytest.fixture(scope="session")
def tr2_gl3(gl3_setup):
    return symmetrized_trace(gl3_setup.algebra, 2)


@pytest.fixture(scope="session")
def tr3_gl3(gl3_setup):
    return symmetrized_trace(gl3_setup.algebra, 3)


@pytest.fixture(scope="session")
def tr2_su2(su2_setup):
    return symmetrized_trace(su2_setup.algebra, 2)
