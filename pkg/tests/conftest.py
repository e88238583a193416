import pytest

from semipolar.apsg import SemipolarSpace
from semipolar.autos import brute_force_aut_group
from semipolar.forms import Semiform, cross_product_map, exterior_square, standard_symplectic
from semipolar.linalg import LinearMap


@pytest.fixture(scope="session")
def sp_m1_gf3():
    return SemipolarSpace(Semiform(standard_symplectic(1, 3), kind="symplectic"))


@pytest.fixture(scope="session")
def sp_m2_gf3():
    return SemipolarSpace(Semiform(standard_symplectic(2, 3), kind="symplectic"))


@pytest.fixture(scope="session")
def sp_m1_gf5():
    return SemipolarSpace(Semiform(standard_symplectic(1, 5), kind="symplectic"))


@pytest.fixture(scope="session")
def sp_cross_gf3():
    return SemipolarSpace(Semiform(cross_product_map(3), kind="cross"))


@pytest.fixture(scope="session")
def sp_wedge3_gf3():
    return SemipolarSpace(Semiform(exterior_square(LinearMap.identity(3, 3), 3), kind="wedge"))


@pytest.fixture(scope="session")
def oracle_m1_gf3(sp_m1_gf3):
    return brute_force_aut_group(sp_m1_gf3)
