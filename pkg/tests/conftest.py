import numpy as np
import pytest

from syzmirror.laurent import newton_polytope, parse_laurent
from syzmirror.subdivision import dual_tropical_curve, regular_subdivision


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def simplex_poly():
    return parse_laurent("1 + z1 + z2", 2)


@pytest.fixture
def kp2_poly():
    return parse_laurent("t + z1 + z2 + z1^-1*z2^-1", 2, {"t": 1})


@pytest.fixture
def kp2_subdivision(kp2_poly):
    P = newton_polytope(kp2_poly)
    return regular_subdivision(P, {p: (-1 if p == (0, 0) else 0) for p in P.lattice_points})


@pytest.fixture
def kp2_curve(kp2_subdivision):
    return dual_tropical_curve(kp2_subdivision)


@pytest.fixture
def simplex_curve(simplex_poly):
    return dual_tropical_curve(regular_subdivision(newton_polytope(simplex_poly)))
