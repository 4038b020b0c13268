import pytest

from fanovol.classify import classify


@pytest.fixture(scope="session")
def tetrahedra_report():
    return classify("dim4-two-tetrahedra")


@pytest.fixture(scope="session")
def triangles_report():
    return classify("dim4-three-triangles")


@pytest.fixture(scope="session")
def tet_tri_report():
    return classify("dim4-tetrahedron-triangle")
