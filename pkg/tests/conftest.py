import pytest

from chiralcav import ModelParams, build_basis

REFERENCE = ModelParams(1.0, 0.09, 0.04)


@pytest.fixture
def ref_params():
    return REFERENCE


@pytest.fixture(params=[(1.0, 0.09, 0.04), (1.0, 0.04, 0.09), (1.0, 0.06, 0.06)],
                ids=["reference", "swapped", "hermitian"])
def params(request):
    return ModelParams(*request.param)


@pytest.fixture
def basis6():
    return build_basis(6)


def interior(basis, margin=2):
    """States at least ``margin`` below the truncation edge."""
    return basis.interior_mask(margin)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
