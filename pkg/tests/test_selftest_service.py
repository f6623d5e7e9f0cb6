import pytest

from app.schemas.selftest_schemas import SelftestResponse
from app.services.selftest_service import SelftestConfig, SelftestService, selftest_passed
from app.services.shapovalov_service import OracleConfig, ShapovalovService


def run(oracle, **overrides):
    return SelftestService(SelftestConfig(**overrides), oracle=oracle).run()


def test_l0_arbitration_picks_one_convention(oracle):
    results = run(oracle, suites=("l0_arbitration",))
    result = results["l0_arbitration"]
    assert result.passed, result.failures
    assert result.cases == 9
    assert result.notes == ["convention aw"]


def test_invariants(oracle):
    results = run(oracle, suites=("invariants",), invariant_cases=25)
    assert results["invariants"].passed, results["invariants"].failures
    assert results["invariants"].cases > 100


def test_block_refinement_in_a_small_box(oracle):
    results = run(oracle, suites=("block_refinement",), block_box=4, block_chain_len=4, block_max_m=2)
    result = results["block_refinement"]
    assert result.passed, result.failures
    assert result.cases == 36


def test_results_keep_the_configured_order(oracle):
    results = run(oracle, suites=("invariants", "l0_arbitration"), invariant_cases=5, max_workers=2)
    assert list(results) == ["invariants", "l0_arbitration"]
    assert selftest_passed(results)
    response = SelftestResponse.from_results(results)
    assert response.passed
    assert [s.name for s in response.suites] == ["invariants", "l0_arbitration"]


def test_unknown_suite(oracle):
    with pytest.raises(ValueError):
        run(oracle, suites=("nope",))


@pytest.mark.slow
def test_a2_slice(oracle):
    result = run(oracle, suites=("a2_slice",))["a2_slice"]
    assert result.passed, result.failures


@pytest.mark.slow
def test_kk_grid(oracle):
    result = run(oracle, suites=("kk_grid",), grid_depth=2, grid_height=4)["kk_grid"]
    assert result.passed, result.failures
    assert result.cases == 5 * 11


@pytest.mark.slow
def test_kk_grid_at_depth_four():
    oracle = ShapovalovService(OracleConfig(depth_cap=4, max_workers=1))
    result = SelftestService(SelftestConfig(suites=("kk_grid",), grid_depth=4), oracle=oracle).run()["kk_grid"]
    assert result.passed, result.failures
    assert result.cases == 5 * 11


@pytest.mark.slow
def test_block_refinement_at_full_size(oracle):
    # box ±8, chain length 8, max_m 4
    result = run(oracle, suites=("block_refinement",))["block_refinement"]
    assert result.passed, result.failures
    assert result.cases == 17 * 16 // 2
