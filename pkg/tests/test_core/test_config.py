"""Tests for condlab.config, condlab.using and the resolution hierarchy."""

import pytest

import condlab as cl
from condlab.core.config import get_config, known_keys
from condlab.distributions import FitnessDistribution, tail_power_integral


def test_explicit_context_global_hierarchy():
    """Verify 3-tier resolution: explicit argument > context override > global setting."""
    cl.config(series_rtol=1e-12)
    assert get_config("series_rtol") == 1e-12

    with cl.using(series_rtol=1e-10):
        assert get_config("series_rtol") == 1e-10
        assert get_config("series_rtol", 1e-8) == 1e-8

    assert get_config("series_rtol") == 1e-12


def test_nested_using_restores_outer_scope():
    with cl.using(quadrature_nodes=32):
        with cl.using(quadrature_nodes=16, strict_weights=False):
            assert get_config("quadrature_nodes") == 16
            assert get_config("strict_weights") is False
        assert get_config("quadrature_nodes") == 32
        assert get_config("strict_weights") is True
    assert get_config("quadrature_nodes") == 64


def test_reset_restores_shipped_defaults():
    cl.config(float_digits=6, default_seed=1)
    cl.reset_config()
    assert get_config("float_digits") == 17
    assert get_config("default_seed") == 20120101
    assert get_config("tail_method") == "closed"


def test_known_keys_cover_documented_settings():
    for key in ("rtol", "atol", "tail_method", "series_max_terms", "generation_cap", "workers", "seed"):
        assert key in known_keys()


def test_tail_method_switch_changes_path_not_value():
    """The quadrature path reproduces the closed form for integer exponents."""
    q = FitnessDistribution.polytail(2.0)
    closed = tail_power_integral(q, 5, 0.3)
    with cl.using(tail_method="quadrature"):
        quad = tail_power_integral(q, 5, 0.3)
    assert quad == pytest.approx(closed, rel=1e-12)


def test_invalid_tail_method_is_rejected():
    q = FitnessDistribution.polytail(2.0)
    with cl.using(tail_method="simpson"):
        with pytest.raises(cl.exceptions.ParameterError, match="method"):
            tail_power_integral(q, 1, 0.5)
