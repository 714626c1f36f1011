"""
Renewal Equation Module.
Direct solver for defective renewal equations, certified series truncation and the Malthusian tilt.
"""
from .core.renewal import RenewalSystem, SeriesSum, solve, total_sum, truncated_sum, tilted_sum, malthusian_root

__all__ = ["RenewalSystem", "SeriesSum", "solve", "total_sum", "truncated_sum", "tilted_sum", "malthusian_root"]
