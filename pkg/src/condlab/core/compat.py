from __future__ import annotations

import importlib.util
import importlib.metadata
import warnings
from packaging.version import parse

def _check_dep(module_name: str, package_name: str | None = None) -> tuple[bool, str | None]:
    if package_name is None:
        package_name = module_name

    if importlib.util.find_spec(module_name) is not None:
        try:
            return True, importlib.metadata.version(package_name)
        except importlib.metadata.PackageNotFoundError:
            return True, "unknown"
    return False, None

def _require_min_version(pkg_name: str, current_ver: str | None, min_ver: str) -> None:
    if current_ver and current_ver != "unknown":
        if parse(current_ver) < parse(min_ver):
            warnings.warn(
                f"\033[33m[condlab Warning]\033[0m {pkg_name} version {current_ver} is installed, "
                f"but condlab recommends >= {min_ver}. Expect potential instability."
            )

HAS_NUMPY, NUMPY_VERSION = _check_dep("numpy")
HAS_SCIPY, SCIPY_VERSION = _check_dep("scipy")
HAS_PANDAS, PANDAS_VERSION = _check_dep("pandas")
HAS_JOBLIB, JOBLIB_VERSION = _check_dep("joblib")
HAS_MATPLOTLIB, MATPLOTLIB_VERSION = _check_dep("matplotlib")

if not HAS_NUMPY:
    raise ImportError("condlab requires 'numpy' as its array engine. Please install it: pip install numpy>=1.26.0")
if not HAS_SCIPY:
    raise ImportError("condlab requires 'scipy' for special functions and root finding. Please install it: pip install scipy>=1.11.0")
if not HAS_PANDAS:
    raise ImportError("condlab requires 'pandas' to read and write result tables. Please install it: pip install pandas>=2.0.0")
_require_min_version("numpy", NUMPY_VERSION, "1.26.0")
_require_min_version("scipy", SCIPY_VERSION, "1.11.0")
_require_min_version("pandas", PANDAS_VERSION, "2.0.0")
_require_min_version("joblib", JOBLIB_VERSION, "1.3.0")

def require_joblib(feature_name: str = "Parallel replicas") -> None:
    if not HAS_JOBLIB:
        raise ImportError(f"{feature_name} requires joblib. Install via: pip install joblib>=1.3.0")

def require_matplotlib(feature_name: str = "SVG plotting") -> None:
    if not HAS_MATPLOTLIB:
        raise ImportError(f"{feature_name} requires Matplotlib. Install via: pip install 'condlab[plot]' or matplotlib>=3.7.0")
