"""Pick the enumeration backend once, at import.

The compiled ``_enum`` extension is used when it was built; otherwise the
pure-Python twin. Set ``KFOREST_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _enum_py

python_enumerate_profile = _enum_py.enumerate_profile

try:
    from ._enum import enumerate_profile as native_enumerate_profile
except ImportError:  # extension not built
    native_enumerate_profile = None

if native_enumerate_profile is not None and os.environ.get("KFOREST_PURE_PYTHON", "") in ("", "0"):
    enumerate_profile = native_enumerate_profile
    BACKEND = "native"
else:
    enumerate_profile = python_enumerate_profile
    BACKEND = "python"
