"""Select the compiled modular kernels when available, else the Python ones.

Set ``PADIC_EISENSTEIN_PURE=1`` to force the fallback.  Moduli at or above
``MAX_MODULUS`` always take the Python path.
"""

from __future__ import annotations

import os

from . import _fallback

MAX_MODULUS = 2**31

_compiled = None
if os.environ.get("PADIC_EISENSTEIN_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _pick(mod: int):
    if _compiled is not None and 0 < mod < MAX_MODULUS:
        return _compiled
    return _fallback


def mul_trunc(a: list[int], b: list[int], n: int, mod: int) -> list[int]:
    return _pick(mod).mul_trunc(a, b, n, mod)


def inv_trunc(a: list[int], n: int, mod: int, inv_a0: int) -> list[int]:
    return _pick(mod).inv_trunc(a, n, mod, inv_a0)


def pascal_apply(vec: list[int], mod: int) -> list[int]:
    return _pick(mod).pascal_apply(vec, mod)


def pascal_inverse_apply(vec: list[int], mod: int) -> list[int]:
    return _pick(mod).pascal_inverse_apply(vec, mod)


def forward_differences(values: list[int], mod: int) -> list[int]:
    return _pick(mod).forward_differences(values, mod)


def theta_values(a: list[int], jmax: int, mod: int) -> list[int]:
    return _pick(mod).theta_values(a, jmax, mod)
