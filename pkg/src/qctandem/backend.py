"""Gate-kernel backend selection.

The compiled Cython extension is preferred when available; the numpy
fallback implements the same interface. Set ``QCTANDEM_BACKEND`` to
``python`` or ``compiled`` to force a choice (``compiled`` raises if the
extension was never built).
"""

import os

from . import _kernels_py

K_H, K_RX, K_RY, K_RZ, K_PHASE, K_CNOT = range(6)

GATE_CODES = {"H": K_H, "RX": K_RX, "RY": K_RY, "RZ": K_RZ,
              "PHASE": K_PHASE, "CNOT": K_CNOT}

ROTATION_KINDS = ("RX", "RY", "RZ")

_forced = os.environ.get("QCTANDEM_BACKEND", "")
if _forced == "python":
    kernels = _kernels_py
elif _forced == "compiled":
    from . import _kernels_cy as kernels
elif _forced == "":
    try:
        from . import _kernels_cy as kernels
    except ImportError:
        kernels = _kernels_py
else:
    raise RuntimeError(
        f"QCTANDEM_BACKEND={_forced!r} not recognized (use 'python' or 'compiled')")


def backend_name() -> str:
    """Name of the kernel backend selected at import: compiled or python."""
    return kernels.BACKEND_NAME
