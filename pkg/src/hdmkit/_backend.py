"""Kernel backend selection.

The compiled extension is preferred when importable.  Set the environment
variable ``HDMKIT_KERNELS`` to ``py`` to force the pure-numpy fallback, to
``c`` to require the extension, or leave it at ``auto``.
"""

import os

_choice = os.environ.get("HDMKIT_KERNELS", "auto").lower()
if _choice not in {"auto", "c", "py"}:
    raise RuntimeError(
        f"HDMKIT_KERNELS must be 'auto', 'c' or 'py', not {_choice!r}")

if _choice == "py":
    from . import _kernels_py as _impl
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl
        KERNEL_BACKEND = "compiled"
    except ImportError:
        if _choice == "c":
            raise
        from . import _kernels_py as _impl
        KERNEL_BACKEND = "python"

eigh_small = _impl.eigh_small
seesaw_run = _impl.seesaw_run
pairwise_product_min = _impl.pairwise_product_min
