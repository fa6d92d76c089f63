"""LP kernel selection: compiled extension if importable, numpy otherwise.

Set GAITGRAPH_PURE_KERNELS=1 to force the numpy fallback.
"""

import os

if os.environ.get("GAITGRAPH_PURE_KERNELS"):
    from gaitgraph._kernels.pure import simplex_bounded

    KERNEL_BACKEND = "pure"
else:
    try:
        from gaitgraph._kernels._simplex import simplex_bounded

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from gaitgraph._kernels.pure import simplex_bounded

        KERNEL_BACKEND = "pure"

__all__ = ["simplex_bounded", "KERNEL_BACKEND"]
