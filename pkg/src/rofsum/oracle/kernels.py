"""Kernel backend selection.

The compiled module is used when it was built; otherwise the numpy version.
Setting ``ROFSUM_PURE_KERNELS=1`` forces the numpy version.
"""

import os

from . import _kernels_py

backend = _kernels_py
if not os.environ.get("ROFSUM_PURE_KERNELS"):
    try:
        from . import _kernels as backend  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = backend.BACKEND
normalize = backend.normalize
scale_all = backend.scale_all
sum_pairs = backend.sum_pairs
product_pairs = backend.product_pairs
sub_from = backend.sub_from
find_sum2 = backend.find_sum2
contains = backend.contains
pack = _kernels_py.pack
unpack = _kernels_py.unpack
