#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Type hints used internally by this package"""

from typing import (
    Union,
    Sequence,
    Tuple,
  )

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
"""A Type hint for a real-valued numpy array"""

ComplexArray = npt.NDArray[np.complex128]
"""A Type hint for a complex-valued numpy array (e.g., statevector amplitudes)"""

IntArray = npt.NDArray[np.int64]
"""A Type hint for an integer-valued numpy array"""

PointLike = Union[FloatArray, Sequence[float]]
"""A Type hint for anything that can be converted to a design point in R^d"""

Edge = Tuple[int, int]
"""A type hint for an undirected graph edge (u, v) with u < v"""

ConfigValue = Union[str, int, float, bool]
"""A type hint for a scalar configuration value"""
