# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Miscellaneous utility functions"""

from typing import Type, Any, Sequence, Union
from .internal_types import FloatArray, PointLike
from .exceptions import OracleDomainError

import math
import hashlib
import numpy as np

def hash_labels(*labels: Union[int, str, bytes]) -> int:
  """Hashes a sequence of labels into a stable unsigned 64-bit integer.

  Unlike the builtin hash(), the result does not depend on PYTHONHASHSEED, so it can
  be used to derive reproducible random substreams.
  """
  h = hashlib.blake2b(digest_size=8)
  for label in labels:
    if isinstance(label, bytes):
      data = label
    elif isinstance(label, int):
      data = int(label).to_bytes(16, 'little', signed=True)
    else:
      data = str(label).encode("utf-8")
    h.update(len(data).to_bytes(4, 'little'))
    h.update(data)
  return int.from_bytes(h.digest(), 'little')

def hash_point(x: FloatArray) -> bytes:
  """Returns the exact byte representation of a design point, suitable as a dict key or hash label"""
  return np.ascontiguousarray(x, dtype=np.float64).tobytes()

def as_point(x: PointLike, dim: int=-1) -> FloatArray:
  """Converts a point-like value to a finite 1-D float64 array.

  Args:
      x (PointLike): The point
      dim (int, optional): Required dimension, or -1 for any. Defaults to -1.

  Raises:
      OracleDomainError: If any coordinate is nonfinite or the dimension is wrong

  Returns:
      FloatArray: A fresh 1-D float64 array
  """
  result = np.array(x, dtype=np.float64).reshape(-1)
  if not np.all(np.isfinite(result)):
    raise OracleDomainError(f"Design point must be finite, got {result}")
  if dim >= 0 and result.shape[0] != dim:
    raise OracleDomainError(f"Design point must have dimension {dim}, got {result.shape[0]}")
  return result

def ceil_int(value: float) -> int:
  """Rounds a sample-size formula up to an integer, ignoring floating-point noise below 1e-9"""
  return int(math.ceil(round(value, 9)))

def full_name_of_type(t: Type) -> str:
  """Returns the fully qualified name of a type

  Args:
      t (Type): A type, which may be a builtin type or a class

  Returns:
      str: The fully qualified name of the type
  """
  module: str = t.__module__
  if module == 'builtins':
    result: str = t.__qualname__
  else:
    result = module + '.' + t.__qualname__
  return result

def full_type(o: Any) -> str:
  """Returns the fully qualified name of an object or value's type

  Args:
      o: any object or value

  Returns:
      str: The fully qualified name of the object or value's type
  """
  return full_name_of_type(o.__class__)

def format_point(x: Sequence[float]) -> str:
  return "(" + ",".join(f"{v:.6g}" for v in x) + ")"
