#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Max-cut instances, cut values and the brute-force reference.

   Vertex u corresponds to bit u of a computational-basis index, and to character u
   of a bitstring.
"""

from typing import Tuple, Sequence, Union, Iterable, List

import os
import numpy as np

from ..internal_types import Edge, IntArray
from ..constants import MAX_BRUTEFORCE_VERTICES
from ..exceptions import ProblemError, GraphFormatError

class Graph:
  """A simple undirected graph on vertices 0..n-1; edges are stored as (u, v) with u < v"""
  n: int
  edges: Tuple[Edge, ...]

  def __init__(self, n: int, edges: Iterable[Sequence[int]]=()):
    if n < 1:
      raise ProblemError(f"Graph must have at least one vertex, got {n}")
    if n > MAX_BRUTEFORCE_VERTICES:
      raise ProblemError(f"Graph has {n} vertices; at most {MAX_BRUTEFORCE_VERTICES} are supported")
    seen = set()
    normalized: List[Edge] = []
    for edge in edges:
      if len(edge) != 2:
        raise ProblemError(f"Edge must be a vertex pair, got {edge!r}")
      u, v = int(edge[0]), int(edge[1])
      if not (0 <= u < n and 0 <= v < n):
        raise ProblemError(f"Edge ({u}, {v}) is out of range for {n} vertices")
      if u == v:
        raise ProblemError(f"Self-loop at vertex {u} is not allowed")
      key = (min(u, v), max(u, v))
      if key in seen:
        raise ProblemError(f"Duplicate edge {key}")
      seen.add(key)
      normalized.append(key)
    self.n = n
    self.edges = tuple(normalized)

  @property
  def m(self) -> int:
    return len(self.edges)

  def __eq__(self, other: object) -> bool:
    return isinstance(other, Graph) and self.n == other.n and set(self.edges) == set(other.edges)

  def __repr__(self) -> str:
    return f"<Graph n={self.n} m={self.m}>"

def cycle_graph(n: int) -> Graph:
  """The cycle C_n (a single edge for n = 2)"""
  if n < 2:
    raise ProblemError(f"A cycle needs at least 2 vertices, got {n}")
  if n == 2:
    return Graph(2, [(0, 1)])
  return Graph(n, [(i, (i + 1) % n) for i in range(n)])

def _bits(g: Graph, z: Union[str, Sequence[int]]) -> List[int]:
  if isinstance(z, str):
    if any(ch not in "01" for ch in z):
      raise ProblemError(f"Bitstring must contain only '0' and '1', got '{z}'")
    bits = [int(ch) for ch in z]
  else:
    bits = [int(b) for b in z]
    if any(b not in (0, 1) for b in bits):
      raise ProblemError(f"Bit values must be 0 or 1, got {list(z)}")
  if len(bits) != g.n:
    raise ProblemError(f"Bitstring length {len(bits)} does not match vertex count {g.n}")
  return bits

def cut_value(g: Graph, z: Union[str, Sequence[int]]) -> int:
  """Number of edges whose endpoints lie on different sides of the cut z"""
  bits = _bits(g, z)
  return sum(1 for u, v in g.edges if bits[u] != bits[v])

def cut_vector(g: Graph) -> IntArray:
  """cut_value of every computational-basis index 0..2^n-1"""
  idx = np.arange(1 << g.n, dtype=np.int64)
  cuts = np.zeros(1 << g.n, dtype=np.int64)
  for u, v in g.edges:
    cuts += ((idx >> u) ^ (idx >> v)) & 1
  return cuts

def index_to_bitstring(index: int, n: int) -> str:
  return "".join(str((index >> u) & 1) for u in range(n))

def bitstring_to_index(z: str) -> int:
  return sum(1 << u for u, ch in enumerate(z) if ch == "1")

def maxcut_bruteforce(g: Graph) -> Tuple[int, str]:
  """The maximum cut by enumeration of all 2^n bitstrings.

  Returns:
      Tuple[int, str]: (maximum cut value, the lowest-index maximizing bitstring)
  """
  if g.n > MAX_BRUTEFORCE_VERTICES:
    raise ProblemError(f"Brute force supports at most {MAX_BRUTEFORCE_VERTICES} vertices, got {g.n}")
  cuts = cut_vector(g)
  best = int(np.argmax(cuts))
  return int(cuts[best]), index_to_bitstring(best, g.n)

def parse_graph(text: str, source: str="<string>") -> Graph:
  """Parses an edge list: a first line 'n m', then m lines 'u v' (0-based vertices).

  Blank lines and '#' comments are ignored.

  Raises:
      GraphFormatError: on a malformed, duplicate or out-of-range line
  """
  rows: List[Tuple[int, List[str]]] = []
  for lineno, raw in enumerate(text.splitlines(), start=1):
    line = raw.split('#', 1)[0].strip()
    if line != '':
      rows.append((lineno, line.split()))
  if len(rows) == 0:
    raise GraphFormatError(f"{source}: empty graph file")

  def ints(lineno: int, fields: List[str]) -> Tuple[int, int]:
    if len(fields) != 2:
      raise GraphFormatError(f"{source}:{lineno}: expected two integers, got {' '.join(fields)!r}")
    try:
      return int(fields[0]), int(fields[1])
    except ValueError as ex:
      raise GraphFormatError(f"{source}:{lineno}: expected two integers, got {' '.join(fields)!r}") from ex

  lineno, fields = rows[0]
  n, m = ints(lineno, fields)
  if n < 1 or m < 0:
    raise GraphFormatError(f"{source}:{lineno}: invalid header 'n={n} m={m}'")
  if len(rows) - 1 != m:
    raise GraphFormatError(f"{source}: header declares {m} edges, found {len(rows) - 1}")
  edges: List[Edge] = []
  seen = set()
  for lineno, fields in rows[1:]:
    u, v = ints(lineno, fields)
    if not (0 <= u < n and 0 <= v < n) or u == v:
      raise GraphFormatError(f"{source}:{lineno}: edge ({u}, {v}) is out of range for {n} vertices")
    key = (min(u, v), max(u, v))
    if key in seen:
      raise GraphFormatError(f"{source}:{lineno}: duplicate edge ({u}, {v})")
    seen.add(key)
    edges.append(key)
  try:
    return Graph(n, edges)
  except ProblemError as ex:
    raise GraphFormatError(f"{source}: {ex}") from ex

def load_graph(path: str) -> Graph:
  with open(os.path.abspath(os.path.expanduser(path)), encoding='utf-8') as f:
    text = f.read()
  return parse_graph(text, source=path)
