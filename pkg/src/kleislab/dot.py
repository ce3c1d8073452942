"""Graphviz DOT text for posets, lattices, relations and maps.

Posets and lattices are drawn as Hasse diagrams (covers only, bottom to
top); relations and maps as bipartite digraphs.  Node ids follow element
order so the output is stable.
"""

from __future__ import annotations

from .finstruct import FinPoset, MonotoneMap, SpecRelation, bits
from .lattice import DistLattice, LatticeMap
from .monadkit import _short


def _quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _nodes(P, prefix):
    return [f"  {prefix}{i} [label={_quote(_short(x))}];" for i, x in enumerate(P.elements)]


def hasse(P, name="P"):
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    lines += _nodes(P, "n")
    lines += [f"  n{i} -> n{j};" for i, j in P.cover_pairs()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def bipartite(source, target, edges, name="R"):
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=box];"]
    lines.append("  subgraph cluster_source {")
    lines.append('    label="source";')
    lines += ["  " + s for s in _nodes(source, "s")]
    lines.append("  }")
    lines.append("  subgraph cluster_target {")
    lines.append('    label="target";')
    lines += ["  " + s for s in _nodes(target, "t")]
    lines.append("  }")
    lines += [f"  s{i} -> t{j};" for i, j in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(obj, name="G"):
    if isinstance(obj, FinPoset):
        return hasse(obj, name)
    if isinstance(obj, DistLattice):
        return hasse(obj.carrier, name)
    if isinstance(obj, SpecRelation):
        edges = [(i, j) for i, row in enumerate(obj.rows) for j in bits(row)]
        return bipartite(obj.source, obj.target, edges, name)
    if isinstance(obj, MonotoneMap):
        return bipartite(obj.source, obj.target, list(enumerate(obj.table)), name)
    if isinstance(obj, LatticeMap):
        return bipartite(obj.source.carrier, obj.target.carrier, list(enumerate(obj.table)), name)
    if hasattr(obj, "step"):
        return render(obj.step, name)
    if hasattr(obj, "op"):
        return render(obj.op, name)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")
