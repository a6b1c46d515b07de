"""Nakayama and Serre functor machinery on lattices.

tau is computed as the kernel of the Nakayama transport of the minimal
projective resolution: for 0 -> P1 -f-> P0 -> M -> 0 the translate is
ker(nu f: I(P1) -> I(P0)), which is again a lattice.  The transport is
only guaranteed surjective for rigid inputs, so non-rigid modules are
rejected rather than silently truncated.

tau_inv goes through the opposite quiver: dualize, translate, dualize
back.  f_apply packages the suspension bookkeeping of the orbit
category: one application lowers the shift by one on non-projectives
and by two on projectives, so iterated application always leaves any
fixed shift window.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    IsInjective,
    IsProjective,
    NotExceptional,
    PreconditionViolated,
    SimpleAtVertex,
    VertexNotSinkOrSource,
)
from .quiver import Quiver
from .zlinalg import IntMatrix, cokernel_structure, kernel_basis, snf
from . import rep
from .rep import ZRep


@dataclass(frozen=True)
class ShiftedModule:
    """A lattice placed in a single degree of the derived category."""

    module: ZRep
    shift: int


# ---------------------------------------------------------------------------
# recognizing projectives and injective lattices

@lru_cache(maxsize=None)
def projective_index_of(m: ZRep) -> int | None:
    q = m.quiver
    for i in q.vertices:
        p = rep.projective(q, i)
        if m.gens == p.gens and rep.are_isomorphic_exceptional(m, p):
            return i
    return None


@lru_cache(maxsize=None)
def injective_index_of(m: ZRep) -> int | None:
    q = m.quiver
    for i in q.vertices:
        inj = rep.injective_lattice(q, i)
        if m.gens == inj.gens and rep.are_isomorphic_exceptional(m, inj):
            return i
    return None


# ---------------------------------------------------------------------------
# Nakayama functor

def nakayama(q: Quiver, slots) -> ZRep:
    """nu of a formal sum of projectives: P_i goes to I_i."""
    return rep.inj_sum_rep(q, tuple(slots))


def nakayama_map(q: Quiver, row_slots, col_slots, entries) -> tuple:
    """nu on a path-coefficient map between formal sums of projectives.

    Returns the vertexwise matrices of the transported map
    I(col_slots) -> I(row_slots) in the dual path bases.
    """
    return rep.inj_map_vertex_matrices(q, tuple(row_slots), tuple(col_slots), entries)


# ---------------------------------------------------------------------------
# AR translation

@lru_cache(maxsize=None)
def tau(m: ZRep) -> ZRep:
    """The translate of a non-projective exceptional lattice."""
    if not m.is_lattice or not rep.is_exceptional(m):
        raise NotExceptional("tau is only defined on exceptional lattices")
    if projective_index_of(m) is not None:
        raise IsProjective("tau is undefined on projectives")
    res = rep.projective_resolution(m)
    assert not res.p2, "exceptional lattice with resolution length 2"
    maps = nakayama_map(m.quiver, res.p0, res.p1, res.d1)
    for mat in maps:
        if not cokernel_structure(mat).is_trivial:
            raise NotExceptional("Nakayama transport is not surjective")
    source = rep.inj_sum_rep(m.quiver, res.p1)
    target = rep.inj_sum_rep(m.quiver, res.p0)
    kernel, _ = rep.kernel_subrep(source, target, maps)
    return kernel


@lru_cache(maxsize=None)
def tau_inv(m: ZRep) -> ZRep:
    """Inverse translate, computed through the opposite quiver."""
    if not m.is_lattice or not rep.is_exceptional(m):
        raise NotExceptional("tau_inv is only defined on exceptional lattices")
    if injective_index_of(m) is not None:
        raise IsInjective("tau_inv is undefined on injective lattices")
    return rep.dualize(tau(rep.dualize(m)))


def f_apply(x: ShiftedModule, power: int) -> ShiftedModule:
    """One application of the orbit autoequivalence or its inverse.

    Forward: non-projective modules translate and drop one shift,
    projectives become injective lattices and drop two.  Backward is
    the mirror through injective lattices.
    """
    if power not in (1, -1):
        raise PreconditionViolated("f_apply moves one step at a time")
    m, s = x.module, x.shift
    if power == 1:
        i = projective_index_of(m)
        if i is not None:
            return ShiftedModule(rep.injective_lattice(m.quiver, i), s - 2)
        return ShiftedModule(tau(m), s - 1)
    i = injective_index_of(m)
    if i is not None:
        return ShiftedModule(rep.projective(m.quiver, i), s + 2)
    return ShiftedModule(tau_inv(m), s + 1)


# ---------------------------------------------------------------------------
# BGP reflections

def reflect(q: Quiver, m: ZRep, vertex: int) -> tuple:
    """Reflection functor at a sink or source, over the integers.

    Returns (reflected quiver, reflected lattice).  Kernels are taken
    saturated and cokernels modulo torsion so the output is a lattice;
    a failing exactness check means the input had a simple summand (or
    a torsion obstruction) at the vertex and raises SimpleAtVertex.
    """
    if m.quiver != q:
        raise PreconditionViolated("module does not live over the given quiver")
    if not m.is_lattice:
        raise PreconditionViolated("reflection functors act on lattices")
    if q.is_sink(vertex):
        return _reflect_sink(q, m, vertex)
    if q.is_source(vertex):
        return _reflect_source(q, m, vertex)
    raise VertexNotSinkOrSource(f"vertex {vertex} is neither a sink nor a source")


def _reflect_sink(q: Quiver, m: ZRep, k: int) -> tuple:
    incoming = q.arrows_into(k)
    blocks = [m.actions[a] for a in incoming]
    stacked = IntMatrix.zero(m.gens[k - 1], 0)
    for b in blocks:
        stacked = stacked.hstack(b)
    if not cokernel_structure(stacked).is_trivial:
        raise SimpleAtVertex(f"total map into sink {k} is not surjective")
    kb = kernel_basis(stacked)
    new_q = q.reflected(k)
    gens = tuple(kb.cols if v == k else m.gens[v - 1] for v in q.vertices)
    offsets = {}
    at = 0
    for a in incoming:
        s = q.arrows[a][0]
        offsets[a] = at
        at += m.gens[s - 1]
    actions = []
    for a, (s, t) in enumerate(q.arrows):
        if t == k:
            block = kb.submatrix(range(offsets[a], offsets[a] + m.gens[s - 1]),
                                 range(kb.cols))
            actions.append(block)
        else:
            actions.append(m.actions[a])
    return new_q, rep.make_lattice(new_q, gens, actions)


def _reflect_source(q: Quiver, m: ZRep, k: int) -> tuple:
    outgoing = q.arrows_out_of(k)
    stacked = IntMatrix.zero(0, m.gens[k - 1])
    offsets = {}
    for a in outgoing:
        offsets[a] = stacked.rows
        stacked = stacked.vstack(m.actions[a])
    if kernel_basis(stacked).cols:
        raise SimpleAtVertex(f"total map out of source {k} is not injective")
    dec = snf(stacked)
    r = dec.rank
    proj = dec.u_inv.submatrix(range(r, stacked.rows), range(stacked.rows))
    new_q = q.reflected(k)
    gens = tuple(stacked.rows - r if v == k else m.gens[v - 1] for v in q.vertices)
    actions = []
    for a, (s, t) in enumerate(q.arrows):
        if s == k:
            block = proj.submatrix(range(proj.rows),
                                   range(offsets[a], offsets[a] + m.gens[t - 1]))
            actions.append(block)
        else:
            actions.append(m.actions[a])
    return new_q, rep.make_lattice(new_q, gens, actions)
