"""The integral cluster category on its fundamental objects.

Objects are exceptional lattices at shift zero together with the
suspended indecomposable projectives; those are exactly the candidates
for summands of cluster-tilting objects, so nothing else enters the
data model.  Morphism groups are computed by the orbit formula: sum
the derived Homs against all translates of the target under the
autoequivalence implemented by f_apply, which meets any fixed shift
window only finitely often.

Ext^1 in the cluster category is hom_c against the suspension.  It is
deliberately not computed through the duality shortcut, which is only
rank-faithful; the duality statement is kept as a test invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    BalanceUnsolvable,
    ConstructionFailed,
    DimensionMismatch,
    NotFoundWithinBound,
    PreconditionViolated,
)
from .quiver import Quiver, is_dynkin, validate
from .zlinalg import FinAbGroup, IntMatrix, kernel_basis, snf
from . import rep, serre
from .rep import ZRep
from .serre import ShiftedModule


# ---------------------------------------------------------------------------
# objects

@dataclass(frozen=True)
class ClusterObject:
    """A module-variant or shifted-projective object of the cluster category."""

    quiver: Quiver
    module: ZRep | None = None
    shifted_projective: int | None = None

    def __post_init__(self):
        if (self.module is None) == (self.shifted_projective is None):
            raise PreconditionViolated("exactly one variant must be set")
        if self.module is not None:
            if self.module.quiver != self.quiver:
                raise DimensionMismatch("module lives over a different quiver")
            if not rep.is_exceptional(self.module):
                raise PreconditionViolated("module objects must be exceptional")

    @staticmethod
    def from_module(m: ZRep) -> "ClusterObject":
        return ClusterObject(m.quiver, module=m)

    @staticmethod
    def sigma_projective(q: Quiver, i: int) -> "ClusterObject":
        if not 1 <= i <= q.n:
            raise DimensionMismatch(f"vertex {i} out of range")
        return ClusterObject(q, shifted_projective=i)

    @property
    def is_module(self) -> bool:
        return self.module is not None

    def key(self) -> tuple:
        """Canonical key; exceptional modules are determined by dimension vector."""
        if self.is_module:
            return ("M", rep.dim_vector(self.module))
        return ("S", (self.shifted_projective,))

    def dim_c(self) -> tuple:
        """Class in the dimension bookkeeping, with dim(sigma P_i) = -dim P_i."""
        if self.is_module:
            return rep.dim_vector(self.module)
        p = rep.projective(self.quiver, self.shifted_projective)
        return tuple(-d for d in rep.dim_vector(p))

    def to_shifted(self) -> ShiftedModule:
        if self.is_module:
            return ShiftedModule(self.module, 0)
        return ShiftedModule(rep.projective(self.quiver, self.shifted_projective), 1)

    def describe(self) -> str:
        if self.is_module:
            return "M" + str(list(rep.dim_vector(self.module)))
        return f"SP{self.shifted_projective}"


def normalize(x: ShiftedModule) -> ClusterObject:
    """Move a shifted lattice into the fundamental set of objects.

    Applies the orbit autoequivalence until the representative sits at
    shift zero, or is a projective at shift one.
    """
    while True:
        if x.shift == 0:
            return ClusterObject.from_module(x.module)
        if x.shift == 1:
            i = serre.projective_index_of(x.module)
            if i is not None:
                return ClusterObject.sigma_projective(x.module.quiver, i)
            x = serre.f_apply(x, 1)
        elif x.shift > 1:
            x = serre.f_apply(x, 1)
        else:
            x = serre.f_apply(x, -1)


# ---------------------------------------------------------------------------
# morphisms via the orbit formula

def _derived_hom(a: ShiftedModule, b: ShiftedModule) -> FinAbGroup:
    offset = b.shift - a.shift
    if offset == 0:
        return rep.hom_group(a.module, b.module).group
    if offset == 1:
        return rep.ext1_group(a.module, b.module)
    return FinAbGroup(0)


def _orbit_hom(sx: ShiftedModule, sy: ShiftedModule) -> FinAbGroup:
    total = FinAbGroup(0)
    # translates in the lowering direction, starting with l = 0
    cur = sy
    while cur.shift >= sx.shift:
        total = total.direct_sum(_derived_hom(sx, cur))
        cur = serre.f_apply(cur, 1)
    # translates in the raising direction
    cur = serre.f_apply(sy, -1)
    while cur.shift <= sx.shift + 1:
        total = total.direct_sum(_derived_hom(sx, cur))
        cur = serre.f_apply(cur, -1)
    return total


@lru_cache(maxsize=None)
def hom_c(x: ClusterObject, y: ClusterObject) -> FinAbGroup:
    """Morphism group in the cluster category."""
    if x.quiver != y.quiver:
        raise DimensionMismatch("objects live over different quivers")
    return _orbit_hom(x.to_shifted(), y.to_shifted())


@lru_cache(maxsize=None)
def ext1_c(x: ClusterObject, y: ClusterObject) -> FinAbGroup:
    """Ext^1 in the cluster category: hom_c against the suspension."""
    if x.quiver != y.quiver:
        raise DimensionMismatch("objects live over different quivers")
    sy = y.to_shifted()
    return _orbit_hom(x.to_shifted(), ShiftedModule(sy.module, sy.shift + 1))


def g_functor(x: ClusterObject) -> ZRep:
    """Module part: the identity on module objects, zero on suspended projectives."""
    if x.is_module:
        return x.module
    return rep.zero_rep(x.quiver)


# ---------------------------------------------------------------------------
# the rigid object pool

@dataclass
class RigidPool:
    """All known rigid indecomposable objects within a dimension bound.

    complete is True exactly for Dynkin quivers, where the translate
    orbits of the projectives exhaust the exceptional modules.
    """

    quiver: Quiver
    dim_bound: int
    objects: tuple = ()
    provenance: dict = field(default_factory=dict)
    complete: bool = False

    def by_key(self) -> dict:
        return {obj.key(): obj for obj in self.objects}

    def modules(self) -> tuple:
        return tuple(obj for obj in self.objects if obj.is_module)

    def add(self, obj: ClusterObject, tag: str) -> bool:
        key = obj.key()
        if key in self.provenance:
            return False
        self.provenance[key] = tag
        self.objects = tuple(sorted(self.objects + (obj,), key=lambda o: o.key()))
        return True


def _within_bound(m: ZRep, bound: int) -> bool:
    return max(rep.dim_vector(m), default=0) <= bound


def build_pool(q: Quiver, dim_bound: int) -> RigidPool:
    """Shifted projectives plus the translate closure of the projective
    and injective lattices, enriched by reflection transport.

    For Dynkin quivers the result is the complete list of rigid
    indecomposables; otherwise the completeness flag stays off and the
    pool can still grow through mutation cones.
    """
    validate(q)
    if dim_bound < 1:
        raise PreconditionViolated("dim_bound must be at least 1")
    pool = RigidPool(q, dim_bound, complete=is_dynkin(q))
    for i in q.vertices:
        pool.add(ClusterObject.sigma_projective(q, i), "projective")
    for i in q.vertices:
        m = rep.projective(q, i)
        if _within_bound(m, dim_bound):
            pool.add(ClusterObject.from_module(m), "projective")
    for i in q.vertices:
        m = rep.injective_lattice(q, i)
        if _within_bound(m, dim_bound):
            pool.add(ClusterObject.from_module(m), "tau-orbit")
    # translate forward from injectives and backward from projectives
    for seed in [rep.projective(q, i) for i in q.vertices]:
        m = seed
        while serre.injective_index_of(m) is None:
            m = serre.tau_inv(m)
            if not _within_bound(m, dim_bound):
                break
            pool.add(ClusterObject.from_module(m), "tau-orbit")
    for seed in [rep.injective_lattice(q, i) for i in q.vertices]:
        m = seed
        while serre.projective_index_of(m) is None:
            m = serre.tau(m)
            if not _within_bound(m, dim_bound):
                break
            pool.add(ClusterObject.from_module(m), "tau-orbit")
    _close_under_reflection_transport(q, pool)
    return pool


def _close_under_reflection_transport(q: Quiver, pool: RigidPool) -> None:
    """Transport every pool module through the full sink sequence.

    Reflecting at each vertex of a topological order, last first, walks
    through intermediate orientations and returns to q; whatever comes
    back is inserted (deduplication makes repeat passes cheap).
    """
    order = validate(q)
    changed = True
    while changed:
        changed = False
        for obj in pool.modules():
            m = obj.module
            cur_q = q
            ok = True
            for v in reversed(order):
                try:
                    cur_q, m = serre.reflect(cur_q, m, v)
                except Exception:
                    ok = False
                    break
            if not ok or cur_q != q:
                continue
            if m.is_zero() or not _within_bound(m, pool.dim_bound):
                continue
            if rep.is_exceptional(m):
                if pool.add(ClusterObject.from_module(m), "reflection"):
                    changed = True


# ---------------------------------------------------------------------------
# cluster-tilting objects

def is_cluster_tilting(summands) -> tuple:
    """Whether the summand list is cluster-tilting, with a certificate.

    Returns (flag, failures); each failure is a human-readable string
    naming the offending pair or count.
    """
    summands = tuple(summands)
    failures = []
    if not summands:
        return False, ("empty summand list",)
    n = summands[0].quiver.n
    if len(summands) != n:
        failures.append(f"expected {n} summands, got {len(summands)}")
    keys = [s.key() for s in summands]
    if len(set(keys)) != len(keys):
        failures.append("summands are not pairwise non-isomorphic")
    for a in summands:
        for b in summands:
            g = ext1_c(a, b)
            if not g.is_trivial:
                failures.append(f"Ext1({a.describe()}, {b.describe()}) = {g}")
    return (not failures), tuple(failures)


def canonical_cluster(summands) -> tuple:
    return tuple(sorted(summands, key=lambda o: o.key()))


@dataclass(frozen=True)
class ExchangeTriangleData:
    """The two exchange triangles of a mutation pair.

    e is the middle multiset of y -> E -> x -> sigma y, e_prime that of
    x -> E' -> y -> sigma x.  Multisets are sorted tuples of cluster
    objects drawn from the complement; the witness strings record how
    each middle term was certified.
    """

    x: ClusterObject
    y: ClusterObject
    e: tuple
    e_prime: tuple
    e_witness: str
    e_prime_witness: str


RANK_ONE = FinAbGroup(1)


def exchange_triangles(x: ClusterObject, y: ClusterObject, complement) -> ExchangeTriangleData:
    """Middle terms of both exchange triangles for the pair (x, y).

    The triangle collapses to a zero middle term exactly when the
    suspension of one end is isomorphic to the other; otherwise the
    multiset is pinned by dimension balance over the complement and,
    for all-module triangles, certified by an explicit short exact
    sequence.
    """
    if ext1_c(x, y) != RANK_ONE:
        raise PreconditionViolated("exchange triangles need Ext1 free of rank one")
    complement = tuple(complement)
    e, ew = _middle_term(y, x, complement)
    ep, epw = _middle_term(x, y, complement)
    return ExchangeTriangleData(x=x, y=y, e=e, e_prime=ep,
                                e_witness=ew, e_prime_witness=epw)


def _middle_term(tail: ClusterObject, head: ClusterObject, complement) -> tuple:
    """Middle multiset of the triangle tail -> E -> head -> sigma tail."""
    st = tail.to_shifted()
    if normalize(ShiftedModule(st.module, st.shift + 1)).key() == head.key():
        return (), "connecting-iso"
    target = tuple(a + b for a, b in zip(head.dim_c(), tail.dim_c()))
    solutions = _balance_solutions(target, complement)
    if not solutions:
        raise BalanceUnsolvable(
            f"no middle term over the complement balances {target}")
    if tail.is_module and head.is_module:
        module_solutions = [s for s in solutions
                            if all(c.is_module for c, m in zip(complement, s) if m)]
        for sol in module_solutions:
            if _verify_ses(tail, head, complement, sol):
                return _multiset(complement, sol), "ses"
    best = min(solutions, key=lambda s: (sum(s), s))
    return _multiset(complement, best), "balance"


def _multiset(complement, multiplicities) -> tuple:
    out = []
    for obj, m in zip(complement, multiplicities):
        out.extend([obj] * m)
    return tuple(sorted(out, key=lambda o: o.key()))


def _balance_solutions(target, complement, cap: int = 12) -> list:
    dims = [c.dim_c() for c in complement]
    n = len(target)
    solutions = []
    counts = [0] * len(complement)

    def descend(idx, remaining):
        if idx == len(complement):
            if all(x == 0 for x in remaining):
                solutions.append(tuple(counts))
            return
        d = dims[idx]
        for m in range(cap + 1):
            rest = tuple(r - m * x for r, x in zip(remaining, d))
            counts[idx] = m
            descend(idx + 1, rest)
        counts[idx] = 0

    descend(0, tuple(target))
    return solutions


def _verify_ses(tail: ClusterObject, head: ClusterObject, complement, sol) -> bool:
    """Look for 0 -> tail -> E -> head -> 0 with E the proposed multiset."""
    parts = []
    for obj, m in zip(complement, sol):
        parts.extend([obj.module] * m)
    if not parts:
        return False
    middle = rep.direct_sum_many(parts)
    if tuple(a + b for a, b in zip(rep.dim_vector(tail.module), rep.dim_vector(head.module))) \
            != rep.dim_vector(middle):
        return False
    basis = rep.hom_group(tail.module, middle).basis
    if not basis or len(basis) > 4:
        return False
    box = range(-2, 3)
    q = tail.quiver

    def candidates(idx, acc):
        if idx == len(basis):
            yield acc
            return
        for lam in box:
            nxt = acc
            if lam:
                add = tuple(IntMatrix.from_rows(
                    [[lam * e for e in row] for row in basis[idx][v].entries],
                    cols=basis[idx][v].cols) for v in range(q.n))
                nxt = tuple(a.add(b) for a, b in zip(acc, add))
            yield from candidates(idx + 1, nxt)

    zero = tuple(IntMatrix.zero(middle.gens[v], tail.module.gens[v]) for v in range(q.n))
    for maps in candidates(0, zero):
        if any(kernel_basis(maps[v]).cols for v in range(q.n)):
            continue
        if any(d > 1 for v in range(q.n) for d in snf(maps[v]).invariant_factors):
            continue
        coker = rep.cokernel_rep(tail.module, middle, maps, saturate=True)
        if rep.dim_vector(coker) != rep.dim_vector(head.module):
            continue
        if rep.is_exceptional(coker) and rep.are_isomorphic_exceptional(coker, head.module):
            return True
    return False


# ---------------------------------------------------------------------------
# mutation

def mutate(summands, k: int, pool: RigidPool) -> tuple:
    """Replace the k-th summand by its unique exchange partner.

    Pool search first: the partner is the unique pool object with Ext^1
    against the leaving summand free of rank one and no extensions
    against the rest.  If the search fails on an all-module cluster the
    partner is constructed by approximation and inserted into the pool.
    Raises NotFoundWithinBound rather than returning anything unverified.
    """
    summands = tuple(summands)
    if not 0 <= k < len(summands):
        raise PreconditionViolated(f"position {k} out of range")
    x = summands[k]
    others = summands[:k] + summands[k + 1:]
    candidates = []
    for y in pool.objects:
        if y.key() == x.key():
            continue
        if ext1_c(x, y) != RANK_ONE:
            continue
        if all(ext1_c(y, t).is_trivial and ext1_c(t, y).is_trivial for t in others):
            candidates.append(y)
    if len(candidates) > 1:
        raise ConstructionFailed(
            f"pool offers {len(candidates)} exchange partners for {x.describe()}; "
            "the pool is inconsistent")
    if candidates:
        y = candidates[0]
    else:
        if not all(s.is_module for s in summands):
            raise NotFoundWithinBound(
                f"no exchange partner for {x.describe()} in the pool "
                f"(bound {pool.dim_bound}); constructive fallback needs all-module clusters")
        y = mutate_construct(summands, k)
        pool.add(y, "mutation-cone")
    new_summands = canonical_cluster(others + (y,))
    ok, cert = is_cluster_tilting(new_summands)
    if not ok:
        raise ConstructionFailed(f"candidate fails the cluster-tilting check: {cert}")
    triangles = exchange_triangles(x, y, others)
    return new_summands, triangles


def mutate_construct(summands, k: int) -> ClusterObject:
    """Approximation construction of the exchange partner, module case.

    Builds the universal map into (or from) the additive hull of the
    complement from deterministic Hom bases, takes the cokernel when the
    universal map embeds with saturated image and the kernel of the dual
    map otherwise, strips complement summands, and only returns a result
    that passes the rank-one test.
    """
    summands = tuple(summands)
    x = summands[k]
    others = summands[:k] + summands[k + 1:]
    if not all(s.is_module for s in summands):
        raise PreconditionViolated("constructive mutation needs module summands")
    xm = x.module
    q = xm.quiver

    result = _left_approximation_cokernel(xm, others)
    if result is None:
        result = _right_approximation_kernel(xm, others)
    if result is None:
        raise ConstructionFailed(
            f"neither approximation route produced a complement for {x.describe()}")
    for obj in others:
        while True:
            try:
                result = rep.strip_summand(result, obj.module)
            except Exception:
                break
    if result.is_zero() or not rep.is_exceptional(result):
        raise ConstructionFailed("stripped approximation cone is not exceptional")
    y = ClusterObject.from_module(result)
    if ext1_c(x, y) != RANK_ONE:
        raise ConstructionFailed("constructed cone fails the rank-one certificate")
    return y


def _left_approximation_cokernel(xm: ZRep, others) -> ZRep | None:
    q = xm.quiver
    pieces = []
    maps_rows = [[] for _ in range(q.n)]
    for obj in others:
        for f in rep.hom_group(xm, obj.module).basis:
            pieces.append(obj.module)
            for v in range(q.n):
                maps_rows[v].append(f[v])
    if not pieces:
        return None
    middle = rep.direct_sum_many(pieces)
    maps = []
    for v in range(q.n):
        stack = IntMatrix.zero(0, xm.gens[v])
        for block in maps_rows[v]:
            stack = stack.vstack(block)
        maps.append(stack)
    for v in range(q.n):
        if kernel_basis(maps[v]).cols:
            return None
        if any(d > 1 for d in snf(maps[v]).invariant_factors):
            return None
    return rep.cokernel_rep(xm, middle, tuple(maps), saturate=True)


def _right_approximation_kernel(xm: ZRep, others) -> ZRep | None:
    from .zlinalg import cokernel_structure

    q = xm.quiver
    pieces = []
    maps_cols = [[] for _ in range(q.n)]
    for obj in others:
        for f in rep.hom_group(obj.module, xm).basis:
            pieces.append(obj.module)
            for v in range(q.n):
                maps_cols[v].append(f[v])
    if not pieces:
        return None
    middle = rep.direct_sum_many(pieces)
    maps = []
    for v in range(q.n):
        stack = IntMatrix.zero(xm.gens[v], 0)
        for block in maps_cols[v]:
            stack = stack.hstack(block)
        maps.append(stack)
    if any(not cokernel_structure(maps[v]).is_trivial for v in range(q.n)):
        return None
    kernel, _ = rep.kernel_subrep(middle, xm, tuple(maps))
    return kernel


# ---------------------------------------------------------------------------
# exchange graph

@dataclass
class ExchangeGraph:
    """Mutation graph explored breadth-first from the projective cluster."""

    quiver: Quiver
    nodes: tuple = ()      # tuple of canonical clusters
    edges: tuple = ()      # (node index, position, node index, triangles)
    truncated: bool = False
    truncation_reason: str = ""

    def node_keys(self) -> tuple:
        return tuple(tuple(s.key() for s in node) for node in self.nodes)

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if e[0] == i)


def exchange_graph(q: Quiver, dim_bound: int = 12, max_nodes: int = 10000) -> ExchangeGraph:
    """Breadth-first mutation closure of the initial projective cluster."""
    pool = build_pool(q, dim_bound)
    initial = canonical_cluster(
        ClusterObject.from_module(rep.projective(q, i)) for i in q.vertices)
    ok, cert = is_cluster_tilting(initial)
    if not ok:
        raise ConstructionFailed(f"initial projective cluster is not tilting: {cert}")
    nodes = [initial]
    index = {tuple(s.key() for s in initial): 0}
    edges = []
    truncated = False
    reason = ""
    frontier = [0]
    while frontier:
        current = frontier.pop(0)
        for k in range(q.n):
            try:
                neighbor, triangles = mutate(nodes[current], k, pool)
            except NotFoundWithinBound as exc:
                truncated = True
                reason = str(exc)
                continue
            nkey = tuple(s.key() for s in neighbor)
            if nkey not in index:
                if len(nodes) >= max_nodes:
                    truncated = True
                    reason = reason or f"node limit {max_nodes} reached"
                    continue
                index[nkey] = len(nodes)
                nodes.append(neighbor)
                frontier.append(index[nkey])
            edges.append((current, k, index[nkey], triangles))
    return ExchangeGraph(q, tuple(nodes), tuple(edges), truncated, reason)


# ---------------------------------------------------------------------------
# base-change bijection report

@dataclass(frozen=True)
class BijectionReport:
    prime: int
    entries: tuple   # (key, end_dim, ext_dim, ok)
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_bijection_mod_p(pool: RigidPool, p: int) -> BijectionReport:
    """Check that reduction mod p sends the pool injectively to rigid
    indecomposables with matching invariants."""
    entries = []
    violations = []
    seen = {}
    for obj in pool.objects:
        if obj.is_module:
            m = obj.module
        else:
            m = rep.projective(pool.quiver, obj.shifted_projective)
        f = rep.base_change(m, p)
        end_dim, ext_dim = rep.field_hom_ext_dims(f, f)
        ok = end_dim == 1 and ext_dim == 0
        if f.dims != rep.dim_vector(m):
            ok = False
            violations.append(f"{obj.describe()}: dimension vector changed under reduction")
        marker = ("S" if not obj.is_module else "M", f.dims)
        if marker in seen:
            ok = False
            violations.append(
                f"{obj.describe()} and {seen[marker]} collide mod {p}")
        seen[marker] = obj.describe()
        if end_dim != 1 or ext_dim != 0:
            violations.append(
                f"{obj.describe()}: reduction mod {p} has End dim {end_dim}, Ext dim {ext_dim}")
        entries.append((obj.key(), end_dim, ext_dim, ok))
    return BijectionReport(p, tuple(entries), tuple(violations))
