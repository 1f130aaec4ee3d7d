"""Free modules and the negated tensor product via congruence closure.

The tensor of a right module and a left module over a ground system is the
quotient of the free additive structure on generator pairs by the
congruence generated by: additivity-splitting pairs, balanced-action
pairs, the double-negation pair and the negation-transfer pair.  Formal
sums are multisets of generator pairs (the free structure is spanned by
the pairs themselves, since they are its tangibles); two equal summands
fuse through a splitting pair, so every class has a representative that is
a plain set of generators and the quotient stays finite.

Closure runs a union-find over discovered formal sums, re-instantiating
the generating pairs to a fixed point.  Instantiation order is canonical,
so runs are reproducible, and the finished partition is verified to be a
congruence before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (NegationMap, StructureError, SurpassRelation, SystemDef,
                   surpass_circ_tables)
from .modsys import FiniteModuleSystem, Morphism, KIND_HOM

DEFAULT_CAP = 20000


class FreeOverflow(StructureError):
    def __init__(self, reached: int, cap: int):
        super().__init__(f"free module closure reached {reached} elements, cap {cap}")
        self.reached = reached
        self.cap = cap


class TensorOverflow(StructureError):
    def __init__(self, reached: int, cap: int):
        super().__init__(f"tensor closure reached {reached} nodes, cap {cap}")
        self.reached = reached
        self.cap = cap


class BilinearityError(StructureError):
    def __init__(self, message: str, witness: tuple):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# formal sums and free modules


@dataclass(frozen=True)
class FormalSum:
    """Coefficient-labelled combination of base symbols, canonically sorted.

    Terms are (symbol index, coefficient index) pairs with nonzero
    coefficients; the empty sum is the zero element.
    """

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def of(pairs, ground: SystemDef) -> "FormalSum":
        sr = ground.semiring
        acc: dict[int, int] = {}
        for sym, coeff in pairs:
            acc[sym] = sr.add[acc[sym]][coeff] if sym in acc else coeff
        return FormalSum(tuple(sorted((s, c) for s, c in acc.items() if c != sr.zero)))

    def plus(self, other: "FormalSum", ground: SystemDef) -> "FormalSum":
        return FormalSum.of(self.terms + other.terms, ground)

    def scaled(self, a: int, ground: SystemDef) -> "FormalSum":
        mul = ground.semiring.mul
        return FormalSum.of(((s, mul[a][c]) for s, c in self.terms), ground)

    def negated(self, ground: SystemDef) -> "FormalSum":
        perm = ground.negation.perm
        return FormalSum(tuple((s, perm[c]) for s, c in self.terms))


def free_module(base: tuple[str, ...], ground: SystemDef,
                cap: int = DEFAULT_CAP) -> FiniteModuleSystem:
    """The free module on a finite base: all coefficient combinations.

    Elements are the additive closure of the tangible-scaled base symbols,
    which is exactly the set of coefficient maps base -> ground carrier.
    """
    sr = ground.semiring
    size = sr.n ** len(base)
    if size > cap:
        raise FreeOverflow(size, cap)
    k = len(base)
    elems: list[FormalSum] = []
    seen: dict[FormalSum, int] = {}

    def register(fs: FormalSum) -> int:
        if fs not in seen:
            seen[fs] = len(elems)
            elems.append(fs)
        return seen[fs]

    register(FormalSum(()))
    gens = [FormalSum(((b, t),)) for b in range(k) for t in sorted(sr.tangibles)]
    for g in gens:
        register(g)
    i = 0
    while i < len(elems):
        x = elems[i]
        i += 1
        for g in gens:
            y = x.plus(g, ground)
            if y not in seen:
                register(y)
                if len(elems) > cap:
                    raise FreeOverflow(len(elems), cap)
    order = sorted(range(len(elems)), key=lambda i: elems[i].terms)
    elems = [elems[i] for i in order]
    index = {fs: i for i, fs in enumerate(elems)}

    def name_of(fs: FormalSum) -> str:
        if not fs.terms:
            return "0"
        return "+".join(f"{sr.names[c]}*{base[s]}" for s, c in fs.terms)

    add = tuple(tuple(index[x.plus(y, ground)] for y in elems) for x in elems)
    left = tuple(tuple(index[x.scaled(a, ground)] for x in elems) for a in range(sr.n))
    neg = NegationMap(tuple(index[x.negated(ground)] for x in elems))
    tang = frozenset(index[FormalSum(((b, t),))] for b in range(k)
                     for t in sr.tangibles)
    return FiniteModuleSystem(
        names=tuple(name_of(fs) for fs in elems),
        zero=index[FormalSum(())], add=add,
        tangibles=tang, negation=neg,
        surpass=surpass_circ_tables(add, neg.perm),
        ground=ground, left_action=left,
    )


# ---------------------------------------------------------------------------
# tensor presentation


@dataclass(frozen=True)
class TensorPresentation:
    """The computed quotient: a finite additive triple on congruence classes.

    ``module`` is an actionless module system on the classes;
    ``simple_tensor[(i1, i2)]`` maps a generator pair to its class, and
    ``members`` keeps the discovered formal-sum representatives per class
    (as sorted generator-id multisets) so well-definedness can be re-checked
    from alternative representatives.
    """

    module: FiniteModuleSystem
    left: FiniteModuleSystem
    right: FiniteModuleSystem
    ground: SystemDef
    simple_tensor: dict[tuple[int, int], int]
    members: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def n_classes(self) -> int:
        return self.module.n

    def class_of(self, i1: int, i2: int) -> int:
        return self.simple_tensor[(i1, i2)]


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def tensor_product(m1: FiniteModuleSystem, m2: FiniteModuleSystem,
                   ground: SystemDef, cap: int = DEFAULT_CAP) -> TensorPresentation:
    """Quotient of the free structure on pairs by the balanced congruence.

    ``m1`` must act on the right over ``ground`` and ``m2`` on the left.
    Raises :class:`TensorOverflow` when the closure would exceed ``cap``
    nodes and :class:`StructureError` when the actions do not line up.
    """
    if m1.right_action is None or m1.ground_right != ground:
        raise StructureError("left factor is not a right module over the ground")
    if m2.left_action is None or m2.ground != ground:
        raise StructureError("right factor is not a left module over the ground")
    n1, n2, ng = m1.n, m2.n, ground.n
    gid = lambda x, y: x * n2 + y
    n_gens = n1 * n2
    neg1, neg2 = m1.negation.perm, m2.negation.perm

    uf = _UnionFind()
    ZERO = uf.make()
    for _ in range(n_gens):
        uf.make()
    gnode = lambda g: g + 1

    # smallest generator id per class, for canonical forms
    min_gen: dict[int, int] = {}

    def note_gen(root: int, g: int) -> None:
        if root not in min_gen or g < min_gen[root]:
            min_gen[root] = g

    def union(a: int, b: int) -> bool:
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            return False
        ga, gb = min_gen.get(ra), min_gen.get(rb)
        uf.union(ra, rb)
        root = uf.find(ra)
        for g in (ga, gb):
            if g is not None:
                note_gen(root, g)
        return True

    for g in range(n_gens):
        note_gen(gnode(g), g)

    # primitive generator-to-generator pairs
    zero_root_gens = set()
    for y in range(n2):
        zero_root_gens.add(gid(m1.zero, y))
    for x in range(n1):
        zero_root_gens.add(gid(x, m2.zero))
    for g in sorted(zero_root_gens):
        union(gnode(g), ZERO)
    for x in range(n1):
        for a in range(ng):
            xa = m1.right_action[x][a]
            for y in range(n2):
                union(gnode(gid(xa, y)), gnode(gid(x, m2.left_action[a][y])))
    for x in range(n1):
        for y in range(n2):
            union(gnode(gid(x, y)), gnode(gid(neg1[x], neg2[y])))   # double negation
            union(gnode(gid(neg1[x], y)), gnode(gid(x, neg2[y])))   # negation transfer

    # splitting instances: generator ~ two-generator sum
    splits: list[tuple[int, int, int]] = []
    for x in range(n1):
        for xp in range(x, n1):
            for y in range(n2):
                splits.append((gid(m1.add[x][xp], y), gid(x, y), gid(xp, y)))
    for y in range(n2):
        for yp in range(y, n2):
            for x in range(n1):
                splits.append((gid(x, m2.add[y][yp]), gid(x, y), gid(x, yp)))

    sums: dict[tuple[int, ...], int] = {}
    zero_root = lambda: uf.find(ZERO)

    def grep(g: int) -> int | None:
        """Canonical generator of g's class, or None when the class is zero."""
        root = uf.find(gnode(g))
        if root == zero_root():
            return None
        return min_gen[root]

    def canon(ms) -> tuple[int, ...]:
        cur = []
        for g in ms:
            r = grep(g)
            if r is not None:
                cur.append(r)
        cur.sort()
        while True:
            fused = False
            for i in range(len(cur) - 1):
                if cur[i] == cur[i + 1]:
                    g = cur[i]
                    x, y = divmod(g, n2)
                    d = grep(gid(m1.add[x][x], y))
                    del cur[i:i + 2]
                    if d is not None:
                        cur.append(d)
                    cur.sort()
                    fused = True
                    break
            if not fused:
                return tuple(cur)

    def resolve(key: tuple[int, ...]) -> int:
        if not key:
            return uf.find(ZERO)
        if len(key) == 1:
            return uf.find(gnode(key[0]))
        node = sums.get(key)
        if node is None:
            node = uf.make()
            sums[key] = node
            if len(sums) + n_gens + 1 > cap:
                raise TensorOverflow(len(sums) + n_gens + 1, cap)
        return uf.find(node)

    def closure_pass() -> bool:
        changed = False
        for (tgt, a, b) in splits:
            s = canon((a, b))
            changed |= union(uf.find(gnode(tgt)), resolve(s))
        # renormalise registered sums under the current partition
        for key in sorted(sums):
            node = sums.pop(key)
            k2 = canon(key)
            if not k2:
                changed |= union(node, ZERO)
            elif len(k2) == 1:
                changed |= union(node, gnode(k2[0]))
            elif k2 in sums:
                changed |= union(node, sums[k2])
            else:
                sums[k2] = node
        return changed

    while closure_pass():
        pass

    # monoid elements: close the generator classes under addition, then
    # sweep every splitting relation against every discovered class; any
    # merge re-runs the whole loop, so the final partition is a fixed point
    while True:
        reps: dict[int, tuple[int, ...]] = {uf.find(ZERO): ()}
        for g in range(n_gens):
            root = uf.find(gnode(g))
            if root != uf.find(ZERO):
                reps.setdefault(root, (min_gen[root],))
        gen_roots = sorted(r for r in set(reps) if reps[r])
        frontier = sorted(reps)
        while frontier:
            root = frontier.pop()
            base = reps[root]
            for gr in gen_roots:
                key = canon(base + reps[gr])
                node = resolve(key)
                if node not in reps:
                    reps[node] = key
                    frontier.append(node)
                    if len(reps) > cap:
                        raise TensorOverflow(len(reps), cap)
        changed = closure_pass()

        # class-level split triples, deduplicated
        triples = set()
        for (tgt, a, b) in splits:
            triples.add((canon((tgt,)), canon((a,)), canon((b,))))
        for root in sorted(reps):
            base = reps[root]
            for (kt, ka, kb) in sorted(triples):
                lhs = resolve(canon(base + kt))
                rhs = resolve(canon(base + ka + kb))
                if uf.find(lhs) != uf.find(rhs):
                    union(lhs, rhs)
                    changed = True
        if not changed:
            break
        while closure_pass():
            pass

    # materialise the class triple
    roots = sorted(reps, key=lambda r: (len(reps[r]), reps[r]))
    # zero first
    zr = uf.find(ZERO)
    roots.remove(zr)
    roots.insert(0, zr)
    cindex = {r: i for i, r in enumerate(roots)}
    k = len(roots)

    def gen_name(g: int) -> str:
        x, y = divmod(g, n2)
        return f"{m1.names[x]}@{m2.names[y]}"

    names = tuple("0" if not reps[r] else "+".join(gen_name(g) for g in reps[r])
                  for r in roots)
    add = []
    for r1 in roots:
        row = []
        for r2 in roots:
            node = uf.find(resolve(canon(reps[r1] + reps[r2])))
            if node not in cindex:
                raise StructureError("tensor closure did not converge (addition)")
            row.append(cindex[node])
        add.append(tuple(row))
    add = tuple(add)

    neg_perm = []
    for r in roots:
        key = canon(tuple(gid(neg1[g // n2], g % n2) for g in reps[r]))
        node = uf.find(resolve(key))
        if node not in cindex:
            raise StructureError("tensor closure did not converge (negation)")
        neg_perm.append(cindex[node])
    neg = NegationMap(tuple(neg_perm))

    simple = {}
    for x in range(n1):
        for y in range(n2):
            simple[(x, y)] = cindex[uf.find(gnode(gid(x, y)))]
    tang = frozenset(simple[(x, y)] for x in m1.tangibles for y in m2.tangibles)

    module = FiniteModuleSystem(
        names=names, zero=0, add=add, tangibles=tang, negation=neg,
        surpass=surpass_circ_tables(add, neg.perm),
    )

    # collect member samples: canonical rep plus any registered sum keys
    member_lists: list[list[tuple[int, ...]]] = [[reps[r]] for r in roots]
    for key, node in sorted(sums.items()):
        r = uf.find(node)
        if r in cindex and key not in member_lists[cindex[r]]:
            if len(member_lists[cindex[r]]) < 4:
                member_lists[cindex[r]].append(key)
    for x in range(n1):
        for y in range(n2):
            c = simple[(x, y)]
            key = (gid(x, y),)
            if key not in member_lists[c] and len(member_lists[c]) < 4:
                member_lists[c].append(key)

    pres = TensorPresentation(
        module=module, left=m1, right=m2, ground=ground,
        simple_tensor=simple,
        members=tuple(tuple(ms) for ms in member_lists),
    )
    _verify_congruence(pres, splits)
    return pres


def _verify_congruence(pres: TensorPresentation, splits) -> None:
    """Certify the computed partition: the class addition is a commutative
    monoid, every generating pair lands in one class, and each splitting
    relation holds at the class level."""
    import numpy as np

    mod = pres.module
    k = mod.n
    A = np.array(mod.add, dtype=np.int32)
    if (A[0] != np.arange(k)).any():
        raise StructureError("tensor classes: zero not neutral")
    if (A != A.T).any():
        raise StructureError("tensor classes: addition not commutative")
    if (A[A, :] != A[np.arange(k)[:, None, None], A[None, :, :]]).any():
        raise StructureError("tensor classes: addition not associative")
    add = mod.add
    cls = pres.simple_tensor
    n2 = pres.right.n
    for (tgt, a, b) in splits:
        if cls[divmod(tgt, n2)] != add[cls[divmod(a, n2)]][cls[divmod(b, n2)]]:
            raise StructureError("tensor classes: splitting relation violated")
    perm = mod.negation.perm
    for x in range(k):
        if perm[perm[x]] != x:
            raise StructureError("tensor classes: negation not involutive")


# ---------------------------------------------------------------------------
# the universal property


def factor_bilinear(psi: tuple[tuple[int, ...], ...], pres: TensorPresentation,
                    target: FiniteModuleSystem) -> Morphism:
    """Induce a map on classes from a balanced bilinear table.

    ``psi[x][y]`` gives the target element for each generator pair.  The
    table is validated first (additivity in each slot, zero, balance over
    the ground, negation transfer); any failure raises
    :class:`BilinearityError` with a witness.  The induced map sends each
    class to the target-sum of psi over any representative; agreement over
    all stored representatives is re-checked.
    """
    m1, m2, ground = pres.left, pres.right, pres.ground
    n1, n2 = m1.n, m2.n
    if len(psi) != n1 or any(len(row) != n2 for row in psi):
        raise StructureError("bilinear table has wrong shape")
    tadd = target.add
    for y in range(n2):
        if psi[m1.zero][y] != target.zero:
            raise BilinearityError("psi(0, y) is nonzero", (m1.zero, y))
    for x in range(n1):
        if psi[x][m2.zero] != target.zero:
            raise BilinearityError("psi(x, 0) is nonzero", (x, m2.zero))
    for x in range(n1):
        for xp in range(x, n1):
            for y in range(n2):
                if psi[m1.add[x][xp]][y] != tadd[psi[x][y]][psi[xp][y]]:
                    raise BilinearityError("psi not additive in the first slot",
                                           (x, xp, y))
    for y in range(n2):
        for yp in range(y, n2):
            for x in range(n1):
                if psi[x][m2.add[y][yp]] != tadd[psi[x][y]][psi[x][yp]]:
                    raise BilinearityError("psi not additive in the second slot",
                                           (x, y, yp))
    for x in range(n1):
        for a in range(ground.n):
            xa = m1.right_action[x][a]
            for y in range(n2):
                if psi[xa][y] != psi[x][m2.left_action[a][y]]:
                    raise BilinearityError("psi not balanced over the ground",
                                           (x, a, y))
    neg1, neg2 = m1.negation.perm, m2.negation.perm
    negt = target.negation.perm
    for x in range(n1):
        for y in range(n2):
            v = psi[x][y]
            if psi[neg1[x]][y] != negt[v] or psi[x][neg2[y]] != negt[v]:
                raise BilinearityError("psi does not transfer negation", (x, y))

    def evaluate(key) -> int:
        acc = target.zero
        for g in key:
            x, y = divmod(g, n2)
            acc = tadd[acc][psi[x][y]]
        return acc

    mapping = []
    for c, members in enumerate(pres.members):
        vals = {evaluate(k) for k in members}
        if len(vals) != 1:
            raise BilinearityError("psi does not respect a congruence class",
                                   (c,) + tuple(sorted(vals)))
        mapping.append(vals.pop())
    return Morphism(pres.module, target, tuple(mapping), KIND_HOM)
