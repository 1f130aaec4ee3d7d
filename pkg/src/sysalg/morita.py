"""Morita contexts: pairings, the generalized 2x2 matrix semiring, trace
ideals, generator/projectivity predicates, and executable verifiers for the
two structure theorems.

A context is a six-tuple (A, A', M, M', tau, tau') where M is an
(A,A')-bimodule, M' an (A',A)-bimodule, and the pairings
tau: M x M' -> A and tau': M' x M -> A' are balanced bilinear and satisfy
the two associativity equations

    tau(x,x') . y  =  x . tau'(x',y)        (i)
    x' . tau(x,y') =  tau'(x',x) . y'       (ii)

The verifiers search for the hypothesis witnesses the proofs start from,
then check the concluded inequalities exhaustively over the finite
carriers, reporting replayable witnesses either way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import (FiniteSemiring, NegationMap, StructureError,
                   SurpassRelation, SystemDef, Triple, ValidationReport,
                   additive_closure, surpass_circ, surpass_circ_tables)
from .modsys import (ENUM_BOUND, KIND_HOM, KIND_PRECEQ, FiniteModuleSystem,
                     Morphism, direct_power, enumerate_morphisms,
                     is_preceq_onto, preceq_image, quasi_zero_submodule,
                     regular_module, validate_module, zero_module)
from .tensor import TensorPresentation, factor_bilinear, tensor_product

DEFAULT_T_MAX = 4
DEFAULT_N_MAX = 3


@dataclass(frozen=True)
class MoritaContext:
    a: SystemDef
    aprime: SystemDef
    m: FiniteModuleSystem          # (a, aprime)-bimodule
    mprime: FiniteModuleSystem     # (aprime, a)-bimodule
    tau: tuple[tuple[int, ...], ...]       # m x mprime -> a
    tauprime: tuple[tuple[int, ...], ...]  # mprime x m -> aprime

    def check_shape(self) -> None:
        self.m.check_shape()
        self.mprime.check_shape()
        if self.m.ground != self.a or self.m.ground_right != self.aprime:
            raise StructureError("M must be an (A, A')-bimodule")
        if self.mprime.ground != self.aprime or self.mprime.ground_right != self.a:
            raise StructureError("M' must be an (A', A)-bimodule")
        if len(self.tau) != self.m.n or any(len(r) != self.mprime.n for r in self.tau):
            raise StructureError("tau table has wrong shape")
        if len(self.tauprime) != self.mprime.n or any(len(r) != self.m.n for r in self.tauprime):
            raise StructureError("tau' table has wrong shape")


def swap_context(ctx: MoritaContext) -> MoritaContext:
    """Exchange the two systems, the two bimodules and the two pairings."""
    return MoritaContext(a=ctx.aprime, aprime=ctx.a, m=ctx.mprime,
                         mprime=ctx.m, tau=ctx.tauprime, tauprime=ctx.tau)


# ---------------------------------------------------------------------------
# context construction helpers


def trivial_context(sys_def: SystemDef) -> MoritaContext:
    """(A, A, A, A) with both pairings given by multiplication."""
    reg = regular_module(sys_def)
    return MoritaContext(a=sys_def, aprime=sys_def, m=reg, mprime=reg,
                         tau=sys_def.semiring.mul, tauprime=sys_def.semiring.mul)


def mat2_system(sys_def: SystemDef, bound: int = 65536) -> SystemDef:
    """The 2x2 matrix system over a ground, via the trivial context."""
    return matrix_semiring(trivial_context(sys_def)).to_system(bound)


def row_column_context(sys_def: SystemDef) -> MoritaContext:
    """Rows and columns of length 2 paired by dot product and outer product.

    A acts on rows by scalars, Mat2(A) acts on rows from the right; columns
    dually.  tau is the dot product (a scalar), tau' the outer product
    (a 2x2 matrix).
    """
    a = sys_def
    sr = a.semiring
    mat = mat2_system(a)
    matsr = mat.semiring
    n = sr.n
    vecs = [(i, j) for i in range(n) for j in range(n)]
    vpos = {v: k for k, v in enumerate(vecs)}

    def ment(i, j, k, l):
        return matsr.index(f"[{sr.names[i]},{sr.names[j]};{sr.names[k]},{sr.names[l]}]")

    def msplit(e):
        # matrix element index -> entry tuple
        return _mat_entries(matsr.names[e], sr)

    add_v = tuple(tuple(vpos[(sr.add[x[0]][y[0]], sr.add[x[1]][y[1]])] for y in vecs)
                  for x in vecs)
    neg_v = NegationMap(tuple(vpos[(a.negation(x[0]), a.negation(x[1]))] for x in vecs))
    tang_v = frozenset(vpos[(t, sr.zero)] for t in sr.tangibles) | \
        frozenset(vpos[(sr.zero, t)] for t in sr.tangibles)
    scalar = tuple(tuple(vpos[(sr.mul[c][x[0]], sr.mul[c][x[1]])] for x in vecs)
                   for c in range(n))

    rows_ract = []
    for x in vecs:
        row = []
        for e in range(matsr.n):
            (p, q), (r, s) = msplit(e)
            row.append(vpos[(sr.add[sr.mul[x[0]][p]][sr.mul[x[1]][r]],
                             sr.add[sr.mul[x[0]][q]][sr.mul[x[1]][s]])])
        rows_ract.append(tuple(row))
    rows = FiniteModuleSystem(
        names=tuple(f"[{sr.names[i]},{sr.names[j]}]" for i, j in vecs),
        zero=vpos[(sr.zero, sr.zero)], add=add_v, tangibles=tang_v,
        negation=neg_v, surpass=surpass_circ_tables(add_v, neg_v.perm),
        ground=a, left_action=scalar,
        ground_right=mat, right_action=tuple(rows_ract),
    )

    cols_lact = []
    for e in range(matsr.n):
        (p, q), (r, s) = msplit(e)
        row = []
        for y in vecs:
            row.append(vpos[(sr.add[sr.mul[p][y[0]]][sr.mul[q][y[1]]],
                             sr.add[sr.mul[r][y[0]]][sr.mul[s][y[1]]])])
        cols_lact.append(tuple(row))
    cols_ract = tuple(tuple(vpos[(sr.mul[y[0]][c], sr.mul[y[1]][c])] for c in range(n))
                      for y in vecs)
    cols = FiniteModuleSystem(
        names=tuple(f"[{sr.names[i]};{sr.names[j]}]" for i, j in vecs),
        zero=vpos[(sr.zero, sr.zero)], add=add_v, tangibles=tang_v,
        negation=neg_v, surpass=surpass_circ_tables(add_v, neg_v.perm),
        ground=mat, left_action=tuple(cols_lact),
        ground_right=a, right_action=cols_ract,
    )

    tau = tuple(tuple(sr.add[sr.mul[x[0]][y[0]]][sr.mul[x[1]][y[1]]] for y in vecs)
                for x in vecs)
    taup = tuple(tuple(ment(sr.mul[y[0]][x[0]], sr.mul[y[0]][x[1]],
                            sr.mul[y[1]][x[0]], sr.mul[y[1]][x[1]]) for x in vecs)
                 for y in vecs)
    return MoritaContext(a=a, aprime=mat, m=rows, mprime=cols,
                         tau=tau, tauprime=taup)


def _mat_entries(name: str, sr: FiniteSemiring):
    body = name[1:-1]
    top, bottom = body.split(";")
    i, j = top.split(",")
    k, l = bottom.split(",")
    return (sr.index(i), sr.index(j)), (sr.index(k), sr.index(l))


# ---------------------------------------------------------------------------
# context validation


def validate_context(ctx: MoritaContext) -> ValidationReport:
    """Component validity, pairing bilinearity, and the two associativity
    axioms, all exhaustively."""
    ctx.check_shape()
    rep = ValidationReport(subject="morita-context")
    for label, module in (("M", ctx.m), ("M'", ctx.mprime)):
        sub = validate_module(module)
        for v in sub.violations:
            rep.violations.append(type(v)(f"component-{label}/{v.axiom}", v.witness,
                                          v.message, v.count))
        rep.checked.extend(f"component-{label}/{ax}" for ax in sub.checked)

    rep.merge(_validate_pairing(ctx.tau, ctx.m, ctx.mprime, ctx.a, ctx.aprime, "tau"))
    rep.merge(_validate_pairing_prime(ctx.tauprime, ctx.mprime, ctx.m, ctx.aprime, ctx.a, "tau'"))

    m, mp = ctx.m, ctx.mprime
    bad = [(x, xp, y) for x in range(m.n) for xp in range(mp.n) for y in range(m.n)
           if m.left_action[ctx.tau[x][xp]][y] != m.right_action[x][ctx.tauprime[xp][y]]]
    rep.check("context/i-associativity", bad[0] if bad else (), len(bad),
              bad and "tau(x,x').y != x.tau'(x',y) at (%s,%s,%s)"
              % (m.names[bad[0][0]], mp.names[bad[0][1]], m.names[bad[0][2]]) or "")
    bad = [(xp, x, yp) for xp in range(mp.n) for x in range(m.n) for yp in range(mp.n)
           if mp.right_action[xp][ctx.tau[x][yp]] != mp.left_action[ctx.tauprime[xp][x]][yp]]
    rep.check("context/ii-associativity", bad[0] if bad else (), len(bad),
              bad and "x'.tau(x,y') != tau'(x',x).y' at (%s,%s,%s)"
              % (mp.names[bad[0][0]], m.names[bad[0][1]], mp.names[bad[0][2]]) or "")
    return rep


def _validate_pairing(tau, m, mp, a: SystemDef, ap: SystemDef, label: str) -> ValidationReport:
    """tau: M x M' -> A must be additive in both slots, A-linear outside
    (left on M, right on M'), A'-balanced in the middle, and slide negation."""
    rep = ValidationReport(subject=label)
    sra = a.semiring
    bad = [(x, y, xp) for x in range(m.n) for y in range(x, m.n) for xp in range(mp.n)
           if tau[m.add[x][y]][xp] != sra.add[tau[x][xp]][tau[y][xp]]]
    rep.check(f"{label}/additive-left", bad[0] if bad else (), len(bad),
              bad and "not additive in the first slot at (%s,%s,%s)"
              % (m.names[bad[0][0]], m.names[bad[0][1]], mp.names[bad[0][2]]) or "")
    bad = [(x, xp, yp) for x in range(m.n) for xp in range(mp.n) for yp in range(xp, mp.n)
           if tau[x][mp.add[xp][yp]] != sra.add[tau[x][xp]][tau[x][yp]]]
    rep.check(f"{label}/additive-right", bad[0] if bad else (), len(bad),
              bad and "not additive in the second slot" or "")
    bad = [(c, x, xp) for c in range(a.n) for x in range(m.n) for xp in range(mp.n)
           if tau[m.left_action[c][x]][xp] != sra.mul[c][tau[x][xp]]]
    rep.check(f"{label}/outer-left-linear", bad[0] if bad else (), len(bad),
              bad and "tau(c.x, x') != c.tau(x, x')" or "")
    bad = [(x, xp, c) for x in range(m.n) for xp in range(mp.n) for c in range(a.n)
           if tau[x][mp.right_action[xp][c]] != sra.mul[tau[x][xp]][c]]
    rep.check(f"{label}/outer-right-linear", bad[0] if bad else (), len(bad),
              bad and "tau(x, x'.c) != tau(x, x').c" or "")
    bad = [(x, c, xp) for x in range(m.n) for c in range(ap.n) for xp in range(mp.n)
           if tau[m.right_action[x][c]][xp] != tau[x][mp.left_action[c][xp]]]
    rep.check(f"{label}/balanced", bad[0] if bad else (), len(bad),
              bad and "tau(x.c, x') != tau(x, c.x')" or "")
    pa = a.negation.perm
    bad = [(x, xp) for x in range(m.n) for xp in range(mp.n)
           if not tau[m.negation(x)][xp] == pa[tau[x][xp]] == tau[x][mp.negation(xp)]]
    rep.check(f"{label}/negation", bad[0] if bad else (), len(bad),
              bad and "negation does not slide through the pairing" or "")
    return rep


def _validate_pairing_prime(taup, mp, m, ap: SystemDef, a: SystemDef, label: str) -> ValidationReport:
    return _validate_pairing(taup, mp, m, ap, a, label)


# ---------------------------------------------------------------------------
# the generalized matrix semiring


@dataclass(frozen=True)
class MatrixSemiring:
    """Lazy 2x2 generalized matrix structure over (A, M; M', A').

    Elements are (a, x, x', a') tuples; the product routes the cross terms
    through the pairings.  ``to_system`` materializes the full tables when
    the carrier fits a bound; ``validate`` picks the direct route when it
    can and otherwise decomposes blockwise (component, pairing and context
    axioms), which jointly are equivalent to the matrix semiring laws.
    """

    ctx: MoritaContext

    @property
    def carrier_size(self) -> int:
        c = self.ctx
        return c.a.n * c.m.n * c.mprime.n * c.aprime.n

    def add(self, p, q):
        c = self.ctx
        return (c.a.semiring.add[p[0]][q[0]], c.m.add[p[1]][q[1]],
                c.mprime.add[p[2]][q[2]], c.aprime.semiring.add[p[3]][q[3]])

    def mul(self, p, q):
        c = self.ctx
        a, x, xp, ap = p
        b, y, yp, bp = q
        sa, sp = c.a.semiring, c.aprime.semiring
        return (
            sa.add[sa.mul[a][b]][c.tau[x][yp]],
            c.m.add[c.m.left_action[a][y]][c.m.right_action[x][bp]],
            c.mprime.add[c.mprime.right_action[xp][b]][c.mprime.left_action[ap][yp]],
            sp.add[c.tauprime[xp][y]][sp.mul[ap][bp]],
        )

    def zero(self):
        c = self.ctx
        return (c.a.semiring.zero, c.m.zero, c.mprime.zero, c.aprime.semiring.zero)

    def one(self):
        c = self.ctx
        return (c.a.semiring.one, c.m.zero, c.mprime.zero, c.aprime.semiring.one)

    def neg(self, p):
        c = self.ctx
        return (c.a.negation(p[0]), c.m.negation(p[1]),
                c.mprime.negation(p[2]), c.aprime.negation(p[3]))

    def elements(self):
        c = self.ctx
        return itertools.product(range(c.a.n), range(c.m.n),
                                 range(c.mprime.n), range(c.aprime.n))

    def is_tangible(self, p) -> bool:
        # one tangible block, zeros elsewhere (the direct-sum convention);
        # larger tangible sets either stop generating additively or break
        # tangible closure of the row/column bimodules
        c = self.ctx
        slots = ((p[0], c.a.semiring.tangibles, c.a.semiring.zero),
                 (p[1], c.m.tangibles, c.m.zero),
                 (p[2], c.mprime.tangibles, c.mprime.zero),
                 (p[3], c.aprime.semiring.tangibles, c.aprime.semiring.zero))
        nonzero = 0
        tangible = 0
        for v, tang, z in slots:
            if v == z:
                continue
            nonzero += 1
            if v in tang:
                tangible += 1
        return nonzero == 1 and tangible == 1

    def name(self, p) -> str:
        c = self.ctx
        return (f"[{c.a.semiring.names[p[0]]},{c.m.names[p[1]]};"
                f"{c.mprime.names[p[2]]},{c.aprime.semiring.names[p[3]]}]")

    def to_system(self, bound: int = 65536) -> SystemDef:
        if self.carrier_size > bound:
            raise StructureError(
                f"matrix carrier of size {self.carrier_size} exceeds bound {bound}")
        elems = list(self.elements())
        pos = {p: i for i, p in enumerate(elems)}
        add = tuple(tuple(pos[self.add(p, q)] for q in elems) for p in elems)
        mul = tuple(tuple(pos[self.mul(p, q)] for q in elems) for p in elems)
        sr = FiniteSemiring(
            names=tuple(self.name(p) for p in elems),
            zero=pos[self.zero()], one=pos[self.one()],
            add=add, mul=mul,
            tangibles=frozenset(pos[p] for p in elems if self.is_tangible(p)),
        )
        neg = NegationMap(tuple(pos[self.neg(p)] for p in elems))
        triple = Triple(sr, neg)
        return SystemDef(triple, surpass_circ(triple))

    def validate(self, direct_bound: int = 512) -> ValidationReport:
        from .core import validate_semiring
        if self.carrier_size <= direct_bound:
            return validate_semiring(self.to_system(bound=direct_bound * 4).semiring)
        return self.validate_blockwise()

    def validate_blockwise(self) -> ValidationReport:
        """Exhaustive blockwise decomposition of the matrix semiring laws.

        The 2x2 product laws expand entrywise into: the component semiring
        laws, the bimodule laws of M and M', bilinearity/balance of the
        pairings, and the two context axioms.  Failures of the context
        axioms are reported as associativity failures with a concrete
        block-concentrated matrix triple that replays them.
        """
        from .core import validate_semiring
        ctx = self.ctx
        rep = ValidationReport(subject="matrix-semiring[blockwise]")
        rep.merge(validate_semiring(ctx.a.semiring))
        rep.merge(validate_semiring(ctx.aprime.semiring))
        sub = validate_context(ctx)
        for v in sub.violations:
            if v.axiom == "context/i-associativity":
                x, xp, y = v.witness
                rep.check("mul/associative",
                          (self._e12(x), self._e21(xp), self._e12(y)), v.count,
                          "matrix associativity fails on block-concentrated "
                          f"witness from {v.message}")
            elif v.axiom == "context/ii-associativity":
                xp, x, yp = v.witness
                rep.check("mul/associative",
                          (self._e21(xp), self._e12(x), self._e21(yp)), v.count,
                          "matrix associativity fails on block-concentrated "
                          f"witness from {v.message}")
            else:
                rep.violations.append(v)
                rep.checked.append(v.axiom)
        rep.checked.extend(ax for ax in sub.checked)
        return rep

    def _e12(self, x):
        c = self.ctx
        return (c.a.semiring.zero, x, c.mprime.zero, c.aprime.semiring.zero)

    def _e21(self, xp):
        c = self.ctx
        return (c.a.semiring.zero, c.m.zero, xp, c.aprime.semiring.zero)


def matrix_semiring(ctx: MoritaContext) -> MatrixSemiring:
    ctx.check_shape()
    return MatrixSemiring(ctx)


# ---------------------------------------------------------------------------
# trace ideals and generation


def trace_ideal(m: FiniteModuleSystem, grade: str = "strict",
                bound: int = ENUM_BOUND) -> frozenset[int]:
    """All finite sums of morphism values M -> A, closed under addition.

    ``grade`` selects plain homomorphisms ("strict") or preceq-morphisms
    ("preceq").  Enumeration falls back to generator-determined maps above
    the bound, which restricts the preceq grade to its additive members.
    """
    if m.ground is None:
        raise StructureError("module has no ground system")
    kind = KIND_HOM if grade == "strict" else KIND_PRECEQ
    reg = regular_module(m.ground)
    morphs = enumerate_morphisms(m, reg, kind, bound)
    values = {f.mapping[x] for f in morphs for x in range(m.n)}
    sr = m.ground.semiring
    return additive_closure(sr.add, values | {sr.zero})


def preceq_generates(subset, sys_def: SystemDef) -> tuple[bool, int | None]:
    """True iff every element is below some finite sum from the subset.

    The carrier is finite, so the sum closure is computed exactly; the
    verdict is always definite.  Returns a witness element on failure.
    """
    sr = sys_def.semiring
    sums = additive_closure(sr.add, set(subset) | {sr.zero})
    R = sys_def.surpass
    for b in range(sys_def.n):
        if not any(R.holds(b, s) for s in sums):
            return False, b
    return True, None


@dataclass
class GeneratorVerdicts:
    """The three equivalent characterizations, evaluated independently."""

    onto_power: bool
    onto_power_detail: str
    trace_one: bool
    trace_one_detail: str
    image_generates: bool
    image_generates_detail: str
    complete: bool = True

    @property
    def all_agree(self) -> bool:
        return self.onto_power == self.trace_one == self.image_generates


def is_preceq_generator(m: FiniteModuleSystem, n_max: int = DEFAULT_N_MAX,
                        bound: int = ENUM_BOUND,
                        power_bound: int = 20000) -> GeneratorVerdicts:
    """Evaluate all three generator characterizations over the ground.

    (a) some power of M admits a preceq-onto preceq-morphism onto the
    regular module, (b) the preceq trace ideal reaches above the unit,
    (c) some preceq-morphic image of a power preceq-generates the ground.
    """
    if m.ground is None:
        raise StructureError("module has no ground system")
    ground = m.ground
    reg = regular_module(ground)

    onto = False
    onto_detail = "no preceq-onto morphism found"
    img_gen = False
    img_detail = "no power image preceq-generates"
    complete = True
    for k in range(1, n_max + 1):
        if m.n ** k > power_bound:
            complete = False
            break
        power = m if k == 1 else direct_power(m, k, power_bound)
        try:
            morphs = enumerate_morphisms(power, reg, KIND_PRECEQ, bound)
        except StructureError:
            complete = False
            break
        if power.n ** max(power.n - 1, 0) > bound:
            complete = False          # generator-restricted search only
        for f in morphs:
            if not onto:
                ok, _ = is_preceq_onto(f)
                if ok:
                    onto = True
                    onto_detail = f"power {k}, map {f.mapping}"
            if not img_gen:
                ok, _ = preceq_generates(preceq_image(f), ground)
                if ok:
                    img_gen = True
                    img_detail = f"power {k}, map {f.mapping}"
            if onto and img_gen:
                break
        if onto and img_gen:
            break

    trace = trace_ideal(m, "preceq", bound)
    sr = ground.semiring
    R = ground.surpass
    hits = sorted(t for t in trace if R.holds(sr.one, t))
    trace_one = bool(hits)
    trace_detail = (f"one below trace element {sr.names[hits[0]]}" if hits
                    else "unit not below any trace sum")
    return GeneratorVerdicts(onto, onto_detail, trace_one, trace_detail,
                             img_gen, img_detail, complete)


def is_fin_generated_preceq(m: FiniteModuleSystem, n_max: int = DEFAULT_N_MAX) -> tuple[bool, tuple]:
    """True iff a tuple of at most n_max elements dominates the module:
    every b is below some tangible-or-zero combination of the tuple."""
    if m.ground is None:
        raise StructureError("module has no ground system")
    sr = m.ground.semiring
    t0 = sorted(sr.tangibles | {sr.zero})
    R = m.surpass
    nonzero = [x for x in range(m.n) if x != m.zero]
    if all(R.holds(b, m.zero) for b in range(m.n)):
        return True, ()
    for k in range(1, n_max + 1):
        for xs in itertools.combinations(nonzero, k):
            reach = set()
            for coeffs in itertools.product(t0, repeat=k):
                reach.add(m.sum_of(m.left_action[a][x] for a, x in zip(coeffs, xs)))
            if all(any(R.holds(b, r) for r in reach) for b in range(m.n)):
                return True, xs
    return False, ()


# ---------------------------------------------------------------------------
# projectivity


@dataclass(frozen=True)
class DualBasis:
    """Pairs (y_j, f_j) with every x below the sum of f_j(x) . y_j."""

    elements: tuple[int, ...]
    morphisms: tuple[Morphism, ...]

    def check(self, m: FiniteModuleSystem) -> bool:
        for x in range(m.n):
            rhs = m.sum_of(m.left_action[f.mapping[x]][y]
                           for y, f in zip(self.elements, self.morphisms))
            if not m.surpass.holds(x, rhs):
                return False
        return True


@dataclass
class ProjectivityReport:
    dual_basis: DualBasis | None
    dual_basis_searched: bool
    lifting_ok: bool | None
    lifting_checked: int
    lifting_counterexample: tuple | None

    @property
    def projective(self) -> bool | None:
        if self.dual_basis is not None:
            return True
        if self.lifting_ok is False:
            return False
        return None if not self.dual_basis_searched else self.lifting_ok


def _dual_basis_search(p: FiniteModuleSystem, t_max: int,
                       bound: int) -> DualBasis | None:
    reg = regular_module(p.ground)
    morphs = enumerate_morphisms(p, reg, KIND_PRECEQ, bound)
    # candidate (f, y) pairs with their domination vectors
    cands = []
    for f in morphs:
        for y in range(p.n):
            vec = tuple(p.left_action[f.mapping[x]][y] for x in range(p.n))
            cands.append((f, y, vec))
    R = p.surpass
    add = p.add
    full = list(range(p.n))

    def covers(vecsum):
        return all(R.holds(x, vecsum[x]) for x in full)

    for t in range(1, t_max + 1):
        for combo in itertools.combinations_with_replacement(range(len(cands)), t):
            acc = [p.zero] * p.n
            for i in combo:
                vec = cands[i][2]
                acc = [add[a][v] for a, v in zip(acc, vec)]
            if covers(acc):
                return DualBasis(
                    elements=tuple(cands[i][1] for i in combo),
                    morphisms=tuple(cands[i][0] for i in combo))
    return None


def check_preceq_projective(p: FiniteModuleSystem, t_max: int = DEFAULT_T_MAX,
                            bound: int = ENUM_BOUND,
                            family: list[FiniteModuleSystem] | None = None) -> ProjectivityReport:
    """Two independent checks: a dual-basis search, and an exhaustive
    lifting check against preceq-onto maps between modules of a small
    family (regular, quasi-zero submodule, zero module by default)."""
    if p.ground is None:
        raise StructureError("module has no ground system")
    basis = _dual_basis_search(p, t_max, bound)

    if family is None:
        family = [regular_module(p.ground), quasi_zero_submodule(p.ground),
                  zero_module(p.ground)]
    lifting_ok = True
    checked = 0
    counterexample = None
    for mid in family:
        for tgt in family:
            try:
                hs = enumerate_morphisms(mid, tgt, KIND_PRECEQ, bound)
                fs = enumerate_morphisms(p, tgt, KIND_PRECEQ, bound)
                lifts = enumerate_morphisms(p, mid, KIND_PRECEQ, bound)
            except StructureError:
                continue
            for h in hs:
                ok, _ = is_preceq_onto(h)
                if not ok:
                    continue
                for f in fs:
                    checked += 1
                    R = tgt.surpass
                    found = any(
                        all(R.holds(f.mapping[x], h.mapping[lift.mapping[x]])
                            for x in range(p.n))
                        for lift in lifts)
                    if not found:
                        lifting_ok = False
                        if counterexample is None:
                            counterexample = (h.mapping, f.mapping)
    return ProjectivityReport(basis, True, lifting_ok, checked, counterexample)


# ---------------------------------------------------------------------------
# theorem verifiers


@dataclass(frozen=True)
class Claim:
    name: str
    passed: bool
    detail: str
    informational: bool = False


@dataclass
class TheoremReport:
    theorem: str
    hypothesis: str                  # "found" | "unmet" | "indeterminate"
    hypothesis_detail: str
    hypothesis_witness: tuple | None
    claims: list[Claim] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.hypothesis == "found"

    @property
    def passed(self) -> bool:
        if not self.applicable:
            return False
        return all(c.passed for c in self.claims if not c.informational)

    def lines(self) -> list[str]:
        out = [f"{self.theorem}: hypothesis {self.hypothesis} ({self.hypothesis_detail})"]
        for c in self.claims:
            tag = "PASS" if c.passed else "FAIL"
            extra = " [informational]" if c.informational else ""
            out.append(f"  {tag}{extra} {c.name}: {c.detail}")
        return out


def _bounded_sum_search(values, sr_add, zero, accept, t_max):
    """Search sums of at most t_max values (with repetition) accepted by
    ``accept``.  Values is a list of (value, payload).  Returns (status,
    sum, list of payloads): status "found", "unmet" (search saturated) or
    "indeterminate" (budget exhausted while still growing)."""
    level = {}
    for v, payload in values:
        if v not in level:
            level[v] = (payload,)
    seen = dict(level)
    for v in sorted(seen):
        if accept(v):
            return "found", v, list(seen[v])
    for _ in range(1, t_max):
        nxt = {}
        for v in sorted(level):
            for w, payload in values:
                u = sr_add[v][w]
                if u not in seen and u not in nxt:
                    nxt[u] = level[v] + (payload,)
        if not nxt:
            return "unmet", None, []
        for u in sorted(nxt):
            if accept(u):
                return "found", u, list(nxt[u])
        seen.update(nxt)
        level = nxt
    # one more expansion probe to distinguish saturation from truncation
    for v in sorted(level):
        for w, _ in values:
            if sr_add[v][w] not in seen:
                return "indeterminate", None, []
    return "unmet", None, []


def verify_mor1(ctx: MoritaContext, t_max: int = DEFAULT_T_MAX,
                n_max: int = DEFAULT_N_MAX, bound: int = ENUM_BOUND) -> TheoremReport:
    """The progenerator theorem, run on a concrete context.

    Hypothesis: pairs (y_j, y_j') with the unit of A' below the sum of
    tau'(y_j', y_j) -- the preceq-onto form of tau'.  When found, the maps
    f_j = tau(. , y_j') and elements y_j must form a dual basis:
    x below sum f_j(x) . y_j for every x in M.  The preceq-generator and
    preceq-finite-generation verdicts for M are evaluated independently
    and reported alongside.
    """
    ctx.check_shape()
    ap = ctx.aprime
    srp = ap.semiring
    values = [(ctx.tauprime[yp][y], (y, yp))
              for y in range(ctx.m.n) for yp in range(ctx.mprime.n)]
    status, total, pairs = _bounded_sum_search(
        values, srp.add, srp.zero,
        lambda v: ap.surpass.holds(srp.one, v), t_max)
    rep = TheoremReport(
        theorem="progenerator",
        hypothesis=status,
        hypothesis_detail=(f"unit of A' below sum of {len(pairs)} pairings"
                           if status == "found" else
                           "no pair sum dominates the unit of A'"),
        hypothesis_witness=tuple(pairs) if status == "found" else None,
    )
    if status != "found":
        return rep

    m = ctx.m
    bad = []
    for x in range(m.n):
        rhs = m.sum_of(m.left_action[ctx.tau[x][yp]][y] for (y, yp) in pairs)
        if not m.surpass.holds(x, rhs):
            bad.append((x, rhs))
    rep.claims.append(Claim(
        "dual-basis-inequality", not bad,
        f"checked all {m.n} module elements"
        + ("" if not bad else f"; first failure at {m.names[bad[0][0]]}")))

    left_reduct = FiniteModuleSystem(
        names=m.names, zero=m.zero, add=m.add, tangibles=m.tangibles,
        negation=m.negation, surpass=m.surpass, ground=ctx.a,
        left_action=m.left_action)
    gv = is_preceq_generator(left_reduct, n_max, bound)
    rep.claims.append(Claim("preceq-generator", gv.trace_one,
                            gv.trace_one_detail))
    rep.claims.append(Claim("generator-verdicts-agree", gv.all_agree,
                            f"onto-power={gv.onto_power}, trace={gv.trace_one}, "
                            f"image={gv.image_generates}", informational=True))
    fg, xs = is_fin_generated_preceq(left_reduct, n_max)
    rep.claims.append(Claim("preceq-finitely-generated", fg,
                            f"dominating tuple {tuple(m.names[x] for x in xs)}" if fg
                            else "no dominating tuple within bound"))
    return rep


def verify_morplus(ctx: MoritaContext, t_max: int = DEFAULT_T_MAX,
                   cap: int = 20000) -> TheoremReport:
    """The null-monicity proposition, run on a concrete context.

    Hypothesis: pairs (x_i, x_i') with the sum of tau(x_i, x_i') below the
    unit of A.  The statement names tau' as the null-monic map while the
    proof manipulates the kernel of tau; both readings are evaluated, each
    on its own computed tensor presentation, and reported separately (the
    tau-side reading is the load-bearing claim, the tau'-side one is
    informational).
    """
    ctx.check_shape()
    a = ctx.a
    sra = a.semiring
    values = [(ctx.tau[x][xp], (x, xp))
              for x in range(ctx.m.n) for xp in range(ctx.mprime.n)]
    status, total, pairs = _bounded_sum_search(
        values, sra.add, sra.zero,
        lambda v: a.surpass.holds(v, sra.one), t_max)
    rep = TheoremReport(
        theorem="null-monic",
        hypothesis=status,
        hypothesis_detail=(f"sum of {len(pairs)} pairings below the unit of A"
                           if status == "found" else
                           "no pair sum sits below the unit of A"),
        hypothesis_witness=tuple(pairs) if status == "found" else None,
    )
    if status != "found":
        return rep

    for label, left, right, ground, table, target_sys, informational in (
            ("tau-side", ctx.m, ctx.mprime, ctx.aprime, ctx.tau, ctx.a, False),
            ("tauprime-side", ctx.mprime, ctx.m, ctx.a, ctx.tauprime, ctx.aprime, True)):
        pres = tensor_product(left, right, ground, cap)
        target = regular_module(target_sys)
        induced = factor_bilinear(table, pres, target)
        Rt = target_sys.surpass
        Rp = pres.module.surpass
        zero_t = target_sys.semiring.zero
        kernel = [c for c in range(pres.n_classes)
                  if Rt.holds(zero_t, induced.mapping[c])]
        bad = [c for c in kernel if not Rp.holds(pres.module.zero, c)]
        rep.claims.append(Claim(
            f"null-monic({label})", not bad,
            f"{len(kernel)} null-kernel classes out of {pres.n_classes}"
            + ("" if not bad else
               f"; class {pres.module.names[bad[0]]} not above zero"),
            informational=informational))
    return rep
