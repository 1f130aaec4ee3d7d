"""Table-driven finite semirings, negation maps and surpassing relations.

Everything here is finite and explicit: a carrier is an ordered list of
element names, operations are row-major tables of indices, and every axiom
is checked exhaustively.  Validators never raise on an axiom failure; they
return a :class:`ValidationReport` carrying the first witness per violated
axiom plus a total violation count.  Malformed tables (wrong shape, index
out of range) are a different kind of problem and raise
:class:`StructureError`.

All structures are immutable after construction and all operations are
pure, so shared instances are safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

DTYPE = np.int32


class StructureError(ValueError):
    """Malformed structure data (table shape / index errors)."""


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    message: str
    count: int = 1


@dataclass
class ValidationReport:
    """Outcome of an exhaustive axiom check.

    ``violations`` holds one entry per violated axiom: the first witness in
    canonical (row-major) order and the total number of violating tuples.
    """

    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def check(self, axiom: str, first_witness, count: int, message: str) -> None:
        self.checked.append(axiom)
        if count:
            self.violations.append(Violation(axiom, tuple(first_witness), message, count))

    def passed(self, axiom: str) -> None:
        self.checked.append(axiom)

    def merge(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        self.checked.extend(other.checked)
        self.notes.extend(other.notes)

    def lines(self) -> list[str]:
        out = [f"{self.subject}: {'VALID' if self.ok else 'INVALID'}"]
        for v in self.violations:
            out.append(f"  FAIL {v.axiom}: {v.message} (violations: {v.count})")
        for n in self.notes:
            out.append(f"  note: {n}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


# ---------------------------------------------------------------------------
# structures


def _as_table(rows, n: int, m: int, what: str) -> tuple[tuple[int, ...], ...]:
    if len(rows) != n:
        raise StructureError(f"{what}: expected {n} rows, got {len(rows)}")
    out = []
    for i, row in enumerate(rows):
        if len(row) != m:
            raise StructureError(f"{what}: row {i} has {len(row)} entries, expected {m}")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def _check_entries(table, bound: int, what: str) -> None:
    for i, row in enumerate(table):
        for j, x in enumerate(row):
            if not 0 <= x < bound:
                raise StructureError(f"{what}[{i}][{j}] = {x} is not an element index")


@dataclass(frozen=True)
class FiniteSemiring:
    """A finite semiring with a distinguished tangible subset.

    ``add`` and ``mul`` are n-by-n tables over the element order given by
    ``names``; ``tangibles`` is the set of tangible element indices.
    """

    names: tuple[str, ...]
    zero: int
    one: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    tangibles: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.names)

    def check_shape(self) -> None:
        n = self.n
        if not 0 <= self.zero < n or not 0 <= self.one < n:
            raise StructureError("zero/one is not an element index")
        for what, t in (("add", self.add), ("mul", self.mul)):
            _as_table(t, n, n, what)
            _check_entries(t, n, what)
        for t in self.tangibles:
            if not 0 <= t < n:
                raise StructureError(f"tangible index {t} out of range")

    def add_of(self, a: int, b: int) -> int:
        return self.add[a][b]

    def mul_of(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def sum_of(self, xs) -> int:
        acc = self.zero
        for x in xs:
            acc = self.add[acc][x]
        return acc

    def name(self, i: int) -> str:
        return self.names[i]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructureError(f"unknown element {name!r}") from None


@dataclass(frozen=True)
class NegationMap:
    """An involutive additive automorphism standing in for minus."""

    perm: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.perm[i]

    @staticmethod
    def identity(n: int) -> "NegationMap":
        return NegationMap(tuple(range(n)))


@dataclass(frozen=True)
class SurpassRelation:
    """A relation on a carrier, stored as one bitmask row per element.

    Bit ``c`` of ``rows[a]`` is set iff ``a`` surpass-below ``c``.
    """

    n: int
    rows: tuple[int, ...]

    def holds(self, a: int, c: int) -> bool:
        return bool(self.rows[a] >> c & 1)

    def downset(self, c: int) -> int:
        """Bitmask of all b with b below c."""
        mask = 0
        for b in range(self.n):
            if self.rows[b] >> c & 1:
                mask |= 1 << b
        return mask

    def pairs(self) -> list[tuple[int, int]]:
        out = []
        for a in range(self.n):
            row = self.rows[a]
            while row:
                c = (row & -row).bit_length() - 1
                out.append((a, c))
                row &= row - 1
        return out

    @staticmethod
    def from_pairs(n: int, pairs) -> "SurpassRelation":
        rows = [0] * n
        for a, c in pairs:
            if not (0 <= a < n and 0 <= c < n):
                raise StructureError(f"surpass pair ({a},{c}) out of range")
            rows[a] |= 1 << c
        return SurpassRelation(n, tuple(rows))

    def to_bool_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=bool)
        for a in range(self.n):
            row = self.rows[a]
            while row:
                c = (row & -row).bit_length() - 1
                out[a, c] = True
                row &= row - 1
        return out


@dataclass(frozen=True)
class Triple:
    """A semiring carrier together with its negation map."""

    semiring: FiniteSemiring
    negation: NegationMap

    @property
    def n(self) -> int:
        return self.semiring.n

    def check_shape(self) -> None:
        self.semiring.check_shape()
        if sorted(self.negation.perm) != list(range(self.n)):
            raise StructureError("negation is not a permutation of the carrier")


@dataclass(frozen=True)
class SystemDef:
    """A triple with a surpassing relation (and optional stronger variant)."""

    triple: Triple
    surpass: SurpassRelation
    t_surpassing: bool = False

    @property
    def semiring(self) -> FiniteSemiring:
        return self.triple.semiring

    @property
    def negation(self) -> NegationMap:
        return self.triple.negation

    @property
    def n(self) -> int:
        return self.triple.n

    def check_shape(self) -> None:
        self.triple.check_shape()
        if self.surpass.n != self.n:
            raise StructureError("surpass relation has wrong carrier size")


# ---------------------------------------------------------------------------
# generic table helpers (shared with module systems and tensor classes)


def quasi_zero_set(add, neg_perm) -> frozenset[int]:
    """{ b + (-)b } over the carrier of an addition table."""
    return frozenset(add[b][neg_perm[b]] for b in range(len(add)))


def additive_closure(add, seed) -> frozenset[int]:
    """Close a subset of the carrier under the addition table."""
    reached = set(seed)
    frontier = list(reached)
    while frontier:
        x = frontier.pop()
        for y in list(reached):
            z = add[x][y]
            if z not in reached:
                reached.add(z)
                frontier.append(z)
    return frozenset(reached)


def surpass_circ_tables(add, neg_perm) -> SurpassRelation:
    """The canonical relation: a below c iff a + q = c for a quasi-zero q."""
    n = len(add)
    qz = quasi_zero_set(add, neg_perm)
    rows = []
    for a in range(n):
        row = 0
        for q in qz:
            row |= 1 << add[a][q]
        rows.append(row)
    return SurpassRelation(n, tuple(rows))


def _np_first(diff: np.ndarray):
    """(first witness index tuple, count) for a boolean violation array."""
    count = int(diff.sum())
    if not count:
        return None, 0
    flat = int(np.argmax(diff.reshape(-1)))
    return np.unravel_index(flat, diff.shape), count


# ---------------------------------------------------------------------------
# semiring validation


def validate_semiring(sr: FiniteSemiring) -> ValidationReport:
    """Exhaustively check the semiring axioms of an operation-table pair."""
    sr.check_shape()
    n = sr.n
    names = sr.names
    rep = ValidationReport(subject=f"semiring[{n}]")
    A = np.array(sr.add, dtype=DTYPE)
    M = np.array(sr.mul, dtype=DTYPE)
    idx = np.arange(n, dtype=DTYPE)

    w, c = _np_first(A != A.T)
    rep.check("add/commutative", w or (), c,
              w and f"{names[w[0]]}+{names[w[1]]} != {names[w[1]]}+{names[w[0]]}" or "")

    left = A[A, :]                          # (a+b)+c
    right = A[idx[:, None, None], A[None, :, :]]  # a+(b+c)
    w, c = _np_first(left != right)
    rep.check("add/associative", w or (), c,
              w and "(%s+%s)+%s != %s+(%s+%s)" % tuple(names[i] for i in (w[0], w[1], w[2]) * 2) or "")
    del left, right

    w, c = _np_first(A[sr.zero] != idx)
    rep.check("add/zero-identity", (sr.zero, w[0]) if w else (), c,
              w and f"0+{names[w[0]]} != {names[w[0]]}" or "")

    left = M[M, :]
    right = M[idx[:, None, None], M[None, :, :]]
    w, c = _np_first(left != right)
    rep.check("mul/associative", w or (), c,
              w and "(%s*%s)*%s != %s*(%s*%s)" % tuple(names[i] for i in (w[0], w[1], w[2]) * 2) or "")
    del left, right

    bad = (M[sr.one] != idx) | (M[:, sr.one] != idx)
    w, c = _np_first(bad)
    rep.check("mul/one-identity", w or (), c,
              w and f"1*{names[w[0]]} or {names[w[0]]}*1 differs from {names[w[0]]}" or "")

    bad = (M[sr.zero] != sr.zero) | (M[:, sr.zero] != sr.zero)
    w, c = _np_first(bad)
    rep.check("mul/zero-absorbing", w or (), c,
              w and f"0*{names[w[0]]} or {names[w[0]]}*0 is nonzero" or "")

    # a*(b+c) = a*b + a*c
    left = M[idx[:, None, None], A[None, :, :]]
    right = A[M[:, :, None], M[:, None, :]]
    w, c = _np_first(left != right)
    rep.check("mul/left-distributive", w or (), c,
              w and "%s*(%s+%s) != %s*%s+%s*%s" % (names[w[0]], names[w[1]], names[w[2]],
                                                   names[w[0]], names[w[1]], names[w[0]], names[w[2]]) or "")
    del left, right

    # (b+c)*a = b*a + c*a
    MT = M.T.copy()
    left = M[A[None, :, :], idx[:, None, None]]
    right = A[MT[:, :, None], MT[:, None, :]]
    w, c = _np_first(left != right)
    rep.check("mul/right-distributive", w or (), c,
              w and "(%s+%s)*%s != %s*%s+%s*%s" % (names[w[1]], names[w[2]], names[w[0]],
                                                   names[w[1]], names[w[0]], names[w[2]], names[w[0]]) or "")
    return rep


# ---------------------------------------------------------------------------
# negation and triple validation


def validate_negation(t: Triple) -> ValidationReport:
    """Check the negation-map axioms over the whole carrier."""
    t.check_shape()
    sr = t.semiring
    n, names = sr.n, sr.names
    p = t.negation.perm
    rep = ValidationReport(subject="negation")

    bad = [(b,) for b in range(n) if p[p[b]] != b]
    rep.check("neg/involutive", bad[0] if bad else (), len(bad),
              bad and f"(-)(-){names[bad[0][0]]} != {names[bad[0][0]]}" or "")

    rep.check("neg/zero-fixed", (sr.zero,), int(p[sr.zero] != sr.zero),
              f"(-)0 = {names[p[sr.zero]]}" if p[sr.zero] != sr.zero else "")

    P = np.array(p, dtype=DTYPE)
    A = np.array(sr.add, dtype=DTYPE)
    M = np.array(sr.mul, dtype=DTYPE)
    w, c = _np_first(P[A] != A[P[:, None], P[None, :]])
    rep.check("neg/additive", w or (), c,
              w and f"(-)({names[w[0]]}+{names[w[1]]}) != (-){names[w[0]]}+(-){names[w[1]]}" or "")

    bad1 = M[P[:, None], np.arange(n)[None, :]] != P[M]   # ((-)a)b vs (-)(ab)
    bad2 = M[np.arange(n)[:, None], P[None, :]] != P[M]   # a((-)b) vs (-)(ab)
    w, c = _np_first(bad1 | bad2)
    rep.check("neg/scalar-compatible", w or (), c,
              w and f"negation does not slide through {names[w[0]]}*{names[w[1]]}" or "")

    moved = [(x,) for x in sr.tangibles if p[x] not in sr.tangibles]
    rep.check("neg/tangibles-stable", moved[0] if moved else (), len(moved),
              moved and f"(-){names[moved[0][0]]} is not tangible" or "")
    return rep


def quasi_zeros(t: Triple) -> frozenset[int]:
    """The set of quasi-zeros b + (-)b of a triple."""
    return quasi_zero_set(t.semiring.add, t.negation.perm)


def validate_triple(t: Triple) -> ValidationReport:
    """Semiring + negation axioms, then the triple conditions themselves."""
    rep = validate_semiring(t.semiring)
    rep.subject = "triple"
    rep.merge(validate_negation(t))
    sr = t.semiring
    names = sr.names
    qz = quasi_zeros(t)

    clash = sorted(sr.tangibles & qz)
    rep.check("triple/tangibles-disjoint-quasi-zeros", (clash[0],) if clash else (), len(clash),
              clash and f"{names[clash[0]]} is tangible and a quasi-zero" or "")

    gen = additive_closure(sr.add, set(sr.tangibles) | {sr.zero})
    missing = sorted(set(range(sr.n)) - gen)
    rep.check("triple/tangibles-generate", (missing[0],) if missing else (), len(missing),
              missing and f"{names[missing[0]]} is not a sum of tangibles" or "")
    return rep


# ---------------------------------------------------------------------------
# surpassing relations


def surpass_circ(t: Triple) -> SurpassRelation:
    """Canonical surpassing relation of a triple: a below c iff a + q = c."""
    return surpass_circ_tables(t.semiring.add, t.negation.perm)


def validate_surpass(rel: SurpassRelation, t: Triple, t_variant: bool = False,
                     subject: str = "surpass") -> ValidationReport:
    """Check a candidate surpassing relation against all of its axioms.

    The two-pair additivity axiom is checked literally on small carriers;
    on larger ones it is checked as one-sided monotonicity, which is
    equivalent under reflexivity and transitivity (both checked here too).
    """
    if rel.n != t.n:
        raise StructureError("relation carrier size mismatch")
    sr = t.semiring
    n, names = sr.n, sr.names
    rep = ValidationReport(subject=subject)
    R = rel.to_bool_matrix()
    A = np.array(sr.add, dtype=DTYPE)
    M = np.array(sr.mul, dtype=DTYPE)
    P = np.array(t.negation.perm, dtype=DTYPE)

    w, c = _np_first(~R.diagonal())
    rep.check("surpass/reflexive", w or (), c,
              w and f"{names[w[0]]} not below itself" or "")

    Ri = R.astype(np.int32)
    w, c = _np_first(((Ri @ Ri) > 0) & ~R)
    rep.check("surpass/transitive", w or (), c,
              w and f"below-chain reaches {names[w[1]]} from {names[w[0]]} but pair is missing" or "")

    qz = sorted(quasi_zeros(t))
    bad = [(sr.zero, q) for q in qz if not R[sr.zero, q]]
    rep.check("surpass/i-zero-below-quasi-zeros", bad[0] if bad else (), len(bad),
              bad and f"0 not below quasi-zero {names[bad[0][1]]}" or "")

    w, c = _np_first(R & ~R[P[:, None], P[None, :]])
    rep.check("surpass/ii-negation-monotone", w or (), c,
              w and f"{names[w[0]]} below {names[w[1]]} but negations unrelated" or "")

    if n <= 40:
        # literal two-pair form of additivity
        pairs = np.argwhere(R)
        b1, b2 = pairs[:, 0], pairs[:, 1]
        s_lo = A[b1[:, None], b1[None, :]]
        s_hi = A[b2[:, None], b2[None, :]]
        w, c = _np_first(~R[s_lo, s_hi])
        if w:
            w = (int(b1[w[0]]), int(b2[w[0]]), int(b1[w[1]]), int(b2[w[1]]))
        rep.check("surpass/iii-additive", w or (), c,
                  w and f"{names[w[0]]}+{names[w[2]]} not below {names[w[1]]}+{names[w[3]]}" or "")
    else:
        # one-sided translation monotonicity; equivalent given reflexivity
        # and transitivity, which are validated above
        pairs = np.argwhere(R)
        lo = A[pairs[:, 0], :]
        hi = A[pairs[:, 1], :]
        w, c = _np_first(~R[lo, hi])
        if w:
            w = (int(pairs[w[0], 0]), int(pairs[w[0], 1]), int(w[1]), int(w[1]))
        rep.check("surpass/iii-additive", w or (), c,
                  w and f"adding {names[w[2]]} breaks {names[w[0]]} below {names[w[1]]}" or "")

    viol_iv = None
    count_iv = 0
    for a in sorted(sr.tangibles):
        Ma = M[a]
        bad = R & ~R[Ma[:, None], Ma[None, :]]
        w, c = _np_first(bad)
        count_iv += c
        if w and viol_iv is None:
            viol_iv = (a, int(w[0]), int(w[1]))
    rep.check("surpass/iv-scalar-monotone", viol_iv or (), count_iv,
              viol_iv and f"{names[viol_iv[0]]}*{names[viol_iv[1]]} not below {names[viol_iv[0]]}*{names[viol_iv[2]]}" or "")

    tang = sorted(sr.tangibles)
    bad = [(a0, a1) for a0 in tang for a1 in tang if a0 != a1 and R[a0, a1]]
    rep.check("surpass/v-tangible-antisymmetry", bad[0] if bad else (), len(bad),
              bad and f"distinct tangibles {names[bad[0][0]]} below {names[bad[0][1]]}" or "")

    if t_variant:
        bad = [(b, a) for a in tang for b in range(n) if b != a and R[b, a]]
        rep.check("surpass/t-variant", bad[0] if bad else (), len(bad),
                  bad and f"{names[bad[0][0]]} below tangible {names[bad[0][1]]} but distinct" or "")
    return rep


# ---------------------------------------------------------------------------
# systems


def validate_system(s: SystemDef) -> ValidationReport:
    """Full check: triple + surpassing axioms + unique negation.

    Unique negation follows the primary definition (a unique tangible b
    with 0 below a+b, equal to (-)a).  The older variant phrased through
    quasi-zero membership is evaluated as well; a disagreement is recorded
    as a note rather than a violation.
    """
    s.check_shape()
    rep = validate_triple(s.triple)
    rep.subject = "system"
    rep.merge(validate_surpass(s.surpass, s.triple, t_variant=s.t_surpassing))
    sr = s.semiring
    names = sr.names
    neg = s.negation.perm
    qz = quasi_zeros(s.triple)

    bad = []
    circ_disagrees = []
    for a in sorted(sr.tangibles):
        partners = [b for b in sorted(sr.tangibles)
                    if s.surpass.holds(sr.zero, sr.add[a][b])]
        if partners != [neg[a]]:
            bad.append((a, tuple(partners)))
        circ_partners = [b for b in sorted(sr.tangibles) if sr.add[a][b] in qz]
        if circ_partners != partners:
            circ_disagrees.append(a)
    w = bad[0] if bad else ()
    rep.check("system/uniquely-negated", w, len(bad),
              bad and f"tangible {names[w[0]]} has partners {[names[b] for b in w[1]]}, expected only {names[neg[w[0]]]}" or "")
    if circ_disagrees:
        rep.notes.append(
            "quasi-zero-membership variant of unique negation disagrees at: "
            + ", ".join(names[a] for a in circ_disagrees))
    return rep
