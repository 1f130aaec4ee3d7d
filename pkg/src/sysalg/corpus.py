"""Built-in example systems used as fixtures throughout the test suite.

Four families: the two-element Boolean semiring, truncated supertropical
semirings with a ghost layer, the symmetrization of an arbitrary semiring,
and the system of sign sets ordered by inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (FiniteSemiring, NegationMap, SurpassRelation, SystemDef,
                   Triple, surpass_circ)


def make_boolean() -> FiniteSemiring:
    """{0,1} with idempotent addition; the smallest interesting semiring."""
    return FiniteSemiring(
        names=("0", "1"),
        zero=0, one=1,
        add=((0, 1), (1, 1)),
        mul=((0, 0), (0, 1)),
        tangibles=frozenset({1}),
    )


def make_supertropical(n: int) -> SystemDef:
    """Truncated supertropical semiring with tangible values 0..n.

    Carrier: -oo, the tangible values, and one ghost per value.  Addition
    is max, with equal values always resolving to the ghost (in particular
    a + a is the ghost of a).  Multiplication adds values and caps at n;
    a product is a ghost when either factor is, and also when the value
    sum overflows the cap.  Capping a tangible product to the tangible top
    would break distributivity (1*(1+0) vs 1*1 + 1*0 already separates at
    n=1), so overflow lands on the ghost.
    """
    if n < 1:
        raise ValueError("truncation level must be at least 1")
    # element = None for -oo, else (value, ghost?)
    elems = [None] + [(v, False) for v in range(n + 1)] + [(v, True) for v in range(n + 1)]
    names = ["-oo"] + [str(v) for v in range(n + 1)] + [f"{v}v" for v in range(n + 1)]
    index = {e: i for i, e in enumerate(elems)}

    def plus(x, y):
        if x is None:
            return y
        if y is None:
            return x
        (vx, gx), (vy, gy) = x, y
        if vx > vy:
            return x
        if vy > vx:
            return y
        return (vx, True)

    def times(x, y):
        if x is None or y is None:
            return None
        (vx, gx), (vy, gy) = x, y
        v = vx + vy
        if v > n:
            return (n, True)
        return (v, gx or gy)

    add = tuple(tuple(index[plus(x, y)] for y in elems) for x in elems)
    mul = tuple(tuple(index[times(x, y)] for y in elems) for x in elems)
    sr = FiniteSemiring(
        names=tuple(names), zero=0, one=index[(0, False)],
        add=add, mul=mul,
        tangibles=frozenset(index[(v, False)] for v in range(n + 1)),
    )
    triple = Triple(sr, NegationMap.identity(sr.n))
    return SystemDef(triple, surpass_circ(triple), t_surpassing=True)


def symmetrize(a: FiniteSemiring, t_surpassing: bool = False) -> SystemDef:
    """Pair construction manufacturing a negation map by coordinate swap.

    Carrier a x a, componentwise addition, twisted multiplication
    (x1,x2)*(y1,y2) = (x1 y1 + x2 y2, x1 y2 + x2 y1), negation the swap,
    tangibles the one-sided embeddings of the tangibles of ``a``.
    """
    n = a.n
    pairs = [(i, j) for i in range(n) for j in range(n)]
    index = {p: k for k, p in enumerate(pairs)}
    names = tuple(f"({a.names[i]}|{a.names[j]})" for i, j in pairs)

    def plus(p, q):
        return index[(a.add[p[0]][q[0]], a.add[p[1]][q[1]])]

    def times(p, q):
        hi = a.add[a.mul[p[0]][q[0]]][a.mul[p[1]][q[1]]]
        lo = a.add[a.mul[p[0]][q[1]]][a.mul[p[1]][q[0]]]
        return index[(hi, lo)]

    add = tuple(tuple(plus(p, q) for q in pairs) for p in pairs)
    mul = tuple(tuple(times(p, q) for q in pairs) for p in pairs)
    tang = frozenset(index[(t, a.zero)] for t in a.tangibles) | \
        frozenset(index[(a.zero, t)] for t in a.tangibles)
    sr = FiniteSemiring(
        names=names, zero=index[(a.zero, a.zero)], one=index[(a.one, a.zero)],
        add=add, mul=mul, tangibles=tang,
    )
    neg = NegationMap(tuple(index[(j, i)] for i, j in pairs))
    triple = Triple(sr, neg)
    return SystemDef(triple, surpass_circ(triple), t_surpassing=t_surpassing)


_SIGN_MUL = {("0", "0"): "0", ("0", "+"): "0", ("0", "-"): "0",
             ("+", "0"): "0", ("+", "+"): "+", ("+", "-"): "-",
             ("-", "0"): "0", ("-", "+"): "-", ("-", "-"): "+"}


def _sign_hypersum(s: str, t: str) -> frozenset[str]:
    if s == "0":
        return frozenset({t})
    if t == "0":
        return frozenset({s})
    if s == t:
        return frozenset({s})
    return frozenset({"0", "+", "-"})


def make_sign_hyperfield() -> SystemDef:
    """Sign sets under elementwise hypersum, ordered by inclusion.

    The carrier is the additive closure of the singletons {0}, {+}, {-};
    the only further set that arises is {0,+,-}.  The declared surpassing
    relation is set inclusion, not the canonical construction (on this
    carrier the two coincide, which the tests confirm).
    """
    singles = [frozenset({"0"}), frozenset({"+"}), frozenset({"-"})]
    carrier = list(singles)
    changed = True
    while changed:
        changed = False
        for x, y in product(carrier, repeat=2):
            s = frozenset().union(*(_sign_hypersum(a, b) for a in x for b in y))
            if s not in carrier:
                carrier.append(s)
                changed = True

    def setname(x):
        order = {"0": 0, "+": 1, "-": 2}
        return "{" + ",".join(sorted(x, key=order.get)) + "}"

    carrier.sort(key=lambda x: (x != frozenset({"0"}), len(x), setname(x)))
    index = {x: i for i, x in enumerate(carrier)}
    names = tuple(setname(x) for x in carrier)

    def plus(x, y):
        return index[frozenset().union(*(_sign_hypersum(a, b) for a in x for b in y))]

    def times(x, y):
        return index[frozenset(_SIGN_MUL[(a, b)] for a in x for b in y)]

    add = tuple(tuple(plus(x, y) for y in carrier) for x in carrier)
    mul = tuple(tuple(times(x, y) for y in carrier) for x in carrier)
    flip = {"0": "0", "+": "-", "-": "+"}
    neg = NegationMap(tuple(index[frozenset(flip[a] for a in x)] for x in carrier))
    sr = FiniteSemiring(
        names=names, zero=index[frozenset({"0"})], one=index[frozenset({"+"})],
        add=add, mul=mul,
        tangibles=frozenset({index[frozenset({"+"})], index[frozenset({"-"})]}),
    )
    inclusion = SurpassRelation.from_pairs(
        len(carrier),
        [(index[x], index[y]) for x in carrier for y in carrier if x <= y])
    return SystemDef(Triple(sr, neg), inclusion, t_surpassing=True)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str              # "semiring" | "system"
    obj: object
    provenance: str


def entries() -> list[CorpusEntry]:
    boolean = make_boolean()
    return [
        CorpusEntry("boolean", "semiring", boolean,
                    "two-element idempotent semiring; raw, carries no negation map"),
        CorpusEntry("symmetrized-boolean", "system", symmetrize(boolean, t_surpassing=True),
                    "pair symmetrization of the Boolean semiring, swap negation"),
        CorpusEntry("supertropical-1", "system", make_supertropical(1),
                    "truncated supertropical with ghost layer, values 0..1"),
        CorpusEntry("supertropical-3", "system", make_supertropical(3),
                    "truncated supertropical with ghost layer, values 0..3"),
        CorpusEntry("sign-hyperfield", "system", make_sign_hyperfield(),
                    "sign sets under hypersum, ordered by inclusion"),
    ]


def get(name: str) -> CorpusEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)
