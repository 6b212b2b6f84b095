"""
Maximal polyhedra of nondecreasing substitute valuations on four goods.

A descriptor fixes a case, a subcase and a labeling of the goods as the
roles (i, j, k, l), and lists affine equalities and inequalities over the
16 table coordinates. Case 1 has a vertex i whose three edges carry the
smallest interaction a; Case 2 has a four-cycle i-j-k-l of equal
interactions a with the diagonals b = δik and c = δjl. Each case has a
main subcase and four subcases where one of the three-good
interactions θ−x is pushed past the others.

Generating every labeling of every subcase gives 240 descriptors, which
collapse to 75 distinct polyhedra.
"""
import logging
from dataclasses import dataclass
from functools import cache, cached_property
from itertools import combinations, permutations

from checks.properties import check_valuation
from geometry.constraints import (
    EQ,
    Constraint,
    delta_form,
    equal,
    nonneg,
    primitive,
    reduce_modulo,
    rref,
    theta_minus_form,
    value_form,
)
from valcore.bundles import label, outside, submasks
from valcore.exceptions import ConditionError, UsageError

logger = logging.getLogger(__name__)

K = 4
FULL = (1 << K) - 1

CASE1 = 1
CASE2 = 2
MAIN = "main"
EXCL_I = "excl_i"
EXCL_J = "excl_j"
EXCL_K = "excl_k"
EXCL_L = "excl_l"
SUBCASES = (MAIN, EXCL_I, EXCL_J, EXCL_K, EXCL_L)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


# ───────────── Shared constraints ─────────────

@cache
def shared_equalities() -> tuple[Constraint, ...]:
    return (Constraint(EQ, value_form(K, 0), "v(∅) = 0"),)


@cache
def shared_inequalities() -> tuple[Constraint, ...]:
    """Monotonicity on every edge of the cube and submodularity on every square."""
    out = []
    for mask in range(1 << K):
        for g in outside(mask, K):
            form = value_form(K, mask | 1 << g) - value_form(K, mask)
            out.append(nonneg(form, f"v({label(mask | 1 << g, K)}) >= v({label(mask, K)})"))
    for i, j in combinations(range(K), 2):
        rest = FULL ^ (1 << i | 1 << j)
        for a in submasks(rest):
            ai, aj = a | 1 << i, a | 1 << j
            form = value_form(K, ai) + value_form(K, aj) - value_form(K, ai | aj) - value_form(K, a)
            out.append(nonneg(form, f"δ{i + 1}{j + 1}|{label(a, K)} >= 0"))
    return tuple(out)


# ───────────── Descriptor ─────────────

@dataclass(frozen=True)
class PolyhedronDescriptor:
    case: int
    subcase: str
    labeling: tuple[int, int, int, int]
    equalities: tuple[Constraint, ...]
    inequalities: tuple[Constraint, ...]

    @property
    def name(self) -> str:
        roles = ",".join(str(g + 1) for g in self.labeling)
        return f"case {self.case} {self.subcase} (i,j,k,l)=({roles})"

    def all_equalities(self) -> tuple[Constraint, ...]:
        return shared_equalities() + self.equalities

    def all_inequalities(self) -> tuple[Constraint, ...]:
        return shared_inequalities() + self.inequalities

    def contains(self, v) -> bool:
        return all(c.holds(v) for c in self.all_equalities()) and all(c.holds(v) for c in self.all_inequalities())

    def violated(self, v) -> list[Constraint]:
        return [c for c in self.all_equalities() + self.all_inequalities() if not c.holds(v)]

    @cached_property
    def _echelon(self):
        return rref([c.form.vector() for c in self.all_equalities()])

    def equality_rank(self) -> int:
        return len(self._echelon[0])

    @cached_property
    def key(self):
        """Canonical form: the equality space plus inequalities reduced modulo it."""
        basis, pivots = self._echelon
        ineqs = set()
        for c in self.all_inequalities():
            vec = primitive(reduce_modulo(c.form.vector(), basis, pivots))
            if vec is not None:
                ineqs.add(vec)
        return tuple(basis), frozenset(ineqs)

    def describe(self) -> str:
        lines = [self.name]
        lines += [f"  {c.text}" for c in self.equalities]
        lines += [f"  {c.text}" for c in self.inequalities]
        return "\n".join(lines)


# ───────────── Constraint patterns ─────────────

class _Roles:
    """Forms and names for one labeling."""

    def __init__(self, labeling):
        self.labeling = labeling
        self.i, self.j, self.k, self.l = labeling

    def d(self, x, y):
        return delta_form(K, x, y)

    def dn(self, x, y) -> str:
        x, y = sorted((x, y))
        return f"δ{x + 1}{y + 1}"

    def t(self, x):
        return theta_minus_form(K, x)

    def tn(self, x) -> str:
        return f"θ−{x + 1}"


def _case1(labeling, subcase) -> PolyhedronDescriptor:
    r = _Roles(labeling)
    i, j, k, l = labeling
    a, b, c = r.d(i, j), r.d(j, k), r.d(k, l)
    an, bn, cn = r.dn(i, j), r.dn(j, k), r.dn(k, l)
    ti, tj, tk, tl = r.t(i), r.t(j), r.t(k), r.t(l)
    tin, tjn, tkn, tln = r.tn(i), r.tn(j), r.tn(k), r.tn(l)

    eqs = [
        equal(r.d(i, j), r.d(i, k), f"{an} = {r.dn(i, k)}"),
        equal(r.d(i, j), r.d(i, l), f"{an} = {r.dn(i, l)}"),
        equal(r.d(j, k), r.d(j, l), f"{bn} = {r.dn(j, l)}"),
    ]
    ineqs = [
        nonneg(a, f"{an} >= 0"),
        nonneg(b - a, f"{bn} >= {an}"),
        nonneg(c - b, f"{cn} >= {bn}"),
    ]
    shifted_j = tj + b - a
    shifted_jn = f"{tjn} + {bn} - {an}"
    if subcase == MAIN:
        eqs += [
            equal(tk, tl, f"{tkn} = {tln}"),
            equal(ti, shifted_j, f"{tin} = {shifted_jn}"),
        ]
        ineqs += [
            nonneg((a - b) - (tk - ti), f"{an} - {bn} >= {tkn} - {tin}"),
            nonneg((tk - ti) - (a - c), f"{tkn} - {tin} >= {an} - {cn}"),
            nonneg(tk - a - b, f"{tkn} >= {an} + {bn}"),
            nonneg(ti - b - c, f"{tin} >= {bn} + {cn}"),
        ]
    elif subcase == EXCL_I:
        eqs += [
            equal(tk, tl, f"{tkn} = {tln}"),
            equal(tk - shifted_j, a - c, f"{tkn} - ({shifted_jn}) = {an} - {cn}"),
        ]
        ineqs += [
            nonneg(ti - shifted_j, f"{tin} >= {shifted_jn}"),
            nonneg(tk - a - b, f"{tkn} >= {an} + {bn}"),
            nonneg(shifted_j - b - c, f"{shifted_jn} >= {bn} + {cn}"),
        ]
    elif subcase == EXCL_J:
        eqs += [
            equal(tk, tl, f"{tkn} = {tln}"),
            equal(tk - ti, a - c, f"{tkn} - {tin} = {an} - {cn}"),
        ]
        ineqs += [
            nonneg(shifted_j - ti, f"{shifted_jn} >= {tin}"),
            nonneg(tk - a - b, f"{tkn} >= {an} + {bn}"),
            nonneg(ti - b - c, f"{tin} >= {bn} + {cn}"),
        ]
    elif subcase == EXCL_K:
        eqs += [
            equal(ti, shifted_j, f"{tin} = {shifted_jn}"),
            equal(tl - ti, a - b, f"{tln} - {tin} = {an} - {bn}"),
        ]
        ineqs += [
            nonneg(tk - tl, f"{tkn} >= {tln}"),
            nonneg(tl - a - b, f"{tln} >= {an} + {bn}"),
            nonneg(ti - b - c, f"{tin} >= {bn} + {cn}"),
        ]
    elif subcase == EXCL_L:
        eqs += [
            equal(ti, shifted_j, f"{tin} = {shifted_jn}"),
            equal(tk - ti, a - b, f"{tkn} - {tin} = {an} - {bn}"),
        ]
        ineqs += [
            nonneg(tl - tk, f"{tln} >= {tkn}"),
            nonneg(tk - a - b, f"{tkn} >= {an} + {bn}"),
            nonneg(ti - b - c, f"{tin} >= {bn} + {cn}"),
        ]
    else:
        raise UsageError(f"unknown subcase '{subcase}'")
    return PolyhedronDescriptor(CASE1, subcase, tuple(labeling), tuple(eqs), tuple(ineqs))


def _case2(labeling, subcase) -> PolyhedronDescriptor:
    r = _Roles(labeling)
    i, j, k, l = labeling
    a, b, c = r.d(i, j), r.d(i, k), r.d(j, l)
    an, bn, cn = r.dn(i, j), r.dn(i, k), r.dn(j, l)
    ti, tj, tk, tl = r.t(i), r.t(j), r.t(k), r.t(l)
    tin, tjn, tkn, tln = r.tn(i), r.tn(j), r.tn(k), r.tn(l)

    eqs = [
        equal(r.d(j, k), a, f"{r.dn(j, k)} = {an}"),
        equal(r.d(k, l), a, f"{r.dn(k, l)} = {an}"),
        equal(r.d(i, l), a, f"{r.dn(i, l)} = {an}"),
    ]
    ineqs = [
        nonneg(a, f"{an} >= 0"),
        nonneg(b - a, f"{bn} >= {an}"),
        nonneg(c - a, f"{cn} >= {an}"),
    ]
    if subcase == MAIN:
        eqs += [
            equal(tj, tl, f"{tjn} = {tln}"),
            equal(ti, tk, f"{tin} = {tkn}"),
        ]
        ineqs += [
            nonneg((b - a) - (tj - ti), f"{bn} - {an} >= {tjn} - {tin}"),
            nonneg((tj - ti) - (a - c), f"{tjn} - {tin} >= {an} - {cn}"),
            nonneg(tj - a - b, f"{tjn} >= {an} + {bn}"),
            nonneg(ti - a - c, f"{tin} >= {an} + {cn}"),
        ]
    elif subcase == EXCL_I:
        eqs += [
            equal(tj, tl, f"{tjn} = {tln}"),
            equal(tj - tk, a - c, f"{tjn} - {tkn} = {an} - {cn}"),
        ]
        ineqs += [
            nonneg(ti - tk, f"{tin} >= {tkn}"),
            nonneg(tj - a - b, f"{tjn} >= {an} + {bn}"),
            nonneg(tk - a - c, f"{tkn} >= {an} + {cn}"),
        ]
    elif subcase == EXCL_K:
        eqs += [
            equal(tj, tl, f"{tjn} = {tln}"),
            equal(tj - ti, a - c, f"{tjn} - {tin} = {an} - {cn}"),
        ]
        ineqs += [
            nonneg(tk - ti, f"{tkn} >= {tin}"),
            nonneg(tj - a - b, f"{tjn} >= {an} + {bn}"),
            nonneg(ti - a - c, f"{tin} >= {an} + {cn}"),
        ]
    elif subcase == EXCL_J:
        eqs += [
            equal(ti, tk, f"{tin} = {tkn}"),
            equal(tl - ti, b - a, f"{tln} - {tin} = {bn} - {an}"),
        ]
        ineqs += [
            nonneg(tj - tl, f"{tjn} >= {tln}"),
            nonneg(tl - a - b, f"{tln} >= {an} + {bn}"),
            nonneg(ti - a - c, f"{tin} >= {an} + {cn}"),
        ]
    elif subcase == EXCL_L:
        eqs += [
            equal(ti, tk, f"{tin} = {tkn}"),
            equal(tj - ti, b - a, f"{tjn} - {tin} = {bn} - {an}"),
        ]
        ineqs += [
            nonneg(tl - tj, f"{tln} >= {tjn}"),
            nonneg(tj - a - b, f"{tjn} >= {an} + {bn}"),
            nonneg(ti - a - c, f"{tin} >= {an} + {cn}"),
        ]
    else:
        raise UsageError(f"unknown subcase '{subcase}'")
    return PolyhedronDescriptor(CASE2, subcase, tuple(labeling), tuple(eqs), tuple(ineqs))


def descriptor(case: int, subcase: str, labeling) -> PolyhedronDescriptor:
    """Build one descriptor; ``labeling`` holds 0-based goods in the roles (i, j, k, l)."""
    if sorted(labeling) != list(range(K)):
        raise UsageError(f"labeling must be a permutation of the four goods, got {labeling}")
    if case == CASE1:
        return _case1(labeling, subcase)
    if case == CASE2:
        return _case2(labeling, subcase)
    raise UsageError(f"unknown case {case}")


# ───────────── Census ─────────────

@cache
def census_k4() -> tuple[PolyhedronDescriptor, ...]:
    """One descriptor per distinct polyhedron, first labeling in permutation order."""
    seen = set()
    out = []
    generated = 0
    for case in (CASE1, CASE2):
        for subcase in SUBCASES:
            for labeling in permutations(range(K)):
                d = descriptor(case, subcase, labeling)
                generated += 1
                if d.key in seen:
                    continue
                seen.add(d.key)
                out.append(d)
    logger.info(f"K=4 census: {generated} labeled descriptors, {len(out)} distinct polyhedra")
    return tuple(out)


def _require_substitute_k4(v, what: str) -> None:
    if v.k != K:
        raise UsageError(f"{what} needs K=4, got K={v.k}")
    report = check_valuation(v)
    if not report.substitute:
        raise ConditionError(f"{what} needs a substitute valuation", witness=report.first_violation)


def classify_k4(v) -> list[PolyhedronDescriptor]:
    """Every census polyhedron containing v; boundary points belong to several."""
    _require_substitute_k4(v, "classify_k4")
    found = [d for d in census_k4() if d.contains(v)]
    if not found:
        logger.warning("K=4 substitute valuation lies in no census polyhedron")
    logger.debug(f"K=4 memberships: {[d.name for d in found]}")
    return found


def is_assignment_k4(v) -> str:
    """
    "yes" inside the union of the Case 1 polyhedra, otherwise "no".

    That union is closed, so a substitute valuation outside it sits in the
    interior of Case 2, where no assignment valuation lives.
    """
    found = classify_k4(v)
    if any(d.case == CASE1 for d in found):
        return YES
    if found:
        return NO
    return UNKNOWN
