"""Unification of nominal terms via fixed-point constraints.

A problem is a queue of constraints, either equations s =? t or fixed-point
requests pi fix? t.  Simplification rewrites the queue until no rule applies;
a normal form with only consistent primitive fixed-point constraints yields a
solution (a fixed-point context together with a substitution).

The same rule set runs in two modes: plain mode treats every function symbol
as syntactic, and branching mode splits in two at applications of commutative
symbols (used by nomfix.cunify).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fixpoint import check_alpha_fixp, check_fixp
from .printer import print_fixp_context, print_perm, print_subst, print_term
from .syntax import (
    Abs,
    App,
    AtomTerm,
    FixpointContext,
    NameGenerator,
    Permutation,
    Signature,
    Substitution,
    Susp,
    Term,
    Theory,
    Tup,
    Var,
    act,
    atoms_of,
    flatten,
    free_vars,
    generator_avoiding,
    term_height,
    term_size,
)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} =? {print_term(self.rhs)}"


@dataclass(frozen=True)
class Fix:
    perm: Permutation
    target: Term

    def __str__(self) -> str:
        return f"{print_perm(self.perm)} fix? {print_term(self.target)}"


Constraint = Eq | Fix
Problem = tuple  # tuple[Constraint, ...]


@dataclass(frozen=True)
class SimplStep:
    """One simplification step: rule name, consumed constraint, produced
    constraints, and the variable binding for instantiation steps."""

    rule: str
    consumed: Constraint
    produced: tuple
    binding: tuple[Var, Term] | None = None

    def __str__(self) -> str:
        if self.binding is not None:
            x, t = self.binding
            return f"[{self.rule}] {self.consumed}  =>  {x} -> {print_term(t)}"
        prod = ", ".join(str(c) for c in self.produced) or "(nothing)"
        return f"[{self.rule}] {self.consumed}  =>  {prod}"


@dataclass
class Solution:
    """A solved form: a fixed-point context paired with a substitution."""

    context: FixpointContext
    subst: Substitution

    def key(self) -> str:
        return print_fixp_context(self.context) + " |- " + print_subst(self.subst)

    def __str__(self) -> str:
        return self.key()


@dataclass
class UnifyResult:
    status: str  # "solved" | "unsolvable"
    solution: Solution | None
    witness: Constraint | None
    witness_kind: str | None
    steps: list[SimplStep]
    normal_form: Problem

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def is_primitive(c: Constraint) -> bool:
    return isinstance(c, Fix) and isinstance(c.target, Susp) and not c.target.perm.swappings


def constraint_vars(c: Constraint) -> set[Var]:
    if isinstance(c, Eq):
        return free_vars(c.lhs) | free_vars(c.rhs)
    return free_vars(c.target)


def problem_vars(pr: Problem) -> set[Var]:
    out: set[Var] = set()
    for c in pr:
        out |= constraint_vars(c)
    return out


def problem_atoms(pr: Problem) -> set:
    out: set = set()
    for c in pr:
        if isinstance(c, Eq):
            out |= atoms_of(c.lhs) | atoms_of(c.rhs)
        else:
            out |= c.perm.mentioned_atoms() | atoms_of(c.target)
    return out


def problem_measure(pr: Problem, by_height: bool = False):
    """Termination measure: number of distinct variables, then the multiset
    of weights of equations and non-primitive fixed-point constraints.

    Plain mode weighs constraints by term size, branching mode by height.
    The multiset is encoded as a descending sequence compared lexicographically,
    which coincides with the multiset extension of < on naturals.
    """
    size = term_height if by_height else term_size
    weights = []
    for c in pr:
        if isinstance(c, Eq):
            weights.append(max(size(c.lhs), size(c.rhs)))
        elif not is_primitive(c):
            weights.append(size(c.target))
    return (len(problem_vars(pr)), tuple(sorted(weights, reverse=True)))


def measure_decreases(before, after) -> bool:
    if after[0] < before[0]:
        return True
    if after[0] > before[0]:
        return False
    a, b = after[1], before[1]
    # descending sequences: strict prefix is smaller, else first difference decides
    if a == b:
        return False
    for x, y in zip(a, b):
        if x != y:
            return x < y
    return len(a) < len(b)


def _apply_binding(pr: Problem, x: Var, t: Term) -> Problem:
    theta = Substitution({x: t})
    out = []
    for c in pr:
        if isinstance(c, Eq):
            out.append(Eq(theta(c.lhs), theta(c.rhs)))
        else:
            out.append(Fix(c.perm, theta(c.target)))
    return tuple(out)


def _newness(gen: NameGenerator, variables) -> tuple[list[Fix], object, object]:
    """Fresh atoms c1, c2 plus constraints (c1 c2) fix Y for each variable."""
    c1, c2 = gen.fresh_pair()
    sw = Permutation.swap(c1, c2)
    cons = [Fix(sw, Susp(Permutation.identity(), y)) for y in sorted(variables)]
    return cons, c1, c2


def _fix_rule(c: Fix, gen: NameGenerator, sig: Signature | None, branching: bool):
    """Return (rule, [children]) where each child is a constraint list, or
    None when no non-instantiating rule applies."""
    p, t = c.perm, c.target
    match t:
        case AtomTerm(a):
            if p(a) == a:
                return "fix-atom", [[]]
            return None
        case App(f, arg):
            if (
                branching
                and sig is not None
                and sig.theory(f) is Theory.C
                and isinstance(arg, Tup)
                and len(arg.items) == 2
            ):
                t0, t1 = arg.items
                return "fix-app-C", [
                    [Eq(act(p, t0), t0), Eq(act(p, t1), t1)],
                    [Eq(act(p, t0), t1), Eq(act(p, t1), t0)],
                ]
            return "fix-app", [[Fix(p, arg)]]
        case Tup(items):
            return "fix-tuple", [[Fix(p, s) for s in items]]
        case Abs(a, body):
            cons, c1, _ = _newness(gen, free_vars(body))
            return "fix-abs", [[Fix(p, act(Permutation.swap(a, c1), body))] + cons]
        case Susp(q, x):
            if q.swappings:
                return "fix-var", [[Fix(p.conjugate(q.inverse()), Susp(Permutation.identity(), x))]]
            return None
    raise TypeError(f"not a term: {t!r}")


def _eq_rule(c: Eq, gen: NameGenerator, sig: Signature | None, branching: bool):
    s, t = c.lhs, c.rhs
    match (s, t):
        case (AtomTerm(a), AtomTerm(b)):
            if a == b:
                return "eq-atom", [[]]
            return None
        case (App(f, sarg), App(g, targ)) if f == g:
            if (
                branching
                and sig is not None
                and sig.theory(f) is Theory.C
                and isinstance(sarg, Tup)
                and isinstance(targ, Tup)
                and len(sarg.items) == len(targ.items) == 2
            ):
                s0, s1 = sarg.items
                t0, t1 = targ.items
                return "eq-app-C", [
                    [Eq(s0, t0), Eq(s1, t1)],
                    [Eq(s0, t1), Eq(s1, t0)],
                ]
            return "eq-app", [[Eq(sarg, targ)]]
        case (Tup(xs), Tup(ys)) if len(xs) == len(ys):
            return "eq-tuple", [[Eq(x, y) for x, y in zip(xs, ys)]]
        case (Abs(a, s1), Abs(b, t1)):
            if a == b:
                return "eq-abs", [[Eq(s1, t1)]]
            cons, c1, _ = _newness(gen, free_vars(t1))
            return "eq-abs-rename", [
                [Eq(s1, act(Permutation.swap(a, b), t1)), Fix(Permutation.swap(a, c1), t1)] + cons
            ]
        case (Susp(p, x), Susp(q, y)) if x == y:
            return "eq-var", [[Fix(q.inverse().compose(p), Susp(Permutation.identity(), x))]]
    return None


def expand(
    pr: Problem,
    gen: NameGenerator,
    sig: Signature | None = None,
    rigid: frozenset = frozenset(),
    branching: bool = False,
):
    """One simplification step on the first reducible constraint.

    Returns a list of (child problem, step) pairs: empty for a normal form,
    one entry for deterministic rules, two for commutative branching.
    Non-instantiating rules are preferred over instantiation.
    """
    for i, c in enumerate(pr):
        if isinstance(c, Fix):
            got = _fix_rule(c, gen, sig, branching)
        else:
            got = _eq_rule(c, gen, sig, branching)
        if got is None:
            continue
        rule, children = got
        rest = pr[:i] + pr[i + 1 :]
        out = []
        for cons in children:
            out.append((tuple(cons) + rest, SimplStep(rule, c, tuple(cons))))
        return out
    for i, c in enumerate(pr):
        if not isinstance(c, Eq):
            continue
        rest = pr[:i] + pr[i + 1 :]
        s, t = c.lhs, c.rhs
        if isinstance(s, Susp) and s.var not in rigid and s.var not in free_vars(t):
            x, u = s.var, act(s.perm.inverse(), t)
            return [(_apply_binding(rest, x, u), SimplStep("eq-inst1", c, (), (x, u)))]
        if isinstance(t, Susp) and t.var not in rigid and t.var not in free_vars(s):
            x, u = t.var, act(t.perm.inverse(), s)
            return [(_apply_binding(rest, x, u), SimplStep("eq-inst2", c, (), (x, u)))]
    return []


def classify_normal_form(pr: Problem, rigid: frozenset = frozenset()):
    """Return (kind, witness) for a failed normal form, or None on success."""
    for c in pr:
        if isinstance(c, Eq):
            s, t = c.lhs, c.rhs
            if isinstance(s, Susp) and s.var in free_vars(t):
                return "occurs", c
            if isinstance(t, Susp) and t.var in free_vars(s):
                return "occurs", c
            if (isinstance(s, Susp) and s.var in rigid) or (
                isinstance(t, Susp) and t.var in rigid
            ):
                return "rigid", c
            return "clash", c
        if isinstance(c.target, AtomTerm):
            return "fixpoint-inconsistency", c
        assert is_primitive(c), f"unexpected constraint in normal form: {c}"
    return None


def extract_solution(pr: Problem, steps: list[SimplStep]) -> Solution:
    pairs = []
    for c in pr:
        p = c.perm.normalize()
        if p.swappings:
            pairs.append((p, c.target.var))
    sigma = Substitution()
    for step in steps:
        if step.binding is not None:
            x, t = step.binding
            sigma = sigma.compose(Substitution({x: t}))
    return Solution(FixpointContext(frozenset(pairs)), sigma)


def _default_gen(pr: Problem) -> NameGenerator:
    return generator_avoiding(problem_atoms(pr))


def _validate(pr: Problem, sig: Signature | None, allow: tuple):
    if sig is None:
        return
    for c in pr:
        terms = (c.lhs, c.rhs) if isinstance(c, Eq) else (c.target,)
        for t in terms:
            _validate_term(t, sig, allow)


def _validate_term(t: Term, sig: Signature, allow: tuple):
    match t:
        case AtomTerm() | Susp():
            return
        case Abs(_, body):
            _validate_term(body, sig, allow)
        case Tup(items):
            for s in items:
                _validate_term(s, sig, allow)
        case App(f, arg):
            th = sig.theory(f)
            if th not in allow:
                raise ValueError(f"symbol {f} has unsupported theory {th.value} here")
            if th is Theory.C and not (isinstance(arg, Tup) and len(arg.items) == 2):
                raise ValueError(f"commutative symbol {f} needs a pair argument")
            _validate_term(arg, sig, allow)


def _run(pr: Problem, gen: NameGenerator, rigid: frozenset) -> tuple[Problem, list[SimplStep]]:
    """Deterministic simplification to normal form, asserting that the
    termination measure strictly decreases at every step."""
    steps: list[SimplStep] = []
    while True:
        if __debug__:
            before = problem_measure(pr)
        children = expand(pr, gen, rigid=rigid)
        if not children:
            return pr, steps
        assert len(children) == 1
        pr, step = children[0]
        steps.append(step)
        if __debug__:
            assert measure_decreases(before, problem_measure(pr)), str(step)


def unify(
    pr, sig: Signature | None = None, gen: NameGenerator | None = None, rigid: frozenset = frozenset()
) -> UnifyResult:
    """Solve a syntactic unification problem (a sequence of constraints)."""
    pr = tuple(pr)
    if sig is not None:
        _validate(pr, sig, (Theory.NONE,))
    if gen is None:
        gen = _default_gen(pr)
    nf, steps = _run(pr, gen, rigid)
    failure = classify_normal_form(nf, rigid)
    if failure is None:
        return UnifyResult("solved", extract_solution(nf, steps), None, None, steps, nf)
    kind, witness = failure
    return UnifyResult("unsolvable", None, witness, kind, steps, nf)


def match(pr, rigid, sig: Signature | None = None, gen: NameGenerator | None = None) -> UnifyResult:
    """Match left-hand sides against right-hand sides: variables in rigid are
    never instantiated.  Equations must keep rigid variables on the right and
    instantiable variables on the left."""
    pr = tuple(pr)
    rigid = frozenset(rigid)
    for c in pr:
        if isinstance(c, Eq):
            if free_vars(c.lhs) & rigid or free_vars(c.rhs) - rigid:
                raise ValueError(f"equation violates the matching variable split: {c}")
    return unify(pr, sig=sig, gen=gen, rigid=rigid)


def _solve_all(pr, sig, gen, rigid, branching) -> list[Solution]:
    """All solutions of a problem, following every branch (internal)."""
    out: list[Solution] = []

    def walk(problem, steps):
        children = expand(problem, gen, sig=sig, rigid=rigid, branching=branching)
        if not children:
            if classify_normal_form(problem, rigid) is None:
                out.append(extract_solution(problem, steps))
            return
        for child, step in children:
            walk(child, steps + [step])

    walk(tuple(pr), [])
    return out


def is_more_general(
    sol1: Solution,
    sol2: Solution,
    variables,
    sig: Signature | None = None,
) -> bool:
    """Whether sol1 subsumes sol2 over the given variables: some substitution
    carries each X sol1 to something equivalent to X sol2 under sol2's
    context, and sol2's context supports sol1's constraints so instantiated.

    The carrying substitution is searched for by matching; candidates are then
    verified directly with the checking engines.
    """
    sig = sig or Signature(permissive=True)
    variables = sorted(set(variables))
    lhs = [sol1.subst(Susp(Permutation.identity(), x)) for x in variables]
    rhs = [sol2.subst(Susp(Permutation.identity(), x)) for x in variables]
    if sig.has_equational_symbols():
        lhs = [flatten(sig, t) for t in lhs]
        rhs = [flatten(sig, t) for t in rhs]
    rigid = frozenset().union(*(free_vars(t) for t in rhs)) if rhs else frozenset()
    problem = tuple(Eq(s, t) for s, t in zip(lhs, rhs))
    atoms = problem_atoms(problem) | sol1.context.atoms() | sol2.context.atoms()
    gen = generator_avoiding(atoms)
    branching = any(sig.theory(f) is Theory.C for f in _symbols_of(lhs + rhs))
    for cand in _solve_all(problem, sig, gen, rigid, branching):
        sigma1p = sol1.subst.compose(cand.subst)
        ok = all(
            check_alpha_fixp(sig, sol2.context, sigma1p(Susp(Permutation.identity(), x)), t)
            for x, t in zip(variables, rhs)
        )
        if not ok:
            continue
        if all(
            check_fixp(sig, sol2.context, p, cand.subst(Susp(Permutation.identity(), y)))
            for p, y in sol1.context.constraints
        ):
            return True
    return False


def _symbols_of(terms) -> set[str]:
    out: set[str] = set()

    def walk(t):
        match t:
            case App(f, arg):
                out.add(f)
                walk(arg)
            case Abs(_, body):
                walk(body)
            case Tup(items):
                for s in items:
                    walk(s)
            case _:
                pass

    for t in terms:
        walk(t)
    return out
