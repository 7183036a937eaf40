"""Core data structures: atoms, permutations, terms, signatures, substitutions."""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass, field


class NomfixError(Exception):
    """Base class for errors raised by this package."""


class IllFormedTermError(NomfixError):
    pass


class UndeclaredSymbolError(NomfixError):
    pass


GENERATED_PREFIX = "#c"


@dataclass(frozen=True, order=True)
class Atom:
    """An object-level name.  Generated atoms come from a NameGenerator and
    carry the reserved prefix in their printed name."""

    name: str
    gen_index: int = -1

    @property
    def generated(self) -> bool:
        return self.gen_index >= 0

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Var:
    """A meta-level unknown, instantiable by substitution."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Swapping:
    """A transposition of two distinct atoms."""

    left: Atom
    right: Atom

    def __post_init__(self):
        if self.left == self.right:
            raise IllFormedTermError(f"swapping of an atom with itself: ({self.left} {self.right})")

    def apply(self, a: Atom) -> Atom:
        if a == self.left:
            return self.right
        if a == self.right:
            return self.left
        return a

    def __str__(self) -> str:
        return f"({self.left} {self.right})"


@dataclass(frozen=True)
class Permutation:
    """A finite permutation of atoms, stored as a list of swappings.

    The rightmost swapping acts first: (a b)(b c) sends c to a.
    Structural equality compares swapping lists; use same_action for
    extensional equality.
    """

    swappings: tuple[Swapping, ...] = ()

    @staticmethod
    def identity() -> Permutation:
        return Permutation()

    @staticmethod
    def swap(a: Atom, b: Atom) -> Permutation:
        return Permutation((Swapping(a, b),))

    def __call__(self, a: Atom) -> Atom:
        for sw in reversed(self.swappings):
            a = sw.apply(a)
        return a

    def inverse(self) -> Permutation:
        return Permutation(tuple(reversed(self.swappings)))

    def compose(self, other: Permutation) -> Permutation:
        """self after other: (self.compose(other))(a) == self(other(a))."""
        return Permutation(self.swappings + other.swappings)

    def conjugate(self, rho: Permutation) -> Permutation:
        """rho o self o rho^-1."""
        return rho.compose(self).compose(rho.inverse())

    def mentioned_atoms(self) -> set[Atom]:
        out = set()
        for sw in self.swappings:
            out.add(sw.left)
            out.add(sw.right)
        return out

    def support(self) -> frozenset[Atom]:
        return frozenset(a for a in self.mentioned_atoms() if self(a) != a)

    def is_identity(self) -> bool:
        return not self.support()

    def same_action(self, other: Permutation) -> bool:
        return not self.disagreement_set(other)

    def disagreement_set(self, other: Permutation) -> frozenset[Atom]:
        atoms = self.mentioned_atoms() | other.mentioned_atoms()
        return frozenset(a for a in atoms if self(a) != other(a))

    def normalize(self) -> Permutation:
        """Canonical swapping list built from the cycle decomposition, cycles
        ordered by their least atom."""
        seen: set[Atom] = set()
        swaps: list[Swapping] = []
        for a in sorted(self.support()):
            if a in seen:
                continue
            cycle = [a]
            seen.add(a)
            b = self(a)
            while b != a:
                cycle.append(b)
                seen.add(b)
                b = self(b)
            for x, y in zip(cycle, cycle[1:]):
                swaps.append(Swapping(x, y))
        return Permutation(tuple(swaps))

    def __str__(self) -> str:
        if not self.swappings:
            return "Id"
        return "".join(str(sw) for sw in self.swappings)


class Theory(enum.Enum):
    """Equational attribute of a function symbol."""

    NONE = "none"
    A = "A"
    C = "C"
    AC = "AC"


@dataclass
class Signature:
    """Maps function symbols to their equational theories.

    A permissive signature treats unknown symbols as plain (Theory.NONE).
    """

    symbols: dict[str, Theory] = field(default_factory=dict)
    permissive: bool = False

    def declare(self, name: str, theory: Theory) -> None:
        self.symbols[name] = theory

    def theory(self, name: str) -> Theory:
        if name in self.symbols:
            return self.symbols[name]
        if self.permissive:
            return Theory.NONE
        raise UndeclaredSymbolError(f"undeclared function symbol: {name}")

    def has_equational_symbols(self) -> bool:
        return any(th is not Theory.NONE for th in self.symbols.values())


EMPTY_SIGNATURE = Signature(permissive=True)


class Term:
    """Base class of the term grammar."""

    __slots__ = ()


@dataclass(frozen=True)
class AtomTerm(Term):
    atom: Atom


@dataclass(frozen=True)
class Abs(Term):
    binder: Atom
    body: Term


@dataclass(frozen=True)
class Tup(Term):
    items: tuple[Term, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise IllFormedTermError("tuples need at least two components")


@dataclass(frozen=True)
class App(Term):
    symbol: str
    arg: Term


@dataclass(frozen=True)
class Susp(Term):
    """A moderated variable pi.X."""

    perm: Permutation
    var: Var


def atom(name: str) -> AtomTerm:
    return AtomTerm(Atom(name))


def var(name: str, perm: Permutation | None = None) -> Susp:
    return Susp(perm or Permutation.identity(), Var(name))


def pair(*items: Term) -> Tup:
    return Tup(tuple(items))


def act(perm: Permutation, t: Term) -> Term:
    """Permutation action on a term; suspends on moderated variables."""
    if not perm.swappings:
        return t
    match t:
        case AtomTerm(a):
            return AtomTerm(perm(a))
        case Abs(b, body):
            return Abs(perm(b), act(perm, body))
        case Tup(items):
            return Tup(tuple(act(perm, s) for s in items))
        case App(f, arg):
            return App(f, act(perm, arg))
        case Susp(p, x):
            return Susp(perm.compose(p), x)
    raise TypeError(f"not a term: {t!r}")


def free_vars(t: Term) -> set[Var]:
    match t:
        case AtomTerm():
            return set()
        case Abs(_, body):
            return free_vars(body)
        case Tup(items):
            out: set[Var] = set()
            for s in items:
                out |= free_vars(s)
            return out
        case App(_, arg):
            return free_vars(arg)
        case Susp(_, x):
            return {x}
    raise TypeError(f"not a term: {t!r}")


def atoms_of(t: Term) -> set[Atom]:
    """All atoms mentioned in a term, including binders and suspension perms."""
    match t:
        case AtomTerm(a):
            return {a}
        case Abs(b, body):
            return {b} | atoms_of(body)
        case Tup(items):
            out: set[Atom] = set()
            for s in items:
                out |= atoms_of(s)
            return out
        case App(_, arg):
            return atoms_of(arg)
        case Susp(p, _):
            return p.mentioned_atoms()
    raise TypeError(f"not a term: {t!r}")


def is_ground(t: Term) -> bool:
    return not free_vars(t)


def term_size(t: Term) -> int:
    match t:
        case AtomTerm() | Susp():
            return 1
        case Abs(_, body):
            return 1 + term_size(body)
        case App(_, arg):
            return 1 + term_size(arg)
        case Tup(items):
            return 1 + sum(term_size(s) for s in items)
    raise TypeError(f"not a term: {t!r}")


def term_height(t: Term) -> int:
    match t:
        case AtomTerm() | Susp():
            return 1
        case Abs(_, body):
            return 1 + term_height(body)
        case App(_, arg):
            return 1 + term_height(arg)
        case Tup(items):
            return 1 + max(term_height(s) for s in items)
    raise TypeError(f"not a term: {t!r}")


def same_term(s: Term, t: Term) -> bool:
    """Structural equality, comparing suspension permutations by action."""
    match (s, t):
        case (AtomTerm(a), AtomTerm(b)):
            return a == b
        case (Abs(a, s1), Abs(b, t1)):
            return a == b and same_term(s1, t1)
        case (Tup(xs), Tup(ys)):
            return len(xs) == len(ys) and all(same_term(x, y) for x, y in zip(xs, ys))
        case (App(f, s1), App(g, t1)):
            return f == g and same_term(s1, t1)
        case (Susp(p, x), Susp(q, y)):
            return x == y and p.same_action(q)
    return False


def flatten(sig: Signature, t: Term) -> Term:
    """Flatten nested applications of A and AC symbols into one application
    whose argument tuple lists all collected arguments."""
    match t:
        case AtomTerm():
            return t
        case Susp():
            return t
        case Abs(b, body):
            return Abs(b, flatten(sig, body))
        case Tup(items):
            return Tup(tuple(flatten(sig, s) for s in items))
        case App(f, arg):
            if sig.theory(f) in (Theory.A, Theory.AC):
                args = [flatten(sig, s) for s in _collect_args(sig, f, arg)]
                if len(args) == 1:
                    return App(f, args[0])
                return App(f, Tup(tuple(args)))
            return App(f, flatten(sig, arg))
    raise TypeError(f"not a term: {t!r}")


def _collect_args(sig: Signature, f: str, arg: Term) -> list[Term]:
    out: list[Term] = []
    stack = list(arg.items) if isinstance(arg, Tup) else [arg]
    for s in stack:
        if isinstance(s, App) and s.symbol == f:
            out.extend(_collect_args(sig, f, s.arg))
        else:
            out.append(s)
    return out


def equational_args(sig: Signature, t: App) -> list[Term]:
    """Argument list of an application, flattened at its own head symbol."""
    return _collect_args(sig, t.symbol, t.arg)


def check_well_formed(sig: Signature, t: Term) -> None:
    """Raise if t uses undeclared symbols or applies a C symbol to a non-pair."""
    match t:
        case AtomTerm() | Susp():
            return
        case Abs(_, body):
            check_well_formed(sig, body)
        case Tup(items):
            for s in items:
                check_well_formed(sig, s)
        case App(f, arg):
            th = sig.theory(f)
            if th is Theory.C and not (isinstance(arg, Tup) and len(arg.items) == 2):
                raise IllFormedTermError(f"commutative symbol {f} needs a pair argument")
            check_well_formed(sig, arg)
        case _:
            raise TypeError(f"not a term: {t!r}")


class Substitution:
    """A finite map from variables to terms, applied homomorphically and
    possibly capturing: (pi.X)[X := s] is pi acting on s."""

    def __init__(self, bindings: dict[Var, Term] | None = None):
        self.bindings: dict[Var, Term] = dict(bindings or {})

    def __call__(self, t: Term) -> Term:
        match t:
            case AtomTerm():
                return t
            case Abs(b, body):
                return Abs(b, self(body))
            case Tup(items):
                return Tup(tuple(self(s) for s in items))
            case App(f, arg):
                return App(f, self(arg))
            case Susp(p, x):
                if x in self.bindings:
                    return act(p, self.bindings[x])
                return t
        raise TypeError(f"not a term: {t!r}")

    def compose(self, other: Substitution) -> Substitution:
        """self then other: t(self.compose(other)) == other(self(t))."""
        out = {x: other(s) for x, s in self.bindings.items()}
        for y, s in other.bindings.items():
            if y not in out:
                out[y] = s
        return Substitution(out)

    def domain(self) -> set[Var]:
        return set(self.bindings)

    def is_identity(self) -> bool:
        return not self.bindings

    def __eq__(self, other) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        dom = self.domain() | other.domain()
        return all(same_term(self(var(x.name)), other(var(x.name))) for x in dom)

    def __repr__(self) -> str:
        inner = ", ".join(f"{x} -> {t}" for x, t in sorted(self.bindings.items(), key=lambda kv: kv[0]))
        return "{" + inner + "}"


class NameGenerator:
    """Produces fresh generated atoms with a reserved prefix.

    Generated atoms are identified by (prefix, index), so two generators with
    the same prefix must not overlap; use generator_avoiding to start past
    every generated atom already present in the inputs.
    """

    def __init__(self, prefix: str = GENERATED_PREFIX, start: int = 0):
        self.prefix = prefix
        self._counter = itertools.count(start)
        self._lock = threading.Lock()

    def fresh(self) -> Atom:
        with self._lock:
            k = next(self._counter)
        return Atom(f"{self.prefix}{k}", gen_index=k)

    def fresh_pair(self) -> tuple[Atom, Atom]:
        return self.fresh(), self.fresh()


@dataclass(frozen=True)
class FreshnessContext:
    """A finite set of assumptions a # X (atom fresh for variable)."""

    constraints: frozenset[tuple[Atom, Var]] = frozenset()

    def holds(self, a: Atom, x: Var) -> bool:
        return (a, x) in self.constraints

    def extend(self, pairs) -> FreshnessContext:
        return FreshnessContext(self.constraints | frozenset(pairs))

    def variables(self) -> set[Var]:
        return {x for _, x in self.constraints}

    def atoms(self) -> set[Atom]:
        return {a for a, _ in self.constraints}

    def __str__(self) -> str:
        inner = ", ".join(f"{a} fresh {x}" for a, x in sorted(self.constraints))
        return "{" + inner + "}"


@dataclass(frozen=True)
class FixpointContext:
    """A finite set of assumptions pi fix X (permutation fixes variable)."""

    constraints: frozenset[tuple[Permutation, Var]] = frozenset()

    def perms_of(self, x: Var) -> list[Permutation]:
        return [p for p, y in self.constraints if y == x]

    def supp_of(self, x: Var) -> frozenset[Atom]:
        """Union of supports of the permutations constrained to fix x.

        This is the support of the group they generate, since each generator
        moves only atoms in its own support.
        """
        out: set[Atom] = set()
        for p in self.perms_of(x):
            out |= p.support()
        return frozenset(out)

    def extend(self, pairs) -> FixpointContext:
        return FixpointContext(self.constraints | frozenset(pairs))

    def variables(self) -> set[Var]:
        return {x for _, x in self.constraints}

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for p, _ in self.constraints:
            out |= p.mentioned_atoms()
        return out

    def __str__(self) -> str:
        inner = ", ".join(f"{p} fix {x}" for p, x in sorted(self.constraints, key=lambda c: (c[1], str(c[0]))))
        return "{" + inner + "}"


def generator_avoiding(atoms: set[Atom] | frozenset[Atom], prefix: str = GENERATED_PREFIX) -> NameGenerator:
    top = max((a.gen_index for a in atoms if a.generated), default=-1)
    return NameGenerator(prefix=prefix, start=top + 1)
