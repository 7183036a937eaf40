"""Unification modulo commutative function symbols.

Runs the same simplification rules as nomfix.unify but branches in two at
every application of a commutative symbol, exploring a finite derivation
tree.  Every successful leaf contributes one solution; the collected set is a
complete set of solutions for the problem.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .syntax import NameGenerator, Signature, Theory
from .unify import (
    Solution,
    classify_normal_form,
    expand,
    extract_solution,
    is_more_general,
    measure_decreases,
    problem_measure,
    problem_vars,
    _default_gen,
    _validate,
)


@dataclass
class DerivationNode:
    """A node of the derivation tree: the problem at this point, the rule
    that produced the children, and for leaves the outcome."""

    problem: tuple
    rule: str | None = None
    children: list["DerivationNode"] = field(default_factory=list)
    leaf_kind: str | None = None  # "success" or a failure kind
    solution: Solution | None = None

    def to_dict(self) -> dict:
        out: dict = {"constraints": [str(c) for c in self.problem]}
        if self.rule:
            out["rule"] = self.rule
        if self.leaf_kind:
            out["leaf"] = self.leaf_kind
        if self.solution is not None:
            out["solution"] = self.solution.key()
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def render(self, indent: int = 0) -> str:
        head = "; ".join(str(c) for c in self.problem) or "(empty)"
        tag = f" [{self.rule}]" if self.rule else ""
        tag += f" <{self.leaf_kind}>" if self.leaf_kind else ""
        lines = ["  " * indent + head + tag]
        for c in self.children:
            lines.append(c.render(indent + 1))
        return "\n".join(lines)


@dataclass
class CUnifyResult:
    status: str  # "solved" | "unsolvable"
    solutions: list[Solution]
    tree: DerivationNode
    leaves: int

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def c_unify(
    pr,
    sig: Signature,
    gen: NameGenerator | None = None,
    dedup: bool = False,
    jobs: int = 1,
) -> CUnifyResult:
    """Solve a unification problem over plain and commutative symbols."""
    pr = tuple(pr)
    _validate(pr, sig, (Theory.NONE, Theory.C))
    if gen is None:
        gen = _default_gen(pr)
    root = DerivationNode(pr)
    if jobs > 1:
        _grow_parallel(root, sig, gen, [], jobs)
    else:
        _grow(root, sig, gen, [])
    solutions: list[Solution] = []
    leaves = 0
    stack = [root]
    while stack:
        node = stack.pop()
        if node.leaf_kind is not None:
            leaves += 1
            if node.solution is not None:
                solutions.append(node.solution)
        stack.extend(node.children)
    solutions.sort(key=Solution.key)
    if dedup:
        solutions = _dedup(solutions, problem_vars(pr), sig)
    status = "solved" if solutions else "unsolvable"
    return CUnifyResult(status, solutions, root, leaves)


def _expand_node(node: DerivationNode, sig, gen, steps):
    """Apply one rule, attach children, and return their (node, steps) pairs;
    classify the node as a leaf when no rule applies."""
    children = expand(node.problem, gen, sig=sig, branching=True)
    if not children:
        failure = classify_normal_form(node.problem)
        if failure is None:
            node.leaf_kind = "success"
            node.solution = extract_solution(node.problem, steps)
        else:
            node.leaf_kind = failure[0]
        return []
    if __debug__:
        before = problem_measure(node.problem, by_height=True)
        for child, step in children:
            assert measure_decreases(before, problem_measure(child, by_height=True)), str(step)
    out = []
    for child, step in children:
        node.rule = step.rule
        sub = DerivationNode(child)
        node.children.append(sub)
        out.append((sub, steps + [step]))
    return out


def _grow(node: DerivationNode, sig, gen, steps):
    todo = [(node, steps)]
    while todo:
        n, st = todo.pop()
        todo.extend(_expand_node(n, sig, gen, st))


def _grow_parallel(root: DerivationNode, sig, gen, steps, jobs: int):
    # expand sequentially until the first branch point, then give each
    # branch its own worker; the shared generator hands out disjoint atoms
    frontier = _expand_node(root, sig, gen, steps)
    while len(frontier) == 1:
        frontier = _expand_node(frontier[0][0], sig, gen, frontier[0][1])
    if not frontier:
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(lambda item: _grow(item[0], sig, gen, item[1]), frontier))


def _dedup(solutions: list[Solution], variables, sig) -> list[Solution]:
    kept: list[Solution] = []
    for sol in solutions:
        if any(
            is_more_general(prev, sol, variables, sig)
            and is_more_general(sol, prev, variables, sig)
            for prev in kept
        ):
            continue
        kept.append(sol)
    return kept
