import pytest

from nomfix import (
    Atom,
    Eq,
    FixpointContext,
    Permutation,
    Signature,
    Substitution,
    Susp,
    Theory,
    Var,
    free_vars,
    is_more_general,
    match,
    parse_constraint,
    parse_perm,
    parse_term,
    same_term,
    unify,
    verify_solution,
)
from nomfix.unify import Solution, measure_decreases
from gen import SIG_PLAIN, random_term

a, b, c = Atom("a"), Atom("b"), Atom("c")
X, Y, W = Var("X"), Var("Y"), Var("W")
SIG0 = Signature(permissive=True)
idp = Permutation.identity()


class TestWorkedExample:
    """[a] f(X, a) =? [b] f((b c).W, (a c).Y) has the principal solution
    X -> (a b)(b c).W, Y -> b under two fixed-point constraints on W."""

    def solve(self):
        s = parse_term("[a] f((X, a))")
        t = parse_term("[b] f(((b c).W, (a c).Y))")
        return (Eq(s, t),), unify((Eq(s, t),))

    def test_solved_with_expected_substitution(self):
        pr, res = self.solve()
        assert res.solved
        sigma = res.solution.subst
        assert same_term(sigma(Susp(idp, Y)), parse_term("b"))
        assert same_term(sigma(Susp(idp, X)), parse_term("(a b)(b c).W"))
        assert sigma.domain() == {X, Y}

    def test_expected_context_shape(self):
        _, res = self.solve()
        cons = sorted(res.solution.context.constraints, key=lambda e: str(e[0]))
        assert [x for _, x in cons] == [W, W]
        # one constraint swaps 'a' with a generated atom, the other swaps two
        # generated atoms
        shapes = sorted(
            (sum(x.generated for x in p.support()), len(p.support())) for p, _ in cons
        )
        assert shapes == [(1, 2), (2, 2)]
        assert a in {x for p, _ in cons for x in p.support()}

    def test_solution_verifies(self):
        pr, res = self.solve()
        assert verify_solution(SIG0, pr, res.solution)

    def test_steps_are_recorded(self):
        _, res = self.solve()
        rules = [s.rule for s in res.steps]
        assert rules[0] == "eq-abs-rename"
        assert "eq-inst1" in rules and "eq-inst2" in rules


class TestOutcomes:
    def test_atom_equation(self):
        assert unify((Eq(parse_term("a"), parse_term("a")),)).solved
        res = unify((Eq(parse_term("a"), parse_term("b")),))
        assert res.status == "unsolvable" and res.witness_kind == "clash"

    def test_clash_of_symbols(self):
        res = unify((parse_constraint("f(a) =? g(a)"),))
        assert res.witness_kind == "clash"

    def test_occurs_check(self):
        res = unify((parse_constraint("X =? f(X)"),))
        assert res.witness_kind == "occurs"
        assert not res.solved

    def test_occurs_through_permutation(self):
        res = unify((parse_constraint("X =? f((a b).X)"),))
        assert res.witness_kind == "occurs"

    def test_fixpoint_inconsistency(self):
        res = unify((parse_constraint("(a b) fix? a"),))
        assert res.witness_kind == "fixpoint-inconsistency"

    def test_consistent_fix_atom(self):
        assert unify((parse_constraint("(a b) fix? c"),)).solved

    def test_same_variable_equation_yields_constraint(self):
        res = unify((parse_constraint("(a b).X =? X"),))
        assert res.solved
        ((p, x),) = res.solution.context.constraints
        assert x == X and p.same_action(parse_perm("(a b)"))
        assert res.solution.subst.is_identity()

    def test_swapped_variables_unify_by_instantiation(self):
        res = unify((parse_constraint("(a b).X =? Y"),))
        assert res.solved
        assert same_term(res.solution.subst(Susp(idp, X)), parse_term("(a b).Y"))

    def test_fix_constraint_distributes(self):
        res = unify((parse_constraint("(a b) fix? (X, [a] Y)"),))
        assert res.solved
        constrained = {x for _, x in res.solution.context.constraints}
        assert X in constrained

    def test_abstraction_same_binder(self):
        res = unify((parse_constraint("[a] X =? [a] f(b)"),))
        assert res.solved
        assert same_term(res.solution.subst(Susp(idp, X)), parse_term("f(b)"))

    def test_instantiation_moves_through_the_suspension(self):
        res = unify((parse_constraint("(a b).X =? f(a)"),))
        assert res.solved
        assert same_term(res.solution.subst(Susp(idp, X)), parse_term("f(b)"))

    def test_tuple_arity_clash(self):
        res = unify((parse_constraint("(a, b) =? (a, b, c)"),))
        assert res.witness_kind == "clash"

    def test_c_theory_rejected_here(self):
        sig = Signature({"+": Theory.C})
        with pytest.raises(ValueError):
            unify((parse_constraint("+(a, b) =? +(b, a)", sig),), sig=sig)


class TestMeasure:
    def test_measure_decreases_on_recorded_runs(self, rng):
        assert __debug__  # the drivers assert the decrease internally
        for _ in range(200):
            pr = tuple(
                Eq(random_term(rng, SIG_PLAIN), random_term(rng, SIG_PLAIN))
                for _ in range(rng.randrange(1, 3))
            )
            unify(pr)  # raises AssertionError on any violation

    def test_multiset_ordering(self):
        assert measure_decreases((1, (3,)), (1, (2, 2, 2)))
        assert measure_decreases((1, (2, 1)), (1, (2,)))
        assert measure_decreases((2, (1,)), (1, (9, 9)))
        assert not measure_decreases((1, (2,)), (1, (2,)))
        assert not measure_decreases((1, (2,)), (1, (3,)))


class TestSoundness:
    def test_random_solutions_verify(self, rng):
        solved = 0
        for _ in range(300):
            pr = tuple(
                Eq(random_term(rng, SIG_PLAIN), random_term(rng, SIG_PLAIN))
                for _ in range(rng.randrange(1, 3))
            )
            res = unify(pr)
            if res.solved:
                solved += 1
                assert verify_solution(SIG_PLAIN, pr, res.solution)
        assert solved > 30

    def test_idempotent_substitutions(self, rng):
        for _ in range(150):
            pr = (Eq(random_term(rng, SIG_PLAIN), random_term(rng, SIG_PLAIN)),)
            res = unify(pr)
            if res.solved:
                sigma = res.solution.subst
                for x in sigma.domain():
                    once = sigma(Susp(idp, x))
                    assert same_term(once, sigma(once))


class TestMatch:
    def test_rigid_side_never_instantiated(self):
        res = match((Eq(parse_term("X"), parse_term("f(Y)")),), rigid={Y})
        assert res.solved
        assert same_term(res.solution.subst(Susp(idp, X)), parse_term("f(Y)"))
        assert Y not in res.solution.subst.domain()

    def test_rigid_failure(self):
        res = match((Eq(parse_term("f(a)"), parse_term("Y")),), rigid={Y})
        assert not res.solved and res.witness_kind == "rigid"

    def test_variable_split_enforced(self):
        with pytest.raises(ValueError):
            match((Eq(parse_term("Y"), parse_term("X")),), rigid={Y})


class TestOrdering:
    def test_generalization_chain(self):
        gen = Solution(FixpointContext(), Substitution({X: Susp(idp, Y)}))
        inst = Solution(FixpointContext(), Substitution({X: parse_term("a"), Y: parse_term("a")}))
        assert is_more_general(gen, inst, [X, Y])
        assert not is_more_general(inst, gen, [X, Y])
        assert is_more_general(gen, gen, [X, Y])

    def test_context_constrains_instances(self):
        constrained = Solution(
            FixpointContext(frozenset({(parse_perm("(a b)"), X)})), Substitution()
        )
        fits = Solution(FixpointContext(), Substitution({X: parse_term("c")}))
        breaks = Solution(FixpointContext(), Substitution({X: parse_term("a")}))
        assert is_more_general(constrained, fits, [X])
        assert not is_more_general(constrained, breaks, [X])

    def test_moderated_instance(self):
        # X -> (a b).Y subsumes X -> b, Y -> a
        gen = Solution(FixpointContext(), Substitution({X: parse_term("(a b).Y")}))
        inst = Solution(FixpointContext(), Substitution({X: parse_term("b"), Y: parse_term("a")}))
        assert is_more_general(gen, inst, [X])

    def test_computed_solutions_subsume_ground_instances(self, rng):
        checked = 0
        for _ in range(200):
            pr = (Eq(random_term(rng, SIG_PLAIN, depth=2), random_term(rng, SIG_PLAIN, depth=2)),)
            res = unify(pr)
            if not res.solved:
                continue
            vs = sorted(free_vars(pr[0].lhs) | free_vars(pr[0].rhs))
            if not vs:
                continue
            # build a ground instance of the computed solution
            inst = {}
            for x in vs:
                t = res.solution.subst(Susp(idp, x))
                ground = Substitution({y: parse_term("c") for y in free_vars(t)})(t)
                inst[x] = ground
            ground_sol = Solution(FixpointContext(), Substitution(inst))
            if not verify_solution(SIG_PLAIN, pr, ground_sol):
                continue
            checked += 1
            assert is_more_general(res.solution, ground_sol, vs)
        assert checked > 20
