from nomfix import (
    Atom,
    FixpointContext,
    Permutation,
    Signature,
    Theory,
    Var,
    act,
    check_alpha_fixp,
    check_fixp,
    flatten,
    parse_perm,
    parse_term,
)
from gen import SIG_FULL, random_fixp_context, random_perm, random_term

a, b, c = Atom("a"), Atom("b"), Atom("c")
X, Y = Var("X"), Var("Y")
EMPTY = FixpointContext()
SIG0 = Signature(permissive=True)


def ctx(*entries):
    return FixpointContext(
        frozenset((parse_perm(p), Var(x)) for p, x in entries)
    )


class TestFixRules:
    def test_atom(self):
        assert check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("c"))
        assert not check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("a"))

    def test_suspension_conjugates(self):
        # the permutation is conjugated through the suspension before the
        # context is consulted
        assert check_fixp(SIG0, ctx(("(a c)", "X")), parse_perm("(a b)"), parse_term("(b c).X"))
        assert not check_fixp(SIG0, ctx(("(a b)", "X")), parse_perm("(a b)"), parse_term("(b c).X"))
        assert check_fixp(SIG0, ctx(("(a b)", "X")), parse_perm("(a b)"), parse_term("X"))
        assert not check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("X"))

    def test_abstraction_shields_its_binder(self):
        assert check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("[a] a"))
        assert check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("[a] [b] (a, b)"))
        assert not check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("[a] b"))

    def test_abstraction_over_suspension(self):
        # binding a atom does not excuse the variable underneath
        assert not check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("[a] X"))
        assert check_fixp(SIG0, ctx(("(a b)", "X")), parse_perm("(a b)"), parse_term("[c] X"))

    def test_tuple_and_application(self):
        assert check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("f((c, [a] a))"))
        assert not check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("f((c, a))"))

    def test_generated_atoms_in_inputs_are_avoided(self):
        # contexts produced by the solver contain generated atoms; fresh ones
        # drawn during checking must not collide with them
        g = Atom("#c0", gen_index=0)
        g2 = Atom("#c1", gen_index=1)
        context = FixpointContext(
            frozenset({(Permutation.swap(a, g), Var("W")), (Permutation.swap(g, g2), Var("W"))})
        )
        assert check_fixp(SIG0, context, Permutation.swap(a, g), parse_term("[b] W"))


class TestAlphaFixp:
    def test_abstraction_rename(self):
        assert check_alpha_fixp(SIG0, EMPTY, parse_term("[a] a"), parse_term("[b] b"))
        assert not check_alpha_fixp(SIG0, EMPTY, parse_term("[a] b"), parse_term("[b] a"))

    def test_suspensions_same_variable(self):
        s, t = parse_term("(a b).X"), parse_term("X")
        assert check_alpha_fixp(SIG0, ctx(("(a b)", "X")), s, t)
        assert not check_alpha_fixp(SIG0, EMPTY, s, t)
        assert not check_alpha_fixp(SIG0, EMPTY, parse_term("X"), parse_term("Y"))

    def test_three_cycle_context_covers_its_support(self):
        # the context fixes X with a 3-cycle; the pair of swapped atoms is
        # inside its support so the equality is derivable
        assert check_alpha_fixp(SIG0, ctx(("(a b)(b c)", "X")), parse_term("(a b).X"), parse_term("X"))


class TestEquational:
    sigC = Signature({"xor": Theory.C, "g": Theory.NONE})
    sigAC = Signature({"xor": Theory.AC, "g": Theory.NONE})

    def test_commutative_pair_fixed_by_swap(self):
        sig = Signature({"+": Theory.C})
        assert check_fixp(sig, EMPTY, parse_perm("(a b)"), parse_term("+(a, b)", sig))
        assert not check_fixp(sig, EMPTY, parse_perm("(a c)"), parse_term("+(a, b)", sig))

    def test_three_cycle_needs_associativity(self):
        t = parse_term("xor(xor(g(a), g(b)), g(c))", self.sigC)
        p = parse_perm("(a b)(b c)")
        assert not check_fixp(self.sigC, EMPTY, p, t)
        assert check_fixp(self.sigAC, EMPTY, p, flatten(self.sigAC, t))

    def test_quantified_disjunction(self):
        sig = Signature(
            {"or": Theory.AC, "forall": Theory.NONE, "eq": Theory.NONE, "lt": Theory.NONE}
        )
        s = parse_term("forall([a] or(or(eq((X, a)), lt((a, X))), lt((X, a))))", sig)
        t = parse_term("forall([b] or(or(eq((X, b)), lt((b, X))), lt((X, b))))", sig)
        assert check_alpha_fixp(sig, ctx(("(a b)", "X")), s, t)
        assert not check_alpha_fixp(sig, EMPTY, s, t)

    def test_associative_is_positional(self):
        sig = Signature({"cat": Theory.A})
        s = parse_term("cat(a, cat(b, c))", sig)
        assert check_alpha_fixp(sig, EMPTY, s, parse_term("cat(cat(a, b), c)", sig))
        assert not check_alpha_fixp(sig, EMPTY, s, parse_term("cat(b, cat(a, c))", sig))


class TestProperties:
    def test_fix_iff_moved_term_equal(self, rng):
        # pi fixes t exactly when pi.t is equivalent to t
        for _ in range(400):
            context = random_fixp_context(rng)
            p = random_perm(rng)
            t = flatten(SIG_FULL, random_term(rng, SIG_FULL))
            assert check_fixp(SIG_FULL, context, p, t) == check_alpha_fixp(
                SIG_FULL, context, act(p, t), t
            )

    def test_equivalence_laws_random(self, rng):
        for _ in range(150):
            context = random_fixp_context(rng)
            s = random_term(rng, SIG_FULL)
            t = random_term(rng, SIG_FULL)
            assert check_alpha_fixp(SIG_FULL, context, s, s)
            assert check_alpha_fixp(SIG_FULL, context, s, t) == check_alpha_fixp(
                SIG_FULL, context, t, s
            )

    def test_equivariance_random(self, rng):
        for _ in range(200):
            context = random_fixp_context(rng)
            rho = random_perm(rng)
            s = random_term(rng, SIG_FULL)
            t = act(random_perm(rng), s) if rng.random() < 0.5 else random_term(rng, SIG_FULL)
            assert check_alpha_fixp(SIG_FULL, context, s, t) == check_alpha_fixp(
                SIG_FULL, context, act(rho, s), act(rho, t)
            )

    def test_traces(self):
        trace = []
        check_fixp(SIG0, EMPTY, parse_perm("(a b)"), parse_term("[a] a"), trace=trace)
        assert trace[0].ok and trace[0].rule == "fix-abs"
