from nomfix import (
    Atom,
    FreshnessContext,
    Signature,
    Theory,
    Var,
    act,
    check_alpha_fresh,
    check_fresh,
    parse_term,
)
from gen import SIG_FULL, random_fresh_context, random_perm, random_term

a, b, c = Atom("a"), Atom("b"), Atom("c")
X, Y = Var("X"), Var("Y")
EMPTY = FreshnessContext()
SIG0 = Signature(permissive=True)


def ctx(*pairs):
    return FreshnessContext(frozenset(pairs))


class TestFreshRules:
    def test_distinct_atoms(self):
        assert check_fresh(EMPTY, a, parse_term("b"))
        assert not check_fresh(EMPTY, a, parse_term("a"))

    def test_suspension_consults_context_through_the_permutation(self):
        # c # X entails a # (a c).X  since (a c) maps c to the requested atom
        assert check_fresh(ctx((c, X)), a, parse_term("(a c).X"))
        assert not check_fresh(ctx((a, X)), a, parse_term("(a c).X"))
        assert check_fresh(ctx((a, X)), a, parse_term("X"))
        assert not check_fresh(EMPTY, a, parse_term("X"))

    def test_application_and_tuple_descend(self):
        assert check_fresh(EMPTY, a, parse_term("f((b, c))"))
        assert not check_fresh(EMPTY, a, parse_term("f((b, a))"))

    def test_abstraction(self):
        assert check_fresh(EMPTY, a, parse_term("[a] a"))
        assert check_fresh(EMPTY, a, parse_term("[b] c"))
        assert not check_fresh(EMPTY, a, parse_term("[b] a"))

    def test_trace_records_rules(self):
        trace = []
        check_fresh(EMPTY, a, parse_term("[b] (b, c)"), trace=trace)
        assert trace[0].ok
        assert trace[0].rule == "#abs"


class TestAlphaSyntactic:
    def test_abstraction_rename(self):
        assert check_alpha_fresh(SIG0, EMPTY, parse_term("[a] a"), parse_term("[b] b"))
        assert not check_alpha_fresh(SIG0, EMPTY, parse_term("[a] b"), parse_term("[b] a"))
        assert check_alpha_fresh(SIG0, EMPTY, parse_term("[a] c"), parse_term("[b] c"))

    def test_suspension_disagreement_set(self):
        # (a b).X ~ X needs both a # X and b # X
        s, t = parse_term("(a b).X"), parse_term("X")
        assert check_alpha_fresh(SIG0, ctx((a, X), (b, X)), s, t)
        assert not check_alpha_fresh(SIG0, ctx((a, X)), s, t)

    def test_variable_clash(self):
        assert not check_alpha_fresh(SIG0, EMPTY, parse_term("X"), parse_term("Y"))

    def test_nested_binders(self):
        s = parse_term("[a] [b] (a, b)")
        t = parse_term("[b] [a] (b, a)")
        assert check_alpha_fresh(SIG0, EMPTY, s, t)
        assert not check_alpha_fresh(SIG0, EMPTY, s, parse_term("[b] [a] (a, b)"))


class TestAlphaEquational:
    sig = Signature({"+": Theory.C, "*": Theory.AC, "cat": Theory.A, "f": Theory.NONE})

    def test_commutative_pairs(self):
        assert check_alpha_fresh(self.sig, EMPTY, parse_term("+(a, b)"), parse_term("+(b, a)"))
        assert not check_alpha_fresh(self.sig, EMPTY, parse_term("+(a, b)"), parse_term("+(a, c)"))

    def test_associative_flattening(self):
        s = parse_term("cat(a, cat(b, c))", self.sig)
        t = parse_term("cat(cat(a, b), c)", self.sig)
        assert check_alpha_fresh(self.sig, EMPTY, s, t)
        assert not check_alpha_fresh(
            self.sig, EMPTY, s, parse_term("cat(b, cat(a, c))", self.sig)
        )

    def test_ac_reordering(self):
        s = parse_term("*(*(a, b), c)", self.sig)
        for other in ("*(c, *(b, a))", "*(*(b, c), a)", "*(b, *(a, c))"):
            assert check_alpha_fresh(self.sig, EMPTY, s, parse_term(other, self.sig))
        assert not check_alpha_fresh(
            self.sig, EMPTY, s, parse_term("*(*(a, a), c)", self.sig)
        )

    def test_commutativity_under_binders(self):
        s = parse_term("[a] +(a, b)", self.sig)
        t = parse_term("[c] +(b, c)", self.sig)
        assert check_alpha_fresh(self.sig, EMPTY, s, t)

    def test_binder_not_absorbed_by_commutativity(self):
        # [a](a + b) and [b](b + a) differ: renaming clashes on the free atom
        s = parse_term("[a] +(a, b)", self.sig)
        t = parse_term("[b] +(b, a)", self.sig)
        assert not check_alpha_fresh(self.sig, EMPTY, s, t)

    def test_equivalence_laws_random(self, rng):
        for _ in range(150):
            s = random_term(rng, SIG_FULL)
            d = random_fresh_context(rng)
            assert check_alpha_fresh(SIG_FULL, d, s, s)
            t = random_term(rng, SIG_FULL)
            fwd = check_alpha_fresh(SIG_FULL, d, s, t)
            assert fwd == check_alpha_fresh(SIG_FULL, d, t, s)

    def test_freshness_preserved_by_alpha(self, rng):
        # derivably equivalent terms have the same derivable freshnesses
        hits = 0
        for _ in range(200):
            d = random_fresh_context(rng)
            s = random_term(rng, SIG_FULL)
            t = act(random_perm(rng), s)
            if not check_alpha_fresh(SIG_FULL, d, s, t):
                continue
            hits += 1
            x = rng.choice("abcde")
            assert check_fresh(d, Atom(x), s) == check_fresh(d, Atom(x), t)
        assert hits > 20
