"""Per-rule behavior, driven through small saturations so the scheduler,
fairness bookkeeping and sign tables are exercised together."""

from natlog.engine import Budget, saturate
from natlog.grammar import parse
from natlog.rules import normalize_args
from natlog.tableau import T, F, init_tableau
from natlog.terms import Application, Constant, FunType, N, VP, S


def run(pairs, kb, budget=Budget()):
    sentences = [(parse(text, i + 1), sign) for i, (text, sign) in enumerate(pairs)]
    tab = init_tableau(sentences)
    result = saturate(tab, kb, budget)
    return result, tab


def rules_fired(tab):
    return [tab.apps[a].rule for a in sorted(tab.apps)]


def rendered(tab):
    return {tab.render_entry(e) + ":" + e.sign for e in tab.entries.values()}


def test_negation_flips_sign(default_kb):
    result, tab = run([("not all birds fly", T), ("all birds fly", T)], default_kb)
    assert result.closed
    assert "neg" in rules_fired(tab)
    assert "all birds fly:F" in rendered(tab)


def test_conjunction_true_is_linear(default_kb):
    result, tab = run([("birds fly and hover", T), ("some birds hover", F)], default_kb)
    assert result.closed
    assert rules_fired(tab).count("conj") == 1
    assert "c fly:T" in rendered(tab) and "c hover:T" in rendered(tab)


def test_disjunction_true_branches(default_kb):
    # Both disjuncts must independently close against the false hypothesis.
    result, tab = run([("some birds swim or fly", T), ("some birds move", F)],
                      __import__("natlog.lexicon", fromlist=["parse_kb"]).parse_kb(
                          "swim\tsub\tmove\nfly\tsub\tmove\n"))
    assert result.closed
    assert len(tab.closures) == 2


def test_disjunction_false_is_linear(default_kb):
    result, tab = run([("some birds hover", T), ("some birds swim or fly", F)], default_kb)
    assert result.closed
    assert "c swim:F" in rendered(tab) and "c fly:F" in rendered(tab)
    assert len(tab.closures) == 1


def test_roots_in_direct_alternation_close_without_rules(default_kb):
    result, tab = run([("some birds fly", T), ("no birds fly", T)], default_kb)
    assert result.closed
    assert rules_fired(tab) == []
    assert tab.closures[0].rule == "close_alt"


def test_existential_true_introduces_fresh_witness(default_kb):
    result, tab = run([("some birds hover", T), ("some birds fly", F)], default_kb)
    assert result.closed
    assert "exists_T" in rules_fired(tab)
    assert "c birds:T" in rendered(tab) and "c hover:T" in rendered(tab)


def test_existential_fires_once_per_entry(default_kb):
    result, tab = run([("some birds fly", T), ("many dogs run", F)], default_kb)
    assert result.status == "open"
    assert rules_fired(tab).count("exists_T") == 1
    assert tab.entity_count == 1


def test_universal_false_witness(default_kb):
    result, tab = run([("all birds fly", F), ("every bird flies", T)], default_kb)
    assert result.closed
    fired = rules_fired(tab)
    assert "forall_F" in fired and "forall_T" in fired
    assert "c birds:T" in rendered(tab) and "c fly:F" in rendered(tab)


def test_existential_false_linear_with_established_noun(default_kb):
    result, tab = run([("some birds hover", T), ("some birds fly", F)], default_kb)
    assert result.closed
    fired = rules_fired(tab)
    assert fired.count("exists_F") == 1
    # Witness already satisfies the restrictor, so no branch on the noun.
    assert len(tab.closures) == 1


def test_existential_false_branches_without_established_noun(regression_kb):
    result, tab = run([("some mice run", T), ("some small animals run", F)], regression_kb)
    assert result.closed
    assert len(tab.closures) == 2
    rules = {rec.rule for rec in tab.closures.values()}
    assert rules == {"close_sub"}


def test_substitute_labels_oblique_instantiation(default_kb):
    result, tab = run([("a drug halts Alzheimer's disease", T),
                       ("Alzheimer's disease is treated using drugs", F)], default_kb)
    assert result.closed
    assert "substitute" in rules_fired(tab)
    assert "Alzheimer's disease is treated using c:F" in rendered(tab)
    assert {rec.rule for rec in tab.closures.values()} == {"frame_alt"}


def test_up_monotone_replacement(default_kb):
    result, tab = run([("many birds hover high", T), ("few birds fly", T)], default_kb)
    assert result.closed
    app = tab.apps[1]
    assert app.rule == "upDisCov" and app.antecedents == (1, 2)
    assert len(app.produced_segments) == 2
    assert "many birds fly:T" in rendered(tab)


def test_up_monotone_skips_identical_positions(default_kb):
    result, tab = run([("many birds fly", T), ("few birds fly", T)], default_kb)
    # Closure by alternation fires directly; no monotonicity step needed or
    # possible (the marked arguments are identical).
    assert result.closed
    assert rules_fired(tab) == []


def test_down_monotone_dual(default_kb):
    result, tab = run([("no birds fly", T), ("some birds hover", T)], default_kb)
    assert result.closed
    assert "downSubst" in rules_fired(tab)
    closure_rules = sorted(rec.rule for rec in tab.closures.values())
    assert closure_rules == ["close_alt", "close_sub"]


def test_modifier_drop_true_only(default_kb):
    result, tab = run([("many birds hover high", T), ("few birds fly", T)], default_kb)
    assert "adj_sub_T" in rules_fired(tab)
    # The false-signed dual never fires.
    result2, tab2 = run([("many birds hover high", F), ("many birds fly", T)], default_kb)
    assert "adj_sub_T" not in rules_fired(tab2)


def test_unmarked_modifier_blocks_drop(regression_kb):
    # "small" is not subsective in the knowledge base: no drop.
    result, tab = run([("some small animals run", T), ("some animals run", F)], regression_kb)
    assert "adj_sub_T" not in rules_fired(tab)


def test_normalize_args_is_canonicalization():
    many = Constant("many", FunType((N, VP), S))
    bird, fly = Constant("bird", N), Constant("fly", VP)
    popped = Application(many, (bird,))
    term, args = normalize_args(popped, (fly,))
    assert term == many and args == (bird, fly)
    # Identity on canonical input.
    assert normalize_args(many, (bird, fly)) == (many, (bird, fly))


def test_branching_rules_produce_two_segments(default_kb):
    result, tab = run([("some birds swim or fly", T), ("no birds move", T)],
                      __import__("natlog.lexicon", fromlist=["parse_kb"]).parse_kb(
                          "swim\tsub\tmove\nfly\tsub\tmove\nmono\tno\t1\tdown\nmono\tno\t2\tdown\nno\talt\tsome\n"))
    for app in tab.apps.values():
        assert len(app.produced_segments) in (1, 2)
