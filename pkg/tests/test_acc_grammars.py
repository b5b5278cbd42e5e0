"""Tests for the grammars around encoded computations.

Each grammar is compared with the direct decision procedure on every short
word, on every single edit of the machine's real encoded runs and on seeded
samples up to the horizon.  Languages are read off a shared Earley chart
when a sweep is exhaustive.
"""

import pytest

from succinctness_workbench.acc_grammars import (
    complement_acc_cfg,
    evenacc_cfg,
    length_defect_cfg,
    oddacc_cfg,
    shape_dfa,
)
from succinctness_workbench.analysis import sweep_agreement
from succinctness_workbench.devices import validate
from succinctness_workbench.earley import EarleyRecognizer
from succinctness_workbench.errors import UnsupportedError
from succinctness_workbench.formats import load_machine, zoo_names
from succinctness_workbench.membership import member
from succinctness_workbench.oracles import acc_predicate_oracle
from succinctness_workbench.tm_encodings import (
    Diverged,
    TmMachine,
    TmTransition,
    acc_oracle,
    all_words,
    edits,
    encode_configs,
    encode_trace,
    encoding_alphabet,
    probe_words,
    run_trace,
)

BLANK_ACCEPT = TmMachine(
    name="blank-accept",
    states=("q0", "acc", "rej"),
    tape_alphabet=("_",),
    blank="_",
    input_alphabet=(),
    transitions=(TmTransition(state="q0", read="_", write="_", move="L", next="acc"),),
    start="q0",
    accept="acc",
    reject="rej",
)


def nearby_words(machine, inputs, max_length=2):
    """Every word up to ``max_length`` plus every single edit of each run on ``inputs``."""
    alphabet = encoding_alphabet(machine)
    words = set(all_words(alphabet, max_length))
    for x in inputs:
        encoded = encode_configs(run_trace(machine, x, 16, 8).configs)
        words.add(encoded)
        words.update(edits(encoded, alphabet))
    return words


def assert_agrees(grammar, oracle, words):
    result = sweep_agreement(grammar, oracle, words, "sampled")
    assert result.equal, f"disagreement on {result.counterexample}"


@pytest.mark.parametrize("name, x", [("accept-now", ""), ("accept-now", "a"), ("two-step", "a"), ("reject-now", "")])
def test_complement_of_acc_for_one_input(name, x):
    machine = load_machine(name)
    grammar = complement_acc_cfg(machine, x, "acc", "complement")
    assert validate(grammar) == []
    oracle = acc_predicate_oracle(machine, "acc", tuple(x), complement=True)
    assert_agrees(grammar, oracle, nearby_words(machine, [x, "a" if x == "" else ""]))


def test_complement_of_acc_over_all_inputs():
    machine = load_machine("two-step")
    grammar = complement_acc_cfg(machine, None, "acc", "complement")
    oracle = acc_predicate_oracle(machine, "acc", None, complement=True)
    assert_agrees(grammar, oracle, nearby_words(machine, ["", "a", "aa"]))


@pytest.mark.parametrize("variant", ["oddacc", "evenacc"])
def test_complements_of_the_pair_languages(variant):
    machine = load_machine("two-step")
    x = ("a",) if variant == "oddacc" else None
    grammar = complement_acc_cfg(machine, x, variant, "complement")
    oracle = acc_predicate_oracle(machine, variant, x, complement=True)
    assert_agrees(grammar, oracle, nearby_words(machine, ["a", ""]))


def test_the_encoded_accepting_run_is_not_in_the_complement():
    machine = load_machine("two-step")
    run = encode_configs(run_trace(machine, "a", 16, 8).configs)
    assert not member(complement_acc_cfg(machine, "a"), run)
    assert member(complement_acc_cfg(machine, ""), run)


def test_oddacc_grammar():
    machine = load_machine("two-step")
    grammar = oddacc_cfg(machine, ("a",))
    assert validate(grammar) == []
    assert_agrees(grammar, acc_predicate_oracle(machine, "oddacc", ("a",)), nearby_words(machine, ["a", ""]))


def test_evenacc_grammar():
    machine = load_machine("two-step")
    grammar = evenacc_cfg(machine)
    assert_agrees(grammar, acc_predicate_oracle(machine, "evenacc"), nearby_words(machine, ["a", ""]))


def test_positive_pair_polarity_builds_the_languages_themselves():
    machine = load_machine("accept-now")
    grammar = complement_acc_cfg(machine, "", "oddacc", "positive-pair")
    assert member(grammar, ("$", "[q0:_]", "$", "[acc:_]", "$"))
    with pytest.raises(UnsupportedError):
        complement_acc_cfg(machine, "", "acc", "positive-pair")


def test_shape_dfa_accepts_real_runs():
    machine = load_machine("parity")
    dfa = shape_dfa(machine, None, "acc")
    for x in ("", "aa", "aaaa"):
        assert member(dfa, encode_configs(run_trace(machine, x, 32, 8).configs))
    assert not member(dfa, ("$",))


def test_length_defects():
    machine = load_machine("accept-now")
    grammar = length_defect_cfg(machine, ("odd",))
    assert member(grammar, ("$", "a", "$", "a", "a", "$"))
    assert not member(grammar, ("$", "a", "$", "a", "$"))


def language_up_to(grammar, alphabet, max_length):
    return set(EarleyRecognizer(grammar).members(alphabet, max_length))


def oracle_up_to(oracle, max_length):
    return {word for word in all_words(oracle.alphabet, max_length) if oracle(word)}


@pytest.mark.slow
def test_complement_misses_only_the_accepting_run():
    """Every word up to two symbols longer than the encoded run, the run itself excepted."""
    run = encode_trace(run_trace(BLANK_ACCEPT, "", 16, 8)).symbols
    assert run == ("$", "[q0:_]", "$", "[acc:_]", "$")
    alphabet = encoding_alphabet(BLANK_ACCEPT)
    grammar = complement_acc_cfg(BLANK_ACCEPT, "")
    missing = set(all_words(alphabet, len(run) + 2)) - language_up_to(grammar, alphabet, len(run) + 2)
    assert missing == {run}


@pytest.mark.parametrize(
    "machine, x, horizon",
    [(BLANK_ACCEPT, "", 7), (load_machine("accept-now"), "", 5), (load_machine("accept-now"), "a", 5)],
)
def test_an_accepting_run_is_the_only_member_of_acc(machine, x, horizon):
    run = encode_trace(run_trace(machine, x, 16, 8)).symbols
    members = [w for w in all_words(encoding_alphabet(machine), horizon) if acc_oracle(machine, "acc", w, tuple(x))]
    assert members == [run]


def test_a_rejecting_run_leaves_acc_empty():
    machine = load_machine("reject-now")
    assert not any(acc_oracle(machine, "acc", w, ()) for w in all_words(encoding_alphabet(machine), 5))


@pytest.mark.parametrize("x", ["a", "", None])
def test_complement_for_a_looping_machine_is_everything(x):
    machine = load_machine("right-runner")
    assert isinstance(run_trace(machine, x or "", 64, 16), Diverged)
    alphabet = encoding_alphabet(machine)
    grammar = complement_acc_cfg(machine, x)
    assert len(language_up_to(grammar, alphabet, 4)) == sum(len(alphabet) ** k for k in range(5))
    words, mode = probe_words(machine, x, 14, exhaustive_limit=0, samples=100)
    assert mode == "sampled"
    assert all(member(grammar, word) for word in words)


@pytest.mark.parametrize("x", ["aa", "a", None])
def test_complement_for_the_parity_machine(x):
    machine = load_machine("parity")
    grammar = complement_acc_cfg(machine, x)
    oracle = acc_predicate_oracle(machine, "acc", tuple(x) if x is not None else None, complement=True)
    assert language_up_to(grammar, encoding_alphabet(machine), 3) == oracle_up_to(oracle, 3)
    words, _ = probe_words(machine, x, 14, exhaustive_limit=0, samples=100)
    assert_agrees(grammar, oracle, words)


def sampled_words(machine, horizon, **options):
    words = set()
    for x in (None, "a", "aa"):
        words.update(probe_words(machine, x, horizon, **options)[0])
    return words


@pytest.mark.parametrize("name", zoo_names())
def test_oddacc_and_evenacc_meet_in_acc(name):
    machine = load_machine(name)
    words = sampled_words(machine, 12, exhaustive_limit=2_000, samples=200)
    for word in words:
        both = acc_oracle(machine, "oddacc", word) and acc_oracle(machine, "evenacc", word)
        assert both == acc_oracle(machine, "acc", word), word


@pytest.mark.slow
@pytest.mark.parametrize("name", zoo_names())
def test_positive_grammars_match_their_oracles(name):
    machine = load_machine(name)
    alphabet = encoding_alphabet(machine)
    words = sampled_words(machine, 12, exhaustive_limit=0, samples=100)
    for variant, grammar in (("oddacc", oddacc_cfg(machine, None)), ("evenacc", evenacc_cfg(machine))):
        oracle = acc_predicate_oracle(machine, variant)
        assert language_up_to(grammar, alphabet, 4) == oracle_up_to(oracle, 4), variant
        assert_agrees(grammar, oracle, words)
