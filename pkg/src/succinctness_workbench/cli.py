"""Command-line interface for succinctness-workbench."""

import functools
import hashlib
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import yaml

from succinctness_workbench import CONFIG_PATH, FIXTURES_PATH, __version__
from succinctness_workbench.acc_grammars import complement_acc_cfg
from succinctness_workbench.analysis import bounded_equiv, bounding_estimate, min_device_search, sweep_agreement
from succinctness_workbench.constructions import (
    CounterGrammarSpec,
    complement_ww_bound,
    complement_ww_cfg,
    counter_cfg,
    kth_from_end_nfa,
    w_dollar_w_bound,
    w_dollar_w_csg,
)
from succinctness_workbench.devices import (
    Cfg,
    Device,
    Dfa,
    Dpda,
    Language,
    Nfa,
    Pda,
    PredicateOracle,
    alphabet_of,
    as_dpda,
    show_word,
    size_of,
)
from succinctness_workbench.diagonal import diag_profile
from succinctness_workbench.errors import (
    BudgetExceededError,
    DeviceValidationError,
    FormatError,
    WorkbenchError,
)
from succinctness_workbench.formats import (
    dump_device,
    load_device,
    load_diag_config,
    load_machine,
    write_device,
)
from succinctness_workbench.membership import accepts
from succinctness_workbench.models import (
    LOOKBACK_ALIASES,
    ConversionReceipt,
    EquivalenceResult,
    GapReport,
    Horizon,
    InputRecord,
    RunReport,
    VerificationCheck,
    WorkbenchConfig,
)
from succinctness_workbench.oracles import BUILTIN_PREFIX, acc_predicate_oracle, builtin_oracle, counter_oracle
from succinctness_workbench.tm_encodings import (
    Diverged,
    acc_oracle,
    encode_trace,
    probe_words,
    run_trace,
)
from succinctness_workbench.transforms import (
    cfg_to_pda,
    dfa_equivalent,
    dfa_minimize,
    dfa_product,
    dpda_complement,
    nfa_to_dfa,
    pda_to_cfg,
)
from succinctness_workbench.tty_logger import setup_tty_logger

logger = setup_tty_logger()

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VERIFY = 4
EXIT_BUDGET = 5
BUDGET_ENV = "SUCCINCTNESS_WORKBENCH_BUDGET"
DEFAULT_FIXTURE = FIXTURES_PATH / "diag_lim3.json"


class RunState:
    """Per-invocation state shared by the group and its commands."""

    def __init__(self):
        self.config = WorkbenchConfig()
        self.argv: List[str] = []
        self.inputs: List[InputRecord] = []
        self.started = time.perf_counter()
        self.report: Optional[RunReport] = None

    def record_input(self, path: str) -> None:
        digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        self.inputs.append(InputRecord(path=str(path), sha256=digest))


def _exit_code(error: WorkbenchError) -> int:
    if isinstance(error, (FormatError, DeviceValidationError)):
        return EXIT_PARSE
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET
    return EXIT_USAGE


def handles_errors(command):
    """Turn library errors into a one-line message and their exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except WorkbenchError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(_exit_code(e))

    return wrapper


def report_options(command):
    """--report and --format, shared by every reporting command."""
    command = click.option(
        "--format",
        "output_format",
        type=click.Choice(["json", "text"]),
        default="text",
        help="How the report is printed on stdout",
    )(command)
    command = click.option("--report", "report_path", default=None, help="Also write the JSON report to this path")(
        command
    )
    return command


def horizon_option(command):
    return click.option("--horizon", type=int, default=None, help="Maximum word length of verification sweeps")(
        command
    )


def budget_option(command):
    return click.option(
        "--budget",
        type=int,
        default=None,
        envvar=BUDGET_ENV,
        help=f"Candidate/word budget for searches (env: {BUDGET_ENV})",
    )(command)


def _state(ctx: click.Context) -> RunState:
    return ctx.ensure_object(RunState)


def _horizon(state: RunState, horizon: Optional[int]) -> int:
    value = state.config.horizon if horizon is None else horizon
    if value < 1:
        raise click.BadParameter("the horizon must be at least 1", param_hint="--horizon")
    return value


def _budget(state: RunState, budget: Optional[int]) -> int:
    value = state.config.budget if budget is None else budget
    if value < 1:
        raise click.BadParameter("the budget must be positive", param_hint="--budget")
    return value


def _check(name: str, result: EquivalenceResult) -> VerificationCheck:
    return VerificationCheck(
        name=name,
        horizon=result.horizon,
        words_checked=result.words_checked,
        passed=result.equal,
        counterexample=None if result.counterexample is None else show_word(result.counterexample),
        mode=result.mode,
    )


def _receipt_check(receipt: ConversionReceipt) -> VerificationCheck:
    return VerificationCheck(
        name=f"{receipt.conversion} size bound {receipt.bound}",
        horizon=0,
        words_checked=0,
        passed=receipt.bound_satisfied,
        mode="exact",
    )


def _render_text(report: Dict[str, Any]) -> str:
    lines = [f"command: {' '.join(report['command'])}", f"version: {report['version']}"]
    for key, value in report["outputs"].items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
            if len(value) > 200:
                value = value[:197] + "..."
        lines.append(f"{key}: {value}")
    verification = report["verification"]
    for check in verification["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        detail = f" counterexample {check['counterexample']}" if check["counterexample"] is not None else ""
        lines.append(
            f"[{status}] {check['name']} (horizon {check['horizon']}, {check['mode']}, "
            f"{check['words_checked']} words){detail}"
        )
    lines.append(f"checks: {verification['passed']} passed, {verification['failed']} failed")
    return "\n".join(lines)


def _finish(
    ctx: click.Context,
    outputs: Dict[str, Any],
    checks: Sequence[VerificationCheck],
    report_path: Optional[str],
    output_format: str,
) -> None:
    state = _state(ctx)
    report = RunReport(
        command=state.argv or [ctx.info_name or ""],
        version=__version__,
        inputs=state.inputs,
        outputs=outputs,
        wall_time_seconds=round(time.perf_counter() - state.started, 6),
    )
    report.verification.checks.extend(checks)
    state.report = report
    data = report.to_dict()
    rendered = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)
    if report_path:
        Path(report_path).parent.mkdir(parents=True, exist_ok=True)
        Path(report_path).write_text(rendered + "\n", encoding="utf-8")
    click.echo(rendered if output_format == "json" else _render_text(data))
    if report.verification.failed:
        logger.warning(f"{report.verification.failed} verification check(s) failed")
        ctx.exit(EXIT_VERIFY)
    ctx.exit(EXIT_OK)


def _emit(state: RunState, device: Device, emit: Optional[str], comment: str, outputs: Dict[str, Any]) -> None:
    if emit:
        write_device(device, emit, comment)
        outputs["emitted"] = emit
    else:
        outputs["device"] = dump_device(device, comment)


def _resolve(state: RunState, reference: str, n: Optional[int]) -> Language:
    if reference.startswith(BUILTIN_PREFIX):
        return builtin_oracle(reference, n)
    device = load_device(reference)
    state.record_input(reference)
    return device


def _label(language: Language, reference: str) -> str:
    return language.label if isinstance(language, PredicateOracle) else reference


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config",
    "config_file",
    default=None,
    help="YAML configuration file (env: SUCCINCTNESS_WORKBENCH_CONFIG, default ./workbench.yaml)",
)
@click.option(
    "--log-level",
    type=click.Choice(["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Console log level (overrides config)",
)
@click.pass_context
def cli(ctx, config_file, log_level):
    """Succinctness Workbench - descriptional complexity experiments on grammars and automata.

    Builds succinct grammars, converts between device kinds with size
    receipts, checks bounded equivalences, estimates bounding functions and
    runs the diagonal language, writing a JSON report for every run.
    """
    state = _state(ctx)
    path = config_file or CONFIG_PATH
    if config_file or Path(path).exists():
        try:
            state.config = WorkbenchConfig.from_yaml(str(path))
        except (OSError, yaml.YAMLError, ValueError) as e:
            click.echo(f"Error loading configuration {path}: {e}", err=True)
            ctx.exit(EXIT_PARSE)
    setup_tty_logger(log_level or state.config.log_level)


@cli.command()
@click.argument(
    "kind",
    type=click.Choice(["counter", "complement-ww", "w-dollar-w", "acc-complement", "oddacc", "evenacc"]),
)
@click.option("--n", type=int, default=None, help="Size parameter of the family")
@click.option(
    "--mode", type=click.Choice(["exact", "at-most", "at-least"]), default="exact", help="Counter grammar mode"
)
@click.option("--machine", default=None, help="Zoo machine name or machine JSON file (acc families)")
@click.option("--x", "x", default=None, help="Input word for the acc families; omit for all inputs")
@click.option(
    "--variant",
    type=click.Choice(["acc", "oddacc", "evenacc"]),
    default="acc",
    help="Which language acc-complement complements",
)
@click.option("--emit", default=None, help="Write the grammar to this path")
@horizon_option
@report_options
@click.pass_context
@handles_errors
def construct(ctx, kind, n, mode, machine, x, variant, emit, horizon, report_path, output_format):
    """Build a succinct grammar and check it against its reference predicate.

    KIND: counter, complement-ww, w-dollar-w, acc-complement, oddacc or evenacc.

    Example:

        succinctness-workbench construct counter --n 1024 --mode exact

        succinctness-workbench construct complement-ww --n 3 --emit out/ww3.cfg

        succinctness-workbench construct acc-complement --machine two-step --x a --horizon 10
    """
    state = _state(ctx)
    h = _horizon(state, horizon)
    outputs: Dict[str, Any] = {"family": kind}
    checks: List[VerificationCheck] = []

    if kind in ("counter", "complement-ww", "w-dollar-w"):
        if n is None:
            raise click.UsageError(f"construct {kind} needs --n")
        if kind == "counter":
            grammar: Any = counter_cfg(CounterGrammarSpec(n=n, mode=mode))
            reference: PredicateOracle = counter_oracle(n, mode)
            bound, bound_value = "2*lg(n)", math.floor(2 * math.log2(n))
        elif kind == "complement-ww":
            grammar = complement_ww_cfg(n)
            reference = builtin_oracle("builtin:not-ww", n)
            bound, bound_value = complement_ww_bound(n)
        else:
            grammar = w_dollar_w_csg(n)
            reference = builtin_oracle("builtin:w-dollar-w", n)
            bound, bound_value = w_dollar_w_bound(n)
        size = size_of(grammar)
        outputs.update(
            {
                "n": n,
                "size": size,
                "bound": bound,
                "bound_value": bound_value,
                "bound_satisfied": size <= bound_value,
                "reference": reference.label,
            }
        )
        result = bounded_equiv(grammar, reference, Horizon(max_length=h, alphabet=alphabet_of(reference)))
        checks.append(_check(f"{kind} n={n} agrees with {reference.label}", result))
        _emit(state, grammar, emit, f"{kind} n={n} ({size} nonterminals)", outputs)
        return _finish(ctx, outputs, checks, report_path, output_format)

    if machine is None:
        raise click.UsageError(f"construct {kind} needs --machine")
    tm = load_machine(machine)
    word = None if x is None else tuple(x)
    if kind == "acc-complement":
        grammar = complement_acc_cfg(tm, word, variant, "complement")
        reference = acc_predicate_oracle(tm, variant, word, complement=True)
    else:
        grammar = complement_acc_cfg(tm, word, kind, "positive-pair")
        reference = acc_predicate_oracle(tm, kind, word)
    config = state.config
    words, mode_used = probe_words(
        tm,
        word,
        h,
        step_bound=config.step_bound,
        space_bound=config.space_bound,
        exhaustive_limit=config.exhaustive_limit,
        samples=config.probe_samples,
        seed=config.probe_seed,
    )
    outputs.update({"machine": tm.name, "x": "*" if word is None else "".join(word), "size": size_of(grammar)})
    outputs["rules"] = len(grammar.rules)
    outputs["reference"] = reference.label
    result = sweep_agreement(grammar, reference, words, mode_used)
    checks.append(_check(f"{kind} grammar agrees with {reference.label}", result.model_copy(update={"horizon": h})))
    _emit(state, grammar, emit, f"{kind} for {tm.name}", outputs)
    _finish(ctx, outputs, checks, report_path, output_format)


def _complement_oracle(device: Dpda) -> PredicateOracle:
    return PredicateOracle(
        label="complement of input",
        alphabet=alphabet_of(device),
        predicate=lambda word: not accepts(device, word),
    )


def _combined_oracle(d1: Dfa, d2: Dfa, op: str) -> PredicateOracle:
    if op == "and":
        return PredicateOracle(label="d1 and d2", alphabet=d1.alphabet, predicate=lambda w: accepts(d1, w) and accepts(d2, w))
    return PredicateOracle(label="d1 or d2", alphabet=d1.alphabet, predicate=lambda w: accepts(d1, w) or accepts(d2, w))


def _expect(device: Device, kinds: Tuple[type, ...], conversion: str) -> None:
    if not isinstance(device, kinds):
        names = " or ".join(k.__name__.upper() for k in kinds)
        raise FormatError(f"{conversion} needs a {names}, got {type(device).__name__.upper()}")


@cli.command()
@click.argument(
    "kind", type=click.Choice(["nfa2dfa", "cfg2pda", "pda2cfg", "dpda-complement", "dfa-min", "dfa-product"])
)
@click.option("--input", "input_path", required=True, help="Device file to convert")
@click.option("--input2", "second_path", default=None, help="Second DFA for dfa-product")
@click.option("--op", type=click.Choice(["and", "or"]), default="and", help="dfa-product operation")
@click.option("--emit", default=None, help="Write the converted device to this path")
@horizon_option
@report_options
@click.pass_context
@handles_errors
def convert(ctx, kind, input_path, second_path, op, emit, horizon, report_path, output_format):
    """Convert a device and report its size receipt.

    KIND: nfa2dfa, cfg2pda, pda2cfg, dpda-complement, dfa-min or dfa-product.

    Example:

        succinctness-workbench convert nfa2dfa --input l3.json --emit out/l3-dfa.json

        succinctness-workbench convert dfa-product --input a.json --input2 b.json --op or
    """
    state = _state(ctx)
    h = _horizon(state, horizon)
    device = load_device(input_path)
    state.record_input(input_path)
    outputs: Dict[str, Any] = {"conversion": kind, "input_size": size_of(device)}
    checks: List[VerificationCheck] = []
    receipt: Optional[ConversionReceipt] = None
    expected: Language = device

    if kind == "nfa2dfa":
        _expect(device, (Nfa,), kind)
        result, receipt = nfa_to_dfa(device)  # type: ignore[arg-type]
    elif kind == "cfg2pda":
        _expect(device, (Cfg,), kind)
        result, receipt = cfg_to_pda(device)  # type: ignore[arg-type]
    elif kind == "pda2cfg":
        _expect(device, (Pda,), kind)
        result, receipt = pda_to_cfg(device)  # type: ignore[arg-type]
    elif kind == "dpda-complement":
        _expect(device, (Pda,), kind)
        dpda = device if isinstance(device, Dpda) else as_dpda(device)  # type: ignore[arg-type]
        result, receipt = dpda_complement(dpda)
        expected = _complement_oracle(dpda)
    elif kind == "dfa-min":
        _expect(device, (Dfa,), kind)
        result = dfa_minimize(device)  # type: ignore[arg-type]
        checks.append(
            VerificationCheck(
                name="minimal DFA is equivalent", horizon=0, words_checked=0,
                passed=dfa_equivalent(result, device), mode="exact",  # type: ignore[arg-type]
            )
        )
    else:
        if second_path is None:
            raise click.UsageError("dfa-product needs --input2")
        _expect(device, (Dfa,), kind)
        other = load_device(second_path)
        state.record_input(second_path)
        _expect(other, (Dfa,), kind)
        result, receipt = dfa_product(device, other, op)  # type: ignore[arg-type]
        expected = _combined_oracle(device, other, op)  # type: ignore[arg-type]
        outputs["input2_size"] = size_of(other)

    outputs["output_size"] = size_of(result)
    if receipt is not None:
        outputs["receipt"] = receipt.model_dump(mode="json")
        checks.append(_receipt_check(receipt))
    equivalence = bounded_equiv(result, expected, Horizon(max_length=h))
    checks.append(_check(f"{kind} output agrees with its input", equivalence))
    _emit(state, result, emit, f"{kind} of {input_path}", outputs)
    _finish(ctx, outputs, checks, report_path, output_format)


@cli.command()
@click.option("--a", "first", required=True, help="Device file or builtin:<oracle> reference")
@click.option("--b", "second", required=True, help="Device file or builtin:<oracle> reference")
@click.option("--n", type=int, default=None, help="Size parameter for builtin references without one")
@horizon_option
@budget_option
@report_options
@click.pass_context
@handles_errors
def verify(ctx, first, second, n, horizon, budget, report_path, output_format):
    """Compare two languages on every word up to the horizon.

    Example:

        succinctness-workbench verify --a out/ww2.cfg --b builtin:not-ww --n 2 --horizon 6
    """
    state = _state(ctx)
    h = _horizon(state, horizon)
    a = _resolve(state, first, n)
    b = _resolve(state, second, n)
    result = bounded_equiv(a, b, Horizon(max_length=h), budget=_budget(state, budget))
    outputs = {"a": _label(a, first), "b": _label(b, second), "equal": result.equal}
    _finish(ctx, outputs, [_check(f"{outputs['a']} = {outputs['b']}", result)], report_path, output_format)


@cli.command()
@click.argument("family", type=click.Choice(["kth-from-end", "counter", "complement-ww"]))
@click.option("--k", type=int, default=3, help="Position from the end (kth-from-end)")
@click.option("--n", type=int, default=2, help="Size parameter (counter, complement-ww)")
@click.option(
    "--target",
    type=click.Choice(["dfa", "nfa", "cnf-cfg"]),
    default=None,
    help="Class searched for a minimal device (default: dfa for kth-from-end, cnf-cfg otherwise)",
)
@horizon_option
@budget_option
@report_options
@click.pass_context
@handles_errors
def gap(ctx, family, k, n, target, horizon, budget, report_path, output_format):
    """Measure one succinctness gap: a small witness against the least device of another class.

    Example:

        succinctness-workbench gap kth-from-end --k 3 --target dfa

        succinctness-workbench gap counter --n 2 --target cnf-cfg --horizon 6
    """
    state = _state(ctx)
    h = _horizon(state, horizon)
    if family == "kth-from-end":
        witness: Any = kth_from_end_nfa(k)
        language, witness_class = f"kth-from-end:{k}", "nfa"
    elif family == "counter":
        witness = counter_cfg(CounterGrammarSpec(n=n))
        language, witness_class = f"counter:exact:{n}", "cfg"
    else:
        witness = complement_ww_cfg(n)
        language, witness_class = f"not-ww:{n}", "cfg"
    target_class = target or ("dfa" if family == "kth-from-end" else "cnf-cfg")
    started = time.perf_counter()
    minimal = min_device_search(witness, target_class, Horizon(max_length=h), _budget(state, budget))
    report = GapReport(
        language=language,
        witness_class=witness_class,
        witness_size=size_of(witness),
        target_class=target_class,
        minimal=minimal,
        horizon=h,
        wall_time_seconds=round(time.perf_counter() - started, 6),
    )
    checks = []
    if minimal.flag == "exact" and isinstance(minimal.witness, (Dfa, Nfa)):
        target_dfa = minimal.witness if isinstance(minimal.witness, Dfa) else nfa_to_dfa(minimal.witness)[0]
        source_dfa = witness if isinstance(witness, Dfa) else nfa_to_dfa(witness)[0]
        checks.append(
            VerificationCheck(
                name="minimal device is equivalent to the witness", horizon=0, words_checked=0,
                passed=dfa_equivalent(target_dfa, source_dfa), mode="exact",
            )
        )
    else:
        result = bounded_equiv(witness, minimal.witness, Horizon(max_length=h, alphabet=alphabet_of(witness)))
        checks.append(_check("minimal device agrees with the witness", result))
    outputs = report.model_dump(mode="json", exclude={"wall_time_seconds"})
    _finish(ctx, outputs, checks, report_path, output_format)


@cli.command()
@click.option("--pair", default="dfa,nfa", help="M,M' class pair: minimal M-devices for M'-devices")
@click.option("--n", type=int, required=True, help="Largest M'-device size")
@click.option("--alphabet", default="ab", help="Alphabet of the enumerated devices, one character per symbol")
@horizon_option
@budget_option
@report_options
@click.pass_context
@handles_errors
def estimate(ctx, pair, n, alphabet, horizon, budget, report_path, output_format):
    """Estimate a bounding function at n on a finite horizon.

    Example:

        succinctness-workbench estimate --pair dfa,nfa --n 4 --horizon 12
    """
    state = _state(ctx)
    h = _horizon(state, horizon)
    classes = tuple(part.strip() for part in pair.split(","))
    if len(classes) != 2:
        raise click.BadParameter("expected two classes separated by a comma", param_hint="--pair")
    result = bounding_estimate(
        classes, n, Horizon(max_length=h, alphabet=tuple(alphabet)), _budget(state, budget)  # type: ignore[arg-type]
    )
    outputs = {
        "pair": list(result.pair),
        "n": result.n,
        "horizon": result.horizon,
        "max": result.max,
        "complete": result.complete,
        "rows": [
            {
                "index": row.index,
                "device_size": row.device_size,
                "minimal_size": row.minimal_size,
                "flag": row.flag,
                "error": row.error,
            }
            for row in result.rows
        ],
    }
    _finish(ctx, outputs, [], report_path, output_format)


@cli.command()
@click.option("--fixture", "fixture_path", default=None, help="DiagConfig JSON file (default: the shipped fixture)")
@click.option("--max-s", type=int, default=None, help="Override the fixture's largest input length")
@click.option(
    "--lookback",
    type=click.Choice(["full", "short", *LOOKBACK_ALIASES]),
    default=None,
    help="Override the lookback window",
)
@click.option("--space-cap/--no-space-cap", default=None, help="Override the satisfied-set space cap")
@report_options
@click.pass_context
@handles_errors
def diagonalize(ctx, fixture_path, max_s, lookback, space_cap, report_path, output_format):
    """Run the diagonal language and report which requirements hold.

    Example:

        succinctness-workbench diagonalize --max-s 64
    """
    state = _state(ctx)
    path = fixture_path or str(DEFAULT_FIXTURE)
    config = load_diag_config(path)
    state.record_input(path)
    overrides: Dict[str, Any] = {}
    if max_s is not None:
        overrides["max_s"] = max_s
    if lookback is not None:
        overrides["lookback"] = lookback
    if space_cap is not None:
        overrides["space_cap"] = space_cap
    config = config.model_validate({**config.model_dump(), **overrides})
    profile = diag_profile(config)
    checks = [
        VerificationCheck(
            name=f"R{r.index} differs from {r.grammar}",
            horizon=config.max_s,
            words_checked=config.max_s + 1,
            passed=r.satisfied,
            counterexample=None if r.witness is None else f"a^{r.witness}",
        )
        for r in profile.requirements
    ]
    outputs = {
        "members": profile.members,
        "bits": "".join("1" if bit else "0" for bit in profile.bits),
        "limit": profile.limit,
        "requirements": [r.model_dump(mode="json") for r in profile.requirements],
    }
    _finish(ctx, outputs, checks, report_path, output_format)


@cli.command("encode-tm")
@click.argument("machine")
@click.option("--x", "x", default="", help="Input word, one character per symbol")
@click.option("--step-bound", type=int, default=None, help="Maximum number of steps simulated")
@click.option("--space-bound", type=int, default=None, help="Maximum tape width")
@click.option("--emit", default=None, help="Write the encoded computation to this path")
@report_options
@click.pass_context
@handles_errors
def encode_tm(ctx, machine, x, step_bound, space_bound, emit, report_path, output_format):
    """Run a machine and print its encoded computation.

    MACHINE: zoo name or machine JSON file.

    Example:

        succinctness-workbench encode-tm two-step --x a
    """
    state = _state(ctx)
    tm = load_machine(machine)
    if Path(machine).exists():
        state.record_input(machine)
    run = run_trace(
        tm,
        x,
        step_bound if step_bound is not None else state.config.step_bound,
        space_bound if space_bound is not None else state.config.space_bound,
    )
    outputs: Dict[str, Any] = {"machine": tm.name, "x": x}
    checks: List[VerificationCheck] = []
    if isinstance(run, Diverged):
        outputs.update({"halted": False, "reason": run.reason, "steps": run.steps})
        return _finish(ctx, outputs, checks, report_path, output_format)
    encoded = encode_trace(run)
    outputs.update(
        {
            "halted": True,
            "accepted": run.accepted,
            "steps": run.steps,
            "width": run.width,
            "configs": [" ".join(cells) for cells in run.configs],
            "length": len(encoded),
        }
    )
    if emit:
        Path(emit).parent.mkdir(parents=True, exist_ok=True)
        Path(emit).write_text(encoded.text() + "\n", encoding="utf-8")
        outputs["emitted"] = emit
    else:
        outputs["encoding"] = encoded.text()
    checks.append(
        VerificationCheck(
            name="encoding is in ACC exactly when the run accepts",
            horizon=len(encoded),
            words_checked=1,
            passed=acc_oracle(tm, "acc", encoded.symbols, tuple(x)) == run.accepted,
        )
    )
    _finish(ctx, outputs, checks, report_path, output_format)


@cli.command()
@click.argument("config_file", default="workbench.yaml")
def init(config_file):
    """Initialize a sample configuration file.

    CONFIG_FILE: Path where the configuration file should be created.

    Example:

        succinctness-workbench init workbench.yaml
    """
    config_path = Path(config_file)

    if config_path.exists():
        click.echo(f"Error: {config_file} already exists", err=True)
        raise click.Abort()

    sample_config = WorkbenchConfig().model_dump()
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with open(config_path, "w", encoding="utf-8") as f:
        f.write("# succinctness-workbench configuration\n")
        f.write(f"# {BUDGET_ENV} overrides 'budget' for commands that take --budget\n")
        yaml.dump(sample_config, f, default_flow_style=False, sort_keys=False)

    click.echo(f"Created sample configuration file: {config_file}")
    click.echo("\nEdit this file to change default horizons, budgets and probe settings.")


def run_command(argv: Sequence[str]) -> Tuple[int, Optional[RunReport]]:
    """Run one command line and return its exit status and report."""
    state = RunState()
    state.argv = list(argv)
    try:
        code = cli.main(args=list(argv), prog_name="succinctness-workbench", standalone_mode=False, obj=state)
    except click.UsageError as e:
        e.show()
        code = EXIT_USAGE
    except click.ClickException as e:
        e.show()
        code = e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        code = 1
    return int(code or 0), state.report


def main():
    """Entry point for the CLI."""
    code, _ = run_command(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
