"""Evaluate a parsed scenario and render a deterministic text report."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elements import TWO_PORT, Network, apply_element, make_element
from .fock import ATOL, OperatorState
from .postselection import QuquartAmplitudeTable, classify_all, postselect
from .scenario import Scenario, format_complex
from .sources import QuquartSpec, SpdcExpansion, joint_input
from .tensor import TERMS, AmplitudeCounts, CrossCheckReport, cross_check


class EngineError(RuntimeError):
    """A valid scenario that the engine cannot evaluate."""


@dataclass
class RunResult:
    scenario: Scenario
    input_state: OperatorState
    output_state: OperatorState
    table: QuquartAmplitudeTable
    oracle: list[CrossCheckReport] | None = None
    oracle_note: str | None = None
    counts: dict[str, AmplitudeCounts] | None = None
    counts_note: str | None = None

    @property
    def oracle_ok(self) -> bool:
        return all(r.agree for r in self.oracle or [])


def build_network(s: Scenario) -> Network:
    elements = [make_element(e.kind, *e.inputs, *e.outputs, angle=e.angle) for e in s.elements]
    return Network(elements, [src.channel for src in s.sources])


def execute(s: Scenario) -> RunResult:
    try:
        expansions = [
            SpdcExpansion(QuquartSpec(src.channel, src.coeffs), src.pairs)
            for src in s.sources
            if not src.is_vacuum
        ]
        network = build_network(s)
        state = joint_input(expansions, 2 * len(s.pattern))
        stages: list[OperatorState] = []
        out = state
        for e in network.elements:
            stages.append(out)
            out = apply_element(out, e)
    except ValueError as exc:
        raise EngineError(str(exc)) from exc

    result = RunResult(s, state, out, postselect(out, s.pattern))
    if s.options.oracle:
        _run_oracle(result, network, stages)
    if s.options.counts:
        _run_counts(result)
    return result


def _run_oracle(result: RunResult, network: Network, stages: list[OperatorState]) -> None:
    reports = []
    for e, before in zip(network.elements, stages):
        if e.name not in TWO_PORT:
            continue
        if before.degrees() != {4} or not before.channels() <= set(e.inputs):
            continue
        reports.append(cross_check(before, e))
    if reports:
        result.oracle = reports
    else:
        result.oracle_note = "not applicable (needs a four-photon state entering a two-port element)"


def _run_counts(result: RunResult) -> None:
    s = result.scenario
    lit = [src for src in s.sources if not src.is_vacuum]
    two_port = [e for e in s.elements if e.kind in TWO_PORT]
    if len(lit) != 2 or len(s.elements) != 1 or len(two_port) != 1:
        result.counts_note = "not applicable (needs two sources feeding a single two-port element)"
        return
    e = two_port[0]
    by_channel = {src.channel: src.coeffs for src in lit}
    if set(by_channel) != set(e.inputs):
        result.counts_note = "not applicable (sources must feed the element inputs)"
        return
    result.counts = classify_all(e.kind, by_channel[e.inputs[0]], by_channel[e.inputs[1]])


def _fmt_real(x: float, precision: int) -> str:
    if abs(x) < 0.5 * 10.0 ** (-precision):
        x = 0.0
    return f"{x:.{precision}f}"


def format_amplitude(z: complex, precision: int = 6) -> str:
    return f"({_fmt_real(z.real, precision)},{_fmt_real(z.imag, precision)})"


def _describe_source(src) -> str:
    if src.is_vacuum:
        return f"{src.channel} vacuum"
    coeffs = " ".join(format_complex(c) for c in src.coeffs)
    return f"{src.channel} ququart {coeffs} pairs={src.pairs}"


def render(result: RunResult) -> str:
    s = result.scenario
    p = s.options.precision
    lines = [f"scenario: {s.name}"]
    for src in s.sources:
        lines.append(f"source: {_describe_source(src)}")
    for e in s.elements:
        if e.angle is not None:
            lines.append(f"element: {e.kind} {e.inputs[0]} {e.angle!r}")
        else:
            lines.append(f"element: {e.kind} {' '.join(e.inputs)} -> {' '.join(e.outputs)}")
    lines.append(f"postselect: {' '.join(s.pattern)} ({2 * len(s.pattern)} photons)")

    table = result.table.normalized() if s.options.normalize else result.table
    label = "amplitudes (normalized)" if s.options.normalize else "amplitudes"
    lines.append(f"{label}: {len(table)}")
    for key, amp in table.sorted_items():
        ket = "|" + ",".join(str(d) for d in key) + ">"
        lines.append(f"  {ket}  {format_amplitude(amp, p)}")
    lines.append(f"remainder: {result.table.wasted} non-ququart monomials")

    if s.options.counts:
        if result.counts is None:
            lines.append(f"counts: {result.counts_note}")
        else:
            kind = next(e.kind for e in s.elements)
            lines.append(f"counts: {kind}, labelled-slot amplitudes (convention-dependent)")
            lines.append("  term   kept  wasted  vanished  cancelled")
            for t in TERMS + ("total",):
                c = result.counts[t]
                lines.append(f"  {t:<5} {c.kept:>5} {c.wasted:>7} {c.vanished:>9} {c.cancelled:>10}")
            total = result.counts["total"]
            if total.wasted:
                ratio = Fraction(total.kept, total.wasted)
                lines.append(f"  kept/wasted: {total.kept}/{total.wasted} = {ratio}")
            else:
                lines.append("  kept/wasted: no waste")

    if s.options.oracle:
        if result.oracle is None:
            lines.append(f"oracle: {result.oracle_note}")
        for r in result.oracle or []:
            verdict = "agree" if r.agree else "DISAGREE"
            lines.append(f"oracle: {verdict} at {r.element} ({r.compared} entries, tolerance {ATOL:g})")
            for key, engine, oracle in r.failures:
                lines.append(
                    f"  {key} engine {format_amplitude(engine, p)} oracle {format_amplitude(oracle, p)}"
                )
    return "\n".join(lines) + "\n"


def run_scenario(s: Scenario) -> str:
    return render(execute(s))
