"""Command-line front end.

Subcommands: ``eval`` (one point), ``sweep`` (grid to CSV/JSON),
``thresholds`` (collapse/revival and filtering gains), ``reproduce``
(reference-value table) and ``ineq`` (coefficient tables as JSON).

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import reproduce, scan
from .channels import ChannelKind, Convention
from .filters import STRATEGIES
from .states import FAMILIES, family_params
from .steering import INEQUALITIES, INEQUALITY_SCHEMA, Scenario, get_inequality

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
PARAM_NAMES = ("theta", "c0", "c1", "d0")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inequality: str
    family: str
    params: dict[str, str]
    channel: str | None = None
    p: str | None = None
    topology: list[int] = field(default_factory=lambda: [1])
    scenario: str | None = None
    filter: str | None = None
    dual: list[Any] | None = None
    convention: str = Convention.EFFECTIVE.value
    delta: bool = False
    output: str | None = None
    format: str = "csv"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        return cls(**data)

    @property
    def resolved_scenario(self) -> Scenario:
        return get_inequality(self.inequality).scenario

    def validate(self) -> None:
        expected = self.resolved_scenario
        if self.scenario is not None and Scenario(self.scenario) is not expected:
            raise UsageError(
                f"inequality {self.inequality} belongs to the {expected.value} scenario, not {self.scenario}"
            )
        names = family_params(self.family)
        missing = [n for n in names if n not in self.params]
        extra = [n for n in self.params if n not in names]
        if missing or extra:
            raise UsageError(f"family {self.family} needs --{' --'.join(names)}; missing {missing}, unexpected {extra}")
        if self.filter is not None and expected is Scenario.TWO_TO_ONE and self.filter not in ("auto", "c"):
            raise UsageError("only Charlie is trusted in the 2->1 scenario; use --filter c or auto")
        if self.dual is not None:
            if self.channel is not None:
                raise UsageError("--dual already names the swept channel; drop --channel")
        if self.delta and self.command != "thresholds":
            raise UsageError("--delta only applies to thresholds")

    def swept_channel(self) -> str | None:
        return self.dual[2] if self.dual else self.channel

    def pipeline(self, params: dict[str, float], topology: int) -> scan.Pipeline:
        pre = (self.dual[0], float(self.dual[1])) if self.dual else None
        return scan.Pipeline.build(
            self.inequality, self.family, params, self.swept_channel(), topology,
            filter=self.filter, pre_channel=pre, convention=self.convention,
        )


def _dual(values: Sequence[str]) -> list[Any]:
    first, second = values
    try:
        kind, strength = first.split(",")
        ChannelKind(kind)
        ChannelKind(second)
        s = float(strength)
    except ValueError:
        raise UsageError(f"--dual expects FIRST,STRENGTH SECOND (e.g. pd,0.5 pf), got {' '.join(values)}") from None
    if not 0.0 <= s <= 1.0:
        raise UsageError(f"--dual strength must lie in [0, 1], got {s}")
    return [kind, s, second]


def _topologies(text: str) -> list[int]:
    try:
        topos = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"--topo expects 1, 2, 3 or a comma list, got {text!r}") from None
    if not topos or any(t not in (1, 2, 3) for t in topos):
        raise UsageError(f"--topo values must be 1, 2 or 3, got {text!r}")
    return topos


def _add_run_args(sp: argparse.ArgumentParser, *, output_format: bool = False) -> None:
    sp.add_argument("--ineq", required=True, choices=sorted(INEQUALITIES), help="steering inequality")
    sp.add_argument("--family", required=True, choices=sorted(FAMILIES), help="state family")
    for name in PARAM_NAMES:
        sp.add_argument(f"--{name}", help=f"state parameter {name} (number, or min:max:steps for sweep)")
    sp.add_argument("--channel", choices=[k.value for k in ChannelKind])
    sp.add_argument("--p", help="damping strength (number, or min:max:steps for sweep)")
    sp.add_argument("--topo", default="1", help="damped parties: 1, 2, 3 (thresholds accepts 1,2,3)")
    sp.add_argument("--scenario", choices=[s.value for s in Scenario], help="checked against the inequality")
    sp.add_argument("--filter", choices=STRATEGIES, help="post-select the success branch of a local filter")
    sp.add_argument("--dual", nargs=2, metavar=("FIRST,STRENGTH", "SECOND"),
                    help="fixed-strength first channel, then the swept second channel")
    sp.add_argument("--convention", choices=[c.value for c in Convention], default=Convention.EFFECTIVE.value)
    sp.add_argument("--out", help="output file")
    if output_format:
        sp.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tristeer", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_args(sub.add_parser("eval", help="evaluate one inequality value"))
    _add_run_args(sub.add_parser("sweep", help="evaluate a (state parameter, p) grid"), output_format=True)
    th = sub.add_parser("thresholds", help="collapse and revival strengths")
    _add_run_args(th)
    th.add_argument("--delta", action="store_true", help="also report gains of the filtered state")

    rp = sub.add_parser("reproduce", help="run the reference-value suite")
    rp.add_argument("--criterion", type=int, action="append", choices=sorted(reproduce.CRITERIA))

    iq = sub.add_parser("ineq", help="print an inequality's coefficient table as JSON")
    iq.add_argument("name", nargs="?", choices=sorted(INEQUALITIES))
    iq.add_argument("--schema", action="store_true", help="print the JSON schema instead")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {n: getattr(args, n) for n in PARAM_NAMES if getattr(args, n) is not None}
    cfg = RunConfig(
        command=args.command,
        inequality=args.ineq,
        family=args.family,
        params=params,
        channel=args.channel,
        p=args.p,
        topology=_topologies(args.topo),
        scenario=args.scenario,
        filter=args.filter,
        dual=_dual(args.dual) if args.dual else None,
        convention=args.convention,
        delta=getattr(args, "delta", False),
        output=args.out,
        format=getattr(args, "format", "csv"),
    )
    cfg.validate()
    return cfg


def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{what} must be a number, got {text!r}") from None


def _point_params(cfg: RunConfig) -> dict[str, float]:
    return {k: _number(v, f"--{k}") for k, v in cfg.params.items()}


def _single_topology(cfg: RunConfig) -> int:
    if len(cfg.topology) != 1:
        raise UsageError(f"{cfg.command} takes a single --topo")
    return cfg.topology[0]


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_eval(cfg: RunConfig) -> int:
    pipe = cfg.pipeline(_point_params(cfg), _single_topology(cfg))
    p = 0.0 if cfg.p is None else _number(cfg.p, "--p")
    if pipe.channel is None and cfg.p is not None:
        raise UsageError("--p needs --channel or --dual")
    value = pipe.value(p)
    record = {
        "config": cfg.to_dict(),
        "scenario": cfg.resolved_scenario.value,
        "p": p,
        "value": value,
        "success_probability": pipe.prepared[1],
    }
    print(scan.format_number(value))
    text = json.dumps(record)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _sweep_spec(cfg: RunConfig) -> scan.SweepSpec:
    axes = {k: scan.Axis.parse(v) for k, v in cfg.params.items()}
    varying = [k for k, a in axes.items() if a.steps > 1]
    if len(varying) > 1:
        raise UsageError(f"sweep varies at most one state parameter, got {varying}")
    fixed = {k: a.start for k, a in axes.items()}
    pipe = cfg.pipeline(fixed, _single_topology(cfg))
    if pipe.channel is None:
        raise UsageError("sweep needs --channel or --dual")
    p_axis = scan.Axis.parse(cfg.p or "0")
    state_axis = (varying[0], axes[varying[0]]) if varying else None
    return scan.SweepSpec(pipe, p_axis, state_axis)


def records_to_csv(spec: scan.SweepSpec, records: Sequence[scan.SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow([spec.state_name, "p", "value", "success_probability"])
    fmt = scan.format_number
    for r in records:
        writer.writerow([fmt(r.state_param), fmt(r.p), fmt(r.value), fmt(r.success_probability)])
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig) -> int:
    spec = _sweep_spec(cfg)
    records = scan.sweep(spec)
    if cfg.format == "csv":
        text = records_to_csv(spec, records)
    else:
        text = json.dumps({
            "config": cfg.to_dict(),
            "state_param": spec.state_name,
            "records": [asdict(r) for r in records],
        }) + "\n"
    _emit(text, cfg.output)
    return EXIT_OK


def cmd_thresholds(cfg: RunConfig) -> int:
    params = _point_params(cfg)
    reports = []
    for topo in cfg.topology:
        pipe = cfg.pipeline(params, topo)
        if pipe.channel is None:
            raise UsageError("thresholds need --channel or --dual")
        entry: dict[str, Any] = {"topology": topo}
        if cfg.delta:
            delta = scan.filtering_gain(pipe, cfg.filter or "auto")
            entry.update(delta.reference.to_dict())
            entry["delta"] = delta.to_dict()
        else:
            entry.update(scan.thresholds(pipe).to_dict())
        reports.append(entry)
    _emit(json.dumps({"config": cfg.to_dict(), "reports": reports}, indent=2) + "\n", cfg.output)
    return EXIT_OK


def cmd_reproduce(criteria: Sequence[int] | None) -> int:
    checks = [c for n in (criteria or reproduce.CRITERIA) for c in reproduce.run(n)]
    for check in checks:
        print(check.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_RUNTIME


def cmd_ineq(name: str | None, schema: bool) -> int:
    if schema:
        print(json.dumps(INEQUALITY_SCHEMA, indent=2))
        return EXIT_OK
    if name is None:
        raise UsageError("ineq needs a name unless --schema is given")
    print(get_inequality(name).to_json(indent=2))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce":
            return cmd_reproduce(args.criterion)
        if args.command == "ineq":
            return cmd_ineq(args.name, args.schema)
        cfg = config_from_args(args)
        handler = {"eval": cmd_eval, "sweep": cmd_sweep, "thresholds": cmd_thresholds}[args.command]
        return handler(cfg)
    except (UsageError, ValueError) as exc:
        print(f"tristeer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tristeer: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
