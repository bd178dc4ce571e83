"""Command-line front end: ``verify``, ``derive``, ``table`` and ``eval``.

Exit codes: 0 clean, 1 mathematical failure (violations, inconsistency,
mismatch, window too small), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .checker import Window, verify_all
from .deriver import DerivationError, MIN_WINDOW, cross_check, derive_central, derive_centerless
from .exactfield import GaussianRational, ParseError, PoleError
from .structures import (
    C,
    Element,
    G,
    HalfInt,
    L,
    Sector,
    StructureError,
    StructureSystem,
    multiply,
    super_commutator,
)
from .tablefile import dump_table, product_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    theta: Sector = Sector.NEVEU_SCHWARZ
    window: int = 8
    epsilon: Optional[GaussianRational] = None  # None means symbolic
    centerless: bool = False
    out: Optional[str] = None
    format: str = "text"
    trace: Optional[str] = None
    expr: Optional[str] = None

    def system(self) -> StructureSystem:
        if self.centerless:
            return StructureSystem.centerless(self.theta, self.epsilon)
        return StructureSystem.central_extension(self.theta, self.epsilon)

    def describe(self) -> dict:
        return {
            "theta": str(self.theta),
            "window": self.window,
            "epsilon": "symbolic" if self.epsilon is None else str(self.epsilon),
            "centerless": self.centerless,
        }


def parse_epsilon(text: str) -> Optional[GaussianRational]:
    if text.strip().lower() in ("symbolic", "e", "eps"):
        return None
    try:
        eps = GaussianRational.parse(text)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse epsilon {text!r}: {exc}") from None
    if not eps:
        raise ConfigError("epsilon must be nonzero")
    inv = eps.inverse()
    if not inv.im and inv.re.denominator == 1:
        raise ConfigError(f"epsilon inverse is an integer ({inv.re}); the coefficients have poles there")
    return eps


# ---------------------------------------------------------------------------
# expressions for ``eval``
# ---------------------------------------------------------------------------

class _ExprParser:
    """``expr := operand ('*' operand)*``; operands are ``L(m)``, ``G(k/2)``, ``c``,
    ``[expr, expr]`` and ``(expr)``."""

    def __init__(self, text: str, sys: StructureSystem):
        self.text = text
        self.pos = 0
        self.sys = sys

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Element:
        value = self.product()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def product(self) -> Element:
        value = self.operand()
        while self.peek() == "*":
            self.pos += 1
            value = multiply(self.sys, value, self.operand())
        return value

    def operand(self) -> Element:
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            left = self.product()
            self.expect(",")
            right = self.product()
            self.expect("]")
            return super_commutator(self.sys, left, right)
        if ch == "(":
            self.pos += 1
            value = self.product()
            self.expect(")")
            return value
        if ch == "c":
            self.pos += 1
            return Element.basis(C)
        if ch in ("L", "G"):
            start = self.pos
            self.pos += 1
            self.expect("(")
            end = self.text.find(")", self.pos)
            if end < 0:
                self.error("unclosed index")
            inner = self.text[self.pos:end].strip()
            try:
                value = Fraction(inner)
            except (ValueError, ZeroDivisionError):
                self.error(f"bad index {inner!r}")
            self.pos = end + 1
            if ch == "L":
                if value.denominator != 1:
                    self.pos = start
                    self.error("L takes an integer index")
                return Element.basis(L(int(value)))
            if (2 * value).denominator != 1:
                self.pos = start
                self.error("G takes an index in Z/2")
            r = HalfInt.of(value)
            if r.doubled % 2 != self.sys.sector.value:
                self.pos = start
                self.error(f"G({inner}) is not in the theta={self.sys.sector} sector")
            return Element.basis(G(r))
        self.error("expected L(m), G(r), c, '[' or '('" if ch else "unexpected end of input")


def evaluate(expr: str, sys: StructureSystem) -> Element:
    return _ExprParser(expr, sys).parse()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _emit(cfg: RunConfig, payload: dict, summary: List[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if cfg.format == "json":
        sys.stdout.write(text)
    else:
        for line in summary:
            print(line)


def cmd_verify(cfg: RunConfig) -> int:
    system = cfg.system()
    reports = verify_all(system, Window(cfg.window, cfg.theta))
    summary = [f"{system.describe()}, window {cfg.window}"]
    bad = 0
    for name, rep in reports.items():
        summary.append(f"{name}: checked {rep.checked}, violations {len(rep.entries)}, unchecked {len(rep.unchecked)}")
        bad += len(rep.entries)
    summary.append("clean" if not bad else f"{bad} violations")
    payload = {
        "config": cfg.describe(),
        "reports": {
            name: {"checked": rep.checked, "unchecked": len(rep.unchecked), "violations": rep.to_json()}
            for name, rep in reports.items()
        },
    }
    _emit(cfg, payload, summary)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_derive(cfg: RunConfig) -> int:
    try:
        if cfg.centerless:
            tables, trace = derive_centerless(cfg.theta, cfg.window)
        else:
            tables, trace = derive_central(cfg.theta, cfg.window)
    except DerivationError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAIL
    reference = StructureSystem.centerless(cfg.theta) if cfg.centerless else StructureSystem.central_extension(cfg.theta)
    if cfg.epsilon is not None:
        reference = reference.specialize(cfg.epsilon)
    report = cross_check(tables, reference)
    too_small = bool(tables.undetermined) or tables.radius * 2 < cfg.window
    if cfg.trace:
        with open(cfg.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_jsonl())
    payload = {
        "config": cfg.describe(),
        "tables": {
            fam: {f"({k.a},{k.b})": str(v) for k, v in sorted(
                ((k, v) for k, v in tables.values.items() if k.family == fam), key=lambda kv: kv[0].sort_key())}
            for fam in tables.FAMILIES
        },
        "region_radius": str(tables.radius),
        "undetermined": tables.undetermined,
        "instances_verified": tables.sweep_checked,
        "cross_check": report.to_json(),
        "trace": [e.to_json() for e in trace],
    }
    kind = "centerless (G, H, D)" if cfg.centerless else "central (sigma, psi, rho)"
    summary = [
        f"derived {kind} theta={cfg.theta} window {cfg.window}: {len(tables.values)} entries, "
        f"complete box radius {tables.radius}, {tables.sweep_checked} instances re-verified",
        f"trace: {len(trace)} entries",
        "cross-check: clean" if report.ok else f"cross-check: {len(report.entries)} mismatches",
    ]
    for note in tables.undetermined:
        summary.append(note)
    if too_small:
        summary.append(f"window too small: the chain needs window >= {MIN_WINDOW} to reach radius N/2")
    _emit(cfg, payload, summary)
    return EXIT_FAIL if (not report.ok or too_small) else EXIT_OK


def cmd_table(cfg: RunConfig) -> int:
    text = dump_table(product_table(cfg.system(), Window(cfg.window, cfg.theta)))
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    try:
        value = evaluate(cfg.expr, cfg.system())
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"  {cfg.expr}\n  {' ' * max(exc.pos, 0)}^", file=sys.stderr)
        return EXIT_USAGE
    except (StructureError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.format == "json":
        print(json.dumps(value.to_json()))
    else:
        print(value)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "derive": cmd_derive, "table": cmd_table, "eval": cmd_eval}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsvir", description="Left-symmetric super-Virasoro structures: exact checks and derivations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", default="1/2", choices=["0", "1/2"], help="sector: 0 Ramond, 1/2 Neveu-Schwarz")
    common.add_argument("--window", type=int, default=8, help="index bound N (default 8)")
    common.add_argument("--epsilon", default="symbolic", help='"symbolic" or an exact value such as 3/5 or 2/3*i')
    common.add_argument("--centerless", action="store_true", help="drop the central extension")
    common.add_argument("--out", help="write the full JSON result here")
    common.add_argument("--format", choices=["text", "json"], default="text")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every identity check on the closed-form system")
    d = sub.add_parser("derive", parents=[common], help="re-derive the unique solution from the constraints")
    d.add_argument("--trace", help="write the derivation trace as JSON lines")
    sub.add_parser("table", parents=[common], help="emit the multiplication table")
    e = sub.add_parser("eval", parents=[common], help='evaluate an expression such as "[L(2), L(-2)]"')
    e.add_argument("expr")
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.window < 0:
        raise ConfigError("window must be non-negative")
    return RunConfig(
        command=args.command,
        theta=Sector.parse(args.theta),
        window=args.window,
        epsilon=parse_epsilon(args.epsilon),
        centerless=args.centerless,
        out=args.out,
        format=args.format,
        trace=getattr(args, "trace", None),
        expr=getattr(args, "expr", None),
    )


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    try:
        return COMMANDS[cfg.command](cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
