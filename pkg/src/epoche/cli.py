"""Command-line front end.

Exit codes: 0 success, 1 a verified property failed, 2 unparsable input,
3 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from . import coeffs, quantize, verify
from .algebra import Context, EnvelopeElement, ShadowElement, envelope_mul, shadow_mul
from .polynomials import CoefficientSyntaxError, Specialization
from .textio import (ElementSyntaxError, dumps, element_to_json, format_coeff, format_element,
                     parse_element)
from .trees import (TreeError, enumerate_positive, format_shape, format_tree, ltrees, parse_tree, rank,
                    shapes, to_dot, unrank)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CONFIG = 0, 1, 2, 3

COMMANDS = ("norm", "mul", "star", "quantize", "dequantize", "bracket", "rank", "unrank", "enum-trees",
            "coeff", "verify")


class ConfigError(ValueError):
    pass


@dataclass
class Settings:
    """Resolved run settings: defaults, then config file, then command-line flags."""

    d: int = 1
    N: int = 3
    q: str = "symbolic"
    seed: int = 0
    trials: int = 200
    format: str = "text"
    spec: Optional[Specialization] = field(default=None, repr=False)

    KEYS = ("d", "N", "q", "seed", "trials", "format")

    def update(self, values: dict, source: str) -> None:
        for k, v in values.items():
            if k not in self.KEYS:
                raise ConfigError(f"{source}: unknown setting {k!r}")
            if v is not None:
                setattr(self, k, v)

    def validate(self) -> None:
        for k in ("d", "N", "seed", "trials"):
            v = getattr(self, k)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"{k} must be an integer, got {v!r}")
        if self.d < 1 or self.N < 1:
            raise ConfigError("d and N must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.format not in ("text", "json"):
            raise ConfigError(f"format must be text or json, got {self.format!r}")
        self.spec = parse_q(self.q, self.d)

    def context(self) -> Context:
        return Context(self.d, self.N, self.spec)

    def run_config(self) -> verify.RunConfig:
        return verify.RunConfig(d=self.d, N=self.N, spec=self.spec, q_label=self.q, seed=self.seed,
                                trials=self.trials)


_Q_ITEM = re.compile(r"^\s*q\[(\d+),(\d+)\]\s*=\s*([0-9/]+)\s*$")


def parse_q(text: str, d: int) -> Optional[Specialization]:
    """``symbolic``, ``all-ones`` or a full list ``q[i,j]=v, ...`` covering every pair of ``[2d]``."""
    if not isinstance(text, str):
        raise ConfigError(f"q must be a string, got {text!r}")
    if text == "symbolic":
        return None
    if text == "all-ones":
        return Specialization.all_ones()
    values = {}
    for item in re.split(r",(?![^\[]*\])", text):
        m = _Q_ITEM.match(item)
        if m is None:
            raise ConfigError(f"bad specialization entry {item.strip()!r}; expected q[i,j]=v")
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i < j <= 2 * d):
            raise ConfigError(f"q[{i},{j}] needs 1 <= i < j <= {2 * d}")
        try:
            v = Fraction(m.group(3))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"bad value in {item.strip()!r}") from None
        if v <= 0:
            raise ConfigError(f"q[{i},{j}] must be positive")
        values[(i, j)] = v
    missing = [f"q[{i},{j}]" for j in range(2, 2 * d + 1) for i in range(1, j) if (i, j) not in values]
    if missing:
        raise ConfigError(f"missing values for {', '.join(missing)}")
    return Specialization(values)


# -- argument parsing ----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    # None marks "not given" so the config file can fill it in
    p.add_argument("--d", type=int, default=None, help="alphabet is [2d] (default 1)")
    p.add_argument("--N", type=int, default=None, help="truncation level (default 3)")
    p.add_argument("--q", default=None, help="symbolic | all-ones | 'q[1,2]=2,...' (default symbolic)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--format", default=None, help="text | json")
    p.add_argument("--config", default=None, help="JSON file with any of d, N, q, seed, trials, format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epoche", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="normal-order an envelope expression")
    p.add_argument("expr")
    p = sub.add_parser("mul", help="product of two elements")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--algebra", choices=("envelope", "shadow"), default="envelope")
    for name, text in (("star", "star product"), ("bracket", "bracket")):
        p = sub.add_parser(name, help=f"{text} of two shadow elements")
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--map", choices=("normal", "weyl"), default="weyl")
        if name == "bracket":
            p.add_argument("--antisym", action="store_true", help="q-antisymmetrized Weyl bracket")
    p = sub.add_parser("quantize", help="shadow element to envelope element")
    p.add_argument("expr")
    p.add_argument("--map", choices=("normal", "weyl"), default="weyl")
    p = sub.add_parser("dequantize", help="envelope element to shadow element")
    p.add_argument("expr")
    p.add_argument("--map", choices=("normal", "weyl"), default="weyl")
    p = sub.add_parser("rank", help="rank of a labelled tree")
    p.add_argument("tree")
    p.add_argument("--dot", action="store_true")
    p = sub.add_parser("unrank", help="labelled tree of a given rank")
    p.add_argument("k", type=int)
    p.add_argument("--dot", action="store_true")
    p = sub.add_parser("enum-trees", help="list positive trees up to N leaves, or all trees of a size")
    p.add_argument("--leaves", type=int, default=None, help="list every labelled tree with this many leaves")
    p.add_argument("--shapes", action="store_true", help="with --leaves: unlabelled shapes only")
    p.add_argument("--dot", action="store_true")
    p = sub.add_parser("coeff", help="q-Weyl coefficients C(s) of a tuple of trees")
    p.add_argument("trees", nargs="+")
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=" | ".join(verify.SUITES))

    for p in sub.choices.values():
        _common(p)
    return parser


def resolve(args: argparse.Namespace) -> Settings:
    s = Settings()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        s.update(data, args.config)
    s.update({k: getattr(args, k) for k in Settings.KEYS}, "command line")
    s.validate()
    return s


# -- commands ------------------------------------------------------------------------------


def _element_result(s: Settings, x) -> dict:
    return {"algebra": "envelope" if isinstance(x, EnvelopeElement) else "shadow",
            "text": format_element(x), "terms": element_to_json(x)}


def _header(args, s: Settings) -> dict:
    return {"command": args.command, "d": s.d, "N": s.N, "q": s.q}


def cmd_elements(args, s: Settings) -> dict:
    ctx = s.context()
    c = args.command
    if c == "norm":
        return _element_result(s, parse_element(args.expr, ctx, EnvelopeElement))
    if c == "mul":
        kind = EnvelopeElement if args.algebra == "envelope" else ShadowElement
        a, b = parse_element(args.a, ctx, kind), parse_element(args.b, ctx, kind)
        return _element_result(s, envelope_mul(a, b) if kind is EnvelopeElement else shadow_mul(a, b))
    if c == "star":
        a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
        op = quantize.star_weyl if args.map == "weyl" else quantize.star_normal
        return _element_result(s, op(a, b))
    if c == "bracket":
        a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
        if args.map == "normal":
            op = quantize.bracket_normal
        else:
            op = quantize.bracket_weyl_antisym if args.antisym else quantize.bracket_weyl
        return _element_result(s, op(a, b))
    if c == "quantize":
        a = parse_element(args.expr, ctx)
        return _element_result(s, quantize.weyl_W(a) if args.map == "weyl" else quantize.normal_Q(a))
    if c == "dequantize":
        x = parse_element(args.expr, ctx, EnvelopeElement)
        return _element_result(s, quantize.weyl_W_inverse(x) if args.map == "weyl"
                               else quantize.normal_Q_inverse(x))
    raise AssertionError(c)


def _tree_entry(t, d: int, dot: bool) -> dict:
    out = {"tree": format_tree(t), "rank": rank(t, d)}
    if dot:
        out["dot"] = to_dot(t)
    return out


def cmd_trees(args, s: Settings) -> dict:
    c = args.command
    if c == "rank":
        t = parse_tree(args.tree)
        return _tree_entry(t, s.d, args.dot)
    if c == "unrank":
        if args.k < 1:
            raise ConfigError("rank must be >= 1")
        return _tree_entry(unrank(args.k, s.d), s.d, args.dot)
    if args.leaves is not None:
        if args.leaves < 1:
            raise ConfigError("--leaves must be >= 1")
        if args.shapes:
            return {"shapes": [format_shape(x) for x in shapes(args.leaves)]}
        return {"trees": [_tree_entry(t, s.d, args.dot) for t in ltrees(s.d, args.leaves)]}
    return {"trees": [_tree_entry(t, s.d, args.dot) for t in enumerate_positive(s.d, s.N)]}


def cmd_coeff(args, s: Settings) -> dict:
    ctx = s.context()
    gs = [parse_tree(t) for t in args.trees]
    for g in gs:
        ctx.check_tree(g)
    table = coeffs.weyl_coeffs(gs)
    return {"trees": [format_tree(g) for g in gs],
            "coefficients": [{"permutation": [i + 1 for i in perm], "value": format_coeff(ctx.coeff(c))}
                             for perm, c in sorted(table.items())]}


def _print_text(args, result: dict, out) -> None:
    if "text" in result:
        print(result["text"], file=out)
    elif "coefficients" in result:
        for row in result["coefficients"]:
            print(f"C({' '.join(map(str, row['permutation']))}) = {row['value']}", file=out)
    elif "shapes" in result:
        print("\n".join(result["shapes"]), file=out)
    elif "trees" in result:
        for e in result["trees"]:
            print(f"{e['rank']}\t{e['tree']}", file=out)
            if "dot" in e:
                print(e["dot"], file=out)
    else:
        print(f"{result['rank']}\t{result['tree']}", file=out)
        if "dot" in result:
            print(result["dot"], file=out)


def _print_report(rep: dict, out) -> None:
    h = rep["header"]
    print(f"suite {h['suite']}  d={h['d']} N={h['N']} q={h['q']} seed={h['seed']} trials={h['trials']}",
          file=out)
    for p in rep["properties"]:
        tag = "PASS" if p["pass"] else "FAIL"
        if "informational" in p:
            tag += " (info)"
        print(f"  {tag:<11} {p['property']}  [n={p['n']}, {p['instance']} instances, {p['mode']}]", file=out)
        for note in p.get("notes", []):
            print(f"              note: {note}", file=out)
        if "counterexample" in p:
            print(f"              counterexample: {json.dumps(p['counterexample'], sort_keys=True)}", file=out)
    print("PASS" if rep["pass"] else "FAIL", file=out)


def cmd_verify(args, s: Settings, out) -> int:
    if args.suite not in verify.SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(verify.SUITES)}")
    cfg = s.run_config()
    rep = verify.report(args.suite, cfg, verify.run_suite(args.suite, cfg))
    if s.format == "json":
        print(dumps(rep), file=out)
    else:
        _print_report(rep, out)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        s = resolve(args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.command == "verify":
                return cmd_verify(args, s, out)
            if args.command in ("rank", "unrank", "enum-trees"):
                result = cmd_trees(args, s)
            elif args.command == "coeff":
                result = cmd_coeff(args, s)
            else:
                result = cmd_elements(args, s)
        for w in caught:
            print(f"warning: {w.message}", file=err)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    except (ElementSyntaxError, CoefficientSyntaxError, TreeError) as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    if s.format == "json":
        print(dumps({"header": _header(args, s), "result": result}), file=out)
    else:
        _print_text(args, result, out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
