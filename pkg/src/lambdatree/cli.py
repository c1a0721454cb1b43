"""Command-line driver.

    lambdatree verify --example heisenberg --radius 3
    lambdatree classify --example nesting_map --param base=2
    lambdatree freeproduct --example zz --radius 4
    lambdatree examples list
    lambdatree examples build bs --param a=3

Exit codes: 0 when every check passes, 1 when a violation is found, 2 on bad
input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import affine, combinators, examples, lyndon
from .oag import IntLex, Localized, aut_from_json, descriptor_from_json, elem_from_json
from .words import EMPTY, enumerate_ball, fmt, parse

log = logging.getLogger("lambdatree")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    example: str | None = None
    spec: str | None = None
    params: dict = field(default_factory=dict)
    radius: int = 3
    format: str = "json"
    jobs: int = 1
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.radius < 1:
            raise InputError("--radius must be at least 1")
        if self.format not in ("json", "tsv"):
            raise InputError("--format must be json or tsv")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


# ---------------------------------------------------------------------------
# building length functions and maps


def length_from_spec(obj) -> lyndon.LengthFunction:
    kind = obj.get("type", "action")
    if kind == "action":
        L = lyndon.ActionLength(lyndon.context_from_json(obj))
        if obj.get("overrides"):
            over = {parse(w): elem_from_json(L.desc, v) for w, v in obj["overrides"].items()}
            L = lyndon.PerturbedLength(L, over)
        return L
    if kind == "table":
        desc = descriptor_from_json(obj["group"])
        alphas = {s: aut_from_json(desc, a) for s, a in obj["alphas"].items()}
        table = {parse(w): elem_from_json(desc, v) for w, v in obj["lengths"].items()}
        return lyndon.TableLength(desc, obj["alphabet"], alphas, table)
    if kind == "free_shift":
        return examples.free_shift(int(obj.get("n_range", 3)))
    if kind == "free_product":
        return combinators.FreeProductLength([length_from_spec(f) for f in obj["factors"]])
    raise InputError(f"unknown spec type {kind!r}")


def length_from_example(name: str, params: dict) -> lyndon.LengthFunction:
    obj = examples.build(name, **params)
    return obj if isinstance(obj, lyndon.LengthFunction) else lyndon.ActionLength(obj)


def _length(cfg: RunConfig) -> lyndon.LengthFunction:
    if cfg.spec:
        return length_from_spec(_load_json(cfg.spec))
    if cfg.example:
        return length_from_example(cfg.example, cfg.params)
    raise InputError("give --example NAME or --spec FILE")


MAP_EXAMPLES = {
    "nesting_map": (lambda base="2": examples.nesting_map(Localized(int(base)))),
    "third_map": (lambda base="3": examples.third_map(Localized(int(base)))),
    "non_subtree_map": (lambda: examples.non_subtree_map()),
    "mixed_star": (lambda a="1/2": examples.mixed_star(Fraction(a))[1]),
    "identity": (lambda rank="1": affine.identity(examples.line_space(IntLex(int(rank))))),
}


# ---------------------------------------------------------------------------
# output


def _emit(cfg: RunConfig, payload, rows=None, header=None) -> None:
    if cfg.format == "tsv" and rows is not None:
        lines = ["\t".join(header)] + ["\t".join(str(c) for c in r) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pmap(cfg: RunConfig, fn, items):
    if cfg.jobs == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: RunConfig) -> int:
    L = _length(cfg)
    words = enumerate_ball(L.alphabet, cfg.radius)
    axioms = lyndon.verify_axioms(L, words)
    props = lyndon.verify_length_props(L, words)
    ok = axioms.ok and props.ok
    payload = {
        "source": cfg.example or cfg.spec,
        "radius": cfg.radius,
        "words": len(words),
        "provenance": L.provenance,
        "status": "pass" if ok else "fail",
        "axioms": axioms.to_json(),
        "length_props": props.to_json(),
    }
    rows = None
    if cfg.format == "tsv":
        ball = lyndon.make_ball(L, words)
        ctx = getattr(L, "ctx", None)

        def row(i):
            x = ball.elems[i]
            integral = all(lyndon.c_elem(L, x, y).in_lambda for y in ball.elems)
            kind = affine.classify(x).kind if ctx is not None and not isinstance(L, lyndon.PerturbedLength) else "-"
            return (ball.label(i), L.length_elem(x), lyndon.a_elem(L, x), lyndon.b_elem(L, x), integral, kind)

        rows = _pmap(cfg, row, range(len(ball.elems)))
    _emit(cfg, payload, rows, ("word", "L", "a", "b", "c_integral", "classification"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(cfg: RunConfig) -> int:
    if cfg.spec:
        obj = _load_json(cfg.spec)
        if obj.get("type", "map") == "map" or "translation" in obj or "perm" in obj:
            targets = [("map", affine.map_from_json(obj))]
        else:
            ctx = lyndon.context_from_json(obj)
            targets = _ball_maps(ctx, cfg.radius)
    elif cfg.example in MAP_EXAMPLES:
        try:
            targets = [(cfg.example, MAP_EXAMPLES[cfg.example](**cfg.params))]
        except TypeError:
            raise InputError(f"bad parameters for {cfg.example}: {cfg.params}") from None
    elif cfg.example:
        ctx = examples.build(cfg.example, **cfg.params)
        if not isinstance(ctx, lyndon.ActionContext):
            raise InputError(f"{cfg.example} is a length function, not an action")
        targets = _ball_maps(ctx, cfg.radius)
    else:
        raise InputError("give --example NAME or --spec FILE")
    results = _pmap(cfg, lambda t: (t[0], affine.classify(t[1])), targets)
    payload = {"source": cfg.example or cfg.spec,
               "results": [{"word": w, **c.to_json()} for w, c in results]}
    rows = [(w, c.kind) for w, c in results]
    _emit(cfg, payload, rows, ("word", "classification"))
    return EXIT_OK


def _ball_maps(ctx: lyndon.ActionContext, radius: int):
    seen, out = set(), []
    for w in enumerate_ball(ctx.alphabet, radius):
        g = ctx.realize(w)
        if w == EMPTY or g.is_identity() or g in seen:
            continue
        seen.add(g)
        out.append((fmt(w), g))
    return out


FP_EXAMPLES = {"zz": combinators.z_star_z, "heisenberg_z": combinators.heisenberg_star_z}


def cmd_freeproduct(cfg: RunConfig, degenerate: bool = False, syllables: int = 0) -> int:
    if cfg.spec:
        obj = _load_json(cfg.spec)
        ctx = length_from_spec(dict(obj, type="free_product"))
    elif cfg.example:
        try:
            ctx = FP_EXAMPLES[cfg.example]()
        except KeyError:
            raise InputError(f"unknown free product {cfg.example!r}; choose from {', '.join(FP_EXAMPLES)}") from None
    else:
        raise InputError("give --example NAME or --spec FILE")
    if degenerate:
        ctx = combinators.with_degenerate_factor(ctx)
    report = combinators.certify_free(ctx, cfg.radius)
    ok = report.ok
    payload = {"source": cfg.example or cfg.spec, "summary": report.summary(), **report.to_json()}
    if syllables:
        ws = combinators.fp_syllable_ball(ctx, {i: 2 for i in range(1, len(ctx.factors) + 1)}, syllables)
        ax = lyndon.verify_axioms(ctx, ws)
        payload["axioms"] = ax.to_json()
        ok = ok and ax.ok
    rows = [(v.word, "ok" if v.ok else "fail", v.reason) for v in report.verdicts]
    _emit(cfg, payload, rows, ("word", "verdict", "reason"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_examples(cfg: RunConfig, action: str, name: str | None) -> int:
    if action == "list":
        items = [{"name": s.name, "params": {k: str(v) for k, v in s.params.items()}, "summary": s.summary}
                 for s in examples.REGISTRY.values()]
        items += [{"name": n, "params": {}, "summary": "single map (classify only)"} for n in MAP_EXAMPLES]
        rows = [(i["name"], i["summary"]) for i in items]
        _emit(cfg, items, rows, ("name", "summary"))
        return EXIT_OK
    if not name:
        raise InputError("examples build needs a NAME")
    if name in MAP_EXAMPLES:
        obj = MAP_EXAMPLES[name](**cfg.params)
    else:
        obj = examples.build(name, **cfg.params)
    _emit(cfg, obj.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, radius: int) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--example", help="built-in example name")
    src.add_argument("--spec", help="JSON spec file")
    p.add_argument("--param", action="append", default=[], metavar="K=V", help="example parameter")
    p.add_argument("--radius", type=int, default=radius)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled suites")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambdatree", description="Affine actions on Lambda-trees.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("verify", help="length-function axioms and properties on a word ball"), 3)
    _common(sub.add_parser("classify", help="classify a map or every map in a word ball"), 3)
    fp = sub.add_parser("freeproduct", help="free-product freeness certificate")
    _common(fp, 4)
    fp.add_argument("--degenerate", action="store_true", help="append a factor of length zero")
    fp.add_argument("--syllables", type=int, default=0, help="also run the axiom suite at this many syllables")
    ex = sub.add_parser("examples", help="list or build examples")
    ex.add_argument("action", choices=("list", "build"))
    ex.add_argument("name", nargs="?")
    ex.add_argument("--param", action="append", default=[], metavar="K=V")
    ex.add_argument("--format", choices=("json", "tsv"), default="json")
    ex.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig(
            command=args.command,
            example=getattr(args, "example", None),
            spec=getattr(args, "spec", None),
            params=_parse_params(args.param),
            radius=getattr(args, "radius", 3),
            format=args.format,
            jobs=getattr(args, "jobs", 1),
            seed=getattr(args, "seed", 0),
            out=args.out,
        )
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "freeproduct":
            return cmd_freeproduct(cfg, args.degenerate, args.syllables)
        return cmd_examples(cfg, args.action, args.name)
    except (InputError, ValueError, KeyError, TypeError) as e:
        if args.verbose:
            log.exception("input error")
        msg = e.args[0] if e.args else type(e).__name__
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
