"""Command line: classify, solve, gadget, check."""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .classifier import NPCOMPLETE, OUT_OF_SCOPE, POLYNOMIAL, find_chain
from .gadgets import (
    build_chain_nae_gadget, build_f2_nae_gadget, build_general_d_gadget, build_quadruple_gadget,
    build_reflexive_m_gadget, hard_cycle_target, NaeFormula, QuadFormula, parse_formula,
)
from .oracle import DEFAULT_CORE_BOUND, s_core, switching_equivalent
from .polymorph import DEFAULT_MAJORITY_BOUND, SEMI, find_conservative_majority
from .sgraph import (
    InputError, Instance, build_switching_graph, format_homomorphism, parse_graph, parse_lists,
    serialize_graph, serialize_lists,
)
from .solver import DEFAULT_ORACLE_BOUND, classify_cached, solve

EXIT_CODES = {POLYNOMIAL: 0, NPCOMPLETE: 1, OUT_OF_SCOPE: 3}
GADGETS = ("nae-chain", "reflexive-m", "general-d", "quad", "nae-f2")


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    text = _read(path)
    try:
        return parse_graph(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _fmt_detail(value) -> str:
    if hasattr(value, "name"):
        return value.name.lower()
    if isinstance(value, (list, tuple)):
        return " ".join(str(x) for x in value)
    if isinstance(value, (set, frozenset)):
        return " ".join(sorted(str(x) for x in value))
    if isinstance(value, dict):
        return " ".join(f"{k}={v}" for k, v in value.items())
    return str(value)


def cmd_classify(args) -> int:
    H = _load_graph(args.target)
    c = classify_cached(H, args.bound or DEFAULT_MAJORITY_BOUND)
    print(f"verdict: {c.verdict}")
    if c.structure is not None:
        st = c.structure
        print(f"structure: {st.variant}")
        for key in ("case", "kind", "spine", "path", "d", "preferredColour", "colour", "l"):
            if key in st.details:
                print(f"  {key}: {_fmt_detail(st.details[key])}")
        print(f"  switch: {_fmt_detail(st.switch) or '-'}")
    if c.witness is not None:
        w = c.witness
        if w.kind == "Chain":
            print("witness: chain")
            print(f"  {w.detail}")
        else:
            print(f"witness: {w}")
    if c.reason:
        print(f"reason: {c.reason}")
    return EXIT_CODES[c.verdict]


def cmd_solve(args) -> int:
    H = _load_graph(args.target)
    G = _load_graph(args.input)
    lists = parse_lists(_read(args.lists), G, H) if args.lists else {}
    res = solve(Instance(G, H, lists), args.method,
                oracle_bound=args.bound or DEFAULT_ORACLE_BOUND,
                majority_bound=args.bound or DEFAULT_MAJORITY_BOUND)
    print(f"method: {res.method}", file=sys.stderr)
    sys.stdout.write(format_homomorphism(G, res.hom))
    return 0 if res.hom is not None else 1


def _build_gadget(kind: str, formula, target: Optional[str]) -> Instance:
    if kind == "quad":
        if not isinstance(formula, QuadFormula):
            raise InputError("quad gadgets need 'quad a b c d' lines")
        H = _load_graph(target) if target else hard_cycle_target(5)
        return build_quadruple_gadget(H, formula)
    if not isinstance(formula, NaeFormula):
        raise InputError(f"{kind} gadgets need 'nae x y z' lines")
    if kind == "nae-chain":
        if not target:
            raise InputError("nae-chain needs --target")
        H = _load_graph(target)
        chain = find_chain(H)
        if chain is None:
            raise InputError(f"{target}: no chain found in the target")
        return build_chain_nae_gadget(H, chain, formula)
    if kind == "reflexive-m":
        return build_reflexive_m_gadget(formula)
    if kind == "general-d":
        return build_general_d_gadget(formula)
    return build_f2_nae_gadget(formula)


def cmd_gadget(args) -> int:
    formula = parse_formula(_read(args.formula))
    inst = _build_gadget(args.kind, formula, args.target)
    os.makedirs(args.out, exist_ok=True)
    files = {"target.sg": serialize_graph(inst.H), "input.sg": serialize_graph(inst.G),
             "lists.txt": serialize_lists(inst.lists)}
    for name, text in files.items():
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(text)
    print(f"wrote {', '.join(files)} to {args.out} ({len(inst.G)} input vertices)")
    return 0


def cmd_check(args) -> int:
    H = _load_graph(args.target)
    what = args.what
    if what == "score":
        rep = s_core(H, args.bound or DEFAULT_CORE_BOUND)
        print(f"core: {' '.join(rep.coreVertices)}")
        print(f"edges: {rep.edgeCount}")
    elif what == "chain":
        chain = find_chain(H)
        print(chain if chain is not None else "none")
    elif what == "majority":
        t = find_conservative_majority(build_switching_graph(H), SEMI, args.bound or DEFAULT_MAJORITY_BOUND)
        print("majority: found" if t is not None else "majority: none")
    else:
        if not args.other:
            raise InputError("equiv needs a second target file")
        B = _load_graph(args.other)
        same = set(H.vertices) == set(B.vertices) and set(H.edges) == set(B.edges)
        S = switching_equivalent(H, B) if same else None
        if S is None:
            print("not equivalent")
        else:
            print(f"switch: {' '.join(v for v in H.vertices if v in S) or '-'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedhom", description="List homomorphisms of signed graphs.")
    p.add_argument("--bound", type=int, default=None,
                   help="size cap for the oracle, majority search and s-core search")
    p.add_argument("--seed", type=int, default=None, help="seed for randomised runs (currently unused)")
    p.add_argument("--format", choices=["sg"], default="sg", help="file format (only sg)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="polynomial / NP-complete verdict for a target")
    c.add_argument("target")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="find a list homomorphism")
    s.add_argument("target")
    s.add_argument("input")
    s.add_argument("lists", nargs="?")
    s.add_argument("--method", choices=["auto", "poly", "oracle", "majority"], default="auto")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gadget", help="write a reduction instance")
    g.add_argument("kind", choices=GADGETS)
    g.add_argument("formula")
    g.add_argument("--target")
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gadget)

    k = sub.add_parser("check", help="s-core, chain, majority or switching equivalence")
    k.add_argument("target")
    k.add_argument("other", nargs="?")
    k.add_argument("--what", choices=["score", "chain", "majority", "equiv"], required=True)
    k.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
