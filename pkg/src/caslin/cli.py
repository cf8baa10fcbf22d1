"""Command-line front end: ``caslin analyze|corpus|markov-fuzz|floer|fixed-points``."""

import argparse
import json
import sys

from . import pillowcase
from .braid import BraidError, parse_braid
from .fixedpoints import DegenerateClassError, SolverOptions, find_classes
from .pipeline import analyze, bundled_corpus_path, corpus_run, dumps, markov_fuzz

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _options(args):
    return SolverOptions(seeds=args.seeds, rng_seed=args.rng_seed, tol=args.tol,
                         dihedral_seeding=args.dihedral_seeding, simplify=args.simplify)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seeds", type=int, default=None, help="quasi-random seeds (default 200*n)")
    common.add_argument("--tol", type=float, default=1e-10, help="fixed-point residual tolerance")
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--dihedral-seeding", type=_on_off, default=True, metavar="on|off")
    common.add_argument("--simplify", type=_on_off, default=True, metavar="on|off",
                        help="search on a destabilized word and lift the solutions back")

    p = argparse.ArgumentParser(prog="caslin", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="all invariants of one braid closure")
    a.add_argument("braid", help="'<n>: e1 e2 ...'")
    c = sub.add_parser("corpus", parents=[common], help="run a JSON-lines corpus")
    c.add_argument("file", nargs="?", help="corpus file (default: bundled corpus)")
    c.add_argument("--workers", type=int, default=1)
    m = sub.add_parser("markov-fuzz", parents=[common], help="random Markov moves")
    m.add_argument("braid")
    m.add_argument("--moves", type=int, default=50)
    m.add_argument("--seed", type=int, default=7, help="move sequence seed")
    f = sub.add_parser("floer", parents=[common], help="Floer groups of sigma_1^q")
    f.add_argument("q", type=int)
    x = sub.add_parser("fixed-points", parents=[common], help="irreducible fixed classes")
    x.add_argument("braid")
    return p


def _print_report(rep):
    print(f"braid            {rep['braid']['strands']}: {' '.join(map(str, rep['braid']['word']))}")
    print(f"exponent sum     {rep['exponent_sum']}")
    print(f"|Delta(-1)|      {rep['alexander_at_minus1']}")
    print(f"signature        {rep['signature']}")
    print(f"determinant      {rep['determinant']}")
    print(f"classes          {len(rep['classes'])}")
    for c in rep["classes"]:
        where = f" angles={c['angles']}" if "angles" in c else ""
        print(f"  sign {c['sign']:+d}  min_sv {c['min_singular']:.4g}  residual {c['residual']:.1e}{where}")
    print(f"casson_lin       {rep['casson_lin']}")
    print(f"|signature|/2    {rep['half_signature_abs']}")
    print(f"consistency      {rep['consistency']}")
    if rep["floer"] is not None:
        print(f"floer            {rep['floer']}  (euler char {rep['euler_char']})")
    print(rep["murasugi_bound_note"])


def cmd_analyze(args):
    b = parse_braid(args.braid)
    rep = analyze(b, _options(args))
    print(dumps(rep)) if args.json else _print_report(rep)
    return EXIT_OK if rep["consistency"] else EXIT_MISMATCH


def cmd_corpus(args):
    if args.file:
        with open(args.file) as fh:
            lines = fh.readlines()
    else:
        lines = bundled_corpus_path().read_text().splitlines()
    rows, errors = corpus_run(lines, _options(args), args.workers)
    if args.json:
        print(json.dumps({"rows": rows, "errors": [{"line": k, "error": e} for k, e in errors]}))
    else:
        print(f"{'name':<20} {'lambda_CL':>9} {'|sign|/2':>9}  match")
        for r in rows:
            if "error" in r:
                print(f"{r['name']:<20} {'-':>9} {'-':>9}  ERROR {r['error']}")
            else:
                print(f"{r['name']:<20} {r['casson_lin']:>9d} {r['half_signature_abs']:>9d}  "
                      f"{'yes' if r['match'] else 'NO'}")
        for k, e in errors:
            print(f"line {k}: skipped ({e})", file=sys.stderr)
    if errors:
        return EXIT_INPUT
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_MISMATCH


def cmd_fuzz(args):
    if args.moves < 0:
        raise BraidError("moves must be nonnegative")
    b = parse_braid(args.braid)
    rep = markov_fuzz(b, args.moves, args.seed, _options(args))
    if args.json:
        print(dumps(rep))
    else:
        base = rep["base"]
        print(f"start {args.braid}: casson_lin {base['casson_lin']}, signature {base['signature']}, "
              f"determinant {base['determinant']}")
        for k, s in enumerate(rep["moves"], 1):
            if "braid" not in s:
                print(f"{k:3d}. {s['move']}")
            else:
                flag = f"  DRIFT {s['drift']}" if s["drift"] else ""
                print(f"{k:3d}. {s['move']:<32} -> {s['braid']}  "
                      f"[{s['casson_lin']}, {s['signature']}, {s['determinant']}]{flag}")
        print("drift" if rep["drift"] else "no drift")
    return EXIT_MISMATCH if rep["drift"] else EXIT_OK


def cmd_floer(args):
    groups = pillowcase.torus_floer(args.q)
    chi = pillowcase.euler_char(groups)
    if args.json:
        print(json.dumps({"q": args.q, "floer": {str(d): r for d, r in sorted(groups.items(), reverse=True)},
                          "euler_char": chi}))
    else:
        print(f"HF(sigma_1^{args.q}):")
        for d, r in sorted(groups.items(), reverse=True):
            print(f"  degree {d:+d}: Z^{r}")
        if not groups:
            print("  0")
        print(f"euler characteristic {chi}")
    return EXIT_OK


def cmd_fixed_points(args):
    b = parse_braid(args.braid)
    classes = find_classes(b, _options(args))
    out = [{"config": [[float(f"{v:.12g}") for v in p] for p in c.config],
            "sign": c.sign, "min_singular": float(f"{c.min_singular:.12g}"),
            "residual": float(f"{c.residual:.3g}")} for c in classes]
    if args.json:
        print(json.dumps(out))
    else:
        for k, c in enumerate(out, 1):
            print(f"{k}. sign {c['sign']:+d}  min_sv {c['min_singular']:.4g}  config {c['config']}")
        if not out:
            print("no irreducible fixed classes")
    return EXIT_DEGENERATE if any(c.degenerate for c in classes) else EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "corpus": cmd_corpus,
    "markov-fuzz": cmd_fuzz,
    "floer": cmd_floer,
    "fixed-points": cmd_fixed_points,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (BraidError, pillowcase.PillowcaseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
