"""Full invariant reports, corpus runs and the Markov fuzz harness."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
import json
import random

from . import pillowcase
from . import repvar as rv
from .braid import (BraidError, BraidWord, alexander_at, exponent_sum,
                    free_reduce, is_knot, markov_conjugate, markov_destabilize,
                    markov_stabilize, parse_braid)
from .fixedpoints import DegenerateClassError, SolverOptions, casson_lin, find_classes
from .signature import determinant_of, signature_of

SCHEMA = 1
MAX_STRANDS = 5
MAX_LENGTH = 24


def _num(x):
    return float(f"{float(x):.12g}")


def _coord(x):
    # traces and angles: absolute rounding keeps round-off noise out of reports
    return round(float(x), 10) + 0.0


def torus_exponent(b):
    """q when ``b`` freely reduces to sigma_1^q on two strands, else None."""
    w = free_reduce(b)
    if w.strands != 2:
        return None
    return exponent_sum(w)


def floer_groups(b):
    """Closed-form Floer groups when available (sigma_1^q, q >= 1 or q = -3)."""
    q = torus_exponent(b)
    if q is None or q % 2 == 0 or (q < 1 and q not in (-1, -3)):
        return None
    if q == -1:
        return {}
    return pillowcase.torus_floer(q)


def _class_entry(b, c):
    entry = {}
    if b.strands == 2:
        Y = rv.apply_braid(b, c.config)
        p = pillowcase.angles(c.config, Y)
        entry["angles"] = [_coord(p.theta1), _coord(p.theta2)]
    entry["fingerprint"] = [_coord(v) for v in c.fingerprint]
    entry["residual"] = float(f"{c.residual:.3g}")
    entry["min_singular"] = _num(c.min_singular)
    entry["sign"] = c.sign
    return entry


def analyze(b, opts=None):
    """Run every invariant on ``b`` and return the report as an ordered dict.

    Raises BraidError for non-knot closures and DegenerateClassError when a
    fixed class is degenerate.
    """
    opts = opts or SolverOptions()
    if not is_knot(b):
        raise BraidError("closure is not a knot")
    sig = signature_of(b)
    det = determinant_of(b)
    classes = find_classes(b, opts)
    lam = casson_lin(b, classes=classes)
    floer = floer_groups(b)
    chi = None if floer is None else pillowcase.euler_char(floer)
    half = abs(sig) // 2
    return {
        "schema": SCHEMA,
        "braid": b.to_json(),
        "is_knot": True,
        "exponent_sum": exponent_sum(b),
        "alexander_at_minus1": int(alexander_at(b, -1)),
        "signature": sig,
        "determinant": det,
        "classes": [_class_entry(b, c) for c in classes],
        "casson_lin": lam,
        "half_signature_abs": half,
        "consistency": abs(lam) == half,
        "casson_lin_equals_minus_half_signature": 2 * lam == -sig,
        "floer": None if floer is None else {str(d): r for d, r in sorted(floer.items(), reverse=True)},
        "euler_char": chi,
        "murasugi_bound_note": (
            f"|sign(K)|/2 = {half} <= u(K): unknotting number is at least {half}"
        ),
        "solver": {
            "seeds": opts.seeds if opts.seeds is not None else 200 * b.strands,
            "rng_seed": opts.rng_seed,
            "tol": opts.tol,
            "dihedral_seeding": opts.dihedral_seeding,
            "simplify": opts.simplify,
        },
    }


def dumps(report):
    return json.dumps(report, sort_keys=False, separators=(", ", ": "))


# -- corpus -----------------------------------------------------------------

@dataclass
class CorpusEntry:
    name: str
    braid: str
    expected_signature: int
    provenance: str
    expected_class_count: int | None = None

    @classmethod
    def from_json(cls, obj):
        entry = cls(str(obj["name"]), str(obj["braid"]), int(obj["expected_signature"]),
                    str(obj.get("provenance", "derived")), obj.get("expected_class_count"))
        b = parse_braid(entry.braid)
        if not is_knot(b):
            raise BraidError(f"{entry.name}: closure is not a knot")
        return entry


def bundled_corpus_path():
    return resources.files("caslin") / "data" / "corpus.jsonl"


def read_corpus(lines):
    """Parse JSON lines; returns (entries, errors) with errors as (line number, message)."""
    entries, errors = [], []
    for k, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            entries.append(CorpusEntry.from_json(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            errors.append((k, f"{type(exc).__name__}: {exc}"))
    return entries, errors


def _corpus_row(args):
    entry, opts = args
    row = {"name": entry.name, "braid": entry.braid}
    try:
        rep = analyze(parse_braid(entry.braid), opts)
    except DegenerateClassError as exc:
        row.update(error=str(exc), match=False)
        return row
    count_ok = (entry.expected_class_count is None
                or entry.expected_class_count == len(rep["classes"]))
    row.update(
        casson_lin=rep["casson_lin"],
        half_signature_abs=rep["half_signature_abs"],
        signature=rep["signature"],
        expected_signature=entry.expected_signature,
        classes=len(rep["classes"]),
        match=rep["consistency"] and rep["signature"] == entry.expected_signature and count_ok,
    )
    return row


def corpus_run(lines, opts=None, workers=1):
    """Analyze every corpus entry; rows come back in input order."""
    opts = opts or SolverOptions()
    entries, errors = read_corpus(lines)
    jobs = [(e, opts) for e in entries]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_corpus_row, jobs))
    else:
        rows = [_corpus_row(j) for j in jobs]
    return rows, errors


# -- Markov fuzz --------------------------------------------------------------

def random_move(b, rng):
    """One random Markov move; returns (new braid or None, description)."""
    kind = rng.choice(["conjugate", "conjugate", "stabilize", "destabilize"])
    if kind == "conjugate":
        length = rng.randint(1, 6)
        xi = BraidWord(b.strands, tuple(rng.choice([-1, 1]) * rng.randint(1, b.strands - 1)
                                        for _ in range(length)))
        nb = free_reduce(markov_conjugate(b, xi))
        desc = f"conjugate by [{' '.join(map(str, xi.letters))}]"
    elif kind == "stabilize":
        if b.strands >= MAX_STRANDS:
            return None, "stabilize skipped: strand cap"
        sign = rng.choice([-1, 1])
        nb = markov_stabilize(b, sign)
        desc = f"stabilize {'+' if sign > 0 else '-'}"
    else:
        try:
            nb = markov_destabilize(b)
        except BraidError:
            return None, "destabilize skipped: not destabilizable"
        desc = "destabilize"
    if len(nb) > MAX_LENGTH:
        return None, f"{desc} skipped: length cap"
    return nb, desc


def markov_fuzz(b, moves, seed=0, opts=None):
    """Apply seeded random Markov moves and track casson_lin, signature, determinant."""
    opts = opts or SolverOptions()
    base = analyze(b, opts)
    ref = {k: base[k] for k in ("casson_lin", "signature", "determinant")}
    rng = random.Random(seed)
    steps = []
    drift = False
    cur = b
    for _ in range(moves):
        nb, desc = random_move(cur, rng)
        if nb is None:
            steps.append({"move": desc})
            continue
        cur = nb
        vals = {
            "casson_lin": casson_lin(cur, opts),
            "signature": signature_of(cur),
            "determinant": determinant_of(cur),
        }
        moved = {k: v for k, v in vals.items() if v != ref[k]}
        drift |= bool(moved)
        steps.append({"move": desc, "braid": str(cur), **vals, "drift": sorted(moved)})
    return {"schema": SCHEMA, "base": base, "moves": steps, "drift": drift}
