"""Command-line entry point: ``sidonkit <subcommand> [options]``.

Exit status is 0 on success, 2 when a checked property is false (a family is
not Sidon, not B_h[g], or an equality is left unclassified) and 1 on usage,
input or cap errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager

from . import __version__
from .formats import (FamilyFormatError, format_family, read_family, write_collisions,
                      write_family)
from .verifier import CapExceeded, Family, find_collisions, is_bhg, upper_bound_fk

EXIT_OK, EXIT_ERROR, EXIT_FALSE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        out = []
        for part in text.split(","):
            if ":" in part:
                lo, hi = part.split(":")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        return out
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 4,8 or 4:12, got {text!r}")


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SIDONKIT_THREADS", "1")))
    except ValueError:
        return 1


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit_json(obj, out):
    with _output(out) as fh:
        fh.write(json.dumps(obj) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(a):
    from . import constructions as C

    if a.kind == "k2":
        f = C.construct_k2(a.n)
        extra = ""
    elif a.kind == "k3":
        f = C.construct_k3(a.n)
        extra = " excluded=dilations of {0,1,2},{0,1,3}"
    elif a.kind == "k4":
        base = C.golomb_base(a.k) if a.base == "golomb" else C.erdos_turan_sidon(a.k)
        f = C.construct_k4(a.n, a.k, base)
        extra = f" base={{{','.join(map(str, base.elements))}}} p={base.prime_p}"
    else:
        if a.g is None:
            raise UsageError("construct --kind b2g needs --g")
        f = C.construct_b2g(a.n, a.k, a.g)
        a_set = C.base_b2g_set(a.n // 2, a.g // 2)
        extra = f" g={a.g} A={{{','.join(map(str, a_set))}}}"
    head = f"sidonkit {__version__} construct kind={a.kind} n={a.n} k={f.k}{extra} size={len(f)}"
    with _output(a.out) as fh:
        fh.write(format_family(f, [head]))
    return EXIT_OK


def cmd_verify(a):
    f = read_family(a.family)
    records = find_collisions(f)
    if a.cap is not None:
        records = records[:a.cap]
    with _output(a.out) as fh:
        write_collisions(records, fh)
    return EXIT_OK if not records else EXIT_FALSE


def cmd_bhg_verify(a):
    f = read_family(a.family)
    ok = is_bhg(f, a.h, a.g)
    _emit_json({"h": a.h, "g": a.g, "size": len(f), "is_bhg": ok}, a.out)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_exact_fk(a):
    from .oracle import EXACT_FK_CAP, exact_fk

    r = exact_fk(a.n, a.k, cap=a.cap or EXACT_FK_CAP, split_depth=a.split,
                 workers=a.threads)
    _emit_json(r.to_dict(), a.out)
    return EXIT_OK


def cmd_enum3(a):
    from .oracle import ENUM3_CAP, enumerate_3set_equalities

    records = enumerate_3set_equalities(a.n, cap=a.cap or ENUM3_CAP)
    with _output(a.out) as fh:
        write_collisions(records, fh)
    return EXIT_OK


def cmd_classify3(a):
    from .formats import read_collisions
    from .oracle import ENUM3_CAP, classify_3set_equalities, enumerate_3set_equalities

    if a.records:
        with open(a.records) as fh:
            records = read_collisions(fh)
    elif a.n is not None:
        records = enumerate_3set_equalities(a.n, cap=a.cap or ENUM3_CAP)
    else:
        raise UsageError("classify3 needs --n or a records file")
    c = classify_3set_equalities(records)
    summary = {
        "records": len(records),
        "by_family": {str(fid): sorted({lam for lam, _ in v}) for fid, v in c.by_family.items()},
        "counts": {str(fid): len(v) for fid, v in c.by_family.items()},
        "bridged": len(c.bridged),
        "unclassified": [json.loads(r.to_json()) for r in c.unclassified],
    }
    _emit_json(summary, a.out)
    return EXIT_OK if not c.unclassified else EXIT_FALSE


def cmd_count_cl(a):
    from .oracle import COUNT_CAP, count_c_ell_all, count_c_prime

    cap = a.cap or COUNT_CAP
    rows = []
    for n in a.n:
        counts = count_c_ell_all(n, a.k, cap)
        for ell in (2, 3, 4):
            rows.append({"n": n, "k": a.k, "ell": ell, "count": counts[ell]})
        if a.prime:
            rows.append({"n": n, "k": a.k, "ell": "prime", "count": count_c_prime(n, a.k, cap)})
    with _output(a.out) as fh:
        if a.format == "json":
            for r in rows:
                fh.write(json.dumps(r) + "\n")
        else:
            fh.write("n,k,ell,count\n")
            for r in rows:
                fh.write(f"{r['n']},{r['k']},{r['ell']},{r['count']}\n")
    return EXIT_OK


def _sweep(a, h):
    from . import randomsim as R

    if a.p is not None:
        pts = []
        for n in a.n:
            spec = R.SampleSpec(n, a.k, a.p, h, a.seed, a.samples)
            pts.append(R.estimate_bh_probability(spec, a.threads))
        with _output(a.out) as fh:
            if a.format == "json":
                for pt in pts:
                    fh.write(json.dumps({**pt.row(), "seed": a.seed}) + "\n")
            else:
                R.write_csv(pts, fh, a.seed)
        return EXIT_OK
    grid = R.GridSpec(a.p_min, a.p_max, a.grid, relative=not a.absolute)
    res = R.threshold_sweep(a.n, a.k, h, grid, a.samples, a.seed, a.threads)
    with _output(a.out) as fh:
        if a.format == "json":
            R.write_summary(res, fh)
        else:
            R.write_csv(res.points, fh, a.seed)
            fh.write("# " + json.dumps(res.summary()) + "\n")
    return EXIT_OK


def cmd_sweep(a):
    return _sweep(a, 2)


def cmd_bh_sweep(a):
    return _sweep(a, a.h)


def cmd_multirep(a):
    from .oracle import composite_multirep

    s, pairings = composite_multirep(a.parts, k=a.k)
    _emit_json({"sumset": list(s.sums),
                "pairings": [[list(x.elements) for x in f] for f in pairings],
                "representations": len(pairings)}, a.out)
    return EXIT_OK


def cmd_bounds(a):
    with _output(a.out) as fh:
        fh.write(f"{upper_bound_fk(a.n, a.k)}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sidonkit", description="Sidon systems of k-sets: "
                "constructions, verification, exhaustive oracles and random sweeps.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="output path (default: stdout)")
        return sp

    sp = add("construct", cmd_construct, "write an explicit Sidon or B_2[g] family")
    sp.add_argument("--kind", choices=["k2", "k3", "k4", "b2g"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--g", type=int)
    sp.add_argument("--base", choices=["et", "golomb"], default="et",
                    help="Sidon base for --kind k4 (default: Erdos-Turan)")

    sp = add("verify", cmd_verify, "check the Sidon property; print violations as JSON lines")
    sp.add_argument("family")
    sp.add_argument("--cap", type=int, help="print at most this many violations")

    sp = add("bhg-verify", cmd_bhg_verify, "check the B_h[g] property")
    sp.add_argument("family")
    sp.add_argument("--h", type=int, default=2)
    sp.add_argument("--g", type=int, default=1)

    sp = add("exact-fk", cmd_exact_fk, "exact F_k(N) by exhaustive search")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--cap", type=int, help="largest C(n,k) allowed")
    sp.add_argument("--split", type=int, default=0, help="root-splitting depth")
    sp.add_argument("--threads", type=int, default=_default_threads())

    sp = add("enum3", cmd_enum3, "all sumset equalities among 3-sets of {0..n} containing 0")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int)

    sp = add("classify3", cmd_classify3, "classify 3-set equalities up to dilation")
    sp.add_argument("records", nargs="?", help="JSON-lines records (default: enumerate --n)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--cap", type=int)

    sp = add("count-cl", cmd_count_cl, "exact counts of violating pairs-of-pairs by ell")
    sp.add_argument("--n", type=_int_list, required=True, help="e.g. 4:12 or 8,10")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--prime", action="store_true", help="also count the C' subfamily")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    for name, func, help_ in (("sweep", cmd_sweep, "Monte Carlo Sidon threshold sweep"),
                              ("bh-sweep", cmd_bh_sweep, "Monte Carlo B_h[1] threshold sweep")):
        sp = add(name, func, help_)
        sp.add_argument("--n", type=_int_list, required=True)
        sp.add_argument("--k", type=int, required=True)
        if name == "bh-sweep":
            sp.add_argument("--h", type=int, required=True)
        sp.add_argument("--seed", type=_seed, required=True)
        sp.add_argument("--samples", type=int, default=400)
        sp.add_argument("--p", type=float, help="single probability instead of a grid")
        sp.add_argument("--p-min", type=float, default=0.1,
                        help="grid start, as a multiple of n^-exponent unless --absolute")
        sp.add_argument("--p-max", type=float, default=10.0)
        sp.add_argument("--grid", type=int, default=13, help="number of grid points")
        sp.add_argument("--absolute", action="store_true",
                        help="treat --p-min/--p-max as probabilities")
        sp.add_argument("--threads", type=int, default=_default_threads())
        sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = add("multirep", cmd_multirep, "sumset of four 2-sets with three representations")
    sp.add_argument("--parts", type=_int_list, default=[1, 2, 4, 8])
    sp.add_argument("--k", type=int, default=4)

    sp = add("bounds", cmd_bounds, "upper bound C(n-1,k-1) + n - k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "k", 1) is None:
        args.k = 2 if args.kind == "k2" else 3
    try:
        return args.func(args)
    except (UsageError, FamilyFormatError, CapExceeded, ValueError, OSError) as exc:
        print(f"sidonkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "read_family", "write_family", "Family"]
