"""Command-line front end.

Exit codes: 0 success, 1 a mathematical counterexample or failed check,
2 usage, input or cap error.  ``--json`` switches every subcommand from
aligned text to JSON.
"""

import argparse
from dataclasses import dataclass, field
import json
import os
import sys
import time

import numpy as np

from . import divlattice as dl
from . import fourierpairs as fp
from . import grpeq as ge
from . import rootset as rs
from . import setfilter as sf
from .cyclotomic import as_integer
from .errors import CapExceeded, NotBinaryPartner, UnityFiltersError

CAP_ENV = "UNITY_FILTERS_CAP_OVERRIDE"


@dataclass
class RunReport:
    command: list
    tested: int = 0
    failed: int = 0
    counterexamples: list = field(default_factory=list)
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.tested - self.failed

    def as_dict(self, with_time=True):
        out = {"command": self.command, "tested": self.tested, "passed": self.passed,
               "failed": self.failed, "counterexamples": self.counterexamples}
        out.update(self.details)
        if with_time:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def cap_override():
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{CAP_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"{CAP_ENV} must be positive")
    return value


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def _aligned(pairs):
    width = max((len(str(k)) for k, _ in pairs), default=0)
    return "\n".join(f"{str(k).ljust(width)}  {v}" for k, v in pairs)


def _report_text(rep):
    d = rep.as_dict()
    keys = [k for k in d if k not in ("command", "counterexamples")]
    lines = _aligned([(k, d[k]) for k in keys])
    for c in rep.counterexamples[:20]:
        lines += f"\ncounterexample: {json.dumps(c)}"
    return lines


# ---- power-sums --------------------------------------------------------------

def cmd_power_sums(args):
    n = args.n
    dl._check_positive(n)
    if (args.divisors is None) == (args.exponents is None):
        raise UsageError("give exactly one of --divisors or --exponents")
    if args.divisors is not None:
        system = rs.DivisorSystem(n, _int_list(args.divisors))
        cs = dl.divisors(n) if args.all_c else [args.c]
        table = {c: rs.power_sum(system, c) for c in cs}
        source = system.to_json()
    else:
        u = rs.ExplicitRootSet(n, _int_list(args.exponents))
        ks = range(n) if args.all_c else [args.c]
        table = {k: as_integer(rs.power_sum_explicit(u, k)) for k in ks}
        source = {"n": n, "exponents": sorted(u.exponents)}
    payload = {"input": source, "a": {str(c): v for c, v in table.items()}}
    text = _aligned([(f"a_{c}", "not an integer" if v is None else v) for c, v in table.items()])
    _emit(args, payload, text)
    return 0


# ---- check-theorem -----------------------------------------------------------

def cmd_check_theorem(args, argv):
    start = time.perf_counter()
    rep = RunReport(argv)
    cap = cap_override()
    if args.which == "filter":
        if args.size is None:
            raise UsageError("--which filter needs --size")
        size = args.size
        if size > max(sf.SAMPLED_CAP, cap or 0):
            raise CapExceeded(f"ground set size {size} exceeds the cap")
        if args.weights is not None:
            mu = sf.AtomWeights(_float_list(args.weights))
        else:
            mu = sf.AtomWeights.random(size, np.random.default_rng(args.seed))
        if args.system is not None:
            E = sf.SetSystem(size, _int_list(args.system))
            sums = sf.alt_sums(E, mu)
            nonneg = all(v >= -sf.tolerance(E, mu, C) for C, v in enumerate(sums))
            gen = sf.is_filter(E)
            rep.tested = 1
            rep.details = {"members": list(E.members), "weights": list(mu.weights),
                           "filter_generator": gen, "nonnegative": nonneg,
                           "alt_sums": sums}
            if nonneg != (gen is not None):
                rep.counterexamples.append({"members": list(E.members)})
        else:
            samples = args.samples
            if samples is None and size > max(sf.EXHAUSTIVE_CAP, cap or 0):
                samples = 1000
            r = sf.check_theorem(size, mu, samples=samples, seed=args.seed, jobs=args.jobs,
                                 cap_override=cap)
            rep.tested = r.tested
            rep.counterexamples = r.counterexamples
            rep.details = {"size": size, "weights": list(mu.weights), "filters": r.filters,
                           "mode": "exhaustive" if samples is None else f"sampled ({samples})"}
    else:
        if args.n is None:
            raise UsageError("--which roots needs --n")
        r = rs.check_roots_theorem(args.n, jobs=args.jobs, cap_override=cap)
        rep.tested = r.tested
        rep.counterexamples = r.counterexamples
        rep.details = {"n": args.n, "filters": r.filters,
                       "expected_filters": dl.num_divisors(args.n)}
    rep.failed = len(rep.counterexamples)
    rep.wall_time = time.perf_counter() - start
    _emit(args, rep.as_dict(), _report_text(rep))
    return 1 if rep.failed else 0


# ---- fourier -----------------------------------------------------------------

def _read_matrix(path):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return fp.BinaryMatrix.from_json(json.loads(text))
    return fp.BinaryMatrix.from_text(text)


def _matrix_from_args(args):
    if args.infile:
        return _read_matrix(args.infile)
    if args.n is None or args.d is None or args.t is None:
        raise UsageError("give --in FILE or all of --n, --d, --t")
    return fp.build_eps(args.n, args.d, args.t)


def _params(p):
    return None if p is None else {"d": p.d, "t": p.t}


def cmd_fourier(args, argv):
    cap = cap_override()
    if args.action == "enumerate":
        if args.n is None:
            raise UsageError("fourier enumerate needs --n")
        mats = fp.enumerate_idempotents(args.n, mode=args.mode, prune=not args.no_prune,
                                        allow_n5=args.allow_n5, jobs=args.jobs,
                                        cap_override=cap)
        payload = {"n": args.n, "count": len(mats),
                   "matrices": [dict(m.to_json(), params=_params(fp.classify(m))) for m in mats]}
        blocks = [f"{len(mats)} matrices"]
        for m in mats:
            blocks.append(f"# {_params(fp.classify(m))}\n{m.to_text()}")
        _emit(args, payload, "\n\n".join(blocks))
        return 0
    if args.action == "verify":
        m = _matrix_from_args(args)
        ok = fp.is_idempotent(m)
        params = fp.classify(m) if ok else None
        payload = dict(m.to_json(), idempotent=ok, params=_params(params))
        _emit(args, payload, f"{m.to_text()}\nidempotent: {str(ok).lower()}\n"
                             f"params: {_params(params)}")
        return 0 if ok else 1
    if args.action == "partner":
        m = _matrix_from_args(args)
        try:
            q = fp.fourier_partner(m)
        except NotBinaryPartner as exc:
            _emit(args, {"binary": False, "error": str(exc)}, f"partner is not binary: {exc}")
            return 1
        params = fp.classify(q) if fp.is_idempotent(q) else None
        payload = dict(q.to_json(), binary=True, params=_params(params))
        _emit(args, payload, f"{q.to_text()}\nparams: {_params(params)}")
        return 0
    # brute
    if args.n is None:
        raise UsageError("fourier brute needs --n")
    start = time.perf_counter()
    ex = fp.enumerate_idempotents(args.n, mode="exhaustive", prune=not args.no_prune,
                                  allow_n5=args.allow_n5, jobs=args.jobs, cap_override=cap)
    cl = fp.classified_solutions(args.n)
    same = set(ex) == set(cl)
    rep = RunReport(argv, tested=len(ex))
    if not same:
        rep.counterexamples = ([{"extra": m.to_rows()} for m in sorted(set(ex) - set(cl))]
                               + [{"missing": m.to_rows()} for m in sorted(set(cl) - set(ex))])
    rep.failed = len(rep.counterexamples)
    rep.wall_time = time.perf_counter() - start
    rep.details = {"n": args.n, "exhaustive": len(ex), "classified": len(cl), "equal": same}
    rel = "=" if same else "!="
    _emit(args, rep.as_dict(), f"exhaustive {rel} classified: {len(ex)} {rel} {len(cl)}")
    return 0 if same else 1


# ---- grpeq -------------------------------------------------------------------

def _group_from_args(args):
    if args.group:
        return ge.AbelianGroup(_int_list(args.group), cap=max(ge.GROUP_CAP, cap_override() or 0))
    if args.n is not None:
        return ge.AbelianGroup([args.n], cap=max(ge.GROUP_CAP, cap_override() or 0))
    raise UsageError("give --n or --group")


def _describe_pairing(group, H1, H2, p):
    els = group.elements
    return {"H1": [list(els[k]) for k in sorted(H1)], "H2": [list(els[k]) for k in sorted(H2)],
            "pairing": p.to_json()}


def cmd_grpeq(args, argv):
    start = time.perf_counter()
    cap = cap_override()
    if args.action == "enumerate":
        group = _group_from_args(args)
        if len(group.factors) == 1 and not args.pairings:
            n = group.order
            sols = ge.enumerate_cyclic_solutions(n, cap_override=cap)
            params = [(d, t) for d in dl.divisors(n) for t in range(d)]
            payload = {"group": [n], "count": len(sols),
                       "solutions": [dict(s.to_json(), params={"d": d, "t": t})
                                     for s, (d, t) in zip(sols, params)]}
            text = f"{len(sols)} solutions\n" + "\n".join(f"d={d} t={t}" for d, t in params)
        else:
            found = ge.pairing_solutions(group)
            payload = {"group": list(group.factors), "count": len(found),
                       "solutions": [dict(s.to_json(), **_describe_pairing(group, H1, H2, p))
                                     for H1, H2, p, s in found]}
            text = f"{len(found)} pairing solutions"
        _emit(args, payload, text)
        return 0

    if args.action == "verify":
        rep = RunReport(argv)
        results = []
        if args.infile:
            with open(args.infile) as fh:
                obj = json.load(fh)
            if args.group:
                obj.setdefault("group", _int_list(args.group))
            if "omega" in obj:
                p = ge.SubgroupPairing.from_json(obj)
                results.append(("pairing", ge.verify_equations(ge.build_pairing_solution(p.group, p))))
            else:
                results.append(("solution", ge.verify_equations(ge.GroupSolution.from_json(obj))))
        elif args.n is not None and args.group is None:
            if args.d is not None:
                t = args.t or 0
                results.append((f"d={args.d} t={t}",
                                ge.verify_equations(ge.build_cyclic_solution(args.n, args.d, t))))
            else:
                if args.n > max(ge.GROUP_CAP, cap or 0):
                    raise CapExceeded(f"n={args.n} exceeds the group cap")
                for (d, t), r in ge.verify_cyclic_family(args.n, jobs=args.jobs).items():
                    results.append((f"d={d} t={t}", r))
        else:
            group = _group_from_args(args)
            for H1, H2, p, s in ge.pairing_solutions(group):
                label = json.dumps(_describe_pairing(group, H1, H2, p)["pairing"]["omega"])
                results.append((label, ge.verify_equations(s)))
        rep.tested = len(results)
        for label, r in results:
            if not r.passed:
                rep.counterexamples.append({"solution": label, "failures": r.failures[:10]})
        rep.failed = len(rep.counterexamples)
        rep.wall_time = time.perf_counter() - start
        rep.details = {"equations_each": [r.total for _, r in results][:1]}
        text = _report_text(rep) + f"\nresult: {'pass' if not rep.failed else 'fail'}"
        _emit(args, rep.as_dict(), text)
        return 1 if rep.failed else 0

    # bridge
    if args.n is None:
        raise UsageError("grpeq bridge needs --n")
    if args.n > max(ge.GROUP_CAP, cap or 0):
        raise CapExceeded(f"n={args.n} exceeds the group cap")
    b = ge.bridge_check(args.n)
    rep = RunReport(argv, tested=b.eps_count, wall_time=time.perf_counter() - start,
                    details=b.as_dict())
    if not b.bijection:
        rep.counterexamples.append({"bridge": b.as_dict()})
    rep.failed = len(rep.counterexamples)
    sigma = dl.sum_divisors(args.n)
    if b.bijection:
        text = f"bijection confirmed: {b.matched} = sigma({args.n}) = {sigma} solutions"
    else:
        text = f"bijection FAILED: matched {b.matched} of sigma({args.n}) = {sigma}"
    _emit(args, rep.as_dict(), text)
    return 1 if rep.failed else 0


# ---- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="unity-filters",
                                     description="Exact checks for root-of-unity power sums, "
                                                 "set-system filters and Fourier pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power-sums", parents=[common], help="power sums a_c of a root set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--divisors", help="divisor system E, comma separated")
    p.add_argument("--exponents", help="explicit exponent set S, comma separated")
    p.add_argument("--all-c", action="store_true", help="every c | n (every k < n for exponents)")
    p.add_argument("--c", type=int, default=1, help="single index when --all-c is absent")

    p = sub.add_parser("check-theorem", parents=[common], help="exhaustive or sampled theorem check")
    p.add_argument("--which", choices=["filter", "roots"], required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--weights", help="atom weights, comma separated (default: seeded random)")
    p.add_argument("--system", help="single system as comma-separated member masks")

    p = sub.add_parser("fourier", parents=[common], help="binary Fourier pairs")
    p.add_argument("action", choices=["enumerate", "verify", "partner", "brute"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--in", dest="infile")
    p.add_argument("--mode", choices=["classified", "exhaustive"], default="classified")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--allow-n5", action="store_true", help="allow the pruned search at n = 5")

    p = sub.add_parser("grpeq", parents=[common], help="group equation solutions")
    p.add_argument("action", choices=["enumerate", "verify", "bridge"])
    p.add_argument("--n", type=int)
    p.add_argument("--group", help="factors n1,n2,... of Z_n1 x Z_n2 x ...")
    p.add_argument("--d", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--in", dest="infile", help="pairing or solution JSON")
    p.add_argument("--pairings", action="store_true", help="enumerate pairing solutions on a cyclic group")
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if args.command == "power-sums":
            return cmd_power_sums(args)
        if args.command == "check-theorem":
            return cmd_check_theorem(args, argv)
        if args.command == "fourier":
            return cmd_fourier(args, argv)
        return cmd_grpeq(args, argv)
    except (UsageError, UnityFiltersError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
