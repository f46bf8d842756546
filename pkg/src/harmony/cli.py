"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error,
4 property violation.
"""

import argparse
import contextlib
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from . import __version__, bench, campaigns, measures, monogamy, states, verify
from .errors import (ConfigError, HarmonyError, ImaginaryResidue, InvalidDistribution,
                     InvalidState, OutOfRange, SpectrumViolation)
from .io import ReportWriter, StateFileError, read_state, write_state
from .tolerances import DEFAULT

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_VIOLATION = 0, 1, 2, 3, 4

EOF_GAP_MAX = 1e-3
EOF_UNDERCUT = 1e-6
MEASURE_COLUMNS = ["harmony", "disharmony", "concurrence", "eof", "purity_a",
                   "lambda1", "lambda2", "lambda3", "lambda4", "lambda_sum",
                   "route_discrepancy", "harmony_in_range"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tolerance_arg(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    k, v = text.split("=", 1)
    try:
        return k.strip(), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value in {text!r}") from None


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=_tolerance_arg, action="append", default=[],
                        metavar="NAME=VALUE",
                        help=f"override a tolerance; names: {', '.join(DEFAULT.as_dict())}")
    common.add_argument("--base2", action="store_true", help="report entropies in bits")
    common.add_argument("--jobs", type=_positive_int, default=1)
    common.add_argument("--no-timestamp", action="store_true")

    p = _Parser(prog="harmony", description="Harmony and concurrence for two-qubit states.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", parents=[common], help="measures for one state file")
    c.add_argument("--input", "-i", required=True)
    c.add_argument("--measures", help=f"comma-separated subset of {','.join(MEASURE_COLUMNS)}")
    c.add_argument("--monogamy", action="store_true",
                   help="for 3-qubit inputs, report the monogamy quantities per pivot")

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo property campaign")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--check", choices=campaigns.KINDS, default="properties")
    s.add_argument("--qubits", type=int, choices=(2, 3))
    s.add_argument("--rank", type=int)
    s.add_argument("--decompositions", type=int, default=0,
                   help="random decompositions per state for the corollary bound")

    v = sub.add_parser("verify-eof", parents=[common],
                       help="decomposition search vs. closed-form entanglement of formation")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--k", type=int, default=8)
    v.add_argument("--restarts", type=int, default=20)
    v.add_argument("--max-iters", type=int, default=2000)
    v.add_argument("--input", "-i")

    b = sub.add_parser("bench", parents=[common], help="time the measure routes")
    b.add_argument("--n", type=int, default=1000)
    b.add_argument("--repetitions", type=int, default=5)

    g = sub.add_parser("gen", parents=[common], help="write named states to state files")
    g.add_argument("kind", choices=["bell", "ghz", "w", "basis", "bell-diagonal",
                                    "nonconvexity", "random"])
    g.add_argument("params", nargs="*")
    g.add_argument("--qubits", type=int, default=2)
    g.add_argument("--rank", type=int)
    g.add_argument("--stream", type=int, default=0)
    return p


def _tolerances(args):
    try:
        return DEFAULT.with_overrides(**dict(args.tolerance))
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _metadata(args, tol, **extra):
    skip = {"output", "jobs", "no_timestamp", "tolerance", "input"}
    params = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items())
                      if k not in skip and k != "verb")
    meta = {"command": f"harmony {args.verb} {params}".strip(),
            "version": __version__,
            "seed": args.seed,
            "log_base": "2" if args.base2 else "e",
            "tolerances": ";".join(f"{k}={v!r}" for k, v in tol.as_dict().items()),
            "rng": states.RNG_ALGORITHM}
    meta.update(extra)
    return meta


@contextlib.contextmanager
def _out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _scale(args):
    return 1 / math.log(2) if args.base2 else 1.0


# --- verbs ------------------------------------------------------------------

def cmd_compute(args):
    tol = _tolerances(args)
    rho, label = read_state(args.input, tol)
    cols = MEASURE_COLUMNS
    if args.measures:
        cols = [m.strip() for m in args.measures.split(",") if m.strip()]
        bad = [m for m in cols if m not in MEASURE_COLUMNS]
        if bad:
            raise UsageError(f"unknown measure(s): {', '.join(bad)}")
    meta = _metadata(args, tol, input=args.input)
    if rho.n_qubits == 3 and args.monogamy:
        cols = ["label"] + list(monogamy.MonogamyReport(0, 0, 0, 0).as_row())
        with _out(args.output) as fh:
            w = ReportWriter(fh, meta, not args.no_timestamp, columns=cols)
            for pivot in range(3):
                w.write({"label": label, **monogamy.monogamy_report(rho, pivot).as_row()})
        return EXIT_OK
    if rho.n_qubits != 2:
        raise InvalidState(f"2-qubit measure requires n_qubits=2, got n_qubits={rho.n_qubits}")
    rep = measures.measure_report(rho).as_row()
    rep["eof"] *= _scale(args)
    with _out(args.output) as fh:
        w = ReportWriter(fh, meta, not args.no_timestamp, columns=["label"] + cols)
        w.write({"label": label, **rep})
    return EXIT_OK


def cmd_sample(args):
    tol = _tolerances(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    need = 2 if args.check == "properties" else 3
    qubits = args.qubits or need
    if qubits != need:
        raise UsageError(f"--check {args.check} needs --qubits {need}")
    dim = 2 ** need
    if args.rank is not None and not 1 <= args.rank <= dim:
        raise UsageError(f"--rank must be in 1..{dim}")
    if args.check == "monogamy" and args.rank not in (None, 1):
        raise UsageError("--check monogamy samples pure states; --rank must be 1 or omitted")
    kwargs = {}
    if args.check == "corollary":
        kwargs["decompositions"] = args.decompositions
    summary = campaigns.CampaignSummary(args.check)
    meta = _metadata(args, tol)
    cols = campaigns.COLUMNS[args.check] + campaigns.SUMMARY_COLUMNS
    with _out(args.output) as fh:
        w = ReportWriter(fh, meta, not args.no_timestamp, columns=cols)
        for row in campaigns.iter_campaign(args.check, args.n, args.seed, args.rank,
                                           args.jobs, summary, **kwargs):
            w.write(row)
        for row in summary.rows():
            w.write(row)
    if not summary.ok:
        bad = ", ".join(f"{k} ({v})" for k, v in summary.violations.items() if v)
        print(f"harmony sample: property violated: {bad}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _eof_trial(i, seed, k, restarts, max_iters, rho=None):
    if rho is None:
        rho = verify.random_two_qubit_state(states.RandomSpec(seed, i).rng())
    cfg = verify.DecompositionSearchConfig(k_states=k, restarts=restarts,
                                           max_iters=max_iters, seed=seed * 1_000_003 + i + 1)
    return verify.eof_decomposition_search(rho, cfg)


def cmd_verify_eof(args):
    tol = _tolerances(args)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    fixed = None
    if args.input:
        fixed, _ = read_state(args.input, tol)
        if fixed.n_qubits != 2:
            raise InvalidState(f"2-qubit measure requires n_qubits=2, got n_qubits={fixed.n_qubits}")
    n = 1 if fixed is not None else args.trials
    work = partial(_eof_trial, seed=args.seed, k=args.k, restarts=args.restarts,
                   max_iters=args.max_iters, rho=fixed)
    # validate K >= rank up front so a bad config fails before any work
    if fixed is not None:
        cfgrank = int((fixed.eigh()[0] > tol.rank_cutoff).sum())
        verify.DecompositionSearchConfig(k_states=args.k, restarts=args.restarts,
                                         max_iters=args.max_iters).validate(cfgrank)
    elif args.k < 4:
        raise ConfigError(f"K (k_states={args.k}) must be >= rank 4 of the sampled states")
    if args.jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(work, range(n)))
    else:
        reports = [work(i) for i in range(n)]
    scale = _scale(args)
    worst_gap, worst_undercut = -math.inf, 0.0
    meta = _metadata(args, tol, search="random two-row rotations, step pi/8 decaying x0.95 every 20 iterations")
    with _out(args.output) as fh:
        w = ReportWriter(fh, meta, not args.no_timestamp,
                         columns=["row", "trial", "closed_form_eof", "searched_eof", "gap",
                                  "route_discrepancy", "max_reconstruction_error"])
        for i, rep in enumerate(reports):
            row = rep.as_row()
            for key in ("closed_form_eof", "searched_eof", "gap"):
                row[key] *= scale
            w.write({"row": "sample", "trial": i, **row})
            worst_gap = max(worst_gap, rep.gap)
            worst_undercut = min(worst_undercut, rep.gap)
        w.write({"row": "summary", "trial": n, "gap": worst_gap * scale})
    if worst_gap > EOF_GAP_MAX or worst_undercut < -EOF_UNDERCUT:
        print(f"harmony verify-eof: gap outside [-{EOF_UNDERCUT:g}, {EOF_GAP_MAX:g}]: "
              f"max {worst_gap:.3e}, min {worst_undercut:.3e}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bench(args):
    tol = _tolerances(args)
    if args.n < 1 or args.repetitions < 3:
        raise UsageError("--n must be >= 1 and --repetitions >= 3")
    rep = bench.run_bench(args.n, states.RandomSpec(args.seed), args.repetitions)
    meta = _metadata(args, tol, **{f"env_{k}": v for k, v in rep.environment.items()
                                   if k != "timestamp"})
    with _out(args.output) as fh:
        w = ReportWriter(fh, meta, not args.no_timestamp)
        w.write_all(rep.rows())
    if rep.correctness_max_discrepancy > 1e-9:
        return EXIT_VIOLATION
    return EXIT_OK


def _floats(params, n, what):
    if len(params) != n:
        raise UsageError(f"{what} needs {n} numeric parameter(s)")
    try:
        return [float(p) for p in params]
    except ValueError:
        raise UsageError(f"{what}: parameters must be numbers") from None


def _generate(args):
    """Yield (suffix, label, DensityMatrix) for the requested state(s)."""
    kind, params = args.kind, args.params
    if kind == "bell":
        which = params[0] if params else "phi+"
        try:
            psi = states.bell_state(which)
        except ValueError:
            raise UsageError(f"bell kind must be one of phi+, phi-, psi+, psi-") from None
        yield "", f"bell {which}", states.from_pure(psi)
    elif kind in ("ghz", "w"):
        psi = states.ghz_state() if kind == "ghz" else states.w_state()
        yield "", kind, states.from_pure(psi)
    elif kind == "basis":
        if len(params) != 1:
            raise UsageError("basis needs a bit string such as 00")
        try:
            yield "", f"basis {params[0]}", states.from_pure(states.basis_state(params[0]))
        except InvalidState as exc:
            raise UsageError(str(exc)) from None
    elif kind == "bell-diagonal":
        p = _floats(params, 4, "bell-diagonal")
        try:
            rho = states.bell_diagonal(p)
        except InvalidDistribution as exc:
            raise UsageError(str(exc)) from None
        yield "", "bell-diagonal " + " ".join(params), rho
    elif kind == "nonconvexity":
        (x,) = _floats(params, 1, "nonconvexity")
        try:
            plus, minus, mix = states.nonconvexity_family(x)
        except OutOfRange as exc:
            raise UsageError(str(exc)) from None
        yield "_plus", f"nonconvexity plus x={x}", plus
        yield "_minus", f"nonconvexity minus x={x}", minus
        yield "_mixture", f"nonconvexity mixture x={x}", mix
    elif kind == "random":
        dim = 2 ** args.qubits
        if not 1 <= args.qubits <= 3:
            raise UsageError("--qubits must be 1..3")
        rank = args.rank or dim
        if not 1 <= rank <= dim:
            raise UsageError(f"--rank must be in 1..{dim}")
        spec = states.RandomSpec(args.seed, args.stream, states.Ensemble.INDUCED_MIXED, rank)
        rho = states.random_mixed(args.qubits, rank, spec)
        yield "", f"random qubits={args.qubits} rank={rank} seed={args.seed} stream={args.stream}", rho


def cmd_gen(args):
    items = list(_generate(args))
    if len(items) > 1 and not args.output:
        raise UsageError(f"{args.kind} writes several files; give --output PREFIX")
    for suffix, label, rho in items:
        if args.output:
            path = args.output
            if suffix:
                stem, dot, ext = path.rpartition(".")
                path = f"{stem}{suffix}.{ext}" if dot and "/" not in ext else f"{path}{suffix}"
            write_state(path, rho, label)
        else:
            from .io import dumps_state
            sys.stdout.write(dumps_state(rho.mat, label))
    return EXIT_OK


VERBS = {"compute": cmd_compute, "sample": cmd_sample, "verify-eof": cmd_verify_eof,
         "bench": cmd_bench, "gen": cmd_gen}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return VERBS[args.verb](args)
    except (UsageError, ConfigError) as exc:
        print(f"harmony {args.verb}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateFileError as exc:
        print(f"harmony {args.verb}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidState, SpectrumViolation, ImaginaryResidue, HarmonyError) as exc:
        print(f"harmony {args.verb}: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
