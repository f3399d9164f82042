"""Command-line front end: identity checks, inversion and experiments.

Subcommands
-----------
identities  check the closed-form identity catalog by quadrature
invert      invert transform samples read from CSV or generated from a pair
experiment  run one noise/inversion experiment and report nsr and MSE
pairs       list the analytic pair catalog

Exit status is 0 when every requested tolerance is met, 1 when one is
not, and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import warnings

import numpy as np

from .errors import ComplexParseError, ConvergenceError, DomainError, RangeWarning
from .experiments import (
    METHODS,
    NoiseSpec,
    add_noise,
    catalog_names,
    pair_catalog,
    pair_moment,
    run_experiment,
)
from .identities import CHEB_IDS, LEMMA_IDS, NULL_ID, run_catalog
from .spectral import (
    FamilyParams,
    GridFunction,
    invert_d,
    invert_family,
    invert_m,
    make_grid,
    range_functional_d,
    reconstruct_with_moment,
)

__all__ = ["parse_complex", "format_complex", "read_samples_csv", "write_samples_csv", "main"]

DEFAULT_MU_SET = ("0", "1", "4pi", "2i", "3+3i")
CSV_HEADER = ("theta", "F_re", "F_im")
OUT_HEADER = ("theta", "f_rec_re", "f_rec_im")

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?P<num>{_NUMBER})?\s*(?:\*\s*)?(?P<pi>pi|π)?\s*(?:\*\s*)?(?P<imag>[ij])?\s*"
)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style text into a complex number.

    Accepted forms include ``3``, ``-2.5e-3``, ``2i``, ``-i``, ``12+12i``,
    ``24-24i``, ``4pi``, ``4pi*i``, ``pi+2i`` and ``j`` in place of ``i``.

    Raises
    ------
    ComplexParseError
        With the offending character position.
    """
    if not isinstance(text, str):
        raise ComplexParseError(repr(text), 0, "expected a string")
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        start = len(text) - len(text[pos:].lstrip())
        if not (m and (m["num"] or m["pi"] or m["imag"])):
            where = m.end() if m and m["sign"] else start
            raise ComplexParseError(text, where, "expected a number, 'pi' or 'i'")
        if terms and not m["sign"]:
            raise ComplexParseError(text, start, "expected '+' or '-' between terms")
        value = float(m["num"]) if m["num"] else 1.0
        if m["pi"]:
            value *= math.pi
        if m["sign"] == "-":
            value = -value
        terms.append((bool(m["imag"]), value, start))
        pos = m.end()
    if not terms:
        raise ComplexParseError(text, 0, "empty input")
    if len(terms) > 2:
        raise ComplexParseError(text, terms[2][2], "at most a real and an imaginary part")
    if len(terms) == 2 and terms[0][0] == terms[1][0]:
        raise ComplexParseError(text, terms[1][2], "need one real and one imaginary part")
    z = complex(0.0, 0.0)
    for imag, value, _ in terms:
        z += complex(0.0, value) if imag else complex(value, 0.0)
    return z


def format_complex(z) -> str:
    """Shortest round-tripping text for ``z`` in ``a+bi`` form."""
    z = complex(z)
    im = repr(z.imag)
    return f"{z.real!r}{'' if im.startswith('-') else '+'}{im}i"


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ComplexParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# --- CSV -----------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_samples_csv(stream, header, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])


def read_samples_csv(stream) -> tuple[np.ndarray, np.ndarray]:
    """Read ``theta,F_re,F_im`` rows; returns (theta, F) after validation.

    theta must be the Chebyshev-interior nodes (m + 1/2) pi / N in
    ascending order, N being the number of rows.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise DomainError("input CSV is empty")
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise DomainError(f"input CSV header must be {','.join(CSV_HEADER)}, got {','.join(header)}")
    theta, values = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise DomainError(f"line {lineno}: expected 3 columns, got {len(row)}")
        try:
            th, re_, im_ = (float(c) for c in row)
        except ValueError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in (th, re_, im_)):
            raise DomainError(f"line {lineno}: non-finite value")
        theta.append(th)
        values.append(complex(re_, im_))
    if not theta:
        raise DomainError("input CSV has no data rows")
    theta = np.array(theta)
    grid = make_grid(len(theta))
    if not (np.all(np.diff(theta) > 0) and theta[0] > 0 and theta[-1] < np.pi):
        raise DomainError("theta must be ascending inside (0, pi)")
    if np.max(np.abs(theta - grid.theta)) > 1e-9:
        raise DomainError(f"theta does not match the {len(theta)} Chebyshev nodes (m + 1/2) pi / N")
    return theta, np.array(values)


# --- subcommands ---------------------------------------------------------------


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(args, write):
    stream, close = _open_output(args.output)
    try:
        write(stream)
    finally:
        if close:
            stream.close()


def _cmd_identities(args) -> int:
    mus = args.mu or [parse_complex(m) for m in DEFAULT_MU_SET]
    ids = None
    if args.ids:
        ids = [s.strip() for s in args.ids.split(",") if s.strip()]
        known = set(LEMMA_IDS + CHEB_IDS + (NULL_ID, "I2_42"))
        bad = [i for i in ids if i not in known]
        if bad:
            raise DomainError(f"unknown identity ids: {', '.join(bad)}")
    rows = []
    for mu in mus:
        for rep in run_catalog(mu, ids=ids, n_values=range(1, args.n_max + 1), tol=args.tol):
            rows.append(rep.as_row())
    ok = all(r["passed"] for r in rows)

    def write(stream):
        if args.format == "json":
            json.dump({"passed": ok, "results": rows}, stream, indent=2)
            stream.write("\n")
        else:
            keys = list(rows[0]) if rows else []
            w = csv.DictWriter(stream, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})

    _emit(args, write)
    return 0 if ok else 1


def _family_from(args):
    return FamilyParams(args.alpha, args.beta, args.gamma)


def _cmd_invert(args) -> int:
    mu = args.mu
    if (args.input is None) == (args.pair is None):
        raise DomainError("give exactly one of --input or --pair")
    moment = args.moment
    if args.input is not None:
        if args.input == "-":
            theta, values = read_samples_csv(sys.stdin)
        else:
            with open(args.input, encoding="utf-8", newline="") as fh:
                theta, values = read_samples_csv(fh)
        grid = make_grid(len(theta))
        F = GridFunction(grid, values)
    else:
        pair = pair_catalog(args.pair, mu)
        grid = make_grid(args.n)
        F = add_noise(GridFunction.sample(grid, pair.F), NoiseSpec(args.sigma, args.seed))
        needs = args.method == "reconstruct" or (args.method == "family" and args.alpha != 0)
        if moment is None and needs:
            moment = pair_moment(pair)

    status = 0
    if args.range_tol is not None:
        rf = abs(range_functional_d(F, mu))
        if rf > args.range_tol * F.norm():
            print(f"range functional {rf:.3e} exceeds {args.range_tol:g} * ||F||", file=sys.stderr)
            status = 1

    if args.method == "invert_d":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RangeWarning)
            rec = invert_d(F, mu, range_tol=None)
    elif args.method == "invert_m":
        rec = invert_m(F, mu)
    elif args.method == "reconstruct":
        if moment is None:
            raise DomainError("--method reconstruct needs --moment with --input")
        rec = reconstruct_with_moment(F, mu, moment)
    else:
        rec = invert_family(F, mu, _family_from(args), moment)

    def write(stream):
        if args.format == "json":
            json.dump({
                "mu": [mu.real, mu.imag], "n": grid.N, "method": args.method,
                "theta": grid.theta.tolist(),
                "f_rec": [[v.real, v.imag] for v in rec.values],
            }, stream)
            stream.write("\n")
        else:
            write_samples_csv(stream, OUT_HEADER,
                              ((th, v.real, v.imag) for th, v in zip(grid.theta, rec.values)))

    _emit(args, write)
    return status


def _cmd_experiment(args) -> int:
    family = _family_from(args) if args.method == "family" else None
    rep = run_experiment(args.pair, args.mu, args.n, NoiseSpec(args.sigma, args.seed), args.method,
                         family=family, moment=args.moment)
    ok = True
    if args.max_nsr is not None:
        ok = bool(np.isfinite(rep.nsr_percent) and rep.nsr_percent < args.max_nsr)

    def write(stream):
        if args.format == "json":
            json.dump(rep.to_dict(samples=not args.no_samples), stream)
            stream.write("\n")
        else:
            write_samples_csv(stream, ("theta", "true_re", "true_im", "rec_re", "rec_im"),
                              ((th, a.real, a.imag, b.real, b.imag)
                               for th, a, b in zip(rep.theta, rep.truth, rep.rec)))

    _emit(args, write)
    nsr = f"{rep.nsr_percent:.2f}%" if np.isfinite(rep.nsr_percent) else "undefined"
    print(f"{rep.pair} mu={format_complex(rep.mu)} N={rep.N} sigma={rep.noise.sigma:g} "
          f"method={rep.method}: nsr {nsr}, mse {rep.mse:.3e}", file=sys.stderr)
    return 0 if ok else 1


def _cmd_pairs(args) -> int:
    rows = []
    for name in catalog_names():
        p = pair_catalog(name, args.mu)
        rows.append({"name": p.name, "in_ld": p.in_ld, "formula": p.formula, "notes": p.notes})

    def write(stream):
        if args.format == "json":
            json.dump(rows, stream, indent=2)
            stream.write("\n")
        else:
            w = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)

    _emit(args, write)
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coshfht", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")

    def inversion(p):
        p.add_argument("--method", choices=METHODS, default="invert_d")
        p.add_argument("--alpha", type=_complex_arg, default=0j)
        p.add_argument("--beta", type=_complex_arg, default=1 + 0j)
        p.add_argument("--gamma", type=_complex_arg, default=1 + 0j)
        p.add_argument("--moment", type=_complex_arg, default=None,
                       help="(1/pi) int cosh(mu t) f(t) dt, for reconstruct and alpha != 0")

    p = sub.add_parser("identities", help="check the identity catalog")
    p.add_argument("--mu", type=_complex_arg, action="append",
                   help=f"repeatable; default {', '.join(DEFAULT_MU_SET)}")
    p.add_argument("--ids", default=None, help="comma-separated identity ids")
    p.add_argument("--tol", type=float, default=None, help="override per-identity tolerances")
    p.add_argument("--n-max", type=int, default=6, help="largest n for the Chebyshev identities")
    common(p)
    p.set_defaults(run=_cmd_identities)

    p = sub.add_parser("invert", help="invert transform samples")
    p.add_argument("--mu", type=_complex_arg, required=True)
    p.add_argument("--input", "-i", default=None, help="CSV with columns theta,F_re,F_im ('-' for stdin)")
    p.add_argument("--pair", default=None, help="generate F from a catalog pair instead")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--range-tol", type=float, default=None,
                   help="fail when the range functional exceeds this multiple of ||F||")
    inversion(p)
    common(p)
    p.set_defaults(run=_cmd_invert)

    p = sub.add_parser("experiment", help="run one experiment")
    p.add_argument("--pair", default="pair45")
    p.add_argument("--mu", type=_complex_arg, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nsr", type=float, default=None, help="fail when nsr (percent) is not below this")
    p.add_argument("--no-samples", action="store_true", help="omit per-node samples from JSON")
    inversion(p)
    common(p, fmt_default="json")
    p.set_defaults(run=_cmd_experiment)

    p = sub.add_parser("pairs", help="list catalog pairs")
    p.add_argument("--mu", type=_complex_arg, default=1 + 0j)
    common(p)
    p.set_defaults(run=_cmd_pairs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ConvergenceError as exc:
        print(f"coshfht {args.command}: {exc}", file=sys.stderr)
        return 1
    except (DomainError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"coshfht {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
