"""Command-line front end.

Exit codes: 0 success, 1 domain error (the computation is not defined for
these inputs, e.g. lambda <= 0, a surviving pole, no contraction), 2 usage
error (bad flags or values).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import BreatherError
from .presets import PRESETS, preset_coefficient

MAX_G = 15
_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

EPILOG = """\
exit codes:
  0  success
  1  domain error: lambda <= 0, surviving pole at an evaluation point,
     no contraction, domain too short, spectral gap violated, non-odd g
  2  usage error: unknown flag, malformed value, bad config file

config files (--config FILE) hold one "key = value" per line, keys named
like the long flags without dashes (e.g. "eps = 0.3", "g3 = -1/6",
"symbolic = g5,g7"); '#' starts a comment.  Flags on the command line
override the file.
"""


class UsageError(Exception):
    pass


def exact(text: str) -> Fraction:
    """Parse an exact rational such as ``-1/6``; decimals are refused."""
    t = text.strip()
    if not _FRACTION_RE.match(t):
        raise argparse.ArgumentTypeError(f"{text!r} is not an exact fraction (write e.g. -1/6)")
    return Fraction(t)


def exact_list(text: str) -> list[Fraction]:
    return [exact(t) for t in text.split(",") if t.strip()]


def symbol_list(text: str) -> list[int]:
    out = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        m = re.fullmatch(r"g?(\d+)", t)
        if not m or int(m.group(1)) < 2:
            raise argparse.ArgumentTypeError(f"bad symbol {t!r} (expected g5, g7, ...)")
        out.append(int(m.group(1)))
    return out


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _fix_negative_values(argv: list[str]) -> list[str]:
    """Glue ``--flag -1/6`` into ``--flag=-1/6`` so argparse does not read
    the value as an option."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) and re.match(r"^-\d", argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _read_config(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    argv = []
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        k, v = (x.strip() for x in line.split("=", 1))
        flag = "--" + k.replace("_", "-")
        if v.lower() in ("true", "yes", "on"):
            argv.append(flag)
        elif v.lower() in ("false", "no", "off"):
            continue
        else:
            argv.append(f"{flag}={v}")
    return argv


def _add_g_flags(p, exact_only=True):
    grp = p.add_argument_group("coefficients (override the preset)")
    for m in range(2, MAX_G + 1):
        grp.add_argument(f"--g{m}", type=exact, default=None, metavar="P/Q")


def _add_output(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")


def _add_solver_flags(p):
    p.add_argument("--eps", type=float, default=0.3)
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--a", type=float, default=0.05)
    p.add_argument("--J", type=int, default=9)
    p.add_argument("--Xi", type=float, default=12.0)
    p.add_argument("--N", type=int, default=1200)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="breather",
        description="Breather series, pole conditions, majorant checks and decaying-solution solver.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", default=None, help="key = value file with defaults for these flags")
        return p

    p = cmd("eps-series", "small-amplitude series in powers of eps")
    p.add_argument("--preset", choices=PRESETS + ("custom",), default="sine")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    _add_g_flags(p)
    _add_output(p)

    p = cmd("exp-series", "series in exp(-l xi) with symbolic coefficients")
    p.add_argument("--preset", choices=PRESETS + ("custom",), default=None)
    p.add_argument("--odd", action="store_true", help="odd custom g (with --g3 and --symbolic)")
    p.add_argument("--symbolic", type=symbol_list, default=[])
    p.add_argument("--L", type=int, default=5)
    p.add_argument("--normalization", choices=("unit", "eps"), default="unit")
    _add_g_flags(p)
    _add_output(p)

    p = cmd("poles", "candidate pole locations w0 = (1-q^2)/(l^2-q^2)")
    p.add_argument("--L", type=int, default=9)
    _add_output(p)

    p = cmd("conditions", "leading residue condition at every pole")
    p.add_argument("--preset", choices=PRESETS + ("custom",), default=None)
    p.add_argument("--odd", action="store_true")
    p.add_argument("--symbolic", type=symbol_list, default=[])
    p.add_argument("--L", type=int, default=9)
    p.add_argument("--l-min", type=int, default=2)
    p.add_argument("--bound", type=exact, default=None, help="only poles with |w0| <= bound")
    p.add_argument("--max-symbols", type=int, default=3)
    p.add_argument("--max-L", type=int, default=9, help="cap for symbolic runs")
    _add_g_flags(p)
    _add_output(p)

    p = cmd("majorant", "exact domination check against the sinh-Gordon series")
    p.add_argument("--preset", choices=("sine", "sinh", "linear", "custom"), default="sinh")
    p.add_argument("--eps", type=exact_list, default=[Fraction(1, 4)], help="comma list, e.g. 1/10,1/4")
    p.add_argument("--L", type=int, default=5)
    _add_g_flags(p)
    _add_output(p)

    for name, help_ in (("solve", "decaying solution by fixed-point iteration"),
                        ("compare", "solver trajectory vs exp-series partial sum")):
        p = cmd(name, help_)
        p.add_argument("--preset", choices=PRESETS + ("custom",), default="sinh")
        _add_solver_flags(p)
        _add_g_flags(p)
        p.add_argument("--max-m", type=int, default=15)
        p.add_argument("--no-halving", action="store_true")
        if name == "solve":
            p.add_argument("--trajectory", default=None, help="write the trajectory dump here")
            p.add_argument("--manifest", default=None, help="write the run manifest (JSON) here")
        else:
            p.add_argument("--L", type=int, default=9)
            p.add_argument("--window", default="5,10")
        _add_output(p)
    return ap


def parse_args(argv: list[str]) -> argparse.Namespace:
    argv = _fix_negative_values(list(argv))
    # splice config-file flags right after the subcommand so explicit flags win
    if "--config" in argv or any(a.startswith("--config=") for a in argv):
        cfg_path = None
        rest = []
        i = 0
        while i < len(argv):
            a = argv[i]
            if a == "--config" and i + 1 < len(argv):
                cfg_path = argv[i + 1]
                i += 2
                continue
            if a.startswith("--config="):
                cfg_path = a.split("=", 1)[1]
                i += 1
                continue
            rest.append(a)
            i += 1
        extra = _fix_negative_values(_read_config(cfg_path)) if cfg_path else []
        cmd_idx = next((k for k, a in enumerate(rest) if not a.startswith("-")), None)
        if cmd_idx is None:
            raise UsageError("missing command")
        argv = rest[: cmd_idx + 1] + extra + rest[cmd_idx + 1:]
    return build_parser().parse_args(argv)


# ---------------------------------------------------------------------------
# coefficient assembly
# ---------------------------------------------------------------------------

def _overrides(ns) -> dict[int, Fraction]:
    return {m: getattr(ns, f"g{m}") for m in range(2, MAX_G + 1) if getattr(ns, f"g{m}", None) is not None}


def _numeric_coeffs(ns, max_m: int = MAX_G) -> dict[int, Fraction]:
    base = {}
    if ns.preset and ns.preset != "custom":
        base = {m: preset_coefficient(ns.preset, m) for m in range(2, max_m + 1)}
    base.update(_overrides(ns))
    return {m: v for m, v in base.items() if v}


def _gspec(ns, max_m: int):
    from .exp_series import GSpec

    sym = set(ns.symbolic or [])
    if ns.odd and any(m % 2 == 0 for m in sym):
        raise UsageError("--odd with an even symbolic index")
    num = {m: v for m, v in _numeric_coeffs(ns, max_m).items() if m not in sym}
    if ns.odd:
        bad = [m for m, v in num.items() if m % 2 == 0 and v]
        if bad:
            raise UsageError(f"--odd but g{bad[0]} is nonzero")
    return GSpec(num, frozenset(sym), max_m, ns.preset if ns.preset not in (None, "custom") else None)


def _godd(ns):
    from .hs_solver import GOdd

    if ns.preset == "phi4":
        raise BreatherError("preset phi4 is not odd: the decaying-solution construction needs an odd g")
    coeffs = _numeric_coeffs(ns, ns.max_m)
    even = [m for m, v in coeffs.items() if m % 2 == 0 and v]
    if even:
        raise BreatherError(f"g{even[0]} != 0: the decaying-solution construction needs an odd g")
    return GOdd(coeffs, ns.preset if ns.preset != "custom" else None)


def _solver_cfg(ns):
    from .hs_solver import SolverConfig

    return SolverConfig(ns.eps, ns.s, ns.beta, ns.a, ns.J, ns.Xi, ns.N, ns.max_iter, ns.tol)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _emit(ns, text: str | None, data) -> str:
    if ns.format == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    return text


def cmd_eps_series(ns) -> str:
    from .eps_series import GNumeric, check_invariants, dump_series, eps_series

    coeffs = _numeric_coeffs(ns)
    g = GNumeric.from_dict(coeffs, ns.preset if ns.preset != "custom" else None)
    if ns.order < 1:
        raise UsageError("--order must be >= 1")
    ser = eps_series(g, max(ns.order, 3), ns.sign)
    check_invariants(ser)
    text = dump_series(ser)
    if ns.order < 3:
        keep = [ln for ln in text.splitlines() if ln.startswith("#") or int(ln.split()[0][2:]) <= ns.order]
        keep[0] = keep[0].replace(f"orders={ser.depth}", f"orders={ns.order}")
        text = "\n".join(keep) + "\n"
    data = {
        "preset": g.name or "custom",
        "lambda": str(ser.lam),
        "sign": ser.sign,
        "orders": [
            {"k": c.k, "pending_sigma": c.pending_sigma,
             "harmonics": {str(q): c.a(q).text() for q in c.harmonics.harmonics()}}
            for c in ser.orders if c.k <= ns.order
        ],
    }
    return _emit(ns, text, data)


def cmd_exp_series(ns) -> str:
    from .exp_series import dump_exp, expand_exp

    g = _gspec(ns, max(ns.L, 3))
    ser = expand_exp(g, ns.L, ns.normalization)
    data = {
        "preset": g.name or "custom",
        "symbolic": [f"g{m}" for m in sorted(g.symbolic)],
        "normalization": ns.normalization,
        "coefficients": [
            {"l": c.l, "eps_power": c.eps_power, "harmonics": {str(q): c.coeff(q).text() for q in c.harmonics.harmonics()}}
            for c in ser.coeffs
        ],
    }
    return _emit(ns, dump_exp(ser), data)


def cmd_poles(ns) -> str:
    from .exp_series import pole_candidates

    rows = pole_candidates(ns.L)
    lines = ["l q w0 eps provenance"]
    for r in rows:
        prov = ",".join(f"({l},{q})" for l, q in r.provenance)
        lines.append(f"{r.l} {r.q} {r.w0} {r.eps_label} {prov}")
    data = [{"l": r.l, "q": r.q, "w0": str(r.w0), "eps_label": r.eps_label,
             "provenance": [list(p) for p in r.provenance]} for r in rows]
    return _emit(ns, "\n".join(lines) + "\n", data)


def cmd_conditions(ns) -> str:
    from .exp_series import all_conditions, expand_exp

    if ns.preset is None and not ns.odd and not ns.symbolic and not _overrides(ns):
        raise UsageError("give --preset, or --odd/--symbolic with coefficient flags")
    if ns.symbolic:
        if len(ns.symbolic) > ns.max_symbols:
            raise UsageError(f"{len(ns.symbolic)} symbols exceed --max-symbols={ns.max_symbols}")
        if ns.L > ns.max_L:
            raise UsageError(f"--L {ns.L} exceeds --max-L={ns.max_L} for symbolic runs")
    g = _gspec(ns, max(ns.L, 3))
    ser = expand_exp(g, ns.L)
    rows = all_conditions(ser, l_min=ns.l_min)
    if ns.bound is not None:
        rows = [r for r in rows if abs(r.w0) <= ns.bound]
    lines = ["l q w0 eps order condition"]
    for r in rows:
        lines.append(f"{r.l} {r.q} {r.w0} {r.eps_label} {r.order} {r.text()}")
    return _emit(ns, "\n".join(lines) + "\n", [r.as_dict() for r in rows])


def cmd_majorant(ns) -> str:
    from .exp_series import GSpec
    from .majorant import dominate

    L = ns.L
    nums = _numeric_coeffs(ns, 2 * L + 1)
    g = GSpec(nums, max_m=2 * L + 1, name=None if ns.preset == "custom" else ns.preset)
    chunks, data = [], []
    for e in ns.eps:
        rep = dominate(g, e, L)
        chunks.append(f"# eps={e} L={L} verdict={'true' if rep.verdict else 'false'} "
                      f"equal={'true' if rep.equal_everywhere else 'false'}\n" + rep.table())
        data.append({
            "eps": str(e), "L": L, "verdict": rep.verdict, "equal_everywhere": rep.equal_everywhere,
            "entries": [{"l": x.l, "s": x.s, "abs_a": str(abs(x.a)), "abar": str(x.abar)} for x in rep.entries],
        })
    return _emit(ns, "".join(chunks), data)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _timestamp() -> str:
    sde = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(sde) if sde and sde.isdigit() else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def cmd_solve(ns) -> str:
    from .hs_solver import residual, solve_fixed_point

    g = _godd(ns)
    cfg = _solver_cfg(ns)
    T, d = solve_fixed_point(g, cfg, auto_halve=not ns.no_halving)
    dump = T.dump()
    diag = d.as_dict()
    diag["residual"] = residual(T, g)
    manifest = {
        "command": "solve",
        "preset": ns.preset,
        "parameters": {
            "eps": cfg.eps, "s": cfg.s, "beta": cfg.beta, "a": cfg.a, "J": cfg.J, "Xi": cfg.Xi,
            "N": cfg.N, "max_iter": cfg.max_iter, "tol": cfg.tol,
            "g": {f"g{m}": str(v) for m, v in g.coeffs.items()},
        },
        "tool_version": __version__,
        "timestamp": _timestamp(),
        "diagnostics": diag,
        "output_digests": {"trajectory": _digest(dump)},
    }
    if ns.trajectory:
        with open(ns.trajectory, "w", encoding="utf-8") as fh:
            fh.write(dump)
    mtext = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    if ns.manifest:
        with open(ns.manifest, "w", encoding="utf-8") as fh:
            fh.write(mtext)
    if ns.format == "json":
        return mtext
    lines = [
        f"converged={'true' if d.converged else 'false'} iterations={d.iterations} a={d.a_used!r}",
        f"final_distance={diag['final_distance']:.6e} max_ratio={(d.max_ratio or 0.0):.6e}",
        f"residual={diag['residual']:.6e} slope_leading={d.slope_leading!r}",
        f"trajectory_sha256={manifest['output_digests']['trajectory']}",
    ]
    return "\n".join(lines) + "\n"


def cmd_compare(ns) -> str:
    from .hs_solver import compare_with_series, solve_fixed_point

    g = _godd(ns)
    cfg = _solver_cfg(ns)
    try:
        lo, hi = (float(x) for x in ns.window.split(","))
    except ValueError as exc:
        raise UsageError("--window expects 'lo,hi'") from exc
    T, d = solve_fixed_point(g, cfg, auto_halve=not ns.no_halving)
    rep = compare_with_series(T, g, ns.L, (lo, hi))
    lines = [
        f"# amplitude={float(rep.amplitude)!r} xi_star={float(rep.xi_star)!r} max_rel={rep.max_rel:.6e}",
        "# xi rel",
    ]
    lines += ["%.17g %.17g" % (x, r) for x, r in zip(rep.xi, rep.rel)]
    data = {"amplitude": float(rep.amplitude), "xi_star": float(rep.xi_star), "window": [lo, hi],
            "max_rel": float(rep.max_rel),
            "iterations": d.iterations}
    return _emit(ns, "\n".join(lines) + "\n", data)


COMMANDS = {
    "eps-series": cmd_eps_series,
    "exp-series": cmd_exp_series,
    "poles": cmd_poles,
    "conditions": cmd_conditions,
    "majorant": cmd_majorant,
    "solve": cmd_solve,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parse_args(argv)
    except UsageError as exc:
        print(f"breather: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        out = COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"breather: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BreatherError, ValueError, ZeroDivisionError) as exc:
        print(f"breather: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
