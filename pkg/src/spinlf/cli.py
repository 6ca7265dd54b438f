"""Command-line front end.

Every subcommand prints one JSON object with sorted keys on standard output.
Exit status: 0 on success, 1 for a domain error (bad config, exceeded budget,
missing coefficient, ...), 2 for a usage error.  Errors are printed as
{"error": {"code", "message", "context"}}.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import eisenstein, group_w, local_factors, lseries, restriction, scalars
from .jordan import HermMatrix
from .quaternion import BudgetExceeded, QuatAlgebra
from .scalars import CycloValue, DirichletChar, GaussianRational, frac, frac_str


class CliError(Exception):
    def __init__(self, code: str, message: str, context=None, status: int = 1):
        super().__init__(message)
        self.code = code
        self.message = message
        self.context = context or {}
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        code = "unknown_command" if "invalid choice" in message else "usage"
        raise CliError(code, message, {"prog": self.prog}, status=2)


# ---------------------------------------------------------------------------
# value formatting and parsing


def value_json(v):
    if isinstance(v, CycloValue):
        return frac_str(v.to_fraction()) if v.is_rational() else v.to_json()
    if isinstance(v, GaussianRational):
        return gaussian_str(v)
    if isinstance(v, (Fraction, int)):
        return frac_str(Fraction(v))
    return v


def gaussian_str(z: GaussianRational) -> str:
    re_, im = Fraction(z.re), Fraction(z.im)
    if im == 0:
        return frac_str(re_)
    im_s = "i" if im == 1 else "-i" if im == -1 else f"{frac_str(im)}i"
    if re_ == 0:
        return im_s
    return f"{frac_str(re_)}{'' if im_s.startswith('-') else '+'}{im_s}"


_NUM = r"\d+(?:/\d+)?"


def parse_gaussian(s) -> GaussianRational:
    """'3', '1/2+3i', '-i', '2i' -> GaussianRational."""
    if isinstance(s, (int, Fraction)):
        return GaussianRational(Fraction(s), 0)
    s = str(s).replace(" ", "")
    m = re.fullmatch(rf"([+-]?)({_NUM})?i", s)
    if m:
        mag = frac(m.group(2)) if m.group(2) else Fraction(1)
        return GaussianRational(0, -mag if m.group(1) == "-" else mag)
    m = re.fullmatch(rf"([+-]?{_NUM})([+-])({_NUM})?i", s)
    if m:
        mag = frac(m.group(3)) if m.group(3) else Fraction(1)
        return GaussianRational(frac(m.group(1)), -mag if m.group(2) == "-" else mag)
    if re.fullmatch(rf"[+-]?{_NUM}", s):
        return GaussianRational(frac(s), 0)
    raise CliError("invalid_input", f"cannot read {s!r} as a Gaussian rational")


def parse_char(spec) -> DirichletChar:
    """'trivial', 'M:order:g=e,g=e' (generator images as exponents of
    zeta_order), or the JSON object written by DirichletChar.to_json."""
    if spec is None or spec == "trivial":
        return DirichletChar.trivial()
    if isinstance(spec, dict):
        return DirichletChar.from_json(spec)
    parts = str(spec).split(":")
    try:
        modulus, order = int(parts[0]), int(parts[1])
        images = {}
        if len(parts) > 2 and parts[2]:
            for item in parts[2].split(","):
                g, e = item.split("=")
                images[int(g)] = int(e)
        return DirichletChar(modulus, order, images)
    except (IndexError, ValueError) as exc:
        raise CliError("invalid_input", f"bad character spec {spec!r}: {exc}") from exc


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise CliError("invalid_input", f"expected comma-separated integers, got {s!r}") from exc


def _load_json(arg: str, what: str):
    """Inline JSON, a path to a JSON file, or '-' for standard input."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError("invalid_input", f"cannot read {what}: {exc}", {"source": arg}) from exc


# ---------------------------------------------------------------------------
# configuration


DEFAULT_CONFIG = {"algebra": "hamilton", "char": "trivial", "level": 1, "r": 6, "budget": None, "T": None}


class Config:
    def __init__(self, raw: dict):
        self.raw = raw
        try:
            alg = raw.get("algebra", "hamilton")
            self.alg = QuatAlgebra.named(alg) if isinstance(alg, str) else QuatAlgebra.from_json(alg)
            self.chi = parse_char(raw.get("char", "trivial"))
            self.level = int(raw.get("level", 1))
            self.r = int(raw.get("r", 6))
            budget = raw.get("budget")
            self.budget = None if budget is None else int(budget)
            self.T = raw.get("T")
        except CliError as exc:
            raise CliError("bad_config", exc.message, {"field": "char"}) from exc
        except (ValueError, TypeError, KeyError, ArithmeticError) as exc:
            raise CliError("bad_config", f"config rejected: {exc}") from exc
        if self.level < 1:
            raise CliError("bad_config", "level must be positive", {"field": "level"})
        if self.budget is not None and self.budget < 1:
            raise CliError("bad_config", "budget must be positive", {"field": "budget"})

    @classmethod
    def load(cls, path: str | None) -> "Config":
        raw = dict(DEFAULT_CONFIG)
        if path:
            try:
                with open(path, encoding="utf-8") as fh:
                    loaded = json.load(fh)
            except OSError as exc:
                raise CliError("bad_config", f"cannot open config: {exc}", {"path": path}) from exc
            except json.JSONDecodeError as exc:
                raise CliError("bad_config", f"config is not valid JSON: {exc}", {"path": path}) from exc
            if not isinstance(loaded, dict):
                raise CliError("bad_config", "config must be a JSON object", {"path": path})
            raw.update(loaded)
        return cls(raw)

    def budget_for(self, flag: int | None) -> int:
        """Flag beats SPINLF_BUDGET, which beats the config file."""
        if flag is not None:
            return flag
        if os.environ.get("SPINLF_BUDGET"):
            return local_factors.budget_from_env()
        if self.budget is not None:
            return self.budget
        return local_factors.budget_from_env()


def _weight(args, cfg: Config) -> int:
    r = args.r if args.r is not None else cfg.r
    if 2 * r <= 10:
        raise CliError("invalid_input", f"weight 2r = {2 * r} must exceed 10", {"r": r})
    return r


def _char(args, cfg: Config) -> DirichletChar:
    return parse_char(args.char) if args.char is not None else cfg.chi


# ---------------------------------------------------------------------------
# subcommands


def cmd_bernoulli(args, cfg):
    if args.char is None or args.char == "trivial":
        return {"value": frac_str(scalars.bernoulli_recurrence(args.n))}
    chi = parse_char(args.char)
    return {"char": chi.to_json(), "value": value_json(scalars.gen_bernoulli(chi, args.n))}


def cmd_local_factor(args, cfg):
    vals = _int_list(args.vals)
    prof = local_factors.ValProfile(args.rank, args.ell, tuple(vals))
    res = local_factors.local_factor(prof, _weight(args, cfg), _char(args, cfg), cfg.alg.D_B)
    out = res.to_json()
    out["poly_at_u"] = value_json(res.poly(res.u))
    return out


def cmd_oracle_sum(args, cfg):
    if (args.vals is None) == (args.h is None):
        raise CliError("usage", "oracle-sum needs exactly one of --vals and --h", status=2)
    if args.h is not None:
        h = _herm_from_json(_load_json(args.h, "h"), cfg.alg)
        try:
            prof = local_factors.profile_of_diagonal(h, args.rank, args.ell)
        except ValueError:
            prof = None  # not diagonal: no closed form to compare with
    else:
        vals = _int_list(args.vals)
        if len(vals) != args.rank:
            raise CliError("invalid_input", f"rank {args.rank} needs {args.rank} valuations", {"vals": vals})
        diag = [args.ell**v for v in vals] + [0] * (3 - args.rank)
        h = HermMatrix.diag(cfg.alg, *diag)
        prof = local_factors.ValProfile(args.rank, args.ell, tuple(vals))
    try:
        value = local_factors.interior_sum_oracle(
            args.rank, args.ell, args.m, h, alg=cfg.alg, budget=cfg.budget_for(args.budget)
        )
    except ValueError as exc:
        raise CliError("invalid_input", str(exc)) from exc
    out = {
        "rank": args.rank,
        "ell": args.ell,
        "m": args.m,
        "oracle": str(value),
        "ramified": cfg.alg.D_B % args.ell == 0,
    }
    if prof is not None:
        closed = local_factors.closed_series(prof).coefficient(args.m)
        out.update(vals=list(prof.vals), closed_form=value_json(closed), agree=closed == CycloValue.rational(value))
    return out


def _herm_from_json(obj, alg) -> HermMatrix:
    try:
        return HermMatrix.from_json(alg, obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError("invalid_input", f"bad Hermitian matrix: {exc}") from exc


def cmd_kernel_coeff(args, cfg):
    h = _herm_from_json(_load_json(args.h, "h"), cfg.alg)
    k = eisenstein.kernel_coeff(h, _weight(args, cfg), _char(args, cfg), convention=args.convention)
    return k.to_json()


def cmd_restrict(args, cfg):
    entries = _load_json(args.coeffs, "coefficients")
    if not isinstance(entries, list):
        raise CliError("invalid_input", "coefficients must be a list of {h, a}")
    coeffs = {}
    for n, e in enumerate(entries):
        try:
            coeffs[HermMatrix.from_json(cfg.alg, e["h"])] = CycloValue.from_json(e["a"])
        except (KeyError, ValueError, TypeError) as exc:
            raise CliError("invalid_input", f"bad coefficient entry: {exc}", {"pointer": f"/{n}"}) from exc
    targets = [restriction.SiegelIndex(t) for t in _load_json(args.targets, "targets")]
    level = args.level if args.level is not None else cfg.level
    policy = "zero-fill" if args.zero_fill else "strict"
    res = restriction.restrict_expansion(coeffs, targets, level, cfg.alg, policy=policy)
    return canonical_expansion({t.key(): value_json(v) for t, v in res.items()})


def cmd_euler_factor(args, cfg):
    bs = [frac(x) for x in args.satake.split(",")]
    if len(bs) != 4:
        raise CliError("invalid_input", "--satake needs four values b0,b1,b2,b3")
    chi_q = CycloValue.from_json(args.charq)
    P = lseries.spin_euler_factor(lseries.SatakeParams(*bs), chi_q)
    return {"poly": str(P), "coeffs": P.to_json(), "degree": P.degree}


def _satake_table(obj) -> dict:
    out = {}
    for q, vals in obj.items():
        if len(vals) != 4:
            raise CliError("invalid_input", f"Satake parameters at {q} need four entries", {"pointer": f"/{q}"})
        out[int(q)] = lseries.SatakeParams(*(CycloValue.from_json(v) for v in vals))
    return out


def cmd_partial_l(args, cfg):
    params = _satake_table(_load_json(args.params, "Satake parameters"))
    level = args.level if args.level is not None else cfg.level
    v = lseries.partial_euler_product(params, _char(args, cfg), args.s, args.bound, level)
    return {"value": value_json(v), "s": args.s, "bound": args.bound, "level": level}


def cmd_evdokimov(args, cfg):
    T = _load_json(args.T, "T") if args.T is not None else cfg.T
    if T is None:
        raise CliError("invalid_input", "no T given on the command line or in the config")
    oracle = lseries.CoeffOracle.from_json(_load_json(args.coeffs, "coefficients"), default=args.default)
    lam_bound, det_bound = _int_list(args.bounds)
    level = args.level if args.level is not None else cfg.level
    v = lseries.evdokimov_partial(T, oracle, _char(args, cfg), args.s, args.r if args.r is not None else cfg.r, lam_bound, det_bound, level)
    return {"value": value_json(v), "bounds": [lam_bound, det_bound], "s": args.s}


def cmd_jfactor(args, cfg):
    obj = _load_json(args.Z, "Z")
    diag = [parse_gaussian(x) for x in obj["diag"]]
    off = obj.get("offdiag")
    if off is None:
        a = [cfg.alg.zero(GaussianRational(0)) for _ in range(3)]
    else:
        a = [cfg.alg.from_order_coords([parse_gaussian(x) for x in row]) for row in off]
    Z = HermMatrix(diag, a)
    g = group_w.special_elements(args.element, args.M, cfg.alg)
    try:
        j = group_w.j_factor(g, Z)
    except group_w.SingularPosition as exc:
        raise CliError("singular_point", str(exc)) from exc
    return {"element": args.element, "M": args.M, "j": gaussian_str(j)}


def cmd_verify(args, cfg):
    from .verify import run_suite

    try:
        return run_suite(args.suite)
    except KeyError as exc:
        raise CliError("usage", f"unknown suite {args.suite!r}", status=2) from exc


def _pointer(key: str) -> str:
    return "/" + key.replace("~", "~0").replace("/", "~1")


def canonical_expansion(obj) -> dict:
    """Parse a Siegel q-expansion {t-key: coefficient} and serialize it canonically:
    keys rewritten from the parsed matrix, rationals reduced, keys sorted."""
    if not isinstance(obj, dict):
        raise CliError("schema", "expansion must be a JSON object", {"pointer": ""})
    out = {}
    for key, val in obj.items():
        try:
            t = restriction.SiegelIndex.from_key(key)
        except (ValueError, ZeroDivisionError, IndexError) as exc:
            raise CliError("schema", f"bad index key: {exc}", {"pointer": _pointer(key)}) from exc
        try:
            v = CycloValue.from_json(val)
        except (ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
            raise CliError("schema", f"bad coefficient: {exc}", {"pointer": _pointer(key)}) from exc
        k = t.key()
        if k in out:
            raise CliError("schema", "two keys name the same index", {"pointer": _pointer(key)})
        out[k] = value_json(v)
    return dict(sorted(out.items()))


def cmd_roundtrip(args, cfg):
    return canonical_expansion(_load_json(args.input, "expansion"))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinlf", description="Exact computations for Spin L-functions on GSp6.")
    p.add_argument("--config", help="JSON config file (algebra, char, level, r, budget, T)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("bernoulli", help="Bernoulli numbers B_n or B_{n,chi}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--char")
    s.set_defaults(fn=cmd_bernoulli)

    s = sub.add_parser("local-factor", help="closed-form local polynomial and its S-factor")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--vals", required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--char")
    s.set_defaults(fn=cmd_local_factor)

    s = sub.add_parser("oracle-sum", help="brute-force character sum at a diagonal index")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--vals", help="valuations of a diagonal index, e.g. 0,1")
    s.add_argument("--h", help="Hermitian index as JSON (inline, file or -)")
    s.add_argument("--budget", type=int)
    s.set_defaults(fn=cmd_oracle_sum)

    s = sub.add_parser("kernel-coeff", help="rational kernel of an Eisenstein Fourier coefficient")
    s.add_argument("--h", required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--char")
    s.add_argument("--convention", choices=eisenstein.CONVENTIONS, default="display")
    s.set_defaults(fn=cmd_kernel_coeff)

    s = sub.add_parser("restrict", help="restrict a q-expansion to the Siegel half-space")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--targets", required=True)
    s.add_argument("--level", type=int)
    s.add_argument("--zero-fill", action="store_true")
    s.set_defaults(fn=cmd_restrict)

    s = sub.add_parser("euler-factor", help="degree-8 Spin Euler factor")
    s.add_argument("--satake", required=True)
    s.add_argument("--charq", default="1")
    s.set_defaults(fn=cmd_euler_factor)

    s = sub.add_parser("partial-l", help="truncated Spin Euler product at an integer")
    s.add_argument("--params", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--bound", type=int)
    s.add_argument("--level", type=int)
    s.add_argument("--char")
    s.set_defaults(fn=cmd_partial_l)

    s = sub.add_parser("evdokimov", help="truncated Fourier-coefficient Dirichlet series")
    s.add_argument("--T")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--bounds", required=True)
    s.add_argument("--level", type=int)
    s.add_argument("--char")
    s.add_argument("--default", help="value of absent coefficients (default: absent is an error)")
    s.set_defaults(fn=cmd_evdokimov)

    s = sub.add_parser("jfactor", help="automorphy factor of a special element")
    s.add_argument("--element", required=True, help="iota0..iota3 or w")
    s.add_argument("--M", type=int, default=1)
    s.add_argument("--Z", required=True)
    s.set_defaults(fn=cmd_jfactor)

    s = sub.add_parser("verify", help="run an invariant suite")
    s.add_argument("--suite", default="all")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("roundtrip", help="canonicalize a Siegel q-expansion")
    s.add_argument("--input", required=True)
    s.set_defaults(fn=cmd_roundtrip)
    return p


def _emit(obj, stream) -> None:
    stream.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def dispatch(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliError("usage", "no command given", {"known": sorted(_commands(parser))}, 2)
        cfg = Config.load(args.config)
        out = args.fn(args, cfg)
        _emit(out, stdout)
        if args.command == "verify" and out.get("failed"):
            return 1
        return 0
    except CliError as exc:
        _emit({"error": {"code": exc.code, "message": exc.message, "context": exc.context}}, stdout)
        return exc.status
    except BudgetExceeded as exc:
        _emit({"error": {"code": "budget_exceeded", "message": str(exc), "context": {}}}, stdout)
        return 1
    except scalars.ParityError as exc:
        _emit({"error": {"code": "parity", "message": str(exc), "context": {}}}, stdout)
        return 1
    except restriction.MissingCoefficient as exc:
        ctx = {"missing": len(exc.missing)}
        _emit({"error": {"code": "missing_coefficient", "message": str(exc), "context": ctx}}, stdout)
        return 1
    except lseries.MissingOracleEntry as exc:
        _emit({"error": {"code": "missing_coefficient", "message": str(exc), "context": {"t": exc.key}}}, stdout)
        return 1
    except lseries.EulerPole as exc:
        _emit({"error": {"code": "pole", "message": str(exc), "context": {"q": exc.q}}}, stdout)
        return 1
    except (ValueError, ArithmeticError, KeyError, TypeError) as exc:
        _emit({"error": {"code": "invalid_input", "message": str(exc), "context": {}}}, stdout)
        return 1


def _commands(parser) -> set[str]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return set(action.choices)
    return set()


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
