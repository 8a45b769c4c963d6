"""Command-line entry point: ``dqs eval``, ``dqs verify ...`` and ``dqs dump ...``.

Exit status is 0 when every check passes, 1 when any check fails and 2 on
usage errors. Reports go to stdout, log lines to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Optional, Sequence

from .config import OUTPUT_FORMATS
from .errors import DomainError, IndexSetError, PoleError, TruncationError
from .f_family import build_f1, build_vee, forms_check, start_at_one_check
from .log_series import branch_identity_check, ls_eval, ls_eval_exact
from .logging import get_logger, log, now, set_enabled
from .math_utils import complex_string, decimal_string
from .matrix_system import DEFAULT_MATRICES, check_identities, chain_check
from .r_derivatives import zero_order_check
from .services.series_cache import get_series_cache
from .settings_persistence import EffectiveConfig, effective_config, table_nu_max
from .types import K_SETS, CheckReport, EvalPoint, ExactComplex, Precision, require_family_index, require_l
from .verifier.reports import dump_json, render, summary, version_string, write_report
from .verifier.sweep import SweepConfig, SweepPoint, sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

VERIFY_TARGETS = ("identities", "recurrence", "zero-order", "forms", "all")
DUMP_TARGETS = ("matrices", "table")

# Flags whose value may start with "-" (negative rationals such as -3/2+1/2i).
_VALUE_FLAGS = ("--z",)


class UsageError(ValueError):
    """Invalid flag combination detected after parsing."""


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--l", type=int, default=None, help="Family index l in {0, 1, 2} (default: all).")
    parser.add_argument("--k", type=int, default=None, help="Function index k in K_l (default: all).")
    parser.add_argument("--nu", type=int, default=None, help="Single nu; overrides --nu-min/--nu-max.")
    parser.add_argument("--nu-min", type=int, default=None)
    parser.add_argument("--nu-max", type=int, default=None)
    parser.add_argument("--z", type=ExactComplex.parse, default=None,
                        help="Complex point RE+IMi with rational parts, e.g. -3 or 3/2+1/2i.")
    parser.add_argument("--prec", type=int, default=None, help="Working precision in bits.")
    parser.add_argument("--T", dest="truncation", type=int, default=None, help="Truncation depth.")
    parser.add_argument("--t-margin", type=int, default=None, help="T = 2 nu + margin when --T is absent.")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None)
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads for sweeps.")
    parser.add_argument("--config", default=None, help="JSON config file (default: $DQS_CONFIG).")
    parser.add_argument("--output", default=None, help="Also write the JSON report to this file.")
    parser.add_argument("--quiet", action="store_true", help="Silence log output on stderr.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqs",
        description="Exact and numeric verification of difference-equation systems for Apery-type series.",
    )
    parser.add_argument("--version", action="version", version=version_string())
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="Evaluate f_{l,k}(z, nu) (w-corrected for k = 5, 7).")
    _add_common(p_eval)

    p_verify = sub.add_parser("verify", help="Run verification checks.")
    p_verify.add_argument("target", choices=VERIFY_TARGETS)
    p_verify.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p_verify.add_argument("--which", choices=("eq16", "eq17", "both"), default="both")
    _add_common(p_verify)

    p_dump = sub.add_parser("dump", help="Print constant matrices or the f_{l,1}(1, nu) table.")
    p_dump.add_argument("target", choices=DUMP_TARGETS)
    _add_common(p_dump)
    return parser


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    """Glue ``--z -3/2`` into ``--z=-3/2`` so argparse does not read the value as a flag."""
    out: list[str] = []
    it = iter(argv)
    for arg in it:
        if arg in _VALUE_FLAGS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def _config_for(args: argparse.Namespace) -> EffectiveConfig:
    nu_min, nu_max = args.nu_min, args.nu_max
    if args.nu is not None and args.command == "verify":
        nu_min = nu_max = args.nu
    if args.command == "dump":
        nu_min = nu_max = None
    cfg = effective_config(
        {
            "prec_bits": args.prec,
            "t_margin": args.t_margin,
            "nu_min": nu_min,
            "nu_max": nu_max,
            "jobs": args.jobs,
            "format": args.format,
        },
        args.config,
    )
    get_series_cache().limit = cfg.cache_limit
    return cfg


def _report_config(cfg: EffectiveConfig, args: argparse.Namespace, **extra) -> dict:
    data = cfg.to_dict()
    data["command"] = args.command
    if getattr(args, "target", None):
        data["target"] = args.target
    if args.truncation is not None:
        data["T"] = args.truncation
    data.update({k: v for k, v in extra.items() if v is not None})
    return data


def _families(args: argparse.Namespace) -> list[int]:
    return [require_l(args.l)] if args.l is not None else sorted(K_SETS)


def _ks(args: argparse.Namespace, l: int) -> list[int]:
    if args.k is None:
        return list(K_SETS[l])
    require_family_index(l, args.k)
    return [args.k]


# --- eval -----------------------------------------------------------------

def cmd_eval(args: argparse.Namespace, cfg: EffectiveConfig) -> int:
    if args.l is None or args.k is None or args.nu is None or args.z is None:
        raise UsageError("eval needs --l, --k, --nu and --z")
    require_family_index(args.l, args.k)
    z: ExactComplex = args.z
    record = {"l": args.l, "k": args.k, "nu": args.nu, "z": str(z)}

    if args.k == 1 and not z.is_polar:
        value = ls_eval_exact(build_f1(args.l, args.nu), z)
        record.update(value=str(value), radius="0", exact=True)
        text = str(value)
    else:
        pt = EvalPoint(z, Precision(cfg.prec_bits))
        T = args.truncation
        if T is None and args.k != 1:
            T = 2 * args.nu + cfg.t_margin
        series = build_vee(args.l, args.k, args.nu, T)
        ball = ls_eval(series, pt)
        record.update(value=complex_string(ball.mid), radius=decimal_string(ball.radius, 3), exact=False,
                      prec=cfg.prec_bits)
        if T is not None:
            record["T"] = T
        text = ball.describe()

    fmt = cfg.format
    if fmt == "json":
        sys.stdout.write(dump_json({"version": version_string(), "config": _report_config(cfg, args),
                                    "value": record}))
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("l", "k", "nu", "z", "value", "radius"))
        writer.writerow((args.l, args.k, args.nu, str(z), record["value"], record["radius"]))
        sys.stdout.write(buffer.getvalue())
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


# --- verify ---------------------------------------------------------------

def _identity_reports(ls: list[int]) -> list[CheckReport]:
    reports = []
    for l in ls:
        reports.extend(check_identities(l, DEFAULT_MATRICES).to_check_reports(DEFAULT_MATRICES))
    return reports


def _recurrence_config(args: argparse.Namespace, cfg: EffectiveConfig, ls: list[int]) -> SweepConfig:
    equations = ("eq16", "eq17") if args.which == "both" else (args.which,)
    if args.mode == "numeric" and args.z is None:
        raise UsageError("numeric mode needs --z")
    points = tuple(
        SweepPoint(
            l, k, cfg.nu_min, cfg.nu_max,
            mode=args.mode,
            equations=equations,
            z=args.z if args.mode == "numeric" else None,
            truncation=args.truncation,
            t_margin=cfg.t_margin,
            prec_bits=cfg.prec_bits,
        )
        for l in ls for k in _ks(args, l)
    )
    return SweepConfig(points, cfg.jobs)


def _zero_order_reports(ls: list[int], cfg: EffectiveConfig, T: Optional[int]) -> list[CheckReport]:
    reports = []
    for l in ls:
        for nu in range(1, cfg.nu_max + 1):
            start = now()
            ok = zero_order_check(l, nu)
            reports.append(CheckReport(
                check_id=f"zero-order/l{l}/nu{nu:03d}",
                params={"l": l, "nu": nu, "order": 2 + l},
                status="pass" if ok else "fail",
                elapsed_ms=int((now() - start) * 1000),
            ))
            reports.extend(start_at_one_check(l, nu, T if T is not None else 2 * nu + cfg.t_margin))
    return reports


def _forms_reports(ls: list[int], cfg: EffectiveConfig, T: Optional[int]) -> list[CheckReport]:
    reports = []
    for l in ls:
        for nu in range(cfg.nu_min, cfg.nu_max + 1):
            reports.extend(forms_check(l, nu, T if T is not None else 2 * nu + cfg.t_margin))
    return reports


def _chain_reports(ls: list[int], cfg: EffectiveConfig) -> list[CheckReport]:
    return [chain_check(l, nu, DEFAULT_MATRICES) for l in ls for nu in range(cfg.nu_min, cfg.nu_max + 1)]


def cmd_verify(args: argparse.Namespace, cfg: EffectiveConfig) -> int:
    start = now()
    ls = _families(args)
    target = args.target
    reports: list[CheckReport] = []

    if target in ("identities", "all"):
        reports.extend(_identity_reports(ls))
    if target == "all":
        reports.extend(_chain_reports(ls, cfg))
        reports.extend(branch_identity_check(prec=Precision(cfg.prec_bits)))
    if target in ("zero-order", "all"):
        reports.extend(_zero_order_reports(ls, cfg, args.truncation))
    if target in ("forms", "all"):
        reports.extend(_forms_reports(ls, cfg, args.truncation))
    if target in ("recurrence", "all"):
        reports.extend(sweep(_recurrence_config(args, cfg, ls), DEFAULT_MATRICES, jobs=cfg.jobs))

    reports.sort(key=lambda r: r.check_id)
    extra = {"mode": args.mode, "which": args.which}
    if args.z is not None:
        extra["z"] = str(args.z)
    config = _report_config(cfg, args, **extra)
    sys.stdout.write(render(reports, config, cfg.format))
    if args.output:
        target_path = write_report(args.output, render(reports, config, "json"))
        log(f"[REPORT] wrote {target_path}")

    passed, failed = summary(reports)
    log(f"[VERIFY] {target}: {passed} passed, {failed} failed in {now() - start:.1f}s")
    return EXIT_OK if failed == 0 else EXIT_FAILED


# --- dump -----------------------------------------------------------------

def _named_displays(ls: list[int]) -> list[tuple[str, object]]:
    out = []
    for l in ls:
        out.append((f"S{l}", DEFAULT_MATRICES.s_tilde[l]))
        for i in range(2 + l):
            out.append((f"V{l}.{i}", DEFAULT_MATRICES.v_tilde_star[(l, i)]))
    return out


def _dump_matrices(args: argparse.Namespace, cfg: EffectiveConfig) -> str:
    displays = _named_displays(_families(args))
    if cfg.format == "json":
        return dump_json({
            "version": version_string(),
            "checksum": DEFAULT_MATRICES.checksum(),
            "matrices": [
                {"name": name, "prefactor": str(d.prefactor),
                 "rows": [[str(x) for x in row] for row in d.entries()]}
                for name, d in displays
            ],
        })
    if cfg.format == "csv":
        blocks = []
        for _, d in displays:
            buffer = io.StringIO()
            csv.writer(buffer, lineterminator="\n").writerows(d.entries())
            blocks.append(buffer.getvalue())
        return "\n".join(blocks)

    blocks = []
    for name, d in displays:
        rows = [[str(x) for x in row] for row in d.entries()]
        width = max(len(x) for row in rows for x in row)
        lines = [f"{name} (printed prefactor {d.prefactor})"]
        lines += ["  " + " ".join(x.rjust(width) for x in row) for row in rows]
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def _dump_table(args: argparse.Namespace, cfg: EffectiveConfig) -> str:
    rows = []
    one = ExactComplex(1)
    top = cfg.nu_max if args.nu_max is None else table_nu_max(args.nu_max)
    for l in _families(args):
        for nu in range(0, top + 1):
            rows.append((l, nu, str(ls_eval_exact(build_f1(l, nu), one))))
    if cfg.format == "json":
        return dump_json({
            "version": version_string(),
            "values": [{"l": l, "nu": nu, "value": v} for l, nu, v in rows],
        })
    if cfg.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("l", "nu", "value"))
        writer.writerows(rows)
        return buffer.getvalue()
    width = max(len(v) for _, _, v in rows)
    return "".join(f"l={l}  nu={nu:<4d} {v.rjust(width)}\n" for l, nu, v in rows)


def cmd_dump(args: argparse.Namespace, cfg: EffectiveConfig) -> int:
    text = _dump_matrices(args, cfg) if args.target == "matrices" else _dump_table(args, cfg)
    sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "dump": cmd_dump}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_normalize_argv(raw))
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    was_enabled = get_logger().enabled
    if args.quiet:
        set_enabled(False)
    try:
        cfg = _config_for(args)
        return _COMMANDS[args.command](args, cfg)
    except (UsageError, IndexSetError, DomainError, TruncationError, PoleError, ValueError) as exc:
        sys.stderr.write(f"dqs: error: {exc}\n")
        return EXIT_USAGE
    finally:
        set_enabled(was_enabled)


if __name__ == "__main__":
    raise SystemExit(main())
