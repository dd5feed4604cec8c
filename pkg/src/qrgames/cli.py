"""Command-line interface for the hidden-matching game toolkit.

Commands: ``matchings gen|check``, ``value sv|pv``, ``curves``, ``simulate``.
Exit codes: 0 success, 1 negative certification result (dependent family),
2 usage or validation error, 3 solver non-convergence.

An optional ``--config FILE`` supplies defaults as plain ``key=value`` lines
(``#`` starts a comment); keys are flag names with dashes replaced by
underscores, and explicit flags always win.  Identical invocations,
including the seed, produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import coherent as ch
from . import game as gm
from . import matchings as mt
from . import montecarlo as mc
from . import sdp

_CONFIG_TYPES = {
    "family": str,
    "k": int,
    "alpha": float,
    "alpha_min": float,
    "alpha_max": float,
    "alpha_steps": int,
    "eta": float,
    "nu": float,
    "variant": str,
    "trials": int,
    "seed": int,
    "samples": int,
    "matching_index": int,
    "tol": float,
    "out": str,
    "plot": str,
    "preset": str,
}

_PALETTE = (
    "#1f6fb2",
    "#d1513c",
    "#3d9943",
    "#8659a8",
    "#c98a22",
    "#4fa3a5",
    "#b5486e",
    "#6b6b6b",
)


@dataclass(frozen=True)
class _Preset:
    family: str
    k: int
    alpha_min: float
    alpha_max: float
    alpha_steps: int
    series: tuple[tuple[float, float], ...]  # (eta, nu) per output file
    tag: str | None  # None: single file at --out; else suffix scheme


_PRESETS = {
    "fig5": _Preset("canonical", 2, 0.0, 3.0, 61, ((1.0, 1.0),), None),
    "fig6": _Preset("sextet", 3, 0.0, 3.0, 61, ((1.0, 1.0),), None),
    "fig7": _Preset(
        "canonical",
        2,
        0.0,
        3.0,
        61,
        tuple((eta, 1.0) for eta in (1.0, 0.8, 0.6, 0.4, 0.2)),
        "eta",
    ),
    "fig8": _Preset(
        "canonical",
        2,
        0.0,
        3.0,
        61,
        tuple((1.0, nu) for nu in (1.0, 0.95, 0.9, 0.85, 0.8)),
        "nu",
    ),
    "fig9": _Preset(
        "canonical",
        2,
        0.0,
        3.0,
        61,
        tuple(
            (eta, nu)
            for nu, eta in ((1.0, 1.0), (0.95, 0.8), (0.9, 0.6), (0.85, 0.4), (0.8, 0.2))
        ),
        "nu_eta",
    ),
}


def _load_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = value
    return out


def _apply_config(args: argparse.Namespace, config: dict[str, str]) -> None:
    for key, text in config.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        try:
            setattr(args, key, _CONFIG_TYPES[key](text))
        except ValueError:
            raise ValueError(
                f"config key {key} needs a {_CONFIG_TYPES[key].__name__}, got {text!r}"
            ) from None


def _fill(args: argparse.Namespace, **defaults) -> None:
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _resolve_family(name_or_path: str, k: int | None) -> tuple[mt.Matching, ...]:
    if name_or_path == "canonical":
        return tuple(mt.canonical_family(2 if k is None else k))
    if name_or_path == "sextet":
        return tuple(mt.sextet_family(3 if k is None else k))
    family = tuple(mt.load_family(name_or_path))
    if k is not None and k != len(family):
        raise ValueError(
            f"--k {k} contradicts the {len(family)} matchings in {name_or_path}"
        )
    return family


def _fmt_answer(answer) -> str:
    return ";".join(f"{i}-{j}:{b}" for i, j, b in answer)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def cmd_matchings_gen(args: argparse.Namespace) -> int:
    if args.family not in ("canonical", "sextet"):
        raise ValueError(f"gen builds named families only, got {args.family!r}")
    family = _resolve_family(args.family, args.k)
    _write_text(args.out, mt.family_to_text(family))
    return 0


def cmd_matchings_check(args: argparse.Namespace) -> int:
    _fill(args, family="canonical")
    family = _resolve_family(args.family, args.k)
    ok, witness = mt.is_independent(family)
    if ok:
        print("independent")
        return 0
    print("dependent")
    print("cycle_nodes=" + ",".join(str(v) for v in witness.nodes))
    print("cycle_labels=" + ",".join(str(v) for v in witness.labels))
    return 1


def cmd_value_sv(args: argparse.Namespace) -> int:
    _fill(args, family="canonical", seed=0)
    family = _resolve_family(args.family, args.k)
    game = gm.HiddenMatchingGame(family)
    if args.samples is None:
        values = gm.selective_value(game)
        mode = "exhaustive"
    else:
        values = gm.selective_value_sampled(game, args.samples, args.seed)
        mode = "sampled"
    print(f"value={values.sv:.9g}")
    print(f"bound={values.bound:.9g}")
    print(f"argmax_answer={_fmt_answer(values.argmax_answer)}")
    print(f"mode={mode}")
    if mode == "sampled":
        print(f"samples={args.samples}")
        print(f"seed={args.seed}")
    return 0


def cmd_value_pv(args: argparse.Namespace) -> int:
    _fill(args, family="canonical", tol=1e-6)
    family = _resolve_family(args.family, args.k)
    game = gm.HiddenMatchingGame(family)
    solution = sdp.physical_value(sdp.hidden_matching_problem(game), tol=args.tol)
    bound = (game.k + 1) / 2**game.k
    print(f"value={solution.primal_value:.9g}")
    print(f"bound={bound:.9g}")
    print(sdp.solution_report(solution), end="")
    return 0 if solution.converged else 3


def _cheating_column(grid, family, tol: float) -> list[float | None]:
    column: list[float | None] = []
    for alpha in grid:
        params = ch.CoherentGameParams(tuple(family), float(alpha))
        try:
            solution = ch.cheating_value(params, tol=tol)
            column.append(solution.primal_value if solution.converged else None)
        except (ValueError, np.linalg.LinAlgError):
            column.append(None)
    return column


def _series_rows(grid, family, eta: float, nu: float, cheating) -> list[ch.CurveRow]:
    rows = []
    for alpha, cheat in zip(grid, cheating):
        params = ch.CoherentGameParams(tuple(family), float(alpha), eta, nu)
        rows.append(
            ch.CurveRow(
                alpha=float(alpha),
                winning_paper=ch.imperfect_winning(params, "paper_exact"),
                winning_conditional=ch.imperfect_winning(params, "conditional"),
                cheating=cheat,
                threshold=None if cheat is None else (1.0 + cheat) / 2.0,
            )
        )
    return rows


def _series_path(out: str, eta: float, nu: float, tag: str) -> str:
    stem, ext = os.path.splitext(out)
    if tag == "eta":
        suffix = f"_eta{eta:g}"
    elif tag == "nu":
        suffix = f"_nu{nu:g}"
    else:
        suffix = f"_nu{nu:g}_eta{eta:g}"
    return stem + suffix + (ext or ".csv")


def cmd_curves(args: argparse.Namespace) -> int:
    if args.preset is not None:
        pinned = ("family", "k", "alpha_min", "alpha_max", "alpha_steps", "eta", "nu")
        clashes = [name for name in pinned if getattr(args, name) is not None]
        if clashes:
            raise ValueError(
                f"--preset {args.preset} pins {', '.join(clashes)}; drop those flags"
            )
        preset = _PRESETS[args.preset]
        family = _resolve_family(preset.family, preset.k)
        grid = np.linspace(preset.alpha_min, preset.alpha_max, preset.alpha_steps)
        series = preset.series
        tag = preset.tag
    else:
        _fill(args, family="canonical", alpha_min=0.0, alpha_max=3.0, alpha_steps=61)
        _fill(args, eta=1.0, nu=1.0)
        if args.alpha_steps < 1:
            raise ValueError(f"--alpha-steps must be >= 1, got {args.alpha_steps}")
        if args.alpha_max < args.alpha_min:
            raise ValueError("--alpha-max must not be below --alpha-min")
        family = _resolve_family(args.family, args.k)
        grid = np.linspace(args.alpha_min, args.alpha_max, args.alpha_steps)
        series = ((args.eta, args.nu),)
        tag = None
    _fill(args, tol=1e-6, variant="paper_exact")
    if args.variant not in ("paper_exact", "conditional"):
        raise ValueError(f"--variant must be paper_exact or conditional, got {args.variant!r}")
    if tag is not None and args.out is None:
        raise ValueError("multi-series presets need --out to name the per-series files")

    # detector parameters never enter the cheating side, so solve once per alpha
    cheating = _cheating_column(grid, family, args.tol)
    outputs: list[tuple[str | None, list[ch.CurveRow]]] = []
    for eta, nu in series:
        rows = _series_rows(grid, family, eta, nu, cheating)
        path = args.out if tag is None else _series_path(args.out, eta, nu, tag)
        outputs.append((path, rows))
        _write_text(path, ch.curve_to_csv(rows))
    if args.plot is not None:
        _write_plot(args.plot, outputs, series, tag, args.variant)
    return 0


def _plot_series(outputs, series, tag, variant):
    named = []
    column = "winning_paper" if variant == "paper_exact" else "winning_conditional"
    for (_, rows), (eta, nu) in zip(outputs, series):
        if tag == "eta":
            label = f"winning eta={eta:g}"
        elif tag == "nu":
            label = f"winning nu={nu:g}"
        elif tag == "nu_eta":
            label = f"winning nu={nu:g} eta={eta:g}"
        else:
            label = "winning"
        named.append((label, [(r.alpha, getattr(r, column)) for r in rows]))
    rows = outputs[0][1]
    named.append(("cheating", [(r.alpha, r.cheating) for r in rows]))
    named.append(("threshold", [(r.alpha, r.threshold) for r in rows]))
    return named


def _write_plot(path, outputs, series, tag, variant) -> None:
    named = _plot_series(outputs, series, tag, variant)
    _write_text(path, _svg_plot(named))


def _svg_plot(named_series) -> str:
    width, height = 640, 440
    left, right, top, bottom = 60, 480, 20, 390
    xs = [x for _, pts in named_series for x, y in pts if y is not None]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def sy(y: float) -> float:
        return bottom - y * (bottom - top)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    for i in range(7):
        x = x_lo + (x_hi - x_lo) * i / 6
        px = sx(x)
        parts.append(
            f'<line x1="{px:.1f}" y1="{bottom}" x2="{px:.1f}" y2="{bottom + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{bottom + 18}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{x:g}</text>'
        )
    for i in range(5):
        y = i / 4
        py = sy(y)
        parts.append(
            f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{py + 4:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{y:g}</text>'
        )
    parts.append(
        f'<text x="{(left + right) / 2:.0f}" y="{height - 8}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">alpha</text>'
    )
    parts.append(
        f'<text x="14" y="{(top + bottom) / 2:.0f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 {(top + bottom) / 2:.0f})">probability</text>'
    )
    for index, (label, pts) in enumerate(named_series):
        color = _PALETTE[index % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts if y is not None)
        if coords:
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        ly = top + 16 + 16 * index
        parts.append(
            f'<line x1="{right + 10}" y1="{ly - 4}" x2="{right + 30}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{right + 34}" y="{ly}" font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_simulate(args: argparse.Namespace) -> int:
    _fill(
        args,
        family="canonical",
        alpha=1.0,
        eta=1.0,
        nu=1.0,
        trials=100000,
        seed=0,
        matching_index=0,
    )
    family = _resolve_family(args.family, args.k)
    params = ch.CoherentGameParams(family, args.alpha, args.eta, args.nu)
    report = mc.adjudicate_p1(params, args.trials, args.seed, args.matching_index)
    _write_text(args.out, mc.report_to_csv(report.mc))
    summary = "\n".join(
        [
            f"estimate={report.mc.estimate:.9g}",
            f"stderr={report.mc.stderr:.9g}",
            f"paper_exact={report.paper_value:.9g}",
            f"conditional={report.conditional_value:.9g}",
            f"sigmas_paper={report.sigmas_paper:.9g}",
            f"sigmas_conditional={report.sigmas_conditional:.9g}",
            f"variant={report.matching_variant}",
        ]
    )
    print(summary, file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrg",
        description="Hidden-matching game toolkit: families, values, curves, simulation.",
    )
    parser.add_argument(
        "--config",
        metavar="FILE",
        help="key=value defaults; explicit flags take precedence",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_match = commands.add_parser("matchings", help="generate or certify matching families")
    actions = p_match.add_subparsers(dest="action", required=True)
    p_gen = actions.add_parser("gen", help="write a named family in the text format")
    p_gen.add_argument("--family", help="canonical or sextet")
    p_gen.add_argument("--k", type=int, help="number of matchings")
    p_gen.add_argument("--out", help="output file (default: stdout)")
    p_gen.set_defaults(func=cmd_matchings_gen)
    p_check = actions.add_parser(
        "check",
        help="certify independence; witness labels are 1-based matching indices",
    )
    p_check.add_argument("--family", help="canonical, sextet, or a family file path")
    p_check.add_argument("--k", type=int, help="number of matchings (named families)")
    p_check.set_defaults(func=cmd_matchings_check)

    p_value = commands.add_parser("value", help="selective or physical game value")
    modes = p_value.add_subparsers(dest="mode", required=True)
    p_sv = modes.add_parser("sv", help="selective value (largest answer-operator norm)")
    p_sv.add_argument("--family", help="canonical, sextet, or a family file path")
    p_sv.add_argument("--k", type=int)
    p_sv.add_argument("--samples", type=int, help="sample the answer space instead of enumerating")
    p_sv.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p_sv.set_defaults(func=cmd_value_sv)
    p_pv = modes.add_parser("pv", help="physical value (discrimination SDP)")
    p_pv.add_argument("--family", help="canonical, sextet, or a family file path")
    p_pv.add_argument("--k", type=int)
    p_pv.add_argument("--tol", type=float, help="duality-gap target (default 1e-6)")
    p_pv.set_defaults(func=cmd_value_pv)

    p_curves = commands.add_parser(
        "curves", help="winning/cheating curves over an alpha grid, CSV per series"
    )
    p_curves.add_argument("--preset", choices=sorted(_PRESETS), help="pinned figure grids")
    p_curves.add_argument("--family", help="canonical, sextet, or a family file path")
    p_curves.add_argument("--k", type=int)
    p_curves.add_argument("--alpha-min", type=float, help="grid start (default 0)")
    p_curves.add_argument("--alpha-max", type=float, help="grid end (default 3)")
    p_curves.add_argument("--alpha-steps", type=int, help="grid points (default 61)")
    p_curves.add_argument("--eta", type=float, help="transmission (default 1)")
    p_curves.add_argument("--nu", type=float, help="interference quality (default 1)")
    p_curves.add_argument("--variant", help="winning column to plot (default paper_exact)")
    p_curves.add_argument("--tol", type=float, help="cheating SDP gap target (default 1e-6)")
    p_curves.add_argument("--out", help="CSV path; multi-series presets add suffixes")
    p_curves.add_argument("--plot", help="also write a minimal SVG line plot")
    p_curves.set_defaults(func=cmd_curves)

    p_sim = commands.add_parser(
        "simulate", help="seeded Monte Carlo of the honest strategy, report CSV"
    )
    p_sim.add_argument("--family", help="canonical, sextet, or a family file path")
    p_sim.add_argument("--k", type=int)
    p_sim.add_argument("--alpha", type=float, help="pulse amplitude (default 1)")
    p_sim.add_argument("--eta", type=float, help="transmission (default 1)")
    p_sim.add_argument("--nu", type=float, help="interference quality (default 1)")
    p_sim.add_argument("--trials", type=int, help="trial count (default 100000)")
    p_sim.add_argument("--seed", type=int, help="stream seed (default 0)")
    p_sim.add_argument("--matching-index", type=int, help="measured matching (default 0)")
    p_sim.add_argument("--out", help="report CSV path (default: stdout)")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(args.config) if args.config else {}
        _apply_config(args, config)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
