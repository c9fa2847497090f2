"""Command-line front end: `tallplateau <subcommand> ...`.

Exit codes: 0 success, 2 invalid input, 3 curve not tall, 4 near-critical
cover, 5 curve class without a surface solver.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import catenoid as cat
from .config import RunConfig, load_config
from .corpus import KINDS, corpus, tall_corpus
from .cover import NearCritical, NotTall, NotTwoColorable, mch, tall_cover
from .curves import CurveError, CurveFamily, classify, dumps, family_to_dict, has_thin_tail, load_family
from .graph import NonConvergence, UnsupportedCurve

EXIT_OK, EXIT_INPUT, EXIT_NOT_TALL, EXIT_NEAR_CRITICAL, EXIT_UNSUPPORTED = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


def _write(path: Path, text: str) -> None:
    """Write atomically: a temp file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def _load(path) -> CurveFamily:
    try:
        return load_family(path)
    except (OSError, json.JSONDecodeError, CurveError) as exc:
        raise InputError(f"invalid curve file {path}: {exc}") from exc


def _emit(obj) -> str:
    text = dumps(obj)
    print(text)
    return text + "\n"


def _n_list(text: str) -> list[float]:
    try:
        if ".." in text:
            a, b = text.split("..")
            vals = [float(x) for x in range(int(a), int(b) + 1)]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad --n-list {text!r}") from exc
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] <= 0:
        raise InputError("--n-list must be positive and increasing")
    return vals


# ----------------------------------------------------------------- commands


def cmd_classify(args, cfg: RunConfig) -> int:
    fam = _load(args.curve)
    v = classify(fam, cfg.height_tol)
    report = v.to_dict()
    tail = has_thin_tail(fam) if v.kind == "Short" else None
    report["thin_tail"] = tail.to_dict() if tail is not None else None
    _write(Path(cfg.out) / "verdict.json", _emit(report))
    return EXIT_OK


def _cover_or_exit(fam, cfg: RunConfig):
    return tall_cover(fam, eps=cfg.cover_eps, tol=cfg.height_tol)


def _cover_summary(cover, slab) -> dict:
    rects = [r for r, _ in cover.all()]
    return {
        "rectangles": len(rects),
        "plus": len(cover.plus),
        "minus": len(cover.minus),
        "min_height": min(r.height for r in rects) if rects else None,
        "slab": list(slab),
        "eps": cover.coverage_margin,
    }


def cmd_cover(args, cfg: RunConfig) -> int:
    fam = _load(args.curve)
    cover = _cover_or_exit(fam, cfg)
    out = Path(cfg.out)
    _write(out / "cover.json", dumps(cover.to_dict()) + "\n")
    _emit(_cover_summary(cover, fam.t_range()))
    return EXIT_OK


def cmd_mch(args, cfg: RunConfig) -> int:
    from .profile import ph_mesh

    fam = _load(args.curve)
    cover = _cover_or_exit(fam, cfg)
    desc = mch(fam, cover)
    out = Path(cfg.out)
    if args.barrier_obj:
        for k, b in enumerate(desc.barriers):
            if b.rect.kind != "finite":
                continue
            name = f"barrier_{k:03d}.obj"
            _write(out / name, ph_mesh(b.rect, args.resolution).to_obj())
            b.mesh_path = name
    _write(out / "mch.json", dumps(desc.to_dict()) + "\n")
    _emit(_cover_summary(cover, desc.slab))
    return EXIT_OK


def _try(f, *a):
    try:
        return f(*a)
    except (cat.NoSignChange, cat.MultipleRoots, cat.DomainError, cat.OutOfRange) as exc:
        return {"error": type(exc).__name__, "message": str(exc)}


def cmd_catenoid(args, cfg: RunConfig) -> int:
    d = args.d
    try:
        cat.CatenoidParams(d)
    except (cat.DomainError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    neck = math.asinh(d)
    rho_max = args.rho_max if args.rho_max is not None else 3.0 * neck + 5.0
    if rho_max <= neck:
        raise InputError("--rho-max must exceed the neck radius")
    tol = cfg.quad_tol
    out = Path(cfg.out)
    table = cat.profile_table(d, rho_max, args.resolution, tol)
    _write(out / "profile.csv", _csv(["rho", "lambda"], table))
    rh = cat.rho_hat(d)
    report = {
        "d": d,
        "neck": neck,
        "h": cat.height_h(d, tol),
        "rho_hat": rh,
        "h_hat": _try(cat.h_hat, d, tol) if rh > neck else None,
        "margin_at_rho_hat": _try(lambda: cat.area_margin(d, rh, tol).to_dict()) if rh > neck else None,
        "rho_star": _try(cat.rho_star, d, rho_max),
        "rho_max": rho_max,
        "quad_tol": tol,
    }
    if args.mesh:
        m = cat.catenoid_mesh(d, rho_max, args.resolution, 2 * args.resolution)
        _write(out / "catenoid.obj", m.to_obj())
    _write(out / "catenoid.json", _emit(report))
    return EXIT_OK


def _rect_from_args(args):
    from .cover import TallRectangle
    from .sequence import rectangle_data

    if args.curve is not None:
        rd = rectangle_data(_load(args.curve))
        if rd is None:
            raise UnsupportedCurve("verdict-only curve class")
        box = (rd.theta_a, rd.theta_b, rd.mid - rd.c, rd.mid + rd.c)
    else:
        box = (0.0, args.width, -0.5 * args.height, 0.5 * args.height)
    h = box[3] - box[2]
    if not h > math.pi + args.tol_h:
        raise NotTall(f"rectangle height {h:.12g} is not above pi")
    return TallRectangle(*box)


def cmd_graph(args, cfg: RunConfig) -> int:
    from .profile import generating_curve, ph_mesh

    args.tol_h = cfg.height_tol
    rect = _rect_from_args(args)
    h = rect.t_hi - rect.t_lo
    gc = generating_curve(h)
    out = Path(cfg.out)
    _write(out / "generating_curve.csv", _csv(["r", "f"], gc.samples))
    _write(out / "ph.obj", ph_mesh(rect, args.resolution, gc=gc).to_obj())
    _write(out / "graph.json", _emit({"h": h, "neck": gc.r0, "rectangle": rect.to_dict(), "resolution": args.resolution}))
    return EXIT_OK


def cmd_solve(args, cfg: RunConfig) -> int:
    from .sequence import solve_sequence

    fam = _load(args.curve)
    n_list = _n_list(args.n_list)
    reports, sols = solve_sequence(fam, n_list, cfg.solver, keep=True)
    out = Path(cfg.out)
    lines = [json.dumps(r.to_dict(), sort_keys=True) for r in reports]
    _write(out / "reports.jsonl", "\n".join(lines) + "\n")
    for line in lines:
        print(line)
    if args.meshes:
        for r, s in zip(reports, sols):
            _write(out / f"solution_n{r.n:g}.obj", s.mesh.to_obj())
    print(f"status: {reports[-1].status}")
    return EXIT_OK


def cmd_corpus(args, cfg: RunConfig) -> int:
    fams = tall_corpus(args.count, cfg.seed) if args.tall else corpus(args.count, cfg.seed, args.kind)
    out = Path(cfg.out)
    names = []
    for k, fam in enumerate(fams):
        name = f"curve_{k:03d}.json"
        _write(out / name, dumps(family_to_dict(fam)) + "\n")
        names.append(name)
    _write(out / "index.json", _emit({"seed": cfg.seed, "count": len(fams), "tall": args.tall, "kind": args.kind, "files": names}))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML key/value file with tolerances and solver settings")
    common.add_argument("--tol", type=float, help="height tolerance for the tall/short decision")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--resolution", type=int, default=32, help="mesh or table resolution")

    p = argparse.ArgumentParser(prog="tallplateau", description="Tall curves and minimal surfaces in H^2 x R.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="Tall / Short / Critical verdict for a curve file")
    s.add_argument("curve")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("cover", parents=[common], help="tall-rectangle cover of a tall curve")
    s.add_argument("curve")
    s.add_argument("--eps", type=float, help="coverage margin")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("mch", parents=[common], help="mean convex hull descriptor")
    s.add_argument("curve")
    s.add_argument("--eps", type=float, help="coverage margin")
    s.add_argument("--barrier-obj", action="store_true", help="write one OBJ per finite barrier")
    s.set_defaults(func=cmd_mch)

    s = sub.add_parser("catenoid", parents=[common], help="profile, thresholds and mesh of C_d")
    s.add_argument("d", type=float)
    s.add_argument("--rho-max", type=float)
    s.add_argument("--mesh", action="store_true")
    s.set_defaults(func=cmd_catenoid)

    s = sub.add_parser("graph", parents=[common], help="minimal plane over a tall rectangle")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--curve", help="rectangle boundary curve file")
    g.add_argument("--height", type=float)
    s.add_argument("--width", type=float, default=2.0)
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("solve", parents=[common], help="truncated solution sequence for rectangle or graph data")
    s.add_argument("curve")
    s.add_argument("--n-list", default="2..8", help="e.g. 2..8 or 2,4,6")
    s.add_argument("--meshes", action="store_true", help="write an OBJ per n")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("corpus", parents=[common], help="seeded random valid curves")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--tall", action="store_true", help="draw only tall families")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = {"height_tol": args.tol, "out": args.out, "seed": args.seed}
        if getattr(args, "eps", None) is not None:
            overrides["cover_eps"] = args.eps
        cfg = load_config(args.config, **overrides)
        if args.resolution < 1:
            raise InputError("--resolution must be positive")
        return args.func(args, cfg)
    except NotTall as exc:
        return _fail(exc, EXIT_NOT_TALL)
    except NearCritical as exc:
        return _fail(exc, EXIT_NEAR_CRITICAL)
    except UnsupportedCurve as exc:
        return _fail(exc, EXIT_UNSUPPORTED)
    except (NotTwoColorable, NonConvergence) as exc:
        return _fail(exc, 1)
    except (InputError, CurveError, OSError, ValueError, cat.ResolutionTooLow) as exc:
        return _fail(exc, EXIT_INPUT)


def _fail(exc, code: int) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
