"""Command-line front door.

Verbs: eval, infer, decompose, hull, verify, report, examples.  Exit codes
are part of the contract: 2 for a bad program file, 3 for an unbounded
relaxation, 4 when inference gives up (NO_FIT), 5 for a decomposition mode
applied to the wrong form.  Identical inputs and flags produce byte-identical
structured output; PILP_MAX_CELLS caps enumeration volume.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from math import gcd, isqrt
from pathlib import Path

from . import eqp, hull, oracle, transforms
from .model import (
    InvalidProgramError, PILP, coordinate_bound_exponent, load_pilp,
    pilp_to_json, save_pilp,
)
from .poly import (
    BOTTOM, Poly, poly_str, poly_to_json, qp_eval, qp_str, value_to_json,
)
from .programs import BLURBS, EXAMPLES

EXIT_PARSE = 2
EXIT_UNBOUNDED = 3
EXIT_NO_FIT = 4
EXIT_BAD_FORM = 5

SCHEMA = 1


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fail(message: str, code: int):
    raise _CliError(message, code)


def _load(path: str) -> tuple[PILP, str]:
    """Parse a program file; returns (program, sha256 of the raw bytes)."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}", EXIT_PARSE)
    digest = hashlib.sha256(data).hexdigest()
    try:
        from .model import loads_pilp
        p = loads_pilp(data.decode("utf-8"))
    except (InvalidProgramError, UnicodeDecodeError) as exc:
        _fail(f"bad program file {path}: {exc}", EXIT_PARSE)
    return p, digest


def _manifest(args, digest: str | None, config: dict, outputs=(), extra=None):
    m = {
        "schema": SCHEMA,
        "command": args.verb,
        "input_sha256": digest,
        "config": config,
        "outputs": sorted(outputs),
        "exit_status": 0,
    }
    if extra:
        m.update(extra)
    return m


def _emit(args, human_lines, structured):
    if args.format == "structured":
        print(json.dumps(structured, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _fmt_value(v) -> str:
    return "-inf" if v is BOTTOM else str(v)


def _parse_t_list(text: str) -> list[int]:
    try:
        out = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        _fail(f"bad parameter list {text!r}", EXIT_PARSE)
    if not out or any(t < 1 for t in out):
        _fail(f"parameter list must hold integers >= 1: {text!r}", EXIT_PARSE)
    return out


def _config_from(args) -> eqp.InferenceConfig:
    return eqp.InferenceConfig(
        d_max=args.d_max, deg_max=args.deg_max,
        validate_count=args.validate, t_start=args.t_start, t_cap=args.t_cap)


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    p, digest = _load(args.file)
    ts = (list(range(args.table[0], args.table[1] + 1))
          if args.table else [args.t])
    rows = []
    try:
        for t in ts:
            count = oracle.count_lattice_points(p, t)
            values = oracle.f_ell(p, t, args.ell, distinct=args.distinct)
            rows.append((t, count, values))
    except oracle.UnboundedRelaxationError as exc:
        _fail(str(exc), EXIT_UNBOUNDED)
    human = []
    for t, count, values in rows:
        vals = " ".join(
            f"f{k + 1}={_fmt_value(v)}" for k, v in enumerate(values))
        human.append(f"t={t} |L|={count} {vals}")
    structured = _manifest(
        args, digest,
        {"ell": args.ell, "distinct": args.distinct},
        extra={"rows": [
            {"t": t, "count": count,
             "values": [value_to_json(v) for v in values]}
            for t, count, values in rows]})
    _emit(args, human, structured)
    return 0


# ---------------------------------------------------------------------------
# infer


def _scripted_sampler(name: str):
    if name == "floor-half":
        return lambda t: t // 2
    if name == "gcd6":
        return lambda t: gcd(t, 6)
    if name == "sqrt-floor":
        return lambda t: isqrt(t)
    if name == "simplex-diagonal":
        # f_t(t) - t on the simplex with c = (1, 0): the parameter runs as
        # fast as the rank, so no single period ever explains the samples
        def diag(t: int) -> int:
            k = 0
            while (k + 1) * (k + 2) // 2 < t:
                k += 1
            return -k
        return diag
    _fail(f"unknown sampler {name!r}", EXIT_PARSE)


def _print_certificate(args, cert, digest, config):
    human = [qp_str(cert.qp), f"mode: {cert.mode}",
             f"samples used: {len(cert.samples_used)}"]
    if cert.validation:
        human.append("validation:")
        for e in cert.validation:
            mark = "ok" if e.match else "MISMATCH"
            human.append(f"  t={e.t} predicted={_fmt_value(e.predicted)} "
                         f"actual={_fmt_value(e.actual)} {mark}")
    structured = _manifest(
        args, digest, config,
        outputs=[args.out] if getattr(args, "out", None) else (),
        extra={"certificate": eqp.certificate_to_json(cert)})
    _emit(args, human, structured)
    if getattr(args, "out", None):
        Path(args.out).write_text(
            json.dumps(eqp.certificate_to_json(cert), indent=2,
                       sort_keys=True) + "\n")


def cmd_infer(args) -> int:
    cfg = _config_from(args)
    config = {"ell": args.ell, "mode": args.mode, "distinct": args.distinct,
              "d_max": cfg.d_max, "deg_max": cfg.deg_max,
              "validate": cfg.validate_count, "t_start": cfg.t_start,
              "t_cap": cfg.t_cap}
    digest = None
    if args.sampler:
        config["sampler"] = args.sampler
        result = eqp.infer_qp(_scripted_sampler(args.sampler), cfg)
    else:
        if not args.file:
            _fail("infer needs a program file or --sampler", EXIT_PARSE)
        p, digest = _load(args.file)
        try:
            result = eqp.f_ell_structure(p, args.ell, cfg, mode=args.mode,
                                         distinct=args.distinct)
        except oracle.UnboundedRelaxationError as exc:
            _fail(str(exc), EXIT_UNBOUNDED)
    if isinstance(result, eqp.NoFit):
        structured = _manifest(args, digest, config, extra={
            "no_fit": {"reason": result.reason,
                       "attempts": len(result.tried)}})
        structured["exit_status"] = EXIT_NO_FIT
        _emit(args, [f"NO_FIT: {result.reason}",
                     f"attempts: {len(result.tried)}"], structured)
        return EXIT_NO_FIT
    _print_certificate(args, result, digest, config)
    return 0


# ---------------------------------------------------------------------------
# decompose


def _map_to_json(m: transforms.AffineParamMap) -> dict:
    return {
        "matrix": [[poly_to_json(e) for e in row] for row in m.matrix],
        "offset": [poly_to_json(e) for e in m.offset],
        "residue": list(m.residue) if m.residue else None,
    }


def _objective_at(p: PILP, t: int, x) -> int:
    return sum(int(ci(t)) * xi for ci, xi in zip(p.c, x))


def _verify_bijection(source: PILP, part: PILP, fwd, ts, check_value=True):
    """Map each part point at t through fwd; demand a bijection onto L(t)."""
    report = {}
    for t in ts:
        src = set(oracle.points_at(source, t))
        images = [fwd(t, y) for y in oracle.points_at(part, t)]
        ok = (len(images) == len(set(images)) and set(images) == src)
        if ok and check_value:
            ok = all(
                _objective_at(source, t, fwd(t, y)) == _objective_at(part, t, y)
                for y in oracle.points_at(part, t))
        report[t] = "pass" if ok else "fail"
    return report


def _decompose_slack(p, args, outdir):
    res = transforms.canonical_to_standard_slack(p)
    save_pilp(res.pilp, outdir / "part-000.json")
    detail = {"mode": "slack", "embed": _map_to_json(res.embed)}
    if args.verify:
        ts = _parse_t_list(args.verify)
        detail["verify"] = _verify_bijection(
            res.pilp, p, res.embed.apply, ts)
    return ["part-000.json"], detail


def _decompose_translate(p, args, outdir):
    res = transforms.general_to_canonical_translate(p, args.r)
    save_pilp(res.pilp, outdir / "part-000.json")
    detail = {"mode": "translate", "r": res.r, "threshold": res.threshold,
              "value_shift": poly_to_json(res.value_shift),
              "back": _map_to_json(res.back)}
    if args.verify:
        ts = _parse_t_list(args.verify)
        bad = [t for t in ts if t <= res.threshold]
        if bad:
            _fail(f"translate only verified past t={res.threshold}: {bad}",
                  EXIT_PARSE)
        detail["verify"] = _verify_bijection(
            p, res.pilp, res.back.apply, ts, check_value=False)
    return ["part-000.json"], detail


def _decompose_digits(p, args, outdir):
    dec = transforms.standard_to_reduced_digits(p, args.r)
    names = []
    for i, part in enumerate(dec.parts):
        name = f"part-{i:03d}.json"
        save_pilp(part.pilp, outdir / name)
        names.append(name)
    detail = transforms.digit_manifest(dec)
    detail["mode"] = "digits"
    detail["inverse_map"] = _map_to_json(dec.inverse_map)
    if args.verify:
        detail["verify"] = {
            t: "pass" if _digit_check(p, dec, t) else "fail"
            for t in _parse_t_list(args.verify)}
    return names, detail


def _digit_check(p: PILP, dec, t: int) -> bool:
    """Disjoint parts, union bijective onto the digit-box slice, objective
    carried exactly."""
    box = t ** dec.r
    inside = {x for x in oracle.points_at(p, t)
              if all(0 <= v < box for v in x)}
    seen = {}
    for part in dec.parts:
        for y in oracle.points_at(part.pilp, t):
            if y in seen:          # parts must not overlap
                return False
            seen[y] = part
    images = {}
    for y in seen:
        x = dec.inverse_map.apply(t, y)
        if x in images:
            return False
        images[x] = y
    if set(images) != inside:
        return False
    for x, y in images.items():
        carried = sum(
            int(dec.objective_digit(v // dec.r, v % dec.r)(t)) * y[v]
            for v in range(p.n * dec.r))
        if carried != _objective_at(p, t, x):
            return False
    return True


def _decompose_layers(p, args, outdir):
    dec = transforms.hyperplane_layers(p, args.ell0)
    names = []
    for i, layer in enumerate(dec.layers):
        name = f"part-{i:03d}.json"
        save_pilp(layer.pilp, outdir / name)
        names.append(name)
    detail = {
        "mode": "layers", "ell0": dec.ell0, "threshold": dec.threshold,
        "eventually_empty": dec.eventually_empty,
        "c": list(dec.c),
        "layers": [{"row_index": lay.row_index, "k": lay.k}
                   for lay in dec.layers],
    }
    if args.verify:
        detail["verify"] = {
            t: "pass" if _layer_check(p, dec, t) else "fail"
            for t in _parse_t_list(args.verify)}
    return names, detail


def _layer_check(p: PILP, dec, t: int) -> bool:
    """Top ell0 values of the source equal the top of the layer multiset."""
    want = oracle.f_ell(p, t, dec.ell0)
    pool = []
    for lay in dec.layers:
        pool.extend(oracle.f_ell(lay.pilp, t, dec.ell0))
    pool.sort(key=lambda v: (v is not BOTTOM, v), reverse=True)
    got = pool[:dec.ell0] + [BOTTOM] * (dec.ell0 - len(pool))
    return got == want


def _decompose_project(p, args, outdir):
    if args.row is None:
        _fail("project mode needs --row", EXIT_PARSE)
    coefs = tuple(int(s) for s in args.row.split(","))
    rhs = Poly(tuple(int(s) for s in args.rhs.split(","))) if args.rhs \
        else Poly((0, 1))
    spec = transforms.HyperplaneSpec(coefs, rhs, args.k)
    proj = transforms.project_to_hyperplane(p, spec)
    detail = {"mode": "project", "residue": list(proj.residue)
              if proj.residue else None}
    names = []
    if not proj.never:
        save_pilp(proj.reduced, outdir / "reduced.json")
        names.append("reduced.json")
        detail.update({
            "z": proj.z, "Z": poly_to_json(proj.Z),
            "correction": poly_to_json(proj.correction),
            "back": _map_to_json(proj.back),
        })
        if args.verify:
            detail["verify"] = {
                t: "pass" if _project_check(p, proj, t) else "fail"
                for t in _parse_t_list(args.verify)}
    elif args.verify:
        detail["verify"] = {
            t: "pass" if not _pinned_points(p, proj.spec, t) else "fail"
            for t in _parse_t_list(args.verify)}
    return names, detail


def _pinned_points(p: PILP, spec, t: int) -> list:
    want = int(spec.rhs(t)) - spec.k
    return [x for x in oracle.points_at(p, t)
            if sum(a * v for a, v in zip(spec.coefs, x)) == want]


def _project_check(p: PILP, proj, t: int) -> bool:
    if not proj.back.accepts(t):
        return not _pinned_points(p, proj.spec, t)
    pinned = set(_pinned_points(p, proj.spec, t))
    images = [proj.back.apply(t, y)
              for y in oracle.points_at(proj.reduced, t)]
    if len(images) != len(set(images)) or set(images) != pinned:
        return False
    # reduced objective values must recover the source's through (z, Z)
    for y in oracle.points_at(proj.reduced, t):
        v0 = _objective_at(proj.reduced, t, y)
        if proj.recover_value(v0, t) != _objective_at(
                p, t, proj.back.apply(t, y)):
            return False
    return True


_DECOMPOSE = {
    "slack": _decompose_slack,
    "translate": _decompose_translate,
    "digits": _decompose_digits,
    "layers": _decompose_layers,
    "project": _decompose_project,
}


def cmd_decompose(args) -> int:
    p, digest = _load(args.file)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        names, detail = _DECOMPOSE[args.mode](p, args, outdir)
    except InvalidProgramError as exc:
        _fail(f"{args.mode} does not apply: {exc}", EXIT_BAD_FORM)
    except oracle.UnboundedRelaxationError as exc:
        _fail(str(exc), EXIT_UNBOUNDED)
    config = {"mode": args.mode}
    for key in ("r", "ell0", "row", "rhs", "k", "verify"):
        if getattr(args, key, None) is not None:
            config[key] = getattr(args, key)
    manifest = _manifest(args, digest, config, outputs=names,
                         extra={"detail": detail})
    verify = detail.get("verify", {})
    failed = [t for t, status in verify.items() if status != "pass"]
    if failed:
        manifest["exit_status"] = 1
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    human = [f"wrote {len(names)} part file(s) to {outdir}"]
    human += [f"  {n}" for n in names]
    for t, status in verify.items():
        human.append(f"verify t={t}: {status}")
    _emit(args, human, manifest)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# hull


def cmd_hull(args) -> int:
    p, digest = _load(args.file)
    cfg = _config_from(args)
    try:
        result = hull.infer_hull_structure(p, cfg)
    except oracle.UnboundedRelaxationError as exc:
        _fail(str(exc), EXIT_UNBOUNDED)
    config = {"d_max": cfg.d_max, "deg_max": cfg.deg_max,
              "validate": cfg.validate_count, "t_start": cfg.t_start,
              "t_cap": cfg.t_cap}
    if isinstance(result, eqp.NoFit):
        structured = _manifest(args, digest, config, extra={
            "no_fit": {"reason": result.reason,
                       "attempts": len(result.tried)}})
        structured["exit_status"] = EXIT_NO_FIT
        _emit(args, [f"NO_FIT: {result.reason}"], structured)
        return EXIT_NO_FIT
    human = [f"period {result.period}, valid for t > {result.threshold}"]
    for j, cls in enumerate(result.classes):
        human.append(f"  t = {j} (mod {result.period}): {len(cls)} vertices")
        for vec in cls:
            human.append(
                "    (" + ", ".join(poly_str(c) for c in vec) + ")")
    verify_report = {}
    code = 0
    if args.verify:
        for t in _parse_t_list(args.verify):
            if t <= result.threshold:
                _fail(f"hull family only valid past t={result.threshold}",
                      EXIT_PARSE)
            cls = result.classes[t % result.period]
            predicted = sorted(
                tuple(int(c(t)) for c in vec) for vec in cls)
            pts = oracle.points_at(p, t)
            actual = sorted(pts[i] for i in oracle.hull_vertices(pts))
            ok = predicted == actual
            verify_report[t] = "pass" if ok else "fail"
            human.append(f"verify t={t}: {verify_report[t]}")
            if not ok:
                code = 1
    structured = _manifest(
        args, digest, config,
        outputs=[args.out] if args.out else (),
        extra={"family": hull.family_to_json(result),
               "verify": verify_report})
    structured["exit_status"] = code
    _emit(args, human, structured)
    if args.out:
        Path(args.out).write_text(
            json.dumps(hull.family_to_json(result), indent=2,
                       sort_keys=True) + "\n")
    return code


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    p, digest = _load(args.file)
    try:
        cert = eqp.certificate_from_json(
            json.loads(Path(args.cert).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        _fail(f"bad certificate file {args.cert}: {exc}", EXIT_PARSE)
    start = args.start if args.start else cert.qp.threshold + 1
    if start <= cert.qp.threshold:
        _fail(f"start must exceed the threshold {cert.qp.threshold}",
              EXIT_PARSE)
    sampler = eqp.oracle_sampler(p, args.ell, distinct=args.distinct)
    try:
        report = eqp.verify_qp(cert, sampler, range(start, start + args.count))
    except oracle.UnboundedRelaxationError as exc:
        _fail(str(exc), EXIT_UNBOUNDED)
    human = [f"checked {report.checked} parameters: "
             + ("all match" if report.passed else "MISMATCH")]
    for t, pred, act in report.mismatches:
        human.append(f"  t={t} predicted={_fmt_value(pred)} "
                     f"actual={_fmt_value(act)}")
    structured = _manifest(
        args, digest,
        {"ell": args.ell, "start": start, "count": args.count,
         "distinct": args.distinct},
        extra={"checked": report.checked, "passed": report.passed,
               "mismatches": [
                   [t, value_to_json(pr), value_to_json(ac)]
                   for t, pr, ac in report.mismatches]})
    structured["exit_status"] = 0 if report.passed else 1
    _emit(args, human, structured)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    p, digest = _load(args.file)
    if args.t_max < args.t_min:
        _fail("empty parameter range", EXIT_PARSE)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    ts = list(range(args.t_min, args.t_max + 1))
    rows = []
    try:
        for t in ts:
            count = oracle.count_lattice_points(p, t)
            values = oracle.f_ell(p, t, args.ell)
            rows.append((t, count, values))
    except oracle.UnboundedRelaxationError as exc:
        _fail(str(exc), EXIT_UNBOUNDED)
    csv_path = outdir / "values.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "count"]
                        + [f"f{k + 1}" for k in range(args.ell)])
        for t, count, values in rows:
            writer.writerow([t, count] + [_fmt_value(v) for v in values])
    png_path = outdir / "values.png"
    _render_figure(rows, args.ell, png_path)
    names = ["values.csv", "values.png"]
    manifest = _manifest(
        args, digest,
        {"ell": args.ell, "t_min": args.t_min, "t_max": args.t_max},
        outputs=names + ["manifest.json"])
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    _emit(args, [f"wrote {n} to {outdir}" for n in names], manifest)
    return 0


def _render_figure(rows, ell: int, path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax_f, ax_c) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True,
        gridspec_kw={"height_ratios": [2, 1]})
    ts = [t for t, _, _ in rows]
    for k in range(ell):
        series = [(t, values[k]) for t, _, values in rows
                  if values[k] is not BOTTOM]
        if series:
            ax_f.plot([t for t, _ in series], [v for _, v in series],
                      marker=".", linestyle="-", label=f"f{k + 1}")
    ax_f.set_ylabel("objective value")
    ax_f.legend(loc="best")
    ax_c.plot(ts, [count for _, count, _ in rows], marker=".", color="gray")
    ax_c.set_ylabel("|L(t)|")
    ax_c.set_xlabel("t")
    fig.tight_layout()
    # pin the PNG metadata so identical runs write identical figures
    fig.savefig(path, metadata={"Software": "pilp report"})
    plt.close(fig)


# ---------------------------------------------------------------------------
# examples


def cmd_examples(args) -> int:
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = args.names or sorted(EXAMPLES)
    written = []
    for name in names:
        if name not in EXAMPLES:
            _fail(f"unknown example {name!r}", EXIT_PARSE)
        path = outdir / f"{name}.json"
        save_pilp(EXAMPLES[name], path)
        written.append(path.name)
    human = []
    for name in names:
        p = EXAMPLES[name]
        cb = coordinate_bound_exponent(p)
        human.append(f"{name}: {BLURBS[name]} "
                     f"[{p.form.value}, n={p.n}, m={p.m}, r={cb.r}, T={cb.T}]")
    structured = _manifest(
        args, None, {"names": names}, outputs=written,
        extra={"programs": {n: pilp_to_json(EXAMPLES[n]) for n in names}})
    _emit(args, human + [f"wrote {len(written)} file(s) to {outdir}"],
          structured)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_cfg_flags(sp) -> None:
    sp.add_argument("--d-max", type=int, default=8,
                    help="largest period to try (default 8)")
    sp.add_argument("--deg-max", type=int, default=4,
                    help="largest branch degree to try (default 4)")
    sp.add_argument("--validate", type=int, default=2,
                    help="held-out checks per residue class (default 2)")
    sp.add_argument("--t-start", type=int, default=8,
                    help="first threshold guess (default 8)")
    sp.add_argument("--t-cap", type=int, default=300,
                    help="sampling budget in t (default 300)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pilp",
        description="Exact value functions of parametric integer programs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"),
                        default="human", help="output style")
    common.add_argument("--seedless", action="store_true",
                        help="assert the run uses no randomness (always true)")
    sub = ap.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("eval", parents=[common],
                        help="enumerate one parameter value")
    sp.add_argument("file")
    sp.add_argument("--t", type=int, default=10)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--distinct", action="store_true")
    sp.add_argument("--table", type=_t_range, default=None,
                    metavar="T1:T2", help="tabulate a parameter range")
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("infer", parents=[common],
                        help="fit an eventual quasi-polynomial")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--mode", choices=("direct", "constructive", "cross"),
                    default="direct")
    sp.add_argument("--distinct", action="store_true")
    sp.add_argument("--sampler",
                    choices=("floor-half", "gcd6", "sqrt-floor",
                             "simplex-diagonal"),
                    help="fit a scripted integer sequence instead of a file")
    sp.add_argument("--out", help="write the certificate as JSON")
    _add_cfg_flags(sp)
    sp.set_defaults(fn=cmd_infer)

    sp = sub.add_parser("decompose", parents=[common],
                        help="split a program into certified parts")
    sp.add_argument("file")
    sp.add_argument("--mode", required=True, choices=sorted(_DECOMPOSE))
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--r", type=int, default=None,
                    help="digit count / translation exponent override")
    sp.add_argument("--ell0", type=int, default=1,
                    help="rank cutoff for layers mode")
    sp.add_argument("--row", help="hyperplane normal a1,a2,... (project)")
    sp.add_argument("--rhs", help="hyperplane right side c0,c1 (project)")
    sp.add_argument("--k", type=int, default=0,
                    help="slab offset (project)")
    sp.add_argument("--verify",
                    help="run the bijection harness at t1,t2,...")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("hull", parents=[common],
                        help="fit the eventual vertex structure")
    sp.add_argument("file")
    sp.add_argument("--verify", help="re-check the family at t1,t2,...")
    sp.add_argument("--out", help="write the family as JSON")
    _add_cfg_flags(sp)
    sp.set_defaults(fn=cmd_hull)

    sp = sub.add_parser("verify", parents=[common],
                        help="re-check a saved certificate against "
                             "enumeration")
    sp.add_argument("file")
    sp.add_argument("--cert", required=True)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--start", type=int, default=None,
                    help="first parameter (default threshold+1)")
    sp.add_argument("--count", type=int, default=25)
    sp.add_argument("--distinct", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("report", parents=[common],
                        help="write a value table and figure")
    sp.add_argument("file")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--ell", type=int, default=3)
    sp.add_argument("--t-min", type=int, default=1)
    sp.add_argument("--t-max", type=int, default=30)
    sp.set_defaults(fn=cmd_report)

    sp = sub.add_parser("examples", parents=[common],
                        help="write the bundled example programs")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("names", nargs="*")
    sp.set_defaults(fn=cmd_examples)

    return ap


def _t_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected T1:T2, got {text!r}")
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return a, b


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except eqp.ConstructiveMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except oracle.EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
