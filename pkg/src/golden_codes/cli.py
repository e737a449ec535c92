"""Command-line front end: verify, build, toric, decode, lemma, rank.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 budget
exhausted.  Every run writes a JSON run manifest.  The number of decode
worker processes comes from GOLDEN_CODES_THREADS, defaulting to the
machine's CPU count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
THREADS_ENV = "GOLDEN_CODES_THREADS"


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- manifest


def _versions() -> dict:
    out = {"python": platform.python_version()}
    for pkg in ("golden-codes", "numpy", "scipy", "numba", "mpmath"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = None
    return out


@dataclass
class RunManifest:
    command: str
    parameters: dict
    versions: dict = field(default_factory=_versions)
    seeds: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    cache_paths: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    exit_code: int | None = None

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


# -------------------------------------------------------------- ideal specs


def parse_ideal(value: str):
    """`sqrt5`, an integer m, or `a,b` for the generator a + b*phi."""
    from .arith import SQRT5, GoldenInt, PrincipalIdeal

    text = value.strip().lower()
    try:
        if text in ("sqrt5", "√5"):
            gen = SQRT5
        elif "," in text:
            a, b = (int(x) for x in text.split(","))
            gen = GoldenInt(a, b)
        else:
            gen = GoldenInt(int(text), 0)
        return PrincipalIdeal(gen)
    except ValueError as exc:
        raise UsageError(f"bad ideal {value!r}: expected sqrt5, an integer, or a,b ({exc})") from None


# ----------------------------------------------------------------- commands


def _table(rows: list[tuple[str, bool, str]]) -> bool:
    width = max(len(name) for name, _, _ in rows)
    for name, ok, value in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {value}")
    return all(ok for _, ok, _ in rows)


def _rows_rings() -> list:
    from .arith import PHI, SQRT5, GoldenInt, PrincipalIdeal, QuarticInt, S

    i5 = PrincipalIdeal(SQRT5)
    label = i5.ring.prime_field_label(i5.ring.index(PHI))
    rows = [
        ("phi^2 = phi + 1", PHI * PHI == PHI + 1, str(PHI * PHI)),
        ("s^4 = s^2 + 1", S**4 == S**2 + 1, str(S**4)),
        ("N(sqrt5) = 5", i5.norm == 5, str(i5.norm)),
        ("Z[phi]/(sqrt5) = F_5", i5.ring.order == 5, f"order {i5.ring.order}"),
        ("phi -> 3 in F_5 for I=(sqrt5)", label == 3, f"phi -> {label}"),
        ("N(2) = 4", PrincipalIdeal(2).norm == 4, str(PrincipalIdeal(2).norm)),
        ("N(3) = 9", PrincipalIdeal(3).norm == 9, str(PrincipalIdeal(3).norm)),
    ]
    q = QuarticInt.coerce(GoldenInt(2, 3))
    rows.append(("Z[phi] embeds in Z[s]", q == 2 + 3 * S * S, str(q)))
    return rows


def _rows_geometry() -> list:
    from .arith import QuarticInt
    from .geometry import (
        conjugate_by_P,
        coxeter_generators,
        dihedral_angle,
        golden_scale,
        map_entries,
        mat_eq,
        metric_J,
        metric_J_tilde,
        preserves_metric,
        translation_generators,
    )

    t = golden_scale()
    theta = dihedral_angle(t)
    phi = (1 + 5**0.5) / 2
    rows = [
        ("dihedral angle = 2pi/5", abs(theta - 2 * math.pi / 5) < 1e-12, f"{theta:.15f} (2pi/5 = {2 * math.pi / 5:.15f})"),
        ("cosh(t) = phi", abs(math.cosh(t) - phi) < 1e-12, f"{math.cosh(t):.15f}"),
    ]
    J, Jt = metric_J(), metric_J_tilde()
    for i, (g, g_inv) in enumerate(translation_generators(), start=1):
        rows.append((f"g{i}^T J g{i} = J", preserves_metric(g, J) and preserves_metric(g_inv, J), "exact"))
    for i, r in enumerate(coxeter_generators("J")):
        rows.append((f"r{i}^T J r{i} = J", preserves_metric(r, J), "exact"))
    for i, r in enumerate(coxeter_generators("J_tilde")):
        rows.append((f"r{i}~^T J~ r{i}~ = J~", preserves_metric(r, Jt), "exact"))
    rJ, rJt = coxeter_generators("J")[4], coxeter_generators("J_tilde")[4]
    rows.append(("P^-1 r4 P = r4~", mat_eq(conjugate_by_P(rJ), map_entries(rJt, QuarticInt.coerce)), "exact"))
    return rows


def _rows_relations() -> list:
    from .arith import SQRT5, PrincipalIdeal
    from .geometry import coxeter_generators, verify_coxeter_relations
    from .group import InadmissibleIdeal, check_admissible, quotient_generators

    rows = []
    for metric in ("J", "J_tilde"):
        report = verify_coxeter_relations(coxeter_generators(metric))
        rows += [(f"{name} [{metric}]", ok, "exact") for name, ok in report.checked]
    i5 = PrincipalIdeal(SQRT5)
    try:
        check_admissible(quotient_generators(i5), i5.ring)
        rows.append(("relations mod sqrt5", True, "orders kept"))
    except InadmissibleIdeal as exc:
        rows.append(("relations mod sqrt5", False, str(exc)))
    return rows


def cmd_verify(args, manifest: RunManifest) -> int:
    scopes = ["rings", "geometry", "relations"] if args.scope == "all" else [args.scope]
    rows = []
    for scope in scopes:
        rows += {"rings": _rows_rings, "geometry": _rows_geometry, "relations": _rows_relations}[scope]()
    return EXIT_OK if _table(rows) else EXIT_FAIL


def _export(code, out: Path, manifest: RunManifest) -> dict:
    from .chain import code_metadata, write_alist, write_matrix_market

    out.mkdir(parents=True, exist_ok=True)
    for name, m in (("hx", code.hx), ("hz", code.hz)):
        write_matrix_market(m, out / f"{name}.mtx")
        write_alist(m, out / f"{name}.alist")
        manifest.outputs += [str(out / f"{name}.mtx"), str(out / f"{name}.alist")]
    meta = code_metadata(code)
    for key in ("family", "p", "qubit_dim"):
        if key in code.meta:
            meta[key] = code.meta[key]
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    manifest.outputs.append(str(out / "meta.json"))
    return meta


def cmd_build(args, manifest: RunManifest) -> int:
    from .chain import build_css_code
    from .group import InadmissibleIdeal, enumerate_group
    from .tessellation import build_tessellation, save_cache

    ideal = parse_ideal(args.ideal)
    t0 = time.perf_counter()
    try:
        group = enumerate_group(ideal)
    except InadmissibleIdeal as exc:
        print(f"ideal ({ideal.generator}) rejected: {exc}", file=sys.stderr)
        return EXIT_FAIL
    manifest.timing["enumerate_s"] = round(time.perf_counter() - t0, 3)
    t0 = time.perf_counter()
    tess = build_tessellation(group)
    del group
    manifest.timing["tessellate_s"] = round(time.perf_counter() - t0, 3)
    code = build_css_code(tess)
    out = Path(args.out)
    meta = _export(code, out, manifest)
    cache = out / "tessellation.gldc"
    save_cache(tess, cache)
    manifest.cache_paths.append(str(cache))
    print(f"n = {meta['n']}")
    print(f"chi = {meta['chi']}")
    print(f"k >= {meta['k_lower_bound']}")
    print(f"group_order = {meta['group_order']}")
    return EXIT_OK


def cmd_toric(args, manifest: RunManifest) -> int:
    from .chain import build_toric_code

    if args.p < 2:
        raise UsageError("--p must be at least 2")
    meta = _export(build_toric_code(args.p), Path(args.out), manifest)
    print(f"n = {meta['n']}")
    return EXIT_OK


def load_code(code_dir: Path):
    from .chain import CssCode, read_matrix_market

    meta = json.loads((code_dir / "meta.json").read_text())
    code = CssCode(read_matrix_market(code_dir / "hx.mtx"), read_matrix_market(code_dir / "hz.mtx"), meta=meta)
    return code, meta


def cmd_decode(args, manifest: RunManifest) -> int:
    from .decoders import DecoderContext, monte_carlo
    from .tessellation import load_cache

    if (args.weight is None) == (args.p is None):
        raise UsageError("give exactly one of --weight or --p")
    code_dir = Path(args.code)
    if not (code_dir / "meta.json").exists():
        raise UsageError(f"{code_dir} has no meta.json; run build or toric first")
    code, _ = load_code(code_dir)
    ctx = None
    cache = code_dir / "tessellation.gldc"
    if cache.exists():
        tess = load_cache(cache)
        manifest.cache_paths.append(str(cache))
        if tess.top_dim == 4:
            ctx = DecoderContext(tess, code)
    manifest.seeds["seed"] = args.seed
    result = monte_carlo(
        code, args.kind, args.trials, args.seed, weight=args.weight, p=args.p, ctx=ctx, workers=thread_count()
    )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(result.to_csv())
    manifest.outputs.append(str(args.out))
    print(f"decoder = {'cycle-shortening' if ctx else 'greedy pairing'}")
    print(f"success rate = {result.success_rate}")
    return EXIT_OK


def cmd_lemma(args, manifest: RunManifest) -> int:
    from .lemmas import search_lemma_4d, verify_lemma_2d, verify_lemma_120cell

    if args.which == "search4d":
        if args.budget is None:
            raise UsageError("lemma --which search4d needs --budget N (work units; 2000000 reaches depth 8 in under a minute)")
        report = search_lemma_4d(max_len=args.max_len, budget=args.budget)
    elif args.which == "2d":
        report = verify_lemma_2d()
    else:
        report = verify_lemma_120cell()
    print(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
        manifest.outputs.append(str(args.json))
    if report.counterexamples:
        return EXIT_FAIL
    return EXIT_BUDGET if report.budget_exhausted else EXIT_OK


def cmd_rank(args, manifest: RunManifest) -> int:
    from .chain import gf2_rank

    if args.budget is None:
        raise UsageError("rank needs --budget N (row XORs); the full golden matrices need billions")
    code, _ = load_code(Path(args.code))
    m = code.hx if args.matrix == "hx" else code.hz
    res = gf2_rank(m, budget=args.budget)
    print(f"rank {'=' if res.complete else '>='} {res.rank}")
    print(f"columns processed = {res.columns_processed}/{m.n_cols}")
    print(f"row ops = {res.row_ops}")
    return EXIT_OK if res.complete else EXIT_BUDGET


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="golden-codes", description=__doc__.splitlines()[0])
    ap.add_argument("--manifest", help="run manifest path (default: next to the outputs, else ./golden-codes-run.json)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact identity checks")
    p.add_argument("--scope", choices=["rings", "geometry", "relations", "all"], default="all")

    p = sub.add_parser("build", help="golden code for an ideal")
    p.add_argument("--ideal", default="sqrt5", help="sqrt5, an integer m, or a,b for a + b*phi")
    p.add_argument("--out", default="golden-code")

    p = sub.add_parser("toric", help="toric oracle code")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out", default="toric-code")

    p = sub.add_parser("decode", help="Monte Carlo decoding run")
    p.add_argument("--code", default=None, help="code directory (default: last toric/build --out default)")
    p.add_argument("--kind", choices=["Z", "X"], default="Z")
    p.add_argument("--weight", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="decode.csv")

    p = sub.add_parser("lemma", help="non-minimality lemma checks")
    p.add_argument("--which", choices=["2d", "120cell", "search4d"], required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--json", help="also write the machine-readable report")

    p = sub.add_parser("rank", help="budgeted GF(2) rank of an exported matrix")
    p.add_argument("--code", required=True)
    p.add_argument("--matrix", choices=["hx", "hz"], default="hx")
    p.add_argument("--budget", type=int)
    return ap


def _default_code_dir() -> str:
    for cand in ("toric-code", "golden-code"):
        if Path(cand, "meta.json").exists():
            return cand
    return "toric-code"


def _manifest_path(args) -> Path:
    if args.manifest:
        return Path(args.manifest)
    if args.command in ("build", "toric"):
        return Path(args.out) / "manifest.json"
    if args.command == "decode":
        return Path(str(args.out) + ".manifest.json")
    return Path("golden-codes-run.json")


COMMANDS = {
    "verify": cmd_verify,
    "build": cmd_build,
    "toric": cmd_toric,
    "decode": cmd_decode,
    "lemma": cmd_lemma,
    "rank": cmd_rank,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "decode" and args.code is None:
        args.code = _default_code_dir()
    params = {k: v for k, v in vars(args).items() if k not in ("command", "manifest")}
    manifest = RunManifest(command=args.command, parameters=params)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, manifest)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    manifest.timing["total_s"] = round(time.perf_counter() - t0, 3)
    manifest.exit_code = code
    manifest.write(_manifest_path(args))
    return code


if __name__ == "__main__":
    sys.exit(main())
