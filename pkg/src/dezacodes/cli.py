"""Command-line entry point: ``dezacodes <group> <command> [options]``.

Every command prints ``CHECK <name> PASS|FAIL <detail>`` lines sorted by name
(or a JSON document with ``--json``) and exits 0 iff nothing failed.  Input
problems exit with status 2 and a one-line message on stderr.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__, codes, deza, designs, io, partitions, schemes
from .exactmat import ShapeError
from .gf import FieldError, parse_field
from .report import Check, render

EXIT_FAIL = 1
EXIT_ERROR = 2


class UsageError(ValueError):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _verdict(name: str, verdict, extra: str = "") -> Check:
    detail = verdict.detail
    if not verdict and verdict.witness is not None:
        detail += f" witness={verdict.witness}"
    return Check(name, bool(verdict), (detail + (" " + extra if extra else "")).strip())


def _span_config(args, precheck: bool = True) -> codes.SpanConfig:
    return codes.SpanConfig(sample=getattr(args, "sample", None), seed=args.seed, precheck=precheck)


# ---------------------------------------------------------------------------
# deza
# ---------------------------------------------------------------------------


def cmd_deza(args) -> list[Check]:
    field = parse_field(args.field)
    if args.action == "verify":
        return deza.run_suite(field)[0]
    fam = deza.build_family(field)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for alpha, nm in enumerate(fam.members):
        name = f"N_{alpha}.mat"
        io.write_matrix(out / name, nm)
        names.append(name)
    params = deza.expected_params(field.q)
    io.write_manifest(
        out / "manifest.txt",
        {
            "kind": "deza-family",
            "field": field.descriptor,
            "files": ",".join(names),
            "params": ",".join(map(str, params.astuple())),
        },
    )
    try:
        fam.check_invariants()
        ok = True
    except deza.LemmaMismatch:
        ok = False
    return [Check("build", ok, f"wrote {len(names)} matrices of order {fam.n} to {out}")]


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------


def _family_field(args):
    mats, manifest, _ = io.read_family(args.family)
    text = args.field or manifest.get("field")
    if not text:
        raise UsageError("no field given: pass --field or set field= in the manifest")
    return mats, parse_field(text)


def cmd_codes(args) -> list[Check]:
    if args.action in ("build-so", "build-lcd"):
        mats, field = _family_field(args)
        pre = designs.divisibility_precheck(mats, field.p)
        checks = [_verdict("precheck", pre)]
        if not pre:
            return checks
        build = codes.build_so_code if args.action == "build-so" else codes.build_lcd_code
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            code = build(mats, field, _span_config(args, precheck=False))
        note = f"members={len(code)} ambient={code.ambient_dim} skipped_zero={code.skipped_zero}"
        if not code.exhaustive:
            note += f" sampled={args.sample}"
        checks.append(Check("build", True, note))
        if args.out:
            io.write_code(args.out, code)
        if args.action == "build-so":
            checks.append(_verdict("self_orthogonal", codes.is_self_orthogonal(code)))
        else:
            checks.append(_verdict("lcd", codes.is_lcd(code)))
        return checks
    code = io.read_code(args.code)
    if args.action == "mindist":
        d, i, j = codes.closest_pair(code)
        return [Check("mindist", True, f"d={d} pair=({i},{j})")]
    checks = []
    if args.property in ("lcd", "all"):
        checks.append(_verdict("lcd", codes.is_lcd(code)))
    if args.property in ("so", "all"):
        checks.append(_verdict("self_orthogonal", codes.is_self_orthogonal(code)))
    return checks


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------


def _need(args, attr: str):
    val = getattr(args, attr)
    if val is None:
        raise UsageError(f"--{attr.replace('_', '-')} is required for --kind {args.kind}")
    return val


def _linked_system(directory: str) -> designs.LinkedSystem:
    d = Path(directory)
    manifest = io.read_manifest(d / "manifest.txt")
    f = int(manifest["f"])
    mats = {}
    for i in range(f):
        for j in range(f):
            if i != j:
                path = d / f"A_{i}_{j}.mat"
                if not path.exists():
                    raise io.FormatError(str(path), None, "missing linked-system matrix")
                mats[i, j] = io.read_matrix(path)

    def opt(key):
        return int(manifest[key]) if key in manifest else None

    return designs.LinkedSystem(
        f, mats, manifest.get("type", "symmetric"), tuple(_ints(manifest["params"])), opt("sigma"), opt("tau"), opt("rho")
    )


def cmd_designs(args) -> list[Check]:
    kind = args.kind
    if kind == "weighing":
        w = io.read_matrix(_need(args, "matrix"))
        k = args.k if args.k is not None else int((w @ w.T).array[0, 0])
        return [Check("weighing", designs.is_weighing(w, k), f"order={w.rows} k={k}")]
    if kind in ("quasi-unbiased", "mquwm"):
        mats, _, _ = io.read_family(_need(args, "family"))
        n, k, l, a = _ints(_need(args, "params"))
        params = designs.WeighingParams(n, k, l, a)
        if kind == "mquwm":
            return [_verdict("mquwm", designs.verify_mquwm(mats, params))]
        if len(mats) != 2:
            raise UsageError("quasi-unbiased needs exactly two matrices")
        return [_verdict("quasi_unbiased", designs.are_quasi_unbiased(mats[0], mats[1], params))]
    if kind == "symmetric":
        a = io.read_matrix(_need(args, "matrix"))
        v, k, lam = _ints(_need(args, "params"))
        return [Check("symmetric_design", designs.is_symmetric_design(a, v, k, lam), f"({v},{k},{lam})")]
    if kind == "sgdd":
        a = io.read_matrix(_need(args, "matrix"))
        ps = _ints(_need(args, "params"))
        checks = [Check("sgdd", designs.is_sgdd(a, *ps), "(" + ",".join(map(str, ps)) + ")")]
        if checks[0].ok:
            checks.append(_verdict("sgdd_quotient", partitions.sgdd_quotient_identity(a, *ps)))
        return checks
    if kind == "linked":
        ls = _linked_system(_need(args, "family"))
        v = designs.verify_linked_system(ls)
        checks = [_verdict("linked_system", v)]
        if args.prime is not None and ls.f >= 3:
            fam = designs.linked_system_family(ls)
            checks.append(_verdict("precheck", designs.divisibility_precheck(fam, args.prime)))
        return checks
    if kind == "precheck":
        mats, _, _ = io.read_family(_need(args, "family"))
        return [_verdict("precheck", designs.divisibility_precheck(mats, _need(args, "prime")))]
    raise UsageError(f"unknown design kind {kind!r}")


# ---------------------------------------------------------------------------
# scheme
# ---------------------------------------------------------------------------


def _read_scheme(directory: str) -> tuple[schemes.AssociationScheme, dict[str, str]]:
    d = Path(directory)
    manifest = io.read_manifest(d / "manifest.txt") if (d / "manifest.txt").exists() else {}
    mats = []
    k = 0
    while (d / f"A_{k}.mat").exists():
        mats.append(io.read_matrix(d / f"A_{k}.mat"))
        k += 1
    if not mats:
        raise io.FormatError(str(d), None, "no A_0.mat found")
    if "classes" in manifest and int(manifest["classes"]) != len(mats) - 1:
        raise io.FormatError(str(d / "manifest.txt"), None, f"classes={manifest['classes']} but found {len(mats) - 1}")
    return schemes.verify_scheme(mats), manifest


def cmd_scheme(args) -> list[Check]:
    try:
        scheme, manifest = _read_scheme(args.scheme)
    except schemes.SchemeAxiomError as exc:
        return [Check("scheme", False, str(exc))]
    kind = "symmetric" if scheme.symmetric else ("commutative" if scheme.commutative else "non-commutative")
    checks = [Check("scheme", True, f"points={scheme.n} classes={scheme.d} {kind}")]
    if args.action == "verify":
        for i in range(scheme.d + 1):
            rows = ";".join(",".join(map(str, r)) for r in scheme.intersection_matrix(i).tolist())
            checks.append(Check(f"scheme.B{i}", True, rows))
        return checks
    index = _ints(args.set) if args.set is not None else _ints(manifest.get("set", ""))
    if args.action == "gate":
        p = args.prime if args.prime is not None else int(manifest.get("prime", 0)) or None
        if p is None:
            raise UsageError("--prime is required")
        checks.append(_verdict("gate", schemes.corollary_gate(scheme, index, p)))
        return checks
    field = parse_field(args.field or manifest.get("field") or f"{args.prime}^1")
    gate = schemes.corollary_gate(scheme, index, field.p)
    checks.append(_verdict("gate", gate))
    if not gate:
        return checks
    part = io.read_partition(args.partition, scheme.n) if args.partition else None
    code = schemes.bose_mesner_code(scheme, index, field, part, _span_config(args))
    checks.append(Check("build", True, f"members={len(code)} ambient={code.ambient_dim}"))
    checks.append(_verdict("self_orthogonal", codes.is_self_orthogonal(code)))
    if args.out:
        io.write_code(args.out, code)
    return checks


# ---------------------------------------------------------------------------
# partition
# ---------------------------------------------------------------------------


def cmd_partition(args) -> list[Check]:
    m = io.read_matrix(args.matrix)
    if args.partition:
        part = io.read_partition(args.partition, m.rows)
    elif args.perms:
        part = partitions.orbit_partition(m.rows, io.read_permutations(args.perms))
    else:
        raise UsageError("give --partition or --perms")
    v = partitions.verify_equitable(m, part)
    checks = [_verdict("equitable", v)]
    if args.action == "verify" or not v:
        return checks
    q = partitions.quotient(m, part)
    checks.append(Check("quotient", True, f"{part.t}x{part.t}"))
    if args.out:
        io.write_matrix(args.out, q.matrix)
    else:
        sys.stdout.write(io.format_matrix(q.matrix))
    return checks


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled span enumeration (default 0)")

    parser = argparse.ArgumentParser(prog="dezacodes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("deza", help="finite-field Deza graph family")
    sub = g.add_subparsers(dest="action", required=True)
    b = sub.add_parser("build", parents=[common], help="write each N_alpha and a manifest")
    b.add_argument("--field", required=True, help="p^m or p^m/c0,...,cm")
    b.add_argument("--out", required=True, help="output directory")
    v = sub.add_parser("verify", parents=[common], help="run every construction identity")
    v.add_argument("--field", required=True)
    g.set_defaults(func=cmd_deza)

    g = groups.add_parser("codes", help="span codes from matrix families")
    sub = g.add_subparsers(dest="action", required=True)
    for name in ("build-so", "build-lcd"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("--family", required=True, help="directory of .mat files (manifest.txt optional)")
        c.add_argument("--field", help="defaults to field= in the manifest")
        c.add_argument("--out", help="write the code file here")
        c.add_argument("--sample", type=int, help="draw this many random span elements instead of enumerating")
    for name in ("mindist", "check"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("--code", required=True, help="code file")
        if name == "check":
            c.add_argument("--property", choices=["so", "lcd", "all"], default="all", help="which verdicts to report")
    g.set_defaults(func=cmd_codes)

    g = groups.add_parser("designs", help="design verifiers")
    sub = g.add_subparsers(dest="action", required=True)
    c = sub.add_parser("verify", parents=[common])
    c.add_argument(
        "--kind",
        required=True,
        choices=["weighing", "quasi-unbiased", "mquwm", "symmetric", "sgdd", "linked", "precheck"],
    )
    c.add_argument("--matrix")
    c.add_argument("--family")
    c.add_argument("--params", help="comma-separated parameters")
    c.add_argument("--k", type=int)
    c.add_argument("--prime", type=int)
    g.set_defaults(func=cmd_designs)

    g = groups.add_parser("scheme", help="association schemes")
    sub = g.add_subparsers(dest="action", required=True)
    for name in ("verify", "gate", "code"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("--scheme", required=True, help="directory with A_0.mat ... A_d.mat")
        c.add_argument("--set", help="class index set, e.g. 1,2")
        c.add_argument("--prime", type=int)
        if name == "code":
            c.add_argument("--field")
            c.add_argument("--partition")
            c.add_argument("--out")
            c.add_argument("--sample", type=int)
    g.set_defaults(func=cmd_scheme)

    g = groups.add_parser("partition", help="equitable partitions and quotients")
    sub = g.add_subparsers(dest="action", required=True)
    for name in ("verify", "quotient"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("--matrix", required=True)
        c.add_argument("--partition")
        c.add_argument("--perms", help="generators in image notation; cells are their orbits")
        if name == "quotient":
            c.add_argument("--out")
    g.set_defaults(func=cmd_partition)
    return parser


_INPUT_ERRORS = (
    UsageError,
    FieldError,
    ShapeError,
    io.FormatError,
    codes.EmptySpanError,
    codes.SpanTooLargeError,
    partitions.PartitionHypothesisError,
    designs.PrecheckError,
    FileNotFoundError,
    KeyError,
    ValueError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        checks = args.func(args)
    except _INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    print(render(checks, as_json=args.json))
    return 0 if all(c.ok for c in checks) else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
