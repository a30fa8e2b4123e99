"""Command-line front-end.

Commands: choi, apply, classify, kraus, detect, upb, transpose-check,
teleport-demo.  Reports are line-oriented ``key: value`` text closed by a
single machine-readable ``summary:`` line.  Exit codes: 0 on success, 1 on
an analysis-negative verdict under --strict, 2 on input errors.  All
randomness flows from --seed, so identical inputs give identical reports.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import catalog, linalg, matio, positivity, teleport
from .chmap import SignedRep, apply_choi, kraus_of_cp, is_trace_preserving, signed_rep
from .errors import HdmkitError
from .positivity import SeeSawConfig
from .rand import complex_normal


def _fmt(x) -> str:
    return format(float(x), ".17g")


class Report:
    """Accumulates key: value lines and a final summary block."""

    def __init__(self, command: str):
        self._lines: list[str] = []
        self._summary: list[tuple[str, str]] = []
        self.emit("command", command)

    def emit(self, key: str, value) -> None:
        if isinstance(value, float):
            value = _fmt(value)
        self._lines.append(f"{key}: {value}")

    def tag(self, key: str, value) -> None:
        if isinstance(value, float):
            value = _fmt(value)
        self._summary.append((key, str(value)))

    def flush(self) -> None:
        for line in self._lines:
            print(line)
        if self._summary:
            print("summary: " + " ".join(f"{k}={v}" for k, v in self._summary))


def _parse_dims(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"dims must look like 's,L', got {text!r}")
    s, ell = int(parts[0]), int(parts[1])
    if s < 1 or ell < 1:
        raise ValueError("dims must be positive")
    return s, ell


def _load_choi(args) -> "catalog.Choi":
    dims = _parse_dims(args.dims) if getattr(args, "dims", None) else None
    return matio.read_choi(args.choi, dims)


def _config(args) -> SeeSawConfig:
    return SeeSawConfig(
        restarts=getattr(args, "restarts", 64),
        seed=getattr(args, "seed", 0))


def _build_map(name: str, ell: int, args, cfg: SeeSawConfig):
    if name == "transpose":
        return catalog.swap_operator(ell)
    if name == "reduction":
        return catalog.reduction_choi(ell)
    if name == "upb-eps":
        u = catalog.tiles_upb()
        if ell != u.dims[1]:
            raise ValueError(
                f"the shipped UPB map acts on dimension {u.dims[1]}, state has {ell}")
        eps = args.eps if args.eps is not None else 0.9 * catalog.min_product_overlap(u, cfg)
        n = u.dims[0] * u.dims[1]
        choi, _ = catalog.upb_positive_map(u, np.eye(n) / n, eps, cfg)
        return choi
    return matio.read_choi(name)


def cmd_choi(args) -> int:
    s, ell = _parse_dims(args.dims)
    kind = args.map
    if kind == "trace":
        choi = catalog.trace_choi(s, ell)
    else:
        if s != ell:
            raise ValueError(f"map {kind!r} needs equal dims, got {s},{ell}")
        builder = {
            "identity": catalog.identity_choi,
            "transpose": catalog.swap_operator,
            "reduction": catalog.reduction_choi,
        }.get(kind)
        if builder is None:
            raise ValueError(f"unknown map {kind!r}")
        choi = builder(ell)
    matio.write_choi(args.out, choi)
    rep = Report("choi")
    rep.emit("map", kind)
    rep.emit("dims", f"{s},{ell}")
    rep.emit("out", args.out)
    rep.tag("map", kind)
    rep.tag("out", args.out)
    rep.flush()
    return 0


def cmd_apply(args) -> int:
    choi = _load_choi(args)
    state, _ = matio.read_matrix(args.state)
    out = apply_choi(choi, state)
    rep = Report("apply")
    rep.emit("choi", args.choi)
    rep.emit("state", args.state)
    rep.emit("dims", f"{choi.dims[0]},{choi.dims[1]}")
    rep.emit("input-trace", float(np.trace(state).real))
    rep.emit("output-trace", float(np.trace(out).real))
    if args.out:
        matio.write_matrix(args.out, out)
        rep.emit("out", args.out)
    rep.tag("output_trace", float(np.trace(out).real))
    rep.flush()
    return 0


def cmd_classify(args) -> int:
    choi = _load_choi(args)
    cfg = _config(args)
    verdict = positivity.classify_map(choi, cfg)
    rep = Report("classify")
    rep.emit("choi", args.choi)
    rep.emit("dims", f"{choi.dims[0]},{choi.dims[1]}")
    rep.emit("seed", cfg.seed)
    rep.emit("restarts", verdict.restarts)
    rep.emit("iterations", verdict.iterations)
    rep.emit("converged", "yes" if verdict.converged else "no")
    rep.emit("verdict", verdict.verdict)
    rep.emit("min-eigenvalue", verdict.min_eigenvalue)
    if verdict.product_min is not None:
        rep.emit("product-min", verdict.product_min)
    rep.emit("tolerance", verdict.tol)
    if verdict.verdict == positivity.POSITIVE_NOT_CP:
        rep.emit("note", "positive verdict is heuristic: "
                         "no violating product state found within the budget")
    prefix = args.witness_prefix
    if verdict.witness_state is not None:
        path = f"{prefix}-psi.json"
        matio.write_vector(path, verdict.witness_state)
        rep.emit("witness-psi", path)
    if verdict.witness_product is not None:
        alpha, beta = verdict.witness_product
        pa, pb = f"{prefix}-alpha.json", f"{prefix}-beta.json"
        matio.write_vector(pa, alpha)
        matio.write_vector(pb, beta)
        rep.emit("witness-alpha", pa)
        rep.emit("witness-beta", pb)
    rep.tag("verdict", verdict.verdict)
    rep.tag("min_eigenvalue", verdict.min_eigenvalue)
    if verdict.product_min is not None:
        rep.tag("product_min", verdict.product_min)
    rep.flush()
    if args.strict and verdict.verdict == positivity.NOT_POSITIVE:
        return 1
    return 0


def cmd_kraus(args) -> int:
    choi = _load_choi(args)
    rep = Report("kraus")
    rep.emit("choi", args.choi)
    rep.emit("dims", f"{choi.dims[0]},{choi.dims[1]}")
    if args.signed:
        family = signed_rep(choi)
        rep.emit("positive-members", len(family.positive))
        rep.emit("negative-members", len(family.negative))
        rep.tag("positive", len(family.positive))
        rep.tag("negative", len(family.negative))
    else:
        kraus = kraus_of_cp(choi)
        family = SignedRep(kraus, [], choi.dims)
        tp = is_trace_preserving(kraus)
        rep.emit("members", len(kraus))
        rep.emit("trace-preserving", "yes" if tp else "no")
        rep.tag("members", len(kraus))
        rep.tag("trace_preserving", "yes" if tp else "no")
    manifest = matio.write_signed_rep(args.out_dir, family, args.prefix)
    rep.emit("manifest", manifest)
    rep.flush()
    return 0


def cmd_detect(args) -> int:
    s, ell = _parse_dims(args.dims)
    state, _ = matio.read_matrix(args.state)
    cfg = _config(args)
    choi = _build_map(args.map, ell, args, cfg)
    detected, min_eig = positivity.detect_entanglement(state, (s, ell), choi)
    rep = Report("detect")
    rep.emit("state", args.state)
    rep.emit("dims", f"{s},{ell}")
    rep.emit("map", args.map)
    rep.emit("detected", "yes" if detected else "no")
    rep.emit("min-eigenvalue", min_eig)
    rep.tag("detected", "yes" if detected else "no")
    rep.tag("min_eigenvalue", min_eig)
    rep.flush()
    if args.strict and not detected:
        return 1
    return 0


def cmd_upb(args) -> int:
    if args.build and args.file:
        raise ValueError("give either --build or --file, not both")
    if args.build:
        if args.build != "tiles":
            raise ValueError(f"unknown built-in basis {args.build!r}")
        u = catalog.tiles_upb()
        source = "tiles"
    elif args.file:
        u = matio.read_upb(args.file)
        source = args.file
    else:
        raise ValueError("a UPB source is required (--build or --file)")
    cfg = _config(args)
    s, ell = u.dims
    rep = Report("upb")
    rep.emit("source", source)
    rep.emit("dims", f"{s},{ell}")
    rep.emit("members", u.size)
    rep.emit("emit", args.emit)

    if args.emit == "projector":
        if not args.out:
            raise ValueError("--emit projector needs --out")
        p = catalog.upb_projector(u)
        matio.write_matrix(args.out, p, u.dims)
        rep.emit("rank", int(round(np.trace(p).real)))
        rep.emit("out", args.out)
        rep.tag("out", args.out)
    elif args.emit == "state":
        if not args.out:
            raise ValueError("--emit state needs --out")
        rho = catalog.upb_state(u)
        matio.write_matrix(args.out, rho, u.dims)
        _, pt_min = linalg.is_psd(linalg.partial_transpose(rho, u.dims, 2))
        rep.emit("trace", float(np.trace(rho).real))
        rep.emit("pt-min-eigenvalue", pt_min)
        rep.emit("out", args.out)
        rep.tag("out", args.out)
    elif args.emit == "epsilon":
        value = catalog.min_product_overlap(u, cfg)
        bound = u.size / (s * ell)
        rep.emit("seed", cfg.seed)
        rep.emit("restarts", cfg.restarts)
        rep.emit("epsilon", value)
        rep.emit("upper-bound", bound)
        rep.emit("bound-check", "pass" if 0.0 < value <= bound + 1e-9 else "fail")
        rep.tag("epsilon", value)
    elif args.emit == "map":
        if not args.out:
            raise ValueError("--emit map needs --out")
        eps = args.eps
        if eps is None:
            eps = 0.9 * catalog.min_product_overlap(u, cfg)
        n = s * ell
        choi, kraus = catalog.upb_positive_map(u, np.eye(n) / n, eps, cfg)
        matio.write_choi(args.out, choi)
        rep.emit("eps", float(eps))
        rep.emit("out", args.out)
        if args.kraus_dir:
            family = SignedRep(kraus, [], u.dims)
            manifest = matio.write_signed_rep(args.kraus_dir, family, "upb-kraus")
            rep.emit("kraus-manifest", manifest)
        rep.tag("eps", float(eps))
        rep.tag("out", args.out)
    else:
        raise ValueError(f"unknown emit target {args.emit!r}")
    rep.flush()
    return 0


def cmd_transpose_check(args) -> int:
    ell = args.L
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        rho = complex_normal((ell, ell), rng)
        worst = max(worst, float(np.linalg.norm(
            rho.T - catalog.transpose_via_difference(rho))))
    rep = Report("transpose-check")
    rep.emit("L", ell)
    rep.emit("trials", args.trials)
    rep.emit("seed", args.seed)
    rep.emit("max-deviation", worst)
    rep.tag("max_deviation", worst)
    rep.flush()
    return 0


def cmd_teleport_demo(args) -> int:
    if args.resource == "bell":
        t_phi = np.eye(2, dtype=np.complex128) / np.sqrt(2.0)
    else:
        t_phi, _ = matio.read_hdm(args.resource)
    psi = matio.read_vector(args.state)
    result = teleport.teleport_expand(t_phi, psi)
    rep = Report("teleport-demo")
    rep.emit("resource", args.resource)
    rep.emit("state", args.state)
    rep.emit("basis", args.basis)
    rep.emit("maximally-entangled-resource",
             "yes" if result.maximally_entangled else "no")
    if not result.maximally_entangled:
        rep.emit("note", "conditional states reported without correction")
    for o in result.outcomes:
        rep.emit(f"outcome-{o.k}{o.l}",
                 f"probability={_fmt(o.probability)} fidelity={_fmt(o.fidelity)} "
                 f"corrected={'yes' if o.corrected else 'no'}")
        cond = " ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in o.conditional)
        rep.emit(f"conditional-{o.k}{o.l}", cond)
    rep.emit("expansion-residual", result.residual)
    rep.tag("residual", result.residual)
    rep.tag("min_fidelity", min(o.fidelity for o in result.outcomes))
    rep.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdmkit",
        description="Analyze Hermitian maps and bipartite states "
                    "through their Choi matrices.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("choi", help="write a catalog Choi matrix to a file")
    p.add_argument("--map", required=True,
                   choices=["identity", "transpose", "reduction", "trace"])
    p.add_argument("--dims", required=True, help="factor dimensions, e.g. 2,2")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("apply", help="apply a Choi-encoded map to a state file")
    p.add_argument("--choi", required=True)
    p.add_argument("--dims", help="override/confirm the Choi dims")
    p.add_argument("--state", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("classify", help="CP / positive / not-positive verdict")
    p.add_argument("--choi", required=True)
    p.add_argument("--dims")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true",
                   help="exit 1 on a NotPositive verdict")
    p.add_argument("--witness-prefix", default="witness")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("kraus", help="extract an operator-sum family")
    p.add_argument("--choi", required=True)
    p.add_argument("--dims")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--prefix", default="kraus")
    p.add_argument("--signed", action="store_true",
                   help="write the signed two-family representation")
    p.set_defaults(func=cmd_kraus)

    p = sub.add_parser("detect", help="apply identity ⊗ map to a state")
    p.add_argument("--state", required=True)
    p.add_argument("--dims", required=True)
    p.add_argument("--map", required=True,
                   help="transpose | reduction | upb-eps | choi file")
    p.add_argument("--eps", type=float)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true",
                   help="exit 1 when nothing is detected")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("upb", help="unextendible-product-basis artifacts")
    p.add_argument("--build", help="built-in basis name (tiles)")
    p.add_argument("--file", help="UPB document to load")
    p.add_argument("--emit", required=True,
                   choices=["projector", "state", "map", "epsilon"])
    p.add_argument("--out")
    p.add_argument("--eps", type=float)
    p.add_argument("--kraus-dir")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_upb)

    p = sub.add_parser("transpose-check",
                       help="verify the difference decomposition of transposition")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_transpose_check)

    p = sub.add_parser("teleport-demo",
                       help="expand a resource + input state over the Bell basis")
    p.add_argument("--resource", required=True, help="bell | HDM file")
    p.add_argument("--state", required=True, help="input state vector file")
    p.add_argument("--basis", default="bell", choices=["bell"])
    p.set_defaults(func=cmd_teleport_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (HdmkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
