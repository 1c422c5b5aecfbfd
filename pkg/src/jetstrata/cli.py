"""Command-line front end.

Exit codes: 0 success, 1 bad input or domain error, 2 a checked identity
failed, 64 usage error.
"""

import argparse
import sys

import numpy as np

from . import bounds, embeddings, serialize, strata, symgroup, symplectic, tau
from .errors import DomainError, IdentityViolation
from .scalars import format_scalar, to_backend
from .tensors import MultiTensor, SymTensor, random_sym_tensor

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IDENTITY = 2
EXIT_USAGE = 64

DEFAULTS = {"seed": 0, "backend": "rational", "tol": None, "samples": 100}
CONFIG_KEYS = ("seed", "backend", "tol", "samples")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# configuration ---------------------------------------------------------------


def read_config(path):
    """key=value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc.strerror}") from None
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{num}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise DomainError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce_setting(key, value):
    try:
        if key in ("seed", "samples"):
            v = int(value)
            if v < 0:
                raise ValueError
            return v
        if key == "tol":
            return None if value in (None, "", "none") else float(value)
    except (TypeError, ValueError):
        raise DomainError(f"bad value {value!r} for {key}") from None
    if key == "backend" and value not in ("rational", "float"):
        raise DomainError(f"backend must be rational or float, got {value!r}")
    return value


def settings(args):
    """Flags over config file over defaults."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key in CONFIG_KEYS:
        if getattr(args, key, None) is not None:
            value = getattr(args, key)
        elif key in cfg:
            value = cfg[key]
        else:
            value = DEFAULTS[key]
        out[key] = _coerce_setting(key, value)
    return out


# input helpers -----------------------------------------------------------------


def _convert(arr, backend):
    flat = [to_backend(x, backend) for x in arr.reshape(-1)]
    return np.array(flat, dtype=object).reshape(arr.shape)


def _sym(T, backend):
    return SymTensor(T.k, T.d, T.w, {k: _convert(v, backend) for k, v in T.entries.items()})


def _family(obj, backend):
    """A list of SymTensor JSON blocks, or a jet JSON with an "A" list."""
    if isinstance(obj, dict) and "A" in obj:
        obj = obj["A"]
    if not isinstance(obj, list) or not obj:
        raise DomainError("expected a non-empty list of tensors")
    return [_sym(serialize.sym_from_json(a), backend) for a in obj]


def _space_for(w, backend):
    if w % 2:
        raise DomainError(f"target dimension {w} is odd")
    n = w // 2
    J = _convert(symplectic.standard_form(n), backend)
    return symplectic.SymplecticSpace(n, J)


def _multi(obj, backend):
    return MultiTensor(_convert(serialize.multi_from_json(obj).data, backend))


def _point(text, backend):
    try:
        return [to_backend(t, backend) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot parse point {text!r}") from None


def _points(args, emb, cfg, rng):
    if args.point:
        return [_point(p, cfg["backend"]) for p in args.point]
    exact = cfg["backend"] == "rational" and embeddings.is_exact(emb)
    return embeddings.sample_points(emb, cfg["samples"], rng, exact=exact)


def _embedding(path):
    emb = serialize.embedding_from_json(serialize.load(path))
    embeddings.source_dim(emb)  # validates the parameter block
    return emb


def _fmt_point(x):
    return [format_scalar(v) for v in x]


# commands ----------------------------------------------------------------------


def cmd_tau_build(args, cfg, rng):
    be = cfg["backend"]
    if args.random:
        if args.s is None or args.d is None or args.n is None:
            raise DomainError("--random needs --s, --d and --n")
        As = [random_sym_tensor(rng, k, args.d, 2 * args.n) for k in range(1, args.s + 1)]
        As = [_sym(a, be) for a in As]
    else:
        if not args.A:
            raise DomainError("give --A FILE or --random")
        As = _family(serialize.load(args.A), be)
    space = _space_for(As[0].w, be)
    T = tau.tau_build(space, As, args.variant)
    result = {"tau": serialize.multi_to_json(T)}
    if args.random:
        result["A"] = [serialize.sym_to_json(a) for a in As]
    return result, None


def cmd_tau_check(args, cfg, rng):
    T = _multi(serialize.load(args.T), cfg["backend"])
    report = tau.tau_property_check(T, cfg["tol"])
    text = "\n".join(f"({k}) {'holds' if v else 'fails'}" for k, v in report.items())
    return {"properties": report, "in_t_space": all(report.values())}, text


def cmd_tau_solve(args, cfg, rng):
    be = cfg["backend"]
    lower = _family(serialize.load(args.lower), be)
    target = _multi(serialize.load(args.target), be)
    space = _space_for(lower[0].w, be)
    As = tau.tau_solve_for_As(space, lower, target)
    return {"A_s": serialize.sym_to_json(As)}, None


def cmd_tspace_dim(args, cfg, rng):
    dim = symgroup.scalar_t_dim(args.s, args.c) if args.scalar else symgroup.t_dim(args.s, args.c, args.w)
    return {"s": args.s, "c": args.c, "w": 1 if args.scalar else args.w, "dim": dim}, str(dim)


def cmd_tspace_basis(args, cfg, rng):
    tb = symgroup.t_space_basis(args.s, args.d, args.w, args.method)
    symgroup.check_basis(tb)
    return {"dim": tb.dim, "basis": [serialize.multi_to_json(T) for T in tb.basis]}, None


def cmd_project(args, cfg, rng):
    T = _multi(serialize.load(args.T), cfg["backend"])
    s = T.order - 1
    if not 2 <= s <= symgroup.MAX_S:
        raise DomainError(f"projection needs order 3..{symgroup.MAX_S + 1}, got {T.order}")
    P = symgroup.project_T(symgroup.projection(s), T)
    return {"projected": serialize.multi_to_json(P)}, None


def cmd_stratum_member(args, cfg, rng):
    be = cfg["backend"]
    obj = serialize.load(args.jet)
    jet = serialize.jet_from_json(obj)
    jet = strata.JetPoint(_convert(jet.x, be), _convert(jet.y, be), [_sym(a, be) for a in jet.A])
    space = _space_for(jet.A[0].w, be)
    r = args.r if args.r is not None else jet.order
    res = strata.stratum_member(space, jet, c=args.c, r=r, tol=cfg["tol"])
    text = "member" if res["member"] else f"not a member (fails at level {res['failing_level']})"
    return dict(res, r=r), text


def cmd_stratum_codim(args, cfg, rng):
    if args.scalar:
        codim = strata.scalar_stratum_codim(args.c, args.r)
    else:
        codim = strata.stratum_codim(args.c, args.r, args.w)
    return {"c": args.c, "r": args.r, "codim": codim}, str(codim)


def cmd_stratum_transversality(args, cfg, rng):
    emb = _embedding(args.emb)
    x = _point(args.point, cfg["backend"])
    res = strata.transversality_check(emb, x, c=args.c, r=args.r, tol=cfg["tol"])
    text = f"rank {res['rank']} of codimension {res['codim']}: {'transverse' if res['transverse'] else 'not transverse'}"
    return dict(res, point=_fmt_point(x)), text


def cmd_classify(args, cfg, rng):
    emb = _embedding(args.emb)
    rows = []
    for x in _points(args, emb, cfg, rng):
        pc = embeddings.classify_point(emb, x, cfg["tol"])
        rows.append({"point": _fmt_point(x), "c": pc.c, "status": pc.status})
    text = "\n".join(f"{','.join(map(str, r['point']))}\tc={r['c']}\t{r['status']}" for r in rows)
    return {"points": rows}, text


def cmd_chardist(args, cfg, rng):
    emb = _embedding(args.emb)
    rows = []
    for x in _points(args, emb, cfg, rng):
        cd = embeddings.characteristic_distribution(emb, x, cfg["tol"])
        rows.append(
            {
                "point": _fmt_point(x),
                "vectors": [serialize.vector_to_json(v) for v in cd["vectors"]],
                "coisotropic": cd["coisotropic"],
                "residual": cd["residual"],
            }
        )
    return {"points": rows}, None


def cmd_stability(args, cfg, rng):
    emb = _embedding(args.emb)
    dim = embeddings.embedding_space(emb).dim
    forms = serialize.load(args.forms)
    if isinstance(forms, dict):
        forms = forms.get("forms", [])
    alphas = [embeddings.parse_one_form(f, dim) for f in forms]
    pts = _points(args, emb, cfg, rng)
    res = embeddings.stability_check(emb, alphas, pts, cfg["tol"] or 1e-10)
    vols = [float(v) for v in res["volumes"]]
    out = {
        "kernel_condition": res["kernel_condition"],
        "volume_condition": res["volume_condition"],
        "min_abs_volume": min((abs(v) for v in vols), default=None),
        "samples": len(pts),
    }
    text = f"kernel condition {res['kernel_condition']}, volume condition {res['volume_condition']}"
    return out, text


def cmd_lagcheck(args, cfg, rng):
    emb = _embedding(args.emb)
    pts = _points(args, emb, cfg, rng)
    res = embeddings.lagrangian_check(emb, pts, cfg["tol"] or 1e-12)
    text = f"lagrangian {res['lagrangian']}, contained {res['contained']}"
    return dict(res, samples=len(pts)), text


def cmd_minr(args, cfg, rng):
    if args.simplified:
        r = bounds.min_r_simplified(args.d, args.n)
    else:
        r = bounds.min_r(args.d, args.n, args.w)
    return {"d": args.d, "n": args.n, "min_r": r, "simplified": args.simplified}, str(r)


def cmd_tdim_table(args, cfg, rng):
    rows = bounds.tdim_table(args.cmax, args.wmax, args.smax, args.scalar)
    lines = [f"{'s':>3} {'c':>3} {'w':>3} {'dim':>8}"]
    lines += [f"{r['s']:>3} {r['c']:>3} {r['w']:>3} {r['dim']:>8}" for r in rows]
    return {"rows": rows}, "\n".join(lines)


def cmd_selftest(args, cfg, rng):
    from . import selftest

    chosen = selftest.CRITERIA
    if args.only:
        bad = [k for k in args.only if not 1 <= k <= len(chosen)]
        if bad:
            raise DomainError(f"no criterion {bad[0]}")
        chosen = [chosen[k - 1] for k in args.only]
    echo = None if args.json else print
    results = []
    for fn in chosen:
        res = fn()
        if echo:
            echo(res.line(), flush=True)
        results.append(res)
    out = {
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
            for r in results
        ]
    }
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise _SelftestFailure(out, failed)
    return out, ""


class _SelftestFailure(IdentityViolation):
    def __init__(self, payload, failed):
        super().__init__(f"criteria {failed} failed")
        self.payload = payload


# parser ------------------------------------------------------------------------


def _common():
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS, allow_abbrev=False)
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--backend", choices=("rational", "float"), help="scalar backend (default rational)")
    p.add_argument("--tol", type=float, help="pivot and zero threshold in float mode")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--config", help="key=value file for seed, backend, tol, samples")
    p.add_argument("--samples", type=int, help="sample count for sweeps (default 100)")
    return p


def build_parser():
    common = _common()
    parser = Parser(prog="jetstrata", description="Jet strata of coisotropic maps.", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=Parser)

    def leaf(group, name, fn, help_text):
        p = group.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=fn)
        return p

    tau_p = sub.add_parser("tau", help="build, check or solve for tau tensors")
    tau_sub = tau_p.add_subparsers(dest="action", metavar="ACTION", parser_class=Parser)
    p = leaf(tau_sub, "build", cmd_tau_build, "tau of a family A_1..A_s")
    p.add_argument("--A", help="JSON list of SymTensors (or a jet)")
    p.add_argument("--random", action="store_true", help="use a random family")
    p.add_argument("--s", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--variant", choices=("partition-sum", "perm-sum"), default="partition-sum")
    p = leaf(tau_sub, "check", cmd_tau_check, "check the tau identities on a MultiTensor")
    p.add_argument("--T", required=True)
    p = leaf(tau_sub, "solve", cmd_tau_solve, "find A_s with a prescribed tau")
    p.add_argument("--lower", required=True, help="JSON list A_1..A_{s-1}")
    p.add_argument("--target", required=True, help="MultiTensor JSON")

    ts = sub.add_parser("tspace", help="the spaces T_s")
    ts_sub = ts.add_subparsers(dest="action", metavar="ACTION", parser_class=Parser)
    p = leaf(ts_sub, "dim", cmd_tspace_dim, "dim T_s(R^c, R^w)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--scalar", action="store_true")
    p = leaf(ts_sub, "basis", cmd_tspace_basis, "basis of T_s(R^d, R^w)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--method", choices=("constraints", "idempotent"), default="constraints")

    p = leaf(sub, "project", cmd_project, "apply the projection to a MultiTensor")
    p.add_argument("--T", required=True)

    st = sub.add_parser("stratum", help="stratum membership, codimension, transversality")
    st_sub = st.add_subparsers(dest="action", metavar="ACTION", parser_class=Parser)
    p = leaf(st_sub, "member", cmd_stratum_member, "membership of a jet")
    p.add_argument("--jet", required=True)
    p.add_argument("--c", type=int)
    p.add_argument("--r", type=int)
    p = leaf(st_sub, "codim", cmd_stratum_codim, "codimension of the stratum")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--scalar", action="store_true")
    p = leaf(st_sub, "transversality", cmd_stratum_transversality, "rank of the jet map against the stratum")
    p.add_argument("--emb", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--c", type=int)

    for name, fn, help_text in (
        ("classify", cmd_classify, "kernel dimension and coisotropy at points"),
        ("chardist", cmd_chardist, "characteristic distribution at points"),
        ("lagcheck", cmd_lagcheck, "Lagrangian test at sample points"),
    ):
        p = leaf(sub, name, fn, help_text)
        p.add_argument("--emb", required=True)
        p.add_argument("--point", action="append", help="comma-separated coordinates (repeatable)")
    p = leaf(sub, "stability", cmd_stability, "stability conditions for 1-forms")
    p.add_argument("--emb", required=True)
    p.add_argument("--forms", required=True, help="JSON list of 1-form specs")
    p.add_argument("--point", action="append")

    p = leaf(sub, "minr", cmd_minr, "least jet order forced by the dimension count")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int)
    p.add_argument("--simplified", action="store_true")
    p = leaf(sub, "tdim-table", cmd_tdim_table, "table of dim T_s")
    p.add_argument("--cmax", type=int, required=True)
    p.add_argument("--wmax", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--scalar", action="store_true")

    p = leaf(sub, "selftest", cmd_selftest, "run the acceptance suite")
    p.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    return parser


def _emit(args, cfg, payload, text):
    if getattr(args, "json", False) or text is None:
        body = dict(payload)
        body["seed"] = cfg["seed"]
        body["backend"] = cfg["backend"]
        print(serialize.dumps(body))
    elif text:
        print(text)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code or 0
    args.json = getattr(args, "json", False)
    cfg = None
    try:
        cfg = settings(args)
        rng = np.random.default_rng(cfg["seed"])
        payload, text = args.func(args, cfg, rng)
    except _SelftestFailure as exc:
        if args.json:
            _emit(args, cfg, exc.payload, None)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except IdentityViolation as exc:
        print(f"identity violated: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except (DomainError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(args, cfg, payload, text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
