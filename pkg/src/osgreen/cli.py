"""Command-line front end: ``osgreen {tables, evans-scan, green, verify, diag}``."""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .config import ConfigError, RunConfig, load_config
from .io import AIRY_COLUMNS, EVANS_COLUMNS, GREEN_COLUMNS, sha256_file, write_csv, write_json

__all__ = ["main", "build_parser"]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------
def _default_jobs():
    try:
        return max(1, int(os.environ.get("OSGREEN_JOBS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    flags = {
        "nu": "params.nu",
        "alpha_scale": "params.alpha_scale",
        "c_re_scale": "params.c_re_scale",
        "c_im_scale": "params.c_im_scale",
        "sigma0": "params.sigma0",
        "sigma1": "params.sigma1",
        "profile": "profile.kind",
        "U_plus": "profile.U_plus",
        "beta": "profile.beta",
        "seed": "run.seed",
        "out": "run.out",
    }
    for attr, key in flags.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg.override(key, val, origin=f"--{attr.replace('_', '-')}")
    return cfg


def _manifest(cfg, command, files, extra=None):
    return {
        "command": command,
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "config": cfg.as_dict(),
        "files": {Path(f).name: sha256_file(f) for f in files},
        **(extra or {}),
    }


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------
def cmd_tables(cfg, args):
    from .special import airy_all, airy_bi, ci_all

    out = Path(cfg["run.out"])
    r, n, arg = cfg["tables.radius"], cfg["tables.n"], cfg["tables.arg"]
    if arg is None:
        t = np.linspace(-r, r, n)
        z = (t[None, :] + 1j * t[:, None]).ravel()
    else:
        z = np.linspace(0.0, r, n) * np.exp(1j * arg)
    ai, aip, ai1, ai2 = airy_all(z)
    ci = ci_all(z)[0]
    bi = airy_bi(z).value
    with np.errstate(divide="ignore", invalid="ignore"):
        ti = np.where(np.abs(ai2) > 1e-14 * np.abs(ai1), ai1 / ai2, np.nan)
    files = []
    for name, vals in [("ai", ai), ("aip", aip), ("ai1", ai1), ("ai2", ai2), ("bi", bi), ("ci", ci), ("tietjens", ti)]:
        rows = zip(z.real, z.imag, np.real(vals), np.imag(vals))
        files.append(write_csv(out / f"airy_{name}.csv", AIRY_COLUMNS, rows))
    write_json(out / "manifest.json", _manifest(cfg, "tables", files))
    print(f"wrote {len(files)} tables to {out}")
    return 0


# ---------------------------------------------------------------------------
# evans-scan
# ---------------------------------------------------------------------------
def _evans_point(task):
    model, prof_spec, nu, alpha, c, sigma0 = task
    from .green import NearEigenvalueError, evans, evans_tietjens
    from .oracle import DirectSolver
    from .profile import make_params, profile_from_spec

    prof = profile_from_spec(**prof_spec)
    try:
        if model == "direct":
            return DirectSolver(prof, nu, alpha, c).evans()[0]
        p = make_params(prof, nu, alpha, c, sigma0=sigma0, check_gap=False)
        return evans_tietjens(p) if model == "tietjens" else evans(p)
    except (NearEigenvalueError, ArithmeticError, RuntimeError, ValueError):
        return complex(np.nan, np.nan)


def cmd_evans_scan(cfg, args):
    case = cfg.single_case()
    q = case.nu ** 0.25
    model = "direct" if args.direct else args.model
    re = np.linspace(cfg["scan.c_re_min"], cfg["scan.c_re_max"], cfg["scan.n_re"])
    im = np.linspace(cfg["scan.c_im_min"], cfg["scan.c_im_max"], cfg["scan.n_im"])
    if model != "direct" and im.min() <= 0:
        raise ConfigError("scan.c_im_min must be positive for the asymptotic Evans function")
    prof = cfg.profile().spec()
    prof_spec = {k: prof[k] for k in ("kind", "U_plus", "beta")}
    cs = [complex(a, b) * q for b in im for a in re]
    tasks = [(model, prof_spec, case.nu, case.alpha, c, cfg["params.sigma0"]) for c in cs]
    W = np.array(_pmap(_evans_point, tasks, args.jobs))
    out = Path(cfg["run.out"])
    f = write_csv(out / f"evans_{model}.csv", EVANS_COLUMNS,
                  zip(np.real(cs), np.imag(cs), W.real, W.imag, np.abs(W)))
    grid = W.reshape(im.size, re.size)
    changes = []
    for i in range(im.size):
        s = np.sign(grid[i].real)
        for j in np.nonzero(s[:-1] * s[1:] < 0)[0]:
            changes.append({"c_im": im[i] * q, "c_re_between": [re[j] * q, re[j + 1] * q]})
    extra = {"model": model, "case": case.__dict__, "sign_changes": changes,
             "nan_points": int(np.isnan(W.real).sum())}
    write_json(out / "evans_manifest.json", _manifest(cfg, "evans-scan", [f], extra))
    print(f"wrote {len(cs)} rows to {f}; {len(changes)} sign changes of Re W")
    return 0


# ---------------------------------------------------------------------------
# green
# ---------------------------------------------------------------------------
def _table_rows(x, z, G, dG):
    X, Z = np.meshgrid(x, z, indexing="ij")
    return zip(X.ravel(), Z.ravel(), G.real.ravel(), G.imag.ravel(), dG.real.ravel(), dG.imag.ravel())


def _green_case(task):
    cfg_values, case, mode, outdir = task
    from .green import GreenAssembler, default_x_grid, default_z_grid
    from .oracle import DirectSolver, compare

    cfg = RunConfig(values=cfg_values)
    p = cfg.params(case)
    xg = default_x_grid(p)
    zg = default_z_grid(p, xg)
    outdir = Path(outdir)
    files, meta = [], {"case": case.__dict__, "nx": int(xg.size), "nz": int(zg.size)}
    app = direct = None
    if mode in ("approx", "both"):
        app = GreenAssembler(p).table(xg, zg, with_P=False)
        meta["approx"] = {"W": app.meta.get("W"), "max_jump_error": float(app.jump_errors.max()),
                          "max_boundary_error": float(app.boundary_errors.max())}
        files.append(write_csv(outdir / "green_approx.csv", GREEN_COLUMNS, _table_rows(xg, zg, app.G, app.dzG)))
    if mode in ("direct", "both"):
        G, dG, info = DirectSolver.from_params(p).table(xg, zg)
        meta["direct"] = {"steps": info["nsteps"], "dopri_error": info["errmax"],
                          "max_jump_error": float(info["jump_errors"].max())}
        direct = type("T", (), dict(x_grid=xg, z_grid=zg, G=G, dzG=dG))
        files.append(write_csv(outdir / "green_direct.csv", GREEN_COLUMNS, _table_rows(xg, zg, G, dG)))
    if app is not None and direct is not None:
        meta["compare"] = compare(p, app, direct)
    meta["params"] = p.as_dict()
    return [str(f) for f in files], meta


def cmd_green(cfg, args):
    mode = "direct" if args.direct else "both" if args.both else "approx"
    cases = cfg.cases()
    out = Path(cfg["run.out"])
    dirs = [out if len(cases) == 1 else out / f"case_{i:05d}" for i in range(len(cases))]
    results = _pmap(_green_case, [(cfg.values, c, mode, d) for c, d in zip(cases, dirs)], args.jobs)
    files = [f for fs, _ in results for f in fs]
    write_json(out / "green_manifest.json", _manifest(cfg, "green", files, {"mode": mode, "cases": [m for _, m in results]}))
    print(f"wrote {len(files)} Green tables to {out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------
def _verify_case(p, against_direct, checks, tag):
    from .green import GreenAssembler, default_x_grid, default_z_grid, evans
    from .oracle import DirectSolver, compare, direct_evans

    A = GreenAssembler(p)
    xg = default_x_grid(p)
    zg = default_z_grid(p, xg)
    T = A.table(xg, zg, with_P=False)
    checks.append(dict(name=f"{tag} jump [eps G'''] = -1", value=float(T.jump_errors.max()), limit=1e-3))
    checks.append(dict(name=f"{tag} boundary G = dG = 0", value=float(T.boundary_errors.max()), limit=1e-8))
    res = {}
    if against_direct:
        G, dG, info = DirectSolver.from_params(p).table(xg, zg)
        D = type("T", (), dict(x_grid=xg, z_grid=zg, G=G, dzG=dG))
        res = compare(p, T, D)
        Wd = direct_evans(p, modes=A.modes)
        res["evans_ratio_dev"] = abs(Wd / evans(p, modes=A.modes) - 1.0)
        checks.append(dict(name=f"{tag} direct jump", value=float(info["jump_errors"].max()), limit=1e-6))
        checks.append(dict(name=f"{tag} |W_direct / W_approx - 1| / nu^(1/4)",
                           value=res["evans_ratio_dev"] / p.nu ** 0.25, limit=5.0))
    return res


def cmd_verify(cfg, args):
    case = cfg.single_case()
    out = Path(cfg["run.out"])
    checks = []
    direct = args.against == "direct"
    r1 = _verify_case(cfg.params(case), direct, checks, f"nu={case.nu:g}")
    report = {"case": case.__dict__, "against": args.against}
    if direct:
        from dataclasses import replace

        case2 = replace(case, nu=case.nu / 10.0)
        r2 = _verify_case(cfg.params(case2), True, checks, f"nu={case2.nu:g}")
        checks.append(dict(name="relative error at first nu", value=r1["rel_error"], limit=0.5))
        ratio = r2["rel_error"] / r1["rel_error"]
        checks.append(dict(name="error ratio per nu-decade (target 0.56)", value=abs(ratio - 0.56), limit=0.25))
        report.update(compare_nu1=r1, compare_nu2=r2, error_ratio=ratio,
                      order=float(np.log(ratio) / np.log(0.1)))
    for c in checks:
        c["pass"] = bool(c["value"] <= c["limit"])
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}: {c['value']:.3e} (limit {c['limit']:g})")
    report["checks"] = checks
    report["ok"] = all(c["pass"] for c in checks)
    write_json(out / "verify_report.json", report)
    return 0 if report["ok"] else 1


# ---------------------------------------------------------------------------
# diag
# ---------------------------------------------------------------------------
def _cols(names):
    cols = ["z"]
    for n in names:
        cols += [f"re_{n}", f"im_{n}"]
    return cols


def _rows(z, arrays):
    data = [z]
    for a in arrays:
        a = np.asarray(a, complex)
        data += [a.real, a.imag]
    return zip(*data)


def cmd_diag(cfg, args):
    p = cfg.params()
    out = Path(cfg["run.out"])
    z = np.unique(np.concatenate([np.linspace(0.0, 3.0, 301), p.z_c.real + p.z_c.imag * np.linspace(-5, 5, 41)]))
    z = z[z >= 0]
    which = args.which
    info = {}
    if which == "langer":
        from .langer import LangerMap

        lm = LangerMap(p)
        zs = z[z <= p.sigma1]
        g, gp = lm.g_and_prime(zs)
        names, arrays = ["g", "dg", "C1_minus_B1"], [g, gp, lm.C1(zs) - lm.B1(g)]
        g0, gp0 = lm.g_and_prime(p.z_c)
        info = {"g_zc_error": abs(g0 - p.z_c), "dg_zc_error": abs(gp0 - 1.0), "sigma1": p.sigma1}
        z = zs
    elif which == "fast":
        from .fast import FastModes

        fm = FastModes(p)
        m = fm.phi(z, -1, 2)
        names, arrays = ["log_phi_f_minus", "dlog_phi_f_minus", "neg_mu_f"], [
            np.log(m.d[0]) + m.logscale, m.d[1] / m.d[0], -p.mu_f(z)]
        info = {"phi_f_minus_0": complex(m.values(0)[0])}
    elif which == "rayleigh":
        from .rayleigh import Rayleigh

        R = Rayleigh(p)
        names, arrays = ["phi_10", "phi_20", "wronskian"], [R.phi1(z, 1).d[0], R.phi2(z, 1).d[0], R.wronskian(z)]
        info = {"max_wronskian_error": float(np.abs(R.wronskian(z) - 1).max())}
    else:
        from .slow import SlowModes

        S = SlowModes(p)
        names, arrays = ["phi_s_minus", "phi_s_plus", "orr_residual_minus"], [
            S.phi_minus(z, 1).d[0], S.phi_plus(z, 1).d[0], S.orr_residual_minus(z)]
        info = {"phi_s_minus_0": complex(arrays[0][0]), "leading": -p.c + p.alpha * p.profile.U_plus ** 2 / p.U1_0}
    f = write_csv(out / f"diag_{which}.csv", _cols(names), _rows(z, arrays))
    write_json(out / f"diag_{which}.json", _manifest(cfg, f"diag {which}", [f], {"summary": info}))
    print(f"wrote {f}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
def build_parser():
    ap = argparse.ArgumentParser(prog="osgreen", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key-value configuration file (schema = 1)")
    common.add_argument("--out", help="output directory (run.out)")
    common.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (default $OSGREEN_JOBS or 1)")
    common.add_argument("--seed", type=int)
    common.add_argument("--nu", type=float)
    common.add_argument("--alpha-scale", dest="alpha_scale", type=float)
    common.add_argument("--c-re-scale", dest="c_re_scale", type=float)
    common.add_argument("--c-im-scale", dest="c_im_scale", type=float)
    common.add_argument("--sigma0", type=float)
    common.add_argument("--sigma1", type=float)
    common.add_argument("--profile", choices=["exponential", "tanh"])
    common.add_argument("--U-plus", dest="U_plus", type=float)
    common.add_argument("--beta", type=float)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="special-function tables")
    ev = sub.add_parser("evans-scan", parents=[common], help="Evans function on a c-rectangle")
    ev.add_argument("--direct", action="store_true", help="use the direct (oracle) Evans function")
    ev.add_argument("--model", choices=["full", "tietjens"], default="full")
    gr = sub.add_parser("green", parents=[common], help="Green-function tables")
    g = gr.add_mutually_exclusive_group()
    g.add_argument("--approx", action="store_true")
    g.add_argument("--direct", action="store_true")
    g.add_argument("--both", action="store_true")
    ve = sub.add_parser("verify", parents=[common], help="invariant checks, optionally against the direct solver")
    ve.add_argument("--against", choices=["none", "direct"], default="none")
    dg = sub.add_parser("diag", parents=[common], help="module diagnostics")
    dg.add_argument("which", choices=["langer", "fast", "rayleigh", "slow"])
    return ap


_COMMANDS = {"tables": cmd_tables, "evans-scan": cmd_evans_scan, "green": cmd_green,
             "verify": cmd_verify, "diag": cmd_diag}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
