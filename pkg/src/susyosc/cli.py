"""Command-line front end: ``susyosc spectrum | export | verify``.

Exit codes: 0 success, 1 usage error, 2 invalid transformation, 3 failed
verification, 4 numerical non-convergence.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

import click
import numpy as np

from . import coherent as coh
from . import darboux as dx
from . import superspace as ss
from .darboux import InvalidTransformError
from .oscillator import default_grid, eigenfunction, energy, make_params, params_from_k
from .quadrature import QuadratureError
from .verify import DEFAULT_TOLERANCES, SUITES, VerifyConfig, run_suite

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_VERIFY, EXIT_CONVERGENCE = 0, 1, 2, 3, 4
DEFAULT_K = 1.25
EXPORTS = ("potential", "wavefunction", "partner_potential", "coherent", "supercoherent")


@dataclass(frozen=True)
class RunConfig:
    b: float
    k: float
    family: str
    p: int
    nmax: int
    npoints: int
    xmax: float | None
    tolerances: dict[str, float]
    fmt: str
    out: str | None
    z: tuple[float, float] | None = None
    alpha_coeff: tuple[float, float] = (0.0, 0.0)
    extra: dict = field(default_factory=dict)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.update(d.pop("extra"))
        return d


def _pair(text: str | None, what: str):
    if text is None:
        return None
    try:
        re_, im = (float(t) for t in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 're,im', got {text!r}", param_hint=what)
    return (re_, im)


def _tolerances(items) -> dict[str, float]:
    tol = dict(DEFAULT_TOLERANCES)
    for item in items:
        name, _, value = item.partition("=")
        if name not in tol or not value:
            raise click.BadParameter(f"{item!r}; known names: {', '.join(tol)}", param_hint="--tol")
        try:
            tol[name] = float(value)
        except ValueError:
            raise click.BadParameter(f"{item!r} is not NAME=number", param_hint="--tol")
        if not tol[name] > 0:
            raise click.BadParameter(f"{name} must be positive", param_hint="--tol")
    return tol


def _common(f):
    opts = [
        click.option("--b", "b", type=float, default=None, help="Coupling b >= -1/4 (excludes --k)."),
        click.option("--k", "k", type=float, default=None, help=f"Bargmann index k >= 1/2 (default {DEFAULT_K})."),
        click.option("--family", type=click.Choice(["u", "v"], case_sensitive=False), default="u", show_default=True),
        click.option("--p", "p", type=click.IntRange(min=0), default=0, show_default=True),
        click.option("--nmax", type=click.IntRange(0, 78), default=10, show_default=True),
        click.option("--npoints", type=click.IntRange(min=10), default=2000, show_default=True),
        click.option("--xmax", type=click.FloatRange(min=0.5, min_open=True), default=None),
        click.option("--tol", "tol", multiple=True, metavar="NAME=VALUE"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _config(b, k, family, p, nmax, npoints, xmax, tol, fmt, out, **extra) -> RunConfig:
    if b is not None and k is not None:
        raise click.UsageError("give at most one of --b and --k")
    try:
        params = make_params(b) if b is not None else params_from_k(DEFAULT_K if k is None else k)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--b/--k")
    return RunConfig(params.b, params.k, family.upper(), p, nmax, npoints, xmax,
                     _tolerances(tol), fmt, out, **extra)


def _spec(cfg: RunConfig, basis_dim: int = 80) -> dx.TransformSpec:
    spec = dx.make_transform(params_from_k(cfg.k, basis_dim), cfg.family, cfg.p)
    spec.require_valid()
    return spec


def _num(v) -> float | int | str:
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _render(cfg: RunConfig, columns: dict[str, np.ndarray], meta_extra: dict | None = None,
            grid_key: str | None = "x") -> str:
    meta = cfg.echo()
    if meta_extra:
        meta.update(meta_extra)
    if cfg.fmt == "json":
        cols = dict(columns)
        grid = cols.pop(grid_key) if grid_key else None
        doc = {"meta": meta, "grid": None if grid is None else [_num(v) for v in grid],
               "values": {name: [_num(v) for v in vals] for name, vals in cols.items()}}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}={json.dumps(meta[key], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for row in zip(*columns.values()):
        w.writerow([repr(_num(v)) for v in row])
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str):
    if cfg.out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise click.FileError(cfg.out, hint=str(e))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Singular oscillator, its Darboux partners and supercoherent states."""


@cli.command()
@_common
def spectrum(**kw):
    """Energy table E_n, E_n - alpha for n <= nmax."""
    cfg = _config(**kw)
    spec = _spec(cfg)
    n = np.arange(cfg.nmax + 1)
    E = np.array([energy(spec.params, int(i)) for i in n])
    meta = {"alpha": spec.alpha, "regime": spec.regime.value}
    if spec.regime is dx.Regime.EXACT:
        meta["partner_ground_level"] = spec.alpha
    _emit(cfg, _render(cfg, {"n": n, "E_n": E, "E_n_minus_alpha": E - spec.alpha}, meta, grid_key=None))
    return EXIT_OK


@cli.command()
@click.argument("what", type=click.Choice(EXPORTS))
@_common
@click.option("--z", "z", default=None, metavar="RE,IM", help="Coherent label, |z| < 1.")
@click.option("--alpha-coeff", "alpha_coeff", default="0,0", metavar="RE,IM",
              help="Coefficient of the Grassmann generator in the supercoherent label.")
@click.option("--states", type=click.IntRange(min=0), default=None,
              help="Highest level exported by 'wavefunction' (defaults to nmax).")
def export(what, z, alpha_coeff, states, **kw):
    """Sample a quantity on the x-grid and write CSV or JSON."""
    zp, ap = _pair(z, "--z"), _pair(alpha_coeff, "--alpha-coeff")
    extra = {"z": zp, "alpha_coeff": ap, "extra": {"what": what, "states": states}}
    cfg = _config(**kw, **extra)
    basis_dim = 80
    params = params_from_k(cfg.k, basis_dim)
    x = default_grid(params, cfg.npoints, cfg.xmax)
    cols: dict[str, np.ndarray] = {"x": x}

    if what in ("coherent", "supercoherent"):
        if zp is None:
            raise click.UsageError(f"export {what} needs --z")
        zc = complex(*zp)
        try:
            coh.check_label(zc, series=what == "supercoherent")
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint="--z")

    if what == "potential":
        spec = _spec(cfg, basis_dim)
        v0 = x**2 / 4.0 + params.b / x**2
        cols.update(V0=v0, V1=v0 + dx.potential_difference(spec, x))
    elif what == "partner_potential":
        cols["A"] = dx.potential_difference(_spec(cfg, basis_dim), x)
    elif what == "wavefunction":
        spec = _spec(cfg, basis_dim)
        top = cfg.nmax if states is None else states
        for n in range(top + 1):
            cols[f"psi_{n}"] = eigenfunction(params, n, x)(x)
        if spec.regime is dx.Regime.EXACT:
            cols["phi_-1"] = dx.partner_ground_state(spec, x)(x)
        for n in range(top + 1):
            cols[f"phi_{n}"] = dx.transform_state(spec, n, x)(x)
    elif what == "coherent":
        psi = coh.coherent_wavefunction(params, zc, x)(x)
        cols.update(re_psi_z=psi.real, im_psi_z=psi.imag)
    else:
        spec = _spec(cfg, basis_dim)
        a = complex(*ap)
        psi = coh.coherent_wavefunction(params, zc, x)(x)
        # coefficient of the generator alpha in the theta component: -a phi_z
        c = coh.coherent_coefficients(params, zc).coefficients
        phi = sum(cn * dx.transform_state(spec, n, x)(x) for n, cn in enumerate(c))
        odd = -a * phi
        cols.update(re_even=psi.real, im_even=psi.imag, re_odd_alpha=odd.real, im_odd_alpha=odd.imag)
        label = ss.SupercoherentLabel(zc, a)
        norm = ss.super_inner(*(2 * (ss.supercoherent_state(spec.params, spec, label),)))
        extra_meta = {"supernorm": [norm.c0.real, norm.c0.imag, norm.c3.real, norm.c3.imag]}
        _emit(cfg, _render(cfg, cols, extra_meta))
        return EXIT_OK
    _emit(cfg, _render(cfg, cols))
    return EXIT_OK


@cli.command()
@_common
@click.option("--suite", type=click.Choice(SUITES + ("all",)), default="all", show_default=True)
def verify(suite, **kw):
    """Run invariant suites; exit 3 if any check fails."""
    cfg = _config(**kw, extra={"suite": suite})
    vcfg = VerifyConfig(k=cfg.k, family=cfg.family, p=cfg.p, nmax=cfg.nmax, tolerances=cfg.tolerances)
    results = run_suite(suite, vcfg)
    if cfg.fmt == "json":
        rows = [{k: v for k, v in r.as_dict().items() if k != "seconds"} for r in results]
        text = json.dumps({"meta": cfg.echo(), "checks": rows,
                           "passed": all(r.passed for r in results)}, indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        for key, val in sorted(cfg.echo().items()):
            buf.write(f"# {key}={json.dumps(val, sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "status", "achieved", "target", "anchor", "note"])
        for r in results:
            w.writerow([r.suite, r.name, "PASS" if r.passed else "FAIL",
                        f"{r.achieved:.3e}", f"{r.target:.1e}", r.anchor, r.note])
        text = buf.getvalue()
    _emit(cfg, text)
    failed = [r for r in results if not r.passed]
    for r in failed:
        click.echo(f"FAILED {r.suite}/{r.name}: {r.anchor} (achieved {r.achieved:.3e} > {r.target:.1e})",
                   err=True)
    return EXIT_VERIFY if failed else EXIT_OK


def run(argv: list[str] | None = None) -> int:
    """Invoke the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="susyosc", standalone_mode=False)
    except click.exceptions.Exit as e:  # --help
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except InvalidTransformError as e:
        click.echo(f"Error: invalid transformation: {e}", err=True)
        return EXIT_INVALID
    except QuadratureError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_CONVERGENCE
    return EXIT_OK if rv is None else int(rv)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
