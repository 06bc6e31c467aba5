"""Command-line front door.

``chiralwalk index|spectrum|verify|plot <config> [flags]``

Exit codes: 0 success, 1 usage/parse error, 2 not Fredholm, 3 verification
failure.  All commands are deterministic given config and flags; the only
randomised step (the alternative phase assignment cross-check in ``index``)
is driven by ``--seed``.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, load_model_config
from .index import NotFredholmError, compute_index
from .models import (
    InvalidParameters,
    ModelParamsMko,
    default_phase,
    mko_to_um,
)
from .profiles import MINUS_INF, PLUS_INF, REAL, ParameterProfile
from .spectrum import EssentialSpectrumResult, SpectralSet, essential_spectrum
from .verify import run_verification, truncated_spectrum


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="chiralwalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="path to a JSON model config")
        p.add_argument("--resolution", type=int, default=None,
                       help="circle samples per endpoint (default from config)")
        p.add_argument("--window", type=int, default=None,
                       help="finite-section half-width (default from config)")
        p.add_argument("--tol", type=float, default=None,
                       help="residual tolerance (default from config)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomised cross-checks (default from config)")
        p.add_argument("--out", default=None, help="output file")

    for name, fn in (("index", _cmd_index), ("spectrum", _cmd_spectrum),
                     ("verify", _cmd_verify), ("plot", _cmd_plot)):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(handler=fn)
    sub.choices["spectrum"].add_argument(
        "--cloud-out", default=None, help="also write the sampled eigenvalue cloud")
    sub.choices["plot"].add_argument(
        "--overlay-window", type=int, default=None,
        help="overlay eigenvalues of the finite section at this half-width")
    return parser


def _load(args):
    cfg = load_model_config(args.config)
    for name in ("resolution", "window", "tol", "seed"):
        if getattr(args, name, None) is None:
            setattr(args, name, cfg.option(name))
    return cfg


def _reduce(params):
    """Parameters of the m-step family equivalent to the given model."""
    if isinstance(params, ModelParamsMko):
        return mko_to_um(params)[0], True
    return params, False


# ---------------------------------------------------------------------------
# index
# ---------------------------------------------------------------------------

def _alternative_phase(params, seed: int) -> ParameterProfile | None:
    """Random re-phasing at sites (and tails) where q vanishes, if any."""
    base = default_phase(params.q)
    rng = np.random.default_rng(seed)
    free_sites = [x for x, v in params.q.overrides.items() if v == 0]
    left_free = params.q.left_limit == 0
    right_free = params.q.right_limit == 0
    if not (free_sites or left_free or right_free):
        return None
    overrides = dict(base.overrides)
    for x in free_sites:
        overrides[x] = rng.uniform(0.0, 2.0 * np.pi)
    left = rng.uniform(0.0, 2.0 * np.pi) if left_free else base.left_limit
    right = rng.uniform(0.0, 2.0 * np.pi) if right_free else base.right_limit
    return ParameterProfile(left, right, overrides, REAL)


def _cmd_index(args) -> int:
    cfg = _load(args)
    params = cfg.build()
    um, reduced = _reduce(params)
    if reduced:
        print("two-step model reduced to the equivalent m = 2 instance")
    report = compute_index(um)
    for diag in report.endpoints:
        status = "tie within tolerance" if diag.tie else (
            "|p_gamma| > |a|" if diag.margin > 0 else "|p_gamma| < |a|")
        print(f"endpoint {diag.star}: p_gamma = {diag.p_gamma:+.6f}, "
              f"|a| = {diag.abs_a:.6f}, margin = {diag.margin:+.3e} ({status})")
    if not report.fredholm:
        print("not Fredholm: the index is undefined for this parameter set")
        return 2
    print(f"winding at {MINUS_INF}: analytic {report.wn_minus}, numeric {report.wn_minus_num}")
    print(f"winding at {PLUS_INF}: analytic {report.wn_plus}, numeric {report.wn_plus_num}")
    print(f"routes agree: formula = winding difference = numeric difference "
          f"= {report.analytic_index}")
    alternative = _alternative_phase(um, args.seed)
    if alternative is not None:
        other = compute_index(um, phase=alternative)
        same = (other.analytic_index == report.analytic_index
                and other.wn_minus_num == report.wn_minus_num
                and other.wn_plus_num == report.wn_plus_num)
        print(f"phase-assignment cross-check (seed {args.seed}): "
              f"{'consistent' if same else 'INCONSISTENT'}")
        if not same:
            return 3
    print(f"index = {report.analytic_index}")
    return 0


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def spectrum_csv(result: EssentialSpectrumResult) -> str:
    lines = ["endpoint,kind,lo,hi,case,s"]
    for ep in (result.minus, result.plus):
        sset = ep.spectral_set
        for u, v in sset.arcs:
            lines.append(f"{ep.star},arc,{u:.17g},{v:.17g},{sset.case_tag},{sset.sign_tag}")
        for u, v in sset.segments:
            lines.append(f"{ep.star},segment,{u:.17g},{v:.17g},{sset.case_tag},{sset.sign_tag}")
    return "\n".join(lines) + "\n"


def parse_spectrum_csv(text: str) -> dict:
    rows = [line.split(",") for line in text.strip().splitlines()]
    if not rows or rows[0] != ["endpoint", "kind", "lo", "hi", "case", "s"]:
        raise ValueError("unrecognised spectrum CSV header")
    collected: dict = {}
    for endpoint, kind, lo, hi, case, s in rows[1:]:
        entry = collected.setdefault(endpoint, {"arcs": [], "segments": [],
                                                "case": case, "s": int(s)})
        if entry["case"] != case or entry["s"] != int(s):
            raise ValueError(f"inconsistent case/sign rows for endpoint {endpoint}")
        entry["arcs" if kind == "arc" else "segments"].append((float(lo), float(hi)))
    return {
        endpoint: SpectralSet(tuple(e["arcs"]), tuple(e["segments"]), e["case"], e["s"])
        for endpoint, e in collected.items()
    }


def cloud_csv(result: EssentialSpectrumResult, resolution: int) -> str:
    lines = ["endpoint,t,re_lambda,im_lambda"]
    for ep in (result.minus, result.plus):
        for i, z in enumerate(ep.cloud):
            t = 2.0 * np.pi * (i // 2) / resolution
            lines.append(f"{ep.star},{t:.17g},{z.real:.17g},{z.imag:.17g}")
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args) -> int:
    cfg = _load(args)
    um, reduced = _reduce(cfg.build())
    if reduced:
        print("two-step model reduced to the equivalent m = 2 instance")
    result = essential_spectrum(um, args.resolution)
    for ep in (result.minus, result.plus):
        d = ep.data
        print(f"endpoint {ep.star}: case {ep.case_tag}, s = {d.s:+d}, "
              f"Lambda = [{d.lam_minus:.6f}, {d.lam_plus:.6f}], "
              f"gamma range = [{d.gamma_minus:.6f}, {d.gamma_plus:.6f}]")
        print(f"  sampling oracle: Hausdorff {ep.hausdorff:.3e} "
              f"(tolerance {ep.tolerance:.3e}) "
              f"{'ok' if ep.within_tolerance else 'EXCEEDED'}")
    text = spectrum_csv(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if args.cloud_out:
        with open(args.cloud_out, "w", encoding="utf-8") as handle:
            handle.write(cloud_csv(result, args.resolution))
        print(f"wrote {args.cloud_out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    cfg = _load(args)
    try:
        params = cfg.build()
    except InvalidParameters as err:
        print(f"parameter normalization: FAIL ({err})")
        return 3
    report = run_verification(params, args.window, args.tol)
    for name, passed, detail in report.checks:
        print(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
    return 0 if report.passed else 3


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------

def _cmd_plot(args) -> int:
    from .plotting import write_spectral_svg

    cfg = _load(args)
    params = cfg.build()
    um, _ = _reduce(params)
    result = essential_spectrum(um, args.resolution)
    overlay = None
    if args.overlay_window:
        overlay = truncated_spectrum(params, args.overlay_window).eigenvalues
    out = args.out or "spectrum.svg"
    title = (f"{MINUS_INF}: case {result.minus.case_tag}   "
             f"{PLUS_INF}: case {result.plus.case_tag}")
    write_spectral_svg(out, {
        MINUS_INF: result.minus.spectral_set,
        PLUS_INF: result.plus.spectral_set,
    }, overlay=overlay, title=title)
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError:
        return 1
    try:
        return args.handler(args)
    except (ConfigError, InvalidParameters) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except NotFredholmError as err:
        print(f"not Fredholm: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
