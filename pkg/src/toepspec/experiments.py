"""Registry of named, seeded Monte-Carlo scenarios with machine-checkable reports.

Each scenario draws its trial matrices through :func:`matrixgen.task_seed`, so
reports are byte-identical for identical configs whatever the worker count.

Eigenvector direction convention.  For an eigenvalue lambda with winding
number d(lambda) of the symbol curve, the localized mass sits at the FRONT
of the vector when d(lambda) < 0 (forward tail norms decay; the upper-banded
monomial case with its geometric eigenvectors is the model) and at the BACK
when d(lambda) > 0 (reverse tail norms decay).  The scenarios below apply
this mapping when they pick which tail profile to measure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import eigloc, linalg, matrixgen, measures, pseudospec, svgplot
from ._parallel import map_into_slots
from .errors import BoundaryError, ConfigError, OnCurveError, ToepspecError
from .matrixgen import NoiseSpec, PerturbationSpec, task_seed
from .symbol import LaurentSymbol, classify_region, curve_samples, parse_symbol, winding_number

_PROBE_STREAM = 0x70726F62  # distinct seed stream for probe-point placement


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    symbol: str
    n: int
    pert: PerturbationSpec
    noise: NoiseSpec
    trials: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        parse_symbol(self.symbol)  # validates

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "symbol": self.symbol,
            "n": self.n,
            "pert": self.pert.to_dict(),
            "noise": {"kind": self.noise.kind},
            "trials": self.trials,
            "seed": self.seed,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        required = {"scenario", "symbol", "n", "pert", "noise", "trials", "seed"}
        missing = required - set(d)
        if missing:
            raise ConfigError(f"config is missing fields: {sorted(missing)}")
        extra = set(d) - required - {"params"}
        if extra:
            raise ConfigError(f"config has unknown fields: {sorted(extra)}")
        noise = d["noise"]
        if isinstance(noise, str):
            noise_spec = NoiseSpec(noise)
        elif isinstance(noise, dict):
            if set(noise) != {"kind"}:
                raise ConfigError("noise object must have exactly the field 'kind'")
            noise_spec = NoiseSpec(**noise)
        else:
            raise ConfigError("noise must be a kind string or an object")
        return cls(
            scenario=str(d["scenario"]),
            symbol=str(d["symbol"]),
            n=int(d["n"]),
            pert=PerturbationSpec.from_dict(d["pert"]),
            noise=noise_spec,
            trials=int(d["trials"]),
            seed=int(d["seed"]),
            params=dict(d.get("params", {})),
        )


@dataclass(frozen=True)
class ExperimentReport:
    scenario: str
    config: dict
    metrics: dict
    passed: dict
    artifacts: list

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "config": self.config,
            "metrics": self.metrics,
            "pass": self.passed,
            "artifacts": list(self.artifacts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    criteria: tuple
    defaults: dict
    runner: object


def _trial_seeds(cfg: ExperimentConfig) -> list[int]:
    return [task_seed(cfg.seed, t) for t in range(cfg.trials)]


def _trial_eigenvalues(cfg: ExperimentConfig, sym: LaurentSymbol) -> list[np.ndarray]:
    seeds = _trial_seeds(cfg)

    def one(s: int) -> np.ndarray:
        m = matrixgen.perturbed(sym, cfg.n, cfg.pert, cfg.noise, s)
        return linalg.eigenvalues(m)

    return map_into_slots(one, seeds)


def _curve_box(sym: LaurentSymbol, radii, pad: float = 0.5):
    pts = np.concatenate([curve_samples(sym, 256, rad) for rad in radii])
    return (
        float(pts.real.min()) - pad,
        float(pts.real.max()) + pad,
        float(pts.imag.min()) - pad,
        float(pts.imag.max()) + pad,
    )


def _probe_points_regions(
    sym: LaurentSymbol,
    r: float,
    count: int,
    margin: float,
    seed: int,
    max_attempts: int = 60000,
) -> dict[str, list[complex]]:
    """Pseudo-random probe points per region, away from all separating curves.

    Only regions that collect the full count are kept; almost-every-point
    statements are then tested on generic points of each fat region.
    """
    curves = [curve_samples(sym, 720, rad) for rad in (1.0, r, 1.0 / r)]
    lo_re, hi_re, lo_im, hi_im = _curve_box(sym, (1.0, r, 1.0 / r), pad=2 * margin + 0.3)
    rng = np.random.Generator(np.random.Philox(key=task_seed(seed, _PROBE_STREAM)))
    buckets: dict[str, list[complex]] = {}
    discovery_floor = 5000  # keep sampling this long so thin regions can show up
    for attempt in range(max_attempts):
        if (
            attempt >= discovery_floor
            and buckets
            and all(len(b) >= count for b in buckets.values())
        ):
            break
        z = complex(rng.uniform(lo_re, hi_re), rng.uniform(lo_im, hi_im))
        if min(float(np.min(np.abs(c - z))) for c in curves) < margin:
            continue
        try:
            label = classify_region(sym, z, r)
        except (BoundaryError, OnCurveError):
            continue
        key = label.key()
        if key == "curve":
            continue
        bucket = buckets.setdefault(key, [])
        if len(bucket) < count:
            bucket.append(z)
    return {k: v for k, v in sorted(buckets.items()) if len(v) >= count}


def _probe_points_off_support(
    sym: LaurentSymbol,
    count: int,
    gap_margin: float,
    seed: int,
    max_attempts: int = 20000,
) -> list[complex]:
    """Probe points with a fat relative gap between the split root moduli.

    The gap keeps the points off the limiting support set of the unperturbed
    matrices, where the radius-rho quadrature is defined.
    """
    from .symbol import root_profile

    lo_re, hi_re, lo_im, hi_im = _curve_box(sym, (1.0,), pad=1.0)
    rng = np.random.Generator(np.random.Philox(key=task_seed(seed, _PROBE_STREAM)))
    out: list[complex] = []
    k = sym.nplus_eff
    for _ in range(max_attempts):
        if len(out) >= count:
            break
        z = complex(rng.uniform(lo_re, hi_re), rng.uniform(lo_im, hi_im))
        prof = root_profile(sym, z)
        mods = prof.moduli()
        hi = mods[k - 1] if k >= 1 else math.inf
        lo = mods[k] if k < prof.total else 0.0
        if math.isinf(hi):
            out.append(z)
            continue
        if hi > 0 and (hi - lo) / hi >= gap_margin:
            out.append(z)
    if len(out) < count:
        raise ConfigError("could not place enough probe points off the support set")
    return out


def _write_eigs_artifacts(cfg, sym, eigs, out_dir, tag="eigenvalues", trial=0) -> list[str]:
    if out_dir is None:
        return []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    # the stored seed is the realization's own seed, so the sample can be
    # regenerated bit-exactly from the sidecar alone
    sample = measures.SpectralSample(
        points=eigs,
        meta={
            "symbol": cfg.symbol,
            "n": cfg.n,
            "pert": cfg.pert.to_dict(),
            "noise": cfg.noise.kind,
            "seed": task_seed(cfg.seed, trial),
            "master_seed": cfg.seed,
            "trial": trial,
        },
    )
    csv_path = out_dir / f"{tag}.csv"
    measures.write_sample_csv(sample, csv_path)
    svg_path = out_dir / f"{tag}.svg"
    svg = svgplot.render_svg(
        "scatter",
        {"points": eigs, "curve": curve_samples(sym, 512)},
        {"title": f"{cfg.scenario}: one realization"},
    )
    svg_path.write_text(svg, encoding="utf-8")
    return [str(csv_path), str(csv_path) + ".meta.json", str(svg_path)]


def _dist_to_spectrum_of_limit_operator(sym: LaurentSymbol, lam: complex, quadrature_n: int) -> float:
    """Distance to (symbol curve) union (points of nonzero winding)."""
    try:
        if winding_number(sym, lam) != 0:
            return 0.0
    except OnCurveError:
        return 0.0
    return float(measures.dist_to_curve([lam], sym, quadrature_n)[0])


# ---------------------------------------------------------------------------
# scenario runners: each returns (metrics, passed, artifacts)


def _run_lsd_subexp(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    push = measures.pushforward_sample(sym, cfg.n)
    band = params["band_mult"] * math.log(cfg.n) / cfg.n
    energies = []
    band_fracs = []
    for eigs in eig_trials:
        energies.append(measures.energy_distance(measures.SpectralSample(eigs), push))
        dists = measures.dist_to_curve(eigs, sym, params["quadrature_n"])
        band_fracs.append(float(np.mean(dists <= band)))
    metrics = {
        "energy_distances": energies,
        "energy_max": max(energies),
        "band_width": band,
        "band_fractions": band_fracs,
        "band_fraction_min": min(band_fracs),
    }
    passed = {
        "energy_distance": max(energies) <= params["energy_tol"],
        "curve_band": min(band_fracs) >= params["band_frac_min"],
    }
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_lsd_exp(cfg: ExperimentConfig, params: dict, out_dir):
    if cfg.pert.kind != "exp":
        raise ConfigError("lsd_exp needs an exp perturbation")
    sym = parse_symbol(cfg.symbol)
    r = cfg.pert.r
    eig_trials = _trial_eigenvalues(cfg, sym)
    metrics: dict = {}
    passed: dict = {}
    if params["check_radius"]:
        target = params["target_radius"] if params["target_radius"] is not None else r
        band = params["band_mult"] * math.log(cfg.n) / cfg.n
        devs = [float(np.max(np.abs(np.abs(eigs) - target))) for eigs in eig_trials]
        ok_frac = float(np.mean([d <= band for d in devs]))
        metrics.update(
            {"radius_devs": devs, "radius_band": band, "radius_ok_frac": ok_frac}
        )
        passed["radius_band"] = ok_frac >= params["pass_frac"]
    else:
        metrics["radius_devs"] = None
        passed["radius_band"] = True
    probes = _probe_points_regions(
        sym, r, params["probe_count"], params["probe_margin"], cfg.seed
    )
    devs_by_region: dict[str, list[float]] = {}
    worst = 0.0
    for key, zs in probes.items():
        devs = []
        for z in zs:
            emp = float(
                np.mean([measures.empirical_logpot(measures.SpectralSample(e), z) for e in eig_trials])
            )
            lim = measures.limit_logpot_exp(sym, z, r)
            devs.append(abs(emp - lim))
        devs_by_region[key] = devs
        worst = max(worst, max(devs))
    metrics.update(
        {
            "logpot_regions": {k: len(v) for k, v in probes.items()},
            "logpot_devs": devs_by_region,
            "logpot_dev_max": worst,
        }
    )
    passed["logpot_probes"] = bool(devs_by_region) and worst <= params["logpot_tol"]
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_lsd_superexp(cfg: ExperimentConfig, params: dict, out_dir):
    if cfg.pert.kind != "superexp":
        raise ConfigError("lsd_superexp needs a superexp perturbation")
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    probes = _probe_points_off_support(
        sym, params["probe_count"], params["gap_margin"], cfg.seed
    )
    devs = []
    for z in probes:
        emp = float(
            np.mean([measures.empirical_logpot(measures.SpectralSample(e), z) for e in eig_trials])
        )
        lim = measures.limit_logpot_unperturbed(sym, z, quadrature_n=params["quadrature_n"])
        devs.append(abs(emp - lim))
    metrics = {"logpot_devs": devs, "logpot_dev_max": max(devs), "probes": len(probes)}
    passed = {"logpot_probes": max(devs) <= params["logpot_tol"]}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_macro(cfg: ExperimentConfig, params: dict, out_dir):
    if cfg.pert.kind != "macro":
        raise ConfigError("macro needs a macro perturbation")
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    means = [complex(np.mean(e)) for e in eig_trials]
    second = [float(np.mean(np.abs(e) ** 2)) for e in eig_trials]
    metrics = {
        "mean_re": float(np.mean([m.real for m in means])),
        "mean_im": float(np.mean([m.imag for m in means])),
        "mean_abs2": float(np.mean(second)),
    }
    finite = all(math.isfinite(v) for v in metrics.values())
    passed = {"moments_finite": finite}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_no_outlier(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    eps = params["eps"]
    qn = params["quadrature_n"]
    violations = 0
    max_excess = 0.0
    for eigs in eig_trials:
        for lam in eigs:
            d = _dist_to_spectrum_of_limit_operator(sym, complex(lam), qn)
            if d > eps:
                violations += 1
            max_excess = max(max_excess, d)
    metrics = {"violations": violations, "max_dist": max_excess, "eps": eps}
    passed = {"no_outliers": violations == 0}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_outlier_count(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    margin = params["margin"]
    qn = params["quadrature_n"]
    trial_dicts: list[dict[str, int]] = []
    for eigs in eig_trials:
        dists = measures.dist_to_curve(eigs, sym, qn)
        trial_counts: dict[str, int] = {}
        for lam, d in zip(eigs, dists):
            if d <= margin:
                continue
            try:
                w = winding_number(sym, complex(lam))
            except OnCurveError:
                continue
            key = str(w)
            trial_counts[key] = trial_counts.get(key, 0) + 1
        trial_dicts.append(trial_counts)
    keys = sorted(set().union(*trial_dicts)) if trial_dicts else []
    mean_counts = {k: float(np.mean([d.get(k, 0) for d in trial_dicts])) for k in keys}
    metrics = {"mean_counts_by_winding": mean_counts, "margin": margin}
    passed = {"counted": True}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_pairing(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    targets = curve_samples(sym, cfg.n)
    costs = [measures.match_cost(eigs, targets, params["p"]) for eigs in eig_trials]
    ok_frac = float(np.mean([c <= params["cost_tol"] for c in costs]))
    metrics = {"match_costs": costs, "cost_max": max(costs), "ok_frac": ok_frac}
    passed = {"match_cost": ok_frac >= params["pass_frac"]}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _run_radius_law(cfg: ExperimentConfig, params: dict, out_dir):
    if cfg.pert.kind != "poly":
        raise ConfigError("radius_law needs a poly perturbation")
    sym = parse_symbol(cfg.symbol)
    eig_trials = _trial_eigenvalues(cfg, sym)
    gamma = cfg.pert.gamma
    bound = (gamma - 1.0 - params["eps"]) * math.log(cfg.n) / cfg.n
    min_gaps = [float(np.min(1.0 - np.abs(e))) for e in eig_trials]
    pooled = np.concatenate([1.0 - np.abs(e) for e in eig_trials])
    ok_frac = float(np.mean([g >= bound for g in min_gaps]))
    metrics = {
        "bound": bound,
        "min_gaps": min_gaps,
        "gap_quantiles": {
            "q10": float(np.quantile(pooled, 0.10)),
            "q50": float(np.quantile(pooled, 0.50)),
            "q90": float(np.quantile(pooled, 0.90)),
        },
        "ok_frac": ok_frac,
    }
    passed = {"radius_bound": ok_frac >= params["pass_frac"]}
    artifacts = _write_eigs_artifacts(cfg, sym, eig_trials[0], out_dir)
    return metrics, passed, artifacts


def _localization_rows(sym, m, eigs, band_lo, band_hi, qn, mu1):
    rows = []
    dists = measures.dist_to_curve(eigs, sym, qn)
    order = np.lexsort((eigs.imag, eigs.real))
    for idx in order:
        lam = complex(eigs[idx])
        d_curve = float(dists[idx])
        if not band_lo <= d_curve <= band_hi:
            continue
        try:
            w = winding_number(sym, lam)
        except OnCurveError:
            continue
        if w == 0:
            continue
        try:
            v = linalg.eigenvector(m, lam)
        except ToepspecError:
            continue
        direction = "forward" if w < 0 else "reverse"
        profile = eigloc.tail_norm_profile(v, direction)
        below = np.nonzero(profile <= 0.5)[0]
        tail_halflen = int(below[0]) + 1 if len(below) else len(v)
        rows.append(
            (
                lam,
                d_curve,
                w,
                float(np.max(np.abs(v))),
                eigloc.supp_size(v, mu1),
                tail_halflen,
            )
        )
    return rows


def _run_eigvec_bulk(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    seeds = _trial_seeds(cfg)
    band_hi = params["c_band"] * math.log(cfg.n) / cfg.n
    band_lo = math.log(cfg.n) / (params["c_band"] * cfg.n)
    loc_len = params["loc_mult"] * cfg.n / math.log(cfg.n)
    all_rows = []

    def one(s: int):
        m = matrixgen.perturbed(sym, cfg.n, cfg.pert, cfg.noise, s)
        eigs = linalg.eigenvalues(m)
        return _localization_rows(
            sym, m, eigs, band_lo, band_hi, params["quadrature_n"], params["supp_mu1"]
        )

    for rows in map_into_slots(one, seeds):
        all_rows.extend(rows)
    if not all_rows:
        metrics = {"qualifying": 0}
        passed = {"localization": False}
        return metrics, passed, []
    supps = np.array([r[4] for r in all_rows], dtype=float)
    halflens = np.array([r[5] for r in all_rows], dtype=float)
    frac_loc = float(np.mean(supps <= loc_len))
    metrics = {
        "qualifying": len(all_rows),
        "band": [band_lo, band_hi],
        "loc_length": loc_len,
        "supp_median": float(np.median(supps)),
        "supp_frac_localized": frac_loc,
        "tail_halflen_median": float(np.median(halflens)),
    }
    passed = {"localization": frac_loc >= params["frac"]}
    artifacts = []
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "localization.csv"
        eigloc.write_localization_csv(all_rows, path)
        artifacts.append(str(path))
    return metrics, passed, artifacts


def _run_eigvec_outlier(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    radius = params["disk_radius"]
    found = []
    trials_run = 0
    for t in range(cfg.trials):
        trials_run += 1
        m = matrixgen.perturbed(sym, cfg.n, cfg.pert, cfg.noise, task_seed(cfg.seed, t))
        eigs = linalg.eigenvalues(m)
        inside = [complex(l) for l in eigs if abs(l) <= radius]
        for lam in sorted(inside, key=lambda c: (c.real, c.imag)):
            try:
                v = linalg.eigenvector(m, lam)
            except ToepspecError:
                continue
            pure = eigloc.pure_state(lam, cfg.n)
            found.append(
                {
                    "lambda": [lam.real, lam.imag],
                    "linf": float(np.max(np.abs(v))),
                    "pure_state_dist": eigloc.phase_aligned_distance(v, pure),
                }
            )
        if found and len(found) >= params["stop_after_found"]:
            break
    metrics = {
        "outliers_found": len(found),
        "trials_run": trials_run,
        "observations": found,
        "linf_min": min((f["linf"] for f in found), default=None),
    }
    passed = {"outlier_linf": all(f["linf"] >= params["linf_min"] for f in found)}
    return metrics, passed, []


def _run_grushin(cfg: ExperimentConfig, params: dict, out_dir):
    from .grushin import equivalence_gap

    sym = parse_symbol(cfg.symbol)
    z = complex(params["z"][0], params["z"][1])
    alpha = params["alpha"] if params["alpha"] is not None else 1.0 / cfg.n
    delta = cfg.pert.coupling(cfg.n)
    a = matrixgen.toeplitz(sym, cfg.n) - z * np.eye(cfg.n)
    seeds = _trial_seeds(cfg)

    def one(s: int) -> float:
        q = matrixgen.sample_noise(cfg.noise, cfg.n, s)
        return equivalence_gap(a, q, delta, alpha)

    gaps = map_into_slots(one, seeds)
    ok_frac = float(np.mean([g <= params["gap_tol"] for g in gaps]))
    metrics = {
        "gaps_max": max(gaps),
        "gaps_median": float(np.median(gaps)),
        "ok_frac": ok_frac,
        "alpha": alpha,
        "delta": delta,
    }
    passed = {"equiv_gap": ok_frac >= params["pass_frac"]}
    return metrics, passed, []


def _run_pseudospec_map(cfg: ExperimentConfig, params: dict, out_dir):
    sym = parse_symbol(cfg.symbol)
    g = params["grid"]
    grid = pseudospec.GridSpec(
        re_min=float(g["re_min"]),
        re_max=float(g["re_max"]),
        im_min=float(g["im_min"]),
        im_max=float(g["im_max"]),
        nx=int(g["nx"]),
        ny=int(g["ny"]),
    )
    kind = params["matrix"]
    if kind == "circulant":
        m = matrixgen.circulant(sym, cfg.n)
    elif kind == "toeplitz":
        m = matrixgen.toeplitz(sym, cfg.n)
    elif kind == "perturbed":
        m = matrixgen.perturbed(sym, cfg.n, cfg.pert, cfg.noise, task_seed(cfg.seed, 0))
    else:
        raise ConfigError(f"unknown matrix kind {kind!r}")
    field = pseudospec.smin_field(m, grid)
    levels = sorted(float(l) for l in params["levels"])
    nested = True
    for l1, l2 in zip(levels, levels[1:]):
        inside1 = field.values < l1
        inside2 = field.values < l2
        if np.any(inside1 & ~inside2):
            nested = False
    metrics = {
        "field_min": float(field.values.min()),
        "field_max": float(field.values.max()),
        "levels": levels,
    }
    passed = {"nesting": nested}
    if kind == "circulant" and params["oracle"]:
        spectrum = curve_samples(sym, cfg.n)
        res = grid.res()
        ims = grid.ims()
        zs = (res[None, :] + 1j * ims[:, None]).ravel()
        dist = np.min(np.abs(zs[:, None] - spectrum[None, :]), axis=1)
        err = float(np.max(np.abs(field.values - dist)))
        metrics["oracle_err_max"] = err
        passed["normal_oracle"] = err <= params["oracle_tol"]
    else:
        passed["normal_oracle"] = True
    artifacts = []
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "field.csv"
        pseudospec.write_field_csv(field, csv_path)
        lines = []
        for level, polys in zip(levels, pseudospec.contour_lines(field, levels)):
            lines.extend((level, poly) for poly in polys)
        svg_path = out_dir / "contours.svg"
        svg_path.write_text(
            svgplot.render_svg("contour", {"lines": lines}, {"title": "pseudospectrum"}),
            encoding="utf-8",
        )
        artifacts.extend([str(csv_path), str(svg_path)])
    return metrics, passed, artifacts


_REGISTRY: dict[str, Scenario] = {}


def _register(name, description, criteria, defaults, runner):
    _REGISTRY[name] = Scenario(name, description, tuple(criteria), dict(defaults), runner)


_register(
    "lsd_subexp",
    "eigenvalues under polynomially small noise approach the symbol-curve law",
    ("energy_distance", "curve_band"),
    {
        "energy_tol": 0.05,
        "band_mult": 5.0,
        "band_frac_min": 0.9,
        "quadrature_n": 1024,
    },
    _run_lsd_subexp,
)
_register(
    "lsd_exp",
    "eigenvalues under noise at scale r^N follow the radius-r limit law",
    ("radius_band", "logpot_probes"),
    {
        "check_radius": False,
        "target_radius": None,
        "band_mult": 5.0,
        "pass_frac": 0.9,
        "probe_count": 10,
        "probe_margin": 0.1,
        "logpot_tol": 0.1,
    },
    _run_lsd_exp,
)
_register(
    "lsd_superexp",
    "noise below every exponential leaves the unperturbed spectral law intact",
    ("logpot_probes",),
    {"probe_count": 10, "gap_margin": 0.1, "logpot_tol": 0.1, "quadrature_n": 4096},
    _run_lsd_superexp,
)
_register(
    "macro",
    "order-sqrt(1/N) noise: moments and plots only, no closed-form limit",
    ("moments_finite",),
    {},
    _run_macro,
)
_register(
    "no_outlier",
    "no eigenvalue escapes the eps-fattening of the limit-operator spectrum",
    ("no_outliers",),
    {"eps": 0.2, "quadrature_n": 1024},
    _run_no_outlier,
)
_register(
    "outlier_count",
    "empirical counts of eigenvalues far from the curve, per winding number",
    ("counted",),
    {"margin": 0.1, "quadrature_n": 1024},
    _run_outlier_count,
)
_register(
    "pairing",
    "optimal matching of eigenvalues to the symbol at roots of unity",
    ("match_cost",),
    {"p": 1.0, "cost_tol": 0.1, "pass_frac": 0.9},
    _run_pairing,
)
_register(
    "radius_law",
    "all eigenvalues stay (gamma-1-eps) log N / N inside the unit circle",
    ("radius_bound",),
    {"eps": 0.5, "pass_frac": 0.9},
    _run_radius_law,
)
_register(
    "eigvec_bulk",
    "eigenvectors of near-curve eigenvalues localize at scale N / log N",
    ("localization",),
    {
        "c_band": 4.0,
        "loc_mult": 4.0,
        "supp_mu1": 0.5,
        "frac": 0.9,
        "quadrature_n": 1024,
    },
    _run_eigvec_bulk,
)
_register(
    "eigvec_outlier",
    "eigenvectors of deep-interior eigenvalues are completely localized",
    ("outlier_linf",),
    {"disk_radius": 0.8, "linf_min": 0.2, "stop_after_found": 1},
    _run_eigvec_outlier,
)
_register(
    "grushin",
    "log-determinant of the noisy matrix vs truncated singular-value sum",
    ("equiv_gap",),
    {"z": [3.0, 0.2], "alpha": None, "gap_tol": 0.05, "pass_frac": 0.95},
    _run_grushin,
)
_register(
    "pseudospec_map",
    "smallest-singular-value field over a grid, with the normal-matrix oracle",
    ("nesting", "normal_oracle"),
    {
        "grid": {"re_min": -2.0, "re_max": 2.0, "im_min": -2.0, "im_max": 2.0, "nx": 41, "ny": 41},
        "levels": [0.01, 0.1, 0.5],
        "matrix": "perturbed",
        "oracle": False,
        "oracle_tol": 1e-8,
    },
    _run_pseudospec_map,
)


def scenarios() -> dict:
    """Static registry listing: criteria and default params per scenario."""
    return {
        name: {
            "description": sc.description,
            "criteria": list(sc.criteria),
            "params": dict(sc.defaults),
        }
        for name, sc in _REGISTRY.items()
    }


def scenario_names() -> list[str]:
    return list(_REGISTRY)


def run(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Run one scenario; deterministic given the config (seed included)."""
    if config.scenario not in _REGISTRY:
        raise ConfigError(f"unknown scenario {config.scenario!r}; see `toepspec list`")
    sc = _REGISTRY[config.scenario]
    unknown = set(config.params) - set(sc.defaults)
    if unknown:
        raise ConfigError(f"unknown params for {config.scenario}: {sorted(unknown)}")
    params = dict(sc.defaults)
    params.update(config.params)
    metrics, passed, artifacts = sc.runner(config, params, out_dir)
    if set(passed) != set(sc.criteria):
        raise ConfigError(
            f"scenario {config.scenario} must report exactly its declared criteria"
        )
    report = ExperimentReport(
        scenario=config.scenario,
        config=config.to_dict(),
        metrics=metrics,
        passed=passed,
        artifacts=artifacts,
    )
    if out_dir is not None:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        (out_path / "report.json").write_text(report.to_json(), encoding="utf-8")
    return report
