"""Scenario configuration, execution and figure presets.

A scenario couples one initial Bell-like state to two independent
reservoirs and samples the correlation measures on a uniform time grid.
Configurations live in flat ``key = value`` text files (all rates in
units of gamma0); see ``parse_config`` for the key list.

The measures along a trace are evaluated with vectorized closed-form
expressions for the X-shaped states this model produces (eigenvalues of
an X matrix are available in closed form).  The generic matrix routes in
``correlations``/``linalg`` serve as independent oracles; the validation
suite cross-checks the two paths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import CorrelationTrace
from .correlations import classical_correlation, mutual_information
from .dynamics import InitialState, evolve
from .exceptions import QubeatError
from .linalg import xlog2x
from .reservoir import ReservoirParams, survival_amplitude, volterra_solve

MEASURES = ("concurrence", "discord", "mutual_info", "classical")


class ConfigError(QubeatError):
    """Bad scenario configuration (usage error at the CLI)."""


class ScenarioError(QubeatError):
    """Failure while running a scenario, with the scenario label attached."""


@dataclass(frozen=True)
class ScenarioConfig:
    reservoir_a: ReservoirParams
    reservoir_b: ReservoirParams
    initial: InitialState
    t_max: float
    n_steps: int  # number of samples including t=0
    measures: tuple[str, ...] = MEASURES
    discord_method: str = "analytic"  # analytic | variational | both
    g_method: str = "closed"  # closed | volterra | both
    reservoir_a_on: bool = True
    reservoir_b_on: bool = True
    variational_grid: int = 64
    label: str = "scenario"

    def __post_init__(self):
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if self.n_steps < 2:
            raise ConfigError("n_steps must be at least 2")
        if not self.measures:
            raise ConfigError("at least one measure must be selected")
        bad = [m for m in self.measures if m not in MEASURES]
        if bad:
            raise ConfigError(f"unknown measures {bad}; valid: {list(MEASURES)}")
        if self.discord_method not in ("analytic", "variational", "both"):
            raise ConfigError(f"unknown discord_method {self.discord_method!r}")
        if self.g_method not in ("closed", "volterra", "both"):
            raise ConfigError(f"unknown g_method {self.g_method!r}")

    def items(self) -> list[tuple[str, object]]:
        """Flat key-value view, matching the config-file key names."""
        return [
            ("label", self.label),
            ("initial.variant", self.initial.variant),
            ("initial.amp1", f"{self.initial.amp1:.17g}"),
            ("initial.amp2", f"{self.initial.amp2:.17g}"),
            ("initial.phase", f"{self.initial.phase:.17g}"),
            ("reservoir_a.lambda", f"{self.reservoir_a.lam:.17g}"),
            ("reservoir_a.delta", f"{self.reservoir_a.delta:.17g}"),
            ("reservoir_a.enabled", str(self.reservoir_a_on).lower()),
            ("reservoir_b.lambda", f"{self.reservoir_b.lam:.17g}"),
            ("reservoir_b.delta", f"{self.reservoir_b.delta:.17g}"),
            ("reservoir_b.enabled", str(self.reservoir_b_on).lower()),
            ("t_max", f"{self.t_max:.17g}"),
            ("n_steps", self.n_steps),
            ("measures", ", ".join(self.measures)),
            ("discord_method", self.discord_method),
            ("g_method", self.g_method),
        ]


def _parse_bool(raw: str, key: str) -> bool:
    val = raw.strip().lower()
    if val in ("true", "yes", "1", "on"):
        return True
    if val in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def parse_config_text(text: str, label: str = "scenario") -> ScenarioConfig:
    """Parse the flat key-value scenario format.

    Lines are ``key = value``; '#' starts a comment; keys are
    case-insensitive.  Required keys: initial.variant, initial.amp1,
    initial.amp2, reservoir_a.lambda, reservoir_b.lambda, t_max,
    n_steps.  Optional: initial.phase (0), reservoir_X.delta (0),
    reservoir_X.enabled (true), measures (all), discord_method
    (analytic), g_method (closed), variational_grid (64), label.
    """
    kv: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, value = body.split("=", 1)
        kv[key.strip().lower()] = value.strip()

    def pop(key, default=None, required=False):
        if key in kv:
            return kv.pop(key)
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default

    def popf(key, default=None, required=False):
        raw = pop(key, default=None, required=required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc

    variant = pop("initial.variant", required=True).lower()
    try:
        initial = InitialState(variant=variant,
                               amp1=popf("initial.amp1", required=True),
                               amp2=popf("initial.amp2", required=True),
                               phase=popf("initial.phase", 0.0))
        res_a = ReservoirParams(lam=popf("reservoir_a.lambda", required=True),
                                delta=popf("reservoir_a.delta", 0.0))
        res_b = ReservoirParams(lam=popf("reservoir_b.lambda", required=True),
                                delta=popf("reservoir_b.delta", 0.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    measures_raw = pop("measures", ", ".join(MEASURES))
    measures = tuple(m.strip() for m in measures_raw.split(",") if m.strip())

    cfg = ScenarioConfig(
        reservoir_a=res_a,
        reservoir_b=res_b,
        initial=initial,
        t_max=popf("t_max", required=True),
        n_steps=int(popf("n_steps", required=True)),
        measures=measures,
        discord_method=pop("discord_method", "analytic").lower(),
        g_method=pop("g_method", "closed").lower(),
        reservoir_a_on=_parse_bool(pop("reservoir_a.enabled", "true"), "reservoir_a.enabled"),
        reservoir_b_on=_parse_bool(pop("reservoir_b.enabled", "true"), "reservoir_b.enabled"),
        variational_grid=int(popf("variational_grid", 64)),
        label=pop("label", label),
    )
    if kv:
        raise ConfigError(f"unknown config keys: {sorted(kv)}")
    return cfg


def parse_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, label=path.stem)


# ---------------------------------------------------------------------------
# vectorized closed-form measures along a trace

def _binary_split_entropy(x: np.ndarray) -> np.ndarray:
    """Entropy of the ((1-x)/2, (1+x)/2) split, elementwise; x clipped to [0,1]."""
    x = np.clip(x, 0.0, 1.0)
    return -(xlog2x((1.0 - x) / 2.0) + xlog2x((1.0 + x) / 2.0))


def _safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(den)
    mask = den > 0.0
    out[mask] = num[mask] / den[mask]
    return out


def _psi_columns(a: float, b: float, ga2, gb2, gg):
    """C, D, I per sample for the |00>/|11> family (arrays in, arrays out)."""
    p11 = a * a + (1.0 - ga2) * (1.0 - gb2) * b * b
    p22 = (1.0 - ga2) * gb2 * b * b
    p33 = ga2 * (1.0 - gb2) * b * b
    p44 = ga2 * gb2 * b * b
    c14 = gg * a * b

    conc = np.maximum(0.0, 2.0 * gg * a * b
                      - 2.0 * b * b * gg * np.sqrt(np.clip((1 - ga2) * (1 - gb2), 0, None)))

    gap = np.sqrt((p11 - p44) ** 2 + 4.0 * c14**2)
    lam0 = 0.5 * ((p11 + p44) + gap)
    lam1 = 0.5 * ((p11 + p44) - gap)
    s_ab = -(xlog2x(lam0) + xlog2x(lam1) + xlog2x(p22) + xlog2x(p33))
    s_a = -(xlog2x(p11 + p22) + xlog2x(p33 + p44))
    s_b = -(xlog2x(p11 + p33) + xlog2x(p22 + p44))
    info = np.maximum(0.0, s_a + s_b - s_ab)

    s1 = (p22 + p44) * _binary_split_entropy(_safe_ratio(np.abs(p22 - p44), p22 + p44)) \
        + (p11 + p33) * _binary_split_entropy(_safe_ratio(np.abs(p11 - p33), p11 + p33))
    s2 = _binary_split_entropy(np.sqrt((p11 + p22 - p33 - p44) ** 2 + 4.0 * c14**2))
    disc = np.maximum(0.0, s_b - s_ab + np.minimum(s1, s2))
    return conc, disc, info


def _phi_columns(al: float, be: float, ga2, gb2, gg):
    """C, D, I per sample for the |01>/|10> family."""
    p11 = (1.0 - gb2) * al * al + (1.0 - ga2) * be * be
    p22 = al * al * gb2
    p33 = be * be * ga2
    c23 = al * be * gg

    conc = 2.0 * al * be * gg

    gap = np.sqrt((p22 - p33) ** 2 + 4.0 * c23**2)
    mu0 = 0.5 * ((p22 + p33) + gap)
    mu1 = 0.5 * ((p22 + p33) - gap)
    s_ab = -(xlog2x(p11) + xlog2x(mu0) + xlog2x(mu1))
    s_a = -(xlog2x(p11 + p22) + xlog2x(p33))
    s_b = -(xlog2x(p11 + p33) + xlog2x(p22))
    info = np.maximum(0.0, s_a + s_b - s_ab)

    s1 = (p11 + p33) * _binary_split_entropy(_safe_ratio(np.abs(p11 - p33), p11 + p33))
    s2 = _binary_split_entropy(np.sqrt((p11 + p22 - p33) ** 2 + 4.0 * c23**2))
    disc = np.maximum(0.0, s_b + xlog2x(p11) + xlog2x(p22 + p33) + np.minimum(s1, s2))
    return conc, disc, info


def _amplitudes(cfg: ScenarioConfig, method: str) -> tuple[np.ndarray, np.ndarray, dict]:
    times = np.linspace(0.0, cfg.t_max, cfg.n_steps)
    meta: dict[str, object] = {}

    def one(params: ReservoirParams, enabled: bool, tag: str) -> np.ndarray:
        if not enabled:
            return np.ones_like(times, dtype=complex)
        if method == "closed":
            return survival_amplitude(times, params)
        if cfg.n_steps - 1 < 10:
            raise ConfigError("g_method 'volterra' needs at least 11 samples")
        trace = volterra_solve(params, cfg.t_max, cfg.n_steps - 1)
        meta[f"volterra.{tag}.step"] = trace.meta["step"]
        meta[f"volterra.{tag}.stable_step"] = trace.meta["stable_step"]
        return trace.values

    return one(cfg.reservoir_a, cfg.reservoir_a_on, "a"), \
        one(cfg.reservoir_b, cfg.reservoir_b_on, "b"), meta


def _variational_columns(cfg: ScenarioConfig, g_a: np.ndarray, g_b: np.ndarray):
    """Per-sample variational discord and classical correlation (slow path)."""
    disc = np.empty(len(g_a))
    qcol = np.empty(len(g_a))
    for i, (ga, gb) in enumerate(zip(g_a, g_b)):
        rho = evolve(cfg.initial, ga, gb).rho
        q, _basis = classical_correlation(rho, grid=cfg.variational_grid)
        info = mutual_information(rho)
        qcol[i] = q
        disc[i] = max(0.0, info - q)
    return disc, qcol


def run_scenario(cfg: ScenarioConfig) -> CorrelationTrace:
    """Evaluate one scenario on its uniform time grid.

    Columns follow the requested measures: C (concurrence), D (discord),
    I (mutual information), Q (classical correlation), plus gA2/gB2
    always.  With ``discord_method='both'`` an extra D_var column holds
    the variational values and the metadata records the largest
    analytic/variational deviation; ``g_method='both'`` likewise adds
    gA2_vol/gB2_vol columns and the closed-vs-solver deviation.
    """
    try:
        return _run_scenario(cfg)
    except QubeatError:
        raise
    except Exception as exc:  # attach scenario context to unexpected failures
        raise ScenarioError(f"scenario {cfg.label!r} failed: {exc}") from exc


def _run_scenario(cfg: ScenarioConfig) -> CorrelationTrace:
    times = np.linspace(0.0, cfg.t_max, cfg.n_steps)
    main_method = "volterra" if cfg.g_method == "volterra" else "closed"
    g_a, g_b, meta_extra = _amplitudes(cfg, main_method)

    ga2 = np.abs(g_a) ** 2
    gb2 = np.abs(g_b) ** 2
    gg = np.abs(g_a) * np.abs(g_b)

    if cfg.initial.variant == "psi":
        conc, disc, info = _psi_columns(cfg.initial.amp1, cfg.initial.amp2, ga2, gb2, gg)
    else:
        conc, disc, info = _phi_columns(cfg.initial.amp1, cfg.initial.amp2, ga2, gb2, gg)

    series: dict[str, np.ndarray] = {}
    meta: dict[str, object] = dict(cfg.items())
    meta.update(meta_extra)

    want = set(cfg.measures)
    if "concurrence" in want:
        series["C"] = conc
    if cfg.discord_method in ("variational", "both") and ("discord" in want or "classical" in want):
        d_var, q_var = _variational_columns(cfg, g_a, g_b)
        if cfg.discord_method == "variational":
            if "discord" in want:
                series["D"] = d_var
            if "mutual_info" in want:
                series["I"] = info
            if "classical" in want:
                series["Q"] = q_var
        else:  # both: analytic is the main column, variational alongside
            if "discord" in want:
                series["D"] = disc
                series["D_var"] = d_var
            if "mutual_info" in want:
                series["I"] = info
            if "classical" in want:
                series["Q"] = np.maximum(0.0, info - disc)
            meta["max_dev_discord"] = f"{np.max(np.abs(disc - d_var)):.3e}"
    else:
        if "discord" in want:
            series["D"] = disc
        if "mutual_info" in want:
            series["I"] = info
        if "classical" in want:
            series["Q"] = np.maximum(0.0, info - disc)

    series["gA2"] = ga2
    series["gB2"] = gb2

    if cfg.g_method == "both":
        g_a_v, g_b_v, _ = _amplitudes(cfg, "volterra")
        series["gA2_vol"] = np.abs(g_a_v) ** 2
        series["gB2_vol"] = np.abs(g_b_v) ** 2
        dev = max(np.max(np.abs(g_a - g_a_v)), np.max(np.abs(g_b - g_b_v)))
        meta["max_dev_g"] = f"{dev:.3e}"

    return CorrelationTrace(times=times, series=series, meta=meta)


# ---------------------------------------------------------------------------
# figure presets

_FIG_LAM = 0.2
_FIG_DELTA_A = 10.0  # 50 * lam
_FIG_DELTA_B = 9.0   # 45 * lam
# sweep values for the detuning/width studies; representative choices,
# not prescribed by any reference data
FIG4_DETUNINGS = (0.0, 2.0, 5.0, 10.0)
FIG5_WIDTHS = (1.0, 0.2, 0.05)


def _beat_pair(measure: str, fig: str) -> list[ScenarioConfig]:
    base = dict(
        reservoir_a=ReservoirParams(lam=_FIG_LAM, delta=_FIG_DELTA_A),
        reservoir_b=ReservoirParams(lam=_FIG_LAM, delta=_FIG_DELTA_B),
        t_max=50.0,
        n_steps=4001,
        measures=(measure,),
    )
    return [
        ScenarioConfig(initial=InitialState.bell_phi(), label=f"{fig}_phi", **base),
        ScenarioConfig(initial=InitialState.bell_psi(), label=f"{fig}_psi", **base),
    ]


def figure_preset(fig_id: int) -> list[ScenarioConfig]:
    """Scenario bundles reproducing the packaged example figures.

    1: concurrence beats for both Bell families (lam=0.2, deltas 10 and 9)
    2: single-environment controls, |01>/|10> Bell state, concurrence and discord
    3: discord beats, same parameters as 1
    4: discord for equal detunings swept over FIG4_DETUNINGS at lam=0.2
    5: discord for widths swept over FIG5_WIDTHS at delta=2
    """
    if fig_id == 1:
        return _beat_pair("concurrence", "fig1")
    if fig_id == 2:
        out = []
        for measure in ("concurrence", "discord"):
            for side in ("a", "b"):
                out.append(ScenarioConfig(
                    reservoir_a=ReservoirParams(lam=_FIG_LAM, delta=_FIG_DELTA_A),
                    reservoir_b=ReservoirParams(lam=_FIG_LAM, delta=_FIG_DELTA_B),
                    initial=InitialState.bell_phi(),
                    t_max=50.0,
                    n_steps=4001,
                    measures=(measure,),
                    reservoir_a_on=(side == "a"),
                    reservoir_b_on=(side == "b"),
                    label=f"fig2_{measure}_{side}_only",
                ))
        return out
    if fig_id == 3:
        return _beat_pair("discord", "fig3")
    if fig_id == 4:
        out = []
        for variant, make in (("phi", InitialState.bell_phi), ("psi", InitialState.bell_psi)):
            for delta in FIG4_DETUNINGS:
                out.append(ScenarioConfig(
                    reservoir_a=ReservoirParams(lam=_FIG_LAM, delta=delta),
                    reservoir_b=ReservoirParams(lam=_FIG_LAM, delta=delta),
                    initial=make(),
                    t_max=1500.0,
                    n_steps=15001,
                    measures=("discord",),
                    label=f"fig4_{variant}_delta{delta:g}",
                ))
        return out
    if fig_id == 5:
        out = []
        for variant, make in (("phi", InitialState.bell_phi), ("psi", InitialState.bell_psi)):
            for lam in FIG5_WIDTHS:
                out.append(ScenarioConfig(
                    reservoir_a=ReservoirParams(lam=lam, delta=2.0),
                    reservoir_b=ReservoirParams(lam=lam, delta=2.0),
                    initial=make(),
                    t_max=1500.0,
                    n_steps=15001,
                    measures=("discord",),
                    label=f"fig5_{variant}_lam{lam:g}",
                ))
        return out
    raise ConfigError(f"figure id must be 1..5, got {fig_id}")


def with_overrides(cfg: ScenarioConfig, *, t_max: float | None = None,
                   n_steps: int | None = None) -> ScenarioConfig:
    """Copy of a config with CLI-level overrides applied."""
    kwargs = {}
    if t_max is not None:
        kwargs["t_max"] = t_max
    if n_steps is not None:
        kwargs["n_steps"] = n_steps
    return replace(cfg, **kwargs) if kwargs else cfg
