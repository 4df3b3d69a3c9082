"""Alpha-sweep orchestration and deterministic CSV emission."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import RunConfig
from .hamiltonian import calibrate_offset, potential_on_grid
from .response import build_report, trk_residual
from .threelevel import kappa2_max_fractional, measured_params, tl_kappa1, tl_kappa2

SWEEP_COLUMNS = [
    "alpha",
    "b_offset",
    "E0",
    "E1",
    "E2",
    "E10",
    "E20",
    "lam00",
    "lam11",
    "lam10",
    "lam20",
    "kappa1",
    "kappa2",
    "kappa1_app",
    "kappa2_app",
    "kappa2_max_frac",
    "trk00_residual",
    "converged",
    "error",
]


def fmt(value: float) -> str:
    """Fixed 12-significant-digit rendering used for every CSV number."""
    return format(float(value), ".12g")


@dataclass
class SweepRow:
    alpha: float
    b_offset: Optional[float] = None
    e0: Optional[float] = None
    e1: Optional[float] = None
    e2: Optional[float] = None
    e10: Optional[float] = None
    e20: Optional[float] = None
    lam00: Optional[float] = None
    lam11: Optional[float] = None
    lam10: Optional[float] = None
    lam20: Optional[float] = None
    kappa1: Optional[float] = None
    kappa2: Optional[float] = None
    kappa1_app: Optional[float] = None
    kappa2_app: Optional[float] = None
    kappa2_max_frac: Optional[float] = None
    trk00_residual: Optional[float] = None
    converged: bool = False
    error: str = ""

    def to_csv_fields(self) -> list[str]:
        values = [
            self.alpha,
            self.b_offset,
            self.e0,
            self.e1,
            self.e2,
            self.e10,
            self.e20,
            self.lam00,
            self.lam11,
            self.lam10,
            self.lam20,
            self.kappa1,
            self.kappa2,
            self.kappa1_app,
            self.kappa2_app,
            self.kappa2_max_frac,
            self.trk00_residual,
        ]
        fields = [fmt(v) if v is not None else "" for v in values]
        fields.append("true" if self.converged else "false")
        fields.append(self.error.replace(",", ";").replace("\n", " "))
        return fields


@dataclass
class RowResult:
    row: SweepRow
    artifacts: dict[str, str] = field(default_factory=dict)


@dataclass
class SweepResult:
    rows: list[SweepRow]
    csv_text: str
    artifacts: dict[str, str]

    @property
    def all_converged(self) -> bool:
        return all(r.converged and not r.error for r in self.rows)

    @property
    def any_error(self) -> bool:
        return any(r.error for r in self.rows)


def _alpha_tag(alpha: float) -> str:
    return format(alpha, "g").replace(".", "p")


def compute_row(config: RunConfig, alpha: float) -> RowResult:
    """Everything for one alpha; failures land in the row's error column."""
    try:
        potential = config.make_potential()
        policy = config.grid_policy()
        consts = config.constants()
        report, spectrum, table, lam = build_report(
            potential,
            policy,
            alpha,
            consts,
            k_states=config.k_states,
            k_sum=config.k_sum,
            calib_tol=config.calib_tol,
        )
        trk00 = trk_residual(spectrum, table, lam, 0, 0, consts)
        lam00 = float(lam.values[0, 0])
        frac_max = kappa2_max_fractional(
            lam00,
            float(lam.values[1, 1]),
            float(lam.values[1, 0]),
            float(lam.values[2, 0]),
            report.e10,
            consts,
        )
        row = SweepRow(
            alpha=alpha,
            b_offset=report.b_offset,
            e0=float(spectrum.energies[0]),
            e1=float(spectrum.energies[1]),
            e2=float(spectrum.energies[2]),
            e10=report.e10,
            e20=report.e20,
            lam00=lam00,
            lam11=float(lam.values[1, 1]),
            lam10=float(lam.values[1, 0]),
            lam20=float(lam.values[2, 0]),
            kappa1=report.kappa1,
            kappa2=report.kappa2,
            kappa1_app=report.kappa1_app,
            kappa2_app=report.kappa2_app,
            kappa2_max_frac=frac_max.kappa2_max,
            trk00_residual=trk00.value,
            converged=report.deltas.converged,
        )
        artifacts = _row_artifacts(config, alpha, spectrum, table, lam, consts)
        return RowResult(row, artifacts)
    except Exception as exc:  # noqa: BLE001 - row isolation is the contract
        return RowResult(SweepRow(alpha=alpha, error=f"{type(exc).__name__}: {exc}"))


def _row_artifacts(config, alpha, spectrum, table, lam, consts):
    artifacts: dict[str, str] = {}
    tag = _alpha_tag(alpha)
    stem = config.potential
    if "wavefunctions" in config.emit:
        artifacts[f"{stem}_alpha{tag}_wavefunctions.csv"] = _wavefunction_csv(
            config, spectrum, alpha, consts
        )
    if "lambda" in config.emit:
        lines = ["k,l,value"]
        k = lam.count
        for i in range(k):
            for j in range(k):
                lines.append(f"{i},{j},{fmt(lam.values[i, j])}")
        artifacts[f"{stem}_alpha{tag}_lambda.csv"] = "\n".join(lines) + "\n"
    if "trk" in config.emit:
        lines = ["k,l,residual,delta,converged"]
        top = min(5, table.count)
        for i in range(top):
            for j in range(top):
                res = trk_residual(spectrum, table, lam, i, j, consts)
                lines.append(
                    f"{i},{j},{fmt(res.value)},{fmt(res.delta)},"
                    f"{'true' if res.converged else 'false'}"
                )
        artifacts[f"{stem}_alpha{tag}_trk.csv"] = "\n".join(lines) + "\n"
    if "threelevel" in config.emit:
        params = measured_params(spectrum.energies, table, lam, consts)
        frac = kappa2_max_fractional(
            params.lam00, params.lam11, params.lam10, params.lam20,
            params.e10, consts,
        )
        header = (
            "E_ratio,X_ratio,E10,lam00,lam11,lam10,lam20,"
            "tl_kappa1,tl_kappa2,kappa2_max_frac,argmax_X,argmax_E"
        )
        values = [
            params.energy_ratio,
            params.moment_ratio,
            params.e10,
            params.lam00,
            params.lam11,
            params.lam10,
            params.lam20,
            tl_kappa1(params),
            tl_kappa2(params),
            frac.kappa2_max,
            frac.x_at,
            frac.e_at,
        ]
        artifacts[f"{stem}_alpha{tag}_threelevel.csv"] = (
            header + "\n" + ",".join(fmt(v) for v in values) + "\n"
        )
    return artifacts


def _wavefunction_csv(config, spectrum, alpha, consts) -> str:
    n_show = min(5, spectrum.count)
    grid = spectrum.grid
    states = spectrum.states[:, :n_show]
    potential = config.make_potential()
    if potential.has_wall:
        # The calibrated wall is exactly one spacing left of the grid.
        potential = potential.with_offset(grid.left_wall)
    v = potential_on_grid(potential, grid, alpha, consts)
    header = "x,V," + ",".join(f"psi{i}" for i in range(n_show))
    lines = [header]
    for i in range(grid.n):
        cells = [fmt(grid.x[i]), fmt(v[i])]
        cells += [fmt(states[i, j]) for j in range(n_show)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_wavefunctions(config: RunConfig, alpha: float) -> tuple[str, float]:
    """Per-state CSV (x, V, psi0..psi4) at one alpha; returns (text, offset)."""
    potential = config.make_potential()
    policy = config.grid_policy()
    consts = config.constants()
    calib = calibrate_offset(
        potential,
        policy,
        alpha,
        consts,
        tol=config.calib_tol,
        k_states=max(5, min(config.k_states, 10)),
    )
    text = _wavefunction_csv(config, calib.spectrum, alpha, consts)
    return text, calib.b


def _row_worker(config_json: str, alpha: float) -> RowResult:
    return compute_row(RunConfig.model_validate_json(config_json), alpha)


def run_sweep(config: RunConfig) -> SweepResult:
    """One CSV row per alpha, computed independently and assembled in order."""
    alphas = config.alpha_list()
    if config.jobs > 1 and len(alphas) > 1:
        payload = config.model_dump_json()
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_row_worker, [payload] * len(alphas), alphas))
    else:
        results = [compute_row(config, alpha) for alpha in alphas]

    rows = [r.row for r in results]
    artifacts: dict[str, str] = {}
    for r in results:
        artifacts.update(r.artifacts)
    lines = [",".join(SWEEP_COLUMNS)]
    lines += [",".join(row.to_csv_fields()) for row in rows]
    return SweepResult(rows, "\n".join(lines) + "\n", artifacts)


def count_nodes(psi: np.ndarray, threshold: float = 1e-6) -> int:
    """Sign changes of a sampled wavefunction, ignoring sub-threshold noise."""
    peak = np.abs(psi).max()
    significant = psi[np.abs(psi) > threshold * peak]
    return int(np.sum(np.sign(significant[1:]) != np.sign(significant[:-1])))
