//! Figure jobs, parameter sweeps, and deterministic CSV/JSON emission
//! reproducing the reference data series.

pub mod csv;

pub use csv::{fmt_float, CsvFile};

use crate::error::{Error, Result};
use crate::fock::{coherent_cutoff_guard, squeezed_cutoff_guard, C64, StateVector};
use crate::metrics::{
    fidelity, photon_stats, snr_ratio, squeezing, wigner_numeric, GridSpec,
};
use crate::protocol::{
    conditional_state_first_order, weak_values, ConditionalOutput, ModelPath, ProtocolParams,
};
use crate::states::{coherent_state, fock, spac, spasv, squeezed_vacuum, PointerKind};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::str::FromStr;

/// Quadrature angle at which the squeezing columns are reported: the squeezed
/// direction of a phase-zero squeezed state.
pub const SQUEEZING_REPORT_ANGLE: f64 = std::f64::consts::FRAC_PI_2;

const DEFAULT_BETA_POINTS: usize = 81;
const DEFAULT_ETA_POINTS: usize = 41;
const BETA_MAX: f64 = 4.0;
const ETA_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4Wigner,
    Fig5,
    Fig6a,
    Fig6b,
    Fig8a,
    Fig8b,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4Wigner,
        FigureId::Fig5,
        FigureId::Fig6a,
        FigureId::Fig6b,
        FigureId::Fig8a,
        FigureId::Fig8b,
        FigureId::Fig9,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4Wigner => "fig4-wigner",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6a => "fig6a",
            FigureId::Fig6b => "fig6b",
            FigureId::Fig8a => "fig8a",
            FigureId::Fig8b => "fig8b",
            FigureId::Fig9 => "fig9",
        }
    }

    fn stem(&self) -> String {
        self.name().replace('-', "_")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// One figure-reproduction job.
#[derive(Debug, Clone)]
pub struct FigureJob {
    pub id: FigureId,
    pub base: ProtocolParams,
    pub grid: GridSpec,
    pub out_dir: PathBuf,
    /// Imbalance curve set for the SNR figure.
    pub eps_curves: Vec<f64>,
    /// Override for the sweep resolution.
    pub points: Option<usize>,
}

impl FigureJob {
    pub fn new(id: FigureId, out_dir: impl Into<PathBuf>) -> Self {
        FigureJob {
            id,
            base: ProtocolParams::default(),
            grid: GridSpec::default(),
            out_dir: out_dir.into(),
            eps_curves: vec![0.05, 0.1, 0.2],
            points: None,
        }
    }
}

/// Sidecar record written next to the CSVs: everything needed to reproduce
/// any row by direct library calls.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub figure: String,
    pub tool_version: String,
    pub params: ProtocolParams,
    pub grid: GridSpec,
    pub eps_curves: Vec<f64>,
    pub points: usize,
    pub squeezing_angle: f64,
    pub files: Vec<String>,
}

/// Generated but not yet written figure data.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub files: Vec<CsvFile>,
    pub sidecar: Sidecar,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

fn base_comments(job: &FigureJob, points: usize) -> Vec<String> {
    vec![
        format!("generated by pswm {}", env!("CARGO_PKG_VERSION")),
        format!("figure: {}", job.id.name()),
        format!(
            "g={} alpha={}{:+}i epsilon={}",
            fmt_float(job.base.g),
            fmt_float(job.base.alpha.re),
            job.base.alpha.im,
            fmt_float(job.base.epsilon)
        ),
        format!(
            "signal_cutoff={} idler_cutoff={} points={}",
            job.base.signal_cutoff, job.base.idler_cutoff, points
        ),
    ]
}

/// Conditional output plus the two reference fidelities for the pointer kind:
/// F1 against the unconditioned input, F2 against the photon-added target.
pub fn conditional_with_fidelities(params: &ProtocolParams) -> Result<(ConditionalOutput, f64, f64)> {
    let out = conditional_state_first_order(params)?;
    let space = out.state.spaces()[0];
    let (ref1, ref2): (StateVector, StateVector) = match params.pointer {
        PointerKind::Vacuum => (StateVector::vacuum(vec![space])?, fock(1, space)?),
        PointerKind::Coherent { beta } => (coherent_state(beta, space)?, spac(beta, space)?),
        PointerKind::SqueezedVacuum { eta, phi } => {
            (squeezed_vacuum(eta, phi, space)?, spasv(eta, phi, space)?)
        }
    };
    let f1 = fidelity(&ref1, &out.state)?;
    let f2 = fidelity(&ref2, &out.state)?;
    Ok((out, f1, f2))
}

fn beta_sweep_params(base: &ProtocolParams, beta: f64) -> ProtocolParams {
    let mut p = base.with_pointer(PointerKind::Coherent {
        beta: C64::new(beta, 0.0),
    });
    // Hoist the cutoff to the sweep maximum so every row shares one basis.
    p.signal_cutoff = p
        .signal_cutoff
        .max(coherent_cutoff_guard(C64::new(BETA_MAX, 0.0)));
    p
}

fn eta_sweep_params(base: &ProtocolParams, eta: f64, alpha: f64) -> ProtocolParams {
    let mut p = base.with_pointer(PointerKind::SqueezedVacuum { eta, phi: 0.0 });
    p.alpha = C64::new(alpha, 0.0);
    p.signal_cutoff = p.signal_cutoff.max(squeezed_cutoff_guard(ETA_MAX));
    p
}

fn wigner_csv(job: &FigureJob, name: String, state: &StateVector, points: usize) -> Result<CsvFile> {
    let w = wigner_numeric(state, &job.grid)?;
    let mut rows = Vec::with_capacity(w.xs.len() * w.ps.len());
    for (i, &x) in w.xs.iter().enumerate() {
        for (j, &p) in w.ps.iter().enumerate() {
            rows.push(vec![x, p, w.values[(i, j)]]);
        }
    }
    let mut comments = base_comments(job, points);
    comments.push(format!(
        "grid: x in [{}, {}] ({} pts), p in [{}, {}] ({} pts)",
        fmt_float(job.grid.x_min),
        fmt_float(job.grid.x_max),
        job.grid.nx,
        fmt_float(job.grid.p_min),
        fmt_float(job.grid.p_max),
        job.grid.np
    ));
    Ok(CsvFile {
        name,
        comments,
        header: vec!["x".into(), "p".into(), "w".into()],
        rows,
    })
}

/// Produce all data series for a figure without touching the filesystem.
pub fn generate_figure(job: &FigureJob) -> Result<FigureData> {
    job.grid.validate()?;
    job.base.validate()?;
    let mut files: Vec<CsvFile> = Vec::new();
    let points;

    match job.id {
        FigureId::Fig2 | FigureId::Fig3a | FigureId::Fig3b => {
            points = job.points.unwrap_or(DEFAULT_BETA_POINTS);
            let mut rows = Vec::with_capacity(points);
            for beta in linspace(0.0, BETA_MAX, points) {
                let params = beta_sweep_params(&job.base, beta);
                let (out, f1, f2) = conditional_with_fidelities(&params)?;
                match job.id {
                    FigureId::Fig2 => rows.push(vec![beta, f1, f2]),
                    FigureId::Fig3a => {
                        let stats = photon_stats(&out.state)?;
                        rows.push(vec![beta, stats.g2]);
                    }
                    FigureId::Fig3b => {
                        let stats = photon_stats(&out.state)?;
                        rows.push(vec![beta, stats.mandel_q]);
                    }
                    _ => unreachable!(),
                }
            }
            let header = match job.id {
                FigureId::Fig2 => vec!["beta".into(), "f1".into(), "f2".into()],
                FigureId::Fig3a => vec!["beta".into(), "g2".into()],
                _ => vec!["beta".into(), "mandel_q".into()],
            };
            files.push(CsvFile {
                name: format!("{}.csv", job.id.stem()),
                comments: base_comments(job, points),
                header,
                rows,
            });
        }
        FigureId::Fig4Wigner => {
            points = 3;
            for beta in [0.0, 1.0, 2.0] {
                let params = job.base.with_pointer(PointerKind::Coherent {
                    beta: C64::new(beta, 0.0),
                });
                let (out, _, _) = conditional_with_fidelities(&params)?;
                files.push(wigner_csv(
                    job,
                    format!("{}_beta{}.csv", job.id.stem(), beta as usize),
                    &out.state,
                    points,
                )?);
            }
        }
        FigureId::Fig5 => {
            points = job.points.unwrap_or(DEFAULT_BETA_POINTS);
            for &eps in &job.eps_curves {
                let mut rows = Vec::with_capacity(points);
                for beta in linspace(0.0, BETA_MAX, points) {
                    let mut params = beta_sweep_params(&job.base, beta);
                    params.epsilon = eps;
                    let report =
                        snr_ratio(&params, C64::new(beta, 0.0), ModelPath::FirstOrder)?;
                    rows.push(vec![beta, report.chi]);
                }
                let mut comments = base_comments(job, points);
                comments.push(format!("epsilon={}", fmt_float(eps)));
                files.push(CsvFile {
                    name: format!("{}_eps{:.3}.csv", job.id.stem(), eps),
                    comments,
                    header: vec!["beta".into(), "chi".into()],
                    rows,
                });
            }
        }
        FigureId::Fig6a | FigureId::Fig6b => {
            points = job.points.unwrap_or(DEFAULT_ETA_POINTS);
            let alpha = if job.id == FigureId::Fig6a { 0.01 } else { 0.75 };
            let mut rows = Vec::with_capacity(points);
            for eta in linspace(0.0, ETA_MAX, points) {
                let params = eta_sweep_params(&job.base, eta, alpha);
                let (_, f1, f2) = conditional_with_fidelities(&params)?;
                rows.push(vec![eta, f1, f2]);
            }
            let mut comments = base_comments(job, points);
            comments.push(format!("alpha={}", fmt_float(alpha)));
            files.push(CsvFile {
                name: format!("{}.csv", job.id.stem()),
                comments,
                header: vec!["eta".into(), "f1".into(), "f2".into()],
                rows,
            });
        }
        FigureId::Fig8a | FigureId::Fig8b => {
            points = job.points.unwrap_or(DEFAULT_ETA_POINTS);
            let alpha = if job.id == FigureId::Fig8a { 0.01 } else { 0.75 };
            let mut rows = Vec::with_capacity(points);
            for eta in linspace(0.0, ETA_MAX, points) {
                let params = eta_sweep_params(&job.base, eta, alpha);
                let out = conditional_state_first_order(&params)?;
                let space = out.state.spaces()[0];
                let sv = squeezed_vacuum(eta, 0.0, space)?;
                let target = spasv(eta, 0.0, space)?;
                let angle = SQUEEZING_REPORT_ANGLE;
                rows.push(vec![
                    eta,
                    squeezing(&out.state, angle)?,
                    squeezing(&sv, angle)?,
                    squeezing(&target, angle)?,
                ]);
            }
            let mut comments = base_comments(job, points);
            comments.push(format!("alpha={}", fmt_float(alpha)));
            comments.push(
                "squeezing measured at the squeezed quadrature (angle pi/2 for squeeze phase 0)"
                    .into(),
            );
            files.push(CsvFile {
                name: format!("{}.csv", job.id.stem()),
                comments,
                header: vec![
                    "eta".into(),
                    "s_omega".into(),
                    "s_sv".into(),
                    "s_spasv".into(),
                ],
                rows,
            });
        }
        FigureId::Fig9 => {
            points = 9;
            for eta in [0.0f64, 1.0, 2.0] {
                let params = eta_sweep_params(&job.base, eta, job.base.alpha.norm());
                let space = params.signal_space()?;
                let sv = squeezed_vacuum(eta, 0.0, space)?;
                let omega = conditional_state_first_order(&params)?.state;
                let target = spasv(eta, 0.0, space)?;
                for (label, state) in [("sv", &sv), ("omega", &omega), ("spasv", &target)] {
                    files.push(wigner_csv(
                        job,
                        format!("{}_eta{}_{}.csv", job.id.stem(), eta as usize, label),
                        state,
                        points,
                    )?);
                }
            }
        }
    }

    let sidecar = Sidecar {
        figure: job.id.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        params: job.base,
        grid: job.grid,
        eps_curves: job.eps_curves.clone(),
        points,
        squeezing_angle: SQUEEZING_REPORT_ANGLE,
        files: files.iter().map(|f| f.name.clone()).collect(),
    };
    Ok(FigureData { files, sidecar })
}

/// Run a figure job: write one CSV per data series plus a JSON sidecar.
pub fn run_figure(job: &FigureJob) -> Result<Vec<PathBuf>> {
    let data = generate_figure(job)?;
    std::fs::create_dir_all(&job.out_dir)?;
    let mut written = Vec::new();
    for file in &data.files {
        written.push(file.write_to(&job.out_dir)?);
    }
    let sidecar_path = job.out_dir.join(format!("{}.json", job.id.stem()));
    let json = serde_json::to_string_pretty(&data.sidecar).expect("sidecar serializes");
    std::fs::write(&sidecar_path, json.as_bytes())?;
    written.push(sidecar_path);
    Ok(written)
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Beta,
    Eta,
    Epsilon,
    Alpha,
    Phi,
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "beta" => SweepVar::Beta,
            "eta" => SweepVar::Eta,
            "epsilon" => SweepVar::Epsilon,
            "alpha" => SweepVar::Alpha,
            "phi" => SweepVar::Phi,
            other => {
                return Err(Error::Range(format!(
                    "unknown sweep variable `{other}` (expected beta|eta|epsilon|alpha|phi)"
                )))
            }
        })
    }
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::Beta => "beta",
            SweepVar::Eta => "eta",
            SweepVar::Epsilon => "epsilon",
            SweepVar::Alpha => "alpha",
            SweepVar::Phi => "phi",
        }
    }
}

/// Metric evaluated at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSelector {
    F1,
    F2,
    G2,
    MandelQ,
    MeanN,
    Squeezing,
    AbsWeakValueA,
    AbsWeakValueB,
    Chi,
}

impl FromStr for MetricSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f1" => MetricSelector::F1,
            "f2" => MetricSelector::F2,
            "g2" => MetricSelector::G2,
            "mandel_q" => MetricSelector::MandelQ,
            "mean_n" => MetricSelector::MeanN,
            "squeezing" => MetricSelector::Squeezing,
            "aw" => MetricSelector::AbsWeakValueA,
            "bw" => MetricSelector::AbsWeakValueB,
            "chi" => MetricSelector::Chi,
            other => {
                return Err(Error::Range(format!(
                    "unknown metric `{other}` (expected f1|f2|g2|mandel_q|mean_n|squeezing|aw|bw|chi)"
                )))
            }
        })
    }
}

impl MetricSelector {
    pub fn name(&self) -> &'static str {
        match self {
            MetricSelector::F1 => "f1",
            MetricSelector::F2 => "f2",
            MetricSelector::G2 => "g2",
            MetricSelector::MandelQ => "mandel_q",
            MetricSelector::MeanN => "mean_n",
            MetricSelector::Squeezing => "squeezing",
            MetricSelector::AbsWeakValueA => "abs_weak_value_a",
            MetricSelector::AbsWeakValueB => "abs_weak_value_b",
            MetricSelector::Chi => "chi",
        }
    }
}

/// A sweep over one parameter with everything else held fixed.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub fixed: ProtocolParams,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Range(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.lo < self.hi) {
            return Err(Error::Range(format!(
                "sweep range must satisfy lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    fn params_at(&self, value: f64) -> ProtocolParams {
        let mut p = self.fixed;
        match self.variable {
            SweepVar::Beta => {
                p = beta_sweep_params(&p, value);
                p.signal_cutoff = self
                    .fixed
                    .signal_cutoff
                    .max(coherent_cutoff_guard(C64::new(self.hi.abs(), 0.0)));
            }
            SweepVar::Eta => {
                let phi = match self.fixed.pointer {
                    PointerKind::SqueezedVacuum { phi, .. } => phi,
                    _ => 0.0,
                };
                p.pointer = PointerKind::SqueezedVacuum { eta: value, phi };
                p.signal_cutoff = self
                    .fixed
                    .signal_cutoff
                    .max(squeezed_cutoff_guard(self.hi.abs()));
            }
            SweepVar::Epsilon => p.epsilon = value,
            SweepVar::Alpha => p.alpha = C64::new(value, 0.0),
            SweepVar::Phi => {
                if let PointerKind::SqueezedVacuum { eta, .. } = self.fixed.pointer {
                    p.pointer = PointerKind::SqueezedVacuum { eta, phi: value };
                }
            }
        }
        p
    }
}

/// Tabular sweep output: one row per point, deterministic order.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self, comments: &[String]) -> CsvFile {
        CsvFile {
            name: "sweep.csv".into(),
            comments: comments.to_vec(),
            header: self.columns.clone(),
            rows: self.rows.clone(),
        }
    }
}

/// Evaluate a metric over a parameter grid. Columns: variable value, metric
/// value, zeroth-order success probability, model success probability.
pub fn sweep(spec: &SweepSpec, metric: MetricSelector) -> Result<Table> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.points);
    for value in linspace(spec.lo, spec.hi, spec.points) {
        let params = spec.params_at(value);
        let (out, f1, f2) = conditional_with_fidelities(&params)?;
        let m = match metric {
            MetricSelector::F1 => f1,
            MetricSelector::F2 => f2,
            MetricSelector::G2 => photon_stats(&out.state)?.g2,
            MetricSelector::MandelQ => photon_stats(&out.state)?.mandel_q,
            MetricSelector::MeanN => photon_stats(&out.state)?.mean_n,
            MetricSelector::Squeezing => squeezing(&out.state, SQUEEZING_REPORT_ANGLE)?,
            MetricSelector::AbsWeakValueA => weak_values(params.alpha, params.epsilon)?.a.norm(),
            MetricSelector::AbsWeakValueB => weak_values(params.alpha, params.epsilon)?.b.norm(),
            MetricSelector::Chi => {
                let beta = match params.pointer {
                    PointerKind::Coherent { beta } => beta,
                    _ => {
                        return Err(Error::Params(
                            "the chi metric needs a coherent pointer".into(),
                        ))
                    }
                };
                snr_ratio(&params, beta, ModelPath::FirstOrder)?.chi
            }
        };
        rows.push(vec![value, m, out.p_zeroth, out.p_model]);
    }
    Ok(Table {
        columns: vec![
            spec.variable.name().to_string(),
            metric.name().to_string(),
            "p_zeroth".to_string(),
            "p_model".to_string(),
        ],
        rows,
    })
}

#[cfg(test)]
mod tests;
