use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use qjunction::currents::{
    dot_kappa2, dot_transport, heat_currents_2nd, kappa2, kappa4_low_t, Kappa2Method, Lead,
    SecularMode,
};
use qjunction::model::{build_junction, qubit_junction, JunctionModel, Reservoir, SpectralDensity};
use qjunction::rabi::{build_rabi_junction, kondo_temperature, RabiParams};
use qjunction::redfield::DotLead;

use crate::config::{Config, Kappa2MethodConfig, ModelConfig, SecularConfig};

pub const CSV_HEADER: [&str; 11] = [
    "sweep_var",
    "value",
    "kappa2",
    "kappa4",
    "kappa_total",
    "I_L",
    "I_R",
    "omega_10",
    "T_K",
    "solver",
    "levels",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub value: f64,
    pub kappa2: f64,
    pub kappa4: f64,
    pub kappa_total: f64,
    pub i_l: f64,
    pub i_r: f64,
    pub omega_10: f64,
    pub t_k: f64,
    pub solver: &'static str,
    pub levels: usize,
    /// Set when the point failed; numeric fields are NaN.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub variable: String,
    pub rows: Vec<Row>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Worker count: explicit flag, then `LT_THREADS`, then all cores.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.filter(|&n| n > 0)
        .or_else(|| {
            std::env::var("LT_THREADS")
                .ok()
                .and_then(|s| s.trim().parse().ok())
                .filter(|&n: &usize| n > 0)
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

pub fn build_model(m: &ModelConfig) -> Result<JunctionModel<f64>> {
    Ok(match m {
        ModelConfig::Rabi {
            epsilon,
            delta,
            omega_r,
            g,
            fock_cutoff,
            levels,
        } => build_rabi_junction(
            &RabiParams::new(*epsilon, *delta, *omega_r, *g)
                .with_levels(*levels)
                .with_fock_cutoff(*fock_cutoff),
        )?,
        ModelConfig::Qubit { epsilon, delta } => qubit_junction(*epsilon, *delta)?,
        ModelConfig::Junction { omega, q_l, q_r } => {
            let mat = |q: &Vec<Vec<f64>>| {
                let n = q.len();
                qjunction::linalg::RMatrix::from_fn(n, n, |a, b| q[a][b])
            };
            build_junction(
                omega.clone(),
                vec![("L".into(), mat(q_l)), ("R".into(), mat(q_r))],
            )?
        }
        ModelConfig::Dot { .. } => anyhow::bail!("the dot has no bosonic junction model"),
    })
}

fn solver_tag(cfg: &Config) -> &'static str {
    if cfg.is_fermionic() {
        return "rates";
    }
    match cfg.solver.mode {
        SecularConfig::Full => "full",
        SecularConfig::Partial => "partial",
    }
}

fn nominal_levels(cfg: &Config) -> usize {
    match &cfg.model {
        ModelConfig::Rabi { levels, .. } => *levels,
        ModelConfig::Qubit { .. } => 2,
        ModelConfig::Junction { omega, .. } => omega.len(),
        ModelConfig::Dot { .. } => 3,
    }
}

fn baths(cfg: &Config, tl: f64, tr: f64) -> Result<Vec<Reservoir<f64>>> {
    let j = SpectralDensity::ohmic_drude(cfg.baths.alpha, cfg.baths.omega_c)?;
    Ok(vec![
        Reservoir::bosonic("L", 1.0 / tl, j)?,
        Reservoir::bosonic("R", 1.0 / tr, j)?,
    ])
}

/// One grid point.
pub fn evaluate_point(cfg: &Config, value: f64) -> Result<Row> {
    let t = cfg.temperature_at(value);
    let tl = t * (1.0 + cfg.baths.bias);
    let model_cfg = cfg.model_at(value);

    if let ModelConfig::Dot {
        delta,
        gamma_l,
        gamma_r,
    } = model_cfg
    {
        let lead = |gamma, temp: f64| DotLead {
            gamma,
            beta: 1.0 / temp,
            mu: 0.0,
        };
        let (left, right) = (lead(gamma_l, tl), lead(gamma_r, t));
        let k2 = dot_kappa2(delta, gamma_l, gamma_r, t);
        return Ok(Row {
            value,
            kappa2: k2,
            kappa4: 0.0,
            kappa_total: k2,
            i_l: dot_transport(delta, left, right, Lead::Left).heat,
            i_r: dot_transport(delta, left, right, Lead::Right).heat,
            omega_10: delta,
            t_k: delta,
            solver: solver_tag(cfg),
            levels: 3,
            error: None,
        });
    }

    let model = build_model(&model_cfg)?;
    let sv = &cfg.solver;
    let mode = match sv.mode {
        SecularConfig::Full => SecularMode::Full,
        SecularConfig::Partial => SecularMode::Partial {
            factor: sv.cluster_factor,
            lamb_shift: sv.lamb_shift,
        },
    };
    let method = match (sv.kappa2_method, sv.mode) {
        (Some(Kappa2MethodConfig::Analytic), _) | (None, SecularConfig::Full) => {
            Kappa2Method::Analytic
        }
        _ => Kappa2Method::FiniteDifference,
    };
    let k2 = kappa2(&model, &baths(cfg, t, t)?, t, mode, method)?;
    let k4 = if cfg.kappa4_enabled() {
        kappa4_low_t(&model, cfg.baths.alpha, t)?
    } else {
        0.0
    };
    let currents = heat_currents_2nd(&model, &baths(cfg, tl, t)?, mode)?;
    Ok(Row {
        value,
        kappa2: k2,
        kappa4: k4,
        kappa_total: k2 + k4,
        i_l: currents.heat[0],
        i_r: currents.heat[1],
        omega_10: model.bohr(1, 0),
        t_k: kondo_temperature(&model)?,
        solver: solver_tag(cfg),
        levels: model.dim(),
        error: None,
    })
}

fn failed_row(cfg: &Config, value: f64, err: &anyhow::Error) -> Row {
    Row {
        value,
        kappa2: f64::NAN,
        kappa4: f64::NAN,
        kappa_total: f64::NAN,
        i_l: f64::NAN,
        i_r: f64::NAN,
        omega_10: f64::NAN,
        t_k: f64::NAN,
        solver: solver_tag(cfg),
        levels: nominal_levels(cfg),
        error: Some(format!("{err:#}")),
    }
}

/// Evaluates every grid point on a pool of `threads` workers; rows come back
/// in grid order.
pub fn run_sweep(cfg: &Config, threads: usize) -> Result<SweepOutcome> {
    let values = cfg.sweep.values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()?;
    let rows = pool.install(|| {
        values
            .par_iter()
            .map(|&v| match evaluate_point(cfg, v) {
                Ok(row) => row,
                Err(e) => {
                    log::warn!("{} = {v:e}: {e:#}", cfg.sweep.variable);
                    failed_row(cfg, v, &e)
                }
            })
            .collect()
    });
    Ok(SweepOutcome {
        variable: cfg.sweep.variable.to_string(),
        rows,
    })
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: &SweepOutcome, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in &out.rows {
        let mut rec = vec![out.variable.clone()];
        rec.extend(
            [
                r.value,
                r.kappa2,
                r.kappa4,
                r.kappa_total,
                r.i_l,
                r.i_r,
                r.omega_10,
                r.t_k,
            ]
            .map(fmt_float),
        );
        rec.push(r.solver.to_string());
        rec.push(r.levels.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(out: &SweepOutcome, path: &Path) -> Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(out, std::io::BufWriter::new(file))
}
