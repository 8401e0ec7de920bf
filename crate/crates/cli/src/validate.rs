//! Invariant suite behind `qjunction validate` and the acceptance harness.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Result};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qjunction::currents::{
    dot_heat_from_rates, dot_kappa2, dot_transport, heat_currents_2nd, kappa2, kappa4_from_kernel,
    kappa4_low_t, tls, Kappa2Method, Lead, SecularMode,
};
use qjunction::diagrams::{
    count_diagrams, evaluate_kernel_from_diagrams, exact_kernel_order, BosonMode, DiscreteSystem,
    FermionMode, OracleOptions,
};
use qjunction::linalg::{CMatrix, RMatrix};
use qjunction::model::{build_junction, qubit_junction, JunctionModel, Reservoir, SpectralDensity};
use qjunction::rabi::{
    build_rabi_junction, grwa_spectrum, grwa_zero_bias_gap, kondo_temperature, rwa_spectrum,
    vvpt_spectrum, ApproxSpectrum, RabiParams,
};
use qjunction::redfield::{build_k2_boson, gamma_rates, BathRates, DotLead};

use crate::config::Config;
use crate::sweep::{run_sweep, Row};

const ALPHA: f64 = 1e-3;
const OMEGA_C: f64 = 5.0;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{}\t{}\t{:.3}s\t{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e:#}")));
    Check {
        name: name.into(),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "{}", c.line());
    }
    s
}

fn baths(tl: f64, tr: f64) -> Result<Vec<Reservoir<f64>>> {
    let j = SpectralDensity::ohmic_drude(ALPHA, OMEGA_C)?;
    Ok(vec![
        Reservoir::bosonic("L", 1.0 / tl, j)?,
        Reservoir::bosonic("R", 1.0 / tr, j)?,
    ])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub type Fixture = (JunctionModel<f64>, Vec<Reservoir<f64>>);

/// Random four-level models with gaps in [0.05, 0.8), symmetric couplings and
/// independent bath temperatures in [0.1, 2).
pub fn random_models(seed: u64, count: usize) -> Result<Vec<Fixture>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut omega = vec![0.0];
            for _ in 0..3 {
                let w = omega.last().unwrap() + rng.gen_range(0.05..0.8);
                omega.push(w);
            }
            let mut sym = || {
                let mut q = RMatrix::zeros(4, 4);
                for a in 0..4 {
                    for b in a..4 {
                        let x = rng.gen_range(-1.0..1.0);
                        q[(a, b)] = x;
                        q[(b, a)] = x;
                    }
                }
                q
            };
            let (ql, qr) = (sym(), sym());
            let model = build_junction(omega, vec![("L".into(), ql), ("R".into(), qr)])?;
            let b = baths(rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0))?;
            Ok((model, b))
        })
        .collect()
}

/// Exact (total, irreducible) diagram counts at orders 2 to 8.
pub fn diagram_counts() -> Check {
    timed("diagram_counts", || {
        let expect = [(1, 1), (3, 2), (15, 10), (105, 74)];
        let got: Vec<(usize, usize)> = (1..=4).map(count_diagrams).collect::<Result<_, _>>()?;
        let irr: Vec<String> = got.iter().map(|c| c.1.to_string()).collect();
        Ok((
            got == expect,
            format!(
                "irreducible {} (total {:?})",
                irr.join(","),
                got.iter().map(|c| c.0).collect::<Vec<_>>()
            ),
        ))
    })
}

/// max_{n≠m} |Γ_nm / Γ_mn · e^{βω_nm} − 1| over every bath.
pub fn detailed_balance_defect(
    model: &JunctionModel<f64>,
    baths: &[Reservoir<f64>],
    rates: &BathRates<f64>,
) -> f64 {
    let mut worst = 0.0f64;
    for (b, g) in baths.iter().zip(&rates.per_bath) {
        for n in 0..model.dim() {
            for m in 0..n {
                let (up, down) = (g.get(n, m), g.get(m, n));
                if up == 0.0 && down == 0.0 {
                    continue;
                }
                let expect = (-b.beta * model.bohr(n, m)).exp();
                worst = worst.max((up / down / expect - 1.0).abs());
            }
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

pub fn detailed_balance_check(
    model: &JunctionModel<f64>,
    baths: &[Reservoir<f64>],
    rates: &BathRates<f64>,
) -> Check {
    timed("detailed_balance", || {
        let d = detailed_balance_defect(model, baths, rates);
        Ok((d <= 1e-12, format!("max relative defect {d:.2e}")))
    })
}

/// Sum rule, Hermiticity symmetry and detailed balance on ten random models.
pub fn kernel_identities() -> Check {
    timed("kernel_identities", || {
        let (mut sum, mut herm, mut db) = (0.0f64, 0.0f64, 0.0f64);
        for (model, b) in random_models(11, 10)? {
            let k = build_k2_boson(&model, &b)?;
            let scale = k.max_abs();
            sum = sum.max(k.sum_rule_residual() / scale);
            herm = herm.max(k.hermiticity_residual() / scale);
            db = db.max(detailed_balance_defect(
                &model,
                &b,
                &gamma_rates(&model, &b)?,
            ));
        }
        Ok((
            sum <= 1e-12 && herm <= 1e-12 && db <= 1e-12,
            format!(
                "10 models: sum rule {sum:.1e}, hermiticity {herm:.1e}, detailed balance {db:.1e}"
            ),
        ))
    })
}

fn oracle_tls() -> Result<DiscreteSystem> {
    let q_l = RMatrix::from_rows(&[vec![0.3, 1.0], vec![1.0, -0.2]])?;
    let q_r = RMatrix::from_rows(&[vec![-0.1, 0.7], vec![0.7, 0.4]])?;
    let model = build_junction(vec![0.0, 1.0], vec![("L".into(), q_l), ("R".into(), q_r)])?;
    let modes = [
        BosonMode {
            coupling: 0,
            omega: 0.8,
            beta: 6.0,
            lambda: 0.4,
        },
        BosonMode {
            coupling: 1,
            omega: 1.3,
            beta: 4.0,
            lambda: 0.6,
        },
    ];
    Ok(DiscreteSystem::bosonic(&model, &modes)?)
}

fn oracle_dot() -> Result<DiscreteSystem> {
    let mut modes = Vec::new();
    for (lead, omega, beta, mu, t) in [(0, 0.9, 5.0, -0.1, 0.5), (1, 1.4, 4.0, 0.2, 0.35)] {
        for spin in 1..3 {
            let mut d = CMatrix::zeros(3, 3);
            d[(0, spin)] = Complex::new(t, 0.0);
            modes.push(FermionMode {
                lead,
                omega,
                beta,
                mu,
                d_minus: d,
            });
        }
    }
    Ok(DiscreteSystem::fermionic(
        vec![0.0, 1.1, 1.1],
        vec![false, true, true],
        2,
        &modes,
    )?)
}

/// Diagram sums against the exact expansion on the composite space at λ = 0.3.
pub fn oracle_equivalence() -> Check {
    timed("oracle_equivalence", || {
        let lam = Complex::new(0.3, 0.0);
        let opts = OracleOptions::default();
        let mut worst = 0.0f64;
        let mut parts = Vec::new();
        for (label, sys, orders) in [
            ("TLS", oracle_tls()?, &[2usize, 4][..]),
            ("dot", oracle_dot()?, &[2usize][..]),
        ] {
            for &order in orders {
                let k = evaluate_kernel_from_diagrams(&sys, lam, order)?;
                let o = exact_kernel_order(&sys, lam, order, opts)?;
                let e = (&k - &o).max_abs() / o.max_abs();
                worst = worst.max(e);
                parts.push(format!("{label} K{order} {e:.1e}"));
            }
        }
        let k3 = exact_kernel_order(&oracle_tls()?, lam, 3, opts)?.max_abs();
        parts.push(format!("K3 {k3:.1e}"));
        Ok((worst <= 1e-8 && k3 <= 1e-12, parts.join(", ")))
    })
}

/// Qubit current, κ2 and κ4 against their closed forms.
pub fn tls_closed_forms() -> Check {
    timed("tls_closed_forms", || {
        let model = qubit_junction(0.3, 0.8)?;
        let w = model.bohr(1, 0);
        let (ql, qr) = (
            model.coupling("L").ok_or_else(|| anyhow!("no L"))?[(0, 1)],
            model.coupling("R").ok_or_else(|| anyhow!("no R"))?[(0, 1)],
        );
        let j = SpectralDensity::ohmic_drude(ALPHA, OMEGA_C)?;
        let (gl, gr) = (tls::gamma(&j, w, ql), tls::gamma(&j, w, qr));
        let (mut e_i, mut e_k2) = (0.0f64, 0.0f64);
        for k in 0..10 {
            let t = 0.1 * 1.5f64.powi(k);
            let i = heat_currents_2nd(&model, &baths(1.2 * t, t)?, SecularMode::Full)?;
            e_i = e_i.max(rel(i.heat[1], tls::current(w, gl, gr, 1.2 * t, t)));
            let k2 = kappa2(
                &model,
                &baths(t, t)?,
                t,
                SecularMode::Full,
                Kappa2Method::Analytic,
            )?;
            e_k2 = e_k2.max(rel(k2, tls::kappa2_gamma(w, gl, gr, t)));
        }
        let t = 0.01;
        let j_wide = SpectralDensity::ohmic_drude(ALPHA, 1e6)?;
        let wide = vec![
            Reservoir::bosonic("L", 1.0 / t, j_wide)?,
            Reservoir::bosonic("R", 1.0 / t, j_wide)?,
        ];
        let e_k4 = rel(
            kappa4_from_kernel(&model, &wide, t)?,
            tls::kappa4(w, ALPHA, ql, qr, t),
        );
        Ok((
            e_i <= 1e-12 && e_k2 <= 1e-10 && e_k4 <= 1e-10,
            format!("current {e_i:.1e}, kappa2 {e_k2:.1e}, kappa4 {e_k4:.1e}"),
        ))
    })
}

/// Golden-section maximum of `f` on [a, b].
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// T³ law of κ4, T⁻¹ tail of κ2 and the position of its maximum.
pub fn low_temperature_law() -> Check {
    timed("low_temperature_law", || {
        let model = qubit_junction(0.3, 0.8)?;
        let tk = kondo_temperature(&model)?;
        let k4 = |t: f64| kappa4_low_t(&model, ALPHA, t);
        let slope4 = (k4(0.02)? / k4(0.01)?).ln() / 2f64.ln();
        let k2 = |t: f64| -> Result<f64> {
            Ok(kappa2(
                &model,
                &baths(t, t)?,
                t,
                SecularMode::Full,
                Kappa2Method::Analytic,
            )?)
        };
        let slope2 = (k2(100.0 * tk)? / k2(10.0 * tk)?).ln() / 10f64.ln();
        let x_max = golden_max(|x| k2(tk / x), 1.0, 3.0, 1e-8)?;
        Ok((
            (slope4 - 3.0).abs() <= 1e-6
                && (slope2 + 1.0).abs() <= 0.02
                && (x_max - 1.9150).abs() <= 1e-3,
            format!(
                "kappa4 slope {slope4:.9}, kappa2 slope {slope2:.4}, max at w10/T = {x_max:.5}"
            ),
        ))
    })
}

fn ladder_errors(p: &RabiParams<f64>, exact: &[f64]) -> Result<[f64; 3]> {
    let err = |s: ApproxSpectrum<f64>| {
        let (w, _) = s.sorted();
        (0..5).map(|k| (w[k] - exact[k]).abs()).fold(0.0, f64::max)
    };
    Ok([
        err(rwa_spectrum(p, 4)?),
        err(vvpt_spectrum(p, 4)?),
        err(grwa_spectrum(p, 4)?),
    ])
}

/// RWA/VVPT/GRWA errors shrink monotonically as g → 0; GRWA gap regression.
pub fn approximation_ladder() -> Check {
    timed("approximation_ladder", || {
        let mut ok = true;
        let mut finest = [0.0; 3];
        for (eps, delta) in [(0.8, 0.6), (0.0, 0.6)] {
            let mut last = [f64::INFINITY; 3];
            for g in [0.05, 0.02, 0.01, 0.005] {
                let p = RabiParams::new(eps, delta, 1.0, g);
                let exact = build_rabi_junction(&p)?;
                let now = ladder_errors(&p, exact.omega())?;
                ok &= now.iter().zip(&last).all(|(a, b)| a < b);
                last = now;
            }
            finest = last;
        }
        let mut gap_err = 0.0f64;
        for (delta, g) in [(0.6f64, 0.4f64), (1.2, 0.4), (1.0, 0.1)] {
            let s = grwa_spectrum(&RabiParams::new(0.0, delta, 1.0, g), 2)?;
            gap_err = gap_err.max((s.gap() - grwa_zero_bias_gap(delta, g, 1.0)).abs());
        }
        Ok((
            ok && gap_err <= 1e-14,
            format!(
                "monotone {ok}; errors at g=0.005: RWA {:.1e}, VVPT {:.1e}, GRWA {:.1e}; GRWA gap {gap_err:.1e}",
                finest[0], finest[1], finest[2]
            ),
        ))
    })
}

/// Equilibrium dot currents vanish; closed-form κ against the rate solution.
pub fn fermionic_dot() -> Check {
    timed("fermionic_dot", || {
        let (delta, gl, gr) = (0.5, 0.01, 0.03);
        let lead = |gamma: f64, t: f64, mu: f64| DotLead {
            gamma,
            beta: 1.0 / t,
            mu,
        };
        let mut eq = 0.0f64;
        for (t, mu) in [(0.1, 0.0), (0.4, 0.2), (2.0, -0.3)] {
            for r in [Lead::Left, Lead::Right] {
                let c = dot_transport(delta, lead(gl, t, mu), lead(gr, t, mu), r);
                eq = eq
                    .max(c.particle.abs())
                    .max(c.energy.abs())
                    .max(c.heat.abs());
            }
            eq = eq.max(dot_heat_from_rates(delta, lead(gl, t, mu), lead(gr, t, mu))?.abs());
        }
        let mut worst = 0.0f64;
        for t in [0.1, 0.3, 1.0, 3.0] {
            let i = |tl: f64| dot_heat_from_rates(delta, lead(gl, tl, 0.0), lead(gr, t, 0.0));
            let d = |h: f64| -> Result<f64> { Ok((i(t + h)? - i(t - h)?) / (2.0 * h)) };
            let h = 1e-3 * t;
            let fd = (4.0 * d(h / 2.0)? - d(h)?) / 3.0;
            worst = worst.max(rel(fd, dot_kappa2(delta, gl, gr, t)));
        }
        Ok((
            eq <= 1e-12 && worst <= 1e-8,
            format!("equilibrium |I| {eq:.1e}, kappa vs finite difference {worst:.1e}"),
        ))
    })
}

/// Σ_r I_r = 0 on every steady state the suite builds.
pub fn conservation() -> Check {
    timed("conservation", || {
        let modes = [
            SecularMode::Full,
            SecularMode::Partial {
                factor: 10.0,
                lamb_shift: true,
            },
            SecularMode::Partial {
                factor: f64::INFINITY,
                lamb_shift: true,
            },
        ];
        let mut systems = random_models(11, 10)?;
        let q = qubit_junction(0.3, 0.8)?;
        for t in [0.05, 0.5, 5.0] {
            systems.push((q.clone(), baths(1.2 * t, t)?));
        }
        for (eps, delta, g) in [(0.8, 0.6, 0.01), (0.0, 1.2, 0.4), (0.3, 0.9, 0.1)] {
            let m = build_rabi_junction(&RabiParams::new(eps, delta, 1.0, g))?;
            systems.push((m, baths(0.25, 0.2)?));
        }
        let (mut count, mut worst, mut skipped) = (0, 0.0f64, 0);
        let mut ok = true;
        for (m, b) in &systems {
            for mode in modes {
                match heat_currents_2nd(m, b, mode) {
                    Ok(i) => {
                        count += 1;
                        ok &= i.is_conserved(1e-12);
                        worst = worst.max(i.conservation_defect() / i.max_abs());
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
        Ok((
            ok && count > 0,
            format!("{count} steady states, worst |ΣI|/max|I| {worst:.1e}, {skipped} degenerate skipped"),
        ))
    })
}

/// Invariants that must hold on every build.
pub fn invariant_suite() -> Vec<Check> {
    vec![
        diagram_counts(),
        kernel_identities(),
        oracle_equivalence(),
        tls_closed_forms(),
        low_temperature_law(),
        approximation_ladder(),
        fermionic_dot(),
        conservation(),
    ]
}

fn rabi_sweep(
    model: &str,
    solver: &str,
    variable: &str,
    start: f64,
    stop: f64,
    points: usize,
) -> Result<Vec<Row>> {
    let cfg = Config::from_toml(&format!(
        r#"
[model]
kind = "rabi"
{model}
[baths]
alpha = {ALPHA:e}
omega_c = {OMEGA_C:e}
temperature = 0.2
[solver]
{solver}
kappa4 = false
[sweep]
variable = "{variable}"
start = {start:e}
stop = {stop:e}
points = {points}
[output]
csv = "unused.csv"
"#
    ))?;
    let threads = crate::sweep::resolve_threads(None);
    Ok(run_sweep(&cfg, threads)?.rows)
}

fn peak(rows: &[Row]) -> Result<&Row> {
    rows.iter()
        .filter(|r| r.kappa2.is_finite())
        .max_by(|a, b| a.kappa2.total_cmp(&b.kappa2))
        .ok_or_else(|| anyhow!("no finite conductance"))
}

/// Resonance peak of the weak-coupling ε sweep at Δ = 0.6, T = 0.2.
pub fn rabi_resonance_peak() -> Check {
    timed("rabi_resonance_peak", || {
        let rows = rabi_sweep(
            "epsilon = 0.6\ndelta = 0.6\ng = 0.01",
            "mode = \"partial\"",
            "epsilon",
            0.6,
            1.0,
            21,
        )?;
        let p = peak(&rows)?;
        Ok((
            (p.value - 0.8).abs() <= 0.05,
            format!("peak at epsilon = {:.2}", p.value),
        ))
    })
}

/// Location of the g = 0.4, ε = 0 conductance maximum along Δ.
pub fn rabi_usc_maximum() -> Check {
    timed("rabi_usc_maximum", || {
        let rows = rabi_sweep(
            "epsilon = 0.0\ndelta = 0.4\ng = 0.4",
            "mode = \"partial\"",
            "delta",
            0.4,
            2.0,
            17,
        )?;
        let p = peak(&rows)?;
        Ok((
            p.value > 1.0,
            format!(
                "maximum at delta = {:.2} (kappa2 {:.3e})",
                p.value, p.kappa2
            ),
        ))
    })
}

/// Coherences lower the resonant peak relative to full secular.
pub fn rabi_peak_suppression() -> Check {
    timed("rabi_peak_suppression", || {
        let model = "epsilon = 0.6\ndelta = 0.6\ng = 0.01";
        let partial = rabi_sweep(model, "mode = \"partial\"", "epsilon", 0.6, 1.0, 21)?;
        let full = rabi_sweep(model, "mode = \"full\"", "epsilon", 0.6, 1.0, 21)?;
        let (kp, kf) = (peak(&partial)?.kappa2, peak(&full)?.kappa2);
        Ok((
            kp < kf,
            format!("partial peak {kp:.4e} < full peak {kf:.4e}"),
        ))
    })
}

/// Coherent suppression of κ4 at the quasi-degenerate point against the
/// two-level truncation.
pub fn rabi_kappa4_suppression() -> Check {
    timed("rabi_kappa4_suppression", || {
        let m = build_rabi_junction(&RabiParams::new(0.8, 0.6, 1.0, 0.01))?;
        let t = 0.01;
        let full = kappa4_low_t(&m, ALPHA, t)?;
        let two = kappa4_low_t(&m.truncated(2)?, ALPHA, t)?;
        ensure!(full > 0.0, "vanishing kappa4");
        Ok((two >= 2.0 * full, format!("TLS/full = {:.1}", two / full)))
    })
}

pub fn rabi_physics() -> Vec<Check> {
    vec![
        rabi_resonance_peak(),
        rabi_usc_maximum(),
        rabi_peak_suppression(),
        rabi_kappa4_suppression(),
    ]
}
