use std::fmt::Write as _;

use anyhow::{bail, Result};

use qjunction::model::JunctionModel;
use qjunction::rabi::{
    grwa_spectrum, grwa_zero_bias_gap, rwa_spectrum, vvpt_spectrum, ApproxSpectrum, RabiParams,
};

use crate::config::{Config, ModelConfig};
use crate::sweep::build_model;

/// Eigenfrequencies, coupling elements Q_{0k} and, for the Rabi model, the
/// closed-form spectra against numerics. Evaluated at the sweep start.
pub fn report(cfg: &Config) -> Result<String> {
    let m = cfg.model_at(cfg.sweep.start);
    if let ModelConfig::Dot { delta, .. } = m {
        return Ok(format!(
            "# dot levels (0, up, down)\nlevel,omega\n0,0\n1,{delta:.16e}\n2,{delta:.16e}\n"
        ));
    }
    let model = build_model(&m)?;
    let mut out = String::new();
    write_levels(&mut out, &model)?;
    if let ModelConfig::Rabi {
        epsilon,
        delta,
        omega_r,
        g,
        levels,
        ..
    } = m
    {
        let p = RabiParams::new(epsilon, delta, omega_r, g);
        write_approximations(&mut out, &model, &p, levels)?;
        if epsilon == 0.0 {
            writeln!(
                out,
                "\n# GRWA zero-bias gap {:.16e} vs numeric {:.16e}",
                grwa_zero_bias_gap(delta, g, omega_r),
                model.bohr(1, 0)
            )?;
        }
    }
    Ok(out)
}

fn write_levels(out: &mut String, model: &JunctionModel<f64>) -> Result<()> {
    let (Some(ql), Some(qr)) = (model.coupling("L"), model.coupling("R")) else {
        bail!("model needs couplings L and R");
    };
    writeln!(out, "k,omega_k,omega_k0,Q_L_0k,Q_R_0k")?;
    for k in 0..model.dim() {
        writeln!(
            out,
            "{k},{:.16e},{:.16e},{:.16e},{:.16e}",
            model.omega()[k],
            model.bohr(k, 0),
            ql[(0, k)],
            qr[(0, k)]
        )?;
    }
    Ok(())
}

fn write_approximations(
    out: &mut String,
    model: &JunctionModel<f64>,
    p: &RabiParams<f64>,
    levels: usize,
) -> Result<()> {
    let n_max = levels.div_ceil(2).max(1) + 1;
    let approx: [(&str, Result<ApproxSpectrum<f64>, _>); 3] = [
        ("RWA", rwa_spectrum(p, n_max)),
        ("VVPT", vvpt_spectrum(p, n_max)),
        ("GRWA", grwa_spectrum(p, n_max)),
    ];
    writeln!(out, "\n# closed forms, levels sorted ascending")?;
    writeln!(out, "method,k,omega_k,error")?;
    for (name, spec) in approx {
        match spec {
            Ok(s) => {
                let (w, _) = s.sorted();
                for (k, wk) in w.iter().enumerate().take(levels) {
                    let err = wk - model.omega()[k];
                    writeln!(out, "{name},{k},{wk:.16e},{err:.3e}")?;
                }
            }
            Err(e) => writeln!(out, "{name},unavailable: {e}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabi_report_lists_levels_and_closed_forms() {
        let cfg = Config::from_toml(
            r#"
[model]
kind = "rabi"
epsilon = 0.0
delta = 0.6
g = 0.1
[baths]
temperature = 0.2
[sweep]
variable = "g"
start = 0.1
stop = 0.4
points = 2
[output]
csv = "x.csv"
"#,
        )
        .unwrap();
        let text = report(&cfg).unwrap();
        assert!(text.starts_with("k,omega_k,omega_k0,Q_L_0k,Q_R_0k\n0,"));
        assert_eq!(text.lines().filter(|l| l.starts_with("GRWA,")).count(), 5);
        assert!(text.contains("zero-bias gap"));
    }
}
