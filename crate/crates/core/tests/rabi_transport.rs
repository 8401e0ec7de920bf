use qjunction::currents::{heat_currents_2nd, kappa2, kappa4_low_t, Kappa2Method, SecularMode};
use qjunction::model::{JunctionModel, Reservoir, SpectralDensity};
use qjunction::rabi::{
    build_rabi_junction, grwa_spectrum, rwa_spectrum, vvpt_spectrum, ApproxSpectrum, RabiParams,
};
use qjunction::redfield::build_k2_boson;
use qjunction::steady::{cluster_bohr_frequencies, gamma_scale, three_level_coherence_analytic};

const ALPHA: f64 = 1e-3;
const PARTIAL: SecularMode<f64> = SecularMode::Partial {
    factor: 10.0,
    lamb_shift: true,
};

fn baths(tl: f64, tr: f64) -> Vec<Reservoir<f64>> {
    let j = SpectralDensity::ohmic_drude(ALPHA, 5.0).unwrap();
    vec![
        Reservoir::bosonic("L", 1.0 / tl, j).unwrap(),
        Reservoir::bosonic("R", 1.0 / tr, j).unwrap(),
    ]
}

fn rabi(eps: f64, delta: f64, g: f64) -> JunctionModel<f64> {
    build_rabi_junction(&RabiParams::new(eps, delta, 1.0, g)).unwrap()
}

fn grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + step * i as f64).collect()
}

fn argmax(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    xs.iter()
        .zip(ys)
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, (&x, &y)| {
            if y > acc.1 {
                (x, y)
            } else {
                acc
            }
        })
}

#[test]
fn weak_coupling_resonance_peak_is_suppressed_by_coherences() {
    let t = 0.2;
    let eps = grid(0.6, 0.02, 21);
    let mut full = Vec::new();
    let mut partial = Vec::new();
    for &e in &eps {
        let m = rabi(e, 0.6, 0.01);
        let b = baths(t, t);
        // full secular may hit the exact doublet crossing
        full.push(kappa2(&m, &b, t, SecularMode::Full, Kappa2Method::Analytic).unwrap_or(f64::NAN));
        partial.push(kappa2(&m, &b, t, PARTIAL, Kappa2Method::FiniteDifference).unwrap());
    }
    let (e_peak, k_partial) = argmax(&eps, &partial);
    let (_, k_full) = argmax(&eps, &full);
    assert!((e_peak - 0.8).abs() <= 0.05, "peak at ε = {e_peak}");
    assert!(k_partial < k_full, "{k_partial:e} vs {k_full:e}");
}

#[test]
fn resonant_doublet_is_clustered() {
    let m = rabi(0.8, 0.6, 0.01);
    let k2 = build_k2_boson(&m, &baths(0.2, 0.2)).unwrap();
    let clusters = cluster_bohr_frequencies(&m, gamma_scale(&k2), 10.0).unwrap();
    assert!(clusters.is_retained(1, 2));
    assert!(!clusters.is_retained(0, 1));
}

#[test]
fn equilibrium_coherence_peaks_at_resonance_and_grows_with_temperature() {
    let eps = grid(0.6, 0.02, 21);
    let mut previous: Option<Vec<f64>> = None;
    for t in [0.1, 0.2, 0.4] {
        let b = baths(t, t);
        let rho12: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let m = rabi(e, 0.6, 0.01).truncated(3).unwrap();
                let k = build_k2_boson(&m, &b).unwrap();
                three_level_coherence_analytic(&k, m.bohr(1, 2))
                    .unwrap()
                    .rho12
                    .norm()
            })
            .collect();
        let (e_peak, _) = argmax(&eps, &rho12);
        assert!((e_peak - 0.8).abs() <= 0.03, "T = {t}: peak at {e_peak}");
        if let Some(prev) = &previous {
            assert!(rho12.iter().zip(prev).all(|(a, b)| a > b), "T = {t}");
        }
        previous = Some(rho12);
    }
}

#[test]
fn fourth_order_conductance_is_coherently_suppressed() {
    let m = rabi(0.8, 0.6, 0.01);
    let t = 0.01;
    let full = kappa4_low_t(&m, ALPHA, t).unwrap();
    let tls = kappa4_low_t(&m.truncated(2).unwrap(), ALPHA, t).unwrap();
    assert!(tls >= 2.0 * full, "TLS {tls:e}, full {full:e}");
}

#[test]
fn approximation_errors_shrink_with_coupling() {
    let levels = 5;
    for (eps, delta) in [(0.8, 0.6), (0.0, 0.6)] {
        let mut last = [f64::INFINITY; 3];
        for g in [0.05, 0.02, 0.01, 0.005] {
            let p = RabiParams::new(eps, delta, 1.0, g);
            let exact = build_rabi_junction(&p).unwrap();
            let err = |s: ApproxSpectrum<f64>| {
                let (w, _) = s.sorted();
                (0..levels)
                    .map(|k| (w[k] - exact.omega()[k]).abs())
                    .fold(0.0, f64::max)
            };
            let now = [
                err(rwa_spectrum(&p, 4).unwrap()),
                err(vvpt_spectrum(&p, 4).unwrap()),
                err(grwa_spectrum(&p, 4).unwrap()),
            ];
            for k in 0..3 {
                assert!(now[k] < last[k], "ε = {eps}, g = {g}, method {k}");
            }
            last = now;
        }
    }
}

#[test]
fn rabi_currents_are_conserved() {
    for (eps, delta, g) in [(0.8, 0.6, 0.01), (0.0, 1.2, 0.4), (0.3, 0.9, 0.1)] {
        let m = rabi(eps, delta, g);
        for mode in [SecularMode::Full, PARTIAL] {
            let Ok(i) = heat_currents_2nd(&m, &baths(0.25, 0.2), mode) else {
                continue;
            };
            assert!(i.is_conserved(1e-12), "{:?}", i);
            assert!(i.heat[1] > 0.0, "heat flows into the colder reservoir");
        }
    }
}
