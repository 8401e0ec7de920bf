//! Junction data model: system spectrum, coupling operators and reservoirs.

use crate::error::{invalid, Result};
use crate::linalg::RMatrix;
use crate::real::{c, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

/// Ohmic spectral density with a Drude cutoff, J(ω) = αω / (1 + ω²/ω_c²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDensity<T: Real> {
    pub alpha: T,
    pub omega_c: T,
}

impl<T: Real> SpectralDensity<T> {
    pub fn ohmic_drude(alpha: T, omega_c: T) -> Result<Self> {
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return invalid("spectral density: alpha must be non-negative");
        }
        if !(omega_c > T::zero()) || !omega_c.is_finite() {
            return invalid("spectral density: omega_c must be positive");
        }
        Ok(Self { alpha, omega_c })
    }

    /// J(ω), odd in ω.
    #[inline]
    pub fn eval(&self, w: T) -> T {
        w * self.over_omega(w)
    }

    /// J(ω)/ω, finite at ω = 0.
    #[inline]
    pub fn over_omega(&self, w: T) -> T {
        let r = w / self.omega_c;
        self.alpha / (T::one() + r * r)
    }
}

/// Wide-band lead described by its density of states and tunneling strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeadParams<T: Real> {
    pub density_of_states: T,
    pub tunneling_sq: T,
    pub bandwidth: T,
}

impl<T: Real> LeadParams<T> {
    /// Tunneling rate γ = 2π D |t|².
    pub fn gamma(&self) -> T {
        c::<T>(2.0) * T::PI() * self.density_of_states * self.tunneling_sq
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling<T: Real> {
    Boson(SpectralDensity<T>),
    Fermion(LeadParams<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reservoir<T: Real> {
    pub id: String,
    pub beta: T,
    pub mu: T,
    pub coupling: Coupling<T>,
}

impl<T: Real> Reservoir<T> {
    pub fn bosonic(id: impl Into<String>, beta: T, spectral: SpectralDensity<T>) -> Result<Self> {
        let r = Self {
            id: id.into(),
            beta,
            mu: T::zero(),
            coupling: Coupling::Boson(spectral),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn fermionic(id: impl Into<String>, beta: T, mu: T, lead: LeadParams<T>) -> Result<Self> {
        let r = Self {
            id: id.into(),
            beta,
            mu,
            coupling: Coupling::Fermion(lead),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > T::zero()) || !self.beta.is_finite() {
            return invalid(format!(
                "reservoir {}: beta must be positive and finite",
                self.id
            ));
        }
        if self.statistics() == Statistics::Bose && self.mu != T::zero() {
            return invalid(format!(
                "reservoir {}: bosonic reservoirs require mu = 0",
                self.id
            ));
        }
        if !self.mu.is_finite() {
            return invalid(format!("reservoir {}: mu must be finite", self.id));
        }
        Ok(())
    }

    pub fn statistics(&self) -> Statistics {
        match self.coupling {
            Coupling::Boson(_) => Statistics::Bose,
            Coupling::Fermion(_) => Statistics::Fermi,
        }
    }

    pub fn temperature(&self) -> T {
        T::one() / self.beta
    }

    pub fn with_temperature(&self, t: T) -> Self {
        Self {
            beta: T::one() / t,
            ..self.clone()
        }
    }

    pub fn spectral(&self) -> Option<&SpectralDensity<T>> {
        match &self.coupling {
            Coupling::Boson(j) => Some(j),
            Coupling::Fermion(_) => None,
        }
    }
}

/// System eigenfrequencies (ascending) and one real symmetric coupling matrix
/// per reservoir, all expressed in the system energy eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct JunctionModel<T: Real> {
    omega: Vec<T>,
    couplings: Vec<(String, RMatrix<T>)>,
}

impl<T: Real> JunctionModel<T> {
    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    /// Bohr frequency ω_nm = ω_n − ω_m.
    #[inline]
    pub fn bohr(&self, n: usize, m: usize) -> T {
        self.omega[n] - self.omega[m]
    }

    pub fn couplings(&self) -> &[(String, RMatrix<T>)] {
        &self.couplings
    }

    pub fn coupling(&self, id: &str) -> Option<&RMatrix<T>> {
        self.couplings.iter().find(|(k, _)| k == id).map(|(_, q)| q)
    }

    pub fn reservoir_ids(&self) -> impl Iterator<Item = &str> {
        self.couplings.iter().map(|(k, _)| k.as_str())
    }

    /// Keeps the lowest `k` levels.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return invalid(format!(
                "cannot truncate a {}-level model to {k} levels",
                self.dim()
            ));
        }
        Ok(Self {
            omega: self.omega[..k].to_vec(),
            couplings: self
                .couplings
                .iter()
                .map(|(id, q)| (id.clone(), q.leading_block(k)))
                .collect(),
        })
    }

    /// Largest |ω_nm| over all level pairs.
    pub fn bandwidth(&self) -> T {
        match (self.omega.first(), self.omega.last()) {
            (Some(&a), Some(&b)) => b - a,
            _ => T::zero(),
        }
    }
}

/// Validates and normalizes a junction: levels are sorted ascending (coupling
/// matrices permuted along) and each coupling matrix is symmetrized.
pub fn build_junction<T: Real>(
    omega: Vec<T>,
    couplings: Vec<(String, RMatrix<T>)>,
) -> Result<JunctionModel<T>> {
    let n = omega.len();
    if n == 0 {
        return invalid("junction needs at least one level");
    }
    if omega.iter().any(|w| !w.is_finite()) {
        return invalid("eigenfrequencies must be finite");
    }
    for (i, (id, q)) in couplings.iter().enumerate() {
        if id.is_empty() {
            return invalid("reservoir id must not be empty");
        }
        if couplings[..i].iter().any(|(other, _)| other == id) {
            return invalid(format!("duplicate reservoir id {id:?}"));
        }
        if q.rows() != n || q.cols() != n {
            return invalid(format!(
                "coupling {id:?} is {}x{}, expected {n}x{n}",
                q.rows(),
                q.cols()
            ));
        }
        if q.as_slice().iter().any(|x| !x.is_finite()) {
            return invalid(format!("coupling {id:?} has non-finite entries"));
        }
        let scale = q.max_abs();
        if q.hermiticity_defect() > scale * c(1e-12) {
            return invalid(format!(
                "coupling {id:?} is not symmetric within 1e-12 relative"
            ));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| omega[a].partial_cmp(&omega[b]).expect("finite"));
    let half: T = c(0.5);
    let couplings = couplings
        .into_iter()
        .map(|(id, q)| {
            let p = q.permuted(&perm);
            let sym = RMatrix::from_fn(n, n, |i, j| (p[(i, j)] + p[(j, i)]) * half);
            (id, sym)
        })
        .collect();
    Ok(JunctionModel {
        omega: perm.iter().map(|&i| omega[i]).collect(),
        couplings,
    })
}

/// Qubit H = −(εσ_z + Δσ_x)/2 coupled to reservoirs "L" and "R" through
/// σ_z, in its eigenbasis: levels ∓ω_10/2, Q = [[ε, −Δ], [−Δ, −ε]]/ω_10.
pub fn qubit_junction<T: Real>(epsilon: T, delta: T) -> Result<JunctionModel<T>> {
    let w = epsilon.hypot(delta);
    if !(w > T::zero()) || !w.is_finite() {
        return invalid("qubit needs a finite nonzero splitting");
    }
    let (z, x) = (epsilon / w, delta / w);
    let q = RMatrix::from_fn(2, 2, |a, b| match (a, b) {
        (0, 0) => z,
        (1, 1) => -z,
        _ => -x,
    });
    let half: T = c(0.5);
    build_junction(
        vec![-half * w, half * w],
        vec![("L".into(), q.clone()), ("R".into(), q)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigensystem, to_eigenbasis};

    fn sx() -> RMatrix<f64> {
        RMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn tls_model_builds() {
        let m =
            build_junction(vec![0.0, 1.0], vec![("L".into(), sx()), ("R".into(), sx())]).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.bohr(1, 0), 1.0);
        assert_eq!(m.reservoir_ids().collect::<Vec<_>>(), vec!["L", "R"]);
    }

    #[test]
    fn sorts_levels_and_permutes_couplings() {
        let q = RMatrix::from_rows(&[
            vec![1.0, 0.1, 0.2],
            vec![0.1, 2.0, 0.3],
            vec![0.2, 0.3, 3.0],
        ])
        .unwrap();
        let m = build_junction(vec![5.0, -1.0, 2.0], vec![("L".into(), q)]).unwrap();
        assert_eq!(m.omega(), &[-1.0, 2.0, 5.0]);
        let p = m.coupling("L").unwrap();
        assert_eq!(p[(0, 0)], 2.0);
        assert_eq!(p[(1, 1)], 3.0);
        assert_eq!(p[(2, 2)], 1.0);
        assert_eq!(p[(0, 1)], 0.3);
        assert_eq!(p[(0, 2)], 0.1);
        assert_eq!(p[(1, 2)], 0.2);
    }

    #[test]
    fn rejects_antisymmetric_part() {
        let q = RMatrix::from_rows(&[vec![0.0, 1.0 + 1e-3], vec![1.0, 0.0]]).unwrap();
        assert!(build_junction(vec![0.0, 1.0], vec![("L".into(), q)]).is_err());
    }

    #[test]
    fn rejects_duplicate_ids_and_bad_shapes() {
        assert!(
            build_junction(vec![0.0, 1.0], vec![("L".into(), sx()), ("L".into(), sx())]).is_err()
        );
        assert!(build_junction(vec![0.0, 1.0, 2.0], vec![("L".into(), sx())]).is_err());
    }

    #[test]
    fn reservoir_invariants() {
        let j = SpectralDensity::ohmic_drude(1e-3, 5.0).unwrap();
        assert!(Reservoir::bosonic("L", 0.0, j).is_err());
        let mut r = Reservoir::bosonic("L", 2.0, j).unwrap();
        r.mu = 0.1;
        assert!(r.validate().is_err());
        assert!(SpectralDensity::ohmic_drude(-1.0, 1.0).is_err());
        assert!(SpectralDensity::ohmic_drude(1.0, 0.0).is_err());
    }

    #[test]
    fn qubit_matches_numeric_eigenbasis() {
        let (eps, delta) = (0.3f64, 0.8f64);
        let m = qubit_junction(eps, delta).unwrap();
        let h = RMatrix::from_rows(&[
            vec![-eps / 2.0, -delta / 2.0],
            vec![-delta / 2.0, eps / 2.0],
        ])
        .unwrap();
        let sz = RMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let e = hermitian_eigensystem(&h).unwrap();
        let q = to_eigenbasis(&sz, &e.vectors).unwrap();
        for k in 0..2 {
            assert!((m.omega()[k] - e.values[k]).abs() < 1e-14);
            assert!((m.coupling("R").unwrap()[(k, k)] - q[(k, k)]).abs() < 1e-14);
        }
        assert!((m.coupling("L").unwrap()[(0, 1)].abs() - q[(0, 1)].abs()).abs() < 1e-14);
        assert!((m.bohr(1, 0) - eps.hypot(delta)).abs() < 1e-15);
        assert!(qubit_junction(0.0f64, 0.0).is_err());
    }
}
