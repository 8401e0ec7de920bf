//! Contraction diagrams of the kernel expansion.
//!
//! A diagram of order 2n is a perfect matching of the vertices 1..2n,
//! numbered right to left: vertex 1 acts first on the density matrix. Each
//! arc joins a starting (right) vertex `i` to a free (left) vertex `f > i`.
//! Irreducible diagrams are those where every gap between consecutive
//! vertices is spanned by at least one arc.

mod eval;
mod oracle;

pub use eval::{
    discrete_w, discrete_wbar, evaluate_current_kernel_from_diagrams,
    evaluate_kernel_from_diagrams, BosonMode, DiscreteSystem, FermionMode, Mode, Transfer,
};
pub use oracle::{exact_current_kernel_order, exact_kernel_order, OracleOptions, DIMENSION_CAP};

use crate::error::{Error, Result};
use crate::model::Statistics;
use crate::sign::Sign;

pub const MAX_ARCS: usize = 6;

/// Perfect matching of 2n vertices. Arcs are stored as `(f, i)` with `f > i`,
/// sorted by starting vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    arcs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(mut arcs: Vec<(usize, usize)>) -> Result<Self> {
        let n2 = 2 * arcs.len();
        let mut seen = vec![false; n2 + 1];
        for &(f, i) in &arcs {
            if !(1 <= i && i < f && f <= n2) {
                return Err(Error::Validation(format!(
                    "arc ({f}, {i}) invalid for {n2} vertices"
                )));
            }
            for v in [f, i] {
                if seen[v] {
                    return Err(Error::Validation(format!("vertex {v} used twice")));
                }
                seen[v] = true;
            }
        }
        arcs.sort_by_key(|&(_, i)| i);
        Ok(Self { arcs })
    }

    /// Number of arcs n.
    pub fn n(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> usize {
        2 * self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// For each vertex 1..2n (index v−1): the arc it belongs to and whether it
    /// is the starting vertex.
    pub fn roles(&self) -> Vec<(usize, bool)> {
        let mut r = vec![(0, false); self.vertices()];
        for (a, &(f, i)) in self.arcs.iter().enumerate() {
            r[i - 1] = (a, true);
            r[f - 1] = (a, false);
        }
        r
    }

    /// Arcs spanning the gap between vertex k and k+1, for k = 1..2n−1.
    pub fn segments(&self) -> Vec<Vec<usize>> {
        (1..self.vertices())
            .map(|k| {
                (0..self.n())
                    .filter(|&a| self.arcs[a].1 <= k && k < self.arcs[a].0)
                    .collect()
            })
            .collect()
    }

    /// Index of the arc ending on the last vertex 2n.
    pub fn last_arc(&self) -> usize {
        let top = self.vertices();
        self.arcs
            .iter()
            .position(|&(f, _)| f == top)
            .expect("the last vertex is always a free vertex")
    }
}

/// All (2n−1)!! matchings of 2n vertices, lexicographic in the partner
/// sequence of vertices 1, 2, ….
pub fn enumerate_matchings(n: usize) -> Result<Vec<Matching>> {
    if n == 0 || n > MAX_ARCS {
        return Err(Error::Unsupported(format!(
            "matchings need 1 ≤ n ≤ {MAX_ARCS}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut free = vec![true; 2 * n + 1];
    let mut arcs = Vec::with_capacity(n);
    fn rec(free: &mut [bool], arcs: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        let Some(i) = (1..free.len()).find(|&v| free[v]) else {
            out.push(Matching { arcs: arcs.clone() });
            return;
        };
        free[i] = false;
        for f in i + 1..free.len() {
            if free[f] {
                free[f] = false;
                arcs.push((f, i));
                rec(free, arcs, out);
                arcs.pop();
                free[f] = true;
            }
        }
        free[i] = true;
    }
    rec(&mut free, &mut arcs, &mut out);
    Ok(out)
}

/// True when no cut between consecutive vertices separates the arcs.
pub fn is_irreducible(m: &Matching) -> bool {
    (1..m.vertices()).all(|k| m.arcs.iter().any(|&(f, i)| i <= k && k < f))
}

/// (total, irreducible) diagram counts at order 2n.
pub fn count_diagrams(n: usize) -> Result<(usize, usize)> {
    let all = enumerate_matchings(n)?;
    let irr = all.iter().filter(|m| is_irreducible(m)).count();
    Ok((all.len(), irr))
}

/// Fermionic reordering sign: the product of −ν_xν_y over every vertex pair
/// whose relative order changes when the vertex string 2n … 1 is rearranged
/// into adjacent (f, i) blocks. `nu[v−1]` is the Liouville index of vertex v.
pub fn fermion_sign(m: &Matching, nu: &[Sign]) -> Sign {
    assert_eq!(nu.len(), m.vertices(), "one Liouville index per vertex");
    let mut blocks: Vec<(usize, usize)> = m.arcs.clone();
    blocks.sort_by(|a, b| b.0.cmp(&a.0));
    let mut pos = vec![0usize; m.vertices() + 1];
    for (k, &(f, i)) in blocks.iter().enumerate() {
        pos[f] = 2 * k;
        pos[i] = 2 * k + 1;
    }
    let mut sign = Sign::Plus;
    // originally vertex x stands left of y whenever x > y
    for x in 1..=m.vertices() {
        for y in 1..x {
            if pos[x] > pos[y] {
                sign = sign * -(nu[x - 1] * nu[y - 1]);
            }
        }
    }
    sign
}

/// One term of the kernel expansion: a matching with Fock index, reservoir
/// and Liouville index assignments.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramTerm {
    pub matching: Matching,
    /// Fock index per arc.
    pub p: Vec<Sign>,
    /// Reservoir per arc.
    pub bath: Vec<usize>,
    /// Liouville index per vertex, `nu[v−1]` for vertex v.
    pub nu: Vec<Sign>,
    /// (−1)^n Π ν_v, times the fermionic reordering sign.
    pub sign: Sign,
    /// Arcs active on the propagator between vertex k and k+1.
    pub segments: Vec<Vec<usize>>,
}

fn sign_from_bits(bits: usize, k: usize) -> Sign {
    if bits >> k & 1 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Expands the irreducible diagrams of order 2n ∈ {2, 4} over Liouville
/// indices, Fock indices and reservoirs.
pub fn generate_kernel_terms(
    order: usize,
    n_baths: usize,
    stats: Statistics,
) -> Result<Vec<DiagramTerm>> {
    if order != 2 && order != 4 {
        return Err(Error::Unsupported(format!(
            "kernel terms are generated for orders 2 and 4, not {order}"
        )));
    }
    if n_baths == 0 {
        return Err(Error::Validation(
            "at least one reservoir is required".into(),
        ));
    }
    let n = order / 2;
    let mut out = Vec::new();
    for m in enumerate_matchings(n)?.into_iter().filter(is_irreducible) {
        let segments = m.segments();
        for nu_bits in 0..1usize << order {
            let nu: Vec<Sign> = (0..order).map(|k| sign_from_bits(nu_bits, k)).collect();
            let mut sign = nu.iter().fold(
                if n % 2 == 0 { Sign::Plus } else { Sign::Minus },
                |s, &v| s * v,
            );
            if stats == Statistics::Fermi {
                sign = sign * fermion_sign(&m, &nu);
            }
            for p_bits in 0..1usize << n {
                let p: Vec<Sign> = (0..n).map(|a| sign_from_bits(p_bits, a)).collect();
                let mut bath = vec![0usize; n];
                loop {
                    out.push(DiagramTerm {
                        matching: m.clone(),
                        p: p.clone(),
                        bath: bath.clone(),
                        nu: nu.clone(),
                        sign,
                        segments: segments.clone(),
                    });
                    let mut k = 0;
                    while k < n {
                        bath[k] += 1;
                        if bath[k] < n_baths {
                            break;
                        }
                        bath[k] = 0;
                        k += 1;
                    }
                    if k == n {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}
