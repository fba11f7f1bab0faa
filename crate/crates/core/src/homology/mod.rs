//! Integer homology: chain complexes, Smith normal form, generators and
//! their projection onto an unsimplified map.

mod chain;
mod matrix;
mod project;
mod snf;
mod sparse;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use chain::{Chain, ChainComplex};
pub use matrix::IntMatrix;
pub use project::{apply_f, project_generators, project_chain};
pub use snf::{invariant_factors_dense, smith_normal_form, SmithForm};
pub use sparse::{invariant_factors, rank, SparseMatrix};

/// Betti numbers and torsion coefficients per dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one.
    pub torsion: Vec<Vec<BigInt>>,
}

/// A torsion class and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGenerator {
    pub order: BigInt,
    pub chain: Chain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
    /// Free generators per dimension, as cycles over the cell basis.
    pub generators: Vec<Vec<Chain>>,
    pub torsion_generators: Vec<Vec<TorsionGenerator>>,
}

impl HomologyResult {
    pub fn summary(&self) -> HomologySummary {
        HomologySummary {
            betti: self.betti.clone(),
            torsion: self.torsion.clone(),
        }
    }
}

/// Betti numbers and torsion from invariant factors only.
pub fn betti_and_torsion(cc: &ChainComplex) -> HomologySummary {
    let n = cc.dimension();
    let factors: Vec<Vec<BigInt>> = (0..=n + 1)
        .into_par_iter()
        .map(|p| if p == 0 { Vec::new() } else { invariant_factors(&cc.matrix(p)) })
        .collect();
    let mut betti = Vec::with_capacity(n + 1);
    let mut torsion = Vec::with_capacity(n + 1);
    for p in 0..=n {
        betti.push(cc.size(p) - factors[p].len() - factors[p + 1].len());
        torsion.push(factors[p + 1].iter().filter(|f| !f.is_one()).cloned().collect());
    }
    HomologySummary { betti, torsion }
}

fn column_chain(m: &IntMatrix, c: usize) -> Chain {
    (0..m.rows())
        .filter(|&r| !m[(r, c)].is_zero())
        .map(|r| (r, m[(r, c)].clone()))
        .collect()
}

struct Level {
    betti: usize,
    torsion: Vec<BigInt>,
    generators: Vec<Chain>,
    torsion_generators: Vec<TorsionGenerator>,
}

fn level(cc: &ChainComplex, p: usize) -> Level {
    let size = cc.size(p);
    let below = smith_normal_form(&cc.matrix(p).to_dense());
    let r = below.rank();
    // kernel basis of M_p: trailing columns of V
    let z = below.v.select_cols(r..size);
    // boundaries in kernel coordinates
    let k = below.v_inv.mul(&cc.matrix(p + 1).to_dense()).select_rows(r..size);
    let above = smith_normal_form(&k);
    let z2 = z.mul(&above.u_inv);
    let mut torsion = Vec::new();
    let mut torsion_generators = Vec::new();
    for (j, f) in above.diagonal.iter().enumerate() {
        if !f.is_one() {
            torsion.push(f.clone());
            torsion_generators.push(TorsionGenerator {
                order: f.clone(),
                chain: column_chain(&z2, j),
            });
        }
    }
    let generators = (above.rank()..z2.cols()).map(|j| column_chain(&z2, j)).collect();
    Level {
        betti: z2.cols() - above.rank(),
        torsion,
        generators,
        torsion_generators,
    }
}

/// Homology with generators, by dense Smith reduction of every `M_p`.
pub fn homology(cc: &ChainComplex) -> HomologyResult {
    let levels: Vec<Level> = (0..=cc.dimension()).into_par_iter().map(|p| level(cc, p)).collect();
    let mut out = HomologyResult {
        betti: Vec::new(),
        torsion: Vec::new(),
        generators: Vec::new(),
        torsion_generators: Vec::new(),
    };
    for l in levels {
        out.betti.push(l.betti);
        out.torsion.push(l.torsion);
        out.generators.push(l.generators);
        out.torsion_generators.push(l.torsion_generators);
    }
    out
}

/// Whether `m` is square with determinant `±1`.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let d = m.determinant();
    d == BigInt::one() || d == -BigInt::one()
}
