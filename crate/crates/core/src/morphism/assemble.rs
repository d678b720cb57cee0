//! Turning images of the sublattice generators into full morphism matrices.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::pasture::{FundamentalPair, Pasture, PastureElement};
use crate::zlattice::{
    cokernel_presentation, hom_finite_rows, smith_normal_form, solve_modular_with, IntMatrix, SnfResult,
};

/// Data shared by every leaf of one search between two fixed pastures.
pub(crate) struct Assembler<'a> {
    target: &'a Pasture,
    n1: usize,
    n2: usize,
    r2: usize,
    /// Torsion rows of the generator matrix, `n1 x r`.
    gen_torsion: Vec<Vec<i64>>,
    /// `scale * inverse` of the free block of the generator matrix.
    inverse: Vec<Vec<i128>>,
    scale: i128,
    snf: SnfResult,
    /// Torsion blocks that vanish on the sublattice, each `n2 x r`.
    lifts: Vec<Vec<Vec<i64>>>,
    heads: Vec<FundamentalPair>,
}

impl<'a> Assembler<'a> {
    pub(crate) fn new(source: &Pasture, target: &'a Pasture, generators: &[PastureElement]) -> Self {
        let n1 = source.group().torsion_rank();
        let r = generators.len();
        let n2 = target.group().torsion_rank();
        let r2 = target.group().free_rank();
        let gen_torsion: Vec<Vec<i64>> = (0..n1).map(|i| generators.iter().map(|x| x[i]).collect()).collect();
        let free_cols: Vec<Vec<i64>> = generators.iter().map(|x| x[n1..].to_vec()).collect();
        let a_free = IntMatrix::from_columns(r, &free_cols);
        let snf = smith_normal_form(&a_free);
        let diag = snf.diagonal();
        assert!(diag.iter().all(|d| !d.is_zero()), "sublattice is not of full rank");

        // A^-1 = V D^-1 U, scaled by the largest invariant factor
        let scale = diag.last().cloned().unwrap_or_else(|| BigInt::from(1));
        let mut inverse = vec![vec![0i128; r]; r];
        for (i, row) in inverse.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = BigInt::zero();
                for k in 0..r {
                    acc += snf.v.get(i, k) * (&scale / &diag[k]) * snf.u.get(k, j);
                }
                *entry = acc.to_i128().expect("inverse entry exceeds i128");
            }
        }

        let (quotient, projection) = cokernel_presentation(&a_free);
        let t2 = target.group().torsion();
        let proj_rows = projection.reduced_rows(&quotient);
        let lifts = hom_finite_rows(&quotient, &t2)
            .into_iter()
            .map(|h| {
                // h . p, reduced mod the target invariants
                (0..n2)
                    .map(|i| {
                        (0..r)
                            .map(|j| {
                                let s: i64 = (0..quotient.dim()).map(|k| h[i][k] * proj_rows[k][j]).sum();
                                s.rem_euclid(t2.invariants()[i])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        Assembler {
            target,
            n1,
            n2,
            r2,
            gen_torsion,
            inverse,
            scale: scale.to_i128().expect("invariant factor exceeds i128"),
            snf,
            lifts,
            heads: source.hexagons().iter().map(|h| h.head().clone()).collect(),
        }
    }

    /// All morphisms with torsion block `psi` that send the generators to
    /// `images`. The second value is whether the free block was integral
    /// and the torsion block solvable.
    pub(crate) fn assemble(&self, psi: &[Vec<i64>], images: &[PastureElement]) -> (Vec<Vec<Vec<i64>>>, bool) {
        let r = images.len();
        let inv = self.target.group().invariants();

        let mut free_block = vec![vec![0i64; r]; self.r2];
        for (i, row) in free_block.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let s: i128 = (0..r).map(|k| images[k][self.n2 + i] as i128 * self.inverse[k][j]).sum();
                if s % self.scale != 0 {
                    return (Vec::new(), false);
                }
                *entry = i64::try_from(s / self.scale).expect("free entry exceeds i64");
            }
        }

        let mut particular: Vec<Vec<i64>> = Vec::with_capacity(self.n2);
        for i in 0..self.n2 {
            let rhs: Vec<BigInt> = (0..r)
                .map(|j| {
                    let shift: i64 = (0..self.n1).map(|k| psi[i][k] * self.gen_torsion[k][j]).sum();
                    BigInt::from((images[j][i] - shift).rem_euclid(inv[i]))
                })
                .collect();
            match solve_modular_with(&self.snf, &rhs, inv[i]) {
                Some(x) => particular.push(x.iter().map(|v| v.to_i64().unwrap()).collect()),
                None => return (Vec::new(), false),
            }
        }

        let mut out = Vec::new();
        for lift in &self.lifts {
            let mut m: Vec<Vec<i64>> = Vec::with_capacity(self.n2 + self.r2);
            for i in 0..self.n2 {
                let mut row = psi[i].clone();
                row.extend((0..r).map(|j| (particular[i][j] + lift[i][j]).rem_euclid(inv[i])));
                m.push(row);
            }
            for row in &free_block {
                let mut full = vec![0i64; self.n1];
                full.extend_from_slice(row);
                m.push(full);
            }
            if self.respects_pairs(&m) {
                out.push(m);
            }
        }
        (out, true)
    }

    fn respects_pairs(&self, m: &[Vec<i64>]) -> bool {
        let g = self.target.group();
        self.heads.iter().all(|(x, y)| {
            let fx = apply_rows(g, m, x);
            let fy = apply_rows(g, m, y);
            self.target.is_fundamental_pair(&fx, &fy)
        })
    }
}

/// Applies a row-major matrix and reduces in `g`.
pub(crate) fn apply_rows(g: &crate::zlattice::GroupPresentation, m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let mut y: Vec<i64> = m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
    g.reduce(&mut y);
    y
}
