//! Depth-first search over images of the sublattice generators.

use std::ops::ControlFlow;

use super::assemble::Assembler;
use super::sublattice::{Dependence, Rule, Span, SublatticeData, TypeFourCheck};
use crate::pasture::{Pasture, PastureElement};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Counters {
    pub nodes: usize,
    pub leaves: usize,
    pub assembled: usize,
}

pub(crate) struct Dfs<'a> {
    pub source: &'a Pasture,
    pub target: &'a Pasture,
    pub data: &'a SublatticeData,
    pub assembler: &'a Assembler<'a>,
    pub psi: &'a [Vec<i64>],
    pub find_one: bool,
    pub find_iso: bool,
    pub counters: Counters,
    pub found: Vec<Vec<Vec<i64>>>,
    /// Oriented fundamental pairs of the target.
    pub target_pairs: &'a [(PastureElement, PastureElement)],
}

impl Dfs<'_> {
    /// `psi(tau)` embedded in the target group.
    fn psi_of(&self, tau: &[i64]) -> PastureElement {
        let g = self.target.group();
        let n1 = self.source.group().torsion_rank();
        let mut y: Vec<i64> = self.psi.iter().map(|row| row.iter().zip(&tau[..n1]).map(|(a, b)| a * b).sum()).collect();
        y.resize(g.dim(), 0);
        g.reduce(&mut y);
        y
    }

    /// `base + sum coeffs_i * images_i` in the target.
    fn combine(&self, base: PastureElement, coeffs: &[i64], images: &[PastureElement]) -> PastureElement {
        let g = self.target.group();
        let mut acc = base;
        for (&c, y) in coeffs.iter().zip(images) {
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(y) {
                    *a += c * b;
                }
                g.reduce(&mut acc);
            }
        }
        acc
    }

    fn candidates(&self, level: usize, images: &[PastureElement]) -> Vec<PastureElement> {
        let g = self.target.group();
        let fe = self.target.fundamental_elements();
        let mut out: Vec<PastureElement> = match &self.data.rules[level] {
            Rule::FreeFirst => fe.to_vec(),
            Rule::FreeSecond => self.target.partners_of(&images[level - 1]).to_vec(),
            Rule::Dependent { tau, coeffs } => {
                // c_u * f(u) = psi(tau) - sum c_i y_i
                let (&cu, rest) = coeffs.split_last().unwrap();
                let rhs = self.combine(self.psi_of(tau), &negated(rest), images);
                fe.iter()
                    .filter(|x| g.scale(cu, x) == rhs)
                    .flat_map(|x| self.target.partners_of(x).iter().cloned())
                    .collect()
            }
            Rule::Paired { tau, coeffs } => {
                let k = coeffs.len();
                let (cu, cv) = (coeffs[k - 2], coeffs[k - 1]);
                let rhs = self.combine(self.psi_of(tau), &negated(&coeffs[..k - 2]), images);
                self.target_pairs
                    .iter()
                    .filter(|(x, y)| g.add(&g.scale(cu, x), &g.scale(cv, y)) == rhs)
                    .map(|(x, _)| x.clone())
                    .collect()
            }
        };
        out.sort();
        out.dedup();
        out
    }

    fn image_of_dependent(&self, dep: &Dependence, images: &[PastureElement]) -> PastureElement {
        // c0 f(u) = psi(tau) + sum c_i y_i
        self.combine(self.psi_of(&dep.tau), &dep.coeffs, images)
    }

    fn passes(&self, check: &TypeFourCheck, images: &[PastureElement]) -> bool {
        let g = self.target.group();
        let yu = self.image_of_dependent(&check.u, images);
        let yv = self.image_of_dependent(&check.v, images);
        let (c0, d0) = (check.u.c0, check.v.c0);
        if c0 == 1 && d0 == 1 {
            return self.target.is_fundamental_pair(&yu, &yv);
        }
        if c0 == 1 {
            return self.target.partners_of(&yu).iter().any(|z| g.scale(d0, z) == yv);
        }
        self.target_pairs.iter().any(|(z1, z2)| g.scale(c0, z1) == yu && g.scale(d0, z2) == yv)
    }

    pub(crate) fn run(&mut self) {
        let mut images = Vec::with_capacity(self.data.free_rank());
        let _ = self.descend(&mut images, &Span::default());
    }

    fn descend(&mut self, images: &mut Vec<PastureElement>, span: &Span) -> ControlFlow<()> {
        let level = images.len();
        if level == self.data.free_rank() {
            self.counters.leaves += 1;
            let (ms, solvable) = self.assembler.assemble(self.psi, images);
            if solvable {
                self.counters.assembled += 1;
            }
            for m in ms {
                if self.find_iso && !super::matrix_is_group_isomorphism(&m, self.source, self.target) {
                    continue;
                }
                self.found.push(m);
                if self.find_one {
                    return ControlFlow::Break(());
                }
            }
            return ControlFlow::Continue(());
        }
        let n2 = self.target.group().torsion_rank();
        for y in self.candidates(level, images) {
            images.push(y);
            let ok = self.data.checks[level].iter().all(|c| self.passes(c, images));
            let mut next = span.clone();
            let grows = !self.find_iso || next.insert(&images[level][n2..]);
            if ok && grows {
                self.counters.nodes += 1;
                if self.descend(images, &next).is_break() {
                    images.pop();
                    return ControlFlow::Break(());
                }
            }
            images.pop();
        }
        ControlFlow::Continue(())
    }
}

fn negated(c: &[i64]) -> Vec<i64> {
    c.iter().map(|x| -x).collect()
}
