//! Enumeration of pasture morphisms.
//!
//! A morphism is stored as an integer matrix from source coordinates to
//! target coordinates, torsion rows reduced. In block form it is
//! `[[psi, C_T], [0, C_F]]` with `psi` the map on torsion parts.

mod assemble;
mod search;
pub mod sublattice;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pasture::{Pasture, PastureElement};
use crate::zlattice::{hom_finite_rows, GroupHom, GroupPresentation, IntMatrix};
use assemble::{apply_rows, Assembler};
use search::{Counters, Dfs};
pub use sublattice::{pair_type, PairType, Rule, SublatticeData};

/// The cached sublattice data of `p`.
pub fn full_rank_sublattice(p: &Pasture) -> Result<&SublatticeData> {
    p.sublattice.get_or_init(|| sublattice::compute(p)).as_ref().ok_or(Error::NotGeneratedByFundamentalElements)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PastureMorphism {
    /// Row-major, `target.dim() x source.dim()`.
    pub matrix: Vec<Vec<i64>>,
}

impl PastureMorphism {
    pub fn new(matrix: Vec<Vec<i64>>) -> Self {
        PastureMorphism { matrix }
    }

    pub fn apply(&self, target: &GroupPresentation, x: &[i64]) -> PastureElement {
        apply_rows(target, &self.matrix, x)
    }

    pub fn to_group_hom(&self, source_dim: usize) -> GroupHom {
        GroupHom::new(IntMatrix::from_rows(source_dim, &self.matrix))
    }

    /// `after . self`, reduced in the final target.
    pub fn then(&self, after: &PastureMorphism, target: &GroupPresentation) -> PastureMorphism {
        let cols = self.matrix.first().map_or(0, Vec::len);
        let mut m: Vec<Vec<i64>> = after
            .matrix
            .iter()
            .map(|row| (0..cols).map(|j| row.iter().zip(&self.matrix).map(|(a, r)| a * r[j]).sum()).collect())
            .collect();
        for (row, &a) in m.iter_mut().zip(target.invariants()) {
            row.iter_mut().for_each(|x| *x = x.rem_euclid(a));
        }
        PastureMorphism::new(m)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop after the first morphism.
    pub find_one: bool,
    /// Only isomorphisms.
    pub find_iso: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Torsion maps respecting the sign.
    pub torsion_maps: usize,
    /// Search-tree nodes below the root.
    pub nodes: usize,
    /// Fully specified candidates handed to assembly.
    pub leaves: usize,
    /// Candidates with an integral free block and solvable torsion block.
    pub assembled: usize,
    /// Sublattice pair counts: types 1, 2, 3 and recorded type-4 checks.
    pub pair_counts: [usize; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub morphisms: Vec<PastureMorphism>,
    pub stats: SearchStats,
}

/// Maps between torsion parts that send sign to sign, as `n2 x n1` matrices.
pub fn torsion_homs(p1: &Pasture, p2: &Pasture) -> Vec<Vec<Vec<i64>>> {
    let (t1, t2) = (p1.group().torsion(), p2.group().torsion());
    let (e1, e2) = (&p1.epsilon()[..t1.dim()], &p2.epsilon()[..t2.dim()]);
    hom_finite_rows(&t1, &t2).into_iter().filter(|psi| apply_rows(&t2, psi, e1) == e2).collect()
}

fn matrix_is_group_isomorphism(m: &[Vec<i64>], p1: &Pasture, p2: &Pasture) -> bool {
    GroupHom::new(IntMatrix::from_rows(p1.group().dim(), m)).is_isomorphism(p1.group(), p2.group())
}

/// Whether a matrix defines a pasture morphism: well defined on the groups,
/// sign to sign, fundamental pairs to fundamental pairs.
pub fn is_morphism(f: &PastureMorphism, p1: &Pasture, p2: &Pasture) -> bool {
    let (g1, g2) = (p1.group(), p2.group());
    if f.matrix.len() != g2.dim() || f.matrix.iter().any(|r| r.len() != g1.dim()) {
        return false;
    }
    if !f.to_group_hom(g1.dim()).is_well_defined(g1, g2) {
        return false;
    }
    if &f.apply(g2, p1.epsilon()) != p2.epsilon() {
        return false;
    }
    p1.hexagons()
        .iter()
        .all(|h| h.pairs().iter().all(|(x, y)| p2.is_fundamental_pair(&f.apply(g2, x), &f.apply(g2, y))))
}

pub fn is_isomorphism(f: &PastureMorphism, p1: &Pasture, p2: &Pasture) -> bool {
    is_morphism(f, p1, p2)
        && p1.fundamental_pair_count() == p2.fundamental_pair_count()
        && matrix_is_group_isomorphism(&f.matrix, p1, p2)
}

/// Enumerates morphisms from `p1` to `p2`, sorted and without repeats.
pub fn search_morphisms(p1: &Pasture, p2: &Pasture, opts: SearchOptions) -> Result<SearchResult> {
    let data = full_rank_sublattice(p1)?;
    let mut stats = SearchStats { pair_counts: data.counts, ..SearchStats::default() };
    if opts.find_iso {
        let (g1, g2) = (p1.group(), p2.group());
        if g1 != g2
            || p1.fundamental_pair_count() != p2.fundamental_pair_count()
            || p1.hexagons().len() != p2.hexagons().len()
        {
            return Ok(SearchResult { morphisms: Vec::new(), stats });
        }
    }

    let mut psis = torsion_homs(p1, p2);
    if opts.find_iso {
        let (t1, t2) = (p1.group().torsion(), p2.group().torsion());
        psis.retain(|psi| GroupHom::new(IntMatrix::from_rows(t1.dim(), psi)).is_isomorphism(&t1, &t2));
    }
    stats.torsion_maps = psis.len();
    let assembler = Assembler::new(p1, p2, &data.elements);
    let target_pairs: Vec<(PastureElement, PastureElement)> = {
        let mut v: Vec<_> = p2.hexagons().iter().flat_map(|h| h.oriented_pairs()).collect();
        v.sort();
        v.dedup();
        v
    };

    let run = |psi: &Vec<Vec<i64>>| -> (Vec<Vec<Vec<i64>>>, Counters) {
        let mut dfs = Dfs {
            source: p1,
            target: p2,
            data,
            assembler: &assembler,
            psi,
            find_one: opts.find_one,
            find_iso: opts.find_iso,
            counters: Counters::default(),
            found: Vec::new(),
            target_pairs: &target_pairs,
        };
        dfs.run();
        (dfs.found, dfs.counters)
    };

    let results: Vec<(Vec<Vec<Vec<i64>>>, Counters)> = if opts.find_one {
        let mut out = Vec::new();
        for psi in &psis {
            let r = run(psi);
            let done = !r.0.is_empty();
            out.push(r);
            if done {
                break;
            }
        }
        out
    } else {
        psis.par_iter().map(run).collect()
    };

    let mut morphisms: Vec<PastureMorphism> = Vec::new();
    for (found, c) in results {
        stats.nodes += c.nodes;
        stats.leaves += c.leaves;
        stats.assembled += c.assembled;
        morphisms.extend(found.into_iter().map(PastureMorphism::new));
    }
    morphisms.sort();
    morphisms.dedup();
    if opts.find_one {
        morphisms.truncate(1);
    }
    Ok(SearchResult { morphisms, stats })
}

/// All morphisms from `p1` to `p2`.
pub fn morphisms(p1: &Pasture, p2: &Pasture) -> Result<Vec<PastureMorphism>> {
    Ok(search_morphisms(p1, p2, SearchOptions::default())?.morphisms)
}

/// Some isomorphism from `p1` to `p2`, if one exists.
pub fn find_isomorphism(p1: &Pasture, p2: &Pasture) -> Result<Option<PastureMorphism>> {
    let opts = SearchOptions { find_one: true, find_iso: true };
    Ok(search_morphisms(p1, p2, opts)?.morphisms.into_iter().next())
}
