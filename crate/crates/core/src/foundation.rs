//! The foundation of a matroid: the Tutte-group relations, the inner Tutte
//! group relations from a spanning forest of the basis-exchange graph, and
//! hexagons read off modular quadruples of hyperplanes.
//!
//! Vectors in the ambient symbol group have coordinate 0 for the sign symbol
//! and coordinate `k + 1` for the basis with lexicographic index `k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{subsets, Matroid};
use crate::pasture::{FundamentalPair, Pasture, PastureJson};
use crate::zlattice::{cokernel_presentation, GroupHom, GroupPresentation, IntMatrix};

/// Dimension of the ambient symbol group.
pub fn ambient_dim(m: &Matroid) -> usize {
    m.bases().len() + 1
}

fn basis_coordinate(m: &Matroid, set: &[usize]) -> Result<usize> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotABasis(sorted));
    }
    m.basis_index(&sorted).filter(|_| sorted.len() == m.rank()).map(|k| k + 1).ok_or(Error::NotABasis(sorted))
}

fn inversion_parity(seq: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// The cross-ratio symbol of `(i; k1, k2, k3, k4)` as an ambient vector.
pub fn cross_ratio(m: &Matroid, i: &[usize], k: [usize; 4]) -> Result<Vec<i64>> {
    let mut v = vec![0i64; ambient_dim(m)];
    let terms = [((0, 2), 1), ((1, 3), 1), ((0, 3), -1), ((1, 2), -1)];
    let mut sign = 0;
    for ((a, b), coeff) in terms {
        let mut seq = i.to_vec();
        seq.push(k[a]);
        seq.push(k[b]);
        sign += inversion_parity(&seq);
        v[basis_coordinate(m, &seq)?] += coeff;
    }
    v[0] = sign % 2;
    Ok(v)
}

/// Relations of the Tutte group, one per column.
pub fn tutte_relations(m: &Matroid, b0: &[usize]) -> Result<IntMatrix> {
    let dim = ambient_dim(m);
    let mut cols: Vec<Vec<i64>> = Vec::new();
    let mut eps = vec![0; dim];
    eps[0] = 2;
    cols.push(eps);
    let mut base = vec![0; dim];
    base[basis_coordinate(m, b0)?] = 1;
    cols.push(base);

    let r = m.rank();
    for n in subsets(m.n(), r) {
        if r == 0 || m.rank_of(&n) + 1 != r {
            continue;
        }
        let c = m.unique_circuit_in(&n)?;
        let d = m.unique_cocircuit_avoiding(&n)?;
        let (i, j) = (c[0], d[0]);
        for &mm in &c[1..] {
            for &nn in &d[1..] {
                let rest: Vec<usize> = n.iter().copied().filter(|&e| e != i && e != mm).collect();
                cols.push(cross_ratio(m, &rest, [i, mm, j, nn])?);
            }
        }
    }
    Ok(IntMatrix::from_columns(dim, &cols))
}

/// Relations killing the symbols of the spanning-forest bases.
pub fn inner_tutte_relations(m: &Matroid, b0: &[usize]) -> Result<IntMatrix> {
    let dim = ambient_dim(m);
    let (_, forest) = m.exchange_graph_and_forest(b0)?;
    let mut cols = Vec::new();
    for (a, b) in forest {
        let set: Vec<usize> = b0.iter().copied().filter(|&e| e != a).chain([b]).collect();
        let mut col = vec![0; dim];
        col[basis_coordinate(m, &set)?] = 1;
        cols.push(col);
    }
    Ok(IntMatrix::from_columns(dim, &cols))
}

/// The degree map from the ambient symbol group to `Z^n`.
pub fn degree_map(m: &Matroid, b0: &[usize]) -> GroupHom {
    let mut cols = vec![vec![0i64; m.n()]];
    for b in m.bases() {
        let mut col = vec![0i64; m.n()];
        for &e in b {
            if !b0.contains(&e) {
                col[e] += 1;
            }
        }
        for &e in b0 {
            if !b.contains(&e) {
                col[e] -= 1;
            }
        }
        cols.push(col);
    }
    GroupHom::new(IntMatrix::from_columns(m.n(), &cols))
}

/// Elements of `flat` added greedily while they stay independent.
fn greedy_independent(m: &Matroid, flat: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &e in flat {
        out.push(e);
        if !m.is_independent(&out) {
            out.pop();
        }
    }
    out
}

/// Modular quadruples as `(I, [a1, a2, a3, a4])`, one per 4-set of
/// hyperplanes over a corank-2 flat. The anchor `a_i` is chosen from
/// `H_i \ X` by `pick`.
pub fn modular_quadruples_with(m: &Matroid, pick: impl Fn(&[usize]) -> usize) -> Vec<(Vec<usize>, [usize; 4])> {
    if m.rank() < 2 {
        return Vec::new();
    }
    let hyperplanes = m.flats_of_corank(1);
    let mut out = Vec::new();
    for x in m.flats_of_corank(2) {
        let above: Vec<&Vec<usize>> = hyperplanes.iter().filter(|h| x.iter().all(|e| h.contains(e))).collect();
        let indep = greedy_independent(m, &x);
        for quad in subsets(above.len(), 4) {
            let mut a = [0; 4];
            for (slot, &h) in a.iter_mut().zip(&quad) {
                let diff: Vec<usize> = above[h].iter().copied().filter(|e| !x.contains(e)).collect();
                *slot = pick(&diff);
            }
            out.push((indep.clone(), a));
        }
    }
    out
}

/// Modular quadruples with the smallest element of each `H_i \ X` as anchor.
pub fn modular_quadruples(m: &Matroid) -> Vec<(Vec<usize>, [usize; 4])> {
    modular_quadruples_with(m, |d| d[0])
}

/// A computed foundation with its projection from the ambient symbol group.
#[derive(Clone, Debug)]
pub struct FoundationResult {
    pub foundation: Pasture,
    pub rho_zero: GroupHom,
    pub b0: Vec<usize>,
}

impl FoundationResult {
    /// Image of an ambient vector in the foundation group.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        self.rho_zero.apply(self.foundation.group(), v)
    }

    pub fn to_json(&self) -> FoundationJson {
        FoundationJson {
            pasture: self.foundation.to_json(),
            rho_zero: self.rho_zero.reduced_rows(self.foundation.group()),
            b0: self.b0.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoundationJson {
    #[serde(flatten)]
    pub pasture: PastureJson,
    #[serde(rename = "rhoZero")]
    pub rho_zero: Vec<Vec<i64>>,
    #[serde(rename = "B0")]
    pub b0: Vec<usize>,
}

/// Computes the foundation, with `b0` defaulting to the first basis.
pub fn compute_foundation(m: &Matroid, b0: Option<&[usize]>) -> Result<FoundationResult> {
    let b0: Vec<usize> = match b0 {
        Some(b) => {
            let mut b = b.to_vec();
            b.sort_unstable();
            if !m.is_basis(&b) {
                return Err(Error::NotABasis(b));
            }
            b
        }
        None => m.bases()[0].clone(),
    };
    let relations = tutte_relations(m, &b0)?.hcat(&inner_tutte_relations(m, &b0)?);
    let (group, rho) = cokernel_presentation(&relations);
    let rho_cols = rho_columns(&rho, &group);
    let project = |v: &[i64]| -> Vec<i64> {
        let mut acc = group.zero();
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                for (a, b) in acc.iter_mut().zip(&rho_cols[k]) {
                    *a += c * b;
                }
            }
        }
        group.reduce(&mut acc);
        acc
    };
    let epsilon = project(&unit(ambient_dim(m), 0));

    let quads = modular_quadruples(m);
    let pairs: Vec<FundamentalPair> = quads
        .par_iter()
        .map(|(i, [a1, a2, a3, a4])| -> Result<FundamentalPair> {
            let x = cross_ratio(m, i, [*a1, *a2, *a3, *a4])?;
            let y = cross_ratio(m, i, [*a1, *a3, *a2, *a4])?;
            Ok((project(&x), project(&y)))
        })
        .collect::<Result<_>>()?;
    let foundation = Pasture::new(group, epsilon, pairs)?;
    Ok(FoundationResult { foundation, rho_zero: rho, b0 })
}

fn unit(dim: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[k] = 1;
    v
}

fn rho_columns(rho: &GroupHom, group: &GroupPresentation) -> Vec<Vec<i64>> {
    let rows = rho.reduced_rows(group);
    (0..rho.matrix.cols()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pasture::HexagonType;
    use crate::zlattice::smith_normal_form;

    /// Parity by explicit bubble-sort transpositions.
    fn transposition_parity(seq: &[usize]) -> i64 {
        let mut s = seq.to_vec();
        let mut swaps = 0;
        for i in 0..s.len() {
            for j in 0..s.len() - 1 - i {
                if s[j] > s[j + 1] {
                    s.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        swaps % 2
    }

    #[test]
    fn cross_ratio_of_u24() {
        let m = Matroid::uniform(2, 4).unwrap();
        // bases 01 02 03 12 13 23 at coordinates 1..6
        let v = cross_ratio(&m, &[], [0, 1, 2, 3]).unwrap();
        assert_eq!(v, vec![0, 0, 1, -1, -1, 1, 0]);
        let w = cross_ratio(&m, &[], [1, 0, 2, 3]).unwrap();
        let parity: i64 = [[1, 2], [0, 3], [1, 3], [0, 2]].iter().map(|s| transposition_parity(s)).sum::<i64>() % 2;
        assert_eq!(w[0], parity);
        assert_eq!(&w[1..], &[0, -1, 1, 1, -1, 0]);
        assert!(cross_ratio(&m, &[], [0, 1, 0, 3]).is_err());
    }

    #[test]
    fn relation_shapes() {
        let u24 = Matroid::uniform(2, 4).unwrap();
        assert_eq!(tutte_relations(&u24, &[0, 1]).unwrap().cols(), 2);
        assert_eq!(inner_tutte_relations(&u24, &[0, 1]).unwrap().cols(), 3);
        let m = Matroid::named("example52").unwrap();
        let r1 = tutte_relations(&m, &[0, 1, 3]).unwrap();
        let mut expected = 2;
        for n in subsets(7, 3) {
            if m.rank_of(&n) == 2 {
                let c = m.unique_circuit_in(&n).unwrap();
                let d = m.unique_cocircuit_avoiding(&n).unwrap();
                expected += (c.len() - 1) * (d.len() - 1);
            }
        }
        assert_eq!(r1.cols(), expected);
        assert_eq!(inner_tutte_relations(&m, &[0, 1, 3]).unwrap().cols(), 6);
        let empty = Matroid::from_bases(0, 0, vec![vec![]]).unwrap();
        assert_eq!(inner_tutte_relations(&empty, &[]).unwrap().cols(), 0);
    }

    #[test]
    fn degree_map_kills_tutte_relations() {
        for name in ["example52", "fano", "nonfano", "pappus", "vamos"] {
            let m = Matroid::named(name).unwrap();
            let b0 = m.bases()[0].clone();
            let deg = degree_map(&m, &b0);
            assert!(deg.matrix.mul(&tutte_relations(&m, &b0).unwrap()).is_zero(), "{name}");
            // forest edges generate the image of the degree map
            let (_, forest) = m.exchange_graph_and_forest(&b0).unwrap();
            let edge_cols: Vec<Vec<i64>> = forest
                .iter()
                .map(|&(a, b)| {
                    let mut c = vec![0; m.n()];
                    c[b] = 1;
                    c[a] = -1;
                    c
                })
                .collect();
            let edges = IntMatrix::from_columns(m.n(), &edge_cols);
            let image = deg.matrix.clone();
            let both = image.hcat(&edges);
            let d_img = smith_normal_form(&image).diagonal();
            let d_both = smith_normal_form(&both).diagonal();
            assert_eq!(d_img, d_both, "{name}");
        }
    }

    #[test]
    fn example52_foundation() {
        let m = Matroid::named("example52").unwrap();
        let fr = compute_foundation(&m, Some(&[0, 1, 3])).unwrap();
        let p = &fr.foundation;
        assert_eq!(p.group().invariants(), &[2]);
        assert_eq!(p.group().free_rank(), 3);
        assert_eq!(p.hexagon_types(), vec![HexagonType::U; 3]);
        assert_eq!(fr.rho_zero.matrix.cols(), 31);
        assert_eq!(&fr.project(&unit(31, 0)), p.epsilon());
        assert!(!p.group().is_zero(p.epsilon()));
    }

    #[test]
    fn rho_kills_relations() {
        let m = Matroid::named("nonfano").unwrap();
        let fr = compute_foundation(&m, None).unwrap();
        let rel = tutte_relations(&m, &fr.b0).unwrap().hcat(&inner_tutte_relations(&m, &fr.b0).unwrap());
        for j in 0..rel.cols() {
            let col: Vec<i64> = rel.column(j).iter().map(|x| i64::try_from(x).unwrap()).collect();
            assert!(fr.foundation.group().is_zero(&fr.project(&col)));
        }
    }

    #[test]
    fn quadruples_are_nondegenerate() {
        for name in ["example52", "pappus", "ag23", "vamos"] {
            let m = Matroid::named(name).unwrap();
            for (i, a) in modular_quadruples(&m) {
                for p in 0..4 {
                    for q in p + 1..4 {
                        let mut s = i.clone();
                        s.extend([a[p], a[q]]);
                        s.sort_unstable();
                        assert!(m.is_basis(&s), "{name}: {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn anchor_choice_does_not_change_hexagons() {
        let m = Matroid::named("pappus").unwrap();
        let fr = compute_foundation(&m, None).unwrap();
        let p = &fr.foundation;
        let pairs: Vec<FundamentalPair> = modular_quadruples_with(&m, |d| *d.last().unwrap())
            .into_iter()
            .map(|(i, [a1, a2, a3, a4])| {
                (
                    fr.project(&cross_ratio(&m, &i, [a1, a2, a3, a4]).unwrap()),
                    fr.project(&cross_ratio(&m, &i, [a1, a3, a2, a4]).unwrap()),
                )
            })
            .collect();
        let other = Pasture::new(p.group().clone(), p.epsilon().clone(), pairs).unwrap();
        assert_eq!(&other, p);
    }

    #[test]
    fn fano_sign_is_trivial() {
        let m = Matroid::named("fano").unwrap();
        let r1 = tutte_relations(&m, &m.bases()[0]).unwrap();
        let (g, rho) = cokernel_presentation(&r1);
        let eps = rho.apply(&g, &unit(ambient_dim(&m), 0));
        // binary and not regular: the sign is already trivial in the Tutte group
        assert!(g.is_zero(&eps));
        assert!(!g.is_finite());
        let fr = compute_foundation(&m, None).unwrap();
        assert!(fr.foundation.group().is_zero(fr.foundation.epsilon()));
    }

    #[test]
    fn regular_sign_survives() {
        let m = Matroid::uniform(2, 3).unwrap();
        let r1 = tutte_relations(&m, &m.bases()[0]).unwrap();
        let (g, rho) = cokernel_presentation(&r1);
        assert!(!g.is_zero(&rho.apply(&g, &unit(ambient_dim(&m), 0))));
    }

    #[test]
    fn pappus_counts() {
        let m = Matroid::named("pappus").unwrap();
        let fr = compute_foundation(&m, None).unwrap();
        assert_eq!(fr.foundation.hexagons().len(), 11);
        assert_eq!(fr.foundation.group().free_rank(), 7);
        assert!(fr.foundation.hexagon_types().iter().all(|&t| t == HexagonType::U));
    }
}
