//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use foundry_core::field::FiniteField;
use foundry_core::foundation::compute_foundation;
use foundry_core::matroid::Matroid;
use foundry_core::pasture::Pasture;

/// Source pastures with at most eight fundamental elements.
pub fn small_sources() -> Vec<(String, Pasture)> {
    let mut out: Vec<(String, Pasture)> = ["f1pm", "krasner", "sign", "U", "D", "H", "F3", "P0"]
        .iter()
        .map(|n| (n.to_string(), Pasture::builtin(n).unwrap()))
        .collect();
    for q in [2, 3, 4, 5, 7, 8, 9] {
        out.push((format!("GF({q})"), Pasture::gf(q).unwrap()));
    }
    for name in ["uniform:2,4", "nonfano", "fano", "ag23"] {
        let m = Matroid::named(name).unwrap();
        out.push((format!("F({name})"), compute_foundation(&m, None).unwrap().foundation));
    }
    out.retain(|(_, p)| p.fundamental_elements().len() <= 8);
    out
}

/// Target pastures with unit group of order at most 16.
pub fn small_targets() -> Vec<(String, Pasture)> {
    let mut out: Vec<(String, Pasture)> =
        ["f1pm", "krasner", "sign", "H", "F3"].iter().map(|n| (n.to_string(), Pasture::builtin(n).unwrap())).collect();
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17] {
        out.push((format!("GF({q})"), Pasture::gf(q).unwrap()));
    }
    out.retain(|(_, p)| p.group().order().is_some_and(|n| n <= 16));
    out
}

/// Every assignment of generator images that is a well-defined
/// homomorphism, kept when it preserves the sign and all oriented
/// fundamental pairs. Sorted, as `n2 x n1` matrices.
pub fn brute_force_morphisms(p1: &Pasture, p2: &Pasture) -> Vec<Vec<Vec<i64>>> {
    let (g1, g2) = (p1.group(), p2.group());
    let elems = g2.elements().unwrap();
    let options: Vec<Vec<&Vec<i64>>> = (0..g1.dim())
        .map(|j| {
            let order = g1.invariants().get(j).copied().unwrap_or(0);
            elems.iter().filter(|y| order == 0 || g2.is_zero(&g2.scale(order, y))).collect()
        })
        .collect();
    let image = |choice: &[&Vec<i64>], x: &[i64]| {
        let mut acc = g2.zero();
        for (c, &k) in choice.iter().zip(x) {
            acc = g2.add(&acc, &g2.scale(k, c));
        }
        acc
    };
    let mut out = Vec::new();
    if options.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0usize; g1.dim()];
    loop {
        let choice: Vec<&Vec<i64>> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        let ok = &image(&choice, p1.epsilon()) == p2.epsilon()
            && p1.hexagons().iter().all(|h| {
                h.oriented_pairs().all(|(x, y)| p2.is_fundamental_pair(&image(&choice, &x), &image(&choice, &y)))
            });
        if ok {
            out.push((0..g2.dim()).map(|i| choice.iter().map(|c| c[i]).collect()).collect());
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                out.sort();
                return out;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Orbit sizes of `b -> 1/b, 1 - b` on GF(q) minus {0, 1}.
pub fn orbit_sizes(field: &FiniteField) -> Vec<usize> {
    let q = field.order();
    let mut seen = BTreeSet::new();
    let mut sizes = Vec::new();
    for b in 2..q {
        if seen.contains(&b) {
            continue;
        }
        let mut orbit = BTreeSet::from([b]);
        let mut frontier = vec![b];
        while let Some(x) = frontier.pop() {
            for y in [field.inv(x).unwrap(), field.sub(1, x)] {
                if orbit.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.extend(orbit.iter().copied());
        sizes.push(orbit.len());
    }
    sizes
}
