//! Representation counts against exhaustive enumeration of matrices.

use foundry_core::field::FiniteField;
use foundry_core::matroid::{subsets, Matroid};
use foundry_core::representation::{matroid_of_matrix, representations_over_field, FieldMatrix};

/// Number of rescaling classes of representations over GF(q): matrices with
/// identity on the first basis, divided by the free action of column
/// scalings.
fn brute_force_classes(m: &Matroid, q: u64) -> (u64, Vec<Vec<Vec<u32>>>) {
    let field = FiniteField::new(q).unwrap();
    let (r, n) = (m.rank(), m.n());
    let b0 = m.bases()[0].clone();
    let mut support = Vec::new();
    for (i, &g) in b0.iter().enumerate() {
        for j in (0..n).filter(|j| !b0.contains(j)) {
            let mut s: Vec<usize> = b0.iter().copied().filter(|&e| e != g).chain([j]).collect();
            s.sort_unstable();
            if m.is_basis(&s) {
                support.push((i, j));
            }
        }
    }
    // components of the support graph on the ground set
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let root = find(p, p[x]);
            p[x] = root;
        }
        p[x]
    }
    for &(i, j) in &support {
        let (a, b) = (find(&mut parent, b0[i]), find(&mut parent, j));
        parent[a] = b;
    }
    let components = (0..n).filter(|&x| find(&mut parent, x) == x).count();

    let all_sets = subsets(n, r);
    let mut valid = Vec::new();
    let total = (q - 1).pow(support.len() as u32);
    for code in 0..total {
        let mut a = vec![vec![0u32; n]; r];
        for (i, &g) in b0.iter().enumerate() {
            a[i][g] = 1;
        }
        let mut c = code;
        for &(i, j) in &support {
            a[i][j] = 1 + (c % (q - 1)) as u32;
            c /= q - 1;
        }
        let ok = all_sets.iter().all(|s| {
            let sub: Vec<Vec<u32>> = a.iter().map(|row| s.iter().map(|&j| row[j]).collect()).collect();
            (field.determinant(&sub) != 0) == m.is_basis(s)
        });
        if ok {
            valid.push(a);
        }
    }
    let orbit = (q - 1).pow((n - components) as u32);
    assert_eq!(valid.len() as u64 % orbit, 0);
    (valid.len() as u64 / orbit, valid)
}

fn check(name: &str, q: u64) {
    let m = Matroid::named(name).unwrap();
    let (classes, valid) = brute_force_classes(&m, q);
    let reps = representations_over_field(&m, q, None).unwrap();
    assert_eq!(reps.len() as u64, classes, "{name} over GF({q})");
    for a in &reps {
        assert_eq!(matroid_of_matrix(a).unwrap(), m);
        assert!(valid.contains(&a.entries));
    }
    let mut distinct: Vec<&FieldMatrix> = reps.iter().collect();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct.len(), reps.len());
}

#[test]
fn uniform_rank_two() {
    for q in [2, 3, 4, 5, 7, 8] {
        check("uniform:2,4", q);
    }
    for q in [3, 4, 5, 7] {
        check("uniform:2,5", q);
    }
}

#[test]
fn fano_and_nonfano() {
    for q in [2, 3, 4, 5] {
        check("fano", q);
        check("nonfano", q);
    }
}

#[test]
fn example52_and_u36() {
    check("example52", 5);
    check("uniform:3,6", 5);
}
