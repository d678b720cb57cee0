//! Exact integer linear algebra: Smith normal form, cokernel presentations,
//! modular linear solving and homomorphisms between finite abelian groups.
//!
//! Matrices carry arbitrary-precision entries. Group elements, which are
//! small in practice, are plain `i64` coordinate vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have
    /// length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, cols: &[C]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            let col = col.as_ref();
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, &x) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `self | other`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in concatenation");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// Rows `rows` and columns `cols` of `self`.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.data[oi * cols.len() + oj] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Converts to machine integers, or `None` if an entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    /// Multiplies `self` by a column vector of machine integers.
    pub fn apply_i64(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).filter(|(_, &x)| x != 0).map(|(a, &x)| a * x).sum()).collect()
    }

    /// Rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> usize {
        bareiss(self.clone()).0
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let (rank, det) = bareiss(self.clone());
        if rank < self.rows {
            BigInt::zero()
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = s * k;
                self.data[dst * self.cols + j] += t;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let t = s * k;
                self.data[i * self.cols + dst] += t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Returns (rank, last pivot) of fraction-free Gaussian elimination. For a
/// full-rank square matrix the last pivot is the determinant.
fn bareiss(mut m: IntMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap_rows(p, rank);
            sign = -sign;
        }
        let pivot = m.get(rank, c).clone();
        for i in rank + 1..rows {
            let lead = m.get(i, c).clone();
            for j in c..cols {
                let v = (&pivot * m.get(i, j) - &lead * m.get(rank, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = pivot;
        rank += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (rank, det)
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal entries of `D`, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with both transforms.
///
/// Pivots are the smallest nonzero entry by absolute value in the remaining
/// block, ties broken by lowest (row, column).
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (u, d, v) = snf_impl(a.clone(), true, true);
    SnfResult { u: u.unwrap(), d, v: v.unwrap() }
}

fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn snf_impl(mut d: IntMatrix, track_u: bool, track_v: bool) -> (Option<IntMatrix>, IntMatrix, Option<IntMatrix>) {
    let (m, n) = (d.rows, d.cols);
    let mut u = track_u.then(|| IntMatrix::identity(m));
    let mut v = track_v.then(|| IntMatrix::identity(n));

    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        d.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        loop {
            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / &pivot);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &q);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(i, t, &q);
                    }
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / &pivot);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &q);
                    if let Some(v) = v.as_mut() {
                        v.add_col_multiple(j, t, &q);
                    }
                }
                dirty |= !d.get(t, j).is_zero();
            }

            if !dirty {
                // Row and column are clear; enforce divisibility of the rest.
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        if let Some(u) = u.as_mut() {
                            u.add_row_multiple(t, i, &one);
                        }
                        continue;
                    }
                    None => break,
                }
            }

            // A nonzero remainder is now strictly smaller than the pivot.
            let (pi, pj) = smallest_pivot(&d, t).expect("nonzero remainder exists");
            d.swap_rows(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            d.swap_cols(t, pj);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    (u, d, v)
}

/// Basis of the integer kernel `{x : A x = 0}` as columns.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (_, d, v) = snf_impl(a.clone(), false, true);
    let v = v.unwrap();
    let rank = (0..d.rows.min(d.cols)).filter(|&i| !d.get(i, i).is_zero()).count();
    (rank..a.cols).map(|j| v.column(j)).collect()
}

/// A finitely generated abelian group `Z/a_1 + ... + Z/a_n + Z^r` with
/// `a_1 | a_2 | ... | a_n` and every `a_i >= 2`.
///
/// Elements are coordinate vectors of length `n + r`; torsion coordinates
/// are kept in `[0, a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupPresentation {
    invariants: Vec<i64>,
    free_rank: usize,
}

impl GroupPresentation {
    pub fn new(invariants: Vec<i64>, free_rank: usize) -> Result<Self, String> {
        if let Some(a) = invariants.iter().find(|&&a| a < 2) {
            return Err(format!("invariant factor {a} is smaller than 2"));
        }
        if let Some(w) = invariants.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(format!("{} does not divide {}", w[0], w[1]));
        }
        Ok(GroupPresentation { invariants, free_rank })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(order: i64) -> Self {
        if order <= 1 {
            Self::trivial()
        } else {
            GroupPresentation { invariants: vec![order], free_rank: 0 }
        }
    }

    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn dim(&self) -> usize {
        self.invariants.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, if finite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariants.iter().map(|&a| a as u64).product())
    }

    /// Torsion-only part.
    pub fn torsion(&self) -> GroupPresentation {
        GroupPresentation { invariants: self.invariants.clone(), free_rank: 0 }
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn reduce(&self, x: &mut [i64]) {
        for (c, &a) in x.iter_mut().zip(&self.invariants) {
            *c = c.rem_euclid(a);
        }
    }

    pub fn reduce_big(&self, x: &[BigInt]) -> Vec<i64> {
        x.iter()
            .enumerate()
            .map(|(i, c)| match self.invariants.get(i) {
                Some(&a) => c.mod_floor(&BigInt::from(a)).to_i64().unwrap(),
                None => c.to_i64().expect("free coordinate exceeds i64"),
            })
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut z: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&mut z);
        z
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut z: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.reduce(&mut z);
        z
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        let mut z: Vec<i64> = x.iter().map(|a| -a).collect();
        self.reduce(&mut z);
        z
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        let mut z: Vec<i64> = x.iter().map(|a| k * a).collect();
        self.reduce(&mut z);
        z
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    /// Enumerates all elements of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![vec![]];
        for &a in &self.invariants {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..a).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Relation matrix `diag(a_1, ..., a_n, 0, ..., 0)`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let diag: Vec<BigInt> = self
            .invariants
            .iter()
            .map(|&a| BigInt::from(a))
            .chain(std::iter::repeat_n(BigInt::zero(), self.free_rank))
            .collect();
        IntMatrix::diagonal(self.dim(), self.dim(), &diag)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariants.iter().map(|a| format!("ℤ/{a}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ{}", superscript(r))),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// Homomorphism between presentations, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(matrix: IntMatrix) -> Self {
        GroupHom { matrix }
    }

    /// Image of `x`, reduced in `target`.
    pub fn apply(&self, target: &GroupPresentation, x: &[i64]) -> Vec<i64> {
        target.reduce_big(&self.matrix.apply_i64(x))
    }

    /// Whether every source relation `a_j e_j` maps to zero in `target`.
    pub fn is_well_defined(&self, source: &GroupPresentation, target: &GroupPresentation) -> bool {
        if self.matrix.rows() != target.dim() || self.matrix.cols() != source.dim() {
            return false;
        }
        source.invariants().iter().enumerate().all(|(j, &a)| {
            let col: Vec<BigInt> = self.matrix.column(j).iter().map(|x| x * a).collect();
            target.reduce_big(&col).iter().all(|&c| c == 0)
        })
    }

    /// Whether `self` is an isomorphism of groups. Assumes well-definedness.
    pub fn is_isomorphism(&self, source: &GroupPresentation, target: &GroupPresentation) -> bool {
        // Isomorphic f.g. abelian groups are Hopfian: surjective implies bijective.
        source == target && is_surjective(&self.matrix, target)
    }

    /// Reduced `(target dim) x (source dim)` matrix of machine integers.
    pub fn reduced_rows(&self, target: &GroupPresentation) -> Vec<Vec<i64>> {
        (0..self.matrix.rows())
            .map(|i| {
                let row = self.matrix.row(i);
                match target.invariants().get(i) {
                    Some(&a) => row.iter().map(|x| x.mod_floor(&BigInt::from(a)).to_i64().unwrap()).collect(),
                    None => row.iter().map(|x| x.to_i64().expect("entry exceeds i64")).collect(),
                }
            })
            .collect()
    }
}

/// Whether the columns of `m` together with the relations of `target`
/// generate all of `target`.
pub fn is_surjective(m: &IntMatrix, target: &GroupPresentation) -> bool {
    let stacked = m.hcat(&target.relation_matrix());
    let (_, d, _) = snf_impl(stacked, false, false);
    let k = d.rows.min(d.cols);
    k == d.rows && (0..k).all(|i| d.get(i, i).is_one())
}

/// The cokernel of `r` (acting on `Z^g`, `g = rows`) in invariant-factor
/// form, with the projection from `Z^g` onto presentation coordinates.
pub fn cokernel_presentation(r: &IntMatrix) -> (GroupPresentation, GroupHom) {
    let g = r.rows();
    let (u, d, _) = snf_impl(r.clone(), true, false);
    let u = u.unwrap();
    let k = d.rows.min(d.cols);
    let diag: Vec<BigInt> = (0..k).map(|i| d.get(i, i).clone()).collect();

    let mut invariants = Vec::new();
    let mut keep = Vec::new();
    for (i, di) in diag.iter().enumerate() {
        if di > &BigInt::one() {
            invariants.push(di.to_i64().expect("invariant factor exceeds i64"));
            keep.push(i);
        }
    }
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    keep.extend(rank..g);
    let free_rank = g - rank;

    let mut proj = IntMatrix::zeros(keep.len(), g);
    for (oi, &i) in keep.iter().enumerate() {
        for j in 0..g {
            let mut x = u.get(i, j).clone();
            if oi < invariants.len() {
                x = x.mod_floor(&BigInt::from(invariants[oi]));
            }
            proj.set(oi, j, x);
        }
    }
    let pres = GroupPresentation::new(invariants, free_rank).expect("SNF yields a divisibility chain");
    (pres, GroupHom::new(proj))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Solves `w * d = rhs` coordinate-wise modulo `n` for a diagonal `d`
/// (entries past the diagonal are treated as zero). `n = 0` solves over the
/// integers. Returns one solution of length `w_len`.
fn solve_diagonal(diag: &[BigInt], rhs: &[BigInt], n: i64, w_len: usize) -> Option<Vec<BigInt>> {
    let mut w = vec![BigInt::zero(); w_len];
    for (j, b) in rhs.iter().enumerate() {
        let dj = diag.get(j).cloned().unwrap_or_default();
        if n == 0 {
            if dj.is_zero() {
                if !b.is_zero() {
                    return None;
                }
            } else {
                let (q, rem) = b.div_rem(&dj);
                if !rem.is_zero() {
                    return None;
                }
                w[j] = q;
            }
        } else {
            let nb = BigInt::from(n);
            let dj = dj.mod_floor(&nb).to_i64().unwrap();
            let bj = b.mod_floor(&nb).to_i64().unwrap();
            let (g, inv, _) = ext_gcd(dj, n);
            if bj % g != 0 {
                return None;
            }
            if dj == 0 {
                // bj == 0 here since g == n
                continue;
            }
            let m = n / g;
            let x = ((bj / g) as i128 * inv as i128).rem_euclid(m as i128) as i64;
            if j < w_len {
                w[j] = BigInt::from(x);
            }
        }
    }
    Some(w)
}

/// Finds a row vector `x` with `x * a = b (mod n)`, or `None` if there is
/// none. `n = 0` solves over the integers.
pub fn solve_modular(a: &IntMatrix, b: &IntMatrix, n: i64) -> Option<IntMatrix> {
    assert_eq!(b.rows(), 1, "right-hand side must be a single row");
    assert_eq!(a.cols(), b.cols(), "dimension mismatch");
    let snf = smith_normal_form(a);
    solve_modular_with(&snf, b.row(0), n).map(|x| {
        let mut out = IntMatrix::zeros(1, x.len());
        for (j, v) in x.into_iter().enumerate() {
            out.set(0, j, v);
        }
        out
    })
}

/// As [`solve_modular`], reusing a precomputed Smith form of `a`.
pub fn solve_modular_with(snf: &SnfResult, b: &[BigInt], n: i64) -> Option<Vec<BigInt>> {
    // x A = b  <=>  (x U^-1) D = b V
    let r = snf.u.rows();
    let bv: Vec<BigInt> =
        (0..snf.v.cols()).map(|j| b.iter().enumerate().map(|(k, bk)| bk * snf.v.get(k, j)).sum()).collect();
    let w = solve_diagonal(&snf.diagonal(), &bv, n, r)?;
    let mut x: Vec<BigInt> = (0..r).map(|j| w.iter().enumerate().map(|(k, wk)| wk * snf.u.get(k, j)).sum()).collect();
    if n > 0 {
        let nb = BigInt::from(n);
        for v in &mut x {
            *v = v.mod_floor(&nb);
        }
    }
    Some(x)
}

/// All homomorphisms between two finite groups, as `target.dim() x
/// source.dim()` matrices with reduced rows, in lexicographic order of
/// generator images.
pub fn hom_finite(source: &GroupPresentation, target: &GroupPresentation) -> Vec<GroupHom> {
    assert!(source.is_finite() && target.is_finite(), "hom_finite needs finite groups");
    hom_finite_rows(source, target)
        .into_iter()
        .map(|rows| GroupHom::new(IntMatrix::from_rows(source.dim(), &rows)))
        .collect()
}

/// Same as [`hom_finite`] with machine-integer matrices.
pub(crate) fn hom_finite_rows(source: &GroupPresentation, target: &GroupPresentation) -> Vec<Vec<Vec<i64>>> {
    let (n, m) = (source.dim(), target.dim());
    // entry (i, j) ranges over multiples of b_i / gcd(a_j, b_i)
    let mut choices: Vec<(usize, usize, i64, i64)> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let (a, b) = (source.invariants()[j], target.invariants()[i]);
            let g = a.gcd(&b);
            choices.push((i, j, b / g, g));
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0i64; choices.len()];
    loop {
        let mut mat = vec![vec![0i64; n]; m];
        for (k, &(i, j, step, _)) in choices.iter().enumerate() {
            mat[i][j] = idx[k] * step;
        }
        out.push(mat);
        // odometer, last coordinate fastest
        let mut k = choices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].3 {
                break;
            }
            idx[k] = 0;
        }
    }
}
