//! Grassmann-Plücker functions, matrices over finite fields, orientability
//! and non-representability certificates.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::foundation::{ambient_dim, compute_foundation, FoundationResult};
use crate::matroid::{subsets, Matroid};
use crate::morphism::{morphisms, search_morphisms, PastureMorphism, SearchOptions};
use crate::pasture::{Pasture, PastureElement};

/// A Grassmann-Plücker function, stored on the bases in lexicographic order.
/// Values on arbitrary tuples follow from the alternating sign rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpFunction {
    matroid: Matroid,
    pasture: Pasture,
    values: Vec<PastureElement>,
}

impl GpFunction {
    pub fn new(matroid: Matroid, pasture: Pasture, values: Vec<PastureElement>) -> Result<Self> {
        let dim = pasture.group().dim();
        if values.len() != matroid.bases().len() || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Precondition(format!("expected {} values of length {dim}", matroid.bases().len())));
        }
        let values = values
            .into_iter()
            .map(|mut v| {
                pasture.group().reduce(&mut v);
                v
            })
            .collect();
        Ok(GpFunction { matroid, pasture, values })
    }

    /// The Krasner-valued indicator of the bases.
    pub fn indicator(matroid: &Matroid) -> Self {
        let k = Pasture::builtin("krasner").unwrap();
        let values = vec![Vec::new(); matroid.bases().len()];
        GpFunction { matroid: matroid.clone(), pasture: k, values }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn pasture(&self) -> &Pasture {
        &self.pasture
    }

    /// Values on the lexicographically ordered bases.
    pub fn values(&self) -> &[PastureElement] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [PastureElement] {
        &mut self.values
    }

    /// Value on an ordered tuple; `None` is zero.
    pub fn value(&self, tuple: &[usize]) -> Option<PastureElement> {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        let k = self.matroid.basis_index(&sorted).filter(|_| sorted.len() == self.matroid.rank())?;
        let g = self.pasture.group();
        let mut v = self.values[k].clone();
        if parity(tuple) == 1 {
            v = g.add(&v, self.pasture.epsilon());
        }
        Some(v)
    }
}

fn parity(seq: &[usize]) -> usize {
    let mut s = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                s ^= 1;
            }
        }
    }
    s
}

/// The function `B -> f(rho(e_B))`.
pub fn gp_from_morphism(m: &Matroid, fr: &FoundationResult, f: &PastureMorphism, target: &Pasture) -> GpFunction {
    let dim = ambient_dim(m);
    let values = (0..m.bases().len())
        .map(|k| {
            let mut e = vec![0i64; dim];
            e[k + 1] = 1;
            f.apply(target.group(), &fr.project(&e))
        })
        .collect();
    GpFunction { matroid: m.clone(), pasture: target.clone(), values }
}

/// Checks support, sign rule and every three-term Plücker relation.
pub fn validate_gp(gp: &GpFunction) -> bool {
    let (m, p) = (&gp.matroid, &gp.pasture);
    let g = p.group();
    if gp.values.len() != m.bases().len() || gp.values.iter().any(|v| v.len() != g.dim()) {
        return false;
    }
    let r = m.rank();
    if r < 2 {
        return true;
    }
    let n = m.n();
    let eps = p.epsilon();
    let product =
        |a: Option<PastureElement>, b: Option<PastureElement>| -> Option<PastureElement> { Some(g.add(&a?, &b?)) };
    // reordering J multiplies every term by the same square
    for j in subsets(n, r - 2) {
        let at = |a: usize, b: usize| {
            let mut t = j.clone();
            t.push(a);
            t.push(b);
            gp.value(&t)
        };
        for e1 in 0..n {
            for e2 in 0..n {
                for e3 in 0..n {
                    for e4 in 0..n {
                        let t1 = product(at(e1, e2), at(e3, e4));
                        let t2 = product(at(e1, e3), at(e2, e4)).map(|x| g.add(&x, eps));
                        let t3 = product(at(e1, e4), at(e2, e3));
                        if !p.in_nullset([t1.as_deref(), t2.as_deref(), t3.as_deref()]) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// A matrix over GF(q); entries are element codes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldMatrix {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
}

impl FieldMatrix {
    pub fn column(&self, j: usize) -> Vec<u32> {
        self.entries.iter().map(|row| row[j]).collect()
    }

    /// Prime fields as residues, other fields as coefficient vectors.
    pub fn to_json(&self) -> Value {
        let field = FiniteField::new(self.q as u64).expect("matrix over a field");
        let entries: Vec<Vec<Value>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter().map(|&x| if field.degree() == 1 { json!(x) } else { json!(field.coefficients(x)) }).collect()
            })
            .collect();
        json!({ "q": self.q, "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Json(<serde_json::Error as serde::de::Error>::custom("malformed matrix"));
        let q = v["q"].as_u64().ok_or_else(bad)?;
        let field = FiniteField::new(q)?;
        let rows = v["rows"].as_u64().ok_or_else(bad)? as usize;
        let cols = v["cols"].as_u64().ok_or_else(bad)? as usize;
        let raw = v["entries"].as_array().ok_or_else(bad)?;
        let mut entries = Vec::with_capacity(rows);
        for row in raw {
            let row = row.as_array().ok_or_else(bad)?;
            let mut out = Vec::with_capacity(cols);
            for x in row {
                let code = match x {
                    Value::Number(n) => n.as_u64().ok_or_else(bad)?,
                    Value::Array(cs) => cs
                        .iter()
                        .rev()
                        .try_fold(0u64, |acc, c| c.as_u64().map(|c| acc * field.characteristic() as u64 + c))
                        .ok_or_else(bad)?,
                    _ => return Err(bad()),
                };
                if code >= q {
                    return Err(bad());
                }
                out.push(code as u32);
            }
            if out.len() != cols {
                return Err(bad());
            }
            entries.push(out);
        }
        if entries.len() != rows {
            return Err(bad());
        }
        Ok(FieldMatrix { q: q as u32, rows, cols, entries })
    }

    /// Right-aligned columns, signed residues for prime fields.
    pub fn render(&self) -> String {
        let field = FiniteField::new(self.q as u64).expect("matrix over a field");
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|row| row.iter().map(|&x| field.display(x)).collect()).collect();
        let widths: Vec<usize> =
            (0..self.cols).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1)).collect();
        cells
            .iter()
            .map(|row| row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Determinant of the columns `cols` of `a`, taken in the given order.
pub fn minor(field: &FiniteField, a: &FieldMatrix, cols: &[usize]) -> u32 {
    let sub: Vec<Vec<u32>> = a.entries.iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
    field.determinant(&sub)
}

/// The reduced row echelon matrix with identity block on `b0`, rows indexed
/// by `b0` in increasing order, scaled to 1 on the spanning forest at `b0`.
pub fn gp_to_matrix(gp: &GpFunction, field: &FiniteField, b0: &[usize]) -> Result<FieldMatrix> {
    let m = &gp.matroid;
    let mut b0 = b0.to_vec();
    b0.sort_unstable();
    let k0 = m.basis_index(&b0).filter(|_| b0.len() == m.rank()).ok_or(Error::NotABasis(b0.clone()))?;
    let q = field.order();
    if gp.pasture != Pasture::from_field(field) {
        return Err(Error::Precondition(format!("function is not valued in GF({q})")));
    }
    let log = |v: &PastureElement| v.first().copied().unwrap_or(0);
    let base = log(&gp.values[k0]);
    let eps = log(gp.pasture.epsilon());
    let (r, n) = (m.rank(), m.n());
    let mut entries = vec![vec![0u32; n]; r];
    for (i, &gi) in b0.iter().enumerate() {
        for j in 0..n {
            if b0.contains(&j) {
                entries[i][j] = u32::from(j == gi);
                continue;
            }
            let mut set: Vec<usize> = b0.iter().copied().filter(|&e| e != gi).chain([j]).collect();
            set.sort_unstable();
            if let Some(k) = m.basis_index(&set) {
                // moving column j into sorted position crosses these
                let (lo, hi) = (gi.min(j), gi.max(j));
                let crossed = b0.iter().filter(|&&e| lo < e && e < hi).count();
                let exponent = log(&gp.values[k]) - base + eps * crossed as i64;
                entries[i][j] = field.pow_primitive(exponent);
            }
        }
    }
    normalize_on_forest(m, field, &b0, &mut entries)?;
    Ok(FieldMatrix { q, rows: r, cols: n, entries })
}

/// Rescales columns (and the matching rows) so that every entry on the
/// spanning forest of the exchange graph at `b0` becomes 1.
fn normalize_on_forest(m: &Matroid, field: &FiniteField, b0: &[usize], entries: &mut [Vec<u32>]) -> Result<()> {
    let (_, forest) = m.exchange_graph_and_forest(b0)?;
    let row_of = |e: usize| b0.iter().position(|&x| x == e);
    let mut scale: Vec<Option<u32>> = vec![None; m.n()];
    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m.n()];
    for &(a, b) in &forest {
        adjacent[a].push((a, b));
        adjacent[b].push((a, b));
    }
    for start in 0..m.n() {
        if scale[start].is_some() {
            continue;
        }
        scale[start] = Some(1);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(a, b) in &adjacent[v] {
                let entry = entries[row_of(a).unwrap()][b];
                // entry * s(b) / s(a) = 1
                let next = match (scale[a], scale[b]) {
                    (Some(sa), None) => (b, field.mul(sa, field.inv(entry).unwrap())),
                    (None, Some(sb)) => (a, field.mul(sb, entry)),
                    _ => continue,
                };
                scale[next.0] = Some(next.1);
                stack.push(next.0);
            }
        }
    }
    for (i, row) in entries.iter_mut().enumerate() {
        let row_scale = field.inv(scale[b0[i]].unwrap()).unwrap();
        for (j, x) in row.iter_mut().enumerate() {
            *x = field.mul(field.mul(*x, scale[j].unwrap()), row_scale);
        }
    }
    Ok(())
}

/// The column matroid.
pub fn matroid_of_matrix(a: &FieldMatrix) -> Result<Matroid> {
    let field = FiniteField::new(a.q as u64)?;
    let columns: Vec<Vec<u32>> = (0..a.cols).map(|j| a.column(j)).collect();
    Matroid::from_field_columns(&field, a.rows, &columns)
}

/// One rref matrix per rescaling class of representations over GF(q).
pub fn representations_over_field(m: &Matroid, q: u64, b0: Option<&[usize]>) -> Result<Vec<FieldMatrix>> {
    let field = FiniteField::new(q)?;
    let target = Pasture::from_field(&field);
    let fr = compute_foundation(m, b0)?;
    let fs = morphisms(&fr.foundation, &target)?;
    fs.par_iter().map(|f| gp_to_matrix(&gp_from_morphism(m, &fr, f, &target), &field, &fr.b0)).collect()
}

/// Whether the foundation maps to the sign hyperfield.
pub fn is_orientable(m: &Matroid) -> Result<bool> {
    let fr = compute_foundation(m, None)?;
    let sign = Pasture::builtin("sign")?;
    let res = search_morphisms(&fr.foundation, &sign, SearchOptions { find_one: true, find_iso: false })?;
    Ok(!res.morphisms.is_empty())
}

/// Evidence that a matroid is representable over no field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The identity is a fundamental element of the foundation.
    OneIsFundamental,
    /// A morphism from `P0` into the foundation.
    P0Morphism(PastureMorphism),
    None,
}

pub fn non_representability_certificate(m: &Matroid) -> Result<Certificate> {
    let fr = compute_foundation(m, None)?;
    if fr.foundation.one_is_fundamental() {
        return Ok(Certificate::OneIsFundamental);
    }
    let p0 = Pasture::builtin("p0")?;
    let res = search_morphisms(&p0, &fr.foundation, SearchOptions { find_one: true, find_iso: false })?;
    Ok(match res.morphisms.into_iter().next() {
        Some(f) => Certificate::P0Morphism(f),
        None => Certificate::None,
    })
}
