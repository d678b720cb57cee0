//! Matroids given by their bases, with the rank, circuit, flat and
//! basis-exchange queries used by the foundation computation.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Largest supported ground set; rank queries use a table over all subsets.
pub const MAX_ELEMENTS: usize = 20;

/// A matroid on `0..n`. Bases are kept as sorted lists in lexicographic order.
#[derive(Clone, Debug)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Vec<usize>>,
    index: HashMap<u32, usize>,
    rank_table: Vec<u8>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rank == other.rank && self.bases == other.bases
    }
}

impl Eq for Matroid {}

pub(crate) fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0u32, |m, &e| m | (1 << e))
}

pub(crate) fn elements_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&e| mask & (1 << e) != 0).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl Matroid {
    pub fn from_bases(n: usize, rank: usize, bases: Vec<Vec<usize>>) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidMatroid(format!("ground set of size {n} exceeds the supported {MAX_ELEMENTS}")));
        }
        let mut bases: Vec<Vec<usize>> = bases
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        bases.sort();
        bases.dedup();
        if bases.is_empty() {
            return Err(Error::InvalidMatroid("no bases".into()));
        }
        for b in &bases {
            if b.len() != rank {
                return Err(Error::InvalidMatroid(format!("{b:?} does not have size {rank}")));
            }
            if b.iter().any(|&e| e >= n) || b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatroid(format!("{b:?} is not a {rank}-subset of 0..{n}")));
            }
        }
        let masks: Vec<u32> = bases.iter().map(|b| mask_of(b)).collect();
        let index: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();

        // basis exchange: for B1, B2 and x in B1\B2 some y in B2\B1 has B1-x+y a basis
        for &b1 in &masks {
            for &b2 in &masks {
                let mut only1 = b1 & !b2;
                while only1 != 0 {
                    let x = only1.trailing_zeros();
                    only1 &= only1 - 1;
                    let mut only2 = b2 & !b1;
                    let mut ok = false;
                    while only2 != 0 {
                        let y = only2.trailing_zeros();
                        only2 &= only2 - 1;
                        if index.contains_key(&((b1 & !(1 << x)) | (1 << y))) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return Err(Error::InvalidMatroid(format!(
                            "exchange fails for {:?}, {:?} at {x}",
                            elements_of(b1),
                            elements_of(b2)
                        )));
                    }
                }
            }
        }

        let rank_table = build_rank_table(n, &masks);
        Ok(Matroid { n, rank, bases, index, rank_table })
    }

    /// The matroid whose bases are all `rank`-subsets except `nonbases`.
    pub fn from_nonbases(n: usize, rank: usize, nonbases: &[Vec<usize>]) -> Result<Self> {
        let excluded: std::collections::HashSet<u32> = nonbases
            .iter()
            .map(|s| {
                if s.len() != rank || s.iter().any(|&e| e >= n) {
                    Err(Error::InvalidMatroid(format!("{s:?} is not a {rank}-subset of 0..{n}")))
                } else {
                    Ok(mask_of(s))
                }
            })
            .collect::<Result<_>>()?;
        let bases = subsets(n, rank).into_iter().filter(|b| !excluded.contains(&mask_of(b))).collect();
        Self::from_bases(n, rank, bases)
    }

    /// The uniform matroid U(r, n).
    pub fn uniform(rank: usize, n: usize) -> Result<Self> {
        if rank > n {
            return Err(Error::InvalidMatroid(format!("U({rank},{n}) has rank above size")));
        }
        Self::from_bases(n, rank, subsets(n, rank))
    }

    /// Matroid of the columns of a matrix over a finite field.
    pub fn from_field_columns(field: &FiniteField, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let n = columns.len();
        let bases: Vec<Vec<usize>> = subsets(n, rows)
            .into_iter()
            .filter(|s| {
                let m: Vec<Vec<u32>> = (0..rows).map(|i| s.iter().map(|&j| columns[j][i]).collect()).collect();
                field.determinant(&m) != 0
            })
            .collect();
        if bases.is_empty() {
            // rank is below the row count; fall back to the true rank
            let r = (0..rows)
                .rev()
                .find(|&r| subsets(n, r).iter().any(|s| column_rank(field, columns, s, rows) == r))
                .unwrap_or(0);
            let bases = subsets(n, r).into_iter().filter(|s| column_rank(field, columns, s, rows) == r).collect();
            return Self::from_bases(n, r, bases);
        }
        Self::from_bases(n, rows, bases)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bases as sorted lists, in lexicographic order.
    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    /// Lexicographic index of a basis.
    pub fn basis_index(&self, set: &[usize]) -> Option<usize> {
        self.index.get(&mask_of(set)).copied()
    }

    pub fn is_basis(&self, set: &[usize]) -> bool {
        set.len() == self.rank && self.index.contains_key(&mask_of(set))
    }

    pub fn nonbases(&self) -> Vec<Vec<usize>> {
        subsets(self.n, self.rank).into_iter().filter(|s| !self.is_basis(s)).collect()
    }

    pub(crate) fn rank_mask(&self, mask: u32) -> usize {
        self.rank_table[mask as usize] as usize
    }

    /// Size of a largest independent subset of `set`.
    pub fn rank_of(&self, set: &[usize]) -> usize {
        self.rank_mask(mask_of(set))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank_of(set) == set.len()
    }

    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let m = mask_of(set);
        let r = self.rank_mask(m);
        (0..self.n).filter(|&e| m & (1 << e) != 0 || self.rank_mask(m | (1 << e)) == r).collect()
    }

    fn check_near_basis(&self, set: &[usize]) -> Result<()> {
        if set.len() != self.rank || self.rank_of(set) + 1 != self.rank {
            return Err(Error::Precondition(format!(
                "{set:?} is not an {}-set of rank {}",
                self.rank,
                self.rank.saturating_sub(1)
            )));
        }
        Ok(())
    }

    /// The unique circuit inside an `r`-set of rank `r - 1`.
    pub fn unique_circuit_in(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_near_basis(set)?;
        let m = mask_of(set);
        let mut c: Vec<usize> =
            set.iter().copied().filter(|&e| self.rank_mask(m & !(1 << e)) == set.len() - 1).collect();
        c.sort_unstable();
        Ok(c)
    }

    /// The unique cocircuit avoiding an `r`-set of rank `r - 1`: the
    /// complement of its closure.
    pub fn unique_cocircuit_avoiding(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_near_basis(set)?;
        let cl = mask_of(&self.closure(set));
        Ok((0..self.n).filter(|&e| cl & (1 << e) == 0).collect())
    }

    /// All flats of rank `r - k`, lexicographically ordered.
    pub fn flats_of_corank(&self, k: usize) -> Vec<Vec<usize>> {
        if k > self.rank {
            return Vec::new();
        }
        let target = self.rank - k;
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let mut flats: Vec<Vec<usize>> = (0..=full)
            .filter(|&m| {
                let r = self.rank_mask(m);
                r == target && (0..self.n).all(|e| m & (1 << e) != 0 || self.rank_mask(m | (1 << e)) > r)
            })
            .map(elements_of)
            .collect();
        flats.sort();
        flats
    }

    /// Bipartite basis-exchange graph at `b0` and a BFS spanning forest.
    ///
    /// Each component is grown from its smallest unvisited vertex of `b0`;
    /// neighbors are scanned in increasing label order. Forest edges are
    /// returned in discovery order as `(a, b)` with `a` in `b0`.
    pub fn exchange_graph_and_forest(&self, b0: &[usize]) -> Result<(BasisExchangeGraph, Vec<(usize, usize)>)> {
        let mut b0 = b0.to_vec();
        b0.sort_unstable();
        if !self.is_basis(&b0) {
            return Err(Error::NotABasis(b0));
        }
        let m0 = mask_of(&b0);
        let right: Vec<usize> = (0..self.n).filter(|&e| m0 & (1 << e) == 0).collect();
        let mut edges = Vec::new();
        for &a in &b0 {
            for &b in &right {
                if self.index.contains_key(&((m0 & !(1 << a)) | (1 << b))) {
                    edges.push((a, b));
                }
            }
        }
        let graph = BasisExchangeGraph { left: b0.clone(), right, edges };

        let mut visited = vec![false; self.n];
        let mut forest = Vec::new();
        for &start in &b0 {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in graph.neighbors(v) {
                    if !visited[w] {
                        visited[w] = true;
                        forest.push(if m0 & (1 << v) != 0 { (v, w) } else { (w, v) });
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok((graph, forest))
    }

    /// Standard matroids by name.
    ///
    /// Accepted names and labelings:
    /// * `uniform:r,n` (also `uniform(r,n)`, `U(r,n)`)
    /// * `fano`: lines {0,1,2} {0,3,4} {0,5,6} {1,3,5} {1,4,6} {2,3,6} {2,4,5}
    /// * `nonfano`: `fano` without the line {2,4,5}
    /// * `pappus`: points 0,1,2 and 3,4,5 on two lines, 6,7,8 on the Pappus line
    /// * `nonpappus`: `pappus` without the line {6,7,8}
    /// * `vamos`: rank 4 with circuit-hyperplanes the unions of the pairs
    ///   {0,1},{2,3},{4,5},{6,7} other than {4,5,6,7}
    /// * `ag23`: the affine plane over GF(3), point (x, y) labeled 3x + y
    /// * `t8`: columns of [I | J - I] over GF(3), J the 4x4 all-ones matrix
    /// * `example52`: rank 3 on 7 elements with lines {0,1,2} {0,3,4} {0,5,6} {1,4,5} {2,3,5}
    pub fn named(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        if let Some((r, n)) = parse_uniform(&lower) {
            return Self::uniform(r, n);
        }
        let lines = |v: &[[usize; 3]]| -> Vec<Vec<usize>> { v.iter().map(|l| l.to_vec()).collect() };
        const FANO: [[usize; 3]; 7] = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        const PAPPUS: [[usize; 3]; 9] =
            [[0, 1, 2], [3, 4, 5], [0, 4, 6], [1, 3, 6], [0, 5, 7], [2, 3, 7], [1, 5, 8], [2, 4, 8], [6, 7, 8]];
        match lower.as_str() {
            "fano" | "f7" => Self::from_nonbases(7, 3, &lines(&FANO)),
            "nonfano" | "non-fano" | "f7-" => Self::from_nonbases(7, 3, &lines(&FANO[..6])),
            "pappus" => Self::from_nonbases(9, 3, &lines(&PAPPUS)),
            "nonpappus" | "non-pappus" => Self::from_nonbases(9, 3, &lines(&PAPPUS[..8])),
            "vamos" => {
                let pairs = [[0, 1], [2, 3], [4, 5], [6, 7]];
                let mut nonbases = Vec::new();
                for i in 0..4 {
                    for j in i + 1..4 {
                        if (i, j) != (2, 3) {
                            let mut s = pairs[i].to_vec();
                            s.extend_from_slice(&pairs[j]);
                            nonbases.push(s);
                        }
                    }
                }
                Self::from_nonbases(8, 4, &nonbases)
            }
            "ag23" | "ag(2,3)" => {
                let pt = |x: usize, y: usize| 3 * (x % 3) + (y % 3);
                let mut nonbases = Vec::new();
                for (dx, dy) in [(0, 1), (1, 0), (1, 1), (1, 2)] {
                    let mut seen = Vec::new();
                    for x in 0..3 {
                        for y in 0..3 {
                            let mut line: Vec<usize> = (0..3).map(|t| pt(x + t * dx, y + t * dy)).collect();
                            line.sort_unstable();
                            if !seen.contains(&line) {
                                seen.push(line);
                            }
                        }
                    }
                    nonbases.extend(seen);
                }
                Self::from_nonbases(9, 3, &nonbases)
            }
            "t8" => {
                let f = FiniteField::new(3)?;
                let mut cols = Vec::new();
                for j in 0..4 {
                    cols.push((0..4).map(|i| u32::from(i == j)).collect());
                }
                for j in 0..4 {
                    cols.push((0..4).map(|i| u32::from(i != j)).collect());
                }
                Self::from_field_columns(&f, 4, &cols)
            }
            "example52" => Self::from_nonbases(7, 3, &lines(&[[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 4, 5], [2, 3, 5]])),
            _ => Err(Error::UnknownName { kind: "matroid", name: name.to_string() }),
        }
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson { n: self.n, rank: self.rank, bases: Some(self.bases.clone()), nonbases: None }
    }

    pub fn from_json(json: &MatroidJson) -> Result<Self> {
        match (&json.bases, &json.nonbases) {
            (Some(b), None) => Self::from_bases(json.n, json.rank, b.clone()),
            (None, Some(nb)) => Self::from_nonbases(json.n, json.rank, nb),
            _ => Err(Error::InvalidMatroid("exactly one of \"bases\" and \"nonbases\" is required".into())),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: MatroidJson = serde_json::from_str(s)?;
        Self::from_json(&json)
    }
}

fn column_rank(field: &FiniteField, columns: &[Vec<u32>], set: &[usize], rows: usize) -> usize {
    // rank of the selected columns by elimination
    let mut m: Vec<Vec<u32>> = set.iter().map(|&j| columns[j].clone()).collect();
    let mut rank = 0;
    for c in 0..rows {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.inv(m[rank][c]).unwrap();
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = field.mul(m[i][c], inv);
                for k in 0..rows {
                    let t = field.mul(f, m[rank][k]);
                    m[i][k] = field.sub(m[i][k], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn parse_uniform(name: &str) -> Option<(usize, usize)> {
    let rest = name
        .strip_prefix("uniform:")
        .or_else(|| name.strip_prefix("uniform(").and_then(|s| s.strip_suffix(')')))
        .or_else(|| name.strip_prefix("u(").and_then(|s| s.strip_suffix(')')))?;
    let (r, n) = rest.split_once(',')?;
    Some((r.trim().parse().ok()?, n.trim().parse().ok()?))
}

fn build_rank_table(n: usize, bases: &[u32]) -> Vec<u8> {
    let size = 1usize << n;
    let mut indep = vec![false; size];
    for &b in bases {
        indep[b as usize] = true;
    }
    // subsets of independent sets are independent
    for m in (0..size).rev() {
        if indep[m] {
            continue;
        }
        indep[m] = (0..n).any(|e| m & (1 << e) == 0 && indep[m | (1 << e)]);
    }
    let mut rank = vec![0u8; size];
    for m in 1..size {
        rank[m] = if indep[m] {
            m.count_ones() as u8
        } else {
            (0..n).filter(|&e| m & (1 << e) != 0).map(|e| rank[m & !(1 << e)]).max().unwrap_or(0)
        };
    }
    rank
}

/// Bipartite graph between a basis `left` and its complement `right`, with
/// an edge (a, b) whenever `left - a + b` is a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExchangeGraph {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl BasisExchangeGraph {
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let verts: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        let max = verts.iter().max().map_or(0, |&m| m + 1);
        let mut parent: Vec<usize> = (0..max).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut comps = verts.len();
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps
    }
}

/// Matroid input format: `{"n":7,"rank":3,"nonbases":[[0,1,2],...]}` or
/// with `"bases"` instead.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonbases: Option<Vec<Vec<usize>>>,
}
