//! A full-rank sublattice of the free part of a pasture's unit group, spanned
//! by fundamental elements, together with the rule pairs and type-4 checks
//! that drive the morphism search.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::pasture::{FundamentalPair, Pasture, PastureElement};
use crate::zlattice::{integer_kernel, is_surjective, IntMatrix};

/// How a pair `(u, v)` of free-part vectors relates to a lattice `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairType {
    /// Exactly one of `u`, `v` lies in `L`; `first_dependent` says which.
    One { first_dependent: bool },
    /// Each raises the rank by one, together also by one.
    Two,
    /// Together they raise the rank by two.
    Three,
    /// Both lie in `L` up to rational multiples.
    Four,
}

/// Classifies `(u, v)` against the lattice spanned by `lattice` using exact
/// integer ranks.
pub fn pair_type(lattice: &[Vec<i64>], u: &[i64], v: &[i64]) -> PairType {
    let dim = u.len();
    let rank_with = |extra: &[&[i64]]| -> usize {
        let mut cols: Vec<Vec<i64>> = lattice.to_vec();
        cols.extend(extra.iter().map(|c| c.to_vec()));
        if cols.is_empty() {
            return 0;
        }
        IntMatrix::from_columns(dim, &cols).rank()
    };
    let n = rank_with(&[]);
    let (ru, rv) = (rank_with(&[u]), rank_with(&[v]));
    match (ru == n, rv == n) {
        (true, true) => PairType::Four,
        (true, false) => PairType::One { first_dependent: true },
        (false, true) => PairType::One { first_dependent: false },
        (false, false) => {
            if rank_with(&[u, v]) == n + 1 {
                PairType::Two
            } else {
                PairType::Three
            }
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rational span of integer vectors in echelon form, fraction-free.
#[derive(Clone, Debug, Default)]
pub(crate) struct Span {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Span {
    fn reduce(&self, v: &[i64]) -> Vec<i128> {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, b) in &self.rows {
            if v[*p] == 0 {
                continue;
            }
            let (a, c) = (b[*p], v[*p]);
            let mut g = 0;
            for (x, y) in v.iter_mut().zip(b) {
                *x = a * *x - c * y;
                g = gcd(g, *x);
            }
            if g > 1 {
                v.iter_mut().for_each(|x| *x /= g);
            }
        }
        v
    }

    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`, returning whether the rank grew.
    pub(crate) fn insert(&mut self, v: &[i64]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// How the image of one sublattice generator is constrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Second member `v` of a pair `(u, v)` with `u` dependent:
    /// `tau = c_last * u + sum c_i x_i` is torsion, `coeffs` has one entry
    /// per earlier generator plus the last one for `u`.
    Dependent { tau: PastureElement, coeffs: Vec<i64> },
    /// First member `u` of a pair `(u, v)` where `v` depends on the earlier
    /// generators and `u`: `tau = c_u * u + c_v * v + sum c_i x_i`, `coeffs`
    /// ends with the entries for `u` and `v`.
    Paired { tau: PastureElement, coeffs: Vec<i64> },
    /// First member of an independent pair.
    FreeFirst,
    /// Second member of an independent pair, a partner of the previous image.
    FreeSecond,
}

/// `c0 * u = sum c_i x_i` on free parts, with `tau = c0 * u - sum c_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependence {
    pub c0: i64,
    pub coeffs: Vec<i64>,
    pub tau: PastureElement,
}

/// A fundamental pair that has become dependent on the generators so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeFourCheck {
    pub pair: FundamentalPair,
    pub u: Dependence,
    pub v: Dependence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeData {
    /// Generators `x_1, ..., x_r`.
    pub elements: Vec<PastureElement>,
    /// One rule per generator.
    pub rules: Vec<Rule>,
    /// Checks that first apply once the `l`-th generator has an image.
    pub checks: Vec<Vec<TypeFourCheck>>,
    /// Number of pairs of each type used: type 1, 2, 3 and recorded type-4 checks.
    pub counts: [usize; 4],
}

impl SublatticeData {
    pub fn free_rank(&self) -> usize {
        self.elements.len()
    }
}

fn free_part<'a>(p: &Pasture, x: &'a [i64]) -> &'a [i64] {
    &x[p.group().torsion_rank()..]
}

/// Primitive integer kernel vector of the columns, which must have a
/// one-dimensional kernel.
fn kernel_line(dim: usize, cols: &[&[i64]]) -> Vec<i64> {
    let owned: Vec<Vec<i64>> = cols.iter().map(|c| c.to_vec()).collect();
    let kernel = integer_kernel(&IntMatrix::from_columns(dim, &owned));
    assert_eq!(kernel.len(), 1, "expected a one-dimensional relation");
    let mut k = kernel[0].clone();
    let g = k.iter().fold(num_bigint::BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if !g.is_zero() {
        k.iter_mut().for_each(|x| *x /= &g);
    }
    if k.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        k.iter_mut().for_each(|x| *x = -x.clone());
    }
    k.iter().map(|x| x.to_i64().expect("relation coefficient exceeds i64")).collect()
}

/// `sum coeffs_i * elems_i` in the group of `p`.
fn combination(p: &Pasture, coeffs: &[i64], elems: &[&[i64]]) -> PastureElement {
    let g = p.group();
    let mut acc = g.zero();
    for (&c, e) in coeffs.iter().zip(elems) {
        for (a, &b) in acc.iter_mut().zip(e.iter()) {
            *a += c * b;
        }
        g.reduce(&mut acc);
    }
    acc
}

fn dependence(p: &Pasture, xs: &[PastureElement], u: &[i64]) -> Dependence {
    let dim = p.group().free_rank();
    let mut cols: Vec<&[i64]> = xs.iter().map(|x| free_part(p, x)).collect();
    cols.push(free_part(p, u));
    let k = if dim == 0 {
        // everything is torsion
        let mut k = vec![0; xs.len()];
        k.push(1);
        k
    } else {
        kernel_line(dim, &cols)
    };
    let (&ku, rest) = k.split_last().unwrap();
    let sign = if ku < 0 { -1 } else { 1 };
    let c0 = sign * ku;
    let coeffs: Vec<i64> = rest.iter().map(|&c| -sign * c).collect();
    let mut all: Vec<&[i64]> = vec![u];
    all.extend(xs.iter().map(Vec::as_slice));
    let mut signed = vec![c0];
    signed.extend(coeffs.iter().map(|&c| -c));
    let tau = combination(p, &signed, &all);
    Dependence { c0, coeffs, tau }
}

/// Whether `FE(P)` together with the sign generates the unit group.
pub fn generated_by_fundamental_elements(p: &Pasture) -> bool {
    let g = p.group();
    if g.dim() == 0 {
        return true;
    }
    let mut cols: Vec<Vec<i64>> = p.fundamental_elements().to_vec();
    cols.push(p.epsilon().clone());
    is_surjective(&IntMatrix::from_columns(g.dim(), &cols), g)
}

/// Runs the sublattice construction; `None` if the fundamental elements and
/// the sign do not generate the unit group.
pub(crate) fn compute(p: &Pasture) -> Option<SublatticeData> {
    if !generated_by_fundamental_elements(p) {
        return None;
    }
    let r = p.group().free_rank();
    let mut span = Span::default();
    let mut elements: Vec<PastureElement> = Vec::new();
    let mut rules = Vec::new();
    let mut checks: Vec<Vec<TypeFourCheck>> = Vec::new();
    let mut counts = [0usize; 4];
    let mut pending: Vec<FundamentalPair> = p.hexagons().iter().map(|h| h.head().clone()).collect();

    // scan order: hexagons, their three pairs, both orientations
    let scan: Vec<FundamentalPair> = p
        .hexagons()
        .iter()
        .flat_map(|h| h.pairs().iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())]))
        .collect();

    while span.rank() < r {
        let member = |x: &PastureElement| span.contains(free_part(p, x));
        let type1 = scan.iter().find(|(u, v)| member(u) && !member(v));
        if let Some((u, v)) = type1 {
            let mut cols: Vec<&[i64]> = elements.iter().map(|x| free_part(p, x)).collect();
            cols.push(free_part(p, u));
            let coeffs = kernel_line(r, &cols);
            let mut elems: Vec<&[i64]> = elements.iter().map(Vec::as_slice).collect();
            elems.push(u);
            let tau = combination(p, &coeffs, &elems);
            span.insert(free_part(p, v));
            elements.push(v.clone());
            rules.push(Rule::Dependent { tau, coeffs });
            counts[0] += 1;
        } else {
            let type2 = scan.iter().find(|(u, v)| {
                if member(u) || member(v) {
                    return false;
                }
                let mut s = span.clone();
                s.insert(free_part(p, u));
                s.contains(free_part(p, v))
            });
            if let Some((u, v)) = type2 {
                let mut cols: Vec<&[i64]> = elements.iter().map(|x| free_part(p, x)).collect();
                cols.push(free_part(p, u));
                cols.push(free_part(p, v));
                let coeffs = kernel_line(r, &cols);
                let mut elems: Vec<&[i64]> = elements.iter().map(Vec::as_slice).collect();
                elems.push(u);
                elems.push(v);
                let tau = combination(p, &coeffs, &elems);
                span.insert(free_part(p, u));
                elements.push(u.clone());
                rules.push(Rule::Paired { tau, coeffs });
                counts[1] += 1;
            } else {
                // the independent pair whose span absorbs the most fundamental elements
                let absorbed = |(u, v): &FundamentalPair| {
                    let mut s = span.clone();
                    s.insert(free_part(p, u));
                    s.insert(free_part(p, v));
                    p.fundamental_elements().iter().filter(|x| s.contains(free_part(p, x))).count()
                };
                let mut best: Option<(usize, &FundamentalPair)> = None;
                for pair in scan.iter().filter(|(u, v)| !member(u) && !member(v)) {
                    let k = absorbed(pair);
                    if best.is_none_or(|(b, _)| k > b) {
                        best = Some((k, pair));
                    }
                }
                let (u, v) = best?.1.clone();
                span.insert(free_part(p, &u));
                span.insert(free_part(p, &v));
                elements.push(u);
                rules.push(Rule::FreeFirst);
                checks.push(Vec::new());
                elements.push(v);
                rules.push(Rule::FreeSecond);
                counts[2] += 1;
            }
        }
        let (now, later): (Vec<_>, Vec<_>) =
            pending.into_iter().partition(|(u, v)| span.contains(free_part(p, u)) && span.contains(free_part(p, v)));
        pending = later;
        let level: Vec<TypeFourCheck> = now
            .into_iter()
            .map(|(u, v)| TypeFourCheck {
                u: dependence(p, &elements, &u),
                v: dependence(p, &elements, &v),
                pair: (u, v),
            })
            .collect();
        counts[3] += level.len();
        checks.push(level);
    }
    debug_assert_eq!(rules.len(), r);
    debug_assert_eq!(checks.len(), r);
    Some(SublatticeData { elements, rules, checks, counts })
}
