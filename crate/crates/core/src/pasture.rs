//! Pastures presented by a finitely generated abelian unit group, a sign
//! element and a list of hexagons. The unit group is written additively.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::morphism::sublattice::SublatticeData;
use crate::zlattice::GroupPresentation;

/// Coordinates of a unit in the owning group presentation.
pub type PastureElement = Vec<i64>;

/// An ordered fundamental pair `(x, y)`, meaning `x + y = 1`.
pub type FundamentalPair = (PastureElement, PastureElement);

/// The three rescaled pairs `(x, y)`, `(-x, e + y - x)`, `(-y, e + x - y)`
/// of one 3-term relation, with the head pair canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hexagon {
    pairs: [FundamentalPair; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HexagonType {
    F3,
    D,
    H,
    U,
}

impl fmt::Display for HexagonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HexagonType::F3 => "F3",
            HexagonType::D => "D",
            HexagonType::H => "H",
            HexagonType::U => "U",
        };
        f.write_str(s)
    }
}

fn rescalings(group: &GroupPresentation, eps: &[i64], x: &[i64], y: &[i64]) -> [FundamentalPair; 3] {
    let second = (group.neg(x), group.add(eps, &group.sub(y, x)));
    let third = (group.neg(y), group.add(eps, &group.sub(x, y)));
    [(x.to_vec(), y.to_vec()), second, third]
}

impl Hexagon {
    /// The canonical hexagon through the pair `(x, y)`.
    pub fn closure(group: &GroupPresentation, eps: &[i64], x: &[i64], y: &[i64]) -> Hexagon {
        let (mut x, mut y) = (x.to_vec(), y.to_vec());
        group.reduce(&mut x);
        group.reduce(&mut y);
        let head = rescalings(group, eps, &x, &y)
            .into_iter()
            .flat_map(|(a, b)| [(a.clone(), b.clone()), (b, a)])
            .min()
            .unwrap();
        Hexagon { pairs: rescalings(group, eps, &head.0, &head.1) }
    }

    pub fn pairs(&self) -> &[FundamentalPair; 3] {
        &self.pairs
    }

    pub fn head(&self) -> &FundamentalPair {
        &self.pairs[0]
    }

    /// All six oriented pairs of the class, with repetitions.
    pub fn oriented_pairs(&self) -> impl Iterator<Item = FundamentalPair> + '_ {
        self.pairs.iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
    }

    pub fn distinct_elements(&self) -> Vec<PastureElement> {
        let set: BTreeSet<&PastureElement> = self.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        set.into_iter().cloned().collect()
    }

    pub fn hexagon_type(&self) -> HexagonType {
        let distinct = self.distinct_elements().len();
        let equal_pairs = self.pairs.iter().filter(|(a, b)| a == b).count();
        if distinct == 1 {
            HexagonType::F3
        } else if equal_pairs == 1 {
            HexagonType::D
        } else if distinct == 2 {
            HexagonType::H
        } else {
            HexagonType::U
        }
    }
}

/// A finitely presented pasture.
#[derive(Clone, Debug)]
pub struct Pasture {
    group: GroupPresentation,
    epsilon: PastureElement,
    hexagons: Vec<Hexagon>,
    fundamental: Vec<PastureElement>,
    pairs: HashSet<FundamentalPair>,
    partners: BTreeMap<PastureElement, Vec<PastureElement>>,
    pub(crate) sublattice: OnceLock<Option<SublatticeData>>,
}

impl PartialEq for Pasture {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.epsilon == other.epsilon && self.hexagons == other.hexagons
    }
}

impl Eq for Pasture {}

impl Pasture {
    /// Builds a pasture from hexagon head pairs. Hexagons are canonicalized,
    /// deduplicated and sorted.
    pub fn new(
        group: GroupPresentation,
        epsilon: PastureElement,
        pairs: impl IntoIterator<Item = FundamentalPair>,
    ) -> Result<Self> {
        let dim = group.dim();
        let mut epsilon = epsilon;
        if epsilon.len() != dim {
            return Err(Error::InvalidPasture(format!("epsilon has length {}, expected {dim}", epsilon.len())));
        }
        group.reduce(&mut epsilon);
        if !group.is_zero(&group.scale(2, &epsilon)) {
            return Err(Error::InvalidPasture("epsilon does not square to 1".into()));
        }
        let mut hexagons = Vec::new();
        for (x, y) in pairs {
            if x.len() != dim || y.len() != dim {
                return Err(Error::InvalidPasture(format!("pair ({x:?}, {y:?}) does not have length {dim}")));
            }
            hexagons.push(Hexagon::closure(&group, &epsilon, &x, &y));
        }
        hexagons.sort();
        hexagons.dedup();

        let pairs: HashSet<FundamentalPair> = hexagons.iter().flat_map(|h| h.oriented_pairs()).collect();
        let mut partners: BTreeMap<PastureElement, Vec<PastureElement>> = BTreeMap::new();
        for (x, y) in &pairs {
            partners.entry(x.clone()).or_default().push(y.clone());
        }
        for list in partners.values_mut() {
            list.sort();
            list.dedup();
        }
        let fundamental = partners.keys().cloned().collect();
        Ok(Pasture { group, epsilon, hexagons, fundamental, pairs, partners, sublattice: OnceLock::new() })
    }

    /// The finite field GF(q), in discrete-log coordinates of its fixed
    /// primitive element.
    pub fn gf(q: u64) -> Result<Self> {
        let field = FiniteField::new(q)?;
        Ok(Self::from_field(&field))
    }

    pub fn from_field(field: &FiniteField) -> Self {
        let q = field.order();
        if q == 2 {
            return Self::new(GroupPresentation::trivial(), vec![], []).unwrap();
        }
        let n = (q - 1) as i64;
        let group = GroupPresentation::cyclic(n);
        let eps = if q % 2 == 1 { n / 2 } else { 0 };
        let pairs = (2..q).map(|beta| {
            let other = field.sub(1, beta);
            (vec![field.log(beta).unwrap() as i64], vec![field.log(other).unwrap() as i64])
        });
        Self::new(group, vec![eps], pairs).unwrap()
    }

    /// Built-in pastures: `F1pm`, `krasner`, `sign`, `U`, `D`, `H`, `F3`, `P0`.
    pub fn builtin(name: &str) -> Result<Self> {
        let g = |inv: Vec<i64>, free: usize| GroupPresentation::new(inv, free).unwrap();
        match name.trim().to_ascii_lowercase().as_str() {
            "f1pm" | "f1" => Self::new(g(vec![2], 0), vec![1], []),
            "krasner" | "k" => Self::new(GroupPresentation::trivial(), vec![], [(vec![], vec![])]),
            "sign" | "s" => Self::new(g(vec![2], 0), vec![1], [(vec![0], vec![0])]),
            "u" => Self::new(g(vec![2], 2), vec![1, 0, 0], [(vec![0, 1, 0], vec![0, 0, 1])]),
            "d" => Self::new(g(vec![2], 1), vec![1, 0], [(vec![0, 1], vec![0, 1])]),
            "h" => Self::new(g(vec![6], 0), vec![3], [(vec![1], vec![5])]),
            "f3" => Self::gf(3),
            "p0" => Self::new(
                g(vec![2], 4),
                vec![1, 0, 0, 0, 0],
                [
                    (vec![0, 1, 0, 0, 0], vec![0, 0, 1, 0, 0]),
                    (vec![0, 1, 0, 0, 0], vec![0, 0, 0, 1, 0]),
                    (vec![0, 0, 1, -1, 0], vec![0, 0, 0, 0, 1]),
                ],
            ),
            _ => Err(Error::UnknownName { kind: "pasture", name: name.to_string() }),
        }
    }

    pub fn group(&self) -> &GroupPresentation {
        &self.group
    }

    pub fn epsilon(&self) -> &PastureElement {
        &self.epsilon
    }

    pub fn hexagons(&self) -> &[Hexagon] {
        &self.hexagons
    }

    pub fn hexagon_types(&self) -> Vec<HexagonType> {
        self.hexagons.iter().map(Hexagon::hexagon_type).collect()
    }

    /// Fundamental elements in increasing coordinate order.
    pub fn fundamental_elements(&self) -> &[PastureElement] {
        &self.fundamental
    }

    pub fn is_fundamental(&self, x: &[i64]) -> bool {
        self.partners.contains_key(x)
    }

    pub fn partners_of(&self, x: &[i64]) -> &[PastureElement] {
        self.partners.get(x).map_or(&[], Vec::as_slice)
    }

    /// Whether `(x, y)` is a fundamental pair, in either orientation.
    pub fn is_fundamental_pair(&self, x: &[i64], y: &[i64]) -> bool {
        // avoids allocating when x is not fundamental
        self.partners.get(x).is_some_and(|ys| ys.binary_search_by(|p| p.as_slice().cmp(y)).is_ok())
    }

    /// Number of distinct oriented fundamental pairs.
    pub fn fundamental_pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_slim(&self) -> bool {
        self.partners.values().all(|p| p.len() == 1)
    }

    pub fn hexagon_closure(&self, x: &[i64], y: &[i64]) -> Hexagon {
        Hexagon::closure(&self.group, &self.epsilon, x, y)
    }

    /// Whether the identity is a fundamental element.
    pub fn one_is_fundamental(&self) -> bool {
        self.is_fundamental(&self.group.zero())
    }

    /// Whether `x + y + z = 0` lies in the nullset, `None` standing for zero.
    pub fn in_nullset(&self, terms: [Option<&[i64]>; 3]) -> bool {
        let present: Vec<&[i64]> = terms.iter().flatten().copied().collect();
        match present.as_slice() {
            [] => true,
            [_] => false,
            [a, b] => self.group.add(&self.epsilon, a).as_slice() == *b,
            [a, b, c] => {
                // a + b + c = 0  <=>  (e a / c) + (e b / c) = 1
                let x = self.group.add(&self.epsilon, &self.group.sub(a, c));
                let y = self.group.add(&self.epsilon, &self.group.sub(b, c));
                self.is_fundamental_pair(&x, &y)
            }
            _ => unreachable!(),
        }
    }

    pub fn to_json(&self) -> PastureJson {
        PastureJson {
            invariants: self.group.invariants().to_vec(),
            free_rank: self.group.free_rank(),
            epsilon: self.epsilon.clone(),
            hexagons: self.hexagons.iter().map(|h| [h.head().0.clone(), h.head().1.clone()]).collect(),
        }
    }

    pub fn from_json(json: &PastureJson) -> Result<Self> {
        let group = GroupPresentation::new(json.invariants.clone(), json.free_rank).map_err(Error::InvalidPasture)?;
        Self::new(group, json.epsilon.clone(), json.hexagons.iter().map(|[x, y]| (x.clone(), y.clone())))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: PastureJson = serde_json::from_str(s)?;
        Self::from_json(&json)
    }

    /// One-line summary such as `ℤ/2 ⊕ ℤ³, 3 hexagons (U,U,U)`.
    pub fn summary(&self) -> String {
        let n = self.hexagons.len();
        let types: Vec<String> = self.hexagon_types().iter().map(ToString::to_string).collect();
        format!("{}, {n} hexagon{} ({})", self.group, if n == 1 { "" } else { "s" }, types.join(","))
    }
}

/// Pasture exchange format; hexagons are given by one pair each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PastureJson {
    pub invariants: Vec<i64>,
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
    pub epsilon: Vec<i64>,
    pub hexagons: Vec<[Vec<i64>; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(x: i64) -> PastureElement {
        vec![x]
    }

    #[test]
    fn closure_identities_on_builtins() {
        for name in ["f1pm", "krasner", "sign", "U", "D", "H", "F3", "P0"] {
            let p = Pasture::builtin(name).unwrap();
            let (g, e) = (p.group(), p.epsilon());
            assert!(g.is_zero(&g.scale(2, e)));
            for h in p.hexagons() {
                let [(x, y), (u, v), (s, t)] = h.pairs();
                assert_eq!(u, &g.neg(x));
                assert_eq!(v, &g.add(e, &g.sub(y, x)));
                assert_eq!(s, &g.neg(y));
                assert_eq!(t, &g.add(e, &g.sub(x, y)));
            }
        }
    }

    #[test]
    fn fundamental_elements_of_small_pastures() {
        let f1 = Pasture::builtin("F1pm").unwrap();
        assert!(f1.fundamental_elements().is_empty());
        let k = Pasture::builtin("krasner").unwrap();
        assert_eq!(k.fundamental_elements(), &[Vec::<i64>::new()]);
        assert_eq!(k.partners_of(&[]), &[Vec::<i64>::new()]);
        let gf5 = Pasture::gf(5).unwrap();
        // logs base 2 of 2, 3, 4 are 1, 3, 2
        assert_eq!(gf5.fundamental_elements(), &[elem(1), elem(2), elem(3)]);
        assert!(gf5.partners_of(&[1]).contains(&elem(2)));
    }

    #[test]
    fn gf5_presentation() {
        let p = Pasture::gf(5).unwrap();
        assert_eq!(p.epsilon(), &elem(2));
        assert_eq!(p.hexagons().len(), 1);
        let h = &p.hexagons()[0];
        assert_eq!(h.pairs(), &[(elem(1), elem(2)), (elem(3), elem(3)), (elem(2), elem(1))]);
        assert_eq!(h.hexagon_type(), HexagonType::D);
    }

    #[test]
    fn hexagon_types() {
        assert_eq!(Pasture::builtin("krasner").unwrap().hexagon_types(), vec![HexagonType::F3]);
        assert_eq!(Pasture::builtin("sign").unwrap().hexagon_types(), vec![HexagonType::D]);
        assert_eq!(Pasture::builtin("D").unwrap().hexagon_types(), vec![HexagonType::D]);
        assert_eq!(Pasture::builtin("H").unwrap().hexagon_types(), vec![HexagonType::H]);
        assert_eq!(Pasture::builtin("U").unwrap().hexagon_types(), vec![HexagonType::U]);
        assert_eq!(Pasture::builtin("F3").unwrap().hexagon_types(), vec![HexagonType::F3]);
        assert_eq!(Pasture::builtin("P0").unwrap().hexagon_types(), vec![HexagonType::U; 3]);
        assert_eq!(Pasture::gf(8).unwrap().hexagon_types(), vec![HexagonType::U]);
        assert_eq!(Pasture::builtin("H").unwrap().group().order(), Some(6));
        assert_eq!(Pasture::builtin("sign").unwrap().group().order(), Some(2));
    }

    #[test]
    fn gf2_and_slimness() {
        let gf2 = Pasture::gf(2).unwrap();
        assert_eq!(gf2.group().dim(), 0);
        assert!(gf2.hexagons().is_empty());
        for q in [3, 4, 5, 7, 8, 9, 16, 25] {
            assert!(Pasture::gf(q).unwrap().is_slim(), "GF({q})");
        }
        assert!(!Pasture::builtin("sign").unwrap().is_slim());
        assert!(Pasture::builtin("krasner").unwrap().is_slim());
    }

    #[test]
    fn closure_is_orientation_free() {
        let p = Pasture::gf(7).unwrap();
        let f = FiniteField::new(7).unwrap();
        for beta in 2..7 {
            let (a, b) = (f.log(beta).unwrap() as i64, f.log(f.sub(1, beta)).unwrap() as i64);
            assert_eq!(p.hexagon_closure(&[a], &[b]), p.hexagon_closure(&[b], &[a]));
        }
        let u = Pasture::builtin("U").unwrap();
        let h = &u.hexagons()[0];
        assert_eq!(h.distinct_elements().len(), 6);
    }

    #[test]
    fn partner_symmetry() {
        for p in [Pasture::builtin("P0").unwrap(), Pasture::gf(9).unwrap(), Pasture::builtin("sign").unwrap()] {
            for x in p.fundamental_elements() {
                for y in p.partners_of(x) {
                    assert!(p.partners_of(y).contains(x));
                }
            }
        }
    }

    #[test]
    fn nullset_membership() {
        let p = Pasture::gf(5).unwrap();
        // 2 + 4 - 1 = 0 in GF(5): logs 1, 2 and -1 has log 2
        assert!(p.in_nullset([Some(&[1]), Some(&[2]), Some(&[2])]));
        assert!(!p.in_nullset([Some(&[0]), Some(&[0]), Some(&[0])]));
        // 1 + (-1) = 0
        assert!(p.in_nullset([Some(&[0]), None, Some(&[2])]));
        assert!(!p.in_nullset([Some(&[0]), None, None]));
        assert!(p.in_nullset([None, None, None]));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = Pasture::builtin("P0").unwrap();
        let s = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(Pasture::from_json_str(&s).unwrap(), p);
        assert!(Pasture::from_json_str(r#"{"invariants":[4],"freeRank":0,"epsilon":[1],"hexagons":[]}"#).is_err());
        assert!(Pasture::from_json_str(r#"{"invariants":[2],"freeRank":0,"epsilon":[1,0],"hexagons":[]}"#).is_err());
        assert!(Pasture::from_json_str("{").unwrap_err().is_parse_error());
        assert_eq!(p.summary(), "ℤ/2 ⊕ ℤ⁴, 3 hexagons (U,U,U)");
    }
}
