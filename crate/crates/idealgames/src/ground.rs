//! Ground sets, their elements, finite windows onto them and the text formats
//! for finite subsets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clopen::{self, ClopenSet};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundKind {
    Naturals,
    Pairs,
    LowerTriangle,
    EdgeSet,
    Rationals01,
    Omega,
}

impl fmt::Display for GroundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroundKind::Naturals => "naturals",
            GroundKind::Pairs => "pairs",
            GroundKind::LowerTriangle => "lower_triangle",
            GroundKind::EdgeSet => "edge_set",
            GroundKind::Rationals01 => "rationals_01",
            GroundKind::Omega => "omega",
        };
        f.write_str(s)
    }
}

/// One element of some ground set. `Pair` serves pairs, lower-triangle points and edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Nat(u64),
    Pair(u64, u64),
    Rat(Rational),
    Clopen(Arc<ClopenSet>),
}

impl Elem {
    pub fn clopen(u: ClopenSet) -> Self {
        Elem::Clopen(Arc::new(u))
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Elem::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(u64, u64)> {
        match self {
            Elem::Pair(a, b) => Some((*a, *b)),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<Rational> {
        match self {
            Elem::Rat(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_clopen(&self) -> Option<&ClopenSet> {
        match self {
            Elem::Clopen(u) => Some(u),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Pair(a, b) => write!(f, "{a} {b}"),
            Elem::Rat(r) => write!(f, "{r}"),
            Elem::Clopen(u) => write!(f, "{u}"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Elem::Nat(n) => s.serialize_u64(*n),
            Elem::Pair(a, b) => (a, b).serialize(s),
            Elem::Rat(r) => s.collect_str(&format_args!("{}/{}", r.numer(), r.denom())),
            Elem::Clopen(u) => u.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ElemVisitor;

        impl<'de> Visitor<'de> for ElemVisitor {
            type Value = Elem;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a natural, a pair [a, b], a rational \"p/q\" or a clopen \"g1,g2\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Elem, E> {
                Ok(Elem::Nat(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Elem, E> {
                u64::try_from(v).map(Elem::Nat).map_err(|_| E::custom("negative natural"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Elem, E> {
                if v.contains('/') {
                    parse_rational(v).map(Elem::Rat).map_err(E::custom)
                } else {
                    v.parse::<ClopenSet>().map(Elem::clopen).map_err(E::custom)
                }
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Elem, A::Error> {
                let a = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let b = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<u64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Elem::Pair(a, b))
            }
        }

        d.deserialize_any(ElemVisitor)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let (p, q) = s
        .trim()
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("rational {s:?} is not p/q")))?;
    let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// A ground set together with the way its finite windows grow.
///
/// For `Rationals01` the window parameter is a dyadic depth `d`, giving
/// `{k/2^d : 0 < k < 2^d}`; for every other kind it is a bound `w` on the
/// coordinates. `Omega(l)` is the fixed slice `enum_omega(l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ground {
    Naturals,
    Pairs,
    LowerTriangle,
    EdgeSet,
    Rationals01,
    Omega { depth: usize },
}

/// Largest dyadic depth a rationals window may reach.
pub const RATIONAL_DEPTH_CAP: u64 = 40;

impl Ground {
    pub fn kind(&self) -> GroundKind {
        match self {
            Ground::Naturals => GroundKind::Naturals,
            Ground::Pairs => GroundKind::Pairs,
            Ground::LowerTriangle => GroundKind::LowerTriangle,
            Ground::EdgeSet => GroundKind::EdgeSet,
            Ground::Rationals01 => GroundKind::Rationals01,
            Ground::Omega { .. } => GroundKind::Omega,
        }
    }

    /// Whether the ground is infinite, so that elements beyond any window exist.
    pub fn has_tail(&self) -> bool {
        !matches!(self, Ground::Omega { .. })
    }

    pub fn default_window(&self) -> u64 {
        match self {
            Ground::Naturals => 16,
            Ground::Pairs | Ground::LowerTriangle | Ground::EdgeSet => 8,
            Ground::Rationals01 => 4,
            Ground::Omega { .. } => 0,
        }
    }

    /// The next window parameter, or `None` when the ground cannot grow.
    pub fn grow(&self, w: u64) -> Option<u64> {
        match self {
            Ground::Omega { .. } => None,
            Ground::Rationals01 => (w < RATIONAL_DEPTH_CAP).then_some(w + 1),
            _ => w.checked_mul(2).map(|x| x.max(1)),
        }
    }

    /// All elements of the window, sorted.
    pub fn window(&self, w: u64) -> Result<Vec<Elem>> {
        Ok(match self {
            Ground::Naturals => (0..w).map(Elem::Nat).collect(),
            Ground::Pairs => (0..w).flat_map(|a| (0..w).map(move |b| Elem::Pair(a, b))).collect(),
            Ground::LowerTriangle => (0..w).flat_map(|n| (0..=n).map(move |m| Elem::Pair(n, m))).collect(),
            Ground::EdgeSet => (0..w).flat_map(|a| (a + 1..w).map(move |b| Elem::Pair(a, b))).collect(),
            Ground::Rationals01 => {
                if w > RATIONAL_DEPTH_CAP {
                    return Err(Error::CapExceeded {
                        what: "rational window depth".into(),
                        size: w as usize,
                        cap: RATIONAL_DEPTH_CAP as usize,
                    });
                }
                let den = 1i64 << w;
                (1..den).map(|k| Elem::Rat(Rational::new(k, den))).collect()
            }
            Ground::Omega { depth } => clopen::enum_omega(*depth)?.into_iter().map(Elem::clopen).collect(),
        })
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (Ground::Naturals, Elem::Nat(_)) => true,
            (Ground::Pairs, Elem::Pair(..)) => true,
            (Ground::LowerTriangle, Elem::Pair(n, m)) => m <= n,
            (Ground::EdgeSet, Elem::Pair(a, b)) => a < b,
            (Ground::Rationals01, Elem::Rat(r)) => *r > Rational::new(0, 1) && *r < Rational::new(1, 1),
            (Ground::Omega { depth }, Elem::Clopen(u)) => {
                u.depth() <= *depth && u.measure() == clopen::DyadicRational::new(1, 1)
            }
            _ => false,
        }
    }

    /// Whether `e` lies in the window with parameter `w`.
    pub fn in_window(&self, e: &Elem, w: u64) -> bool {
        if !self.contains(e) {
            return false;
        }
        match e {
            Elem::Nat(n) => *n < w,
            Elem::Pair(a, b) => *a < w && *b < w,
            Elem::Rat(r) => {
                let den = *r.denom() as u64;
                den.is_power_of_two() && den.trailing_zeros() as u64 <= w
            }
            Elem::Clopen(_) => true,
        }
    }

    pub fn parse_elem(&self, line: &str) -> Result<Elem> {
        let t = line.trim();
        let e = match self.kind() {
            GroundKind::Naturals => Elem::Nat(parse_nat(t)?),
            GroundKind::Pairs | GroundKind::LowerTriangle | GroundKind::EdgeSet => {
                let mut it = t.split_whitespace();
                let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::Parse(format!("expected two naturals, got {t:?}")));
                };
                Elem::Pair(parse_nat(a)?, parse_nat(b)?)
            }
            GroundKind::Rationals01 => Elem::Rat(parse_rational(t)?),
            GroundKind::Omega => Elem::clopen(t.parse()?),
        };
        if !self.contains(&e) {
            return Err(Error::Invalid(format!("{t:?} is not an element of {}", self.kind())));
        }
        Ok(e)
    }
}

fn parse_nat(s: &str) -> Result<u64> {
    s.parse().map_err(|_| Error::Parse(format!("bad natural {s:?}")))
}

/// A finite subset of a ground set, sorted and without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSubset {
    pub ground: Ground,
    pub elems: Vec<Elem>,
}

impl FiniteSubset {
    pub fn new(ground: Ground, elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let set: BTreeSet<Elem> = elems.into_iter().collect();
        if let Some(bad) = set.iter().find(|e| !ground.contains(e)) {
            return Err(Error::Invalid(format!("{bad} is not an element of {}", ground.kind())));
        }
        Ok(FiniteSubset { ground, elems: set.into_iter().collect() })
    }

    /// One element per line; blank lines and `#` comments are skipped.
    /// Clopen lines may be empty only when written as `{}`.
    pub fn parse(ground: Ground, text: &str) -> Result<Self> {
        let mut elems = Vec::new();
        for line in text.lines() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let t = if t == "{}" { "" } else { t };
            elems.push(ground.parse_elem(t)?);
        }
        FiniteSubset::new(ground, elems)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn naturals(&self) -> Result<Vec<u64>> {
        self.expect(GroundKind::Naturals)?;
        Ok(self.elems.iter().filter_map(Elem::as_nat).collect())
    }

    pub fn pairs(&self, kind: GroundKind) -> Result<Vec<(u64, u64)>> {
        self.expect(kind)?;
        Ok(self.elems.iter().filter_map(Elem::as_pair).collect())
    }

    pub fn rationals(&self) -> Result<Vec<Rational>> {
        self.expect(GroundKind::Rationals01)?;
        Ok(self.elems.iter().filter_map(Elem::as_rat).collect())
    }

    pub fn clopens(&self) -> Result<Vec<ClopenSet>> {
        self.expect(GroundKind::Omega)?;
        Ok(self.elems.iter().filter_map(|e| e.as_clopen().cloned()).collect())
    }

    fn expect(&self, kind: GroundKind) -> Result<()> {
        if self.ground.kind() == kind {
            Ok(())
        } else {
            Err(Error::WrongGround { expected: kind.to_string(), got: self.ground.kind().to_string() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(Ground::Naturals.window(3).unwrap(), vec![Elem::Nat(0), Elem::Nat(1), Elem::Nat(2)]);
        assert_eq!(Ground::Pairs.window(2).unwrap().len(), 4);
        assert_eq!(Ground::LowerTriangle.window(3).unwrap().len(), 6);
        assert_eq!(Ground::EdgeSet.window(4).unwrap().len(), 6);
        let q = Ground::Rationals01.window(2).unwrap();
        assert_eq!(q, vec![Elem::Rat(Rational::new(1, 4)), Elem::Rat(Rational::new(1, 2)), Elem::Rat(Rational::new(3, 4))]);
        assert_eq!(Ground::Omega { depth: 2 }.window(0).unwrap().len(), 6);
    }

    #[test]
    fn windows_are_sorted_and_nested() {
        for g in [Ground::Naturals, Ground::Pairs, Ground::LowerTriangle, Ground::EdgeSet, Ground::Rationals01] {
            let w = g.default_window();
            let small = g.window(w).unwrap();
            let big = g.window(g.grow(w).unwrap()).unwrap();
            assert!(small.windows(2).all(|p| p[0] < p[1]));
            let bigset: BTreeSet<_> = big.iter().collect();
            assert!(small.iter().all(|e| bigset.contains(e) && g.in_window(e, w)));
            assert!(big.len() > small.len());
        }
        assert_eq!(Ground::Omega { depth: 1 }.grow(0), None);
    }

    #[test]
    fn parse_files() {
        let s = FiniteSubset::parse(Ground::Pairs, "0 0\n0 1\n# c\n\n1 0\n0 1\n").unwrap();
        assert_eq!(s.pairs(GroundKind::Pairs).unwrap(), vec![(0, 0), (0, 1), (1, 0)]);
        assert!(FiniteSubset::parse(Ground::LowerTriangle, "0 1\n").is_err());
        assert!(FiniteSubset::parse(Ground::EdgeSet, "1 1\n").is_err());
        assert!(FiniteSubset::parse(Ground::Rationals01, "3/2\n").is_err());
        let r = FiniteSubset::parse(Ground::Rationals01, "1/4\n2/4\n").unwrap();
        assert_eq!(r.rationals().unwrap(), vec![Rational::new(1, 4), Rational::new(1, 2)]);
        let c = FiniteSubset::parse(Ground::Omega { depth: 2 }, "0\n01,10\n").unwrap();
        assert_eq!(c.len(), 2);
        assert!(FiniteSubset::parse(Ground::Omega { depth: 2 }, "011\n").is_err());
        assert!(c.naturals().is_err());
    }

    #[test]
    fn elem_json_round_trip() {
        let es = vec![
            Elem::Nat(7),
            Elem::Pair(2, 3),
            Elem::Rat(Rational::new(3, 8)),
            Elem::clopen("01,10".parse().unwrap()),
            Elem::clopen(ClopenSet::full()),
            Elem::clopen(ClopenSet::empty()),
        ];
        let js = serde_json::to_string(&es).unwrap();
        assert_eq!(js, r#"[7,[2,3],"3/8","01,10","*",""]"#);
        let back: Vec<Elem> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, es);
    }
}
