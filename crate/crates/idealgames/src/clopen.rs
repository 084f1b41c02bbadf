//! Clopen subsets of Cantor space as reduced antichains of cylinders, with
//! exact dyadic measure, the level-n enlargement `tilde`, the hitting-number
//! gradings `phi_sn`, the `S+_n` probe and the maps `x_u` / `y_u`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::exact::{self, Bits};
use crate::ideals::SubmeasureValue;
use crate::scalar::{half_pow, Scalar};

/// Longest bit string the algebra accepts; keeps every measure inside `i64 / 2^62`.
pub const MAX_BITS: usize = 62;
/// Largest depth for which [`enum_omega`] materializes the whole list.
pub const OMEGA_LIST_CAP: usize = 4;
/// Largest depth accepted by [`enum_omega_iter`].
pub const OMEGA_ITER_CAP: usize = 6;
pub const PHI_SN_CAP: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    // first bit is the most significant of the low `len` bits
    bits: u64,
    len: u8,
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: 0, len: 0 }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() > MAX_BITS {
            return Err(Error::OutOfRange(format!("bit string longer than {MAX_BITS}")));
        }
        let v = bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        Ok(BitString { bits: v, len: bits.len() as u8 })
    }

    /// The string of length `len` whose bits spell `value` in binary.
    pub fn from_value(value: u64, len: usize) -> Self {
        debug_assert!(len <= MAX_BITS && (len == 64 || value >> len == 0));
        BitString { bits: value, len: len as u8 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.bits >> (self.len() - 1 - i) & 1 == 1
    }

    pub fn push(&self, b: bool) -> Result<Self> {
        if self.len() >= MAX_BITS {
            return Err(Error::OutOfRange(format!("bit string longer than {MAX_BITS}")));
        }
        Ok(BitString { bits: self.bits << 1 | b as u64, len: self.len + 1 })
    }

    pub fn truncate(&self, new_len: usize) -> Self {
        if new_len >= self.len() {
            return *self;
        }
        BitString { bits: self.bits >> (self.len() - new_len), len: new_len as u8 }
    }

    pub fn parent(&self) -> Option<Self> {
        (self.len > 0).then(|| self.truncate(self.len() - 1))
    }

    pub fn sibling(&self) -> Option<Self> {
        (self.len > 0).then_some(BitString { bits: self.bits ^ 1, len: self.len })
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && other.truncate(self.len()) == *self
    }

    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        (0..self.len().min(other.len())).find(|&i| self.bit(i) != other.bit(i)).unwrap_or(self.len().min(other.len()))
    }

    pub fn comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// All strings of length `len`, in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |v| BitString::from_value(v, len))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len) as usize;
        self.truncate(common)
            .bits
            .cmp(&other.truncate(common).bits)
            .then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        BitString::from_bits(&bits)
    }
}

/// `numerator / 2^exponent`, kept canonical (odd numerator, or zero over 2^0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicRational {
    numerator: i64,
    exponent: u32,
}

impl DyadicRational {
    pub fn new(numerator: i64, exponent: u32) -> Self {
        let (mut n, mut e) = (numerator, exponent);
        if n == 0 {
            e = 0;
        }
        while e > 0 && n % 2 == 0 {
            n /= 2;
            e -= 1;
        }
        DyadicRational { numerator: n, exponent: e }
    }

    pub fn zero() -> Self {
        DyadicRational::new(0, 0)
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let e = self.exponent.max(other.exponent);
        let a = self.numerator.checked_mul(1i64.checked_shl(e - self.exponent)?)?;
        let b = other.numerator.checked_mul(1i64.checked_shl(e - other.exponent)?)?;
        Some(DyadicRational::new(a.checked_add(b)?, e))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&DyadicRational::new(other.numerator.checked_neg()?, other.exponent))
    }

    pub fn to_scalar<T: Scalar>(&self) -> T {
        let n = T::from_i64(self.numerator).expect("numerator fits the scalar type");
        n * half_pow::<T>(self.exponent)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = (self.numerator as i128) << (e - self.exponent);
        let b = (other.numerator as i128) << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, 1u64 << self.exponent)
        }
    }
}

/// A clopen set, stored as its canonical generators: the maximal cylinders it contains.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClopenSet {
    gens: Vec<BitString>,
}

impl ClopenSet {
    pub fn empty() -> Self {
        ClopenSet { gens: Vec::new() }
    }

    pub fn full() -> Self {
        ClopenSet { gens: vec![BitString::empty()] }
    }

    pub fn cylinder(x: BitString) -> Self {
        ClopenSet { gens: vec![x] }
    }

    pub fn generators(&self) -> &[BitString] {
        &self.gens
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.gens.iter().map(|g| g.len()).max().unwrap_or(0)
    }

    pub fn measure(&self) -> DyadicRational {
        measure(self)
    }

    /// Whether the two point sets meet.
    pub fn meets(&self, other: &ClopenSet) -> bool {
        self.gens.iter().any(|a| other.gens.iter().any(|b| a.comparable(b)))
    }

    /// Whether the cylinder of `x` meets the set.
    pub fn meets_cylinder(&self, x: &BitString) -> bool {
        self.gens.iter().any(|g| g.comparable(x))
    }

    /// Whether the cylinder of `x` lies inside the set.
    pub fn contains_cylinder(&self, x: &BitString) -> bool {
        self.gens.iter().any(|g| g.is_prefix_of(x))
    }

    /// `μ(U ∩ ⟨x⟩)`.
    pub fn measure_in(&self, x: &BitString) -> DyadicRational {
        let mut total = 0i64;
        for g in &self.gens {
            if g.is_prefix_of(x) {
                return DyadicRational::new(1, x.len() as u32);
            }
            if x.is_prefix_of(g) {
                total += 1i64 << (MAX_BITS - g.len());
            }
        }
        DyadicRational::new(total, MAX_BITS as u32)
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        reduce(self.gens.iter().chain(&other.gens).copied())
    }

    pub fn complement(&self) -> ClopenSet {
        let d = self.depth();
        reduce(BitString::all_of_len(d).filter(|c| !self.contains_cylinder(c)))
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl std::str::FromStr for ClopenSet {
    type Err = Error;

    /// Comma separated generators; the empty line is the empty set and `*` the full space.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Ok(ClopenSet::empty());
        }
        if t == "*" {
            return Ok(ClopenSet::full());
        }
        let gens = t.split(',').map(str::parse).collect::<Result<Vec<BitString>>>()?;
        Ok(reduce(gens))
    }
}

impl Serialize for ClopenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.gens == [BitString::empty()] {
            s.serialize_str("*")
        } else {
            s.collect_str(self)
        }
    }
}

impl<'de> Deserialize<'de> for ClopenSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical form: drop generators below another one, merge sibling pairs, repeat.
pub fn reduce(gens: impl IntoIterator<Item = BitString>) -> ClopenSet {
    let mut set: BTreeSet<BitString> = gens.into_iter().collect();
    loop {
        let mut changed = false;
        let absorbed: Vec<BitString> = set
            .iter()
            .filter(|g| {
                (0..g.len()).any(|l| set.contains(&g.truncate(l)))
            })
            .copied()
            .collect();
        for g in absorbed {
            set.remove(&g);
            changed = true;
        }
        let merged: Vec<BitString> = set
            .iter()
            .filter(|g| !g.is_empty() && !g.bit(g.len() - 1))
            .filter(|g| set.contains(&g.sibling().unwrap()))
            .copied()
            .collect();
        for g in merged {
            set.remove(&g);
            set.remove(&g.sibling().unwrap());
            set.insert(g.parent().unwrap());
            changed = true;
        }
        if !changed {
            break;
        }
    }
    ClopenSet { gens: set.into_iter().collect() }
}

pub fn measure(u: &ClopenSet) -> DyadicRational {
    let total: i64 = u.gens.iter().map(|g| 1i64 << (MAX_BITS - g.len())).sum();
    DyadicRational::new(total, MAX_BITS as u32)
}

/// `Ũ_n`: cut `n` bits off every generator, then reduce.
pub fn tilde(u: &ClopenSet, n: usize) -> ClopenSet {
    reduce(u.gens.iter().map(|g| g.truncate(g.len().saturating_sub(n))))
}

/// All reduced clopen sets of measure 1/2 with generators of length `<= l`,
/// sorted by generator list. Materialized only for `l <= OMEGA_LIST_CAP`.
pub fn enum_omega(l: usize) -> Result<Vec<ClopenSet>> {
    cap_check("enum_omega depth", l, OMEGA_LIST_CAP)?;
    let mut out: Vec<ClopenSet> = enum_omega_iter(l)?.collect();
    out.sort();
    Ok(out)
}

/// Lazy variant of [`enum_omega`], in colexicographic order of the chosen cells.
pub fn enum_omega_iter(l: usize) -> Result<impl Iterator<Item = ClopenSet>> {
    cap_check("enum_omega depth", l, OMEGA_ITER_CAP)?;
    let cells = 1usize << l;
    let pick = if l == 0 { usize::MAX } else { cells / 2 };
    Ok(Combinations::new(cells, pick)
        .map(move |idx| reduce(idx.into_iter().map(|i| BitString::from_value(i as u64, l)))))
}

/// Clopen sets of measure exactly `2^-e` whose generators have length `<= depth`.
pub fn enum_measure(e: usize, depth: usize) -> Result<Vec<ClopenSet>> {
    if e > depth {
        return Ok(Vec::new());
    }
    cap_check("enum_measure depth", depth, 5)?;
    let cells = 1usize << depth;
    let pick = 1usize << (depth - e);
    let mut out: Vec<ClopenSet> = Combinations::new(cells, pick)
        .map(|idx| reduce(idx.into_iter().map(|i| BitString::from_value(i as u64, depth))))
        .collect();
    out.sort();
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// `{U ∈ enum_omega(l) : x ∈ Ũ_n}`.
pub fn i_x_slice(x: &BitString, n: usize, l: usize) -> Result<Vec<ClopenSet>> {
    if x.len() < l {
        return Err(Error::Invalid(format!("point prefix of length {} shorter than depth {l}", x.len())));
    }
    Ok(enum_omega(l)?.into_iter().filter(|u| tilde(u, n).contains_cylinder(x)).collect())
}

/// Distinct membership signatures of points of Cantor space with respect to `sets`.
/// A point's signature is the set of members containing it (or, with `meet`
/// semantics at resolution `depth`, the members meeting its depth-`depth` cell).
fn signatures(sets: &[ClopenSet], depth: Option<usize>) -> Vec<Bits> {
    let mut out = Vec::new();
    walk(sets, BitString::empty(), depth, &mut out);
    out
}

fn walk(sets: &[ClopenSet], p: BitString, depth: Option<usize>, out: &mut Vec<Bits>) {
    let mut sig = Bits::new(sets.len());
    let mut partial = false;
    for (i, u) in sets.iter().enumerate() {
        if u.contains_cylinder(&p) {
            sig.set(i);
        } else if u.meets_cylinder(&p) {
            match depth {
                Some(d) if p.len() >= d => sig.set(i),
                _ => partial = true,
            }
        }
    }
    if partial {
        walk(sets, p.push(false).expect("depth within MAX_BITS"), depth, out);
        walk(sets, p.push(true).expect("depth within MAX_BITS"), depth, out);
    } else {
        out.push(sig);
    }
}

/// `φ_n(X)`: least number of points of Cantor space meeting every `Ũ_n`, `U ∈ X`.
pub fn phi_sn(n: usize, x: &[ClopenSet]) -> Result<SubmeasureValue> {
    phi_sn_capped(n, x, PHI_SN_CAP)
}

pub fn phi_sn_capped(n: usize, x: &[ClopenSet], cap: usize) -> Result<SubmeasureValue> {
    cap_check("phi_sn family", x.len(), cap)?;
    if x.is_empty() {
        return Ok(SubmeasureValue::Finite(0));
    }
    let t: Vec<ClopenSet> = x.iter().map(|u| tilde(u, n)).collect();
    if t.iter().any(ClopenSet::is_empty) {
        return Ok(SubmeasureValue::Infinite);
    }
    let sigs = signatures(&t, None);
    let k = exact::min_set_cover(t.len(), &sigs, t.len()).expect("every nonempty member has a point");
    Ok(SubmeasureValue::Finite(k as u64))
}

/// Reference for [`phi_sn`]: enumerate every depth-D cell, then try all
/// cell subsets by increasing size. Only for tiny families.
pub fn phi_sn_brute(n: usize, x: &[ClopenSet]) -> Result<SubmeasureValue> {
    cap_check("phi_sn_brute family", x.len(), 6)?;
    if x.is_empty() {
        return Ok(SubmeasureValue::Finite(0));
    }
    let t: Vec<ClopenSet> = x.iter().map(|u| tilde(u, n)).collect();
    if t.iter().any(ClopenSet::is_empty) {
        return Ok(SubmeasureValue::Infinite);
    }
    let d = t.iter().map(ClopenSet::depth).max().unwrap_or(0);
    cap_check("phi_sn_brute depth", d, 5)?;
    let cells: Vec<u32> = BitString::all_of_len(d)
        .map(|c| {
            t.iter()
                .enumerate()
                .filter(|(_, u)| u.contains_cylinder(&c))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let full = (1u32 << t.len()) - 1;
    for k in 1..=t.len() {
        if subsets_of_size(cells.len(), k).any(|s| s.iter().fold(0, |m, &i| m | cells[i]) == full) {
            return Ok(SubmeasureValue::Finite(k as u64));
        }
    }
    Err(Error::Internal("no hitting set among cells".into()))
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    Combinations::new(n, k)
}

/// Positivity probe for `S+_n` at resolution `m`: every clopen `V` of measure
/// `2^-n` with generators of length `<= m` misses some member of `x`.
///
/// Such a `V` is a union of exactly `2^(m-n)` depth-`m` cells, and it meets `U`
/// exactly when one of its cells does. So a `V` meeting every member exists iff
/// the cells meeting the members admit a hitting set of size `<= 2^(m-n)`.
pub fn s_plus_check(x: &[ClopenSet], n: usize, m: usize) -> Result<bool> {
    if n > m {
        return Err(Error::Invalid(format!("resolution {m} below level {n}")));
    }
    if m > 6 + n {
        return Err(Error::CapExceeded { what: "s_plus resolution".into(), size: m, cap: 6 + n });
    }
    if m > MAX_BITS {
        return Err(Error::OutOfRange(format!("resolution {m}")));
    }
    if x.is_empty() {
        return Ok(false);
    }
    if x.iter().any(ClopenSet::is_empty) {
        return Ok(true);
    }
    let budget = 1usize << (m - n);
    let sigs = signatures(x, Some(m));
    Ok(exact::min_set_cover(x.len(), &sigs, budget.min(x.len())).is_none())
}

/// Reference for [`s_plus_check`]: enumerate every admissible `V` directly.
pub fn s_plus_check_brute(x: &[ClopenSet], n: usize, m: usize) -> Result<bool> {
    if x.is_empty() {
        return Ok(false);
    }
    Ok(enum_measure(n, m)?.iter().all(|v| x.iter().any(|u| !u.meets(v))))
}

/// Greedy majority branch of `U`, ties to 0.
pub fn x_u(u: &ClopenSet, depth: usize) -> Result<BitString> {
    let mut x = BitString::empty();
    for _ in 0..depth {
        let left = u.measure_in(&x.push(false)?);
        let right = u.measure_in(&x.push(true)?);
        x = x.push(left < right)?;
    }
    Ok(x)
}

/// The finite string behind `y_u`: `x_u` to the depth of `U`, trailing zeros removed.
pub fn flattened_x(u: &ClopenSet) -> Result<BitString> {
    let x = x_u(u, u.depth())?;
    let keep = (0..x.len()).rev().find(|&i| x.bit(i)).map_or(0, |i| i + 1);
    Ok(x.truncate(keep))
}

/// `v(s) = Σ s_i 2^-(i+1) + 2^-(|s|+1)`, an order embedding of strings into (0,1).
pub fn string_value(s: &BitString) -> DyadicRational {
    DyadicRational::new((s.value() as i64) << 1 | 1, s.len() as u32 + 1)
}

pub fn y_u_dyadic(u: &ClopenSet) -> Result<DyadicRational> {
    Ok(string_value(&flattened_x(u)?))
}

pub fn y_u<T: Scalar>(u: &ClopenSet) -> Result<T> {
    Ok(y_u_dyadic(u)?.to_scalar())
}
