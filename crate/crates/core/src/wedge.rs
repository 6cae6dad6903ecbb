//! The restricted semi-infinite wedge space `Λ_{-1/2, ^1/2}`.
//!
//! Every basis wedge is stored as a finite perturbation of the vacuum
//! `u_{-1/2} ∧ u_{3/2} ∧ u_{5/2} ∧ ...`: the extra negative factors it contains
//! and the positive factors it omits. The slot `-1/2` is always filled and
//! `1/2` always empty; neither is stored. Signs are permutation parities
//! against the ascending word.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::combination::Combination;
use crate::scalars::{HalfInt, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WedgeError {
    #[error("wedge index {0} is not in Z + 1/2")]
    NotHalfOdd(HalfInt),
    #[error("included negative index {0} must be below -1/2")]
    NegOutOfRange(HalfInt),
    #[error("omitted positive index {0} must be above 1/2")]
    HoleOutOfRange(HalfInt),
    #[error("repeated wedge index {0}")]
    Repeated(HalfInt),
}

const MINUS_HALF: HalfInt = HalfInt::from_twice(-1);
const HALF: HalfInt = HalfInt::from_twice(1);

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct WedgeBasis {
    neg: Vec<HalfInt>,
    holes: Vec<HalfInt>,
}

impl WedgeBasis {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn new(mut neg: Vec<HalfInt>, mut holes: Vec<HalfInt>) -> Result<Self, WedgeError> {
        for &i in neg.iter().chain(holes.iter()) {
            if !i.is_half_odd() {
                return Err(WedgeError::NotHalfOdd(i));
            }
        }
        if let Some(&bad) = neg.iter().find(|&&i| i >= MINUS_HALF) {
            return Err(WedgeError::NegOutOfRange(bad));
        }
        if let Some(&bad) = holes.iter().find(|&&i| i <= HALF) {
            return Err(WedgeError::HoleOutOfRange(bad));
        }
        neg.sort_unstable();
        holes.sort_unstable();
        for w in neg.windows(2).chain(holes.windows(2)) {
            if w[0] == w[1] {
                return Err(WedgeError::Repeated(w[0]));
            }
        }
        Ok(WedgeBasis { neg, holes })
    }

    /// Included indices below `-1/2`, ascending.
    pub fn neg(&self) -> &[HalfInt] {
        &self.neg
    }

    /// Omitted indices above `1/2`, ascending.
    pub fn holes(&self) -> &[HalfInt] {
        &self.holes
    }

    pub fn is_vacuum(&self) -> bool {
        self.neg.is_empty() && self.holes.is_empty()
    }

    /// Whether `u_i` is a factor of this wedge.
    pub fn contains(&self, i: HalfInt) -> bool {
        debug_assert!(i.is_half_odd());
        match i.cmp(&MINUS_HALF) {
            Ordering::Less => self.neg.binary_search(&i).is_ok(),
            Ordering::Equal => true,
            Ordering::Greater => i > HALF && self.holes.binary_search(&i).is_err(),
        }
    }

    /// Number of factors `u_j` with `j < i`.
    pub fn count_below(&self, i: HalfInt) -> usize {
        let mut count = self.neg.partition_point(|&j| j < i);
        if i > MINUS_HALF {
            count += 1;
        }
        if i.twice() > 3 {
            // positive factors 3/2, 5/2, ... below i, minus the holes below i
            let tail = ((i.twice() - 3) / 2) as usize;
            count += tail - self.holes.partition_point(|&j| j < i);
        }
        count
    }

    /// `sum(-m_i - 1/2) + sum(n_j - 1/2)`.
    pub fn degree(&self) -> u32 {
        let from_neg: i64 = self.neg.iter().map(|m| -m.minus_half() - 1).sum();
        let from_holes: i64 = self.holes.iter().map(|n| n.minus_half()).sum();
        (from_neg + from_holes) as u32
    }

    /// `|neg| - |holes|`.
    pub fn charge(&self) -> i64 {
        self.neg.len() as i64 - self.holes.len() as i64
    }

    /// Largest omitted index, or `1/2` when nothing is omitted.
    pub fn max_hole(&self) -> HalfInt {
        self.holes.last().copied().unwrap_or(HALF)
    }

    /// Most negative included index, or `-1/2`.
    pub fn min_index(&self) -> HalfInt {
        self.neg.first().copied().unwrap_or(MINUS_HALF)
    }

    fn inserted(&self, i: HalfInt) -> WedgeBasis {
        let mut w = self.clone();
        if i < MINUS_HALF {
            let pos = w.neg.partition_point(|&j| j < i);
            w.neg.insert(pos, i);
        } else {
            let pos = w
                .holes
                .binary_search(&i)
                .expect("filled index must be a hole");
            w.holes.remove(pos);
        }
        w
    }

    fn removed(&self, i: HalfInt) -> WedgeBasis {
        let mut w = self.clone();
        if i < MINUS_HALF {
            let pos = w
                .neg
                .binary_search(&i)
                .expect("removed index must be present");
            w.neg.remove(pos);
        } else {
            let pos = w.holes.partition_point(|&j| j < i);
            w.holes.insert(pos, i);
        }
        w
    }
}

impl PartialOrd for WedgeBasis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WedgeBasis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.neg.cmp(&other.neg))
            .then_with(|| self.holes.cmp(&other.holes))
    }
}

impl<'de> Deserialize<'de> for WedgeBasis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(default)]
            neg: Vec<HalfInt>,
            #[serde(default)]
            holes: Vec<HalfInt>,
        }
        let raw = Raw::deserialize(deserializer)?;
        WedgeBasis::new(raw.neg, raw.holes).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for WedgeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W(neg={:?}, holes={:?})", self.neg, self.holes)
    }
}

pub type WedgeElement = Combination<WedgeBasis>;

/// `A` or `A*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    A,
    AStar,
}

/// `A(m) w = (m - 1/2) u_m ∧ w`, reordered into ascending position.
pub fn a_act(m: HalfInt, w: &WedgeBasis) -> WedgeElement {
    debug_assert!(m.is_half_odd());
    if m == HALF || w.contains(m) {
        return WedgeElement::zero();
    }
    let mut coeff = Rational::from_int(m.minus_half());
    if w.count_below(m) % 2 == 1 {
        coeff = -coeff;
    }
    WedgeElement::term(w.inserted(m), coeff)
}

/// `A*(m) w = (m - 1/2) ∂_{u_{-m}} w`, with the removal sign
/// `(-1)^{k+1}` for `u_{-m}` in 1-based position `k`.
pub fn astar_act(m: HalfInt, w: &WedgeBasis) -> WedgeElement {
    debug_assert!(m.is_half_odd());
    let i = -m;
    if m == HALF || !w.contains(i) {
        return WedgeElement::zero();
    }
    let mut coeff = Rational::from_int(m.minus_half());
    if w.count_below(i) % 2 == 1 {
        coeff = -coeff;
    }
    WedgeElement::term(w.removed(i), coeff)
}

pub fn act(kind: OpKind, m: HalfInt, w: &WedgeBasis) -> WedgeElement {
    match kind {
        OpKind::A => a_act(m, w),
        OpKind::AStar => astar_act(m, w),
    }
}

pub fn act_on(kind: OpKind, m: HalfInt, v: &WedgeElement) -> WedgeElement {
    v.map_linear(|w| act(kind, m, w))
}

/// `:a(m) b(n): w`, which is `a(m) b(n) w` for `m < 0` and `-b(n) a(m) w`
/// for `m > 0`.
pub fn normal_ordered_pair(
    a: OpKind,
    m: HalfInt,
    b: OpKind,
    n: HalfInt,
    w: &WedgeBasis,
) -> WedgeElement {
    debug_assert!(m.is_half_odd() && n.is_half_odd());
    if m.twice() < 0 {
        act_on(a, m, &act(b, n, w))
    } else {
        -act_on(b, n, &act(a, m, w))
    }
}

pub fn wedge_deg(w: &WedgeBasis) -> u32 {
    w.degree()
}

/// All distinct-part partitions of `n`, parts descending.
pub fn strict_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every basis wedge of exactly the given degree.
pub fn basis_of_degree(degree: u32) -> Vec<WedgeBasis> {
    let mut out = Vec::new();
    for split in 0..=degree {
        for negs in strict_partitions(split) {
            for holes in strict_partitions(degree - split) {
                let neg = negs
                    .iter()
                    .map(|&j| HalfInt::half_odd(-(j as i64) - 1))
                    .collect();
                let holes = holes.iter().map(|&j| HalfInt::half_odd(j as i64)).collect();
                out.push(WedgeBasis::new(neg, holes).expect("enumerated wedge is valid"));
            }
        }
    }
    out.sort();
    out
}

pub fn basis_up_to(max_degree: u32) -> Vec<WedgeBasis> {
    (0..=max_degree).flat_map(basis_of_degree).collect()
}
