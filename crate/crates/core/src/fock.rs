//! The bosonic Fock space `S(h'^-)`: polynomials in the creation modes
//! `H(-1), H(-2), ...`, with the level `-2` Heisenberg action and the four
//! exponential operators `E^{±}_{±}(z)` evaluated coefficient by coefficient.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::combination::Combination;
use crate::scalars::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("H(0) does not act on the Fock factor; it is carried by the lattice charge")]
    ZeroMode,
    #[error("Fock monomial parts must be positive, got {0}")]
    NonPositivePart(i64),
}

/// `+` or `-`, used both for the superscript and the subscript of `E^{±}_{±}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A product `H(-n_1) H(-n_2) ... ` with parts sorted in descending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct FockMonomial {
    parts: Vec<u32>,
}

impl FockMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut parts: Vec<u32>) -> Result<Self, FockError> {
        if parts.contains(&0) {
            return Err(FockError::NonPositivePart(0));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FockMonomial { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_one(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts; the Fock contribution to the grading.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn multiplicity(&self, n: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == n).count() as u32
    }

    pub fn times(&self, other: &FockMonomial) -> FockMonomial {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        FockMonomial { parts }
    }

    pub fn with_part(&self, n: u32) -> FockMonomial {
        let mut parts = self.parts.clone();
        let pos = parts.partition_point(|&p| p > n);
        parts.insert(pos, n);
        FockMonomial { parts }
    }

    /// Removes `count` copies of part `n`; the caller guarantees they exist.
    fn without_parts(&self, n: u32, count: u32) -> FockMonomial {
        let mut left = count;
        let parts = self
            .parts
            .iter()
            .copied()
            .filter(|&p| {
                if p == n && left > 0 {
                    left -= 1;
                    false
                } else {
                    true
                }
            })
            .collect();
        FockMonomial { parts }
    }

    /// `(part, multiplicity)` pairs in descending part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl<'de> Deserialize<'de> for FockMonomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<i64>::deserialize(deserializer)?;
        let mut parts = Vec::with_capacity(raw.len());
        for p in raw {
            if p <= 0 {
                return Err(serde::de::Error::custom(FockError::NonPositivePart(p)));
            }
            parts.push(p as u32);
        }
        FockMonomial::new(parts).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        let names: Vec<String> = self.parts.iter().map(|p| format!("H(-{p})")).collect();
        f.write_str(&names.join(""))
    }
}

pub type FockElement = Combination<FockMonomial>;

/// All partitions of `n`, parts descending, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Fock basis monomials of exactly the given degree.
pub fn basis_of_degree(degree: u32) -> Vec<FockMonomial> {
    partitions(degree)
        .into_iter()
        .map(|parts| FockMonomial { parts })
        .collect()
}

/// Action of `H(n)`, `n != 0`: creation for `n < 0`, `-4n d/dH(-n)` for `n > 0`.
pub fn h_act(n: i64, v: &FockElement) -> Result<FockElement, FockError> {
    match n {
        0 => Err(FockError::ZeroMode),
        n if n < 0 => {
            let part = (-n) as u32;
            Ok(v.map_linear(|m| FockElement::basis(m.with_part(part))))
        }
        n => {
            let part = n as u32;
            let scale = Rational::from_int(-4 * n);
            Ok(v.map_linear(|m| {
                let k = m.multiplicity(part);
                if k == 0 {
                    FockElement::zero()
                } else {
                    FockElement::term(
                        m.without_parts(part, 1),
                        &scale * &Rational::from_int(k as i64),
                    )
                }
            }))
        }
    }
}

type CreationCache = RwLock<HashMap<(Sign, u32), Arc<Vec<(FockMonomial, Rational)>>>>;

fn creation_cache() -> &'static CreationCache {
    static CACHE: OnceLock<CreationCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficient of `z^k` in `exp(∓ sum_{n>0} H(-n) z^n / 2n)` as a polynomial,
/// summed over partitions `k = sum n * m_n` of `prod (∓1/2n)^{m_n} / m_n!`.
fn creation_polynomial(sup: Sign, k: u32) -> Arc<Vec<(FockMonomial, Rational)>> {
    if let Some(hit) = creation_cache().read().unwrap().get(&(sup, k)) {
        return hit.clone();
    }
    let sign = -sup.value();
    let mut terms = Vec::new();
    for parts in partitions(k) {
        let mono = FockMonomial { parts };
        let mut coeff = Rational::one();
        for (n, mult) in mono.multiplicities() {
            let base = Rational::new(sign, 2 * i64::from(n));
            for j in 1..=mult {
                coeff = coeff * &base / Rational::from_int(i64::from(j));
            }
        }
        terms.push((mono, coeff));
    }
    let terms = Arc::new(terms);
    creation_cache()
        .write()
        .unwrap()
        .insert((sup, k), terms.clone());
    terms
}

/// `E^{sup}_-` coefficient at `z^{-k}` on one monomial: each `H(n)/2n` paired
/// with `-4n d/dH(-n)` contributes `∓2`, so the result is a sum over
/// sub-multisets of total size `k` of `prod (∓2)^{j_n} C(c_n, j_n)`.
fn annihilation_on_monomial(sup: Sign, k: u32, mono: &FockMonomial) -> FockElement {
    let base = Rational::from_int(-2 * sup.value());
    let mults = mono.multiplicities();
    let mut out = FockElement::zero();
    // depth-first over distinct parts choosing how many to remove
    fn go(
        idx: usize,
        remaining: u32,
        mults: &[(u32, u32)],
        current: FockMonomial,
        coeff: Rational,
        base: &Rational,
        out: &mut FockElement,
    ) {
        if remaining == 0 {
            out.add_term(current, coeff);
            return;
        }
        if idx == mults.len() {
            return;
        }
        let (n, c) = mults[idx];
        let mut binom = 1i64;
        let mut power = Rational::one();
        for j in 0..=c {
            if j * n > remaining {
                break;
            }
            if j > 0 {
                binom = binom * i64::from(c - j + 1) / i64::from(j);
                power *= base;
            }
            let next = if j == 0 {
                current.clone()
            } else {
                current.without_parts(n, j)
            };
            let c2 = &coeff * &(&power * &Rational::from_int(binom));
            go(idx + 1, remaining - j * n, mults, next, c2, base, out);
        }
    }
    go(0, k, &mults, mono.clone(), Rational::one(), &base, &mut out);
    out
}

/// Coefficient of `z^k` of `E^{sup}_{sub}(z)` applied to `v`.
///
/// `E^±_+` only has coefficients at `k >= 0` and `E^±_-` only at `k <= 0`;
/// other `k` return zero.
pub fn e_coeff(sup: Sign, sub: Sign, k: i64, v: &FockElement) -> FockElement {
    match sub {
        Sign::Plus => {
            if k < 0 {
                return FockElement::zero();
            }
            let poly = creation_polynomial(sup, k as u32);
            v.map_linear(|m| poly.iter().map(|(p, c)| (m.times(p), c.clone())).collect())
        }
        Sign::Minus => {
            if k > 0 {
                return FockElement::zero();
            }
            v.map_linear(|m| annihilation_on_monomial(sup, (-k) as u32, m))
        }
    }
}

/// Largest Fock degree appearing in `v` (0 for the zero vector).
pub fn max_degree(v: &FockElement) -> u32 {
    v.keys().map(FockMonomial::degree).max().unwrap_or(0)
}
