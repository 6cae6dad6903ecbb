//! The level `-2` module `V = S(h'^-) ⊗ Λ_{-1/2,^1/2} ⊗ C[Zα]` and the exact
//! component actions of `X(m)`, `Y(m)`, `H(n)`, `c`, `d` and the Chevalley
//! generators.
//!
//! `X(z)` acts as `E^+_+(z) E^+_-(z) ⊗ A(z) ⊗ e^α z^{-α(0)/2}` and `Y(z)` as
//! `E^-_+(z) E^-_-(z) ⊗ A*(z) ⊗ e^{-α} z^{α(0)/2}`. The lattice z-power is
//! evaluated on the charge of the input term, before `e^{±α}` shifts it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::combination::Combination;
use crate::fock::{self, FockElement, FockMonomial, Sign};
use crate::lattice;
use crate::scalars::{HalfInt, Rational};
use crate::wedge::{self, WedgeBasis};

/// The central element acts by this scalar.
pub const LEVEL: i64 = -2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("state is not a simultaneous eigenvector of h0, h1 and d")]
    NotAWeightVector,
    #[error("unknown Chevalley generator `{0}`")]
    UnknownGenerator(String),
}

/// A basis vector `f ⊗ w ⊗ e^{pα}` of `V`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateKey {
    pub fock: FockMonomial,
    pub wedge: WedgeBasis,
    pub charge: i64,
}

impl StateKey {
    pub fn new(fock: FockMonomial, wedge: WedgeBasis, charge: i64) -> Self {
        StateKey {
            fock,
            wedge,
            charge,
        }
    }

    /// Twice the total grade `sum(parts) + deg(w) + p^2/2`.
    pub fn twice_degree(&self) -> i64 {
        2 * i64::from(self.fock.degree())
            + 2 * i64::from(self.wedge.degree())
            + lattice::twice_grade(self.charge)
    }

    /// Eigenvalue of `d`: `-sum(parts) - deg(w) - p^2/2`.
    pub fn d_eigenvalue(&self) -> Rational {
        Rational::from_int(-i64::from(self.fock.degree()) - i64::from(self.wedge.degree()))
            + lattice::lattice_d_eig(self.charge)
    }
}

impl PartialOrd for StateKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StateKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice_degree()
            .cmp(&other.twice_degree())
            .then_with(|| self.charge.cmp(&other.charge))
            .then_with(|| self.fock.cmp(&other.fock))
            .then_with(|| self.wedge.cmp(&other.wedge))
    }
}

impl fmt::Debug for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}⊗{:?}⊗e^{{{}α}}", self.fock, self.wedge, self.charge)
    }
}

pub type State = Combination<StateKey>;

#[derive(Serialize, Deserialize)]
struct TermRepr<K> {
    coeff: Rational,
    #[serde(flatten)]
    key: K,
}

#[derive(Serialize, Deserialize)]
struct TermsRepr<K> {
    terms: Vec<TermRepr<K>>,
}

/// `{"terms":[{"coeff":"p/q", ...key fields}]}`, in canonical term order.
pub fn to_json<K: Ord + Clone + Serialize>(c: &Combination<K>) -> serde_json::Value {
    let repr = TermsRepr {
        terms: c
            .iter()
            .map(|(k, v)| TermRepr {
                coeff: v.clone(),
                key: k.clone(),
            })
            .collect(),
    };
    serde_json::to_value(repr).expect("state serialization is infallible")
}

pub fn from_json<K: Ord + Clone + DeserializeOwned>(
    v: serde_json::Value,
) -> Result<Combination<K>, serde_json::Error> {
    let repr: TermsRepr<K> = serde_json::from_value(v)?;
    Ok(repr.terms.into_iter().map(|t| (t.key, t.coeff)).collect())
}

impl<K: Ord + Clone + Serialize> Serialize for Combination<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TermsRepr {
            terms: self
                .iter()
                .map(|(k, v)| TermRepr {
                    coeff: v.clone(),
                    key: k.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, K: Ord + Clone + Deserialize<'de>> Deserialize<'de> for Combination<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TermsRepr::<K>::deserialize(deserializer)?;
        Ok(repr.terms.into_iter().map(|t| (t.key, t.coeff)).collect())
    }
}

/// `1 ⊗ vacuum ⊗ e^0`.
pub fn v0() -> State {
    State::basis(StateKey::new(FockMonomial::one(), WedgeBasis::vacuum(), 0))
}

/// `1 ⊗ vacuum ⊗ e^{-α}`.
pub fn v1() -> State {
    State::basis(StateKey::new(FockMonomial::one(), WedgeBasis::vacuum(), -1))
}

/// Applies a Fock-factor operator to every term, keeping the other factors.
pub(crate) fn on_fock<F>(s: &State, mut f: F) -> State
where
    F: FnMut(&FockElement) -> FockElement,
{
    s.map_linear(|k| {
        let out = f(&FockElement::basis(k.fock.clone()));
        out.into_iter()
            .map(|(m, c)| (StateKey::new(m, k.wedge.clone(), k.charge), c))
            .collect()
    })
}

fn tensor_into(
    out: &mut State,
    fock: &FockElement,
    wedge: &wedge::WedgeElement,
    charge: i64,
    scale: &Rational,
) {
    for (fm, fc) in fock {
        let fc = fc * scale;
        for (wb, wc) in wedge {
            out.add_term(StateKey::new(fm.clone(), wb.clone(), charge), &fc * wc);
        }
    }
}

/// `X(m)` on one basis vector, i.e. the `z^{-m}` coefficient.
///
/// Summands are indexed by the creation order `k1 >= 0`, the annihilation
/// order `k2 <= deg(f)` and the fermion mode `n = t - 1/2` with
/// `k1 - k2 - n - 1/2 - p = -m`. A nonzero `A(n)` needs `n` to be a hole or
/// a new negative index; `k1 >= 0` bounds `t` below and the largest hole
/// bounds it above, so the loops below are the complete finite sum.
fn x_on_basis(m: i64, key: &StateKey) -> State {
    let p = key.charge;
    let fock_in = FockElement::basis(key.fock.clone());
    let top = key.wedge.max_hole().minus_half() + 1;
    let mut out = State::zero();
    for k2 in 0..=i64::from(key.fock.degree()) {
        let after_minus = fock::e_coeff(Sign::Plus, Sign::Minus, -k2, &fock_in);
        if after_minus.is_zero() {
            continue;
        }
        for t in (m - p - k2)..=top {
            let k1 = k2 + t + p - m;
            debug_assert!(k1 >= 0);
            let wedge_part = wedge::a_act(HalfInt::half_odd(t - 1), &key.wedge);
            if wedge_part.is_zero() {
                continue;
            }
            let fock_part = fock::e_coeff(Sign::Plus, Sign::Plus, k1, &after_minus);
            tensor_into(
                &mut out,
                &fock_part,
                &wedge_part,
                lattice::mul_exp(1, p),
                &Rational::one(),
            );
        }
    }
    out
}

/// `Y(m)` on one basis vector. Here `k1 - k2 - n - 1/2 + p = -m`, and
/// `A*(n)` needs `-n` in the support, so `n <= -min(neg)`. Same `n = t - 1/2`.
fn y_on_basis(m: i64, key: &StateKey) -> State {
    let p = key.charge;
    let fock_in = FockElement::basis(key.fock.clone());
    let top = (-key.wedge.min_index()).minus_half() + 1;
    let mut out = State::zero();
    for k2 in 0..=i64::from(key.fock.degree()) {
        let after_minus = fock::e_coeff(Sign::Minus, Sign::Minus, -k2, &fock_in);
        if after_minus.is_zero() {
            continue;
        }
        for t in (m + p - k2)..=top {
            let k1 = k2 + t - p - m;
            debug_assert!(k1 >= 0);
            let wedge_part = wedge::astar_act(HalfInt::half_odd(t - 1), &key.wedge);
            if wedge_part.is_zero() {
                continue;
            }
            let fock_part = fock::e_coeff(Sign::Minus, Sign::Plus, k1, &after_minus);
            tensor_into(
                &mut out,
                &fock_part,
                &wedge_part,
                lattice::mul_exp(-1, p),
                &Rational::one(),
            );
        }
    }
    out
}

pub fn x_act(m: i64, s: &State) -> State {
    s.map_linear(|k| x_on_basis(m, k))
}

pub fn y_act(m: i64, s: &State) -> State {
    s.map_linear(|k| y_on_basis(m, k))
}

/// `H(n)`: the Heisenberg action on the Fock factor for `n != 0`, and
/// `H(0) = α(0)` acting by `2p` on the lattice factor.
pub fn h_act_full(n: i64, s: &State) -> State {
    if n == 0 {
        return s.diagonal(|k| Rational::from_int(lattice::alpha0_eig(k.charge)));
    }
    on_fock(s, |f| fock::h_act(n, f).expect("nonzero Heisenberg mode"))
}

pub fn c_act(s: &State) -> State {
    s.scale(&Rational::from_int(LEVEL))
}

pub fn d_act(s: &State) -> State {
    s.diagonal(StateKey::d_eigenvalue)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chevalley {
    E0,
    E1,
    F0,
    F1,
    H0,
    H1,
}

impl Chevalley {
    pub const ALL: [Chevalley; 6] = [
        Chevalley::E0,
        Chevalley::E1,
        Chevalley::F0,
        Chevalley::F1,
        Chevalley::H0,
        Chevalley::H1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Chevalley::E0 => "e0",
            Chevalley::E1 => "e1",
            Chevalley::F0 => "f0",
            Chevalley::F1 => "f1",
            Chevalley::H0 => "h0",
            Chevalley::H1 => "h1",
        }
    }
}

impl fmt::Display for Chevalley {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chevalley {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Chevalley::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| RepError::UnknownGenerator(s.to_string()))
    }
}

/// `e0 = Y(1)`, `e1 = X(0)`, `f0 = X(-1)`, `f1 = Y(0)`, `h0 = -H(0) + c`,
/// `h1 = H(0)`.
pub fn chevalley_act(g: Chevalley, s: &State) -> State {
    match g {
        Chevalley::E0 => y_act(1, s),
        Chevalley::E1 => x_act(0, s),
        Chevalley::F0 => x_act(-1, s),
        Chevalley::F1 => y_act(0, s),
        Chevalley::H0 => c_act(s) - h_act_full(0, s),
        Chevalley::H1 => h_act_full(0, s),
    }
}

/// Eigenvalues of `(h0, h1, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub h0: Rational,
    pub h1: Rational,
    pub d: Rational,
}

impl WeightTriple {
    pub fn new(h0: Rational, h1: Rational, d: Rational) -> Self {
        WeightTriple { h0, h1, d }
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h0, self.h1, self.d)
    }
}

fn eigenvalue(s: &State, image: &State) -> Result<Rational, RepError> {
    let (key, coeff) = s.iter().next().ok_or(RepError::NotAWeightVector)?;
    let lambda = &image.coeff(key) / coeff;
    if *image == s.scale(&lambda) {
        Ok(lambda)
    } else {
        Err(RepError::NotAWeightVector)
    }
}

pub fn weight_of(s: &State) -> Result<WeightTriple, RepError> {
    Ok(WeightTriple {
        h0: eigenvalue(s, &chevalley_act(Chevalley::H0, s))?,
        h1: eigenvalue(s, &chevalley_act(Chevalley::H1, s))?,
        d: eigenvalue(s, &d_act(s))?,
    })
}

/// Every basis vector of `V` with twice-grade at most `max_twice_deg` and
/// `|p| <= charge_bound`, in canonical order.
pub fn basis_states(max_twice_deg: i64, charge_bound: i64) -> Vec<StateKey> {
    let mut out = Vec::new();
    for p in -charge_bound..=charge_bound {
        let rest = max_twice_deg - lattice::twice_grade(p);
        if rest < 0 {
            continue;
        }
        let budget = (rest / 2) as u32;
        for fd in 0..=budget {
            for fm in fock::basis_of_degree(fd) {
                for w in wedge::basis_up_to(budget - fd) {
                    out.push(StateKey::new(fm.clone(), w, p));
                }
            }
        }
    }
    out.sort();
    out
}
