//! Z-operators on the vacuum space `Ω(V) = Λ_{-1/2,^1/2} ⊗ C[Zα]` and their
//! generalized commutators.
//!
//! Because `z^{∓α(0)/2}` contributes a single power `z^{∓p}` on charge `p`,
//! each component `Z^±(m)` is one fermion mode per charge sector:
//! `Z^+(m) = A(m - p - 1/2) e^α` and `Z^-(m) = A*(m + p - 1/2) e^{-α}`.
//! [`zop_via_definition`] recomputes the same components on all of `V` from
//! the dressed vertex operators as an independent route.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combination::Combination;
use crate::fock::{self, FockMonomial, Sign};
use crate::lattice;
use crate::rep::{self, State, StateKey};
use crate::scalars::{binom_series_coeff, HalfInt, Rational};
use crate::wedge::{self, WedgeBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZalgError {
    #[error("state has a nontrivial Fock factor {0:?} and is not in the vacuum space")]
    NotInVacuumSpace(FockMonomial),
    #[error("generalized commutator term k = {k} is nonzero beyond the termination bound {bound}")]
    NoTerminationBound { bound: u32, k: u32 },
}

/// A basis vector `w ⊗ e^{pα}` of `Ω(V)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaKey {
    pub wedge: WedgeBasis,
    pub charge: i64,
}

impl OmegaKey {
    pub fn new(wedge: WedgeBasis, charge: i64) -> Self {
        OmegaKey { wedge, charge }
    }

    pub fn twice_degree(&self) -> i64 {
        2 * i64::from(self.wedge.degree()) + lattice::twice_grade(self.charge)
    }
}

impl PartialOrd for OmegaKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OmegaKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice_degree()
            .cmp(&other.twice_degree())
            .then_with(|| self.charge.cmp(&other.charge))
            .then_with(|| self.wedge.cmp(&other.wedge))
    }
}

impl fmt::Debug for OmegaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}⊗e^{{{}α}}", self.wedge, self.charge)
    }
}

pub type OmegaState = Combination<OmegaKey>;

fn wedge_to_omega(out: &mut OmegaState, w: &wedge::WedgeElement, charge: i64) {
    for (wb, c) in w {
        out.add_term(OmegaKey::new(wb.clone(), charge), c.clone());
    }
}

pub fn zplus_act(m: i64, s: &OmegaState) -> OmegaState {
    s.map_linear(|k| {
        let mode = HalfInt::from_twice(2 * (m - k.charge) - 1);
        let mut out = OmegaState::zero();
        wedge_to_omega(
            &mut out,
            &wedge::a_act(mode, &k.wedge),
            lattice::mul_exp(1, k.charge),
        );
        out
    })
}

pub fn zminus_act(m: i64, s: &OmegaState) -> OmegaState {
    s.map_linear(|k| {
        let mode = HalfInt::from_twice(2 * (m + k.charge) - 1);
        let mut out = OmegaState::zero();
        wedge_to_omega(
            &mut out,
            &wedge::astar_act(mode, &k.wedge),
            lattice::mul_exp(-1, k.charge),
        );
        out
    })
}

pub fn z_act(sign: Sign, m: i64, s: &OmegaState) -> OmegaState {
    match sign {
        Sign::Plus => zplus_act(m, s),
        Sign::Minus => zminus_act(m, s),
    }
}

/// `(φ1, φ2) / -2` for `φi = ±α`.
pub fn bracket_exponent(s1: Sign, s2: Sign) -> i64 {
    -(s1.value() * s2.value())
}

/// Index past which every term of an `e = -1` generalized commutator sum
/// vanishes on `s`: a bound on how far a mode can move before it runs off
/// the finite perturbation of the vacuum.
pub fn termination_bound(m: i64, n: i64, s: &OmegaState) -> u32 {
    let mut hole = 0i64;
    let mut neg = 0i64;
    let mut charge = 0i64;
    for k in s.keys() {
        hole = hole.max(k.wedge.max_hole().minus_half() + 1);
        neg = neg.max((-k.wedge.min_index()).minus_half() + 1);
        charge = charge.max(k.charge.abs());
    }
    (hole + neg + m.abs() + n.abs() + 2 * charge + 2) as u32
}

/// Number of extra terms past the bound that must vanish.
const CERTIFY_EXTRA: u32 = 3;

fn bracket_term(s1: Sign, s2: Sign, m: i64, n: i64, k: i64, s: &OmegaState) -> OmegaState {
    // Z(φ1,z) Z(φ2,w) (w/z)^k contributes Z^{s1}(m-k) Z^{s2}(n+k) at z^{-m} w^{-n};
    // Z(φ2,w) Z(φ1,z) (z/w)^k contributes Z^{s2}(n-k) Z^{s1}(m+k).
    let left = z_act(s1, m - k, &z_act(s2, n + k, s));
    let right = z_act(s2, n - k, &z_act(s1, m + k, s));
    left - right
}

/// Coefficient of `z^{-m} w^{-n}` of the generalized commutator
/// `Z(φ1,z)Z(φ2,w)(1-w/z)^e - Z(φ2,w)Z(φ1,z)(1-z/w)^e` applied to `s`.
///
/// For `e = 1` the sum has two terms. For `e = -1` it is summed up to
/// [`termination_bound`] and the next few terms are checked to vanish.
pub fn gen_commutator(
    s1: Sign,
    s2: Sign,
    m: i64,
    n: i64,
    s: &OmegaState,
) -> Result<OmegaState, ZalgError> {
    let e = bracket_exponent(s1, s2);
    let last = if e >= 0 {
        e as u32
    } else {
        termination_bound(m, n, s)
    };
    let mut out = OmegaState::zero();
    for k in 0..=last {
        let c = binom_series_coeff(e, k);
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&bracket_term(s1, s2, m, n, i64::from(k), s), &c);
    }
    if e < 0 {
        for k in last + 1..=last + CERTIFY_EXTRA {
            if !bracket_term(s1, s2, m, n, i64::from(k), s).is_zero() {
                return Err(ZalgError::NoTerminationBound { bound: last, k });
            }
        }
    }
    Ok(out)
}

pub fn omega_embed(s: &OmegaState) -> State {
    s.iter()
        .map(|(k, c)| {
            (
                StateKey::new(FockMonomial::one(), k.wedge.clone(), k.charge),
                c.clone(),
            )
        })
        .collect()
}

pub fn omega_project(s: &State) -> Result<OmegaState, ZalgError> {
    let mut out = OmegaState::zero();
    for (k, c) in s {
        if !k.fock.is_one() {
            return Err(ZalgError::NotInVacuumSpace(k.fock.clone()));
        }
        out.add_term(OmegaKey::new(k.wedge.clone(), k.charge), c.clone());
    }
    Ok(out)
}

/// The `z^{-m}` coefficient of `Z^+(z) = E^-_+(z) X(z) E^-_-(z)` or
/// `Z^-(z) = E^+_+(z) Y(z) E^+_-(z)` on `V`, from the vertex operators of
/// [`rep`] and the Fock exponentials.
///
/// The outer creation order `a` is bounded because `X(j)` (resp. `Y(j)`)
/// vanishes once `j` exceeds the largest hole (resp. deepest negative index)
/// plus Fock degree plus `|p|`.
pub fn zop_via_definition(sign: Sign, m: i64, s: &State) -> State {
    let dress = sign.flip();
    let mut reach = 0i64;
    let mut fock_deg = 0i64;
    for k in s.keys() {
        let wedge_reach = match sign {
            Sign::Plus => k.wedge.max_hole().minus_half() + 1,
            Sign::Minus => (-k.wedge.min_index()).minus_half() + 1,
        };
        reach = reach.max(wedge_reach + k.charge.abs());
        fock_deg = fock_deg.max(i64::from(k.fock.degree()));
    }
    let mut out = State::zero();
    for c in -fock_deg..=0 {
        let inner = rep::on_fock(s, |f| fock::e_coeff(dress, Sign::Minus, c, f));
        if inner.is_zero() {
            continue;
        }
        let a_max = reach + fock_deg - m - c + 1;
        for a in 0..=a_max.max(0) {
            let j = m + a + c;
            let moved = match sign {
                Sign::Plus => rep::x_act(j, &inner),
                Sign::Minus => rep::y_act(j, &inner),
            };
            if moved.is_zero() {
                continue;
            }
            out.add_assign_ref(&rep::on_fock(&moved, |f| {
                fock::e_coeff(dress, Sign::Plus, a, f)
            }));
        }
    }
    out
}

/// Every basis vector of `Ω(V)` with wedge degree at most `max_wedge_deg`
/// and `|p| <= charge_bound`.
pub fn basis_omega(max_wedge_deg: u32, charge_bound: i64) -> Vec<OmegaKey> {
    let mut out = Vec::new();
    for p in -charge_bound..=charge_bound {
        for w in wedge::basis_up_to(max_wedge_deg) {
            out.push(OmegaKey::new(w, p));
        }
    }
    out.sort();
    out
}

/// `(2p - 2m) δ_{m+n,0}`: the `z^{-m} w^{-n}` coefficient of
/// `H(0)δ(w/z) - 2 w ∂_w δ(w/z)` on a charge-`p` vector.
pub fn plus_minus_expected(m: i64, n: i64, p: i64) -> Rational {
    if m + n != 0 {
        return Rational::zero();
    }
    Rational::from_int(lattice::alpha0_eig(p) - 2 * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn ok(neg: &[i64], holes: &[i64], p: i64) -> OmegaKey {
        OmegaKey::new(
            WedgeBasis::new(
                neg.iter().map(|&t| h(t)).collect(),
                holes.iter().map(|&t| h(t)).collect(),
            )
            .unwrap(),
            p,
        )
    }

    fn vac(p: i64) -> OmegaState {
        OmegaState::basis(ok(&[], &[], p))
    }

    #[test]
    fn zplus_examples() {
        assert!(zplus_act(0, &vac(0)).is_zero());
        assert_eq!(
            zplus_act(-1, &vac(0)),
            OmegaState::term(ok(&[-3], &[], 1), Rational::from_int(-2))
        );
        // matches the wedge/lattice part of X(-1) v0
        assert_eq!(
            omega_embed(&zplus_act(-1, &vac(0))),
            rep::x_act(-1, &rep::v0())
        );
    }

    #[test]
    fn zminus_examples() {
        assert!(zminus_act(0, &vac(0)).is_zero());
        assert!(zminus_act(1, &vac(0)).is_zero());
        // A*(-3/2) removes u_{3/2}, which sits behind u_{-1/2}: sign -1 times (-2)
        assert_eq!(
            zminus_act(-1, &vac(0)),
            OmegaState::term(ok(&[], &[3], -1), Rational::from_int(2))
        );
    }

    #[test]
    fn charges_shift_together() {
        for k in basis_omega(4, 2) {
            let s = OmegaState::basis(k.clone());
            for m in -4..=4 {
                for (out, d) in [(zplus_act(m, &s), 1), (zminus_act(m, &s), -1)] {
                    for (t, _) in &out {
                        assert_eq!(t.charge, k.charge + d);
                        assert_eq!(t.wedge.charge(), k.wedge.charge() + d);
                    }
                }
            }
        }
    }

    #[test]
    fn gen_commutator_examples() {
        let s = vac(0);
        assert!(gen_commutator(Sign::Plus, Sign::Minus, 0, 0, &s)
            .unwrap()
            .is_zero());
        assert_eq!(
            gen_commutator(Sign::Plus, Sign::Minus, 1, -1, &s).unwrap(),
            s.scale(&Rational::from_int(-2))
        );
        for m in -3..=3 {
            for n in -3..=3 {
                assert!(gen_commutator(Sign::Plus, Sign::Plus, m, n, &s)
                    .unwrap()
                    .is_zero());
                assert!(gen_commutator(Sign::Minus, Sign::Minus, m, n, &s)
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(bracket_exponent(Sign::Plus, Sign::Plus), -1);
        assert_eq!(bracket_exponent(Sign::Minus, Sign::Minus), -1);
        assert_eq!(bracket_exponent(Sign::Plus, Sign::Minus), 1);
    }

    #[test]
    fn embed_project() {
        let s = OmegaState::basis(ok(&[-5], &[3], 2)) + vac(-1);
        assert_eq!(omega_project(&omega_embed(&s)).unwrap(), s);
        assert_eq!(omega_project(&rep::v0()).unwrap(), vac(0));
        let bad = rep::h_act_full(-1, &rep::v0());
        assert!(matches!(
            omega_project(&bad),
            Err(ZalgError::NotInVacuumSpace(_))
        ));
    }

    #[test]
    fn vacuum_space_is_heisenberg_kernel() {
        for k in basis_omega(4, 2) {
            let s = omega_embed(&OmegaState::basis(k));
            for n in 1..=5 {
                assert!(rep::h_act_full(n, &s).is_zero());
            }
        }
    }

    #[test]
    fn definition_route_matches_closed_form_on_vacuum() {
        assert!(zop_via_definition(Sign::Plus, 0, &rep::v0()).is_zero());
        for k in basis_omega(3, 1) {
            let s = OmegaState::basis(k);
            for m in -2..=2 {
                assert_eq!(
                    zop_via_definition(Sign::Plus, m, &omega_embed(&s)),
                    omega_embed(&zplus_act(m, &s))
                );
                assert_eq!(
                    zop_via_definition(Sign::Minus, m, &omega_embed(&s)),
                    omega_embed(&zminus_act(m, &s))
                );
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = vac(1);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"terms":[{"coeff":"1","wedge":{"neg":[],"holes":[]},"charge":1}]}"#
        );
    }
}
