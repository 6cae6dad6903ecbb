use proptest::prelude::*;
use sl2crit::harness::zop_closed_form_on_v;
use sl2crit::rep::{self, Chevalley};
use sl2crit::zalg::{self, OmegaState};
use sl2crit::{FockMonomial, OmegaKey, Rational, Sign, State, StateKey, WedgeBasis};

fn keys(max_twice_deg: i64) -> Vec<StateKey> {
    rep::basis_states(max_twice_deg, 2)
}

fn state_strategy(max_twice_deg: i64) -> impl Strategy<Value = State> {
    let pool = keys(max_twice_deg);
    let n = pool.len();
    prop::collection::vec((0..n, -6i64..7, 1i64..5), 0..5).prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(i, a, b)| (pool[i].clone(), Rational::new(a, b)))
            .collect()
    })
}

fn sign_strategy() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

/// `ad(a)^3 b` expanded as `sum_k (-1)^k C(3,k) a^{3-k} b a^k`.
fn ad_cubed(a: Chevalley, b: Chevalley, s: &State) -> State {
    let pow = |k: usize, v: &State| (0..k).fold(v.clone(), |acc, _| rep::chevalley_act(a, &acc));
    let mut out = State::zero();
    for (k, c) in [(0usize, 1i64), (1, -3), (2, 3), (3, -1)] {
        let v = pow(3 - k, &rep::chevalley_act(b, &pow(k, s)));
        out.add_scaled(&v, &Rational::from_int(c));
    }
    out
}

#[test]
fn serre_relations_on_low_states() {
    use Chevalley::*;
    for k in keys(4) {
        let s = State::basis(k.clone());
        for (a, b) in [(E0, E1), (E1, E0), (F0, F1), (F1, F0)] {
            assert!(ad_cubed(a, b, &s).is_zero(), "ad({a})^3 {b} on {k:?}");
        }
        for (e, f) in [(E0, F1), (E1, F0)] {
            let c = rep::chevalley_act(e, &rep::chevalley_act(f, &s))
                - rep::chevalley_act(f, &rep::chevalley_act(e, &s));
            assert!(c.is_zero(), "[{e},{f}] on {k:?}");
        }
    }
}

#[test]
fn omega_state_json_has_no_fock_field() {
    let s = OmegaState::basis(OmegaKey::new(WedgeBasis::vacuum(), -1));
    assert_eq!(
        serde_json::to_string(&s).unwrap(),
        r#"{"terms":[{"coeff":"1","wedge":{"neg":[],"holes":[]},"charge":-1}]}"#
    );
}

#[test]
fn malformed_states_are_rejected() {
    for bad in [
        r#"{"terms":[{"coeff":"1","fock":[0],"wedge":{"neg":[],"holes":[]},"charge":0}]}"#,
        r#"{"terms":[{"coeff":"1","fock":[],"wedge":{"neg":["1/2"],"holes":[]},"charge":0}]}"#,
        r#"{"terms":[{"coeff":"1","fock":[],"wedge":{"neg":[],"holes":["-1/2"]},"charge":0}]}"#,
        r#"{"terms":[{"coeff":"1/0","fock":[],"wedge":{"neg":[],"holes":[]},"charge":0}]}"#,
        r#"{"terms":[{"coeff":"1","fock":[],"wedge":{"neg":["-3/2","-3/2"],"holes":[]},"charge":0}]}"#,
    ] {
        assert!(serde_json::from_str::<State>(bad).is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_json_round_trip(s in state_strategy(6)) {
        let text = serde_json::to_string(&s).unwrap();
        let back: State = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn operators_are_linear(a in state_strategy(4), b in state_strategy(4), m in -3i64..4, r in -3i64..4) {
        let r = Rational::from_int(r);
        let combo = a.clone() + b.scale(&r);
        prop_assert_eq!(rep::x_act(m, &combo), rep::x_act(m, &a) + rep::x_act(m, &b).scale(&r));
        prop_assert_eq!(rep::y_act(m, &combo), rep::y_act(m, &a) + rep::y_act(m, &b).scale(&r));
    }

    #[test]
    fn d_is_diagonal_with_grade_eigenvalues(s in state_strategy(6)) {
        let d = rep::d_act(&s);
        let expected: State = s.iter().map(|(k, c)| (k.clone(), c * &k.d_eigenvalue())).collect();
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn x_raises_charge_and_y_lowers_it(s in state_strategy(4), m in -3i64..4) {
        let charges = |v: &State| v.keys().map(|k| k.charge).collect::<Vec<_>>();
        let before: Vec<i64> = charges(&s);
        for c in charges(&rep::x_act(m, &s)) {
            prop_assert!(before.contains(&(c - 1)));
        }
        for c in charges(&rep::y_act(m, &s)) {
            prop_assert!(before.contains(&(c + 1)));
        }
    }

    #[test]
    fn xy_bracket_on_random_states(s in state_strategy(4), m in -2i64..3, n in -2i64..3) {
        let lhs = rep::x_act(m, &rep::y_act(n, &s)) - rep::y_act(n, &rep::x_act(m, &s));
        let mut rhs = rep::h_act_full(m + n, &s);
        if m + n == 0 {
            rhs.add_scaled(&s, &Rational::from_int(rep::LEVEL * m));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dressed_z_equals_closed_form_on_v(s in state_strategy(4), sign in sign_strategy(), m in -3i64..4) {
        prop_assert_eq!(zalg::zop_via_definition(sign, m, &s), zop_closed_form_on_v(sign, m, &s));
    }

    #[test]
    fn z_keeps_the_vacuum_space(neg in prop::collection::btree_set(0i64..4, 0..3), p in -2i64..3, sign in sign_strategy(), m in -3i64..4) {
        let w = WedgeBasis::new(neg.iter().map(|&k| sl2crit::HalfInt::half_odd(-k - 2)).collect(), vec![]).unwrap();
        let s = OmegaState::basis(OmegaKey::new(w, p));
        let image = zalg::omega_embed(&zalg::z_act(sign, m, &s));
        prop_assert!(image.keys().all(|k| k.fock == FockMonomial::one()));
        for n in 1..4 {
            prop_assert!(rep::h_act_full(n, &image).is_zero());
        }
    }
}
