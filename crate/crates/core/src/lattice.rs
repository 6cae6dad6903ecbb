//! The group algebra `C[Zα]` with `(α, α) = 2`. A basis element `e^{pα}` is
//! represented by its charge `p`.

use crate::scalars::Rational;

/// `e^{bα} · e^{pα} = e^{(p+b)α}`.
pub fn mul_exp(b: i64, p: i64) -> i64 {
    p + b
}

/// `(α, pα) = 2p`: the eigenvalue of `α(0) = H(0)` on `e^{pα}`.
pub fn alpha0_eig(p: i64) -> i64 {
    2 * p
}

/// `d · e^{pα} = -(1/4)(pα, pα) e^{pα} = -(p^2/2) e^{pα}`.
pub fn lattice_d_eig(p: i64) -> Rational {
    Rational::new(-p * p, 2)
}

/// Twice the grade `p^2/2` contributed to the character by `e^{pα}`.
pub fn twice_grade(p: i64) -> i64 {
    p * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(mul_exp(1, 0), 1);
        assert_eq!(mul_exp(-1, -1), -2);
        assert_eq!(mul_exp(0, 7), 7);
        assert_eq!(alpha0_eig(0), 0);
        assert_eq!(alpha0_eig(1), 2);
        assert_eq!(alpha0_eig(-1), -2);
        assert_eq!(lattice_d_eig(0), 0);
        assert_eq!(lattice_d_eig(-1), Rational::new(-1, 2));
        assert_eq!(lattice_d_eig(2), -2);
    }

    proptest! {
        #[test]
        fn alpha0_additive(p in -100i64..100, b in -100i64..100) {
            prop_assert_eq!(alpha0_eig(mul_exp(b, p)), alpha0_eig(p) + 2 * b);
        }

        #[test]
        fn d_charge_symmetric(p in -1000i64..1000) {
            prop_assert_eq!(lattice_d_eig(p), lattice_d_eig(-p));
        }
    }
}
