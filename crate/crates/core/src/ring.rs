//! Coefficient rings: the integers and prime fields.
//!
//! Every computation in this crate is exact. Matrix entries are arbitrary
//! precision integers; over a prime field they are kept as least nonnegative
//! residues mod p.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    /// The ring of integers.
    Int,
    /// The prime field F_p.
    Fp(u64),
}

impl Ring {
    pub fn is_field(self) -> bool {
        matches!(self, Ring::Fp(_))
    }

    /// Reduce a scalar to canonical form: least nonnegative residue for F_p,
    /// unchanged over Z.
    pub fn normalize(self, x: &BigInt) -> BigInt {
        match self {
            Ring::Int => x.clone(),
            Ring::Fp(p) => {
                let p = BigInt::from(p);
                let r = x % &p;
                if r.is_negative() {
                    r + p
                } else {
                    r
                }
            }
        }
    }

    pub fn is_zero(self, x: &BigInt) -> bool {
        self.normalize(x).is_zero()
    }

    /// Multiplicative inverse of a unit. Over Z only ±1 are invertible.
    pub fn inverse(self, x: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Int => {
                if x.abs().is_one() {
                    Some(x.clone())
                } else {
                    None
                }
            }
            Ring::Fp(p) => {
                let xn = self.normalize(x);
                if xn.is_zero() {
                    return None;
                }
                // extended Euclid mod p
                let p = BigInt::from(p);
                let (mut r0, mut r1) = (p.clone(), xn);
                let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
                while !r1.is_zero() {
                    let q = &r0 / &r1;
                    let r2 = &r0 - &q * &r1;
                    r0 = std::mem::replace(&mut r1, r2);
                    let t2 = &t0 - &q * &t1;
                    t0 = std::mem::replace(&mut t1, t2);
                }
                if !r0.is_one() {
                    return None;
                }
                Some(self.normalize(&t0))
            }
        }
    }

    /// Exact division where it is known (or to be tested) that d | x.
    pub fn try_div(self, x: &BigInt, d: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Int => {
                if d.is_zero() {
                    return x.is_zero().then(BigInt::zero);
                }
                let (q, r) = num_integer::Integer::div_rem(x, d);
                r.is_zero().then_some(q)
            }
            Ring::Fp(_) => {
                if self.is_zero(d) {
                    return self.is_zero(x).then(BigInt::zero);
                }
                let inv = self.inverse(d)?;
                Some(self.normalize(&(x * inv)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_mod_p() {
        let r = Ring::Fp(5);
        assert_eq!(r.normalize(&BigInt::from(-3)), BigInt::from(2));
        assert_eq!(r.normalize(&BigInt::from(12)), BigInt::from(2));
    }

    #[test]
    fn inverse_mod_p() {
        let r = Ring::Fp(7);
        for x in 1..7 {
            let inv = r.inverse(&BigInt::from(x)).unwrap();
            assert_eq!(r.normalize(&(inv * x)), BigInt::one());
        }
        assert!(r.inverse(&BigInt::zero()).is_none());
    }

    #[test]
    fn int_inverse_only_units() {
        assert!(Ring::Int.inverse(&BigInt::from(2)).is_none());
        assert_eq!(Ring::Int.inverse(&BigInt::from(-1)), Some(BigInt::from(-1)));
    }
}
