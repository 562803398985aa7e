//! Base rings of scalars and exact coefficient arithmetic.
//!
//! Every ring in the library is a polynomial ring (possibly with zero
//! variables, possibly modulo an ideal) over one of three scalar bases:
//! the integers, the rationals, or the integers modulo `n`.  Coefficients
//! are stored as exact big integers or big rationals; residues modulo `n`
//! are kept reduced into `0..n`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The scalar base of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// The ring of integers `ZZ`.
    Int,
    /// The field of rationals `QQ`.
    Rat,
    /// Integers modulo `n` (`n >= 2`); `prime` records whether `n` is a
    /// certified prime, in which case this base is the field `GF(n)`.
    Mod { n: BigInt, prime: bool },
}

impl BaseRing {
    /// Integers modulo `n`, certifying primality along the way.
    pub fn modulo(n: BigInt) -> Result<BaseRing> {
        if n < BigInt::from(2) {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        let prime = is_prime(&n);
        Ok(BaseRing::Mod { n, prime })
    }

    /// The prime field `GF(p)`; errors if `p` is not prime.
    pub fn prime_field(p: BigInt) -> Result<BaseRing> {
        if !is_prime(&p) {
            return Err(Error::InvalidArgument(format!(
                "GF modulus {p} is not prime"
            )));
        }
        Ok(BaseRing::Mod { n: p, prime: true })
    }

    pub fn is_field(&self) -> bool {
        match self {
            BaseRing::Int => false,
            BaseRing::Rat => true,
            BaseRing::Mod { prime, .. } => *prime,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            BaseRing::Rat => Coeff::Rat(BigRational::zero()),
            _ => Coeff::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            BaseRing::Rat => Coeff::Rat(BigRational::one()),
            _ => Coeff::Int(BigInt::one()),
        }
    }

    /// Brings a raw coefficient into canonical form for this base.
    pub fn normalize(&self, c: Coeff) -> Coeff {
        match (self, c) {
            (BaseRing::Int, Coeff::Int(a)) => Coeff::Int(a),
            (BaseRing::Mod { n, .. }, Coeff::Int(a)) => Coeff::Int(a.mod_floor(n)),
            (BaseRing::Rat, Coeff::Rat(a)) => Coeff::Rat(a),
            (BaseRing::Rat, Coeff::Int(a)) => Coeff::Rat(BigRational::from(a)),
            (_, Coeff::Rat(a)) => {
                // Only integral rationals can re-enter an integer base.
                debug_assert!(a.is_integer(), "rational coefficient in integer base");
                self.normalize(Coeff::Int(a.to_integer()))
            }
        }
    }

    pub fn coeff_from_int(&self, a: BigInt) -> Coeff {
        self.normalize(Coeff::Int(a))
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Int(x), Coeff::Rat(y)) => Coeff::Rat(BigRational::from(x.clone()) + y),
            (Coeff::Rat(x), Coeff::Int(y)) => Coeff::Rat(x + BigRational::from(y.clone())),
        })
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Int(x), Coeff::Rat(y)) => Coeff::Rat(BigRational::from(x.clone()) * y),
            (Coeff::Rat(x), Coeff::Int(y)) => Coeff::Rat(x * BigRational::from(y.clone())),
        })
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(match a {
            Coeff::Int(x) => Coeff::Int(-x),
            Coeff::Rat(x) => Coeff::Rat(-x),
        })
    }

    /// Multiplicative inverse; defined only over fields and for units.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if a.is_zero() {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        match (self, a) {
            (BaseRing::Rat, Coeff::Rat(x)) => Ok(Coeff::Rat(x.recip())),
            (BaseRing::Mod { n, .. }, Coeff::Int(x)) => {
                let (g, s, _) = extended_gcd(x, n);
                if !g.is_one() {
                    return Err(Error::Arithmetic(format!(
                        "{x} is not a unit modulo {n}"
                    )));
                }
                Ok(Coeff::Int(s.mod_floor(n)))
            }
            (BaseRing::Int, Coeff::Int(x)) => {
                if x.is_one() || (-x).is_one() {
                    Ok(Coeff::Int(x.clone()))
                } else {
                    Err(Error::Arithmetic(format!("{x} is not a unit in ZZ")))
                }
            }
            _ => Err(Error::Internal("coefficient/base mismatch in inv".into())),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Int(x) => x.is_one(),
            Coeff::Rat(x) => x.is_one(),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Int => write!(f, "ZZ"),
            BaseRing::Rat => write!(f, "QQ"),
            BaseRing::Mod { n, prime: true } => write!(f, "GF({n})"),
            BaseRing::Mod { n, prime: false } => write!(f, "Z/{n}"),
        }
    }
}

/// An exact scalar: a big integer (also used for residues mod `n`) or a big
/// rational.  Which variant is legal is determined by the owning [`BaseRing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(x) => x.is_zero(),
            Coeff::Rat(x) => x.is_zero(),
        }
    }

    /// The underlying integer, for integer-based coefficients.
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Coeff::Int(x) => Some(x),
            Coeff::Rat(_) => None,
        }
    }

    pub fn from_i64(v: i64) -> Coeff {
        Coeff::Int(BigInt::from(v))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(x) => write!(f, "{x}"),
            Coeff::Rat(x) => {
                if x.is_integer() {
                    write!(f, "{}", x.to_integer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}

/// Extended gcd: returns `(g, s, t)` with `g = gcd(a, b) >= 0` and
/// `s*a + t*b = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Deterministic primality test for the integer sizes this library works at.
///
/// Uses trial division by small primes followed by Miller-Rabin with the base
/// set that is proven deterministic below `3.3 * 10^24`.  Larger inputs are
/// conservatively rejected (callers must assert primality explicitly).
pub fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    let small: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    for p in small {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    // Deterministic Miller-Rabin bound: 3,317,044,064,679,887,385,961,981.
    let bound: BigInt = "3317044064679887385961981".parse().unwrap();
    if n >= &bound {
        return false;
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors `n > 0` into prime powers, returned as ascending `(p, e)` pairs.
///
/// Trial division up to `10^6` followed by a primality check on the cofactor;
/// inputs with two prime factors above `10^6` are reported as unfactorable
/// rather than silently mis-handled.
pub fn factor_int(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() || n.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "factor_int expects a positive integer, got {n}"
        )));
    }
    let mut m = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= limit {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        push(d.clone(), e, &mut out);
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if !m.is_one() {
        if is_prime(&m) {
            push(m, 1, &mut out);
        } else {
            return Err(Error::FactorizationFailed {
                value: n.to_string(),
                reason: format!("cofactor {m} exceeds the trial-division range and is composite"),
            });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn primality_small_and_medium() {
        assert!(is_prime(&int(2)));
        assert!(is_prime(&int(3)));
        assert!(!is_prime(&int(1)));
        assert!(!is_prime(&int(0)));
        assert!(!is_prime(&int(91))); // 7 * 13
        assert!(is_prime(&int(104729)));
        assert!(is_prime(&int(2147483647)));
        assert!(!is_prime(&(BigInt::from(2147483647i64) * 613)));
    }

    #[test]
    fn factoring_composites() {
        let f = factor_int(&int(360)).unwrap();
        assert_eq!(f, vec![(int(2), 3), (int(3), 2), (int(5), 1)]);
        let f = factor_int(&int(1)).unwrap();
        assert!(f.is_empty());
        let f = factor_int(&int(97)).unwrap();
        assert_eq!(f, vec![(int(97), 1)]);
    }

    #[test]
    fn mod_inverse_roundtrip() {
        let base = BaseRing::modulo(int(12)).unwrap();
        assert!(!base.is_field());
        let five = base.coeff_from_int(int(5));
        let inv = base.inv(&five).unwrap();
        assert!(base.is_one(&base.mul(&five, &inv)));
        assert!(base.inv(&base.coeff_from_int(int(4))).is_err());
    }

    #[test]
    fn gf_requires_prime() {
        assert!(BaseRing::prime_field(int(7)).is_ok());
        assert!(BaseRing::prime_field(int(12)).is_err());
    }

    #[test]
    fn residues_are_reduced() {
        let base = BaseRing::modulo(int(6)).unwrap();
        let c = base.coeff_from_int(int(-1));
        assert_eq!(c, Coeff::Int(int(5)));
    }
}
