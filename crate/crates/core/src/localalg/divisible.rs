//! A concrete model of divisible abelian groups `QQ^a ⊕ ⊕_p ZZ(p^∞)^{m_p}`,
//! with injective hulls and cosyzygies of finitely generated abelian
//! groups computed in closed form.
//!
//! This is an independent oracle: it never touches Ext modules, so its
//! answers can be compared against the homological criteria in the parent
//! module.  The Prüfer multiplicity function is eventually constant
//! (a default value plus finitely many exceptions) because quotients like
//! `E(ZZ)/ZZ` genuinely involve every prime at once.

use crate::error::{Error, Result};
use crate::kernel::coeff::{factor_int, BaseRing};
use crate::kernel::ring::Ring;
use crate::modules::presentation::ModulePresentation;
use crate::spectrum::{PrimeIdeal, SpecSet};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// `QQ^rank ⊕ ⊕_p ZZ(p^∞)^{mult(p)}` where `mult` takes the value
/// `default_mult` at all but the finitely many exception primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibleGroup {
    rank: u64,
    default_mult: u64,
    exceptions: BTreeMap<BigInt, u64>,
}

impl DivisibleGroup {
    /// Canonical form: exceptions that agree with the default are dropped.
    pub fn new(rank: u64, default_mult: u64, exceptions: BTreeMap<BigInt, u64>) -> DivisibleGroup {
        let mut ex = exceptions;
        ex.retain(|_, m| *m != default_mult);
        DivisibleGroup {
            rank,
            default_mult,
            exceptions: ex,
        }
    }

    pub fn zero() -> DivisibleGroup {
        DivisibleGroup::new(0, 0, BTreeMap::new())
    }

    pub fn rationals(rank: u64) -> DivisibleGroup {
        DivisibleGroup::new(rank, 0, BTreeMap::new())
    }

    pub fn prufer(p: BigInt, mult: u64) -> DivisibleGroup {
        DivisibleGroup::new(0, 0, BTreeMap::from([(p, mult)]))
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn default_mult(&self) -> u64 {
        self.default_mult
    }

    pub fn exceptions(&self) -> &BTreeMap<BigInt, u64> {
        &self.exceptions
    }

    /// The Prüfer multiplicity at `p`.
    pub fn mult(&self, p: &BigInt) -> u64 {
        self.exceptions
            .get(p)
            .copied()
            .unwrap_or(self.default_mult)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.default_mult == 0 && self.exceptions.is_empty()
    }

    /// Is `(0)` an associated prime?  Exactly when a rational summand is
    /// present.
    pub fn ass_contains_zero(&self) -> bool {
        self.rank > 0
    }

    /// Is `(p)` an associated prime?  Exactly when a `ZZ(p^∞)` summand is
    /// present.
    pub fn ass_contains_prime(&self, p: &BigInt) -> bool {
        self.mult(p) > 0
    }
}

impl fmt::Display for DivisibleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("QQ^{}", self.rank));
        }
        for (p, m) in &self.exceptions {
            if *m > 0 {
                parts.push(format!("ZZ({p}^oo)^{m}"));
            }
        }
        if self.default_mult > 0 {
            parts.push(format!(
                "ZZ(p^oo)^{} for almost all p",
                self.default_mult
            ));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

fn require_integers(ring: &Ring, op: &'static str) -> Result<()> {
    if ring.is_scalar() && matches!(ring.base(), BaseRing::Int) {
        Ok(())
    } else {
        Err(Error::NotIntegerRing {
            op,
            ring: ring.to_string(),
        })
    }
}

/// Free rank and, for each prime, the number of cyclic `p`-power summands.
fn integer_shape(m: &ModulePresentation) -> Result<(u64, BTreeMap<BigInt, u64>)> {
    let (factors, free) = m.invariant_factors()?;
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    for d in factors {
        let v = d
            .as_integer()
            .ok_or_else(|| Error::Internal("integer invariant factor expected".into()))?;
        for (p, _) in factor_int(&v)? {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    Ok((free as u64, counts))
}

/// The injective hull of a finitely generated abelian group:
/// `E(ZZ^a ⊕ ⊕ ZZ/p^e) = QQ^a ⊕ ⊕ ZZ(p^∞)` with one Prüfer summand per
/// cyclic prime-power factor.
pub fn divisible_injective_hull(m: &ModulePresentation) -> Result<DivisibleGroup> {
    require_integers(m.ring(), "divisible_injective_hull")?;
    let (free, counts) = integer_shape(m)?;
    Ok(DivisibleGroup::new(free, 0, counts))
}

/// The `k`-th cosyzygy of a finitely generated abelian group, for `k ≥ 1`:
/// `℧_1 = E(M)/M` has rank 0, default Prüfer multiplicity `a` (the free
/// rank of `M`, since `QQ^a/ZZ^a = (QQ/ZZ)^a` meets every prime), and
/// exceptions `p ↦ a + c_p` at the torsion primes; `℧_k = 0` for `k ≥ 2`
/// because `℧_1` is already injective.
///
/// The degree-0 cosyzygy is the module itself — finitely generated, not
/// divisible — so `k = 0` is rejected; read `Ass(M)` off the invariant
/// factors instead (as `cosyzygy_ass_oracle` does).
pub fn divisible_cosyzygy(m: &ModulePresentation, k: usize) -> Result<DivisibleGroup> {
    require_integers(m.ring(), "divisible_cosyzygy")?;
    match k {
        0 => Err(Error::InvalidArgument(
            "the degree-0 cosyzygy is the module itself and is not divisible; \
             use its invariant factors directly"
                .into(),
        )),
        1 => {
            let (free, counts) = integer_shape(m)?;
            let exceptions = counts
                .into_iter()
                .map(|(p, c)| (p, free + c))
                .collect();
            Ok(DivisibleGroup::new(0, free, exceptions))
        }
        _ => Ok(DivisibleGroup::zero()),
    }
}

/// Associated-prime membership for a divisible group, keyed by a prime
/// ideal of `ZZ`.
pub fn divisible_ass(d: &DivisibleGroup, p: &PrimeIdeal) -> Result<bool> {
    require_integers(p.ring(), "divisible_ass")?;
    match p.ideal().scalar_canonical() {
        Some(None) => Ok(d.ass_contains_zero()),
        Some(Some(q)) => Ok(d.ass_contains_prime(&q)),
        None => Err(Error::Internal(
            "integer ideal without scalar canonical form".into(),
        )),
    }
}

/// The independent oracle for `p ∈ Ass(℧_k(M))` over the integers: degree 0
/// reads the invariant factors, higher degrees go through the divisible
/// model.
pub fn cosyzygy_ass_oracle(m: &ModulePresentation, k: usize, p: &PrimeIdeal) -> Result<bool> {
    require_integers(m.ring(), "cosyzygy_ass_oracle")?;
    require_integers(p.ring(), "cosyzygy_ass_oracle")?;
    if k == 0 {
        let (free, counts) = integer_shape(m)?;
        return match p.ideal().scalar_canonical() {
            Some(None) => Ok(free > 0),
            Some(Some(q)) => Ok(counts.contains_key(&q)),
            None => Err(Error::Internal(
                "integer ideal without scalar canonical form".into(),
            )),
        };
    }
    divisible_ass(&divisible_cosyzygy(m, k)?, p)
}

/// Does every homomorphism from `M` into `D` vanish?  Computed from the
/// classification: `Hom(ZZ, D) = D`, `Hom(ZZ/p^e, QQ) = 0`, and
/// `Hom(ZZ/p^e, ZZ(q^∞)) ≠ 0` iff `p = q`.
pub fn hom_vanishes_into(m: &ModulePresentation, d: &DivisibleGroup) -> Result<bool> {
    require_integers(m.ring(), "hom_vanishes_into")?;
    let (free, counts) = integer_shape(m)?;
    if free > 0 && !d.is_zero() {
        return Ok(false);
    }
    for p in counts.keys() {
        if d.mult(p) > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the divisible group free of `S`-torsion (`Γ_S(D) = 0`)?  The
/// `S`-torsion of `D` is the sum of its Prüfer parts at the maximal primes
/// of `S`; a rational summand has no torsion at all, but if `S` is the
/// whole spectrum every part of `D` is `S`-torsion.
pub fn divisible_torsion_free(d: &DivisibleGroup, s: &SpecSet) -> Result<bool> {
    require_integers(s.ring(), "divisible_torsion_free")?;
    let mut maximal = Vec::new();
    for p in s.minimal_primes() {
        match p.ideal().scalar_canonical() {
            Some(None) => return Ok(d.is_zero()),
            Some(Some(q)) => maximal.push(q),
            None => {
                return Err(Error::Internal(
                    "integer ideal without scalar canonical form".into(),
                ))
            }
        }
    }
    Ok(maximal.iter().all(|q| d.mult(q) == 0))
}

/// Is the support of the divisible group contained in `S`?  A rational
/// summand (or a nonzero default multiplicity, which touches almost every
/// prime) forces `S` to be the whole spectrum; otherwise each Prüfer prime
/// must lie in `S`.
pub fn divisible_supp_in(d: &DivisibleGroup, s: &SpecSet) -> Result<bool> {
    require_integers(s.ring(), "divisible_supp_in")?;
    let ring = s.ring();
    let whole = s.contains_prime(&PrimeIdeal::new(crate::kernel::ideal::Ideal::zero(ring))?)?;
    if whole {
        return Ok(true);
    }
    if d.rank > 0 || d.default_mult > 0 {
        return Ok(false);
    }
    for (q, m) in &d.exceptions {
        if *m == 0 {
            continue;
        }
        let p = PrimeIdeal::new(crate::kernel::ideal::Ideal::principal(
            &ring.from_bigint(q.clone()),
        ))?;
        if !s.contains_prime(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ideal::Ideal;
    use crate::spectrum::SpecSet;

    fn zz() -> Ring {
        Ring::integers()
    }

    fn z_mod(n: i64) -> ModulePresentation {
        let r = zz();
        ModulePresentation::from_diagonal(&r, &[r.from_i64(n)]).unwrap()
    }

    fn int_prime(p: i64) -> PrimeIdeal {
        PrimeIdeal::new(Ideal::principal(&zz().from_i64(p))).unwrap()
    }

    fn zero_prime() -> PrimeIdeal {
        PrimeIdeal::new(Ideal::zero(&zz())).unwrap()
    }

    #[test]
    fn hull_of_z_is_the_rationals() {
        let e = divisible_injective_hull(&ModulePresentation::free(&zz(), 1)).unwrap();
        assert_eq!(e, DivisibleGroup::rationals(1));
        assert_eq!(e.to_string(), "QQ^1");
    }

    #[test]
    fn hull_of_z12_is_two_prufer_groups() {
        let e = divisible_injective_hull(&z_mod(12)).unwrap();
        assert_eq!(e.rank(), 0);
        assert_eq!(e.mult(&BigInt::from(2)), 1);
        assert_eq!(e.mult(&BigInt::from(3)), 1);
        assert_eq!(e.mult(&BigInt::from(5)), 0);
        assert_eq!(e.to_string(), "ZZ(2^oo)^1 ⊕ ZZ(3^oo)^1");
    }

    #[test]
    fn first_cosyzygy_of_z_is_q_mod_z() {
        let u = divisible_cosyzygy(&ModulePresentation::free(&zz(), 1), 1).unwrap();
        assert_eq!(u.rank(), 0);
        assert_eq!(u.default_mult(), 1);
        assert!(u.exceptions().is_empty(), "Q/Z has every prime exactly once");
        for p in [2i64, 3, 97] {
            assert!(u.ass_contains_prime(&BigInt::from(p)));
        }
        assert!(!u.ass_contains_zero());
    }

    #[test]
    fn first_cosyzygy_of_z12() {
        let u = divisible_cosyzygy(&z_mod(12), 1).unwrap();
        assert_eq!(u.rank(), 0);
        assert_eq!(u.default_mult(), 0);
        assert_eq!(u.mult(&BigInt::from(2)), 1);
        assert_eq!(u.mult(&BigInt::from(3)), 1);
        assert_eq!(u.mult(&BigInt::from(7)), 0);
    }

    #[test]
    fn first_cosyzygy_of_mixed_module() {
        // Z^2 ⊕ Z/4: E = QQ^2 ⊕ ZZ(2^oo); ℧_1 = (QQ/ZZ)^2 ⊕ ZZ(2^oo).
        let r = zz();
        let m =
            ModulePresentation::from_diagonal(&r, &[r.zero(), r.zero(), r.from_i64(4)]).unwrap();
        let u = divisible_cosyzygy(&m, 1).unwrap();
        assert_eq!(u.rank(), 0);
        assert_eq!(u.default_mult(), 2);
        assert_eq!(u.mult(&BigInt::from(2)), 3);
        assert_eq!(u.mult(&BigInt::from(3)), 2);
    }

    #[test]
    fn higher_cosyzygies_vanish() {
        for m in [z_mod(12), ModulePresentation::free(&zz(), 2)] {
            for k in 2..=4 {
                assert!(divisible_cosyzygy(&m, k).unwrap().is_zero());
            }
        }
        assert!(divisible_cosyzygy(&z_mod(6), 0).is_err(), "degree 0 is not divisible");
    }

    #[test]
    fn oracle_agrees_with_homological_route() {
        use crate::localalg::cosyzygy_ass_membership;
        let r = zz();
        let modules = [
            z_mod(12),
            z_mod(8),
            ModulePresentation::free(&r, 1),
            ModulePresentation::from_diagonal(&r, &[r.zero(), r.from_i64(6)]).unwrap(),
        ];
        let primes = [zero_prime(), int_prime(2), int_prime(3), int_prime(5)];
        for m in &modules {
            for p in &primes {
                for k in 0..=2 {
                    assert_eq!(
                        cosyzygy_ass_oracle(m, k, p).unwrap(),
                        cosyzygy_ass_membership(p, k, m).unwrap(),
                        "oracle disagreement at {p}, k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn hom_into_divisible_groups() {
        let m = z_mod(4);
        assert!(hom_vanishes_into(&m, &DivisibleGroup::prufer(BigInt::from(3), 1)).unwrap());
        assert!(!hom_vanishes_into(&m, &DivisibleGroup::prufer(BigInt::from(2), 1)).unwrap());
        assert!(hom_vanishes_into(&m, &DivisibleGroup::rationals(1)).unwrap());
        let z = ModulePresentation::free(&zz(), 1);
        assert!(!hom_vanishes_into(&z, &DivisibleGroup::rationals(1)).unwrap());
        assert!(hom_vanishes_into(&z, &DivisibleGroup::zero()).unwrap());
    }

    #[test]
    fn torsion_characterization_via_hulls() {
        use crate::localalg::torsion_class_member;
        // M ∈ T(S) iff Hom(M, E(ZZ/q)) = 0 for every q outside S.
        let s = SpecSet::from_primes(&zz(), vec![int_prime(2)]).unwrap();
        let inside = z_mod(4);
        let outside = z_mod(6);
        for q in [3i64, 5, 7] {
            let hull = DivisibleGroup::prufer(BigInt::from(q), 1);
            assert!(hom_vanishes_into(&inside, &hull).unwrap());
        }
        assert!(!hom_vanishes_into(&outside, &DivisibleGroup::prufer(BigInt::from(3), 1)).unwrap());
        assert!(torsion_class_member(&inside, &s).unwrap());
        assert!(!torsion_class_member(&outside, &s).unwrap());
    }

    #[test]
    fn hulls_and_torsion_pairs() {
        let s = SpecSet::from_primes(&zz(), vec![int_prime(2)]).unwrap();
        // q outside S: E(ZZ/q) is S-torsion-free.
        for q in [3i64, 5] {
            let hull = DivisibleGroup::prufer(BigInt::from(q), 1);
            assert!(divisible_torsion_free(&hull, &s).unwrap());
        }
        // p inside S: E(ZZ/p) is supported inside S.
        let hull2 = DivisibleGroup::prufer(BigInt::from(2), 1);
        assert!(divisible_supp_in(&hull2, &s).unwrap());
        assert!(!divisible_torsion_free(&hull2, &s).unwrap());
        // QQ is supported everywhere: only the whole spectrum contains it.
        let whole = SpecSet::from_primes(&zz(), vec![zero_prime()]).unwrap();
        assert!(divisible_supp_in(&DivisibleGroup::rationals(1), &whole).unwrap());
        assert!(!divisible_supp_in(&DivisibleGroup::rationals(1), &s).unwrap());
    }

    #[test]
    fn canonical_form_drops_redundant_exceptions() {
        let d = DivisibleGroup::new(0, 1, BTreeMap::from([(BigInt::from(2), 1)]));
        assert!(d.exceptions().is_empty(), "exception equal to default is dropped");
        assert_eq!(d.mult(&BigInt::from(2)), 1);
    }
}
