//! Ring descriptors and canonical-form ring elements.
//!
//! A [`Ring`] is one of:
//!
//! * `ZZ` or `ZZ/n` — scalar rings with no variables;
//! * `QQ` or `GF(p)` — scalar fields;
//! * a polynomial ring over `QQ` or `GF(p)` in named variables, optionally
//!   modulo an ideal (stored as its reduced Gröbner basis in the free cover).
//!
//! Polynomial rings over `ZZ` or over composite `ZZ/n` are rejected: ideal
//! arithmetic there would need Gröbner machinery over non-fields, which is
//! outside this library's remit.  Every [`RingElement`] is kept in canonical
//! form — terms sorted under grevlex, coefficients normalized, and (in a
//! quotient ring) reduced to the normal form modulo the quotient basis — so
//! equality of elements is plain structural equality.

use super::coeff::{BaseRing, Coeff};
use super::groebner::{basis_is_unit, groebner_basis};
use super::poly::{normal_form, MonoOrder, Poly};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Debug)]
struct RingData {
    base: BaseRing,
    vars: Vec<String>,
    /// Quotient ideal generators as given, in the free cover (empty = free).
    quotient_gens: Vec<Poly>,
    /// Reduced Gröbner basis of the quotient ideal in the free cover.
    quotient_basis: Vec<Poly>,
}

/// A shared, immutable ring descriptor.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    /// The ring of integers `ZZ`.
    pub fn integers() -> Ring {
        Ring(Arc::new(RingData {
            base: BaseRing::Int,
            vars: Vec::new(),
            quotient_gens: Vec::new(),
            quotient_basis: Vec::new(),
        }))
    }

    /// The field of rationals `QQ`.
    pub fn rationals() -> Ring {
        Ring(Arc::new(RingData {
            base: BaseRing::Rat,
            vars: Vec::new(),
            quotient_gens: Vec::new(),
            quotient_basis: Vec::new(),
        }))
    }

    /// Integers modulo `n >= 2`.
    pub fn integers_mod(n: BigInt) -> Result<Ring> {
        Ok(Ring(Arc::new(RingData {
            base: BaseRing::modulo(n)?,
            vars: Vec::new(),
            quotient_gens: Vec::new(),
            quotient_basis: Vec::new(),
        })))
    }

    /// The prime field `GF(p)`.
    pub fn prime_field(p: BigInt) -> Result<Ring> {
        Ok(Ring(Arc::new(RingData {
            base: BaseRing::prime_field(p)?,
            vars: Vec::new(),
            quotient_gens: Vec::new(),
            quotient_basis: Vec::new(),
        })))
    }

    /// A polynomial ring over `base` in the given variables.
    ///
    /// With at least one variable the base must be a field; `ZZ[x]` and
    /// composite `Z/n[x]` are unsupported.
    pub fn polynomial(base: BaseRing, vars: Vec<String>) -> Result<Ring> {
        if !vars.is_empty() && !base.is_field() {
            return Err(Error::UnsupportedRing {
                op: "polynomial ring construction",
                ring: format!("{base}[{}]", vars.join(",")),
                reason: "polynomial variables require field coefficients (QQ or GF(p))".into(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingData {
            base,
            vars,
            quotient_gens: Vec::new(),
            quotient_basis: Vec::new(),
        })))
    }

    /// The quotient of a free polynomial ring by the ideal its generators
    /// span.  Rejects the unit ideal (the zero ring) and quotients of rings
    /// that are not free polynomial rings over a field.
    pub fn quotient(cover: &Ring, gens: &[RingElement]) -> Result<Ring> {
        if !cover.is_free_poly() || cover.nvars() == 0 {
            return Err(Error::UnsupportedRing {
                op: "quotient ring construction",
                ring: cover.to_string(),
                reason: "quotients are formed from free polynomial rings over a field".into(),
            });
        }
        let mut polys = Vec::new();
        for g in gens {
            cover.check_same(&g.ring)?;
            if !g.poly.is_zero() {
                polys.push(g.poly.clone());
            }
        }
        let basis = groebner_basis(&polys, MonoOrder::Grevlex, cover.base());
        if basis_is_unit(&basis) {
            return Err(Error::InvalidArgument(
                "quotient by the unit ideal is the zero ring".into(),
            ));
        }
        Ok(Ring(Arc::new(RingData {
            base: cover.base().clone(),
            vars: cover.vars().to_vec(),
            quotient_gens: polys,
            quotient_basis: basis,
        })))
    }

    pub fn base(&self) -> &BaseRing {
        &self.0.base
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    /// True when this is a free polynomial ring (no quotient), including the
    /// zero-variable scalar rings.
    pub fn is_free_poly(&self) -> bool {
        self.0.quotient_basis.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.0.vars.is_empty()
    }

    /// The free polynomial ring this ring is a quotient of (itself if free).
    pub fn cover(&self) -> Ring {
        if self.is_free_poly() {
            self.clone()
        } else {
            Ring(Arc::new(RingData {
                base: self.0.base.clone(),
                vars: self.0.vars.clone(),
                quotient_gens: Vec::new(),
                quotient_basis: Vec::new(),
            }))
        }
    }

    pub(crate) fn quotient_basis(&self) -> &[Poly] {
        &self.0.quotient_basis
    }

    pub(crate) fn quotient_gens(&self) -> &[Poly] {
        &self.0.quotient_gens
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: self.clone(),
            poly: Poly::zero(),
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_bigint(BigInt::from(1))
    }

    pub fn from_bigint(&self, v: BigInt) -> RingElement {
        let c = self.base().coeff_from_int(v);
        self.element_from_poly(Poly::constant(c, self.nvars(), self.base()))
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        self.from_bigint(BigInt::from(v))
    }

    /// The `i`-th variable as an element.
    pub fn var(&self, i: usize) -> Result<RingElement> {
        if i >= self.nvars() {
            return Err(Error::InvalidArgument(format!(
                "ring {self} has no variable #{i}"
            )));
        }
        Ok(self.element_from_poly(Poly::var(i, self.nvars(), self.base())))
    }

    /// Looks a variable up by name.
    pub fn var_named(&self, name: &str) -> Result<RingElement> {
        match self.vars().iter().position(|v| v == name) {
            Some(i) => self.var(i),
            None => Err(Error::InvalidArgument(format!(
                "ring {self} has no variable `{name}`"
            ))),
        }
    }

    /// Wraps a raw polynomial, normalizing into canonical form.
    pub(crate) fn element_from_poly(&self, poly: Poly) -> RingElement {
        let poly = Poly::normalized(poly.terms, MonoOrder::Grevlex, self.base());
        let poly = if self.0.quotient_basis.is_empty() {
            poly
        } else {
            normal_form(&poly, &self.0.quotient_basis, MonoOrder::Grevlex, self.base())
        };
        RingElement {
            ring: self.clone(),
            poly,
        }
    }

    /// Structural equality check with a useful error.
    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }

    /// The canonical integer value of a scalar-ring element.
    pub(crate) fn scalar_value(&self, e: &RingElement) -> Option<BigInt> {
        if !self.is_scalar() {
            return None;
        }
        match e.poly.constant_value(self.base())? {
            Coeff::Int(v) => Some(v),
            Coeff::Rat(_) => None,
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.base == other.0.base
                && self.0.vars == other.0.vars
                && self.0.quotient_basis == other.0.quotient_basis)
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.base.hash(state);
        self.0.vars.hash(state);
        self.0.quotient_basis.hash(state);
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.base)?;
        if !self.0.vars.is_empty() {
            write!(f, "[{}]", self.0.vars.join(","))?;
        }
        if !self.0.quotient_gens.is_empty() {
            let gens: Vec<String> = self
                .0
                .quotient_gens
                .iter()
                .map(|p| p.display(&self.0.vars))
                .collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

/// An element of a [`Ring`], stored in canonical form.  Structural equality
/// is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    poly: Poly,
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub(crate) fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly.is_constant()
            && self
                .poly
                .constant_value(self.ring.base())
                .is_some_and(|c| self.ring.base().is_one(&c))
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.ring.check_same(&other.ring)?;
        Ok(self.ring.element_from_poly(self.poly.add(
            &other.poly,
            MonoOrder::Grevlex,
            self.ring.base(),
        )))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.ring.check_same(&other.ring)?;
        Ok(self.ring.element_from_poly(self.poly.sub(
            &other.poly,
            MonoOrder::Grevlex,
            self.ring.base(),
        )))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.ring.check_same(&other.ring)?;
        Ok(self.ring.element_from_poly(self.poly.mul(
            &other.poly,
            MonoOrder::Grevlex,
            self.ring.base(),
        )))
    }

    pub fn neg(&self) -> RingElement {
        self.ring
            .element_from_poly(self.poly.neg(self.ring.base()))
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// The canonical integer value, for scalar rings.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.ring.scalar_value(self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display(self.ring.vars()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq_xy() -> Ring {
        Ring::polynomial(
            BaseRing::Rat,
            vec!["x".to_string(), "y".to_string()],
        )
        .unwrap()
    }

    #[test]
    fn integer_poly_ring_rejected() {
        let err = Ring::polynomial(BaseRing::Int, vec!["x".to_string()]);
        assert!(matches!(err, Err(Error::UnsupportedRing { .. })));
        let base = BaseRing::modulo(BigInt::from(12)).unwrap();
        let err = Ring::polynomial(base, vec!["x".to_string()]);
        assert!(matches!(err, Err(Error::UnsupportedRing { .. })));
    }

    #[test]
    fn canonical_equality_in_quotient() {
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let x2 = x.pow(2);
        let xy = x.mul(&y).unwrap();
        let q = Ring::quotient(&r, &[x2, xy]).unwrap();
        // In QQ[x,y]/(x^2, x*y): x^3 + x*y == 0 and x + y == x + y.
        let xq = q.var_named("x").unwrap();
        let yq = q.var_named("y").unwrap();
        let e = xq.pow(3).add(&xq.mul(&yq).unwrap()).unwrap();
        assert!(e.is_zero());
        let f = xq.add(&yq).unwrap();
        assert!(!f.is_zero());
        assert_eq!(f, yq.add(&xq).unwrap());
    }

    #[test]
    fn residue_arithmetic_mod_n() {
        let z12 = Ring::integers_mod(BigInt::from(12)).unwrap();
        let a = z12.from_i64(7);
        let b = z12.from_i64(9);
        assert_eq!(a.add(&b).unwrap(), z12.from_i64(4));
        assert_eq!(a.mul(&b).unwrap(), z12.from_i64(3));
        assert_eq!(z12.from_i64(12), z12.zero());
    }

    #[test]
    fn display_round_trip_shapes() {
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let e = x
            .pow(2)
            .sub(&y.mul(&r.from_i64(3)).unwrap())
            .unwrap()
            .add(&r.from_i64(1))
            .unwrap();
        assert_eq!(e.to_string(), "x^2 - 3*y + 1");
        assert_eq!(r.to_string(), "QQ[x,y]");
        let z12 = Ring::integers_mod(BigInt::from(12)).unwrap();
        assert_eq!(z12.to_string(), "Z/12");
        assert_eq!(z12.from_i64(-1).to_string(), "11");
    }

    #[test]
    fn ring_mismatch_detected() {
        let a = Ring::integers();
        let b = Ring::rationals();
        let e = a.from_i64(1).add(&b.from_i64(1));
        assert!(matches!(e, Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn unit_quotient_rejected() {
        let r = qq_xy();
        let one = r.one();
        assert!(Ring::quotient(&r, &[one]).is_err());
    }
}
