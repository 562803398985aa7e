//! Ideals with lazily computed canonical bases.
//!
//! The canonical basis depends on the ring class:
//!
//! * `ZZ` — a single nonnegative generator (the gcd of the generators), or
//!   nothing for the zero ideal;
//! * `ZZ/n` — a single generator that is the canonical divisor
//!   `gcd(gens, n)` of `n`, or nothing for the zero ideal;
//! * polynomial rings over a field — the reduced Gröbner basis under
//!   grevlex; for a quotient ring this is the reduced basis of the full
//!   preimage ideal in the free cover, so ideal equality is preimage
//!   equality.
//!
//! Quotients, saturations, intersections and radical membership are
//! implemented by gcd arithmetic over the scalar rings and by elimination
//! (an auxiliary variable ordered above all others) over polynomial rings.

use super::coeff::BaseRing;
use super::groebner::{basis_is_unit, groebner_basis};
use super::poly::{normal_form, MonoOrder, Poly};
use super::ring::{Ring, RingElement};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::OnceLock;

/// Cap on quotient iterations inside [`Ideal::saturation`].
pub const SATURATION_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CanonicalBasis {
    /// Scalar integer-like rings: canonical generator, `None` for the zero
    /// ideal.  Over `ZZ/n` the generator is a proper divisor of `n`.
    Scalar(Option<BigInt>),
    /// Polynomial rings: reduced grevlex basis of the preimage ideal in the
    /// free cover.
    Poly(Vec<Poly>),
}

/// A finitely generated ideal of a [`Ring`].
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<RingElement>,
    basis: OnceLock<CanonicalBasis>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<RingElement>) -> Result<Ideal> {
        for g in &gens {
            ring.check_same(g.ring())?;
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            basis: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::new(ring, Vec::new()).expect("no generators to mismatch")
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![ring.one()]).expect("same ring")
    }

    pub fn principal(elem: &RingElement) -> Ideal {
        Ideal::new(elem.ring(), vec![elem.clone()]).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The generators as given at construction time.
    pub fn gens(&self) -> &[RingElement] {
        &self.gens
    }

    fn is_scalar_class(&self) -> bool {
        self.ring.is_scalar()
            && matches!(self.ring.base(), BaseRing::Int | BaseRing::Mod { .. })
    }

    fn basis(&self) -> &CanonicalBasis {
        if let Some(b) = self.basis.get() {
            return b;
        }
        let computed = self.compute_basis();
        self.basis.get_or_init(|| computed)
    }

    fn compute_basis(&self) -> CanonicalBasis {
        if self.is_scalar_class() {
            let mut g = BigInt::zero();
            for e in &self.gens {
                let v = e.as_integer().expect("scalar ring element");
                g = g.gcd(&v);
            }
            let canon = match self.ring.base() {
                BaseRing::Int => {
                    if g.is_zero() {
                        None
                    } else {
                        Some(g.abs())
                    }
                }
                BaseRing::Mod { n, .. } => {
                    let d = g.gcd(n);
                    if d.is_zero() || d == *n {
                        None
                    } else {
                        Some(d)
                    }
                }
                BaseRing::Rat => unreachable!(),
            };
            CanonicalBasis::Scalar(canon)
        } else {
            let mut polys: Vec<Poly> = self
                .gens
                .iter()
                .filter(|g| !g.is_zero())
                .map(|g| g.poly().clone())
                .collect();
            polys.extend(self.ring.quotient_basis().iter().cloned());
            CanonicalBasis::Poly(groebner_basis(&polys, MonoOrder::Grevlex, self.ring.base()))
        }
    }

    /// The canonical basis as ring elements.
    ///
    /// Over a quotient ring the preimage basis elements that lie in the
    /// quotient ideal map to zero and are omitted from the returned list.
    pub fn canonical_basis(&self) -> Vec<RingElement> {
        match self.basis() {
            CanonicalBasis::Scalar(None) => Vec::new(),
            CanonicalBasis::Scalar(Some(d)) => vec![self.ring.from_bigint(d.clone())],
            CanonicalBasis::Poly(basis) => basis
                .iter()
                .map(|p| self.ring.element_from_poly(p.clone()))
                .filter(|e| !e.is_zero())
                .collect(),
        }
    }

    /// The canonical scalar generator over `ZZ` or `ZZ/n`.
    ///
    /// Returns `None` over other ring classes; `Some(None)` encodes the zero
    /// ideal.
    pub(crate) fn scalar_canonical(&self) -> Option<Option<BigInt>> {
        match self.basis() {
            CanonicalBasis::Scalar(d) => Some(d.clone()),
            CanonicalBasis::Poly(_) => None,
        }
    }

    /// The reduced basis of the preimage ideal in the free cover.
    pub(crate) fn preimage_basis(&self) -> Option<&[Poly]> {
        match self.basis() {
            CanonicalBasis::Poly(b) => Some(b),
            CanonicalBasis::Scalar(_) => None,
        }
    }

    pub fn contains(&self, f: &RingElement) -> Result<bool> {
        self.ring.check_same(f.ring())?;
        Ok(match self.basis() {
            CanonicalBasis::Scalar(d) => {
                let v = f.as_integer().expect("scalar ring element");
                match d {
                    None => v.is_zero(),
                    Some(d) => (&v % d).is_zero(),
                }
            }
            CanonicalBasis::Poly(basis) => {
                normal_form(f.poly(), basis, MonoOrder::Grevlex, self.ring.base()).is_zero()
            }
        })
    }

    /// Ideal containment `self ⊆ other`.
    pub fn contained_in(&self, other: &Ideal) -> Result<bool> {
        self.ring.check_same(other.ring())?;
        for g in self.canonical_basis() {
            if !other.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, other: &Ideal) -> Result<bool> {
        self.ring.check_same(other.ring())?;
        Ok(self.basis() == other.basis())
    }

    pub fn is_zero_ideal(&self) -> bool {
        match self.basis() {
            CanonicalBasis::Scalar(d) => d.is_none(),
            CanonicalBasis::Poly(b) => b
                .iter()
                .all(|p| self.ring.element_from_poly(p.clone()).is_zero()),
        }
    }

    pub fn is_unit_ideal(&self) -> bool {
        match self.basis() {
            CanonicalBasis::Scalar(d) => d.as_ref().is_some_and(|d| d.is_one()),
            CanonicalBasis::Poly(b) => basis_is_unit(b),
        }
    }

    /// The ideal quotient `(self : other)`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring())?;
        match self.basis() {
            CanonicalBasis::Scalar(a) => {
                let b = match other.basis() {
                    CanonicalBasis::Scalar(b) => b.clone(),
                    CanonicalBasis::Poly(_) => unreachable!("same ring class"),
                };
                // Encode the zero ideal as the modulus itself (0 over ZZ), so
                // the colon is uniformly d/gcd(d, e).
                let modulus = match self.ring.base() {
                    BaseRing::Mod { n, .. } => n.clone(),
                    _ => BigInt::zero(),
                };
                let a = a.clone().unwrap_or_else(|| modulus.clone());
                let b = b.unwrap_or_else(|| modulus.clone());
                let g = a.gcd(&b);
                let q = if g.is_zero() {
                    // Both ideals zero over ZZ: (0 : 0) = (1).
                    BigInt::one()
                } else {
                    &a / &g
                };
                Ok(self.with_known_scalar(q))
            }
            CanonicalBasis::Poly(i_basis) => {
                let base = self.ring.base().clone();
                let nv = self.ring.nvars();
                let mut acc: Option<Vec<Poly>> = None;
                for g in other.gens().iter().filter(|g| !g.is_zero()) {
                    let single = colon_by_element(i_basis, g.poly(), nv, &base);
                    acc = Some(match acc {
                        None => single,
                        Some(prev) => intersect_bases(&prev, &single, nv, &base),
                    });
                }
                match acc {
                    // All generators of `other` are zero: (I : 0) = R.
                    None => Ok(Ideal::unit(&self.ring)),
                    Some(basis) => Ok(self.with_known_poly(basis)),
                }
            }
        }
    }

    /// The saturation `(self : other^∞)` together with the stabilization
    /// exponent — the smallest `k` with `(I : J^k) = (I : J^(k+1))`.
    pub fn saturation(&self, other: &Ideal) -> Result<(Ideal, u32)> {
        let mut prev = self.clone();
        for k in 0..SATURATION_CAP {
            let next = prev.quotient(other)?;
            if next.equal(&prev)? {
                return Ok((prev, k));
            }
            prev = next;
        }
        Err(Error::IterationCap {
            what: "ideal saturation",
            cap: SATURATION_CAP,
        })
    }

    /// Radical membership `f ∈ √self`.
    ///
    /// Over scalar rings this strips shared prime factors; over polynomial
    /// rings it checks whether `1 ∈ self + (1 - t*f)` in one extra variable.
    pub fn radical_contains(&self, f: &RingElement) -> Result<bool> {
        self.ring.check_same(f.ring())?;
        match self.basis() {
            CanonicalBasis::Scalar(d) => {
                let modulus = match self.ring.base() {
                    BaseRing::Mod { n, .. } => n.clone(),
                    _ => BigInt::zero(),
                };
                let a = d.clone().unwrap_or(modulus);
                if a.is_zero() {
                    // √(0) = (0) over ZZ.
                    return Ok(f.is_zero());
                }
                let mut m = a.abs();
                let v = f.as_integer().expect("scalar ring element").abs();
                loop {
                    let g = m.gcd(&v);
                    if g.is_one() {
                        return Ok(m.is_one());
                    }
                    m /= &g;
                }
            }
            CanonicalBasis::Poly(basis) => {
                let base = self.ring.base().clone();
                let mut ext: Vec<Poly> = basis.iter().map(|p| p.extend_vars(1)).collect();
                let nv = self.ring.nvars() + 1;
                let t = Poly::var(nv - 1, nv, &base);
                let one = Poly::constant(base.one(), nv, &base);
                let fp = f.poly().extend_vars(1);
                ext.push(one.sub(&t.mul(&fp, MonoOrder::Grevlex, &base), MonoOrder::Grevlex, &base));
                let gb = groebner_basis(&ext, MonoOrder::Grevlex, &base);
                Ok(basis_is_unit(&gb))
            }
        }
    }

    /// Intersection of two ideals.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring())?;
        match (self.basis(), other.basis()) {
            (CanonicalBasis::Scalar(a), CanonicalBasis::Scalar(b)) => {
                let modulus = match self.ring.base() {
                    BaseRing::Mod { n, .. } => n.clone(),
                    _ => BigInt::zero(),
                };
                let a = a.clone().unwrap_or_else(|| modulus.clone());
                let b = b.clone().unwrap_or_else(|| modulus.clone());
                let l = if a.is_zero() || b.is_zero() {
                    BigInt::zero()
                } else {
                    a.lcm(&b)
                };
                Ok(self.with_known_scalar(l))
            }
            (CanonicalBasis::Poly(a), CanonicalBasis::Poly(b)) => {
                let basis = intersect_bases(a, b, self.ring.nvars(), self.ring.base());
                Ok(self.with_known_poly(basis))
            }
            _ => unreachable!("ring classes agree"),
        }
    }

    /// Builds a scalar-class ideal directly from a known canonical value
    /// (`0` or the modulus denote the zero ideal).
    fn with_known_scalar(&self, v: BigInt) -> Ideal {
        let canon = match self.ring.base() {
            BaseRing::Int => {
                if v.is_zero() {
                    None
                } else {
                    Some(v.abs())
                }
            }
            BaseRing::Mod { n, .. } => {
                let d = v.gcd(n);
                if d.is_zero() || &d == n {
                    None
                } else {
                    Some(d)
                }
            }
            BaseRing::Rat => unreachable!(),
        };
        let gens = match &canon {
            None => Vec::new(),
            Some(d) => vec![self.ring.from_bigint(d.clone())],
        };
        let ideal = Ideal {
            ring: self.ring.clone(),
            gens,
            basis: OnceLock::new(),
        };
        let _ = ideal.basis.set(CanonicalBasis::Scalar(canon));
        ideal
    }

    /// Builds a polynomial-class ideal from a precomputed reduced basis.
    fn with_known_poly(&self, basis: Vec<Poly>) -> Ideal {
        let gens: Vec<RingElement> = basis
            .iter()
            .map(|p| self.ring.element_from_poly(p.clone()))
            .filter(|e| !e.is_zero())
            .collect();
        let ideal = Ideal {
            ring: self.ring.clone(),
            gens,
            basis: OnceLock::new(),
        };
        let _ = ideal.basis.set(CanonicalBasis::Poly(basis));
        ideal
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.basis() == other.basis()
    }
}

impl Eq for Ideal {}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ring.hash(state);
        self.basis().hash(state);
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Exact division `f / g` over a field base; `None` when not divisible.
pub(crate) fn exact_div(f: &Poly, g: &Poly, ord: MonoOrder, base: &BaseRing) -> Option<Poly> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let mut rem = f.resorted(ord);
    let mut qework: Vec<(super::poly::Mono, super::coeff::Coeff)> = Vec::new();
    let g = g.resorted(ord);
    let (gm, gc) = g.lead().unwrap();
    while !rem.is_zero() {
        let (m, c) = rem.lead().unwrap();
        if !gm.divides(m) {
            return None;
        }
        let qm = gm.div(m);
        let qc = base.div(c, gc).expect("field base");
        rem = rem.sub(&g.mul_term(&qm, &qc, ord, base), ord, base);
        q_push(&mut qework, qm, qc);
    }
    Some(Poly::normalized(qework, ord, base))
}

fn q_push(
    q: &mut Vec<(super::poly::Mono, super::coeff::Coeff)>,
    m: super::poly::Mono,
    c: super::coeff::Coeff,
) {
    q.push((m, c));
}

/// Reduced basis of `(I : g)` for a single nonzero `g`, all data in the free
/// cover with `nv` variables.
fn colon_by_element(i_basis: &[Poly], g: &Poly, nv: usize, base: &BaseRing) -> Vec<Poly> {
    let inter = intersect_bases(i_basis, std::slice::from_ref(g), nv, base);
    let mut out = Vec::with_capacity(inter.len());
    for p in inter {
        let q = exact_div(&p, g, MonoOrder::Grevlex, base)
            .expect("members of I ∩ (g) are divisible by g");
        out.push(q);
    }
    groebner_basis(&out, MonoOrder::Grevlex, base)
}

/// Reduced basis of the intersection of two ideals via a tag variable:
/// `I ∩ J = (t·I + (1-t)·J) ∩ R`.
fn intersect_bases(a: &[Poly], b: &[Poly], nv: usize, base: &BaseRing) -> Vec<Poly> {
    let ext = nv + 1;
    let ord = MonoOrder::ElimLast { aux: 1 };
    let t = Poly::var(ext - 1, ext, base);
    let one = Poly::constant(base.one(), ext, base);
    let one_minus_t = one.sub(&t, ord, base);
    let mut gens: Vec<Poly> = Vec::new();
    for p in a {
        gens.push(t.mul(&p.extend_vars(1), ord, base));
    }
    for p in b {
        gens.push(one_minus_t.mul(&p.extend_vars(1), ord, base));
    }
    let gb = groebner_basis(&gens, ord, base);
    let restricted: Vec<Poly> = gb
        .iter()
        .filter(|p| p.free_of_last(1))
        .map(|p| p.restrict_vars(1))
        .collect();
    groebner_basis(&restricted, MonoOrder::Grevlex, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Ring {
        Ring::integers()
    }

    fn qq_xy() -> Ring {
        Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap()
    }

    fn ideal_of(ring: &Ring, elems: &[RingElement]) -> Ideal {
        Ideal::new(ring, elems.to_vec()).unwrap()
    }

    #[test]
    fn integer_canonical_gcd() {
        let r = zz();
        let i = ideal_of(&r, &[r.from_i64(12), r.from_i64(18)]);
        let basis = i.canonical_basis();
        assert_eq!(basis, vec![r.from_i64(6)]);
        assert!(i.contains(&r.from_i64(30)).unwrap());
        assert!(!i.contains(&r.from_i64(8)).unwrap());
    }

    #[test]
    fn mod_n_canonical_divisor() {
        let r = Ring::integers_mod(BigInt::from(12)).unwrap();
        let i = ideal_of(&r, &[r.from_i64(8)]);
        // (8) = (4) in Z/12.
        assert_eq!(i.canonical_basis(), vec![r.from_i64(4)]);
        let z = ideal_of(&r, &[r.from_i64(12)]);
        assert!(z.is_zero_ideal());
    }

    #[test]
    fn monomial_pair_basis_and_membership() {
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let i = ideal_of(&r, &[x.pow(2), x.mul(&y).unwrap()]);
        let basis = i.canonical_basis();
        assert_eq!(basis.len(), 2);
        assert!(i.contains(&x.pow(3)).unwrap());
        assert!(!i.contains(&y).unwrap());
        let j = ideal_of(&r, &[x.clone(), x.add(&r.one()).unwrap()]);
        assert!(j.is_unit_ideal());
        assert_eq!(j.canonical_basis(), vec![r.one()]);
    }

    #[test]
    fn integer_colon_and_saturation() {
        let r = zz();
        let i = ideal_of(&r, &[r.from_i64(12)]);
        let j = ideal_of(&r, &[r.from_i64(2)]);
        let q = i.quotient(&j).unwrap();
        assert_eq!(q.canonical_basis(), vec![r.from_i64(6)]);
        let four = ideal_of(&r, &[r.from_i64(4)]);
        let (sat, k) = four.saturation(&j).unwrap();
        assert!(sat.is_unit_ideal());
        assert_eq!(k, 2);
        // (0 : 2) = (0); (12 : 0) = (1).
        let zero = Ideal::zero(&r);
        assert!(zero.quotient(&j).unwrap().is_zero_ideal());
        assert!(i.quotient(&zero).unwrap().is_unit_ideal());
    }

    #[test]
    fn polynomial_colon_matches_hand_computation() {
        // ((x^2, x*y) : (x)) = (x, y).
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let i = ideal_of(&r, &[x.pow(2), x.mul(&y).unwrap()]);
        let j = ideal_of(&r, &[x.clone()]);
        let q = i.quotient(&j).unwrap();
        let expect = ideal_of(&r, &[x.clone(), y.clone()]);
        assert!(q.equal(&expect).unwrap());
    }

    #[test]
    fn intersection_of_principal_ideals() {
        // (x) ∩ (y) = (x*y).
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let i = ideal_of(&r, &[x.clone()]).intersect(&ideal_of(&r, &[y.clone()])).unwrap();
        let expect = ideal_of(&r, &[x.mul(&y).unwrap()]);
        assert!(i.equal(&expect).unwrap());
    }

    #[test]
    fn radical_membership_by_rabinowitsch() {
        let r = qq_xy();
        let x = r.var_named("x").unwrap();
        let y = r.var_named("y").unwrap();
        let i = ideal_of(&r, &[x.pow(2), x.mul(&y).unwrap()]);
        // √(x^2, x*y) = (x): contains x, not y.
        assert!(i.radical_contains(&x).unwrap());
        assert!(!i.radical_contains(&y).unwrap());
    }

    #[test]
    fn radical_membership_over_integers() {
        let r = zz();
        let i = ideal_of(&r, &[r.from_i64(12)]);
        // √(12) = (6).
        assert!(i.radical_contains(&r.from_i64(6)).unwrap());
        assert!(!i.radical_contains(&r.from_i64(2)).unwrap());
        assert!(!i.radical_contains(&r.from_i64(9)).unwrap());
        assert!(i.radical_contains(&r.from_i64(30)).unwrap());
    }

    #[test]
    fn mod_n_colon() {
        let r = Ring::integers_mod(BigInt::from(12)).unwrap();
        let i = ideal_of(&r, &[r.from_i64(4)]);
        let j = ideal_of(&r, &[r.from_i64(2)]);
        let q = i.quotient(&j).unwrap();
        assert_eq!(q.canonical_basis(), vec![r.from_i64(2)]);
        // (0 : 2) in Z/12 = (6).
        let z = Ideal::zero(&r);
        assert_eq!(z.quotient(&j).unwrap().canonical_basis(), vec![r.from_i64(6)]);
    }
}
