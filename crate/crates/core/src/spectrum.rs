//! Prime ideals with certificates, specialization-closed subsets of the
//! spectrum, support and associated primes, prime filtrations, and the
//! detection of modules whose behaviour is governed by a single prime.
//!
//! Primality is never assumed silently: a [`PrimeIdeal`] is built either
//! through structural verification ([`PrimeIdeal::new`]) or through an
//! explicit caller assertion ([`PrimeIdeal::asserted`]), and every result
//! records which of the two happened.

use crate::error::{Error, Result};
use crate::kernel::coeff::{factor_int, is_prime, BaseRing};
use crate::kernel::factor::{factor_univariate, is_irreducible_univariate};
use crate::kernel::ideal::Ideal;
use crate::kernel::poly::Poly;
use crate::kernel::ring::Ring;
use crate::modules::engine;
use crate::modules::matrix::Matrix;
use crate::modules::presentation::ModulePresentation;
use num_traits::Zero;
use std::fmt;

/// Iteration cap for prime filtrations.
pub const FILTRATION_CAP: u32 = 256;

/// Budget for variable-subset enumeration over multivariate rings.
const SUBSET_BUDGET: u32 = 20;

/// How a [`PrimeIdeal`]'s primality was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Verified by the structural rules for the ring class.
    Auto,
    /// Asserted by the caller without verification.
    Asserted,
}

/// An ideal together with a certificate that it is prime.
#[derive(Debug, Clone)]
pub struct PrimeIdeal {
    ideal: Ideal,
    certification: Certification,
}

impl PrimeIdeal {
    /// Certifies primality structurally, per ring class:
    ///
    /// * `ZZ`: the zero ideal, or `(p)` with `p` a verified prime number;
    /// * fields: the zero ideal;
    /// * `ZZ/n`: `(p)` with `p` a prime divisor of `n`;
    /// * `k[x]` and `k[x]/(f)`: a verified-irreducible generator (for the
    ///   quotient, of the preimage ideal in `k[x]`);
    /// * multivariate polynomial rings and their quotients: the zero ideal
    ///   of a free ring, or an ideal whose canonical preimage basis is a set
    ///   of distinct variables.
    ///
    /// Everything else is rejected with `NotCertifiedPrime`.
    pub fn new(ideal: Ideal) -> Result<PrimeIdeal> {
        if let Err(reason) = certify(&ideal) {
            let gens = ideal
                .canonical_basis()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::NotCertifiedPrime { gens, reason });
        }
        Ok(PrimeIdeal {
            ideal,
            certification: Certification::Auto,
        })
    }

    /// Accepts the ideal as prime on the caller's authority; the
    /// certification field records the assertion.
    pub fn asserted(ideal: Ideal) -> PrimeIdeal {
        PrimeIdeal {
            ideal,
            certification: Certification::Asserted,
        }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    /// Is the residue ring a field?  Decided structurally for auto-certified
    /// primes; asserted primes are judged by the same rules and default to
    /// `false` when no rule applies.
    pub fn is_maximal(&self) -> bool {
        let ring = self.ideal.ring();
        if let Some(scalar) = self.ideal.scalar_canonical() {
            match ring.base() {
                BaseRing::Int => scalar.is_some(),
                // Fields and ZZ/n: every prime is maximal.
                _ => true,
            }
        } else {
            let Some(basis) = self.ideal.preimage_basis() else {
                return false;
            };
            if ring.nvars() == 1 && ring.base().is_field() {
                if ring.is_free_poly() {
                    !basis.is_empty()
                } else {
                    true
                }
            } else {
                let mut seen = vec![false; ring.nvars()];
                for p in basis {
                    match single_variable_index(p) {
                        Some(v) => seen[v] = true,
                        None => return false,
                    }
                }
                seen.iter().all(|s| *s)
            }
        }
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ideal.ring() == other.ideal.ring() && self.ideal.equal(&other.ideal).unwrap_or(false)
    }
}

impl Eq for PrimeIdeal {}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut gens = self.ideal.canonical_basis();
        if gens.is_empty() {
            return write!(f, "(0)");
        }
        // Descending leading-monomial order reads conventionally: (x, y).
        gens.reverse();
        let body = gens
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "({body})")
    }
}

/// If `p` is a single variable to the first power, its index.
fn single_variable_index(p: &Poly) -> Option<usize> {
    if p.terms.len() != 1 {
        return None;
    }
    let mono = &p.terms[0].0;
    let mut idx = None;
    for (i, e) in mono.0.iter().enumerate() {
        match (e, idx) {
            (0, _) => {}
            (1, None) => idx = Some(i),
            _ => return None,
        }
    }
    idx
}

/// Structural primality check; `Err` carries the human-readable reason.
fn certify(ideal: &Ideal) -> std::result::Result<(), String> {
    if ideal.is_unit_ideal() {
        return Err("the unit ideal is not prime".into());
    }
    let ring = ideal.ring();
    if let Some(scalar) = ideal.scalar_canonical() {
        return match ring.base() {
            BaseRing::Int => match scalar {
                None => Ok(()),
                Some(d) => {
                    if is_prime(&d) {
                        Ok(())
                    } else {
                        Err(format!("{d} is not a verified prime number"))
                    }
                }
            },
            b if b.is_field() => Ok(()), // only the zero ideal reaches here
            BaseRing::Mod { n, .. } => match scalar {
                None => Err(format!(
                    "the zero ideal is not prime modulo the composite {n}"
                )),
                Some(d) => {
                    if is_prime(&d) {
                        Ok(())
                    } else {
                        Err(format!("{d} is not a prime divisor of {n}"))
                    }
                }
            },
            _ => Err(format!("no primality rule over {ring}")),
        };
    }
    let Some(basis) = ideal.preimage_basis() else {
        return Err(format!("no canonical basis available over {ring}"));
    };
    if !ring.base().is_field() {
        return Err(format!(
            "no primality rule for polynomial rings over {}",
            ring.base()
        ));
    }
    if ring.nvars() == 1 {
        return match basis {
            [] => {
                if ring.is_free_poly() {
                    Ok(())
                } else {
                    Err("empty preimage basis of a proper quotient".into())
                }
            }
            [h] => {
                let cover = ring.cover();
                let he = cover.element_from_poly(h.clone());
                match is_irreducible_univariate(&he) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("{he} is not irreducible")),
                    Err(e) => Err(e.to_string()),
                }
            }
            _ => Err("preimage ideal is not principal".into()),
        };
    }
    if basis.is_empty() {
        return if ring.is_free_poly() {
            Ok(())
        } else {
            Err("empty preimage basis of a proper quotient".into())
        };
    }
    if basis.iter().all(|p| single_variable_index(p).is_some()) {
        Ok(())
    } else {
        Err("only ideals generated by distinct variables are auto-certified here".into())
    }
}

/// A specialization-closed subset of the spectrum, stored as the canonical
/// minimal antichain of primes whose closures it unites.
#[derive(Debug, Clone)]
pub struct SpecSet {
    ring: Ring,
    minimal: Vec<PrimeIdeal>,
}

impl SpecSet {
    pub fn empty(ring: &Ring) -> SpecSet {
        SpecSet {
            ring: ring.clone(),
            minimal: Vec::new(),
        }
    }

    /// The union of the closures of the listed primes, reduced to the
    /// minimal antichain and canonically sorted.
    pub fn from_primes(ring: &Ring, primes: Vec<PrimeIdeal>) -> Result<SpecSet> {
        for p in &primes {
            ring.check_same(p.ideal().ring())?;
        }
        // Dedupe (the canonical display string determines the ideal).
        let mut sorted = primes;
        sorted.sort_by_key(|p| p.to_string());
        sorted.dedup_by_key(|p| p.to_string());
        // Keep only primes not strictly containing another listed prime.
        let mut minimal = Vec::new();
        for (i, p) in sorted.iter().enumerate() {
            let mut keep = true;
            for (j, q) in sorted.iter().enumerate() {
                if i != j && q.ideal().contained_in(p.ideal())? && !p.ideal().contained_in(q.ideal())? {
                    keep = false;
                    break;
                }
            }
            if keep {
                minimal.push(p.clone());
            }
        }
        Ok(SpecSet {
            ring: ring.clone(),
            minimal,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The canonical minimal antichain.
    pub fn minimal_primes(&self) -> &[PrimeIdeal] {
        &self.minimal
    }

    pub fn is_empty(&self) -> bool {
        self.minimal.is_empty()
    }

    /// Membership: `q` lies in the set iff it contains one of the minimal
    /// primes.
    pub fn contains_prime(&self, q: &PrimeIdeal) -> Result<bool> {
        self.ring.check_same(q.ideal().ring())?;
        for p in &self.minimal {
            if p.ideal().contained_in(q.ideal())? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &SpecSet) -> Result<SpecSet> {
        self.ring.check_same(&other.ring)?;
        let mut primes = self.minimal.clone();
        primes.extend(other.minimal.iter().cloned());
        SpecSet::from_primes(&self.ring, primes)
    }

    pub fn is_subset(&self, other: &SpecSet) -> Result<bool> {
        self.ring.check_same(&other.ring)?;
        for p in &self.minimal {
            if !other.contains_prime(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &SpecSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }
}

impl fmt::Display for SpecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.minimal.is_empty() {
            return write!(f, "{{}}");
        }
        let body = self
            .minimal
            .iter()
            .map(|p| format!("V{p}"))
            .collect::<Vec<_>>()
            .join(" ∪ ");
        write!(f, "{body}")
    }
}

/// The smallest specialization-closed set containing the listed primes.
pub fn spec_closure(ring: &Ring, primes: Vec<PrimeIdeal>) -> Result<SpecSet> {
    SpecSet::from_primes(ring, primes)
}

/// Does `p` lie in the support of `m`?  For finitely presented modules this
/// is the containment `ann(m) ⊆ p`.
pub fn supp_contains(p: &PrimeIdeal, m: &ModulePresentation) -> Result<bool> {
    m.ring().check_same(p.ideal().ring())?;
    m.annihilator()?.contained_in(p.ideal())
}

/// The support of `m` as a specialization-closed set: the closures of the
/// minimal primes over the annihilator.
pub fn supp_set(m: &ModulePresentation) -> Result<SpecSet> {
    let mins = minimal_primes(&m.annihilator()?)?;
    SpecSet::from_primes(m.ring(), mins)
}

/// Does `p` belong to the associated primes of `m`?  Decided through the
/// support of `Hom(R/p, m)`, which is nonzero near `p` exactly when `p` is
/// the annihilator of an element.
pub fn ass_contains(p: &PrimeIdeal, m: &ModulePresentation) -> Result<bool> {
    m.ring().check_same(p.ideal().ring())?;
    let h = ModulePresentation::cyclic(p.ideal()).hom(m)?;
    supp_contains(p, &h)
}

/// Associated primes by complete enumeration (rings with a known candidate
/// list: `ZZ`, fields, `ZZ/n`, `k[x]`, `k[x]/(f)`, and multivariate
/// (quotient) rings whose relation data is monomial).  Returns
/// `NeedCandidates` elsewhere.
pub fn ass_enumerate(m: &ModulePresentation) -> Result<Vec<PrimeIdeal>> {
    let cands = ass_candidates(m)?;
    ass_enumerate_with(m, &cands)
}

/// Associated primes among an explicit candidate list.
pub fn ass_enumerate_with(
    m: &ModulePresentation,
    candidates: &[PrimeIdeal],
) -> Result<Vec<PrimeIdeal>> {
    let mut sorted: Vec<PrimeIdeal> = candidates.to_vec();
    sorted.sort_by_key(|p| p.to_string());
    sorted.dedup_by_key(|p| p.to_string());
    let mut out = Vec::new();
    for p in sorted {
        if ass_contains(&p, m)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Candidate associated primes for the enumeration classes.
fn ass_candidates(m: &ModulePresentation) -> Result<Vec<PrimeIdeal>> {
    let ring = m.ring().clone();
    // ZZ/n with composite n: the primes are exactly (p) for p | n.
    if ring.is_scalar() {
        if let BaseRing::Mod { n, prime } = ring.base() {
            if !prime {
                let mut out = Vec::new();
                for (p, _) in factor_int(n)? {
                    out.push(PrimeIdeal::new(Ideal::principal(&ring.from_bigint(p)))?);
                }
                return Ok(out);
            }
        }
    }
    // Principal ideal rings: primes of the invariant factors, plus the
    // zero ideal when there is a free summand.
    let pid_scalar = ring.is_scalar()
        && (matches!(ring.base(), BaseRing::Int) || ring.base().is_field());
    let pid_poly = ring.is_free_poly() && ring.nvars() == 1 && ring.base().is_field();
    if pid_scalar || pid_poly {
        let (factors, free) = m.invariant_factors()?;
        let mut out = Vec::new();
        if free > 0 {
            out.push(PrimeIdeal::new(Ideal::zero(&ring))?);
        }
        for d in factors {
            if pid_poly {
                for (h, _) in factor_univariate(&d)? {
                    out.push(PrimeIdeal::new(Ideal::principal(&h))?);
                }
            } else if matches!(ring.base(), BaseRing::Int) {
                let v = d.as_integer().expect("integer factor");
                for (p, _) in factor_int(&v)? {
                    out.push(PrimeIdeal::new(Ideal::principal(&ring.from_bigint(p)))?);
                }
            }
            // Over a field nonunit nonzero factors cannot occur.
        }
        return Ok(out);
    }
    // k[x]/(g): the primes are the images of the irreducible factors of g.
    if !ring.is_free_poly() && ring.nvars() == 1 && ring.base().is_field() {
        let cover = ring.cover();
        let g = ring
            .quotient_basis()
            .first()
            .cloned()
            .map(|p| cover.element_from_poly(p))
            .ok_or_else(|| Error::Internal("quotient ring without a defining relation".into()))?;
        let mut out = Vec::new();
        for (h, _) in factor_univariate(&g)? {
            let img = ring.element_from_poly(h.poly().clone());
            out.push(PrimeIdeal::new(Ideal::principal(&img))?);
        }
        return Ok(out);
    }
    // Multivariate rings with monomial data: variable-subset primes.
    if ring.base().is_field() && ring.nvars() >= 2 && monomial_data(m) {
        let v = ring.nvars();
        if v as u32 > SUBSET_BUDGET {
            return Err(Error::ExplosionGuard {
                what: "variable-subset prime enumeration".into(),
                required: 1u128 << v,
                budget: 1u128 << SUBSET_BUDGET,
            });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << v) {
            let mut gens = Vec::new();
            for i in 0..v {
                if mask & (1 << i) != 0 {
                    gens.push(ring.var(i)?);
                }
            }
            match PrimeIdeal::new(Ideal::new(&ring, gens)?) {
                Ok(p) => out.push(p),
                // Over quotient rings some subsets fail certification
                // (they do not contain the defining ideal): not candidates.
                Err(Error::NotCertifiedPrime { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        return Ok(out);
    }
    Err(Error::NeedCandidates {
        ring: ring.to_string(),
    })
}

/// Is every relation entry (and, over a quotient, every defining relation)
/// a monomial?
fn monomial_data(m: &ModulePresentation) -> bool {
    let rel = m.relations();
    for i in 0..rel.rows() {
        for j in 0..rel.cols() {
            if rel.entry(i, j).poly().terms.len() > 1 {
                return false;
            }
        }
    }
    m.ring().quotient_basis().iter().all(|p| p.terms.len() <= 1)
}

/// Minimal primes over an ideal, for the same enumeration classes as
/// [`ass_enumerate`].
pub fn minimal_primes(ideal: &Ideal) -> Result<Vec<PrimeIdeal>> {
    let ring = ideal.ring().clone();
    if ideal.is_unit_ideal() {
        return Ok(Vec::new());
    }
    if let Some(scalar) = ideal.scalar_canonical() {
        return match ring.base() {
            BaseRing::Int => match scalar {
                None => Ok(vec![PrimeIdeal::new(Ideal::zero(&ring))?]),
                Some(d) => {
                    let mut out = Vec::new();
                    for (p, _) in factor_int(&d)? {
                        out.push(PrimeIdeal::new(Ideal::principal(&ring.from_bigint(p)))?);
                    }
                    Ok(out)
                }
            },
            b if b.is_field() => Ok(vec![PrimeIdeal::new(Ideal::zero(&ring))?]),
            BaseRing::Mod { n, .. } => {
                let d = scalar.unwrap_or_else(|| n.clone());
                let target = if d.is_zero() { n.clone() } else { d };
                let mut out = Vec::new();
                for (p, _) in factor_int(&target)? {
                    out.push(PrimeIdeal::new(Ideal::principal(&ring.from_bigint(p)))?);
                }
                Ok(out)
            }
            _ => Err(Error::NeedCandidates {
                ring: ring.to_string(),
            }),
        };
    }
    let Some(basis) = ideal.preimage_basis().map(|b| b.to_vec()) else {
        return Err(Error::NeedCandidates {
            ring: ring.to_string(),
        });
    };
    if !ring.base().is_field() {
        return Err(Error::NeedCandidates {
            ring: ring.to_string(),
        });
    }
    if ring.nvars() == 1 {
        // k[x] or k[x]/(g): factor the principal (preimage) generator.
        let cover = ring.cover();
        return match basis.as_slice() {
            [] => Ok(vec![PrimeIdeal::new(Ideal::zero(&ring))?]),
            [h] => {
                let he = cover.element_from_poly(h.clone());
                let mut out = Vec::new();
                for (f, _) in factor_univariate(&he)? {
                    let img = ring.element_from_poly(f.poly().clone());
                    out.push(PrimeIdeal::new(Ideal::principal(&img))?);
                }
                Ok(out)
            }
            _ => Err(Error::NeedCandidates {
                ring: ring.to_string(),
            }),
        };
    }
    // Multivariate: monomial ideals only — minimal primes are the minimal
    // variable covers of the generators.
    if basis.is_empty() {
        return Ok(vec![PrimeIdeal::new(Ideal::zero(&ring))?]);
    }
    if !basis.iter().all(|p| p.terms.len() == 1) {
        return Err(Error::NeedCandidates {
            ring: ring.to_string(),
        });
    }
    let v = ring.nvars();
    if v as u32 > SUBSET_BUDGET {
        return Err(Error::ExplosionGuard {
            what: "variable-cover enumeration".into(),
            required: 1u128 << v,
            budget: 1u128 << SUBSET_BUDGET,
        });
    }
    let monos: Vec<&crate::kernel::poly::Mono> = basis.iter().map(|p| &p.terms[0].0).collect();
    let covers_all = |mask: u64| -> bool {
        monos.iter().all(|mono| {
            (0..v).any(|i| mask & (1 << i) != 0 && mono.0[i] > 0)
        })
    };
    let mut covering: Vec<u64> = (0u64..(1u64 << v)).filter(|&mask| covers_all(mask)).collect();
    covering.sort_by_key(|m| m.count_ones());
    let mut minimal_masks: Vec<u64> = Vec::new();
    for mask in covering {
        if !minimal_masks.iter().any(|mm| mm & mask == *mm) {
            minimal_masks.push(mask);
        }
    }
    let mut out = Vec::new();
    for mask in minimal_masks {
        let mut gens = Vec::new();
        for i in 0..v {
            if mask & (1 << i) != 0 {
                gens.push(ring.var(i)?);
            }
        }
        out.push(PrimeIdeal::new(Ideal::new(&ring, gens)?)?);
    }
    Ok(out)
}

/// For a prime `p`, the cyclic module `R/p` is a subquotient of a finite
/// direct sum of copies of `m` exactly when `p` lies in the support of `m`.
pub fn cyclic_prime_subquotient(p: &PrimeIdeal, m: &ModulePresentation) -> Result<bool> {
    supp_contains(p, m)
}

/// One layer of a prime filtration: the class of `witness` generates the
/// next submodule, and the layer quotient is `R/prime`.
#[derive(Debug, Clone)]
pub struct FiltrationStep {
    pub prime: PrimeIdeal,
    /// Ambient coordinates (`gens x 1`) of the new cyclic generator.
    pub witness: Matrix,
}

/// A verified chain `0 = M_0 ⊂ M_1 ⊂ ... ⊂ M_t = M` whose successive
/// quotients are cyclic prime quotients `R/q_i`.
#[derive(Debug, Clone)]
pub struct PrimeFiltration {
    module: ModulePresentation,
    steps: Vec<FiltrationStep>,
}

impl PrimeFiltration {
    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn steps(&self) -> &[FiltrationStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The layer primes `q_1, ..., q_t` in chain order.
    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.steps.iter().map(|s| s.prime.clone()).collect()
    }

    /// Re-derives every claim of the chain: each witness is nonzero modulo
    /// the previous layer, its annihilator there is exactly the declared
    /// prime, and the final layer exhausts the module.
    pub fn verify(&self) -> Result<()> {
        let ring = self.module.ring().clone();
        let mut sub = Matrix::zero(&ring, self.module.gens(), 0);
        for (i, step) in self.steps.iter().enumerate() {
            let q = self.module.quotient(&sub)?;
            if q.element_is_zero(&step.witness)? {
                return Err(Error::InvalidArgument(format!(
                    "filtration step {i} adds a generator already in the previous layer"
                )));
            }
            let ann = q.element_annihilator(&step.witness)?;
            if !ann.equal(step.prime.ideal())? {
                return Err(Error::InvalidArgument(format!(
                    "filtration step {i} quotient is not the declared prime"
                )));
            }
            sub = sub.hstack(&step.witness)?;
        }
        if !self.module.quotient(&sub)?.is_zero()? {
            return Err(Error::InvalidArgument(
                "filtration does not exhaust the module".into(),
            ));
        }
        Ok(())
    }
}

/// Generators of the colon submodule `(0 :_q J)` in ambient coordinates.
fn colon_generators(q: &ModulePresentation, j: &Ideal) -> Result<Matrix> {
    let ring = q.ring().clone();
    let jg = j.canonical_basis();
    if jg.is_empty() {
        return Ok(Matrix::identity(&ring, q.gens()));
    }
    let mut stack = Matrix::scalar(&ring, q.gens(), &jg[0]);
    for g in &jg[1..] {
        stack = stack.vstack(&Matrix::scalar(&ring, q.gens(), g))?;
    }
    let target_rels = q.relations().block_diag_copies(jg.len());
    Ok(engine::syzygies(&stack.hstack(&target_rels)?)?.top_rows(q.gens()))
}

/// Builds a prime filtration of `m`, peeling one cyclic prime layer at a
/// time.  At each step a containment-maximal associated prime of the
/// remaining quotient is chosen (canonical order breaks ties), and a witness
/// with that exact annihilator is located inside the corresponding colon
/// submodule.
pub fn prime_filtration(m: &ModulePresentation) -> Result<PrimeFiltration> {
    let ring = m.ring().clone();
    let mut sub = Matrix::zero(&ring, m.gens(), 0);
    let mut steps: Vec<FiltrationStep> = Vec::new();
    loop {
        if steps.len() as u32 >= FILTRATION_CAP {
            return Err(Error::IterationCap {
                what: "prime filtration",
                cap: FILTRATION_CAP,
            });
        }
        let q = m.quotient(&sub)?;
        if q.is_zero()? {
            break;
        }
        let ass = ass_enumerate(&q)?;
        if ass.is_empty() {
            return Err(Error::Internal(
                "nonzero module with no associated primes found during filtration".into(),
            ));
        }
        // First containment-maximal prime in canonical order.
        let mut pick = None;
        'outer: for (i, p) in ass.iter().enumerate() {
            for (j, r) in ass.iter().enumerate() {
                if i != j
                    && p.ideal().contained_in(r.ideal())?
                    && !r.ideal().contained_in(p.ideal())?
                {
                    continue 'outer;
                }
            }
            pick = Some(i);
            break;
        }
        let prime = ass[pick.expect("nonempty list has a maximal element")].clone();
        let colon = colon_generators(&q, prime.ideal())?;
        let witness = find_exact_witness(&q, &colon, prime.ideal())?;
        steps.push(FiltrationStep {
            prime,
            witness: witness.clone(),
        });
        sub = sub.hstack(&witness)?;
    }
    Ok(PrimeFiltration {
        module: m.clone(),
        steps,
    })
}

/// Finds a column of `colon` (or a sum of two columns) whose annihilator in
/// `q` is exactly `target`.
fn find_exact_witness(q: &ModulePresentation, colon: &Matrix, target: &Ideal) -> Result<Matrix> {
    let mut nonzero_cols = Vec::new();
    for j in 0..colon.cols() {
        let c = colon.col(j);
        if q.element_is_zero(&c)? {
            continue;
        }
        if q.element_annihilator(&c)?.equal(target)? {
            return Ok(c);
        }
        nonzero_cols.push(c);
    }
    for a in 0..nonzero_cols.len() {
        for b in (a + 1)..nonzero_cols.len() {
            let c = Matrix::from_fn(q.ring(), q.gens(), 1, |i, _| {
                nonzero_cols[a]
                    .entry(i, 0)
                    .add(nonzero_cols[b].entry(i, 0))
                    .expect("same ring")
            })?;
            if q.element_is_zero(&c)? {
                continue;
            }
            if q.element_annihilator(&c)?.equal(target)? {
                return Ok(c);
            }
        }
    }
    Err(Error::Internal(
        "no colon element with the exact prime annihilator was found".into(),
    ))
}

/// If `m` is governed by a single prime — its annihilator is prime and is
/// the unique associated prime — returns that prime.
pub fn is_spectral(m: &ModulePresentation) -> Result<Option<PrimeIdeal>> {
    // Enumerate first so that unsupported rings surface as NeedCandidates
    // rather than as a silently failed certification.
    let ass = ass_enumerate(m)?;
    let ann = m.annihilator()?;
    let p = match PrimeIdeal::new(ann) {
        Ok(p) => p,
        Err(Error::NotCertifiedPrime { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(if ass.len() == 1 && ass[0].ideal().equal(p.ideal())? {
        Some(p)
    } else {
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

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

    fn qxy() -> Ring {
        Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap()
    }

    /// R/(x^2, xy) over QQ[x,y].
    fn monomial_module(r: &Ring) -> ModulePresentation {
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        ModulePresentation::cyclic(
            &Ideal::new(r, vec![x.pow(2), x.mul(&y).unwrap()]).unwrap(),
        )
    }

    fn prime_strings(ps: &[PrimeIdeal]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn certification_accepts_and_rejects_over_integers() {
        assert!(PrimeIdeal::new(Ideal::zero(&zz())).is_ok(), "(0) is prime in a domain");
        assert!(PrimeIdeal::new(Ideal::principal(&zz().from_i64(7))).is_ok());
        let err = PrimeIdeal::new(Ideal::principal(&zz().from_i64(4))).unwrap_err();
        assert!(matches!(err, Error::NotCertifiedPrime { .. }));
        let unit = PrimeIdeal::new(Ideal::unit(&zz())).unwrap_err();
        assert!(matches!(unit, Error::NotCertifiedPrime { .. }));
    }

    #[test]
    fn certification_over_quotients_and_polynomials() {
        // ZZ/12: (2) certifies, (4) and (0) do not.
        let z12 = Ring::integers_mod(BigInt::from(12)).unwrap();
        assert!(PrimeIdeal::new(Ideal::principal(&z12.from_i64(2))).is_ok());
        assert!(PrimeIdeal::new(Ideal::principal(&z12.from_i64(4))).is_err());
        assert!(PrimeIdeal::new(Ideal::zero(&z12)).is_err());
        // (8) normalizes to (4) mod 12 and is rejected.
        assert!(PrimeIdeal::new(Ideal::principal(&z12.from_i64(8))).is_err());

        // QQ[x]: irreducibles only.
        let qx = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = qx.var(0).unwrap();
        assert!(PrimeIdeal::new(Ideal::principal(&x)).is_ok());
        let x2_plus_1 = x.pow(2).add(&qx.one()).unwrap();
        assert!(PrimeIdeal::new(Ideal::principal(&x2_plus_1)).is_ok());
        assert!(PrimeIdeal::new(Ideal::principal(&x.pow(2))).is_err());

        // QQ[x,y]: monomial primes are variable subsets.
        let r = qxy();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        assert!(PrimeIdeal::new(Ideal::new(&r, vec![x.clone()]).unwrap()).is_ok());
        assert!(PrimeIdeal::new(Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap()).is_ok());
        assert!(PrimeIdeal::new(Ideal::zero(&r)).is_ok());
        let xy = Ideal::new(&r, vec![x.mul(&y).unwrap()]).unwrap();
        assert!(
            PrimeIdeal::new(xy.clone()).is_err(),
            "(xy) is not prime and has no certification rule"
        );
        let asserted = PrimeIdeal::asserted(xy);
        assert_eq!(asserted.certification(), Certification::Asserted);
    }

    #[test]
    fn certification_in_artinian_quotients() {
        // QQ[x]/(x^3): (x) is the unique prime.
        let qx = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = qx.var(0).unwrap();
        let rq = Ring::quotient(&qx, &[x.pow(3)]).unwrap();
        let xbar = rq.var(0).unwrap();
        let p = PrimeIdeal::new(Ideal::principal(&xbar)).unwrap();
        assert!(p.is_maximal());
        assert!(PrimeIdeal::new(Ideal::zero(&rq)).is_err(), "x^3 is not irreducible");
        // QQ[x]/(x^2 + 1) is a field: (0) certifies.
        let rf = Ring::quotient(&qx, &[x.pow(2).add(&qx.one()).unwrap()]).unwrap();
        assert!(PrimeIdeal::new(Ideal::zero(&rf)).is_ok());
    }

    #[test]
    fn maximality_by_ring_class() {
        assert!(int_prime(2).is_maximal());
        assert!(!PrimeIdeal::new(Ideal::zero(&zz())).unwrap().is_maximal());
        let r = qxy();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let px = PrimeIdeal::new(Ideal::new(&r, vec![x.clone()]).unwrap()).unwrap();
        let pxy = PrimeIdeal::new(Ideal::new(&r, vec![x, y]).unwrap()).unwrap();
        assert!(!px.is_maximal());
        assert!(pxy.is_maximal());
    }

    #[test]
    fn support_membership_examples() {
        let m = z_mod(12);
        assert!(supp_contains(&int_prime(2), &m).unwrap());
        assert!(supp_contains(&int_prime(3), &m).unwrap());
        assert!(!supp_contains(&int_prime(5), &m).unwrap());

        let r = qxy();
        let mm = monomial_module(&r);
        let y = r.var(1).unwrap();
        let py = PrimeIdeal::new(Ideal::new(&r, vec![y]).unwrap()).unwrap();
        assert!(
            !supp_contains(&py, &mm).unwrap(),
            "(y) does not contain (x^2, xy)"
        );
    }

    #[test]
    fn closure_reduces_to_minimal_antichain() {
        let r = qxy();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let px = PrimeIdeal::new(Ideal::new(&r, vec![x.clone()]).unwrap()).unwrap();
        let pxy = PrimeIdeal::new(Ideal::new(&r, vec![x, y]).unwrap()).unwrap();
        let s = spec_closure(&r, vec![pxy.clone(), px.clone()]).unwrap();
        assert_eq!(prime_strings(s.minimal_primes()), vec!["(x)"]);
        assert!(s.contains_prime(&pxy).unwrap(), "closed under specialization");
    }

    #[test]
    fn associated_prime_membership_examples() {
        let m = z_mod(12);
        assert!(ass_contains(&int_prime(2), &m).unwrap());
        assert!(ass_contains(&int_prime(3), &m).unwrap());
        let zero = PrimeIdeal::new(Ideal::zero(&zz())).unwrap();
        assert!(!ass_contains(&zero, &m).unwrap(), "torsion module has no (0)");

        let r = qxy();
        let mm = monomial_module(&r);
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let px = PrimeIdeal::new(Ideal::new(&r, vec![x.clone()]).unwrap()).unwrap();
        let pxy = PrimeIdeal::new(Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap()).unwrap();
        let py = PrimeIdeal::new(Ideal::new(&r, vec![y]).unwrap()).unwrap();
        assert!(ass_contains(&px, &mm).unwrap(), "the class of y has annihilator (x)");
        assert!(ass_contains(&pxy, &mm).unwrap(), "the class of x has annihilator (x, y)");
        assert!(!ass_contains(&py, &mm).unwrap());
    }

    #[test]
    fn associated_prime_enumeration_examples() {
        assert_eq!(
            prime_strings(&ass_enumerate(&z_mod(12)).unwrap()),
            vec!["(2)", "(3)"]
        );
        let r = zz();
        let mixed = ModulePresentation::from_diagonal(&r, &[r.zero(), r.from_i64(4)]).unwrap();
        assert_eq!(
            prime_strings(&ass_enumerate(&mixed).unwrap()),
            vec!["(0)", "(2)"]
        );
        assert!(ass_enumerate(&ModulePresentation::zero_module(&r))
            .unwrap()
            .is_empty());
        let mm = monomial_module(&qxy());
        assert_eq!(
            prime_strings(&ass_enumerate(&mm).unwrap()),
            vec!["(x)", "(x, y)"]
        );
    }

    #[test]
    fn enumeration_over_more_ring_classes() {
        // ZZ/12 as a module over itself: both primes are associated.
        let z12 = Ring::integers_mod(BigInt::from(12)).unwrap();
        let free = ModulePresentation::free(&z12, 1);
        assert_eq!(prime_strings(&ass_enumerate(&free).unwrap()), vec!["(2)", "(3)"]);

        // QQ[x]/(x^2 - x) = QQ × QQ: both factors appear for the free module.
        let qx = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = qx.var(0).unwrap();
        let rq = Ring::quotient(&qx, &[x.pow(2).sub(&x).unwrap()]).unwrap();
        let freeq = ModulePresentation::free(&rq, 1);
        assert_eq!(
            prime_strings(&ass_enumerate(&freeq).unwrap()),
            vec!["(x - 1)", "(x)"]
        );

        // k[x] invariant-factor route.
        let m = ModulePresentation::from_diagonal(&qx, &[x.pow(2), qx.zero()]).unwrap();
        assert_eq!(prime_strings(&ass_enumerate(&m).unwrap()), vec!["(0)", "(x)"]);
    }

    #[test]
    fn enumeration_needs_candidates_outside_the_classes() {
        // Non-monomial relation over QQ[x,y].
        let r = qxy();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let f = x.pow(2).sub(&y.pow(3)).unwrap();
        let m = ModulePresentation::cyclic(&Ideal::principal(&f));
        assert!(matches!(
            ass_enumerate(&m),
            Err(Error::NeedCandidates { .. })
        ));
        // With an asserted candidate the membership test still works.
        let p = PrimeIdeal::asserted(Ideal::principal(&f));
        let found = ass_enumerate_with(&m, &[p.clone()]).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0] == p);
    }

    #[test]
    fn support_set_is_union_of_closures_of_associated_primes() {
        let r = zz();
        let modules = vec![
            z_mod(12),
            ModulePresentation::from_diagonal(&r, &[r.zero(), r.from_i64(4)]).unwrap(),
            ModulePresentation::from_diagonal(&r, &[r.from_i64(30), r.from_i64(4)]).unwrap(),
            ModulePresentation::free(&r, 2),
        ];
        for m in &modules {
            let supp = supp_set(m).unwrap();
            let ass = ass_enumerate(m).unwrap();
            let closure = spec_closure(&r, ass).unwrap();
            assert!(
                supp.equals(&closure).unwrap(),
                "support must be the union of closures of associated primes"
            );
        }
        let mm = monomial_module(&qxy());
        let supp = supp_set(&mm).unwrap();
        assert_eq!(prime_strings(supp.minimal_primes()), vec!["(x)"]);
        let closure = spec_closure(&qxy(), ass_enumerate(&mm).unwrap()).unwrap();
        assert!(supp.equals(&closure).unwrap());
    }

    #[test]
    fn associated_primes_lie_in_the_support() {
        let r = zz();
        let m = ModulePresentation::from_diagonal(&r, &[r.from_i64(12), r.zero()]).unwrap();
        for p in ass_enumerate(&m).unwrap() {
            assert!(supp_contains(&p, &m).unwrap(), "Ass ⊆ Supp at {p}");
        }
    }

    #[test]
    fn filtration_of_cyclic_prime_power() {
        let f = prime_filtration(&z_mod(4)).unwrap();
        assert_eq!(prime_strings(&f.primes()), vec!["(2)", "(2)"]);
        f.verify().unwrap();
    }

    #[test]
    fn filtration_of_z12_mixes_primes() {
        let f = prime_filtration(&z_mod(12)).unwrap();
        assert_eq!(prime_strings(&f.primes()), vec!["(2)", "(2)", "(3)"]);
        f.verify().unwrap();
    }

    #[test]
    fn filtration_of_monomial_quotient() {
        let mm = monomial_module(&qxy());
        let f = prime_filtration(&mm).unwrap();
        assert_eq!(
            prime_strings(&f.primes()),
            vec!["(x, y)", "(x)"],
            "the maximal prime is peeled first"
        );
        f.verify().unwrap();
    }

    #[test]
    fn filtration_of_prime_cyclic_is_one_step() {
        let r = qxy();
        let x = r.var(0).unwrap();
        let m = ModulePresentation::cyclic(&Ideal::new(&r, vec![x]).unwrap());
        let f = prime_filtration(&m).unwrap();
        assert_eq!(prime_strings(&f.primes()), vec!["(x)"]);
        f.verify().unwrap();
    }

    #[test]
    fn filtration_primes_cover_associated_primes() {
        for m in [z_mod(12), z_mod(30)] {
            let f = prime_filtration(&m).unwrap();
            let layer: Vec<String> = prime_strings(&f.primes());
            for p in ass_enumerate(&m).unwrap() {
                assert!(
                    layer.contains(&p.to_string()),
                    "every associated prime appears among the layers"
                );
            }
        }
    }

    #[test]
    fn tampered_filtration_fails_verification() {
        let f = prime_filtration(&z_mod(4)).unwrap();
        let mut bad = f.clone();
        bad.steps[0].prime = int_prime(3);
        assert!(bad.verify().is_err(), "wrong layer prime must be caught");
        let mut short = f;
        short.steps.pop();
        assert!(
            short.verify().is_err(),
            "missing final layer must be caught"
        );
    }

    #[test]
    fn spectral_detection() {
        let r = zz();
        let free = ModulePresentation::free(&r, 1);
        assert_eq!(
            is_spectral(&free).unwrap().map(|p| p.to_string()),
            Some("(0)".into())
        );
        assert!(is_spectral(&z_mod(4)).unwrap().is_none(), "ann (4) is not prime");
        assert!(is_spectral(&z_mod(6)).unwrap().is_none(), "two associated primes");
        assert_eq!(
            is_spectral(&z_mod(3)).unwrap().map(|p| p.to_string()),
            Some("(3)".into())
        );

        // The ideal (x, y) as a module over QQ[x,y] is spectral at (0).
        let rq = qxy();
        let x = rq.var(0).unwrap();
        let y = rq.var(1).unwrap();
        let free1 = ModulePresentation::free(&rq, 1);
        let sub = Matrix::new(&rq, 1, 2, vec![x, y]).unwrap();
        let (ideal_module, _) = free1.submodule(&sub).unwrap();
        assert_eq!(
            is_spectral(&ideal_module).unwrap().map(|p| p.to_string()),
            Some("(0)".into())
        );
    }

    #[test]
    fn cyclic_prime_subquotient_examples() {
        let m = z_mod(12);
        assert!(cyclic_prime_subquotient(&int_prime(2), &m).unwrap());
        assert!(!cyclic_prime_subquotient(&int_prime(5), &m).unwrap());
    }

    #[test]
    fn spec_set_operations() {
        let r = zz();
        let s2 = spec_closure(&r, vec![int_prime(2)]).unwrap();
        let s23 = spec_closure(&r, vec![int_prime(2), int_prime(3)]).unwrap();
        assert!(s2.is_subset(&s23).unwrap());
        assert!(!s23.is_subset(&s2).unwrap());
        let u = s2.union(&spec_closure(&r, vec![int_prime(3)]).unwrap()).unwrap();
        assert!(u.equals(&s23).unwrap());
        let zero = PrimeIdeal::new(Ideal::zero(&r)).unwrap();
        let all = spec_closure(&r, vec![zero]).unwrap();
        assert!(s23.is_subset(&all).unwrap(), "V(0) is everything");
        assert_eq!(all.minimal_primes().len(), 1);
    }
}
