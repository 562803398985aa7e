//! Membership predicates for the subcategory families cut out by spectrum
//! data: Serre classes of bounded support, torsion-free classes attached to
//! a specialization-closed set, cosyzygy-constrained classes described by
//! decreasing sequences of such sets, and classes pinned down by arbitrary
//! point sets of associated primes.
//!
//! Subcategories are never materialized — each family is its defining data
//! plus a membership predicate.  Any decision that quantifies over
//! infinitely many primes carries a [`Provenance`] flag: it is either
//! settled by a finite closed-form sweep (`Proved`) or checked on a
//! declared finite sample (`Sampled`), and the two are never conflated.

use crate::error::{Error, Result};
use crate::kernel::coeff::BaseRing;
use crate::kernel::ideal::Ideal;
use crate::kernel::ring::Ring;
use crate::localalg;
use crate::modules::matrix::Matrix;
use crate::modules::presentation::{ModuleMap, ModulePresentation};
use crate::spectrum::{self, PrimeIdeal, SpecSet};
use std::fmt;

/// Coefficient-ring classes with different decision power for statements
/// quantified over all primes of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RingClass {
    /// `ZZ` or `k[x]`: infinite spectrum, but the cyclic decomposition
    /// gives closed forms for the associated primes of every cosyzygy.
    PidDomain,
    /// Finite spectrum: quantifying over all primes is a finite check.
    Artinian,
    /// No closed form available; decisions fall back to sampling.
    General,
}

impl RingClass {
    fn of(ring: &Ring) -> RingClass {
        if ring.is_scalar() {
            return match ring.base() {
                BaseRing::Int => RingClass::PidDomain,
                // QQ, GF(p) and ZZ/n are all zero-dimensional.
                _ => RingClass::Artinian,
            };
        }
        if ring.nvars() == 1 {
            if ring.is_free_poly() {
                RingClass::PidDomain
            } else {
                RingClass::Artinian
            }
        } else {
            RingClass::General
        }
    }
}

/// Whether a decision covered every relevant prime or only a finite sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Every prime the statement quantifies over was accounted for.
    Proved,
    /// Only a finite declared sample of primes was inspected.
    Sampled,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Proved => "proved",
            Provenance::Sampled => "sampled",
        }
    }

    fn and(self, other: Provenance) -> Provenance {
        if self == Provenance::Proved && other == Provenance::Proved {
            Provenance::Proved
        } else {
            Provenance::Sampled
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A membership decision together with how much of the spectrum backs it.
///
/// A negative verdict is always `Proved` — it is witnessed by a concrete
/// violating prime.  A positive verdict is `Proved` exactly when the ring
/// class admits a complete sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    holds: bool,
    provenance: Provenance,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({})",
            if self.holds { "member" } else { "not a member" },
            self.provenance
        )
    }
}

/// An arbitrary — not necessarily specialization-closed — set of primes:
/// an explicit finite list, or the whole spectrum of a ring whose spectrum
/// is finite.
#[derive(Debug, Clone)]
pub struct PointSet {
    ring: Ring,
    whole: bool,
    points: Vec<PrimeIdeal>,
}

impl PointSet {
    /// A finite list of primes, deduplicated by ideal equality.
    pub fn from_primes(ring: &Ring, primes: Vec<PrimeIdeal>) -> Result<PointSet> {
        for p in &primes {
            ring.check_same(p.ring())?;
        }
        let mut points = primes;
        points.sort_by_key(|p| p.to_string());
        points.dedup_by_key(|p| p.to_string());
        Ok(PointSet {
            ring: ring.clone(),
            whole: false,
            points,
        })
    }

    /// Every prime of a zero-dimensional ring, materialized as the minimal
    /// primes of the zero ideal.
    pub fn whole_spectrum(ring: &Ring) -> Result<PointSet> {
        if RingClass::of(ring) != RingClass::Artinian {
            return Err(Error::InvalidArgument(format!(
                "whole-spectrum point sets need a finite spectrum; {ring} has infinitely many primes"
            )));
        }
        let mut points = spectrum::minimal_primes(&Ideal::zero(ring))?;
        points.sort_by_key(|p| p.to_string());
        Ok(PointSet {
            ring: ring.clone(),
            whole: true,
            points,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Whether this is the whole spectrum of its (zero-dimensional) ring.
    pub fn is_whole(&self) -> bool {
        self.whole
    }

    pub fn points(&self) -> &[PrimeIdeal] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &PrimeIdeal) -> Result<bool> {
        self.ring.check_same(p.ring())?;
        if self.whole {
            return Ok(true);
        }
        for q in &self.points {
            if q.ideal().equal(p.ideal())? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn equals(&self, other: &PointSet) -> Result<bool> {
        self.ring.check_same(other.ring())?;
        for p in &self.points {
            if !other.contains(p)? {
                return Ok(false);
            }
        }
        for q in &other.points {
            if !self.contains(q)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .points
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "{{{body}}}")
    }
}

/// Does `M` have support inside the specialization-closed set `S`?
///
/// `Supp(M) = V(ann M)` is contained in `S = V(q_1) ∪ ... ∪ V(q_r)`
/// exactly when `q_1 ∩ ... ∩ q_r ⊆ √ann(M)`; for the empty set the
/// intersection is the unit ideal, so only the zero module passes.
pub fn serre_member(m: &ModulePresentation, s: &SpecSet) -> Result<bool> {
    m.ring().check_same(s.ring())?;
    let ann = m.annihilator()?;
    let mut meet = Ideal::unit(m.ring());
    for p in s.minimal_primes() {
        meet = meet.intersect(p.ideal())?;
    }
    for g in meet.canonical_basis() {
        if !ann.radical_contains(&g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The support of a family of modules: the smallest specialization-closed
/// set containing every member's support, computed as the closure of all
/// their associated primes (which carry the same minimal points).
pub fn supp_of_family(ring: &Ring, ms: &[ModulePresentation]) -> Result<SpecSet> {
    let mut primes = Vec::new();
    for m in ms {
        ring.check_same(m.ring())?;
        primes.extend(spectrum::ass_enumerate(m)?);
    }
    spectrum::spec_closure(ring, primes)
}

/// Membership in the torsion-free class attached to `S`: `M` has no
/// nonzero `S`-torsion.
pub fn one_resolving_member(m: &ModulePresentation, s: &SpecSet) -> Result<bool> {
    localalg::torsion_free_member(m, s)
}

/// The torsion-free class over `S` resolves the generator `G` exactly when
/// `G` itself lies in it, i.e. no associated prime of `G` falls in `S`.
pub fn one_resolving_valid(s: &SpecSet, g: &ModulePresentation) -> Result<bool> {
    g.ring().check_same(s.ring())?;
    for p in spectrum::ass_enumerate(g)? {
        if s.contains_prime(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Proof that a module generates the module category: an explicit
/// surjection from a finite direct sum of its copies onto the free module
/// of rank one.
#[derive(Debug, Clone)]
pub struct GeneratorWitness {
    copies: usize,
    onto_ring: Matrix,
}

impl GeneratorWitness {
    /// A claimed surjection `G^copies -> R`, given by a `1 x copies·gens`
    /// matrix; it is verified when attached to a sequence.
    pub fn new(copies: usize, onto_ring: Matrix) -> GeneratorWitness {
        GeneratorWitness { copies, onto_ring }
    }

    fn verify(&self, g: &ModulePresentation) -> Result<()> {
        if self.copies == 0 {
            return Err(Error::InvalidArgument(
                "a generator witness needs at least one copy".into(),
            ));
        }
        let sum = g.power(self.copies);
        let free = ModulePresentation::free(g.ring(), 1);
        let map = ModuleMap::new(sum, free, self.onto_ring.clone())?;
        map.well_defined()?;
        if !map.is_surjective()? {
            return Err(Error::InvalidArgument(
                "generator witness map is not onto the free module of rank one".into(),
            ));
        }
        Ok(())
    }
}

/// A decreasing sequence `Y_1 ⊇ ... ⊇ Y_n` of specialization-closed sets
/// together with a generator of the module category (the free module of
/// rank one unless an explicit generator with a surjection witness is
/// supplied) and an optional declared sample of primes used where no
/// closed-form sweep exists.
#[derive(Debug, Clone)]
pub struct GSequence {
    sets: Vec<SpecSet>,
    generator: ModulePresentation,
    samples: Vec<PrimeIdeal>,
}

impl GSequence {
    /// A sequence over the free generator of rank one.
    pub fn new(ring: &Ring, sets: Vec<SpecSet>) -> Result<GSequence> {
        GSequence::with_generator(ring, sets, ModulePresentation::free(ring, 1), None)
    }

    /// A sequence over an explicit generator.  Anything other than the
    /// free module of rank one must come with a verified surjection
    /// witness onto the ring.
    pub fn with_generator(
        ring: &Ring,
        sets: Vec<SpecSet>,
        generator: ModulePresentation,
        witness: Option<&GeneratorWitness>,
    ) -> Result<GSequence> {
        ring.check_same(generator.ring())?;
        if sets.is_empty() {
            return Err(Error::InvalidArgument(
                "a set sequence needs at least one entry".into(),
            ));
        }
        for s in &sets {
            ring.check_same(s.ring())?;
        }
        for w in sets.windows(2) {
            if !w[1].is_subset(&w[0])? {
                return Err(Error::InvalidArgument(format!(
                    "sets must decrease: {} is not contained in {}",
                    w[1], w[0]
                )));
            }
        }
        let free_rank_one = generator.gens() == 1 && generator.relations().cols() == 0;
        match witness {
            Some(w) => w.verify(&generator)?,
            None if free_rank_one => {}
            None => {
                return Err(Error::InvalidArgument(
                    "a non-free generator needs an explicit surjection witness onto the ring"
                        .into(),
                ))
            }
        }
        Ok(GSequence {
            sets,
            generator,
            samples: Vec::new(),
        })
    }

    /// Declares the finite prime sample used by sampled decisions.
    pub fn with_samples(mut self, samples: Vec<PrimeIdeal>) -> Result<GSequence> {
        for p in &samples {
            self.ring().check_same(p.ring())?;
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        self.generator.ring()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[SpecSet] {
        &self.sets
    }

    pub fn generator(&self) -> &ModulePresentation {
        &self.generator
    }

    pub fn samples(&self) -> &[PrimeIdeal] {
        &self.samples
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .sets
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "({body})")
    }
}

/// Symbolic associated primes of a cosyzygy over a principal ideal domain:
/// either a finite list or every maximal ideal at once.
struct CosyzygyAss {
    every_maximal: bool,
    primes: Vec<PrimeIdeal>,
}

/// Closed form over `ZZ` or `k[x]` from the cyclic decomposition
/// `M ≅ R^a ⊕ ⊕ R/(d_i)`:
///
/// * degree 0: the associated primes of `M` itself — `(0)` when `a > 0`
///   plus the primes dividing some `d_i`;
/// * degree 1: the hull quotient `E(M)/M`; the free part contributes
///   `Frac(R)/R`, whose associated primes are all maximal ideals, and each
///   cyclic part contributes a Prüfer-type module at its own prime;
/// * degree ≥ 2: zero — the degree-1 cosyzygy is a direct sum of
///   injectives, hence injective over a noetherian ring.
fn pid_cosyzygy_ass(m: &ModulePresentation, k: usize) -> Result<CosyzygyAss> {
    let ring = m.ring();
    let (factors, free) = m.invariant_factors()?;
    let mut torsion: Vec<PrimeIdeal> = Vec::new();
    for d in &factors {
        torsion.extend(spectrum::minimal_primes(&Ideal::principal(d))?);
    }
    torsion.sort_by_key(|p| p.to_string());
    torsion.dedup_by_key(|p| p.to_string());
    Ok(match k {
        0 => {
            let mut primes = torsion;
            if free > 0 {
                primes.insert(0, PrimeIdeal::new(Ideal::zero(ring))?);
            }
            CosyzygyAss {
                every_maximal: false,
                primes,
            }
        }
        1 => {
            if free > 0 {
                CosyzygyAss {
                    every_maximal: true,
                    primes: Vec::new(),
                }
            } else {
                CosyzygyAss {
                    every_maximal: false,
                    primes: torsion,
                }
            }
        }
        _ => CosyzygyAss {
            every_maximal: false,
            primes: Vec::new(),
        },
    })
}

/// A prime of `s` meeting the description, if any.
fn description_meets(d: &CosyzygyAss, s: &SpecSet) -> Result<Option<PrimeIdeal>> {
    if d.every_maximal && !s.is_empty() {
        // A nonempty specialization-closed set contains a maximal ideal:
        // either one of its own nonzero generators, or — when its only
        // generator is (0) — any concrete closed point of the ring.
        for p in s.minimal_primes() {
            if !p.ideal().is_zero_ideal() {
                return Ok(Some(p.clone()));
            }
        }
        return Ok(Some(sample_maximal(s.ring())?));
    }
    for p in &d.primes {
        if s.contains_prime(p)? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

/// A concrete maximal ideal of `ZZ` or `k[x]`.
fn sample_maximal(ring: &Ring) -> Result<PrimeIdeal> {
    let gen = if ring.is_scalar() {
        ring.from_i64(2)
    } else {
        ring.var(0)?
    };
    PrimeIdeal::new(Ideal::principal(&gen))
}

struct ClauseOutcome {
    violation: Option<PrimeIdeal>,
    provenance: Provenance,
    checked: Vec<String>,
}

/// Decides `Ass(℧_degree(m)) ∩ y = ∅` with the strongest route the ring
/// class affords.  A found violation is proved regardless of the route.
fn check_clause(
    m: &ModulePresentation,
    y: &SpecSet,
    degree: usize,
    samples: &[PrimeIdeal],
) -> Result<ClauseOutcome> {
    match RingClass::of(m.ring()) {
        RingClass::PidDomain => {
            let d = pid_cosyzygy_ass(m, degree)?;
            let checked = if d.every_maximal {
                vec!["every maximal ideal".to_string()]
            } else {
                d.primes.iter().map(|p| p.to_string()).collect()
            };
            Ok(ClauseOutcome {
                violation: description_meets(&d, y)?,
                provenance: Provenance::Proved,
                checked,
            })
        }
        RingClass::Artinian => {
            let spec = spectrum::minimal_primes(&Ideal::zero(m.ring()))?;
            let mut violation = None;
            let mut checked = Vec::new();
            for p in spec {
                checked.push(p.to_string());
                if y.contains_prime(&p)? && localalg::cosyzygy_ass_membership(&p, degree, m)? {
                    violation = Some(p);
                    break;
                }
            }
            Ok(ClauseOutcome {
                violation,
                provenance: Provenance::Proved,
                checked,
            })
        }
        RingClass::General => {
            let mut candidates: Vec<PrimeIdeal> = y.minimal_primes().to_vec();
            for p in samples {
                if y.contains_prime(p)? {
                    candidates.push(p.clone());
                }
            }
            candidates.sort_by_key(|p| p.to_string());
            candidates.dedup_by_key(|p| p.to_string());
            let checked = candidates.iter().map(|p| p.to_string()).collect();
            let mut violation = None;
            for p in candidates {
                if localalg::cosyzygy_ass_membership(&p, degree, m)? {
                    violation = Some(p);
                    break;
                }
            }
            let provenance = if violation.is_some() {
                Provenance::Proved
            } else {
                Provenance::Sampled
            };
            Ok(ClauseOutcome {
                violation,
                provenance,
                checked,
            })
        }
    }
}

/// One clause of a sequence validation: the set at `index` (1-based) must
/// avoid the associated primes of the matching cosyzygy.
#[derive(Debug, Clone)]
pub struct ClauseReport {
    index: usize,
    set: String,
    holds: bool,
    provenance: Provenance,
    checked: Vec<String>,
    violation: Option<String>,
}

impl ClauseReport {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn set(&self) -> &str {
        &self.set
    }

    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The primes (or symbolic coverage) inspected for this clause.
    pub fn checked(&self) -> &[String] {
        &self.checked
    }

    pub fn violation(&self) -> Option<&str> {
        self.violation.as_deref()
    }
}

/// Outcome of validating a [`GSequence`] clause by clause.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    clauses: Vec<ClauseReport>,
    valid: bool,
    provenance: Provenance,
}

impl ValidationReport {
    pub fn clauses(&self) -> &[ClauseReport] {
        &self.clauses
    }

    pub fn valid(&self) -> bool {
        self.valid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            match &c.violation {
                Some(p) => writeln!(
                    f,
                    "clause {}: {} meets cosyzygy prime {p} [{}]",
                    c.index, c.set, c.provenance
                )?,
                None => writeln!(f, "clause {}: {} clear [{}]", c.index, c.set, c.provenance)?,
            }
        }
        write!(
            f,
            "sequence {} ({})",
            if self.valid { "valid" } else { "invalid" },
            self.provenance
        )
    }
}

/// Validates a sequence against its generator: for each `i`, the
/// associated primes of the `(i-1)`-st cosyzygy of the generator must
/// avoid `Y_i`.
pub fn g_sequence_validate(y: &GSequence) -> Result<ValidationReport> {
    let mut clauses = Vec::new();
    let mut valid = true;
    let mut provenance = Provenance::Proved;
    for (idx, set) in y.sets().iter().enumerate() {
        let outcome = check_clause(y.generator(), set, idx, y.samples())?;
        let holds = outcome.violation.is_none();
        valid &= holds;
        provenance = provenance.and(outcome.provenance);
        clauses.push(ClauseReport {
            index: idx + 1,
            set: set.to_string(),
            holds,
            provenance: outcome.provenance,
            checked: outcome.checked,
            violation: outcome.violation.map(|p| p.to_string()),
        });
    }
    Ok(ValidationReport {
        clauses,
        valid,
        provenance,
    })
}

/// Is `M` in the class cut out by the sequence: for each `i`, the
/// associated primes of the `(i-1)`-st cosyzygy of `M` avoid `Y_i`.
pub fn c_tilde_member(m: &ModulePresentation, y: &GSequence) -> Result<Verdict> {
    m.ring().check_same(y.ring())?;
    let mut provenance = Provenance::Proved;
    for (idx, set) in y.sets().iter().enumerate() {
        let outcome = check_clause(m, set, idx, y.samples())?;
        if outcome.violation.is_some() {
            return Ok(Verdict {
                holds: false,
                provenance: Provenance::Proved,
            });
        }
        provenance = provenance.and(outcome.provenance);
    }
    Ok(Verdict {
        holds: true,
        provenance,
    })
}

/// The tail `(Y_j, ..., Y_n)` of the sequence, `j` 1-based; the generator
/// and declared samples carry over.
pub fn c_tilde_truncate(y: &GSequence, j: usize) -> Result<GSequence> {
    if j == 0 || j > y.len() {
        return Err(Error::InvalidArgument(format!(
            "truncation index {j} out of range 1..={}",
            y.len()
        )));
    }
    Ok(GSequence {
        sets: y.sets()[j - 1..].to_vec(),
        generator: y.generator().clone(),
        samples: y.samples().to_vec(),
    })
}

/// Is every associated prime of `M` inside the point set?
pub fn psi_member(m: &ModulePresentation, s: &PointSet) -> Result<bool> {
    m.ring().check_same(s.ring())?;
    for p in spectrum::ass_enumerate(m)? {
        if !s.contains(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All associated primes occurring across the family, as a point set.
pub fn phi_of_family(ring: &Ring, ms: &[ModulePresentation]) -> Result<PointSet> {
    let mut primes = Vec::new();
    for m in ms {
        ring.check_same(m.ring())?;
        primes.extend(spectrum::ass_enumerate(m)?);
    }
    PointSet::from_primes(ring, primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ring::RingElement;
    use num_bigint::BigInt;

    fn zz() -> Ring {
        Ring::integers()
    }

    fn zmod(n: i64) -> Ring {
        Ring::integers_mod(BigInt::from(n)).unwrap()
    }

    fn qxy() -> Ring {
        Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap()
    }

    fn int_prime(p: i64) -> PrimeIdeal {
        let r = zz();
        PrimeIdeal::new(Ideal::principal(&r.from_i64(p))).unwrap()
    }

    fn zero_prime(r: &Ring) -> PrimeIdeal {
        PrimeIdeal::new(Ideal::zero(r)).unwrap()
    }

    fn v_of(primes: Vec<PrimeIdeal>) -> SpecSet {
        spectrum::spec_closure(&zz(), primes).unwrap()
    }

    fn z_mod_m(n: i64) -> ModulePresentation {
        let r = zz();
        ModulePresentation::from_diagonal(&r, &[r.from_i64(n)]).unwrap()
    }

    fn diag(elts: &[i64]) -> ModulePresentation {
        let r = zz();
        let d: Vec<RingElement> = elts.iter().map(|&e| r.from_i64(e)).collect();
        ModulePresentation::from_diagonal(&r, &d).unwrap()
    }

    /// Brute-force support containment: every minimal prime over the
    /// annihilator must contain some generator prime of the set.
    fn serre_oracle(m: &ModulePresentation, s: &SpecSet) -> bool {
        let ann = m.annihilator().unwrap();
        if ann.is_unit_ideal() {
            return true;
        }
        for big in spectrum::minimal_primes(&ann).unwrap() {
            let covered = s
                .minimal_primes()
                .iter()
                .any(|q| q.ideal().contained_in(big.ideal()).unwrap());
            if !covered {
                return false;
            }
        }
        true
    }

    #[test]
    fn serre_membership_examples() {
        let s23 = v_of(vec![int_prime(2), int_prime(3)]);
        let s2 = v_of(vec![int_prime(2)]);
        let z12 = z_mod_m(12);
        assert!(
            serre_member(&z12, &s23).unwrap(),
            "Supp(Z/12) = {{(2),(3)}} lies in V(2) ∪ V(3)"
        );
        assert!(
            !serre_member(&z12, &s2).unwrap(),
            "(3) supports Z/12 but is not over (2)"
        );
        let zero = z_mod_m(1);
        assert!(
            serre_member(&zero, &SpecSet::empty(&zz())).unwrap(),
            "only the zero module has empty support"
        );
        assert!(!serre_member(&z12, &SpecSet::empty(&zz())).unwrap());
    }

    #[test]
    fn serre_membership_matches_minimal_prime_oracle() {
        let sets = [
            SpecSet::empty(&zz()),
            v_of(vec![int_prime(2)]),
            v_of(vec![int_prime(3)]),
            v_of(vec![int_prime(2), int_prime(3)]),
            v_of(vec![zero_prime(&zz())]),
        ];
        let mods = [z_mod_m(1), z_mod_m(4), z_mod_m(12), diag(&[0, 2]), diag(&[6, 0])];
        for m in &mods {
            for s in &sets {
                assert_eq!(
                    serre_member(m, s).unwrap(),
                    serre_oracle(m, s),
                    "radical test must agree with the minimal-prime sweep"
                );
            }
        }
    }

    #[test]
    fn family_support_is_closure_of_associated_primes() {
        let fam = vec![z_mod_m(12)];
        let got = supp_of_family(&zz(), &fam).unwrap();
        let want = v_of(vec![int_prime(2), int_prime(3)]);
        assert!(got.equals(&want).unwrap(), "Supp {{Z/12}} = V(2) ∪ V(3)");
        assert!(supp_of_family(&zz(), &[]).unwrap().is_empty());
        let whole = supp_of_family(&zz(), &[ModulePresentation::free(&zz(), 1)]).unwrap();
        assert!(whole.equals(&v_of(vec![zero_prime(&zz())])).unwrap());
    }

    #[test]
    fn one_resolving_validity_and_membership() {
        let r = zz();
        let free = ModulePresentation::free(&r, 1);
        let s2 = v_of(vec![int_prime(2)]);
        assert!(one_resolving_valid(&s2, &free).unwrap());
        let all = v_of(vec![zero_prime(&r)]);
        assert!(
            !one_resolving_valid(&all, &free).unwrap(),
            "V((0)) contains Ass(Z) = {{(0)}}"
        );
        assert!(one_resolving_member(&z_mod_m(3), &s2).unwrap());
        assert!(!one_resolving_member(&z_mod_m(2), &s2).unwrap());
        assert!(one_resolving_member(&free, &s2).unwrap());
    }

    #[test]
    fn one_resolving_closure_under_sums_and_kernels_of_epis() {
        let r = zz();
        let s2 = v_of(vec![int_prime(2)]);
        let a = z_mod_m(3);
        let b = ModulePresentation::free(&r, 1);
        let sum = a.direct_sum(&b).unwrap();
        assert!(one_resolving_member(&sum, &s2).unwrap());
        // Kernel of the fold map M ⊕ M -> M stays in the class.
        let double = a.direct_sum(&a).unwrap();
        let fold = Matrix::from_fn(&r, a.gens(), 2 * a.gens(), |i, j| {
            if j % a.gens() == i {
                r.one()
            } else {
                r.zero()
            }
        })
        .unwrap();
        let fold_map = ModuleMap::new(double, a.clone(), fold).unwrap();
        fold_map.well_defined().unwrap();
        assert!(fold_map.is_surjective().unwrap());
        let (ker, _) = fold_map.kernel().unwrap();
        assert!(
            one_resolving_member(&ker, &s2).unwrap(),
            "kernels of epimorphisms between members stay members"
        );
    }

    #[test]
    fn sequences_must_decrease_and_be_nonempty() {
        let r = zz();
        let v2 = v_of(vec![int_prime(2)]);
        let v23 = v_of(vec![int_prime(2), int_prime(3)]);
        assert!(GSequence::new(&r, vec![v23.clone(), v2.clone()]).is_ok());
        let err = GSequence::new(&r, vec![v2.clone(), v23.clone()]);
        assert!(err.is_err(), "an increasing pair must be rejected");
        assert!(GSequence::new(&r, vec![]).is_err());
    }

    #[test]
    fn non_free_generators_need_a_surjection_witness() {
        let r = zz();
        let v2 = v_of(vec![int_prime(2)]);
        let g = diag(&[0, 2]); // Z ⊕ Z/2 generates: project onto the free part.
        assert!(
            GSequence::with_generator(&r, vec![v2.clone()], g.clone(), None).is_err(),
            "non-free generator without witness is rejected"
        );
        let onto =
            Matrix::from_fn(&r, 1, 2, |_, j| if j == 0 { r.one() } else { r.zero() }).unwrap();
        let w = GeneratorWitness::new(1, onto);
        let seq = GSequence::with_generator(&r, vec![v2.clone()], g, Some(&w)).unwrap();
        assert_eq!(seq.generator().gens(), 2);
        // Z/2 is not a generator: no map to Z is both well defined and onto.
        let bad = z_mod_m(2);
        let claim = Matrix::from_fn(&r, 1, 1, |_, _| r.one()).unwrap();
        let w_bad = GeneratorWitness::new(1, claim);
        assert!(GSequence::with_generator(&r, vec![v2], bad, Some(&w_bad)).is_err());
    }

    #[test]
    fn validation_over_the_integers() {
        let r = zz();
        let v2 = v_of(vec![int_prime(2)]);
        let empty = SpecSet::empty(&r);
        let ok = GSequence::new(&r, vec![v2.clone(), empty.clone()]).unwrap();
        let report = g_sequence_validate(&ok).unwrap();
        assert!(report.valid(), "(V(2), {{}}) over Z validates:\n{report}");
        assert_eq!(report.provenance(), Provenance::Proved);
        assert_eq!(report.clauses().len(), 2);

        let v23 = v_of(vec![int_prime(2), int_prime(3)]);
        let v3 = v_of(vec![int_prime(3)]);
        let bad = GSequence::new(&r, vec![v23, v3]).unwrap();
        let report = g_sequence_validate(&bad).unwrap();
        assert!(
            !report.valid(),
            "every maximal ideal supports the first cosyzygy of Z"
        );
        assert!(report.clauses()[0].holds());
        assert_eq!(report.clauses()[1].violation(), Some("(3)"));

        let trivial = GSequence::new(&r, vec![empty.clone(), empty]).unwrap();
        assert!(g_sequence_validate(&trivial).unwrap().valid());
    }

    #[test]
    fn validation_over_an_artinian_ring() {
        let r = zmod(12);
        let free = ModulePresentation::free(&r, 1);
        let two = PrimeIdeal::new(Ideal::principal(&r.from_i64(2))).unwrap();
        let v2 = spectrum::spec_closure(&r, vec![two]).unwrap();
        let bad = GSequence::new(&r, vec![v2]).unwrap();
        let report = g_sequence_validate(&bad).unwrap();
        assert!(!report.valid(), "(2) ∈ Ass(Z/12) as a module over itself");
        assert_eq!(report.provenance(), Provenance::Proved);
        let empty = SpecSet::empty(&r);
        let ok = GSequence::new(&r, vec![empty.clone(), empty]).unwrap();
        assert!(g_sequence_validate(&ok).unwrap().valid());
        drop(free);
    }

    #[test]
    fn class_membership_examples_over_the_integers() {
        let r = zz();
        let v2 = v_of(vec![int_prime(2)]);
        let y = GSequence::new(&r, vec![v2, SpecSet::empty(&r)]).unwrap();
        let yes = c_tilde_member(&z_mod_m(3), &y).unwrap();
        assert!(yes.holds(), "Ass(Z/3) = {{(3)}} avoids V(2)");
        assert_eq!(yes.provenance(), Provenance::Proved);
        let no = c_tilde_member(&z_mod_m(2), &y).unwrap();
        assert!(!no.holds());
        assert_eq!(no.provenance(), Provenance::Proved);
        assert!(c_tilde_member(&z_mod_m(1), &y).unwrap().holds());
    }

    #[test]
    fn class_membership_over_an_artinian_ring() {
        let r = zmod(12);
        let two = PrimeIdeal::new(Ideal::principal(&r.from_i64(2))).unwrap();
        let three = PrimeIdeal::new(Ideal::principal(&r.from_i64(3))).unwrap();
        let v3 = spectrum::spec_closure(&r, vec![three]).unwrap();
        let v2 = spectrum::spec_closure(&r, vec![two]).unwrap();
        let m = ModulePresentation::from_diagonal(&r, &[r.from_i64(2)]).unwrap();
        // Ass(Z/2 over Z/12) = {(2)}: avoids V(3) in degree 0.
        let y = GSequence::new(&r, vec![v3, SpecSet::empty(&r)]).unwrap();
        let v = c_tilde_member(&m, &y).unwrap();
        assert!(v.holds() && v.provenance() == Provenance::Proved);
        // Its first cosyzygy E(Z/2)/(Z/2) = Z/4 / Z/2 is again 2-primary.
        let y2 = GSequence::new(&r, vec![v2.clone(), v2]).unwrap();
        let v = c_tilde_member(&m, &y2).unwrap();
        assert!(!v.holds(), "the degree-1 clause catches the 2-primary cosyzygy");
    }

    #[test]
    fn sampled_membership_over_a_multivariate_ring() {
        let r = qxy();
        let x = r.var_named("x").unwrap();
        let y_var = r.var_named("y").unwrap();
        let px = PrimeIdeal::new(Ideal::principal(&x)).unwrap();
        let py = PrimeIdeal::new(Ideal::principal(&y_var)).unwrap();
        let vx = spectrum::spec_closure(&r, vec![px]).unwrap();
        let seq = GSequence::new(&r, vec![vx, SpecSet::empty(&r)])
            .unwrap()
            .with_samples(vec![py])
            .unwrap();
        let rx = ModulePresentation::cyclic(&Ideal::principal(&x));
        let ry = ModulePresentation::cyclic(&Ideal::principal(&y_var));
        let hit = c_tilde_member(&rx, &seq).unwrap();
        assert!(!hit.holds(), "(x) ∈ Ass(R/(x)) violates the degree-0 clause");
        assert_eq!(hit.provenance(), Provenance::Proved);
        let miss = c_tilde_member(&ry, &seq).unwrap();
        assert!(miss.holds());
        assert_eq!(
            miss.provenance(),
            Provenance::Sampled,
            "no closed form over two variables: positive verdicts are sampled"
        );
        let report = g_sequence_validate(&seq).unwrap();
        assert_eq!(report.provenance(), Provenance::Sampled);
    }

    #[test]
    fn truncation_takes_suffixes_and_preserves_validity() {
        let r = zz();
        let v2 = v_of(vec![int_prime(2)]);
        let y = GSequence::new(&r, vec![v2, SpecSet::empty(&r)]).unwrap();
        let t2 = c_tilde_truncate(&y, 2).unwrap();
        assert_eq!(t2.len(), 1);
        assert!(t2.sets()[0].is_empty());
        let t1 = c_tilde_truncate(&y, 1).unwrap();
        assert_eq!(t1.len(), 2);
        for (a, b) in t1.sets().iter().zip(y.sets()) {
            assert!(a.equals(b).unwrap(), "truncation at 1 is the identity");
        }
        assert!(c_tilde_truncate(&y, 0).is_err());
        assert!(c_tilde_truncate(&y, 3).is_err());
        // Suffix law on the clause sets, and validity inheritance.
        let sets: Vec<String> = y.sets().iter().map(|s| s.to_string()).collect();
        let tail: Vec<String> = t2.sets().iter().map(|s| s.to_string()).collect();
        assert_eq!(&sets[1..], &tail[..]);
        assert!(g_sequence_validate(&y).unwrap().valid());
        assert!(g_sequence_validate(&t2).unwrap().valid());
    }

    #[test]
    fn closed_form_cosyzygy_primes_match_the_divisible_model() {
        use crate::localalg::divisible::cosyzygy_ass_oracle;
        let mods = [z_mod_m(12), diag(&[0, 4]), diag(&[0, 0]), z_mod_m(1)];
        let primes = [zero_prime(&zz()), int_prime(2), int_prime(3), int_prime(5)];
        for m in &mods {
            for k in 0..=2usize {
                let d = pid_cosyzygy_ass(m, k).unwrap();
                for p in &primes {
                    let symbolic = if p.ideal().is_zero_ideal() {
                        d.primes.iter().any(|q| q.ideal().is_zero_ideal())
                    } else {
                        d.every_maximal
                            || d.primes.iter().any(|q| q.to_string() == p.to_string())
                    };
                    let oracle = cosyzygy_ass_oracle(m, k, p).unwrap();
                    assert_eq!(
                        symbolic, oracle,
                        "closed form and divisible model disagree at degree {k}, prime {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn distinct_valid_sequences_are_separated_by_small_witnesses() {
        let r = zz();
        let witnesses = [
            ModulePresentation::free(&r, 1),
            z_mod_m(2),
            z_mod_m(3),
            z_mod_m(5),
            z_mod_m(30),
        ];
        // All valid shapes of length 2 with generator primes among
        // {(0),(2),(3),(5)}: the degree-1 clause forces Y_2 = {} and the
        // degree-0 clause only forbids (0) in Y_1.
        let mut shapes = Vec::new();
        for mask in 0..8u32 {
            let mut ps = Vec::new();
            for (bit, q) in [(1, 2i64), (2, 3), (4, 5)] {
                if mask & bit != 0 {
                    ps.push(int_prime(q));
                }
            }
            let y1 = v_of(ps);
            let seq = GSequence::new(&r, vec![y1, SpecSet::empty(&r)]).unwrap();
            let report = g_sequence_validate(&seq).unwrap();
            assert!(report.valid(), "shape {mask} must validate:\n{report}");
            shapes.push(seq);
        }
        // Any sequence keeping (0) in Y_1 or anything in Y_2 is invalid.
        let with_zero = GSequence::new(
            &r,
            vec![v_of(vec![zero_prime(&r)]), SpecSet::empty(&r)],
        )
        .unwrap();
        assert!(!g_sequence_validate(&with_zero).unwrap().valid());
        for (i, a) in shapes.iter().enumerate() {
            for b in shapes.iter().skip(i + 1) {
                let separated = witnesses.iter().any(|m| {
                    c_tilde_member(m, a).unwrap().holds()
                        != c_tilde_member(m, b).unwrap().holds()
                });
                assert!(
                    separated,
                    "sequences {a} and {b} admit a separating witness"
                );
            }
        }
    }

    #[test]
    fn point_sets_deduplicate_and_decide_membership() {
        let r = zz();
        let s = PointSet::from_primes(&r, vec![int_prime(2), int_prime(2), int_prime(3)]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&int_prime(2)).unwrap());
        assert!(!s.contains(&int_prime(5)).unwrap());
        assert!(!s.contains(&zero_prime(&r)).unwrap());
        assert_eq!(s.to_string(), "{(2), (3)}");
        let t = PointSet::from_primes(&r, vec![int_prime(3), int_prime(2)]).unwrap();
        assert!(s.equals(&t).unwrap());
    }

    #[test]
    fn whole_spectrum_point_sets_need_finite_spectra() {
        let s = PointSet::whole_spectrum(&zmod(12)).unwrap();
        assert!(s.is_whole());
        assert_eq!(s.len(), 2);
        assert!(PointSet::whole_spectrum(&zz()).is_err());
    }

    #[test]
    fn psi_and_phi_examples() {
        let r = zz();
        let just2 = PointSet::from_primes(&r, vec![int_prime(2)]).unwrap();
        assert!(psi_member(&z_mod_m(4), &just2).unwrap(), "Ass(Z/4) = {{(2)}}");
        assert!(
            !psi_member(&z_mod_m(6), &just2).unwrap(),
            "Ass(Z/6) also contains (3)"
        );
        let phi = phi_of_family(&r, &[z_mod_m(12)]).unwrap();
        let want = PointSet::from_primes(&r, vec![int_prime(2), int_prime(3)]).unwrap();
        assert!(phi.equals(&want).unwrap());
        let empty = PointSet::from_primes(&r, vec![]).unwrap();
        assert!(psi_member(&z_mod_m(1), &empty).unwrap());
        assert!(!psi_member(&z_mod_m(2), &empty).unwrap());
    }

    #[test]
    fn phi_recovers_point_sets_from_witness_families() {
        let r = zz();
        let s = PointSet::from_primes(
            &r,
            vec![zero_prime(&r), int_prime(2), int_prime(5)],
        )
        .unwrap();
        let mut fam = Vec::new();
        for p in s.points() {
            if p.ideal().is_zero_ideal() {
                fam.push(ModulePresentation::free(&r, 1));
            } else {
                fam.push(ModulePresentation::cyclic(p.ideal()));
            }
        }
        let back = phi_of_family(&r, &fam).unwrap();
        assert!(back.equals(&s).unwrap(), "Φ of the witness family is S");
    }

    #[test]
    fn torsion_free_classes_reveal_their_complement() {
        // S is recovered as the primes not associated to any torsion-free
        // member: samples outside S embed as cyclic witnesses.
        let r = zz();
        let s = v_of(vec![int_prime(2)]);
        for q in [3i64, 5, 7] {
            let m = z_mod_m(q);
            assert!(one_resolving_member(&m, &s).unwrap());
            let phi = phi_of_family(&r, &[m]).unwrap();
            assert!(phi.contains(&int_prime(q)).unwrap());
        }
        for m in [z_mod_m(3), diag(&[0, 5]), ModulePresentation::free(&r, 2)] {
            if one_resolving_member(&m, &s).unwrap() {
                for p in spectrum::ass_enumerate(&m).unwrap() {
                    assert!(
                        !s.contains_prime(&p).unwrap(),
                        "torsion-free members have no associated primes inside S"
                    );
                }
            }
        }
    }
}
