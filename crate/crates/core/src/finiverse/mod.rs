//! Exhaustive verification over finite module universes.
//!
//! Over an Artinian principal quotient (`Z/n` or `F_p[x]/(x^k)`) every
//! finitely generated module is a finite direct sum of cyclic prime-power
//! factors, so the isomorphism classes of modules up to a cardinality bound
//! form a finite, explicitly enumerable universe.  This module enumerates
//! such universes, closes families of classes under chosen structural
//! operations (subobjects, quotients, extensions, cokernels, finite sums,
//! essential extensions), and verifies classification bijections — families
//! against subsets of the spectrum — by brute force.
//!
//! Every fast combinatorial rule used here (partition dominance for
//! subquotients, Littlewood–Richardson positivity for extension middles and
//! cokernels, socle counting for essential extensions) is first proven by
//! exhaustion against raw element-level searches on a small universe; a
//! mismatch aborts universe construction rather than silently trusting the
//! rule.

mod brute;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::coeff::{factor_int, BaseRing};
use crate::kernel::ideal::Ideal;
use crate::kernel::ring::{Ring, RingElement};
use crate::modules::matrix::Matrix;
use crate::modules::presentation::ModulePresentation;
use crate::spectrum::{self, PrimeIdeal};

use brute::{Explicit, Factor, FactorKind};

/// Raw element searches validate the subobject/quotient/essential rules on
/// universes up to this cardinality.
const RAW_RULE_BOUND: u64 = 16;
/// Explicit cocycle enumeration validates the extension rule on pairs whose
/// middle has at most this cardinality.
const RAW_EXTENSION_BOUND: u64 = 32;
/// Raw homomorphism enumeration validates the cokernel rule up to this
/// cardinality.
const RAW_COKERNEL_BOUND: u64 = 12;
/// Candidate families are enumerated as all subsets when the universe has at
/// most this many classes, and as closures of empty/singleton/pair seeds
/// otherwise.
const ALL_SUBSETS_LIMIT: usize = 12;
/// Hard cap on any family or subset enumeration.
const FAMILY_BUDGET: u128 = 1 << 20;

/// Multiplicities of cyclic prime-power factors: `(prime index, power) ->
/// count`.  The canonical form of an isomorphism class.
type FactorCounts = BTreeMap<(usize, u32), u32>;

/// One maximal ideal of the ring together with its nilpotency data.
#[derive(Debug, Clone)]
struct LocalPrime {
    prime: PrimeIdeal,
    generator: RingElement,
    /// Largest power of the generator that is nonzero in the ring, i.e. the
    /// multiplicity of this prime in the modulus.
    exponent: u32,
    /// Cardinality of the residue field.
    residue_card: u64,
    /// The generator as a plain integer (scalar rings only).
    gen_scalar: u64,
    /// Rendered generator used in factor labels, e.g. `2` or `x`.
    label: String,
}

/// An isomorphism class of finite modules: a multiset of cyclic prime-power
/// factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleClass {
    counts: FactorCounts,
    cardinality: u64,
    /// Per universe prime: the sorted-descending partition of factor powers.
    partitions: Vec<Vec<u32>>,
    label: String,
}

impl ModuleClass {
    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Indices of the universe primes this class is supported at.  For
    /// finite modules over an Artinian ring the support and the associated
    /// primes coincide.
    pub fn support(&self) -> Vec<usize> {
        self.partitions
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Structural closure operations a family of classes may be stable under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClosureFlags {
    pub subobjects: bool,
    pub quotients: bool,
    pub extensions: bool,
    pub cokernels: bool,
    pub finite_sums: bool,
    pub essential_extensions: bool,
}

impl ClosureFlags {
    /// Subobjects, quotients, and extensions.
    pub fn serre() -> Self {
        ClosureFlags {
            subobjects: true,
            quotients: true,
            extensions: true,
            ..Default::default()
        }
    }

    /// Extensions and cokernels only.
    pub fn narrow() -> Self {
        ClosureFlags {
            extensions: true,
            cokernels: true,
            ..Default::default()
        }
    }

    /// Subobjects, quotients, extensions, and finite direct sums — the
    /// stability profile of a hereditary torsion class.
    pub fn torsion() -> Self {
        ClosureFlags {
            subobjects: true,
            quotients: true,
            extensions: true,
            finite_sums: true,
            ..Default::default()
        }
    }

    /// Subobjects, finite direct sums, and essential extensions — the
    /// stability profile cut out by sets of associated primes.
    pub fn hull_stable() -> Self {
        ClosureFlags {
            subobjects: true,
            finite_sums: true,
            essential_extensions: true,
            ..Default::default()
        }
    }
}

impl fmt::Display for ClosureFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        if self.subobjects {
            names.push("sub");
        }
        if self.quotients {
            names.push("quot");
        }
        if self.extensions {
            names.push("ext");
        }
        if self.cokernels {
            names.push("coker");
        }
        if self.finite_sums {
            names.push("sums");
        }
        if self.essential_extensions {
            names.push("ess");
        }
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join("+"))
        }
    }
}

/// A family of classes together with the operations it is stable under.
/// Built by [`FiniteUniverse::close_family`]; always contains the zero
/// class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFamily {
    members: BTreeSet<usize>,
    flags: ClosureFlags,
}

impl ClosedFamily {
    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, class: usize) -> bool {
        self.members.contains(&class)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn flags(&self) -> ClosureFlags {
        self.flags
    }

    /// Re-checks stability under the declared operations by sweeping every
    /// member (and pair of members) against the universe tables.
    pub fn verify(&self, universe: &FiniteUniverse) -> Result<()> {
        match universe.escape_from(&self.members, self.flags) {
            None => Ok(()),
            Some(msg) => Err(Error::Internal(format!(
                "family is not closed under {}: {msg}",
                self.flags
            ))),
        }
    }
}

/// Which classification bijection to verify over a universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BijectionKind {
    /// Families stable under subobjects, quotients, and extensions
    /// correspond to subsets of the spectrum via support.
    SerreSupport,
    /// Families stable under extensions and cokernels coincide with the
    /// families stable under subobjects, quotients, and extensions.
    NarrowSerre,
    /// Families stable under subobjects, quotients, extensions, and finite
    /// sums correspond to subsets of the spectrum via support.
    TorsionSupport,
    /// Families stable under subobjects, finite sums, and essential
    /// extensions correspond to subsets of the spectrum via associated
    /// primes.
    AssSubsets,
}

impl BijectionKind {
    pub fn label(&self) -> &'static str {
        match self {
            BijectionKind::SerreSupport => "serre-support",
            BijectionKind::NarrowSerre => "narrow-serre",
            BijectionKind::TorsionSupport => "torsion-support",
            BijectionKind::AssSubsets => "ass-subsets",
        }
    }
}

/// Outcome of a bijection verification: counts on both sides, the explicit
/// matching, and a counterexample description when the correspondence
/// fails.
#[derive(Debug, Clone)]
pub struct BijectionReport {
    kind: BijectionKind,
    bound: u64,
    lhs_count: usize,
    rhs_count: usize,
    matching: Vec<(String, String)>,
    bijection: bool,
    counterexample: Option<String>,
    families_tested: usize,
}

impl BijectionReport {
    pub fn kind(&self) -> BijectionKind {
        self.kind
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn lhs_count(&self) -> usize {
        self.lhs_count
    }

    pub fn rhs_count(&self) -> usize {
        self.rhs_count
    }

    pub fn holds(&self) -> bool {
        self.bijection
    }

    pub fn matching(&self) -> &[(String, String)] {
        &self.matching
    }

    pub fn counterexample(&self) -> Option<&str> {
        self.counterexample.as_deref()
    }

    pub fn families_tested(&self) -> usize {
        self.families_tested
    }
}

impl fmt::Display for BijectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: lhs {} rhs {} — {}",
            self.kind.label(),
            self.lhs_count,
            self.rhs_count,
            if self.bijection {
                "bijection verified"
            } else {
                "bijection FAILED"
            }
        )?;
        for (l, r) in &self.matching {
            writeln!(f, "  {l} ↔ {r}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// A bijection verified at two bounds, to surface truncation artifacts.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    base: BijectionReport,
    doubled: BijectionReport,
}

impl SensitivityReport {
    pub fn base(&self) -> &BijectionReport {
        &self.base
    }

    pub fn doubled(&self) -> &BijectionReport {
        &self.doubled
    }

    /// True when both runs agree on counts and verdict.
    pub fn agrees(&self) -> bool {
        self.base.lhs_count == self.doubled.lhs_count
            && self.base.rhs_count == self.doubled.rhs_count
            && self.base.bijection == self.doubled.bijection
    }
}

/// All isomorphism classes of modules of cardinality at most a bound over an
/// Artinian principal quotient ring, with precomputed structural tables.
#[derive(Debug, Clone)]
pub struct FiniteUniverse {
    ring: Ring,
    bound: u64,
    primes: Vec<LocalPrime>,
    scalar_ring: bool,
    classes: Vec<ModuleClass>,
    index: BTreeMap<FactorCounts, usize>,
    zero_idx: usize,
    /// Submodule classes of each class — by self-duality also its quotient
    /// and subquotient classes.
    below: Vec<Vec<usize>>,
    /// Classes receiving an essential embedding of each class.
    ess_up: Vec<Vec<usize>>,
    /// Middle classes of extensions, per (ordered) pair.
    ext_mid: Vec<Vec<Vec<usize>>>,
    /// Cokernel classes of maps from the first class into the second.
    coker: Vec<Vec<Vec<usize>>>,
}

/// Enumerates the universe of module classes of cardinality `≤ bound` over
/// `ring`, which must be `Z/n` or a truncated polynomial ring
/// `F_p[x]/(x^k)`.  Before the universe is returned, the combinatorial
/// rules backing its structural tables are verified by exhaustive raw
/// searches on small sub-universes (cached per ring).
pub fn enumerate_universe(ring: &Ring, bound: u64) -> Result<FiniteUniverse> {
    if bound == 0 {
        return Err(Error::InvalidArgument(
            "the cardinality bound must be at least 1".into(),
        ));
    }
    let (primes, scalar_ring) = local_primes(ring)?;
    ensure_rules_verified(ring, &primes, scalar_ring)?;
    let classes = enumerate_classes(&primes, bound);
    let mut index = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        index.insert(c.counts.clone(), i);
    }
    let zero_idx = *index
        .get(&FactorCounts::new())
        .ok_or_else(|| Error::Internal("universe lost its zero class".into()))?;
    let n = classes.len();
    let mut below = vec![Vec::new(); n];
    let mut ess_up = vec![Vec::new(); n];
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if entrywise_le(cj, ci) {
                below[i].push(j);
            }
            if parts_equal(ci, cj) && entrywise_le(ci, cj) {
                ess_up[i].push(j);
            }
        }
    }
    let mut ext_mid = vec![vec![Vec::new(); n]; n];
    let mut coker = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mids = extension_middles(&classes, &classes[i], &classes[j], bound);
            ext_mid[i][j] = mids.clone();
            ext_mid[j][i] = mids;
        }
    }
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            coker[i][j] = cokernel_classes(&classes, &below[i], ci, cj);
        }
    }
    Ok(FiniteUniverse {
        ring: ring.clone(),
        bound,
        primes,
        scalar_ring,
        classes,
        index,
        zero_idx,
        below,
        ess_up,
        ext_mid,
        coker,
    })
}

/// Verifies a bijection at `bound` and again at `2 * bound`, reporting
/// whether the doubled universe changes the outcome.
pub fn bound_sensitivity(
    ring: &Ring,
    bound: u64,
    kind: BijectionKind,
) -> Result<SensitivityReport> {
    let base = enumerate_universe(ring, bound)?.verify_bijection(kind)?;
    let doubled = enumerate_universe(ring, 2 * bound)?.verify_bijection(kind)?;
    Ok(SensitivityReport { base, doubled })
}

impl FiniteUniverse {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn classes(&self) -> &[ModuleClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn zero_class(&self) -> usize {
        self.zero_idx
    }

    /// The maximal ideals of the ring — its whole spectrum.
    pub fn spectrum(&self) -> Vec<PrimeIdeal> {
        self.primes.iter().map(|p| p.prime.clone()).collect()
    }

    /// Finds a class by its rendered label.
    pub fn find_class(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Associated primes of a class (equal to its support here).
    pub fn ass_of_class(&self, class: usize) -> Result<Vec<PrimeIdeal>> {
        let c = self.class_at(class)?;
        Ok(c.support()
            .into_iter()
            .map(|i| self.primes[i].prime.clone())
            .collect())
    }

    /// A presentation of the class as a module over the ring: the diagonal
    /// of its cyclic factor generators.
    pub fn presentation(&self, class: usize) -> Result<ModulePresentation> {
        let c = self.class_at(class)?;
        let mut diag = Vec::new();
        for (&(i, j), &mult) in &c.counts {
            let gen = self.primes[i].generator.pow(j);
            for _ in 0..mult {
                diag.push(gen.clone());
            }
        }
        ModulePresentation::from_diagonal(&self.ring, &diag)
    }

    /// The class of an arbitrary presentation over this ring, or `None`
    /// when its cardinality exceeds the bound.
    pub fn class_of_presentation(&self, m: &ModulePresentation) -> Result<Option<usize>> {
        self.ring.check_same(m.ring())?;
        let (factors, free) = m.invariant_factors()?;
        let counts = self.counts_of_invariant_factors(&factors, free)?;
        let card = class_cardinality(&counts, &self.primes);
        match card {
            Some(c) if c <= self.bound => {
                let idx = self.index.get(&counts).copied().ok_or_else(|| {
                    Error::Internal("class within bound missing from universe".into())
                })?;
                Ok(Some(idx))
            }
            _ => Ok(None),
        }
    }

    /// Is `x` a subquotient of a finite direct sum of copies of `y`?  By
    /// the exhaustion-verified dominance rule this holds exactly when, at
    /// every prime, the largest factor power of `x` is at most that of
    /// `y`.
    pub fn brute_subquotient(&self, x: usize, y: usize) -> Result<bool> {
        let cx = self.class_at(x)?;
        let cy = self.class_at(y)?;
        Ok(dominates(cy, cx))
    }

    /// Mutual subquotient equivalence.
    pub fn brute_equiv(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.brute_subquotient(x, y)? && self.brute_subquotient(y, x)?)
    }

    /// The least family containing the seed classes (and the zero class)
    /// stable under the flagged operations, within the bound.
    pub fn close_family(&self, seed: &[usize], flags: ClosureFlags) -> Result<ClosedFamily> {
        let mut members = BTreeSet::new();
        members.insert(self.zero_idx);
        for &s in seed {
            self.class_at(s)?;
            members.insert(s);
        }
        loop {
            let mut added = Vec::new();
            let current: Vec<usize> = members.iter().copied().collect();
            for &i in &current {
                if flags.subobjects || flags.quotients {
                    // Submodule and quotient classes coincide over these
                    // self-dual module categories; the gate checks both.
                    added.extend(self.below[i].iter().copied());
                }
                if flags.essential_extensions {
                    added.extend(self.ess_up[i].iter().copied());
                }
            }
            for &i in &current {
                for &j in &current {
                    if flags.finite_sums {
                        if let Some(k) = self.sum_class(i, j) {
                            added.push(k);
                        }
                    }
                    if flags.extensions {
                        added.extend(self.ext_mid[i][j].iter().copied());
                    }
                    if flags.cokernels {
                        added.extend(self.coker[i][j].iter().copied());
                    }
                }
            }
            let before = members.len();
            members.extend(added);
            if members.len() == before {
                break;
            }
        }
        Ok(ClosedFamily { members, flags })
    }

    /// Verifies one classification bijection over this universe, reporting
    /// counts, the explicit matching, and any counterexample.
    pub fn verify_bijection(&self, kind: BijectionKind) -> Result<BijectionReport> {
        match kind {
            BijectionKind::SerreSupport => self.subset_bijection(kind, ClosureFlags::serre()),
            BijectionKind::TorsionSupport => self.subset_bijection(kind, ClosureFlags::torsion()),
            BijectionKind::AssSubsets => self.subset_bijection(kind, ClosureFlags::hull_stable()),
            BijectionKind::NarrowSerre => self.narrow_serre_bijection(),
        }
    }

    fn class_at(&self, idx: usize) -> Result<&ModuleClass> {
        self.classes.get(idx).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "class index {idx} out of range for a universe of {} classes",
                self.classes.len()
            ))
        })
    }

    /// Index of the direct sum of two classes, if it stays within bound.
    fn sum_class(&self, i: usize, j: usize) -> Option<usize> {
        let a = &self.classes[i];
        let b = &self.classes[j];
        a.cardinality.checked_mul(b.cardinality).and_then(|card| {
            if card > self.bound {
                return None;
            }
            let mut counts = a.counts.clone();
            for (&k, &v) in &b.counts {
                *counts.entry(k).or_insert(0) += v;
            }
            self.index.get(&counts).copied()
        })
    }

    /// First operation output that escapes the family, if any.
    fn escape_from(&self, members: &BTreeSet<usize>, flags: ClosureFlags) -> Option<String> {
        let labels = |i: usize| self.classes[i].label.clone();
        for &i in members {
            if flags.subobjects || flags.quotients {
                for &k in &self.below[i] {
                    if !members.contains(&k) {
                        return Some(format!(
                            "subquotient {} of {} escapes",
                            labels(k),
                            labels(i)
                        ));
                    }
                }
            }
            if flags.essential_extensions {
                for &k in &self.ess_up[i] {
                    if !members.contains(&k) {
                        return Some(format!(
                            "essential extension {} of {} escapes",
                            labels(k),
                            labels(i)
                        ));
                    }
                }
            }
        }
        for &i in members {
            for &j in members {
                if flags.finite_sums {
                    if let Some(k) = self.sum_class(i, j) {
                        if !members.contains(&k) {
                            return Some(format!(
                                "direct sum {} of {} and {} escapes",
                                labels(k),
                                labels(i),
                                labels(j)
                            ));
                        }
                    }
                }
                if flags.extensions {
                    for &k in &self.ext_mid[i][j] {
                        if !members.contains(&k) {
                            return Some(format!(
                                "extension middle {} of {} and {} escapes",
                                labels(k),
                                labels(i),
                                labels(j)
                            ));
                        }
                    }
                }
                if flags.cokernels {
                    for &k in &self.coker[i][j] {
                        if !members.contains(&k) {
                            return Some(format!(
                                "cokernel {} of a map {} -> {} escapes",
                                labels(k),
                                labels(i),
                                labels(j)
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    /// All closed families: every subset when the universe is small, else
    /// the closures of empty, singleton, and pair seeds.
    fn candidate_families(&self, flags: ClosureFlags) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.classes.len();
        let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        if n <= ALL_SUBSETS_LIMIT {
            let total = 1u128 << n;
            if total > FAMILY_BUDGET {
                return Err(Error::ExplosionGuard {
                    what: "candidate family subsets".into(),
                    required: total,
                    budget: FAMILY_BUDGET,
                });
            }
            for mask in 0..(1u64 << n) {
                if mask & (1 << self.zero_idx) == 0 {
                    continue;
                }
                let family: BTreeSet<usize> =
                    (0..n).filter(|i| mask & (1 << i) != 0).collect();
                if self.escape_from(&family, flags).is_none() {
                    out.insert(family);
                }
            }
        } else {
            let seeds = 1 + n as u128 + (n as u128 * (n as u128 - 1)) / 2;
            if seeds > FAMILY_BUDGET {
                return Err(Error::ExplosionGuard {
                    what: "candidate family seeds".into(),
                    required: seeds,
                    budget: FAMILY_BUDGET,
                });
            }
            out.insert(self.close_family(&[], flags)?.members);
            for i in 0..n {
                out.insert(self.close_family(&[i], flags)?.members);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    out.insert(self.close_family(&[i, j], flags)?.members);
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn family_summary(&self, family: &BTreeSet<usize>) -> String {
        let mut labels: Vec<&str> = family
            .iter()
            .take(4)
            .map(|&i| self.classes[i].label.as_str())
            .collect();
        if family.len() > 4 {
            labels.push("…");
        }
        format!("{} classes: {}", family.len(), labels.join(", "))
    }

    fn subset_display(&self, subset: &BTreeSet<usize>) -> String {
        if subset.is_empty() {
            "∅".to_string()
        } else {
            let inner: Vec<String> = subset
                .iter()
                .map(|&i| self.primes[i].prime.to_string())
                .collect();
            format!("{{{}}}", inner.join(", "))
        }
    }

    /// Bijection between subsets of the spectrum and closed families, via
    /// support (equivalently associated primes).
    fn subset_bijection(
        &self,
        kind: BijectionKind,
        flags: ClosureFlags,
    ) -> Result<BijectionReport> {
        let k = self.primes.len();
        if (1u128 << k) > FAMILY_BUDGET {
            return Err(Error::ExplosionGuard {
                what: "spectrum subsets".into(),
                required: 1u128 << k,
                budget: FAMILY_BUDGET,
            });
        }
        let mut counterexample: Option<String> = None;
        // Left side: each subset of the spectrum determines a family.
        let mut lhs: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
        for mask in 0..(1u32 << k) {
            let subset: BTreeSet<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let family: BTreeSet<usize> = self
                .classes
                .iter()
                .enumerate()
                .filter(|(_, c)| c.support().iter().all(|p| subset.contains(p)))
                .map(|(i, _)| i)
                .collect();
            if counterexample.is_none() {
                if let Some(msg) = self.escape_from(&family, flags) {
                    counterexample = Some(format!(
                        "family of subset {} is not closed: {msg}",
                        self.subset_display(&subset)
                    ));
                }
            }
            lhs.push((subset, family));
        }
        // Right side: families found by closure search.
        let candidates = self.candidate_families(flags)?;
        let families_tested = candidates.len();
        let rhs: BTreeSet<BTreeSet<usize>> = candidates.into_iter().collect();
        // Every discovered family must be determined by its prime side.
        for f in &rhs {
            let side: BTreeSet<usize> = f
                .iter()
                .flat_map(|&i| self.classes[i].support())
                .collect();
            let expected = lhs
                .iter()
                .find(|(s, _)| *s == side)
                .map(|(_, fam)| fam.clone())
                .unwrap_or_default();
            if *f != expected && counterexample.is_none() {
                counterexample = Some(format!(
                    "family ({}) is not determined by its primes {}",
                    self.family_summary(f),
                    self.subset_display(&side)
                ));
            }
        }
        // Every subset's family must be discoverable.
        for (s, fam) in &lhs {
            if !rhs.contains(fam) && counterexample.is_none() {
                counterexample = Some(format!(
                    "no closure realises the family of subset {}",
                    self.subset_display(s)
                ));
            }
        }
        let matching: Vec<(String, String)> = lhs
            .iter()
            .map(|(s, fam)| (self.subset_display(s), self.family_summary(fam)))
            .collect();
        let lhs_count = lhs.len();
        let rhs_count = rhs.len();
        let bijection = counterexample.is_none() && lhs_count == rhs_count;
        Ok(BijectionReport {
            kind,
            bound: self.bound,
            lhs_count,
            rhs_count,
            matching,
            bijection,
            counterexample,
            families_tested,
        })
    }

    /// Families stable under extensions and cokernels coincide with those
    /// stable under subobjects, quotients, and extensions.
    fn narrow_serre_bijection(&self) -> Result<BijectionReport> {
        let narrow = self.candidate_families(ClosureFlags::narrow())?;
        let serre = self.candidate_families(ClosureFlags::serre())?;
        let families_tested = narrow.len() + serre.len();
        let narrow_set: BTreeSet<BTreeSet<usize>> = narrow.into_iter().collect();
        let serre_set: BTreeSet<BTreeSet<usize>> = serre.into_iter().collect();
        let mut counterexample = None;
        for f in &narrow_set {
            if let Some(msg) = self.escape_from(f, ClosureFlags::serre()) {
                counterexample = Some(format!(
                    "extension/cokernel-stable family ({}) fails subquotient stability: {msg}",
                    self.family_summary(f)
                ));
                break;
            }
        }
        if counterexample.is_none() {
            for f in &serre_set {
                if let Some(msg) = self.escape_from(f, ClosureFlags::narrow()) {
                    counterexample = Some(format!(
                        "subquotient/extension-stable family ({}) fails cokernel stability: {msg}",
                        self.family_summary(f)
                    ));
                    break;
                }
            }
        }
        let matching: Vec<(String, String)> = narrow_set
            .iter()
            .filter(|f| serre_set.contains(*f))
            .map(|f| (self.family_summary(f), self.family_summary(f)))
            .collect();
        let bijection = counterexample.is_none() && narrow_set == serre_set;
        Ok(BijectionReport {
            kind: BijectionKind::NarrowSerre,
            bound: self.bound,
            lhs_count: narrow_set.len(),
            rhs_count: serre_set.len(),
            matching,
            bijection,
            counterexample,
            families_tested,
        })
    }

    fn counts_of_invariant_factors(
        &self,
        factors: &[RingElement],
        free_rank: usize,
    ) -> Result<FactorCounts> {
        let mut counts = FactorCounts::new();
        // A free copy of the ring contributes every prime at full exponent.
        for _ in 0..free_rank {
            for (i, p) in self.primes.iter().enumerate() {
                *counts.entry((i, p.exponent)).or_insert(0) += 1;
            }
        }
        for d in factors {
            if self.scalar_ring {
                let v = d.as_integer().ok_or_else(|| {
                    Error::Internal("scalar invariant factor without integer value".into())
                })?;
                if v.is_zero() {
                    for (i, p) in self.primes.iter().enumerate() {
                        *counts.entry((i, p.exponent)).or_insert(0) += 1;
                    }
                    continue;
                }
                for (i, p) in self.primes.iter().enumerate() {
                    let big_p = BigInt::from(p.residue_card);
                    let mut t = 0u32;
                    let mut w = v.clone();
                    while t < p.exponent && (&w % &big_p).is_zero() {
                        w /= &big_p;
                        t += 1;
                    }
                    if t > 0 {
                        *counts.entry((i, t)).or_insert(0) += 1;
                    }
                }
            } else {
                // Multiplicity of x in d: the largest j with d ∈ (x^j).
                let x = &self.primes[0].generator;
                let cap = self.primes[0].exponent;
                let mut j = 0u32;
                while j < cap && Ideal::principal(&x.pow(j + 1)).contains(d)? {
                    j += 1;
                }
                if j == 0 && !d.is_zero() {
                    continue; // unit factor
                }
                let j = if d.is_zero() { cap } else { j };
                *counts.entry((0, j)).or_insert(0) += 1;
            }
        }
        Ok(counts)
    }
}

/// Identifies the maximal ideals of a supported ring.  Returns the primes
/// and whether the ring is scalar (`Z/n`) as opposed to `F_p[x]/(x^k)`.
fn local_primes(ring: &Ring) -> Result<(Vec<LocalPrime>, bool)> {
    let unsupported = |reason: String| Error::UnsupportedRing {
        op: "finite universe enumeration",
        ring: ring.to_string(),
        reason,
    };
    if ring.is_scalar() {
        let BaseRing::Mod { n, .. } = ring.base() else {
            return Err(unsupported(
                "modules over this ring are not finite sets; use Z/n or F_p[x]/(x^k)".into(),
            ));
        };
        let spec = spectrum::minimal_primes(&Ideal::zero(ring))?;
        let mut out = Vec::new();
        for (p, e) in factor_int(n)? {
            let generator = ring.from_bigint(p.clone());
            let ideal = Ideal::principal(&generator);
            let mut found = None;
            for q in &spec {
                if q.ideal().equal(&ideal)? {
                    found = Some(q.clone());
                    break;
                }
            }
            let prime = found.ok_or_else(|| {
                Error::Internal(format!("maximal ideal ({p}) missing from the spectrum"))
            })?;
            let residue_card = p.to_u64().ok_or_else(|| {
                unsupported(format!("prime {p} is too large for explicit enumeration"))
            })?;
            out.push(LocalPrime {
                prime,
                generator,
                exponent: e,
                residue_card,
                gen_scalar: residue_card,
                label: p.to_string(),
            });
        }
        Ok((out, true))
    } else if !ring.is_free_poly() && ring.nvars() == 1 {
        let BaseRing::Mod { n: p, prime: true } = ring.base() else {
            return Err(unsupported(
                "the coefficient field must be finite for modules to be finite sets".into(),
            ));
        };
        let basis = ring.quotient_basis();
        let k = match basis {
            [m] if m.terms.len() == 1 && m.terms[0].0 .0[0] > 0 => m.terms[0].0 .0[0],
            _ => {
                return Err(unsupported(
                    "only truncated polynomial rings F_p[x]/(x^k) are supported".into(),
                ))
            }
        };
        let generator = ring.var(0)?;
        let ideal = Ideal::principal(&generator);
        let spec = spectrum::minimal_primes(&Ideal::zero(ring))?;
        let mut found = None;
        for q in &spec {
            if q.ideal().equal(&ideal)? {
                found = Some(q.clone());
                break;
            }
        }
        let prime = found.ok_or_else(|| {
            Error::Internal("maximal ideal (x) missing from the spectrum".into())
        })?;
        let residue_card = p.to_u64().ok_or_else(|| {
            unsupported(format!("characteristic {p} is too large for explicit enumeration"))
        })?;
        Ok((
            vec![LocalPrime {
                prime,
                generator,
                exponent: k,
                residue_card,
                gen_scalar: 0,
                label: ring.vars()[0].clone(),
            }],
            false,
        ))
    } else {
        Err(unsupported(
            "the ring must be an Artinian principal quotient such as Z/n or F_p[x]/(x^k)".into(),
        ))
    }
}

/// All factor multisets with cardinality product at most `bound`, sorted by
/// (cardinality, label).
fn enumerate_classes(primes: &[LocalPrime], bound: u64) -> Vec<ModuleClass> {
    // The available cyclic factors, ascending by prime then power.
    let mut factors: Vec<(usize, u32, u64)> = Vec::new();
    for (i, p) in primes.iter().enumerate() {
        let mut card = 1u64;
        for j in 1..=p.exponent {
            card = match card.checked_mul(p.residue_card) {
                Some(c) => c,
                None => break,
            };
            if card > bound {
                break;
            }
            factors.push((i, j, card));
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        factors: &[(usize, u32, u64)],
        start: usize,
        budget: u64,
        stack: &mut Vec<usize>,
        primes: &[LocalPrime],
        out: &mut Vec<ModuleClass>,
    ) {
        out.push(build_class(factors, stack, primes));
        for idx in start..factors.len() {
            let card = factors[idx].2;
            if card <= budget {
                stack.push(idx);
                rec(factors, idx, budget / card, stack, primes, out);
                stack.pop();
            }
        }
    }
    rec(&factors, 0, bound, &mut stack, primes, &mut out);
    out.sort_by(|a, b| {
        (a.cardinality, &a.label).cmp(&(b.cardinality, &b.label))
    });
    out
}

fn build_class(
    factors: &[(usize, u32, u64)],
    picks: &[usize],
    primes: &[LocalPrime],
) -> ModuleClass {
    let mut counts = FactorCounts::new();
    let mut cardinality = 1u64;
    for &idx in picks {
        let (i, j, card) = factors[idx];
        *counts.entry((i, j)).or_insert(0) += 1;
        cardinality *= card;
    }
    let mut partitions = vec![Vec::new(); primes.len()];
    for (&(i, j), &mult) in &counts {
        for _ in 0..mult {
            partitions[i].push(j);
        }
    }
    for p in &mut partitions {
        p.sort_unstable_by(|a, b| b.cmp(a));
    }
    let label = if counts.is_empty() {
        "0".to_string()
    } else {
        let mut parts = Vec::new();
        for (&(i, j), &mult) in &counts {
            let f = factor_label(&primes[i], j);
            for _ in 0..mult {
                parts.push(f.clone());
            }
        }
        parts.join(" ⊕ ")
    };
    ModuleClass {
        counts,
        cardinality,
        partitions,
        label,
    }
}

fn factor_label(prime: &LocalPrime, power: u32) -> String {
    if prime.gen_scalar > 0 {
        format!("R/({})", prime.residue_card.pow(power))
    } else if power == 1 {
        format!("R/({})", prime.label)
    } else {
        format!("R/({}^{})", prime.label, power)
    }
}

fn class_cardinality(counts: &FactorCounts, primes: &[LocalPrime]) -> Option<u64> {
    let mut card = 1u64;
    for (&(i, j), &mult) in counts {
        for _ in 0..mult {
            card = card.checked_mul(primes[i].residue_card.checked_pow(j)?)?;
        }
    }
    Some(card)
}

/// Entrywise partition comparison at every prime: `small` embeds in (and is
/// a quotient of) `large`.
fn entrywise_le(small: &ModuleClass, large: &ModuleClass) -> bool {
    small
        .partitions
        .iter()
        .zip(&large.partitions)
        .all(|(s, l)| s.len() <= l.len() && s.iter().zip(l).all(|(a, b)| a <= b))
}

/// Equal part counts at every prime (equal socle dimensions).
fn parts_equal(a: &ModuleClass, b: &ModuleClass) -> bool {
    a.partitions
        .iter()
        .zip(&b.partitions)
        .all(|(x, y)| x.len() == y.len())
}

/// Largest-factor dominance: every prime-power factor of `small` is bounded
/// by one of `large`.
fn dominates(large: &ModuleClass, small: &ModuleClass) -> bool {
    small.partitions.iter().zip(&large.partitions).all(|(s, l)| {
        match (s.first(), l.first()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        }
    })
}

/// Positivity of the Littlewood–Richardson coefficient for `outer` over
/// `(inner, content)`: decides whether a module of type `outer` (at one
/// prime) is an extension of one of type `inner` by one of type `content`,
/// equivalently contains a submodule of type `inner` with quotient of type
/// `content`.
fn lr_positive(outer: &[u32], inner: &[u32], content: &[u32]) -> bool {
    let size = |p: &[u32]| -> u64 { p.iter().map(|&x| x as u64).sum() };
    if size(outer) != size(inner) + size(content) {
        return false;
    }
    if inner.len() > outer.len() {
        return false;
    }
    if inner.iter().zip(outer).any(|(i, o)| i > o) {
        return false;
    }
    if content.is_empty() {
        return true;
    }
    // Skew cells of outer/inner in reverse reading order: rows top to
    // bottom, within a row right to left.
    let mut cells: Vec<(usize, u32)> = Vec::new();
    for (r, &end) in outer.iter().enumerate() {
        let start = inner.get(r).copied().unwrap_or(0);
        for c in (start..end).rev() {
            cells.push((r, c));
        }
    }
    let mut cell_pos: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for (pos, &cell) in cells.iter().enumerate() {
        cell_pos.insert(cell, pos);
    }
    let mut letters = vec![0usize; cells.len()];
    let mut used = vec![0u32; content.len() + 1];
    fill_skew(
        &cells, 0, outer, inner, content, &mut used, &mut letters, &cell_pos,
    )
}

#[allow(clippy::too_many_arguments)]
fn fill_skew(
    cells: &[(usize, u32)],
    pos: usize,
    outer: &[u32],
    inner: &[u32],
    content: &[u32],
    used: &mut Vec<u32>,
    letters: &mut Vec<usize>,
    cell_pos: &BTreeMap<(usize, u32), usize>,
) -> bool {
    if pos == cells.len() {
        return true;
    }
    let (r, c) = cells[pos];
    // The right neighbour (same row) and the cell above (previous row) are
    // placed before this one in reverse reading order.
    let right_letter = cell_pos.get(&(r, c + 1)).map(|&p| letters[p]);
    let above_letter = if r > 0 && c >= inner.get(r - 1).copied().unwrap_or(0) && c < outer[r - 1]
    {
        cell_pos.get(&(r - 1, c)).map(|&p| letters[p])
    } else {
        None
    };
    for letter in 1..=content.len() {
        if used[letter] >= content[letter - 1] {
            continue;
        }
        // Lattice-word property of the reverse reading word.
        if letter >= 2 && used[letter] + 1 > used[letter - 1] {
            continue;
        }
        // Rows weakly increase left to right.
        if let Some(rl) = right_letter {
            if letter > rl {
                continue;
            }
        }
        // Columns strictly increase top to bottom.
        if let Some(al) = above_letter {
            if letter <= al {
                continue;
            }
        }
        used[letter] += 1;
        letters[pos] = letter;
        if fill_skew(cells, pos + 1, outer, inner, content, used, letters, cell_pos) {
            return true;
        }
        used[letter] -= 1;
        letters[pos] = 0;
    }
    false
}

/// Classes arising as the middle of an extension of `a` by `c` (in either
/// order), within the bound.
fn extension_middles(
    classes: &[ModuleClass],
    a: &ModuleClass,
    c: &ModuleClass,
    bound: u64,
) -> Vec<usize> {
    let product = match a.cardinality.checked_mul(c.cardinality) {
        Some(p) if p <= bound => p,
        _ => return Vec::new(),
    };
    classes
        .iter()
        .enumerate()
        .filter(|(_, e)| e.cardinality == product)
        .filter(|(_, e)| {
            e.partitions
                .iter()
                .enumerate()
                .all(|(p, mu)| lr_positive(mu, &a.partitions[p], &c.partitions[p]))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Cokernel classes of module maps from `m` into `n`: quotients of `n` by
/// submodules that are themselves quotients of `m`.
fn cokernel_classes(
    classes: &[ModuleClass],
    quotients_of_m: &[usize],
    _m: &ModuleClass,
    n: &ModuleClass,
) -> Vec<usize> {
    let mut out = Vec::new();
    for (e_idx, e) in classes.iter().enumerate() {
        if n.cardinality % e.cardinality != 0 {
            continue;
        }
        let image_card = n.cardinality / e.cardinality;
        let realizable = quotients_of_m.iter().any(|&qi| {
            let q = &classes[qi];
            q.cardinality == image_card
                && n.partitions
                    .iter()
                    .enumerate()
                    .all(|(p, mu)| lr_positive(mu, &q.partitions[p], &e.partitions[p]))
        });
        if realizable {
            out.push(e_idx);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Exhaustive verification of the fast rules (run once per ring, cached).
// ---------------------------------------------------------------------------

fn verified_rings() -> &'static Mutex<BTreeSet<String>> {
    static CACHE: OnceLock<Mutex<BTreeSet<String>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeSet::new()))
}

fn ensure_rules_verified(ring: &Ring, primes: &[LocalPrime], scalar: bool) -> Result<()> {
    let key = ring.to_string();
    if verified_rings().lock().unwrap().contains(&key) {
        return Ok(());
    }
    verify_subquotient_rules(primes, scalar)?;
    verify_extension_rule(ring, primes, scalar)?;
    verify_cokernel_rule(primes, scalar)?;
    verified_rings().lock().unwrap().insert(key);
    Ok(())
}

fn explicit_of(class: &ModuleClass, primes: &[LocalPrime], scalar: bool) -> Explicit {
    let mut factors = Vec::new();
    for (&(i, j), &mult) in &class.counts {
        let card = primes[i].residue_card.pow(j);
        let kind = if scalar {
            FactorKind::Scalar { q: card }
        } else {
            FactorKind::PowerSeries {
                p: primes[i].residue_card,
                digits: j,
            }
        };
        for _ in 0..mult {
            factors.push(Factor {
                kind: kind.clone(),
                card,
                prime: i,
                power: j,
            });
        }
    }
    Explicit {
        factors,
        prime_gens: primes.iter().map(|p| p.gen_scalar).collect(),
        residue_cards: primes.iter().map(|p| p.residue_card).collect(),
        scalar_ring: scalar,
    }
}

/// Raw validation of the partition rules for submodules, quotients,
/// subquotients, essential extensions, and copies-allowed dominance.
fn verify_subquotient_rules(primes: &[LocalPrime], scalar: bool) -> Result<()> {
    let classes = enumerate_classes(primes, RAW_RULE_BOUND);
    let mismatch = |what: &str, y: &ModuleClass| {
        Err(Error::Internal(format!(
            "{what} rule disagrees with raw enumeration at {}",
            y.label
        )))
    };
    let mut raw_essential: BTreeSet<(Vec<Vec<u32>>, Vec<Vec<u32>>)> = BTreeSet::new();
    for y in &classes {
        let ey = explicit_of(y, primes, scalar);
        if ey.cardinality() != y.cardinality {
            return Err(Error::Internal(format!(
                "explicit model of {} has the wrong cardinality",
                y.label
            )));
        }
        let subs = ey.submodules();
        let zero_set = ey.closure(&[]);
        let whole: BTreeSet<brute::Elt> = ey.all_elements().into_iter().collect();
        let mut raw_sub = BTreeSet::new();
        let mut raw_quot = BTreeSet::new();
        let mut raw_subquot = BTreeSet::new();
        for s in &subs {
            raw_sub.insert(ey.quotient_class(s, &zero_set));
            raw_quot.insert(ey.quotient_class(&whole, s));
            for t in &subs {
                if t.is_subset(s) {
                    raw_subquot.insert(ey.quotient_class(s, t));
                }
            }
            if ey.is_essential(s) {
                let s_class = ey.quotient_class(s, &zero_set);
                if support_of(&s_class) != support_of(&y.partitions) {
                    return Err(Error::Internal(format!(
                        "essential submodule of {} has different associated primes",
                        y.label
                    )));
                }
                raw_essential.insert((s_class, y.partitions.clone()));
            }
        }
        let fast: BTreeSet<Vec<Vec<u32>>> = classes
            .iter()
            .filter(|x| entrywise_le(x, y))
            .map(|x| x.partitions.clone())
            .collect();
        if raw_sub != fast {
            return mismatch("submodule", y);
        }
        if raw_quot != fast {
            return mismatch("quotient", y);
        }
        if raw_subquot != fast {
            return mismatch("subquotient", y);
        }
    }
    let fast_essential: BTreeSet<(Vec<Vec<u32>>, Vec<Vec<u32>>)> = classes
        .iter()
        .flat_map(|x| {
            classes
                .iter()
                .filter(|y| parts_equal(x, y) && entrywise_le(x, y))
                .map(|y| (x.partitions.clone(), y.partitions.clone()))
        })
        .collect();
    if raw_essential != fast_essential {
        return Err(Error::Internal(
            "essential-extension rule disagrees with raw enumeration".into(),
        ));
    }
    // Copies-allowed dominance must match entrywise comparison against a
    // finite direct power.
    for x in &classes {
        for y in &classes {
            let copies = x
                .partitions
                .iter()
                .map(|p| p.len())
                .max()
                .unwrap_or(0)
                .max(1);
            let replicated = replicate_partitions(y, copies as u32);
            let via_power = x
                .partitions
                .iter()
                .zip(&replicated)
                .all(|(s, l)| s.len() <= l.len() && s.iter().zip(l).all(|(a, b)| a <= b));
            if via_power != dominates(y, x) {
                return Err(Error::Internal(format!(
                    "dominance rule disagrees with direct-power embedding for {} ≺ {}",
                    x.label, y.label
                )));
            }
        }
    }
    Ok(())
}

fn support_of(partitions: &[Vec<u32>]) -> Vec<usize> {
    partitions
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_empty())
        .map(|(i, _)| i)
        .collect()
}

fn replicate_partitions(y: &ModuleClass, copies: u32) -> Vec<Vec<u32>> {
    y.partitions
        .iter()
        .map(|p| {
            let mut out = Vec::with_capacity(p.len() * copies as usize);
            for &part in p {
                for _ in 0..copies {
                    out.push(part);
                }
            }
            out.sort_unstable_by(|a, b| b.cmp(a));
            out
        })
        .collect()
}

/// Raw validation of the extension rule: for every pair of small classes,
/// the middles predicted by Littlewood–Richardson positivity must equal the
/// classes produced by enumerating every extension cocycle explicitly.
fn verify_extension_rule(ring: &Ring, primes: &[LocalPrime], _scalar: bool) -> Result<()> {
    let classes = enumerate_classes(primes, RAW_EXTENSION_BOUND);
    for (ai, a) in classes.iter().enumerate() {
        for c in classes.iter().skip(ai) {
            let product = match a.cardinality.checked_mul(c.cardinality) {
                Some(p) if p <= RAW_EXTENSION_BOUND => p,
                _ => continue,
            };
            let fast: BTreeSet<FactorCounts> = classes
                .iter()
                .filter(|e| e.cardinality == product)
                .filter(|e| {
                    e.partitions.iter().enumerate().all(|(p, mu)| {
                        lr_positive(mu, &a.partitions[p], &c.partitions[p])
                    })
                })
                .map(|e| e.counts.clone())
                .collect();
            let raw = cocycle_middles(ring, primes, a, c)?;
            if fast != raw {
                return Err(Error::Internal(format!(
                    "extension rule disagrees with cocycle enumeration for ({}, {})",
                    a.label, c.label
                )));
            }
        }
    }
    Ok(())
}

/// Every middle of an extension of `a` by `c`, by enumerating where each
/// generator relation of `c` can land in `a` and classifying the resulting
/// presentation.
fn cocycle_middles(
    ring: &Ring,
    primes: &[LocalPrime],
    a: &ModuleClass,
    c: &ModuleClass,
) -> Result<BTreeSet<FactorCounts>> {
    let factor_list = |class: &ModuleClass| -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for (&(i, j), &mult) in &class.counts {
            for _ in 0..mult {
                out.push((i, j));
            }
        }
        out
    };
    let a_factors = factor_list(a);
    let c_factors = factor_list(c);
    let s = a_factors.len();
    let t = c_factors.len();
    // Representatives of each cyclic factor of `a` as ring elements.
    let mut reps_per_coord: Vec<Vec<RingElement>> = Vec::with_capacity(s);
    for &(i, j) in &a_factors {
        let card = primes[i].residue_card.pow(j);
        let mut reps = Vec::with_capacity(card as usize);
        if primes[i].gen_scalar > 0 {
            for v in 0..card {
                reps.push(ring.from_bigint(BigInt::from(v)));
            }
        } else {
            let p = primes[i].residue_card;
            let x = ring.var(0)?;
            for enc in 0..card {
                let mut elt = ring.zero();
                let mut w = enc;
                for d in 0..j {
                    let digit = w % p;
                    w /= p;
                    if digit > 0 {
                        let term = ring.from_bigint(BigInt::from(digit)).mul(&x.pow(d))?;
                        elt = elt.add(&term)?;
                    }
                }
                reps.push(elt);
            }
        }
        reps_per_coord.push(reps);
    }
    let a_card: u128 = reps_per_coord.iter().map(|r| r.len() as u128).product();
    let total = a_card.pow(t as u32);
    if total > 1 << 16 {
        return Err(Error::ExplosionGuard {
            what: format!("extension cocycles of ({}, {})", a.label, c.label),
            required: total,
            budget: 1 << 16,
        });
    }
    // Enumerate tuples (v_1, ..., v_t) of elements of `a`.
    let a_elements: Vec<Vec<RingElement>> = {
        let mut out: Vec<Vec<RingElement>> = vec![Vec::new()];
        for reps in &reps_per_coord {
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for prefix in &out {
                for r in reps {
                    let mut p = prefix.clone();
                    p.push(r.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out
    };
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..t {
        let mut next = Vec::with_capacity(tuples.len() * a_elements.len());
        for prefix in &tuples {
            for v in 0..a_elements.len() {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        tuples = next;
    }
    let mut out = BTreeSet::new();
    for tuple in tuples {
        let mut rel = Matrix::zero(ring, s + t, s + t);
        for (i, &(pi, pj)) in a_factors.iter().enumerate() {
            rel.set(i, i, primes[pi].generator.pow(pj));
        }
        for (j, &(pi, pj)) in c_factors.iter().enumerate() {
            rel.set(s + j, s + j, primes[pi].generator.pow(pj));
            let v = &a_elements[tuple[j]];
            for (i, coord) in v.iter().enumerate() {
                rel.set(i, s + j, coord.neg());
            }
        }
        let m = ModulePresentation::new(ring, s + t, rel)?;
        let (factors, free) = m.invariant_factors()?;
        let counts = counts_from_factors(&factors, free, primes, ring)?;
        // A correction tuple yields a genuine extension exactly when the
        // submodule copy survives, i.e. the cokernel has full cardinality.
        if class_cardinality(&counts, primes) == Some(a.cardinality * c.cardinality) {
            out.insert(counts);
        }
    }
    Ok(out)
}

/// Shared classification of invariant factors into prime-power counts,
/// usable before a universe exists.
fn counts_from_factors(
    factors: &[RingElement],
    free_rank: usize,
    primes: &[LocalPrime],
    ring: &Ring,
) -> Result<FactorCounts> {
    let mut counts = FactorCounts::new();
    for _ in 0..free_rank {
        for (i, p) in primes.iter().enumerate() {
            *counts.entry((i, p.exponent)).or_insert(0) += 1;
        }
    }
    let scalar = ring.is_scalar();
    for d in factors {
        if scalar {
            let v = d.as_integer().ok_or_else(|| {
                Error::Internal("scalar invariant factor without integer value".into())
            })?;
            if v.is_zero() {
                for (i, p) in primes.iter().enumerate() {
                    *counts.entry((i, p.exponent)).or_insert(0) += 1;
                }
                continue;
            }
            for (i, p) in primes.iter().enumerate() {
                let big_p = BigInt::from(p.residue_card);
                let mut t = 0u32;
                let mut w = v.clone();
                while t < p.exponent && (&w % &big_p).is_zero() {
                    w /= &big_p;
                    t += 1;
                }
                if t > 0 {
                    *counts.entry((i, t)).or_insert(0) += 1;
                }
            }
        } else {
            let x = &primes[0].generator;
            let cap = primes[0].exponent;
            if d.is_zero() {
                *counts.entry((0, cap)).or_insert(0) += 1;
                continue;
            }
            let mut j = 0u32;
            while j < cap && Ideal::principal(&x.pow(j + 1)).contains(d)? {
                j += 1;
            }
            if j > 0 {
                *counts.entry((0, j)).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

/// Raw validation of the cokernel rule by enumerating every homomorphism
/// between small explicit modules.
fn verify_cokernel_rule(primes: &[LocalPrime], scalar: bool) -> Result<()> {
    let classes = enumerate_classes(primes, RAW_COKERNEL_BOUND);
    for m in &classes {
        let em = explicit_of(m, primes, scalar);
        for n in &classes {
            let en = explicit_of(n, primes, scalar);
            let whole: BTreeSet<brute::Elt> = en.all_elements().into_iter().collect();
            // Candidate images of each generator of m: elements killed by
            // the generator's annihilating prime power.
            let mut image_choices: Vec<Vec<brute::Elt>> = Vec::new();
            for f in &em.factors {
                image_choices.push(en.killed_by(f.prime, f.power));
            }
            let mut raw: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
            let mut choice_indices: Vec<Vec<usize>> = vec![Vec::new()];
            for choices in &image_choices {
                let mut next = Vec::with_capacity(choice_indices.len() * choices.len());
                for prefix in &choice_indices {
                    for v in 0..choices.len() {
                        let mut p = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
                choice_indices = next;
            }
            for pick in &choice_indices {
                let gens: Vec<brute::Elt> = pick
                    .iter()
                    .enumerate()
                    .map(|(g, &v)| image_choices[g][v].clone())
                    .collect();
                let image = en.closure(&gens);
                raw.insert(en.quotient_class(&whole, &image));
            }
            let quotients_of_m: Vec<&ModuleClass> =
                classes.iter().filter(|q| entrywise_le(q, m)).collect();
            let fast: BTreeSet<Vec<Vec<u32>>> = classes
                .iter()
                .filter(|e| {
                    n.cardinality % e.cardinality == 0
                        && quotients_of_m.iter().any(|q| {
                            q.cardinality == n.cardinality / e.cardinality
                                && n.partitions.iter().enumerate().all(|(p, mu)| {
                                    lr_positive(mu, &q.partitions[p], &e.partitions[p])
                                })
                        })
                })
                .map(|e| e.partitions.clone())
                .collect();
            if raw != fast {
                return Err(Error::Internal(format!(
                    "cokernel rule disagrees with homomorphism enumeration for maps {} -> {}",
                    m.label, n.label
                )));
            }
        }
    }
    Ok(())
}
