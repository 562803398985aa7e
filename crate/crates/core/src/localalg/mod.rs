//! Local algebra around a specialization-closed set: hereditary torsion
//! pairs, Bass-number criteria on the cosyzygies of a module, and symbolic
//! minimal injective resolutions rendered as tables of multiplicities.
//!
//! Injective objects over general rings are never materialized — the data
//! that identifies them (which primes appear in which cosyzygy degree, with
//! what multiplicity) is computed through finitely presented Ext modules.
//! Over the integers the [`divisible`] submodule provides an independent
//! concrete model used to cross-check these criteria.

pub mod divisible;

use crate::error::{Error, Result};
use crate::kernel::coeff::BaseRing;
use crate::kernel::ideal::Ideal;
use crate::kernel::poly::Poly;
use crate::kernel::ring::{Ring, RingElement};
use crate::modules::matrix::Matrix;
use crate::modules::presentation::{ModuleMap, ModulePresentation, ShortExactSequence};
use crate::modules::smith;
use crate::spectrum::{self, PrimeIdeal, SpecSet};
use std::collections::BTreeMap;
use std::fmt;

/// The defining ideal of a specialization-closed set: the intersection of
/// its minimal primes, or the unit ideal for the empty set.
pub fn defining_ideal(s: &SpecSet) -> Result<Ideal> {
    let mut it = s.minimal_primes().iter();
    let Some(first) = it.next() else {
        return Ok(Ideal::unit(s.ring()));
    };
    let mut j = first.ideal().clone();
    for p in it {
        j = j.intersect(p.ideal())?;
    }
    Ok(j)
}

/// The two halves of the torsion pair at a specialization-closed set `S`,
/// wrapped in a verified short exact sequence `0 → X → M → Y → 0` where
/// `X` is the `S`-torsion part and `Y` is `S`-torsion-free.
#[derive(Clone)]
pub struct TorsionDecomposition {
    set: SpecSet,
    defining: Ideal,
    sequence: ShortExactSequence,
    exponent: u32,
}

impl TorsionDecomposition {
    pub fn spec_set(&self) -> &SpecSet {
        &self.set
    }

    pub fn defining_ideal(&self) -> &Ideal {
        &self.defining
    }

    /// The torsion part `X ⊆ M`.
    pub fn torsion_part(&self) -> &ModulePresentation {
        self.sequence.left.source()
    }

    pub fn inclusion(&self) -> &ModuleMap {
        &self.sequence.left
    }

    /// The torsion-free quotient `Y = M/X`.
    pub fn torsion_free_part(&self) -> &ModulePresentation {
        self.sequence.right.target()
    }

    pub fn projection(&self) -> &ModuleMap {
        &self.sequence.right
    }

    pub fn sequence(&self) -> &ShortExactSequence {
        &self.sequence
    }

    /// The stabilisation exponent `e` with `X = (0 :_M J^e)`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

/// Splits `M` as `0 → Γ_S(M) → M → M/Γ_S(M) → 0` and verifies, before
/// returning, that the sequence is exact, that the quotient has no residual
/// `S`-torsion, and that the torsion part is supported inside `S`.
pub fn torsion_decompose(m: &ModulePresentation, s: &SpecSet) -> Result<TorsionDecomposition> {
    m.ring().check_same(s.ring())?;
    let j = defining_ideal(s)?;
    let (x, incl, exponent) = m.torsion_submodule(&j)?;
    if !torsion_class_member(&x, s)? {
        return Err(Error::Internal(
            "torsion part is not supported inside the defining set".into(),
        ));
    }
    let y = m.quotient(incl.matrix())?;
    if !y.torsion_submodule(&j)?.0.is_zero()? {
        return Err(Error::Internal(
            "torsion-free quotient retains torsion".into(),
        ));
    }
    let proj = ModuleMap::new(m.clone(), y.clone(), Matrix::identity(m.ring(), m.gens()))?;
    let sequence = ShortExactSequence::new(incl, proj)?;
    sequence.verify()?;
    Ok(TorsionDecomposition {
        set: s.clone(),
        defining: j,
        sequence,
        exponent,
    })
}

/// Membership in the torsion class at `S`: `Supp(M) ⊆ S`, decided by
/// radical containment — every generator of the defining ideal of `S` must
/// lie in the radical of `ann(M)`.
pub fn torsion_class_member(m: &ModulePresentation, s: &SpecSet) -> Result<bool> {
    m.ring().check_same(s.ring())?;
    let j = defining_ideal(s)?;
    let ann = m.annihilator()?;
    for g in j.canonical_basis() {
        if !ann.radical_contains(&g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in the torsion-free class at `S`: `Γ_S(M) = 0`.
pub fn torsion_free_member(m: &ModulePresentation, s: &SpecSet) -> Result<bool> {
    m.ring().check_same(s.ring())?;
    let j = defining_ideal(s)?;
    m.torsion_submodule(&j)?.0.is_zero()
}

/// The defining property of a torsion pair: `Hom(X, Y) = 0`.
pub fn hom_orthogonality_check(x: &ModulePresentation, y: &ModulePresentation) -> Result<bool> {
    x.hom(y)?.is_zero()
}

/// The Bass criterion in degree `k` at `p`: does `Ext^k(R/p, M)` survive
/// localization at `p`?  Equivalently, whether `p` is associated to the
/// `k`-th cosyzygy of `M`.
pub fn bass_nonvanishing(p: &PrimeIdeal, k: usize, m: &ModulePresentation) -> Result<bool> {
    m.ring().check_same(p.ring())?;
    let e = ModulePresentation::cyclic(p.ideal()).ext(k, m)?;
    spectrum::supp_contains(p, &e)
}

/// Membership of `p` in `Ass(℧_k(M))`, where `℧_k` is the `k`-th cosyzygy
/// in the minimal injective resolution.  Same computation as
/// [`bass_nonvanishing`]; this name states the interpretation.
pub fn cosyzygy_ass_membership(p: &PrimeIdeal, k: usize, m: &ModulePresentation) -> Result<bool> {
    bass_nonvanishing(p, k, m)
}

/// The Bass number `μ_k(p, M)`: the κ(p)-dimension of the localized
/// `Ext^k(R/p, M)`, computed as the generic rank of that Ext module over
/// `R/p` (fraction-free elimination of its presentation reduced mod `p`).
pub fn bass_dimension(p: &PrimeIdeal, k: usize, m: &ModulePresentation) -> Result<usize> {
    m.ring().check_same(p.ring())?;
    let e = ModulePresentation::cyclic(p.ideal()).ext(k, m)?;
    let residue = ResidueField::at(p)?;
    let rel = e.relations();
    let mut entries = Vec::with_capacity(rel.rows() * rel.cols());
    for i in 0..rel.rows() {
        for j in 0..rel.cols() {
            entries.push(residue.map(rel.entry(i, j))?);
        }
    }
    let reduced = Matrix::new(&residue.target, rel.rows(), rel.cols(), entries)?;
    let rank = rank_over_domain(&reduced)?;
    Ok(e.gens() - rank)
}

/// The residue domain `R/p` together with the reduction map on elements.
struct ResidueField {
    target: Ring,
    kind: ResidueKind,
}

enum ResidueKind {
    /// `p = (0)` in a domain: no reduction.
    Identity,
    /// Scalar target `ZZ/q`: reduce integers.
    IntMod,
    /// Univariate target `k[x]/(h)`: reduce polynomial lifts.
    UniQuot,
    /// Multivariate monomial prime: substitute the named variables by zero
    /// and re-index the survivors.
    KillVars { keep: Vec<usize> },
}

impl ResidueField {
    fn at(p: &PrimeIdeal) -> Result<ResidueField> {
        let ring = p.ring();
        let unsupported = |reason: &str| Error::UnsupportedRing {
            op: "residue-field rank",
            ring: ring.to_string(),
            reason: reason.into(),
        };
        if let Some(scalar) = p.ideal().scalar_canonical() {
            return match scalar {
                None => Ok(ResidueField {
                    target: ring.clone(),
                    kind: ResidueKind::Identity,
                }),
                Some(q) => Ok(ResidueField {
                    target: Ring::integers_mod(q)?,
                    kind: ResidueKind::IntMod,
                }),
            };
        }
        let Some(basis) = p.ideal().preimage_basis().map(|b| b.to_vec()) else {
            return Err(unsupported("no canonical preimage basis"));
        };
        if !ring.base().is_field() {
            return Err(unsupported("polynomial coefficients must form a field"));
        }
        if ring.nvars() == 1 {
            return match basis.as_slice() {
                [] => Ok(ResidueField {
                    target: ring.clone(),
                    kind: ResidueKind::Identity,
                }),
                [h] => {
                    let cover = ring.cover();
                    let he = cover.element_from_poly(h.clone());
                    Ok(ResidueField {
                        target: Ring::quotient(&cover, &[he])?,
                        kind: ResidueKind::UniQuot,
                    })
                }
                _ => Err(unsupported("preimage ideal is not principal")),
            };
        }
        if basis.is_empty() {
            return Ok(ResidueField {
                target: ring.clone(),
                kind: ResidueKind::Identity,
            });
        }
        let mut killed = vec![false; ring.nvars()];
        for g in &basis {
            match single_var(g) {
                Some(i) => killed[i] = true,
                None => return Err(unsupported("prime is not generated by variables")),
            }
        }
        let keep: Vec<usize> = (0..ring.nvars()).filter(|&i| !killed[i]).collect();
        let names: Vec<String> = keep.iter().map(|&i| ring.vars()[i].clone()).collect();
        Ok(ResidueField {
            target: Ring::polynomial(ring.base().clone(), names)?,
            kind: ResidueKind::KillVars { keep },
        })
    }

    fn map(&self, e: &RingElement) -> Result<RingElement> {
        match &self.kind {
            ResidueKind::Identity => Ok(e.clone()),
            ResidueKind::IntMod => {
                let v = e.as_integer().ok_or_else(|| {
                    Error::Internal("scalar ring element without integer value".into())
                })?;
                Ok(self.target.from_bigint(v))
            }
            ResidueKind::UniQuot => Ok(self.target.element_from_poly(e.poly().clone())),
            ResidueKind::KillVars { keep } => {
                let mut out = self.target.zero();
                'terms: for (mono, coeff) in &e.poly().terms {
                    let mut term = self
                        .target
                        .element_from_poly(Poly::constant(
                            coeff.clone(),
                            self.target.nvars(),
                            self.target.base(),
                        ));
                    for (new_i, &old_i) in keep.iter().enumerate() {
                        let exp = mono.0[old_i];
                        if exp > 0 {
                            term = term.mul(&self.target.var(new_i)?.pow(exp))?;
                        }
                    }
                    for (old_i, &e_i) in mono.0.iter().enumerate() {
                        if e_i > 0 && !keep.contains(&old_i) {
                            continue 'terms;
                        }
                    }
                    out = out.add(&term)?;
                }
                Ok(out)
            }
        }
    }
}

fn single_var(p: &Poly) -> Option<usize> {
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

/// Rank over the fraction field of a domain.  Diagonalisable rings go
/// through their normal form; multivariate polynomial rings use
/// division-free cross-multiplication elimination (row scaling by nonzero
/// elements of a domain preserves rank).
fn rank_over_domain(a: &Matrix) -> Result<usize> {
    match smith::smith_normal_form(a) {
        Ok(s) => Ok(s.rank),
        Err(Error::NotPID { .. }) => division_free_rank(a),
        Err(e) => Err(e),
    }
}

fn division_free_rank(a: &Matrix) -> Result<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<RingElement>> = (0..rows)
        .map(|i| (0..cols).map(|j| a.entry(i, j).clone()).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pivot) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        for r in (row + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let f1 = m[row][col].clone();
            let f2 = m[r][col].clone();
            for c in col..cols {
                m[r][c] = m[r][c].mul(&f1)?.sub(&m[row][c].mul(&f2)?)?;
            }
        }
        rank += 1;
        row += 1;
    }
    Ok(rank)
}

/// One cell of a [`BassTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BassEntry {
    pub nonvanishing: bool,
    /// The multiplicity `μ_k(p, M)` where the ring class supports the rank
    /// computation.
    pub dimension: Option<usize>,
}

/// A table of Bass data for one module: for each candidate prime and each
/// degree up to the requested bound, whether the Bass number is nonzero and
/// (when computable) its value.  Entries are written once and never
/// mutated.
#[derive(Clone)]
pub struct BassTable {
    module: ModulePresentation,
    primes: Vec<PrimeIdeal>,
    max_degree: usize,
    entries: BTreeMap<(usize, usize), BassEntry>,
}

impl BassTable {
    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn entry(&self, prime_index: usize, degree: usize) -> Option<&BassEntry> {
        self.entries.get(&(prime_index, degree))
    }

    /// Looks up a prime by ideal equality.
    pub fn lookup(&self, p: &PrimeIdeal, degree: usize) -> Result<Option<&BassEntry>> {
        for (i, q) in self.primes.iter().enumerate() {
            if q.ideal().equal(p.ideal())? {
                return Ok(self.entry(i, degree));
            }
        }
        Ok(None)
    }

    fn record(&mut self, prime_index: usize, degree: usize, entry: BassEntry) -> Result<()> {
        if let Some(d) = entry.dimension {
            if (d > 0) != entry.nonvanishing {
                return Err(Error::Internal(format!(
                    "Bass data disagrees at prime #{prime_index}, degree {degree}: \
                     nonvanishing={} but dimension={d}",
                    entry.nonvanishing
                )));
            }
        }
        if self
            .entries
            .insert((prime_index, degree), entry)
            .is_some()
        {
            return Err(Error::Internal(
                "Bass table entries are write-once".into(),
            ));
        }
        Ok(())
    }

    /// The injective envelope in degree `k` as a formal sum
    /// `E(p_1)^{μ_1} ⊕ ...` over the nonvanishing candidate primes.
    pub fn formal_sum(&self, degree: usize) -> String {
        let mut parts = Vec::new();
        for (i, p) in self.primes.iter().enumerate() {
            if let Some(e) = self.entry(i, degree) {
                if e.nonvanishing {
                    let mu = e
                        .dimension
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "?".into());
                    parts.push(format!("E({p})^{mu}"));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl fmt::Display for BassTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..=self.max_degree {
            writeln!(f, "E_{k} = {}", self.formal_sum(k))?;
        }
        Ok(())
    }
}

/// Candidate primes for a Bass table when the caller supplies none:
/// divisors of the invariant factors plus the zero ideal over principal
/// ideal domains, the whole finite spectrum over `ZZ/n` and `k[x]/(f)`.
fn auto_candidates(m: &ModulePresentation) -> Result<Vec<PrimeIdeal>> {
    let ring = m.ring().clone();
    if m.is_zero()? {
        return Ok(Vec::new());
    }
    let pid_domain = (ring.is_scalar() && matches!(ring.base(), BaseRing::Int))
        || (ring.is_free_poly() && ring.nvars() == 1 && ring.base().is_field())
        || (ring.is_scalar() && ring.base().is_field());
    if pid_domain {
        let (factors, _) = m.invariant_factors()?;
        let mut out = vec![PrimeIdeal::new(Ideal::zero(&ring))?];
        for d in factors {
            out.extend(spectrum::minimal_primes(&Ideal::principal(&d))?);
        }
        out.sort_by_key(|p| p.to_string());
        out.dedup_by_key(|p| p.to_string());
        return Ok(out);
    }
    let artinian = (ring.is_scalar() && matches!(ring.base(), BaseRing::Mod { .. }))
        || (!ring.is_free_poly() && ring.nvars() == 1 && ring.base().is_field());
    if artinian {
        return spectrum::minimal_primes(&Ideal::zero(&ring));
    }
    Err(Error::NeedCandidates {
        ring: ring.to_string(),
    })
}

/// Computes the Bass data of `M` for degrees `0..=up_to` over the supplied
/// candidate primes (auto-derived over principal ideal and Artinian rings
/// when `None`).  Dimensions are filled in wherever the ring class supports
/// the rank computation and are cross-checked against the nonvanishing
/// flags.
pub fn symbolic_injective_resolution(
    m: &ModulePresentation,
    up_to: usize,
    candidates: Option<Vec<PrimeIdeal>>,
) -> Result<BassTable> {
    let primes = match candidates {
        Some(c) => {
            for p in &c {
                m.ring().check_same(p.ring())?;
            }
            let mut sorted = c;
            sorted.sort_by_key(|p| p.to_string());
            sorted.dedup_by_key(|p| p.to_string());
            sorted
        }
        None => auto_candidates(m)?,
    };
    let mut table = BassTable {
        module: m.clone(),
        primes,
        max_degree: up_to,
        entries: BTreeMap::new(),
    };
    for i in 0..table.primes.len() {
        let p = table.primes[i].clone();
        for k in 0..=up_to {
            let nonvanishing = bass_nonvanishing(&p, k, m)?;
            let dimension = match bass_dimension(&p, k, m) {
                Ok(d) => Some(d),
                Err(Error::UnsupportedRing { .. }) => None,
                Err(e) => return Err(e),
            };
            table.record(i, k, BassEntry { nonvanishing, dimension })?;
        }
    }
    Ok(table)
}

/// For a verified short exact sequence `0 → A → B → C → 0` and degree `k`,
/// checks the three cosyzygy containments at every candidate prime:
///
/// * `Ass(℧_k(A)) ⊆ Ass(℧_k(B)) ∪ Ass(℧_{k−1}(C))`
/// * `Ass(℧_k(B)) ⊆ Ass(℧_k(A)) ∪ Ass(℧_k(C))`
/// * `Ass(℧_k(C)) ⊆ Ass(℧_k(B)) ∪ Ass(℧_{k+1}(A))`
///
/// Negative-degree cosyzygies are zero.  Returns `true` iff every clause
/// holds at every candidate.
pub fn cor710_check(
    ses: &ShortExactSequence,
    k: usize,
    candidates: &[PrimeIdeal],
) -> Result<bool> {
    ses.verify()?;
    let a = ses.left.source();
    let b = ses.left.target();
    let c = ses.right.target();
    let flag = |p: &PrimeIdeal, m: &ModulePresentation, kk: i64| -> Result<bool> {
        if kk < 0 {
            Ok(false)
        } else {
            cosyzygy_ass_membership(p, kk as usize, m)
        }
    };
    let k = k as i64;
    for p in candidates {
        let ak = flag(p, a, k)?;
        let bk = flag(p, b, k)?;
        let ck = flag(p, c, k)?;
        let ck_prev = flag(p, c, k - 1)?;
        let ak_next = flag(p, a, k + 1)?;
        if ak && !(bk || ck_prev) {
            return Ok(false);
        }
        if bk && !(ak || ck) {
            return Ok(false);
        }
        if ck && !(bk || ak_next) {
            return Ok(false);
        }
    }
    Ok(true)
}
