//! Finitely presented modules, maps between them, and the derived
//! constructions (kernels, `Hom`, `Ext`, resolutions, torsion submodules)
//! that the spectrum and classification layers consume.
//!
//! A module is `R^gens / im(relations)`; submodules of a presented module
//! are handled as generator matrices in the ambient `R^gens`, so membership
//! questions always reduce to column solving in the relations engine.

use super::engine;
use super::matrix::Matrix;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};
use crate::kernel::coeff::BaseRing;
use crate::kernel::ideal::Ideal;
use crate::kernel::ring::{Ring, RingElement};
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;
use std::sync::OnceLock;

/// Iteration cap for torsion-chain stabilization.
pub const TORSION_CHAIN_CAP: u32 = 64;

/// A finitely presented module `R^gens / im(relations)`.
#[derive(Clone)]
pub struct ModulePresentation {
    ring: Ring,
    gens: usize,
    relations: Matrix,
    /// Lazily computed annihilator; support queries hit it repeatedly.
    ann_cache: OnceLock<Ideal>,
}

impl PartialEq for ModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.relations == other.relations
    }
}

impl Eq for ModulePresentation {}

impl ModulePresentation {
    /// Checks that the relation matrix targets `R^gens` over the same ring.
    pub fn new(ring: &Ring, gens: usize, relations: Matrix) -> Result<Self> {
        ring.check_same(relations.ring())?;
        if relations.rows() != gens {
            return Err(Error::ShapeMismatch(format!(
                "presentation with {gens} generators needs a relation matrix with {gens} rows, got {}",
                relations.rows()
            )));
        }
        Ok(ModulePresentation {
            ring: ring.clone(),
            gens,
            relations,
            ann_cache: OnceLock::new(),
        })
    }

    /// The free module `R^n`.
    pub fn free(ring: &Ring, n: usize) -> Self {
        ModulePresentation {
            ring: ring.clone(),
            gens: n,
            relations: Matrix::zero(ring, n, 0),
            ann_cache: OnceLock::new(),
        }
    }

    /// The zero module.
    pub fn zero_module(ring: &Ring) -> Self {
        Self::free(ring, 0)
    }

    /// The cyclic module `R/I`.
    pub fn cyclic(ideal: &Ideal) -> Self {
        let ring = ideal.ring().clone();
        let gens: Vec<RingElement> = ideal.canonical_basis();
        let mat = Matrix::new(&ring, 1, gens.len(), gens).expect("row of ideal generators");
        ModulePresentation {
            ring,
            gens: 1,
            relations: mat,
            ann_cache: OnceLock::new(),
        }
    }

    /// `⊕ R/(d_i)` for the listed elements (zero entries contribute free
    /// summands).
    pub fn from_diagonal(ring: &Ring, elts: &[RingElement]) -> Result<Self> {
        let n = elts.len();
        let mut rel = Matrix::zero(ring, n, n);
        for (i, e) in elts.iter().enumerate() {
            ring.check_same(e.ring())?;
            rel.set(i, i, e.clone());
        }
        Ok(ModulePresentation {
            ring: ring.clone(),
            gens: n,
            relations: rel.drop_zero_cols(),
            ann_cache: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// Is this the zero module (every generator a relation)?
    pub fn is_zero(&self) -> Result<bool> {
        if self.gens == 0 {
            return Ok(true);
        }
        engine::contains_columns(&self.relations, &Matrix::identity(&self.ring, self.gens))
    }

    /// Does the span of `sub`'s columns (mod relations) contain every column
    /// of `cols`?
    pub fn span_contains(&self, sub: &Matrix, cols: &Matrix) -> Result<bool> {
        engine::contains_columns(&sub.hstack(&self.relations)?, cols)
    }

    /// Is the element (a `gens x 1` column) zero in the module?
    pub fn element_is_zero(&self, col: &Matrix) -> Result<bool> {
        engine::contains_columns(&self.relations, col)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let rel = Matrix::block_diag(&self.ring, &[&self.relations, &other.relations])?;
        ModulePresentation::new(&self.ring, self.gens + other.gens, rel)
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> Self {
        ModulePresentation {
            ring: self.ring.clone(),
            gens: self.gens * k,
            relations: self.relations.block_diag_copies(k),
            ann_cache: OnceLock::new(),
        }
    }

    /// Presents the submodule generated by the columns of `sub` and returns
    /// it with its inclusion map.
    pub fn submodule(&self, sub: &Matrix) -> Result<(Self, ModuleMap)> {
        self.ring.check_same(sub.ring())?;
        if sub.rows() != self.gens {
            return Err(Error::ShapeMismatch(format!(
                "submodule generators must live in R^{}, got {} rows",
                self.gens,
                sub.rows()
            )));
        }
        let s = sub.cols();
        let rels = engine::syzygies(&sub.hstack(&self.relations)?)?.top_rows(s);
        let pres = ModulePresentation::new(&self.ring, s, rels)?;
        let incl = ModuleMap {
            source: pres.clone(),
            target: self.clone(),
            matrix: sub.clone(),
        };
        Ok((pres, incl))
    }

    /// The quotient by the submodule generated by the columns of `sub`.
    pub fn quotient(&self, sub: &Matrix) -> Result<Self> {
        self.ring.check_same(sub.ring())?;
        if sub.rows() != self.gens {
            return Err(Error::ShapeMismatch(
                "quotient generators must live in the ambient free module".into(),
            ));
        }
        ModulePresentation::new(&self.ring, self.gens, self.relations.hstack(sub)?)
    }

    /// The annihilator ideal `{r : r M = 0}` (computed once, then cached).
    pub fn annihilator(&self) -> Result<Ideal> {
        if let Some(cached) = self.ann_cache.get() {
            return Ok(cached.clone());
        }
        let computed = self.annihilator_uncached()?;
        let _ = self.ann_cache.set(computed.clone());
        Ok(computed)
    }

    fn annihilator_uncached(&self) -> Result<Ideal> {
        let n = self.gens;
        if n == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        // ann(M) = ∩_i (0 : e_i): n small eliminations stay far better
        // conditioned than one stacked n²-row syzygy computation.
        let mut ann: Option<Ideal> = None;
        for i in 0..n {
            let mut col = Matrix::zero(&self.ring, n, 1);
            col.set(i, 0, self.ring.one());
            let of_gen = self.element_annihilator(&col)?;
            ann = Some(match ann {
                None => of_gen,
                Some(acc) => acc.intersect(&of_gen)?,
            });
        }
        Ok(ann.expect("at least one generator"))
    }

    /// The annihilator of a single element `(0 : v)`.
    pub fn element_annihilator(&self, col: &Matrix) -> Result<Ideal> {
        self.ring.check_same(col.ring())?;
        if col.rows() != self.gens || col.cols() != 1 {
            return Err(Error::ShapeMismatch(
                "element must be a single column over the module generators".into(),
            ));
        }
        let syz = engine::syzygies(&col.hstack(&self.relations)?)?;
        let head = syz.top_rows(1);
        let mut gens: Vec<RingElement> = Vec::new();
        for j in 0..head.cols() {
            let e = head.entry(0, j).clone();
            if !e.is_zero() && !gens.contains(&e) {
                gens.push(e);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Differentials `d_1, d_2, ...` of a free resolution
    /// `... -> R^{f_2} -> R^{f_1} -> R^{gens} -> M -> 0`, with `d_1` the
    /// relation matrix and each later differential the syzygies of the
    /// previous one.  Zero differentials are not emitted, so a free module
    /// has the empty resolution and the returned length is the projective
    /// dimension whenever the resolution terminates within `length` steps.
    /// Consecutive differentials are verified to compose to zero.
    pub fn free_resolution(&self, length: usize) -> Result<Vec<Matrix>> {
        let mut out: Vec<Matrix> = Vec::new();
        if length == 0 || self.relations.cols() == 0 {
            return Ok(out);
        }
        out.push(self.relations.clone());
        while out.len() < length {
            let last = out.last().unwrap();
            let next = engine::syzygies(last)?;
            if next.cols() == 0 {
                break;
            }
            if !last.mul(&next)?.is_zero() {
                return Err(Error::Internal(
                    "free resolution differentials do not compose to zero".into(),
                ));
            }
            out.push(next);
        }
        Ok(out)
    }

    /// `Hom_R(self, other)` as a presented module.
    pub fn hom(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        self.ext(0, other)
    }

    /// `Hom_R(self, other)` together with a decoding of its generators into
    /// actual maps `self -> other` (one per generator of the Hom module).
    pub fn hom_with_maps(&self, other: &Self) -> Result<(Self, Vec<ModuleMap>)> {
        self.ring.check_same(&other.ring)?;
        let (pres, l) = self.ext_raw(0, other)?;
        let gn = other.gens;
        let mut maps = Vec::with_capacity(pres.gens());
        for j in 0..pres.gens() {
            // Column j of `l` lists, block by source generator, the image
            // coordinates in `other`.
            let mat = Matrix::from_fn(&self.ring, gn, self.gens, |i, b| {
                l.entry(b * gn + i, j).clone()
            })?;
            maps.push(ModuleMap::new(self.clone(), other.clone(), mat)?);
        }
        Ok((pres, maps))
    }

    /// `Ext^k_R(self, other)` as a presented module, via a free resolution
    /// of `self`.
    pub fn ext(&self, k: usize, other: &Self) -> Result<Self> {
        Ok(self.ext_raw(k, other)?.0)
    }

    /// Ext presentation plus the raw generator matrix: each generator is a
    /// column of cocycles in `other^{f_k}` (flattened by source coordinate).
    fn ext_raw(&self, k: usize, other: &Self) -> Result<(Self, Matrix)> {
        self.ring.check_same(&other.ring)?;
        let gn = other.gens;
        let ds = self.free_resolution(k + 1)?;
        // Rank of F_k in the resolution.
        let f_rank = |i: usize| -> usize {
            if i == 0 {
                self.gens
            } else if i <= ds.len() {
                ds[i - 1].cols()
            } else {
                0
            }
        };
        let fk = f_rank(k);
        if fk == 0 || gn == 0 {
            let empty = Matrix::zero(&self.ring, fk * gn, 0);
            return Ok((Self::zero_module(&self.ring), empty));
        }
        let fk1 = f_rank(k + 1);
        // Outgoing map N^{f_k} -> N^{f_{k+1}} on generator coordinates.
        let a = if fk1 == 0 {
            Matrix::zero(&self.ring, 0, fk * gn)
        } else {
            ds[k].transpose().tensor_identity(gn)
        };
        let rels_fk = other.relations.block_diag_copies(fk);
        let rels_fk1 = other.relations.block_diag_copies(fk1);
        let l = engine::syzygies(&a.hstack(&rels_fk1)?)?.top_rows(fk * gn);
        // Incoming image from N^{f_{k-1}} (empty at k = 0).
        let b = if k == 0 {
            Matrix::zero(&self.ring, fk * gn, 0)
        } else {
            ds[k - 1].transpose().tensor_identity(gn)
        };
        let modout = l.hstack(&rels_fk)?.hstack(&b)?;
        let rels = engine::syzygies(&modout)?.top_rows(l.cols());
        Ok((ModulePresentation::new(&self.ring, l.cols(), rels)?, l))
    }

    /// The `J`-torsion submodule `{m : J^k m = 0 for some k}` together with
    /// its inclusion map into `self` and the stabilization exponent — the
    /// smallest `e` with the torsion equal to `(0 : J^e)`.
    pub fn torsion_submodule(&self, j: &Ideal) -> Result<(Self, ModuleMap, u32)> {
        self.ring.check_same(j.ring())?;
        let jg = j.canonical_basis();
        let mut sub = Matrix::zero(&self.ring, self.gens, 0);
        let mut exponent = 0u32;
        loop {
            if exponent >= TORSION_CHAIN_CAP {
                return Err(Error::IterationCap {
                    what: "torsion submodule chain".into(),
                    cap: TORSION_CHAIN_CAP,
                });
            }
            // (sub : J) = kernel of M/sub -> (M/sub)^t, v -> (g_i v).
            let rels_q = self.relations.hstack(&sub)?;
            let next = if jg.is_empty() {
                // J = (0): everything is annihilated by J.
                Matrix::identity(&self.ring, self.gens)
            } else {
                let mut stack = Matrix::scalar(&self.ring, self.gens, &jg[0]);
                for g in &jg[1..] {
                    stack = stack.vstack(&Matrix::scalar(&self.ring, self.gens, g))?;
                }
                let target_rels = rels_q.block_diag_copies(jg.len());
                engine::syzygies(&stack.hstack(&target_rels)?)?.top_rows(self.gens)
            };
            let next = next.drop_zero_cols();
            // Stable when the new colon adds nothing modulo relations.
            if self.span_contains(&sub, &next)? {
                let (pres, incl) = self.submodule(&sub)?;
                return Ok((pres, incl, exponent));
            }
            // The colon contains the previous stage, so its generators alone
            // present the next stage; replacing instead of accumulating keeps
            // the generating set small.
            sub = next;
            exponent += 1;
        }
    }

    /// Invariant-factor decomposition over principal-ideal coefficient
    /// rings: returns `(torsion factors, free rank)` with
    /// `M ≅ R^free ⊕ ⊕ R/(d_i)` and `d_1 | d_2 | ...`.
    ///
    /// Supported over `ZZ`, fields, `k[x]`, `ZZ/n` and `k[x]/(f)`.
    pub fn invariant_factors(&self) -> Result<(Vec<RingElement>, usize)> {
        let ring = &self.ring;
        // Direct Smith form over the Euclidean rings.
        if ring.is_free_poly()
            && (matches!(ring.base(), BaseRing::Int) || ring.base().is_field())
            && ring.nvars() <= 1
        {
            let s = smith_normal_form(&self.relations)?;
            return Ok((s.invariant_factors(), self.gens - s.rank));
        }
        // ZZ/n: lift to ZZ with n*I adjoined; factors equal to n become free
        // ZZ/n summands.
        if ring.is_scalar() {
            if let BaseRing::Mod { n, .. } = ring.base() {
                let zz = Ring::integers();
                let lift = self.relations.try_map_entries(&zz, |e| {
                    Ok(zz.from_bigint(e.as_integer().expect("scalar entry")))
                })?;
                let aug = lift.hstack(&Matrix::scalar(&zz, self.gens, &zz.from_bigint(n.clone())))?;
                let s = smith_normal_form(&aug)?;
                let mut factors = Vec::new();
                let mut free = self.gens - s.rank; // always 0: n*I forces full rank
                for e in s.invariant_factors() {
                    let v = e.as_integer().expect("integer entry");
                    let (_, r) = v.div_rem(n);
                    if v == *n {
                        free += 1;
                    } else {
                        debug_assert!(r.is_zero() || v < *n);
                        factors.push(ring.from_bigint(v));
                    }
                }
                return Ok((factors, free));
            }
        }
        // k[x]/(f): same lifting into the cover ring.
        if !ring.is_free_poly() && ring.nvars() == 1 {
            let cover = ring.cover();
            let fpoly = ring
                .quotient_gens()
                .first()
                .cloned()
                .ok_or_else(|| Error::Internal("quotient ring without generators".into()))?;
            let f = cover.element_from_poly(fpoly);
            let lift = self.relations.try_map_entries(&cover, |e| {
                Ok(cover.element_from_poly(e.poly().clone()))
            })?;
            let aug = lift.hstack(&Matrix::scalar(&cover, self.gens, &f))?;
            let s = smith_normal_form(&aug)?;
            let mut factors = Vec::new();
            let mut free = self.gens - s.rank;
            for e in s.invariant_factors() {
                if e == f {
                    free += 1;
                } else {
                    factors.push(ring.element_from_poly(e.poly().clone()));
                }
            }
            return Ok((factors, free));
        }
        Err(Error::UnsupportedRing {
            op: "invariant_factors",
            ring: ring.to_string(),
            reason: "invariant factors need principal-ideal coefficients".into(),
        })
    }
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Module over {} with {} generators, relations {}",
            self.ring, self.gens, self.relations
        )
    }
}

/// An `R`-linear map between presented modules, given on generators.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: ModulePresentation,
    target: ModulePresentation,
    matrix: Matrix,
}

impl ModuleMap {
    /// Shape-checks the generator matrix (`target.gens x source.gens`).
    pub fn new(
        source: ModulePresentation,
        target: ModulePresentation,
        matrix: Matrix,
    ) -> Result<Self> {
        source.ring().check_same(target.ring())?;
        source.ring().check_same(matrix.ring())?;
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::ShapeMismatch(format!(
                "map matrix must be {}x{}, got {}x{}",
                target.gens(),
                source.gens(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &ModulePresentation) -> Self {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ring(), m.gens()),
        }
    }

    pub fn zero_map(source: &ModulePresentation, target: &ModulePresentation) -> Result<Self> {
        source.ring().check_same(target.ring())?;
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(source.ring(), target.gens(), source.gens()),
        })
    }

    pub fn source(&self) -> &ModulePresentation {
        &self.source
    }

    pub fn target(&self) -> &ModulePresentation {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Checks the map respects relations: each relation of the source must
    /// map into the relation span of the target.
    pub fn well_defined(&self) -> Result<()> {
        let image = self.matrix.mul(self.source.relations())?;
        for j in 0..image.cols() {
            if !engine::contains_columns(self.target.relations(), &image.col(j))? {
                return Err(Error::IllDefinedMap { column: j });
            }
        }
        Ok(())
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(
                "composition requires matching middle module".into(),
            ));
        }
        ModuleMap::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix)?,
        )
    }

    /// Kernel presentation with its inclusion into the source.
    pub fn kernel(&self) -> Result<(ModulePresentation, ModuleMap)> {
        let l = engine::syzygies(&self.matrix.hstack(self.target.relations())?)?
            .top_rows(self.source.gens());
        self.source.submodule(&l)
    }

    /// Image presentation with its inclusion into the target.
    pub fn image(&self) -> Result<(ModulePresentation, ModuleMap)> {
        self.target.submodule(&self.matrix)
    }

    /// Cokernel presentation (same generators as the target).
    pub fn cokernel(&self) -> Result<ModulePresentation> {
        self.target.quotient(&self.matrix)
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        for j in 0..self.matrix.cols() {
            if !engine::contains_columns(self.target.relations(), &self.matrix.col(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_injective(&self) -> Result<bool> {
        self.kernel()?.0.is_zero()
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel()?.is_zero()
    }
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap {}", self.matrix)
    }
}

/// A candidate short exact sequence `0 -> A -> B -> C -> 0`.
#[derive(Clone)]
pub struct ShortExactSequence {
    pub left: ModuleMap,
    pub right: ModuleMap,
}

impl ShortExactSequence {
    pub fn new(left: ModuleMap, right: ModuleMap) -> Result<Self> {
        if left.target() != right.source() {
            return Err(Error::ShapeMismatch(
                "middle modules of the two maps must coincide".into(),
            ));
        }
        Ok(ShortExactSequence { left, right })
    }

    /// Verifies exactness: both maps well defined, composite zero, left map
    /// injective, right map surjective, and `ker(right) ⊆ im(left)`.
    pub fn verify(&self) -> Result<()> {
        self.left.well_defined()?;
        self.right.well_defined()?;
        if !self.right.compose(&self.left)?.is_zero_map()? {
            return Err(Error::InvalidArgument(
                "sequence not exact: the composite map is nonzero".into(),
            ));
        }
        if !self.left.is_injective()? {
            return Err(Error::InvalidArgument(
                "sequence not exact: the left map has a nonzero kernel".into(),
            ));
        }
        if !self.right.is_surjective()? {
            return Err(Error::InvalidArgument(
                "sequence not exact: the right map is not surjective".into(),
            ));
        }
        let (_, ker_incl) = self.right.kernel()?;
        let b = self.right.source();
        if !b.span_contains(self.left.matrix(), ker_incl.matrix())? {
            return Err(Error::InvalidArgument(
                "sequence not exact: the kernel of the right map exceeds the image of the left map"
                    .into(),
            ));
        }
        Ok(())
    }
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

    fn factor_strings(m: &ModulePresentation) -> (Vec<String>, usize) {
        let (f, free) = m.invariant_factors().unwrap();
        (f.iter().map(|e| e.to_string()).collect(), free)
    }

    #[test]
    fn annihilator_of_cyclic_group() {
        let m = z_mod(12);
        let ann = m.annihilator().unwrap();
        let expect = Ideal::principal(&zz().from_i64(12));
        assert!(ann.equal(&expect).unwrap(), "ann(Z/12) = (12), got {ann}");
    }

    #[test]
    fn hom_of_cyclic_groups() {
        // Hom(Z/4, Z/6) ≅ Z/gcd(4,6) = Z/2.
        let h = z_mod(4).hom(&z_mod(6)).unwrap();
        assert_eq!(factor_strings(&h), (vec!["2".into()], 0));
        // Hom(Z/4, Z) = 0.
        let h0 = z_mod(4).hom(&ModulePresentation::free(&zz(), 1)).unwrap();
        assert!(h0.is_zero().unwrap());
    }

    #[test]
    fn ext_of_cyclic_groups() {
        // Ext^1(Z/4, Z/6) ≅ Z/2.
        let e = z_mod(4).ext(1, &z_mod(6)).unwrap();
        assert_eq!(factor_strings(&e), (vec!["2".into()], 0));
        // Ext^1(Z/4, Z) ≅ Z/4.
        let e2 = z_mod(4).ext(1, &ModulePresentation::free(&zz(), 1)).unwrap();
        assert_eq!(factor_strings(&e2), (vec!["4".into()], 0));
        // Ext^2 over ZZ vanishes (global dimension 1).
        let e3 = z_mod(4).ext(2, &z_mod(6)).unwrap();
        assert!(e3.is_zero().unwrap());
    }

    #[test]
    fn kernel_image_cokernel_over_zz() {
        let r = zz();
        let free1 = ModulePresentation::free(&r, 1);
        let two = ModuleMap::new(
            free1.clone(),
            free1.clone(),
            Matrix::from_int_rows(&r, &[vec![2]]).unwrap(),
        )
        .unwrap();
        assert!(two.is_injective().unwrap());
        assert!(!two.is_surjective().unwrap());
        let coker = two.cokernel().unwrap();
        assert_eq!(factor_strings(&coker), (vec!["2".into()], 0));
        let (im, _) = two.image().unwrap();
        assert_eq!(factor_strings(&im), (vec![], 1), "2Z is free of rank 1");
    }

    #[test]
    fn torsion_submodule_with_exponent() {
        let r = zz();
        // M = Z/12 ⊕ Z; 2-torsion part is Z/4, reached at exponent 2.
        let m = ModulePresentation::from_diagonal(&r, &[r.from_i64(12), r.zero()]).unwrap();
        let j = Ideal::principal(&r.from_i64(2));
        let (t, _, e) = m.torsion_submodule(&j).unwrap();
        assert_eq!(factor_strings(&t), (vec!["4".into()], 0));
        assert_eq!(e, 2, "(0:4) is strictly larger than (0:2) and stable");
    }

    #[test]
    fn torsion_submodule_degenerate_ideals() {
        let r = zz();
        let m = z_mod(12);
        // J = (1): no torsion at all.
        let (t, _, e) = m.torsion_submodule(&Ideal::unit(&r)).unwrap();
        assert!(t.is_zero().unwrap());
        assert_eq!(e, 0);
        // J = (0): everything is torsion.
        let (t0, _, e0) = m.torsion_submodule(&Ideal::zero(&r)).unwrap();
        assert_eq!(factor_strings(&t0), (vec!["12".into()], 0));
        assert_eq!(e0, 1);
        // J = (6) on Z/12 stabilizes at exponent 2 with the whole module.
        let (t6, _, e6) = m.torsion_submodule(&Ideal::principal(&r.from_i64(6))).unwrap();
        assert_eq!(factor_strings(&t6), (vec!["12".into()], 0));
        assert_eq!(e6, 2);
    }

    #[test]
    fn element_annihilator_in_cyclic_group() {
        let r = zz();
        let m = z_mod(12);
        let v = Matrix::from_int_rows(&r, &[vec![4]]).unwrap();
        let ann = m.element_annihilator(&v).unwrap();
        assert!(
            ann.equal(&Ideal::principal(&r.from_i64(3))).unwrap(),
            "(0 : 4) in Z/12 is (3), got {ann}"
        );
    }

    #[test]
    fn short_exact_sequence_accepts_and_rejects() {
        let r = zz();
        let a = z_mod(2);
        let b = z_mod(4);
        let c = z_mod(2);
        let left = ModuleMap::new(
            a.clone(),
            b.clone(),
            Matrix::from_int_rows(&r, &[vec![2]]).unwrap(),
        )
        .unwrap();
        let right = ModuleMap::new(
            b.clone(),
            c.clone(),
            Matrix::from_int_rows(&r, &[vec![1]]).unwrap(),
        )
        .unwrap();
        ShortExactSequence::new(left.clone(), right)
            .unwrap()
            .verify()
            .expect("0 -> Z/2 -> Z/4 -> Z/2 -> 0 is exact");

        // Doubling on Z/4 composes to zero with the inclusion but is not
        // surjective.
        let bad_right = ModuleMap::new(
            b.clone(),
            b.clone(),
            Matrix::from_int_rows(&r, &[vec![2]]).unwrap(),
        )
        .unwrap();
        let err = ShortExactSequence::new(left, bad_right)
            .unwrap()
            .verify()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn ill_defined_map_reports_column() {
        let r = zz();
        let a = z_mod(2);
        let b = z_mod(4);
        // 1: Z/2 -> Z/4 is not well defined (2*1 = 2 ≠ 0 in Z/4).
        let bad = ModuleMap::new(a, b, Matrix::from_int_rows(&r, &[vec![1]]).unwrap()).unwrap();
        match bad.well_defined() {
            Err(Error::IllDefinedMap { column }) => assert_eq!(column, 0),
            other => panic!("expected IllDefinedMap, got {other:?}"),
        }
    }

    #[test]
    fn polynomial_hom_and_annihilator() {
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let k = ModulePresentation::cyclic(&Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap());
        let ann = k.annihilator().unwrap();
        assert!(
            ann.equal(&Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap()).unwrap(),
            "ann of the residue field at the origin"
        );
        let h = k.hom(&k).unwrap();
        assert!(!h.is_zero().unwrap(), "Hom(k, k) ≅ k is nonzero");
    }

    #[test]
    fn quotient_ring_ext_is_nonzero() {
        // Over R = QQ[x]/(x^2), Ext^1_R(k, k) ≠ 0 for k = R/(x) — the
        // residue field has infinite projective dimension.
        let cover = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = cover.var(0).unwrap();
        let r = Ring::quotient(&cover, &[x.pow(2)]).unwrap();
        let xr = r.var(0).unwrap();
        let k = ModulePresentation::cyclic(&Ideal::principal(&xr));
        let e = k.ext(1, &k).unwrap();
        assert!(!e.is_zero().unwrap());
        let (factors, free) = e.invariant_factors().unwrap();
        assert_eq!(free, 0);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].to_string(), "x", "Ext^1(k, k) ≅ k over QQ[x]/(x^2)");
    }

    #[test]
    fn invariant_factors_over_mod_ring() {
        let z12 = Ring::integers_mod(BigInt::from(12)).unwrap();
        // (Z/12)/(4) ⊕ Z/12: factors (4), one free summand.
        let m = ModulePresentation::from_diagonal(&z12, &[z12.from_i64(4), z12.zero()]).unwrap();
        let (f, free) = m.invariant_factors().unwrap();
        assert_eq!(f.iter().map(|e| e.to_string()).collect::<Vec<_>>(), vec!["4"]);
        assert_eq!(free, 1);
    }

    #[test]
    fn hom_is_left_exact_check() {
        // Hom(Z/6, Z/4) ≅ Z/2 — non-matching directions still behave.
        let h = z_mod(6).hom(&z_mod(4)).unwrap();
        assert_eq!(factor_strings(&h), (vec!["2".into()], 0));
    }

    #[test]
    fn free_module_has_empty_resolution() {
        let ds = ModulePresentation::free(&zz(), 2).free_resolution(4).unwrap();
        assert!(ds.is_empty(), "a free module needs no differentials");
    }

    #[test]
    fn principal_cyclic_resolution_has_length_one() {
        let ds = z_mod(5).free_resolution(4).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].entry(0, 0).to_string(), "5");
    }

    #[test]
    fn koszul_resolution_of_the_origin() {
        // QQ[x,y]/(x,y) has the Koszul resolution with ranks (1, 2, 1).
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let k = ModulePresentation::cyclic(&Ideal::new(&r, vec![x, y]).unwrap());
        let ds = k.free_resolution(6).unwrap();
        assert_eq!(ds.len(), 2, "projective dimension 2");
        assert_eq!((k.gens(), ds[0].cols(), ds[1].cols()), (1, 2, 1));
    }

    #[test]
    fn hom_generators_decode_to_maps() {
        let (h, maps) = z_mod(4).hom_with_maps(&z_mod(6)).unwrap();
        assert_eq!(maps.len(), h.gens());
        let mut saw_nonzero = false;
        for map in &maps {
            map.well_defined().expect("decoded Hom generators are genuine maps");
            if !map.is_zero_map().unwrap() {
                saw_nonzero = true;
                let v = map.matrix().entry(0, 0).as_integer().unwrap().mod_floor(&BigInt::from(6));
                assert_eq!(v, BigInt::from(3), "the only nonzero map Z/4 -> Z/6 sends 1 to 3");
            }
        }
        assert!(saw_nonzero, "Hom(Z/4, Z/6) is nonzero");

        // Multivariate decoding: Hom(k, k) over QQ[x,y] contains the identity.
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let k = ModulePresentation::cyclic(&Ideal::new(&r, vec![x, y]).unwrap());
        let (_, kmaps) = k.hom_with_maps(&k).unwrap();
        assert!(kmaps.iter().any(|m| !m.is_zero_map().unwrap()));
        for map in &kmaps {
            map.well_defined().unwrap();
        }
    }

    #[test]
    fn hom_from_cyclic_matches_colon_submodule() {
        // Hom(R/I, N) ≅ (0 :_N I), computed independently as a kernel.
        let r = zz();
        let rc = ModulePresentation::cyclic(&Ideal::principal(&r.from_i64(4)));
        let n = z_mod(6);
        let h = rc.hom(&n).unwrap();
        let mult4 = ModuleMap::new(
            n.clone(),
            n.clone(),
            Matrix::from_int_rows(&r, &[vec![4]]).unwrap(),
        )
        .unwrap();
        let (colon, _) = mult4.kernel().unwrap();
        assert_eq!(factor_strings(&h), factor_strings(&colon));

        let rq = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = rq.var(0).unwrap();
        let rcq = ModulePresentation::cyclic(&Ideal::principal(&x.pow(2)));
        let nq = ModulePresentation::from_diagonal(&rq, &[x.pow(3)]).unwrap();
        let hq = rcq.hom(&nq).unwrap();
        let multx2 = ModuleMap::new(
            nq.clone(),
            nq.clone(),
            Matrix::new(&rq, 1, 1, vec![x.pow(2)]).unwrap(),
        )
        .unwrap();
        let (colq, _) = multx2.kernel().unwrap();
        let (hf, hfree) = hq.invariant_factors().unwrap();
        let (cf, cfree) = colq.invariant_factors().unwrap();
        assert_eq!(hfree, cfree);
        assert_eq!(
            hf.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            cf.iter().map(|e| e.to_string()).collect::<Vec<_>>()
        );
        assert_eq!(hf[0].to_string(), "x^2", "(0 : x^2) in QQ[x]/(x^3) is cyclic of order x^2");
    }

    #[test]
    fn hom_into_nonzero_submodule_is_nonzero() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0415);

        // Over the integers.
        let r = zz();
        let pool = [2i64, 3, 4, 6, 8, 9, 12];
        for _ in 0..100 {
            let len = rng.gen_range(1..=3);
            let diag: Vec<RingElement> = (0..len)
                .map(|_| {
                    if rng.gen_ratio(1, 5) {
                        r.zero()
                    } else {
                        r.from_i64(pool[rng.gen_range(0..pool.len())])
                    }
                })
                .collect();
            let m = ModulePresentation::from_diagonal(&r, &diag).unwrap();
            let mut sub = Matrix::from_fn(&r, m.gens(), 1, |_, _| {
                r.from_i64(rng.gen_range(-3..=3))
            })
            .unwrap();
            if m.element_is_zero(&sub).unwrap() {
                sub = Matrix::from_fn(&r, m.gens(), 1, |i, _| {
                    if i == 0 { r.one() } else { r.zero() }
                })
                .unwrap();
            }
            let (n, _) = m.submodule(&sub).unwrap();
            assert!(!n.is_zero().unwrap());
            let h = m.hom(&n).unwrap();
            assert!(
                !h.is_zero().unwrap(),
                "a nonzero submodule of M receives a nonzero map from M over ZZ"
            );
        }

        // Over QQ[x].
        let rq = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = rq.var(0).unwrap();
        let x1 = x.sub(&rq.one()).unwrap();
        let pool_q = [
            x.clone(),
            x.pow(2),
            x1.clone(),
            x.mul(&x1).unwrap(),
            x.pow(3),
        ];
        for _ in 0..100 {
            let len = rng.gen_range(1..=2);
            let diag: Vec<RingElement> = (0..len)
                .map(|_| {
                    if rng.gen_ratio(1, 5) {
                        rq.zero()
                    } else {
                        pool_q[rng.gen_range(0..pool_q.len())].clone()
                    }
                })
                .collect();
            let m = ModulePresentation::from_diagonal(&rq, &diag).unwrap();
            let mut sub = Matrix::from_fn(&rq, m.gens(), 1, |_, _| {
                let c0 = rq.from_i64(rng.gen_range(-2..=2));
                let c1 = rq.from_i64(rng.gen_range(-2..=2));
                c0.add(&c1.mul(&x).unwrap()).unwrap()
            })
            .unwrap();
            if m.element_is_zero(&sub).unwrap() {
                sub = Matrix::from_fn(&rq, m.gens(), 1, |i, _| {
                    if i == 0 { rq.one() } else { rq.zero() }
                })
                .unwrap();
            }
            let (n, _) = m.submodule(&sub).unwrap();
            assert!(!n.is_zero().unwrap());
            let h = m.hom(&n).unwrap();
            assert!(
                !h.is_zero().unwrap(),
                "a nonzero submodule of M receives a nonzero map from M over QQ[x]"
            );
        }
    }

    #[test]
    fn torsion_is_idempotent_and_quotient_is_torsion_free() {
        let r = zz();
        let m = ModulePresentation::from_diagonal(&r, &[r.from_i64(12), r.zero()]).unwrap();
        let j = Ideal::principal(&r.from_i64(2));
        let (t, incl, _) = m.torsion_submodule(&j).unwrap();
        incl.well_defined().unwrap();
        assert!(incl.is_injective().unwrap(), "torsion inclusion is injective");
        let (tt, _, _) = t.torsion_submodule(&j).unwrap();
        assert_eq!(
            factor_strings(&tt),
            factor_strings(&t),
            "torsion of the torsion part is itself"
        );
        let q = m.quotient(incl.matrix()).unwrap();
        let (tq, _, _) = q.torsion_submodule(&j).unwrap();
        assert!(tq.is_zero().unwrap(), "M modulo its torsion part is torsion-free");
    }

    #[test]
    fn torsion_of_monomial_quotient_is_everything() {
        // Over QQ[x,y] with M = R/(x^2, xy), every element is killed by a
        // power of x: (0 : x) is the image of (x, y) and (0 : x^2) is all of M.
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let m = ModulePresentation::cyclic(&Ideal::new(&r, vec![x.pow(2), x.mul(&y).unwrap()]).unwrap());
        let (_, incl, e) = m.torsion_submodule(&Ideal::principal(&x)).unwrap();
        assert!(m.quotient(incl.matrix()).unwrap().is_zero().unwrap());
        assert_eq!(e, 2, "stabilizes at (0 : x^2)");
    }

    #[test]
    fn kernel_of_cyclic_surjection() {
        let r = zz();
        let pi = ModuleMap::new(
            z_mod(4),
            z_mod(2),
            Matrix::from_int_rows(&r, &[vec![1]]).unwrap(),
        )
        .unwrap();
        let (k, _) = pi.kernel().unwrap();
        assert_eq!(factor_strings(&k), (vec!["2".into()], 0), "kernel of Z/4 -> Z/2");
    }

    #[test]
    fn direct_sum_of_coprime_cyclics() {
        let s = z_mod(2).direct_sum(&z_mod(3)).unwrap();
        assert_eq!(factor_strings(&s), (vec!["6".into()], 0), "Z/2 ⊕ Z/3 ≅ Z/6");
    }

    #[test]
    fn hom_ext_orders_balance_on_short_exact_sequences() {
        // For 0 -> A -> B -> C -> 0 and any finite N over ZZ, the six-term
        // sequence of finite groups forces |Hom(C)|·|Hom(A)|·|Ext(B)| =
        // |Hom(B)|·|Ext(C)|·|Ext(A)|.
        fn order(m: &ModulePresentation) -> BigInt {
            let (f, free) = m.invariant_factors().unwrap();
            assert_eq!(free, 0, "order only defined for finite modules");
            f.iter()
                .map(|e| e.as_integer().unwrap())
                .product::<BigInt>()
                .max(BigInt::from(1))
        }
        let n = z_mod(6);
        let check = |a: &ModulePresentation, b: &ModulePresentation, c: &ModulePresentation| {
            let (ha, hb, hc) = (
                order(&a.hom(&n).unwrap()),
                order(&b.hom(&n).unwrap()),
                order(&c.hom(&n).unwrap()),
            );
            let (ea, eb, ec) = (
                order(&a.ext(1, &n).unwrap()),
                order(&b.ext(1, &n).unwrap()),
                order(&c.ext(1, &n).unwrap()),
            );
            assert_eq!(
                &hc * &ha * &eb,
                &hb * &ec * &ea,
                "alternating orders in the six-term sequence must balance"
            );
        };
        check(&z_mod(2), &z_mod(4), &z_mod(2));
        check(
            &z_mod(2),
            &z_mod(2).direct_sum(&z_mod(2)).unwrap(),
            &z_mod(2),
        );
        check(&z_mod(3), &z_mod(12), &z_mod(4));
    }
}
