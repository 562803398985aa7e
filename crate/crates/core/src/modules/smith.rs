//! Smith normal form over principal ideal rings.
//!
//! The native algorithm runs over the Euclidean rings `ZZ`, `k[x]` and
//! fields; matrices over the quotient rings `ZZ/n` and `k[x]/(f)` are
//! diagonalised by lifting to the cover, running the Euclidean algorithm
//! there, and canonicalising the diagonal modulo the defining element.
//! The form is the backbone of the integer-side relations engine: kernels,
//! solvability of linear systems and invariant-factor decompositions all
//! reduce to it.

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::kernel::coeff::{BaseRing, Coeff};
use crate::kernel::factor::univ_divrem;
use crate::kernel::ring::{Ring, RingElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decomposition `u * a * v = d` with `u`, `v` invertible and `d` diagonal
/// with a divisibility chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, length `min(rows, cols)`; the first [`SmithForm::rank`]
    /// are nonzero and canonical (positive over `ZZ`, monic over `k[x]`, a
    /// divisor of the modulus over `ZZ/n` and `k[x]/(f)`).
    pub d: Vec<RingElement>,
    /// Invertible row transform (`rows x rows`).
    pub u: Matrix,
    /// Invertible column transform (`cols x cols`).
    pub v: Matrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithForm {
    /// The nonunit, nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<RingElement> {
        self.d[..self.rank]
            .iter()
            .filter(|e| !e.is_one())
            .cloned()
            .collect()
    }
}

enum EuclideanClass {
    Int,
    UniPoly,
    FieldScalar,
}

enum SmithClass {
    Euclid(EuclideanClass),
    /// Scalar ring `ZZ/n` with composite `n`: lift to `ZZ`.
    ModScalar(BigInt),
    /// Univariate quotient `k[x]/(f)` over a field: lift to `k[x]`.
    QuotUni,
}

fn classify(ring: &Ring) -> Result<SmithClass> {
    if ring.is_free_poly() {
        match (ring.base(), ring.nvars()) {
            (BaseRing::Int, 0) => return Ok(SmithClass::Euclid(EuclideanClass::Int)),
            (b, 0) if b.is_field() => return Ok(SmithClass::Euclid(EuclideanClass::FieldScalar)),
            (BaseRing::Mod { n, .. }, 0) => return Ok(SmithClass::ModScalar(n.clone())),
            (b, 1) if b.is_field() => return Ok(SmithClass::Euclid(EuclideanClass::UniPoly)),
            _ => {}
        }
    } else if ring.nvars() == 1 && ring.base().is_field() {
        return Ok(SmithClass::QuotUni);
    }
    Err(Error::NotPID {
        ring: ring.to_string(),
    })
}

/// Euclidean size of a nonzero element: `|n|` over `ZZ`, the degree over
/// `k[x]`, `0` over a field.
fn esize(class: &EuclideanClass, e: &RingElement) -> Option<BigInt> {
    if e.is_zero() {
        return None;
    }
    match class {
        EuclideanClass::Int => Some(e.as_integer().expect("integer entry").abs()),
        EuclideanClass::UniPoly => Some(BigInt::from(e.poly().total_degree().unwrap_or(0))),
        EuclideanClass::FieldScalar => Some(BigInt::zero()),
    }
}

/// Division with small remainder: returns `(q, r)` with `a = q*b + r` and
/// either `r = 0` or `size(r) < size(b)`.
fn ediv(class: &EuclideanClass, a: &RingElement, b: &RingElement) -> (RingElement, RingElement) {
    let ring = a.ring().clone();
    match class {
        EuclideanClass::Int => {
            let av = a.as_integer().expect("integer entry");
            let bv = b.as_integer().expect("integer entry");
            let (mut q, mut r) = av.div_mod_floor(&bv);
            // Symmetric remainder for faster convergence.
            let habs = bv.abs();
            if &r * 2 > habs {
                if bv.is_positive() {
                    q += 1;
                    r -= &bv;
                } else {
                    q -= 1;
                    r += &bv;
                }
            }
            (ring.from_bigint(q), ring.from_bigint(r))
        }
        EuclideanClass::UniPoly => univ_divrem(a, b),
        EuclideanClass::FieldScalar => {
            let base = ring.base().clone();
            let av = a.poly().constant_value(&base).expect("scalar entry");
            let bv = b.poly().constant_value(&base).expect("scalar entry");
            let q = base.div(&av, &bv).expect("unit divisor in a field");
            let qe = ring.element_from_poly(crate::kernel::poly::Poly::constant(
                q,
                ring.nvars(),
                &base,
            ));
            (qe, ring.zero())
        }
    }
}

/// A unit `c` making `c * e` normalized (positive / monic / one).
fn normalizer(class: &EuclideanClass, e: &RingElement) -> RingElement {
    let ring = e.ring().clone();
    match class {
        EuclideanClass::Int => {
            let v = e.as_integer().expect("integer entry");
            if v.is_negative() {
                ring.from_i64(-1)
            } else {
                ring.one()
            }
        }
        EuclideanClass::UniPoly | EuclideanClass::FieldScalar => {
            let base = ring.base().clone();
            let lc = e
                .poly()
                .lead()
                .map(|(_, c)| c.clone())
                .expect("nonzero entry");
            let inv = base.inv(&lc).expect("lead is a unit over a field");
            ring.element_from_poly(crate::kernel::poly::Poly::constant(
                inv,
                ring.nvars(),
                &base,
            ))
        }
    }
}

/// Monic gcd of two univariate polynomials over a field.
fn univ_gcd(a: &RingElement, b: &RingElement) -> RingElement {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let (_, r2) = univ_divrem(&r0, &r1);
        r0 = r1;
        r1 = r2;
    }
    if r0.is_zero() {
        return r0;
    }
    let c = normalizer(&EuclideanClass::UniPoly, &r0);
    r0.mul(&c).expect("same ring")
}

/// Half-extended Euclid over `k[x]`: returns `(g, s)` with `g = gcd(a, m)`
/// monic and `s * a ≡ g (mod m)`.
fn univ_half_ext_gcd(a: &RingElement, m: &RingElement) -> (RingElement, RingElement) {
    let ring = a.ring().clone();
    let mut r0 = a.clone();
    let mut r1 = m.clone();
    let mut s0 = ring.one();
    let mut s1 = ring.zero();
    while !r1.is_zero() {
        let (q, r2) = univ_divrem(&r0, &r1);
        let s2 = s0.sub(&q.mul(&s1).expect("same ring")).expect("same ring");
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0.is_zero() {
        return (r0, s0);
    }
    let c = normalizer(&EuclideanClass::UniPoly, &r0);
    (
        r0.mul(&c).expect("same ring"),
        s0.mul(&c).expect("same ring"),
    )
}

/// Computes the Smith normal form `u * a * v = d`.
///
/// Supported rings: `ZZ`, fields, `k[x]`, and the quotients `ZZ/n` and
/// `k[x]/(f)` (handled by lifting to the cover and canonicalising).
/// Deterministic: pivots are chosen by minimal Euclidean size with ties
/// broken by `(row, col)`.  The product identity is re-verified before
/// returning.
pub fn smith_normal_form(a: &Matrix) -> Result<SmithForm> {
    let ring = a.ring().clone();
    match classify(&ring)? {
        SmithClass::Euclid(class) => smith_euclidean(a, class),
        SmithClass::ModScalar(n) => smith_mod_scalar(a, &n),
        SmithClass::QuotUni => smith_quotient_univariate(a),
    }
}

fn smith_euclidean(a: &Matrix, class: EuclideanClass) -> Result<SmithForm> {
    let ring = a.ring().clone();
    let (m, n) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut u = Matrix::identity(&ring, m);
    let mut v = Matrix::identity(&ring, n);
    let mut t = 0usize;

    while t < m && t < n {
        // Pick the smallest nonzero entry of the trailing block as pivot.
        let mut pivot: Option<(BigInt, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if let Some(s) = esize(&class, work.entry(i, j)) {
                    let better = match &pivot {
                        None => true,
                        Some((ps, _, _)) => s < *ps,
                    };
                    if better {
                        pivot = Some((s, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = pivot else { break };
        work.swap_rows(t, pi);
        u.swap_rows(t, pi);
        work.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'clean: loop {
            // Clear the pivot column.
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in (t + 1)..m {
                    if work.entry(i, t).is_zero() {
                        continue;
                    }
                    let (q, r) = ediv(&class, work.entry(i, t), work.entry(t, t));
                    let neg_q = q.neg();
                    work.add_scaled_row(i, t, &neg_q)?;
                    u.add_scaled_row(i, t, &neg_q)?;
                    if !r.is_zero() {
                        // Remainder is strictly smaller: promote it to pivot.
                        work.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            // Clear the pivot row.
            dirty = true;
            let mut touched_col = false;
            while dirty {
                dirty = false;
                for j in (t + 1)..n {
                    if work.entry(t, j).is_zero() {
                        continue;
                    }
                    let (q, r) = ediv(&class, work.entry(t, j), work.entry(t, t));
                    let neg_q = q.neg();
                    work.add_scaled_col(j, t, &neg_q)?;
                    v.add_scaled_col(j, t, &neg_q)?;
                    if !r.is_zero() {
                        work.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                        touched_col = true;
                    }
                }
            }
            if touched_col {
                // Column operations may have dirtied the pivot column.
                let col_clean = ((t + 1)..m).all(|i| work.entry(i, t).is_zero());
                if !col_clean {
                    continue 'clean;
                }
            }
            // Divisibility pass: the pivot must divide the trailing block.
            let mut offender: Option<usize> = None;
            'scan: for i in (t + 1)..m {
                for j in (t + 1)..n {
                    if work.entry(i, j).is_zero() {
                        continue;
                    }
                    let (_, r) = ediv(&class, work.entry(i, j), work.entry(t, t));
                    if !r.is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = ring.one();
                    work.add_scaled_row(t, i, &one)?;
                    u.add_scaled_row(t, i, &one)?;
                }
                None => break 'clean,
            }
        }

        // Normalize the pivot.
        let c = normalizer(&class, work.entry(t, t));
        if !c.is_one() {
            work.scale_row(t, &c)?;
            u.scale_row(t, &c)?;
        }
        t += 1;
    }

    let d: Vec<RingElement> = (0..m.min(n)).map(|i| work.entry(i, i).clone()).collect();
    verify_and_pack(a, d, u, v)
}

/// Checks `u * a * v = diag(d)` over the ring of `a` and assembles the form.
fn verify_and_pack(a: &Matrix, d: Vec<RingElement>, u: Matrix, v: Matrix) -> Result<SmithForm> {
    let ring = a.ring().clone();
    let prod = u.mul(a)?.mul(&v)?;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let expect = if i == j && i < d.len() {
                d[i].clone()
            } else {
                ring.zero()
            };
            if prod.entry(i, j) != &expect {
                return Err(Error::Internal(
                    "smith form verification failed: u*a*v is not the computed diagonal".into(),
                ));
            }
        }
    }
    let rank = d.iter().take_while(|e| !e.is_zero()).count();
    Ok(SmithForm { d, u, v, rank })
}

/// Smith form over `ZZ/n`: lift to `ZZ`, diagonalise there, then replace each
/// diagonal entry by its canonical associate `gcd(d, n)` (every residue class
/// is a unit multiple of that divisor of `n`).
fn smith_mod_scalar(a: &Matrix, n: &BigInt) -> Result<SmithForm> {
    let ring = a.ring().clone();
    let zz = Ring::integers();
    let lift = a.try_map_entries(&zz, |e| {
        e.as_integer().map(|v| zz.from_bigint(v)).ok_or_else(|| {
            Error::Internal("entry of a scalar modular ring has no integer value".into())
        })
    })?;
    let s = smith_euclidean(&lift, EuclideanClass::Int)?;
    let mut u = s.u.try_map_entries(&ring, |e| {
        Ok(ring.from_bigint(e.as_integer().expect("integer entry")))
    })?;
    let v = s.v.try_map_entries(&ring, |e| {
        Ok(ring.from_bigint(e.as_integer().expect("integer entry")))
    })?;
    let mut d = Vec::with_capacity(s.d.len());
    for (i, de) in s.d.iter().enumerate() {
        let d_red = de
            .as_integer()
            .expect("integer entry")
            .mod_floor(n);
        let g = d_red.gcd(n); // gcd(0, n) = n, which reduces to 0 below.
        let target = ring.from_bigint(g.clone());
        if ring.from_bigint(d_red.clone()) != target {
            // Find a unit c with d_red = c * g (mod n), then rescale row i.
            let step: BigInt = n / &g;
            let base_val: BigInt = (&d_red / &g).mod_floor(&step);
            let mut t = BigInt::zero();
            let unit = loop {
                let cand: BigInt = (&base_val + &t * &step).mod_floor(n);
                if cand.gcd(n).is_one() {
                    break cand;
                }
                t += 1;
                if t > g {
                    return Err(Error::Internal(
                        "no unit associate found while canonicalising a modular smith form".into(),
                    ));
                }
            };
            let inv = match ring.base().inv(&Coeff::Int(unit))? {
                Coeff::Int(iv) => iv,
                Coeff::Rat(_) => {
                    return Err(Error::Internal("modular inverse must be integral".into()))
                }
            };
            u.scale_row(i, &ring.from_bigint(inv))?;
        }
        d.push(target);
    }
    verify_and_pack(a, d, u, v)
}

/// Smith form over `k[x]/(f)`: lift to `k[x]`, diagonalise there, then
/// replace each diagonal entry by its canonical associate `gcd(d, f)` (every
/// residue class is a unit multiple of that monic divisor of `f`).
fn smith_quotient_univariate(a: &Matrix) -> Result<SmithForm> {
    let ring = a.ring().clone();
    let cover = ring.cover();
    let f = match ring.quotient_basis() {
        [g] => cover.element_from_poly(g.clone()),
        _ => {
            return Err(Error::NotPID {
                ring: ring.to_string(),
            })
        }
    };
    let lift = a.try_map_entries(&cover, |e| Ok(cover.element_from_poly(e.poly().clone())))?;
    let s = smith_euclidean(&lift, EuclideanClass::UniPoly)?;
    let mut u = s
        .u
        .try_map_entries(&ring, |e| Ok(ring.element_from_poly(e.poly().clone())))?;
    let v = s
        .v
        .try_map_entries(&ring, |e| Ok(ring.element_from_poly(e.poly().clone())))?;
    let mut d = Vec::with_capacity(s.d.len());
    for (i, de) in s.d.iter().enumerate() {
        let g = univ_gcd(de, &f); // gcd(0, f) = f, which reduces to 0 below.
        let target = ring.element_from_poly(g.poly().clone());
        if ring.element_from_poly(de.poly().clone()) != target {
            let (q_d, _) = univ_divrem(de, &g);
            let (q_f, _) = univ_divrem(&f, &g);
            let unit = find_coprime_combination(&q_d, &q_f, &f)?;
            let (gu, sc) = univ_half_ext_gcd(&unit, &f);
            if !gu.is_one() {
                return Err(Error::Internal(
                    "unit associate is not invertible modulo the quotient relation".into(),
                ));
            }
            u.scale_row(i, &ring.element_from_poly(sc.poly().clone()))?;
        }
        d.push(target);
    }
    verify_and_pack(a, d, u, v)
}

/// Searches for `t` with `gcd(a + t*b, f) = 1`; such a combination exists
/// whenever `gcd(a, b) = 1`.  Scalars are tried first, then (over a finite
/// base field) polynomials of increasing degree.
fn find_coprime_combination(
    a: &RingElement,
    b: &RingElement,
    f: &RingElement,
) -> Result<RingElement> {
    let cover = a.ring().clone();
    let fdeg = f.poly().total_degree().unwrap_or(0) as usize;
    let try_candidate = |t: &RingElement| -> Result<Option<RingElement>> {
        let cand = a.add(&t.mul(b)?)?;
        if univ_gcd(&cand, f).is_one() {
            Ok(Some(cand))
        } else {
            Ok(None)
        }
    };
    match cover.base() {
        BaseRing::Mod { n, .. } => {
            let p = n.to_u64().unwrap_or(4096).min(4096);
            // Enumerate polynomials coefficient by coefficient, constants first.
            let x = cover.var(0)?;
            for len in 1..=(fdeg + 1) {
                let mut digits = vec![0u64; len];
                loop {
                    let mut t = cover.zero();
                    for (k, digit) in digits.iter().enumerate() {
                        if *digit != 0 {
                            let term = cover.from_i64(*digit as i64).mul(&x.pow(k as u32))?;
                            t = t.add(&term)?;
                        }
                    }
                    if let Some(cand) = try_candidate(&t)? {
                        return Ok(cand);
                    }
                    // Odometer increment.
                    let mut pos = 0;
                    loop {
                        if pos == digits.len() {
                            break;
                        }
                        digits[pos] += 1;
                        if digits[pos] < p {
                            break;
                        }
                        digits[pos] = 0;
                        pos += 1;
                    }
                    if pos == digits.len() {
                        break;
                    }
                }
            }
        }
        _ => {
            for k in 0..=(fdeg as i64 + 1) {
                if let Some(cand) = try_candidate(&cover.from_i64(k))? {
                    return Ok(cand);
                }
            }
        }
    }
    Err(Error::Internal(
        "no coprime combination found while canonicalising a smith form".into(),
    ))
}
