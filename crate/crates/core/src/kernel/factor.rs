//! Univariate polynomial factorization over `QQ` and `GF(p)`.
//!
//! Associated-prime enumeration over `k[x]` and `k[x]/(f)` needs the monic
//! irreducible factors of invariant factors, so this module provides exact
//! factorization:
//!
//! * over `GF(p)` — squarefree reduction followed by exhaustive trial
//!   division by monic polynomials of increasing degree (a divisor of
//!   minimal degree is automatically irreducible); guarded against fields
//!   too large to enumerate;
//! * over `QQ` — reduction to a primitive squarefree integer polynomial,
//!   factorization modulo a good small prime, quadratic Hensel lifting to a
//!   Mignotte-style bound, and deterministic subset recombination.
//!
//! Every routine is deterministic: factor lists are sorted by degree and
//! then coefficient sequence, so repeated runs produce identical output.

use super::coeff::{BaseRing, Coeff};
use super::poly::{Mono, MonoOrder, Poly};
use super::ring::{Ring, RingElement};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Upper bound on the number of candidate divisors enumerated during
/// exhaustive `GF(p)` factor search.
const FP_ENUM_BUDGET: u64 = 1 << 22;

/// Upper bound on modular factors fed to subset recombination.
const RECOMBINE_CAP: usize = 24;

// ---------------------------------------------------------------------------
// Dense integer polynomials (index = degree, no trailing zeros).

type ZPoly = Vec<BigInt>;

fn zp_trim(mut f: ZPoly) -> ZPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn zp_deg(f: &ZPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

fn zp_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    zp_trim(out)
}

fn zp_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    zp_trim(out)
}

fn zp_content(f: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    g
}

fn zp_primitive(f: &ZPoly) -> ZPoly {
    let c = zp_content(f);
    if c.is_zero() || c.is_one() {
        return f.clone();
    }
    f.iter().map(|x| x / &c).collect()
}

fn zp_derivative(f: &ZPoly) -> ZPoly {
    if f.len() <= 1 {
        return Vec::new();
    }
    zp_trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Exact division over ZZ; `None` when not an exact integer divisor.
fn zp_exact_div(f: &ZPoly, g: &ZPoly) -> Option<ZPoly> {
    if g.is_empty() {
        return None;
    }
    let mut rem = f.clone();
    let mut q = vec![BigInt::zero(); f.len().saturating_sub(g.len()) + 1];
    let glc = g.last().unwrap();
    while let Some(rd) = zp_deg(&rem) {
        let gd = zp_deg(g).unwrap();
        if rd < gd {
            return None;
        }
        let (c, r) = rem[rd].div_rem(glc);
        if !r.is_zero() {
            return None;
        }
        q[rd - gd] = c.clone();
        let mut shifted = vec![BigInt::zero(); rd - gd];
        shifted.extend(g.iter().map(|x| x * &c));
        rem = zp_sub(&rem, &shifted);
    }
    Some(zp_trim(q))
}

fn zp_l2_bound(f: &ZPoly) -> BigInt {
    // ceil(sqrt(sum c_i^2)) computed via integer square root.
    let sum: BigInt = f.iter().map(|c| c * c).sum();
    sum.sqrt() + 1
}

// ---------------------------------------------------------------------------
// Dense polynomials modulo m (coefficients in 0..m).

fn mp_norm(f: &ZPoly, m: &BigInt) -> ZPoly {
    zp_trim(f.iter().map(|c| c.mod_floor(m)).collect())
}

fn mp_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    mp_norm(&zp_mul(a, b), m)
}

fn mp_sub(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    mp_norm(&zp_sub(a, b), m)
}

fn mp_add(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    mp_norm(&out, m)
}

fn mp_scale(a: &ZPoly, c: &BigInt, m: &BigInt) -> ZPoly {
    mp_norm(&a.iter().map(|x| x * c).collect(), m)
}

fn mod_inv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Division with remainder modulo `m`; the divisor's lead must be a unit.
fn mp_divrem(f: &ZPoly, g: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let g = mp_norm(g, m);
    let gd = zp_deg(&g).expect("division by zero polynomial");
    let glc_inv = mod_inv(g.last().unwrap(), m).expect("divisor lead must be a unit");
    let mut rem = mp_norm(f, m);
    let mut q = vec![BigInt::zero(); rem.len().saturating_sub(g.len()) + 1];
    while let Some(rd) = zp_deg(&rem) {
        if rd < gd {
            break;
        }
        let c = (&rem[rd] * &glc_inv).mod_floor(m);
        q[rd - gd] = c.clone();
        let mut shifted = vec![BigInt::zero(); rd - gd];
        shifted.extend(g.iter().cloned());
        rem = mp_sub(&rem, &mp_scale(&shifted, &c, m), m);
    }
    (zp_trim(q), rem)
}

fn mp_make_monic(f: &ZPoly, m: &BigInt) -> ZPoly {
    match f.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = mod_inv(lc, m).expect("lead must be a unit");
            mp_scale(f, &inv, m)
        }
    }
}

/// Monic gcd over `GF(p)`.
fn fp_gcd(a: &ZPoly, b: &ZPoly, p: &BigInt) -> ZPoly {
    let mut x = mp_norm(a, p);
    let mut y = mp_norm(b, p);
    while !y.is_empty() {
        let (_, r) = mp_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        mp_make_monic(&x, p)
    }
}

/// Extended Euclid over `GF(p)`: returns `(s, t)` with `s*a + t*b ≡ 1`;
/// requires `gcd(a, b) = 1`.
fn fp_bezout(a: &ZPoly, b: &ZPoly, p: &BigInt) -> (ZPoly, ZPoly) {
    let (mut r0, mut r1) = (mp_norm(a, p), mp_norm(b, p));
    let (mut s0, mut s1) = (vec![BigInt::one()], ZPoly::new());
    let (mut t0, mut t1) = (ZPoly::new(), vec![BigInt::one()]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(zp_deg(&r0), Some(0), "inputs must be coprime mod p");
    let inv = mod_inv(&r0[0], p).unwrap();
    (mp_scale(&s0, &inv, p), mp_scale(&t0, &inv, p))
}

/// Monic irreducible factors (without multiplicity) of a squarefree monic
/// polynomial over `GF(p)`, by trial division with divisors of increasing
/// degree.  Deterministic: candidates enumerated in odometer order.
fn fp_factor_squarefree(f: &ZPoly, p: &BigInt) -> Result<Vec<ZPoly>> {
    let mut rem = mp_make_monic(&mp_norm(f, p), p);
    let mut out: Vec<ZPoly> = Vec::new();
    let pu = match u64::try_from(p.clone()) {
        Ok(v) => v,
        Err(_) => {
            return Err(Error::FactorizationFailed {
                value: format!("polynomial over GF({p})"),
                reason: "field too large for exhaustive factor enumeration".into(),
            })
        }
    };
    let mut dd = 1usize;
    while zp_deg(&rem).unwrap_or(0) >= 2 * dd {
        let count = (pu as u128).checked_pow(dd as u32).unwrap_or(u128::MAX);
        if count > FP_ENUM_BUDGET as u128 {
            return Err(Error::FactorizationFailed {
                value: format!("polynomial over GF({p})"),
                reason: format!("degree-{dd} divisor search needs {count} candidates"),
            });
        }
        // Monic candidates of degree dd: coefficients as an odometer.
        let mut coeffs = vec![0u64; dd];
        'cand: loop {
            let mut g: ZPoly = coeffs.iter().map(|&c| BigInt::from(c)).collect();
            g.push(BigInt::one());
            loop {
                let (_, r) = mp_divrem(&rem, &g, p);
                if r.is_empty() {
                    out.push(g.clone());
                    let (q, _) = mp_divrem(&rem, &g, p);
                    rem = q;
                    // Squarefree input: each factor divides exactly once.
                    break;
                } else {
                    break;
                }
            }
            if zp_deg(&rem).unwrap_or(0) < 2 * dd {
                break 'cand;
            }
            // Advance the odometer.
            let mut i = 0;
            loop {
                if i == dd {
                    break 'cand;
                }
                coeffs[i] += 1;
                if coeffs[i] < pu {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
        dd += 1;
    }
    if zp_deg(&rem).unwrap_or(0) >= 1 {
        out.push(rem);
    }
    out.sort_by(zp_cmp);
    Ok(out)
}

fn zp_cmp(a: &ZPoly, b: &ZPoly) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn fp_derivative(f: &ZPoly, p: &BigInt) -> ZPoly {
    mp_norm(&zp_derivative(f), p)
}

/// Distinct monic irreducible factors over `GF(p)`, handling inseparable
/// parts (`f' = 0` means `f = g(x^p)`, and `g`'s coefficients are the
/// `p`-th roots, which over `GF(p)` are the coefficients themselves).
fn fp_distinct_irreducibles(f: &ZPoly, p: &BigInt) -> Result<Vec<ZPoly>> {
    let f = mp_make_monic(&mp_norm(f, p), p);
    if zp_deg(&f).unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let df = fp_derivative(&f, p);
    if df.is_empty() {
        let pu = u64::try_from(p.clone()).map_err(|_| Error::FactorizationFailed {
            value: format!("polynomial over GF({p})"),
            reason: "field too large".into(),
        })? as usize;
        let mut root = ZPoly::new();
        for (i, c) in f.iter().enumerate() {
            if i % pu == 0 {
                root.push(c.clone());
            } else if !c.is_zero() {
                return Err(Error::Internal(
                    "zero derivative but not a p-th power".into(),
                ));
            }
        }
        return fp_distinct_irreducibles(&zp_trim(root), p);
    }
    let h = fp_gcd(&f, &df, p);
    let (s, r) = mp_divrem(&f, &h, p);
    debug_assert!(r.is_empty());
    let mut set = fp_factor_squarefree(&s, p)?;
    if zp_deg(&h).unwrap_or(0) >= 1 {
        for g in fp_distinct_irreducibles(&h, p)? {
            if !set.contains(&g) {
                set.push(g);
            }
        }
    }
    set.sort_by(zp_cmp);
    set.dedup();
    Ok(set)
}

// ---------------------------------------------------------------------------
// Hensel lifting and Zassenhaus recombination over ZZ.

/// One quadratic Hensel step: refines `f ≡ g*h (mod m)` with Bezout data
/// `s*g + t*h ≡ 1 (mod m)` to the same congruences mod `m^2`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = mp_sub(f, &zp_mul(g, h), &m2);
    let (q, r) = mp_divrem(&mp_mul(s, &e, &m2), h, &m2);
    let g1 = mp_add(&mp_add(g, &mp_mul(t, &e, &m2), &m2), &mp_mul(&q, g, &m2), &m2);
    let h1 = mp_add(h, &r, &m2);
    let one: ZPoly = vec![BigInt::one()];
    let b = mp_sub(
        &mp_add(&mp_mul(s, &g1, &m2), &mp_mul(t, &h1, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = mp_divrem(&mp_mul(s, &b, &m2), &h1, &m2);
    let s1 = mp_sub(s, &d, &m2);
    let t1 = mp_sub(&mp_sub(t, &mp_mul(t, &b, &m2), &m2), &mp_mul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

/// Lifts monic factors of a monic `f` from mod `p` to mod `p^k` (factor tree).
fn hensel_tree(f: &ZPoly, factors: &[ZPoly], p: &BigInt, pk: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![mp_norm(f, pk)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mut g = vec![BigInt::one()];
    for x in left {
        g = mp_mul(&g, x, p);
    }
    let mut h = vec![BigInt::one()];
    for x in right {
        h = mp_mul(&h, x, p);
    }
    let (mut s, mut t) = fp_bezout(&g, &h, p);
    let mut m = p.clone();
    let mut gl = g;
    let mut hl = h;
    while &m < pk {
        let (g1, h1, s1, t1) = hensel_step(f, &gl, &hl, &s, &t, &m);
        gl = g1;
        hl = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let gl = mp_norm(&gl, pk);
    let hl = mp_norm(&hl, pk);
    let mut out = hensel_tree(&gl, left, p, pk);
    out.extend(hensel_tree(&hl, right, p, pk));
    out
}

/// Balances coefficients into the symmetric range `(-m/2, m/2]`.
fn mp_balanced(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    zp_trim(
        f.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Factors a monic squarefree integer polynomial into monic irreducible
/// integer factors (Zassenhaus).
fn factor_monic_squarefree(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let d = zp_deg(f).unwrap_or(0);
    if d <= 1 {
        return Ok(vec![f.clone()]);
    }
    // Choose a prime keeping f squarefree mod p.
    let mut chosen: Option<BigInt> = None;
    for p in [
        3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
        181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
    ] {
        let p = BigInt::from(p);
        let fp = mp_norm(f, &p);
        if zp_deg(&fp) != Some(d) {
            continue;
        }
        let g = fp_gcd(&fp, &fp_derivative(&fp, &p), &p);
        if zp_deg(&g) == Some(0) {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.ok_or_else(|| Error::FactorizationFailed {
        value: format!("integer polynomial of degree {d}"),
        reason: "no suitable small prime for modular factorization".into(),
    })?;
    let modular = fp_factor_squarefree(&mp_norm(f, &p), &p)?;
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    if modular.len() > RECOMBINE_CAP {
        return Err(Error::FactorizationFailed {
            value: format!("integer polynomial of degree {d}"),
            reason: format!("{} modular factors exceed the recombination cap", modular.len()),
        });
    }
    // Lift beyond twice the Mignotte-style coefficient bound.
    let bound: BigInt = (BigInt::one() << d) * zp_l2_bound(f);
    let mut pk = p.clone();
    while pk <= &bound * 2 {
        pk = &pk * &p;
    }
    let lifted = hensel_tree(&mp_norm(f, &pk), &modular, &p, &pk);

    // Deterministic subset recombination.
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.clone();
    let mut out: Vec<ZPoly> = Vec::new();
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let mut found = false;
        'subsets: for combo in combinations(remaining.len(), size) {
            let mut cand = vec![BigInt::one()];
            for &i in &combo {
                cand = mp_mul(&cand, &remaining[i], &pk);
            }
            let cand = mp_balanced(&cand, &pk);
            if let Some(q) = zp_exact_div(&current, &cand) {
                out.push(cand);
                current = q;
                let mut keep = Vec::new();
                for (i, x) in remaining.into_iter().enumerate() {
                    if !combo.contains(&i) {
                        keep.push(x);
                    }
                }
                remaining = keep;
                found = true;
                break 'subsets;
            }
        }
        if !found {
            size += 1;
        }
    }
    if zp_deg(&current).unwrap_or(0) >= 1 {
        out.push(current);
    }
    out.sort_by(zp_cmp);
    Ok(out)
}

/// All `size`-element index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // Advance.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (size - i) {
                cur[i] += 1;
                for j in (i + 1)..size {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Conversions and the public entry points.

/// Dense coefficients (ascending degree) of a univariate element.
fn to_dense(f: &Poly) -> Vec<Coeff> {
    let mut out: Vec<Coeff> = Vec::new();
    for (m, c) in &f.terms {
        let d = m.0[0] as usize;
        if out.len() <= d {
            out.resize(d + 1, Coeff::Int(BigInt::zero()));
        }
        out[d] = c.clone();
    }
    out
}

fn from_dense_int(coeffs: &[BigInt], ring: &Ring) -> RingElement {
    let base = ring.base();
    let terms: Vec<(Mono, Coeff)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| (Mono(vec![d as u32]), base.coeff_from_int(c.clone())))
        .collect();
    ring.element_from_poly(Poly::normalized(terms, MonoOrder::Grevlex, base))
}

fn from_dense_rat(coeffs: &[BigRational], ring: &Ring) -> RingElement {
    let terms: Vec<(Mono, Coeff)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| (Mono(vec![d as u32]), Coeff::Rat(c.clone())))
        .collect();
    ring.element_from_poly(Poly::normalized(terms, MonoOrder::Grevlex, ring.base()))
}

/// Clears denominators and content: a primitive integer polynomial with the
/// same roots.
fn rational_to_primitive(f: &Poly) -> ZPoly {
    let dense = to_dense(f);
    let mut denom_lcm = BigInt::one();
    for c in &dense {
        if let Coeff::Rat(r) = c {
            denom_lcm = denom_lcm.lcm(r.denom());
        }
    }
    let ints: ZPoly = dense
        .iter()
        .map(|c| match c {
            Coeff::Rat(r) => (r * BigRational::from(denom_lcm.clone())).to_integer(),
            Coeff::Int(v) => v * &denom_lcm,
        })
        .collect();
    let mut prim = zp_primitive(&zp_trim(ints));
    if prim.last().is_some_and(|c| c.is_negative()) {
        prim = prim.iter().map(|c| -c).collect();
    }
    prim
}

/// Monicizes an integer polynomial: `G(x) = lc^(d-1) * F(x/lc)` is monic with
/// integer coefficients; factors of `G` map back to factors of `F`.
fn monicize(f: &ZPoly) -> (ZPoly, BigInt) {
    let lc = f.last().unwrap().clone();
    if lc.is_one() {
        return (f.clone(), lc);
    }
    let d = zp_deg(f).unwrap();
    // G_i = F_i * lc^(d-1-i) for i < d, and the lead becomes 1.
    let mut out = vec![BigInt::zero(); f.len()];
    for (i, c) in f.iter().enumerate().take(d) {
        out[i] = c * lc.pow((d - 1 - i) as u32);
    }
    out[d] = BigInt::one();
    (zp_trim(out), lc)
}

/// Maps a monic factor of `monicize(F)` back to a primitive factor of `F`.
fn demonicize(g: &ZPoly, lc: &BigInt) -> ZPoly {
    if lc.is_one() {
        return g.clone();
    }
    // H(x) = g(lc * x): coefficient i scales by lc^i.
    let scaled: ZPoly = g
        .iter()
        .enumerate()
        .map(|(i, c)| c * lc.pow(i as u32))
        .collect();
    let mut prim = zp_primitive(&zp_trim(scaled));
    if prim.last().is_some_and(|c| c.is_negative()) {
        prim = prim.iter().map(|c| -c).collect();
    }
    prim
}

/// Distinct irreducible primitive integer factors of a primitive squarefree
/// integer polynomial.
fn factor_squarefree_z(f: &ZPoly) -> Result<Vec<ZPoly>> {
    if zp_deg(f).unwrap_or(0) <= 1 {
        return Ok(vec![f.clone()]);
    }
    let (g, lc) = monicize(f);
    let monic_factors = factor_monic_squarefree(&g)?;
    let mut out: Vec<ZPoly> = monic_factors.iter().map(|m| demonicize(m, &lc)).collect();
    out.sort_by(zp_cmp);
    out.dedup();
    // Sanity: the product of the mapped-back factors is f up to sign.
    let mut prod = vec![BigInt::one()];
    for x in &out {
        prod = zp_mul(&prod, x);
    }
    let prod = zp_primitive(&prod);
    let fp = zp_primitive(f);
    let neg_fp: ZPoly = fp.iter().map(|c| -c).collect();
    if prod != fp && prod != neg_fp {
        return Err(Error::Internal(
            "recombined factors do not multiply back to the input".into(),
        ));
    }
    Ok(out)
}

/// Distinct irreducible factors of an arbitrary primitive integer polynomial.
fn distinct_irreducibles_z(f: &ZPoly) -> Result<Vec<ZPoly>> {
    if zp_deg(f).unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let df = zp_derivative(f);
    // gcd over QQ via primitive pseudo-remainders: use rational gcd for
    // robustness at these sizes.
    let h = zp_gcd_primitive(f, &df);
    if zp_deg(&h).unwrap_or(0) == 0 {
        return factor_squarefree_z(&zp_primitive(f));
    }
    let s = zp_exact_div(f, &h).ok_or_else(|| Error::Internal("gcd must divide".into()))?;
    let mut set = factor_squarefree_z(&zp_primitive(&s))?;
    for g in distinct_irreducibles_z(&h)? {
        if !set.contains(&g) {
            set.push(g);
        }
    }
    set.sort_by(zp_cmp);
    set.dedup();
    Ok(set)
}

/// Primitive gcd of integer polynomials (via rational Euclid).
fn zp_gcd_primitive(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let to_rat = |f: &ZPoly| -> Vec<BigRational> {
        f.iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let trim = |f: &mut Vec<BigRational>| {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
    };
    let mut x = to_rat(a);
    let mut y = to_rat(b);
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        // Rational poly remainder.
        let yd = y.len() - 1;
        let ylc = y[yd].clone();
        while x.len() > yd || (x.len() == yd + 1) {
            if x.len() < y.len() {
                break;
            }
            let xd = x.len() - 1;
            let c = &x[xd] / &ylc;
            for i in 0..y.len() {
                let idx = xd - yd + i;
                let sub = &y[i] * &c;
                x[idx] -= sub;
            }
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    // x is the gcd over QQ; clear to a primitive integer polynomial.
    let mut denom = BigInt::one();
    for c in &x {
        denom = denom.lcm(c.denom());
    }
    let ints: ZPoly = x
        .iter()
        .map(|c| (c * BigRational::from(denom.clone())).to_integer())
        .collect();
    let mut prim = zp_primitive(&zp_trim(ints));
    if prim.last().is_some_and(|c| c.is_negative()) {
        prim = prim.iter().map(|c| -c).collect();
    }
    prim
}

/// Factors a univariate polynomial over `QQ` or `GF(p)` into monic
/// irreducibles with multiplicities, sorted by degree then display form.
///
/// The input must be a nonzero element of a free univariate polynomial ring
/// over a field.
pub fn factor_univariate(f: &RingElement) -> Result<Vec<(RingElement, u32)>> {
    let ring = f.ring().clone();
    if !ring.is_free_poly() || ring.nvars() != 1 || !ring.base().is_field() {
        return Err(Error::UnsupportedRing {
            op: "univariate factorization",
            ring: ring.to_string(),
            reason: "requires a free univariate polynomial ring over QQ or GF(p)".into(),
        });
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let distinct: Vec<RingElement> = match ring.base() {
        BaseRing::Rat => {
            let prim = rational_to_primitive(f.poly());
            distinct_irreducibles_z(&prim)?
                .iter()
                .map(|g| {
                    // Monic rational version.
                    let lc = g.last().unwrap().clone();
                    let rats: Vec<BigRational> = g
                        .iter()
                        .map(|c| BigRational::new(c.clone(), lc.clone()))
                        .collect();
                    from_dense_rat(&rats, &ring)
                })
                .collect()
        }
        BaseRing::Mod { n: p, prime: true } => {
            let dense = to_dense(f.poly());
            let ints: ZPoly = zp_trim(
                dense
                    .iter()
                    .map(|c| c.as_int().expect("mod-p coefficients").clone())
                    .collect(),
            );
            fp_distinct_irreducibles(&ints, p)?
                .iter()
                .map(|g| from_dense_int(g, &ring))
                .collect()
        }
        _ => unreachable!("field base enforced above"),
    };
    // Multiplicities by repeated exact division over the field.
    let base = ring.base().clone();
    let mut out: Vec<(RingElement, u32)> = Vec::new();
    for q in distinct {
        if q.poly().is_constant() {
            continue;
        }
        let mut mult = 0u32;
        let mut cur = f.poly().clone();
        loop {
            match super::ideal::exact_div(&cur, q.poly(), MonoOrder::Grevlex, &base) {
                Some(next) => {
                    mult += 1;
                    cur = next;
                }
                None => break,
            }
        }
        debug_assert!(mult > 0, "computed factor must divide");
        out.push((q, mult));
    }
    out.sort_by(|a, b| {
        let da = a.0.poly().total_degree().unwrap_or(0);
        let db = b.0.poly().total_degree().unwrap_or(0);
        da.cmp(&db).then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    Ok(out)
}

/// True when the univariate polynomial is irreducible over its field.
pub fn is_irreducible_univariate(f: &RingElement) -> Result<bool> {
    let d = f.poly().total_degree().unwrap_or(0);
    if d == 0 {
        return Ok(false);
    }
    let factors = factor_univariate(f)?;
    Ok(factors.len() == 1
        && factors[0].1 == 1
        && factors[0].0.poly().total_degree() == Some(d))
}

/// Division with remainder for univariate polynomials over a field base,
/// on canonical ring elements.  Panics if `g` is zero.
pub fn univ_divrem(f: &RingElement, g: &RingElement) -> (RingElement, RingElement) {
    let ring = f.ring().clone();
    assert!(ring.nvars() == 1 && ring.base().is_field());
    assert!(!g.is_zero(), "division by zero polynomial");
    let base = ring.base().clone();
    let ord = MonoOrder::Grevlex;
    let mut rem = f.poly().clone();
    let mut q = Poly::zero();
    let (gm, gc) = g.poly().lead().unwrap();
    let (gm, gc) = (gm.clone(), gc.clone());
    while let Some((m, c)) = rem.lead().map(|(m, c)| (m.clone(), c.clone())) {
        if !gm.divides(&m) {
            break;
        }
        let qm = gm.div(&m);
        let qc = base.div(&c, &gc).expect("field base");
        let term = Poly::normalized(vec![(qm.clone(), qc.clone())], ord, &base);
        q = q.add(&term, ord, &base);
        rem = rem.sub(&g.poly().mul_term(&qm, &qc, ord, &base), ord, &base);
    }
    (
        ring.element_from_poly(q),
        ring.element_from_poly(rem),
    )
}
