//! The relations engine: syzygies and column-system solving over every
//! supported ring, behind one dispatching interface.
//!
//! Strategy by ring class:
//!
//! * `ZZ` — Smith normal form; the trailing column-transform vectors give a
//!   syzygy basis, and solving reduces to divisibility along the diagonal;
//! * `ZZ/n` — lift to `ZZ` and adjoin `n * I` columns, then project the
//!   integer answer back;
//! * polynomial rings over a field (including the zero-variable case, i.e.
//!   the fields themselves) — module Gröbner bases of the column graph;
//! * quotients `k[x...]/I` — lift to the cover ring and adjoin the columns
//!   `q * e_i` for each quotient generator `q`, then reduce back.

use super::matrix::Matrix;
use super::modgb::GraphBasis;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};
use crate::kernel::coeff::BaseRing;
use crate::kernel::poly::Poly;
use crate::kernel::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

enum Class {
    IntScalar,
    ModScalar(BigInt),
    FieldPoly,
    QuotientPoly,
}

fn classify(ring: &Ring) -> Result<Class> {
    if ring.is_free_poly() {
        match ring.base() {
            BaseRing::Int if ring.is_scalar() => return Ok(Class::IntScalar),
            BaseRing::Rat => return Ok(Class::FieldPoly),
            BaseRing::Mod { prime: true, .. } => return Ok(Class::FieldPoly),
            BaseRing::Mod { n, prime: false } if ring.is_scalar() => {
                return Ok(Class::ModScalar(n.clone()))
            }
            _ => {}
        }
        Err(Error::UnsupportedRing {
            op: "relations engine",
            ring: ring.to_string(),
            reason: "no syzygy strategy for this coefficient structure".into(),
        })
    } else {
        Ok(Class::QuotientPoly)
    }
}

fn poly_columns(a: &Matrix) -> Vec<Vec<Poly>> {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a.entry(i, j).poly().clone()).collect())
        .collect()
}

/// Columns `q * e_i` for every quotient generator `q` — the relations a
/// quotient ring imposes on each free coordinate.
fn quotient_relation_columns(ring: &Ring, m: usize) -> Vec<Vec<Poly>> {
    let mut cols = Vec::new();
    for q in ring.quotient_gens() {
        for i in 0..m {
            let mut col = vec![Poly::zero(); m];
            col[i] = q.clone();
            cols.push(col);
        }
    }
    cols
}

fn polys_to_matrix(ring: &Ring, rows: usize, vecs: &[Vec<Poly>]) -> Matrix {
    let mut out = Matrix::zero(ring, rows, vecs.len());
    for (j, v) in vecs.iter().enumerate() {
        for i in 0..rows {
            out.set(i, j, ring.element_from_poly(v[i].clone()));
        }
    }
    out
}

fn lift_to_integers(a: &Matrix, zz: &Ring) -> Result<Matrix> {
    a.try_map_entries(zz, |e| {
        let v = e.as_integer().ok_or_else(|| {
            Error::Internal("expected a scalar integer entry during lifting".into())
        })?;
        Ok(zz.from_bigint(v))
    })
}

/// Generators of the syzygy module `{v : A v = 0}` as the columns of the
/// returned matrix (`a.cols()` rows).
pub(crate) fn syzygies(a: &Matrix) -> Result<Matrix> {
    let ring = a.ring().clone();
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Ok(Matrix::zero(&ring, 0, 0));
    }
    if m == 0 {
        return Ok(Matrix::identity(&ring, n));
    }
    match classify(&ring)? {
        Class::IntScalar => {
            let s = smith_normal_form(a)?;
            let idx: Vec<usize> = (s.rank..n).collect();
            Ok(s.v.select_cols(&idx))
        }
        Class::ModScalar(modulus) => {
            let zz = Ring::integers();
            let lift = lift_to_integers(a, &zz)?;
            let aug = lift.hstack(&Matrix::scalar(&zz, m, &zz.from_bigint(modulus)))?;
            let syz = syzygies(&aug)?;
            let head = syz.top_rows(n);
            let back = head.try_map_entries(&ring, |e| {
                Ok(ring.from_bigint(e.as_integer().expect("integer entry")))
            })?;
            Ok(back.drop_zero_cols())
        }
        Class::FieldPoly => {
            let cols = poly_columns(a);
            let gb = GraphBasis::new(&cols, m, ring.nvars(), ring.base());
            Ok(polys_to_matrix(&ring, n, &gb.syzygies()))
        }
        Class::QuotientPoly => {
            let mut cols = poly_columns(a);
            cols.extend(quotient_relation_columns(&ring, m));
            let gb = GraphBasis::new(&cols, m, ring.nvars(), ring.base());
            let syz = gb.syzygies();
            let truncated: Vec<Vec<Poly>> = syz.iter().map(|v| v[..n].to_vec()).collect();
            Ok(polys_to_matrix(&ring, n, &truncated).drop_zero_cols())
        }
    }
}

/// Solves `A X = T` column by column; `None` when any column of `T` is
/// outside the span of the columns of `A`.
pub(crate) fn solve_columns(a: &Matrix, t: &Matrix) -> Result<Option<Matrix>> {
    let ring = a.ring().clone();
    ring.check_same(t.ring())?;
    let (m, n) = (a.rows(), a.cols());
    if t.rows() != m {
        return Err(Error::ShapeMismatch(format!(
            "solve: matrix has {m} rows but target has {}",
            t.rows()
        )));
    }
    if t.is_zero() {
        return Ok(Some(Matrix::zero(&ring, n, t.cols())));
    }
    if n == 0 {
        return Ok(None);
    }
    match classify(&ring)? {
        Class::IntScalar => {
            let s = smith_normal_form(a)?;
            let d: Vec<BigInt> = s
                .d
                .iter()
                .map(|e| e.as_integer().expect("integer entry"))
                .collect();
            let mut out = Matrix::zero(&ring, n, t.cols());
            for jc in 0..t.cols() {
                let ut = s.u.mul(&t.col(jc))?;
                let mut y = vec![BigInt::zero(); n];
                for i in 0..m {
                    let v = ut.entry(i, 0).as_integer().expect("integer entry");
                    if i < s.rank {
                        let (q, r) = v.div_rem(&d[i]);
                        if !r.is_zero() {
                            return Ok(None);
                        }
                        y[i] = q;
                    } else if !v.is_zero() {
                        return Ok(None);
                    }
                }
                let ycol = Matrix::column(
                    &ring,
                    y.into_iter().map(|v| ring.from_bigint(v)).collect(),
                )?;
                let x = s.v.mul(&ycol)?;
                for i in 0..n {
                    out.set(i, jc, x.entry(i, 0).clone());
                }
            }
            Ok(Some(out))
        }
        Class::ModScalar(modulus) => {
            let zz = Ring::integers();
            let lift = lift_to_integers(a, &zz)?;
            let aug = lift.hstack(&Matrix::scalar(&zz, m, &zz.from_bigint(modulus)))?;
            let tlift = lift_to_integers(t, &zz)?;
            match solve_columns(&aug, &tlift)? {
                None => Ok(None),
                Some(x) => {
                    let head = x.top_rows(n);
                    Ok(Some(head.try_map_entries(&ring, |e| {
                        Ok(ring.from_bigint(e.as_integer().expect("integer entry")))
                    })?))
                }
            }
        }
        Class::FieldPoly | Class::QuotientPoly => {
            let quotient = !ring.is_free_poly();
            let mut cols = poly_columns(a);
            if quotient {
                cols.extend(quotient_relation_columns(&ring, m));
            }
            let gb = GraphBasis::new(&cols, m, ring.nvars(), ring.base());
            let mut out = Matrix::zero(&ring, n, t.cols());
            for jc in 0..t.cols() {
                let target: Vec<Poly> = (0..m).map(|i| t.entry(i, jc).poly().clone()).collect();
                match gb.solve(&target) {
                    None => return Ok(None),
                    Some(w) => {
                        for i in 0..n {
                            out.set(i, jc, ring.element_from_poly(w[i].clone()));
                        }
                    }
                }
            }
            Ok(Some(out))
        }
    }
}

/// Does every column of `t` lie in the column span of `a`?
pub(crate) fn contains_columns(a: &Matrix, t: &Matrix) -> Result<bool> {
    Ok(solve_columns(a, t)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_syzygies(a: &Matrix) -> Matrix {
        let s = syzygies(a).unwrap();
        if s.cols() > 0 {
            let prod = a.mul(&s).unwrap();
            assert!(prod.is_zero(), "columns of the syzygy matrix must annihilate");
        }
        s
    }

    #[test]
    fn integer_syzygies_of_a_row() {
        let zz = Ring::integers();
        let a = Matrix::from_int_rows(&zz, &[vec![2, 4]]).unwrap();
        let s = check_syzygies(&a);
        assert_eq!(s.cols(), 1, "rank-1 map from ZZ^2 has a 1-dim kernel");
        let v0 = s.entry(0, 0).as_integer().unwrap();
        let v1 = s.entry(1, 0).as_integer().unwrap();
        assert_eq!((v0.magnitude().clone(), v1.magnitude().clone()),
            (2u32.into(), 1u32.into()),
            "kernel generated by ±(2, -1)");
    }

    #[test]
    fn integer_solving() {
        let zz = Ring::integers();
        let a = Matrix::from_int_rows(&zz, &[vec![2, 0], vec![0, 3]]).unwrap();
        let t = Matrix::from_int_rows(&zz, &[vec![4], vec![6]]).unwrap();
        let x = solve_columns(&a, &t).unwrap().expect("solvable");
        assert_eq!(a.mul(&x).unwrap(), t);
        let bad = Matrix::from_int_rows(&zz, &[vec![1], vec![1]]).unwrap();
        assert!(solve_columns(&a, &bad).unwrap().is_none(), "2x = 1 over ZZ");
    }

    #[test]
    fn mod_ring_syzygies() {
        let z6 = Ring::integers_mod(BigInt::from(6)).unwrap();
        let a = Matrix::new(&z6, 1, 1, vec![z6.from_i64(2)]).unwrap();
        let s = check_syzygies(&a);
        assert_eq!(s.cols(), 1, "annihilator of 2 in ZZ/6 is (3)");
        assert_eq!(s.entry(0, 0).as_integer().unwrap(), BigInt::from(3));
    }

    #[test]
    fn mod_ring_solving() {
        let z6 = Ring::integers_mod(BigInt::from(6)).unwrap();
        let a = Matrix::new(&z6, 1, 1, vec![z6.from_i64(2)]).unwrap();
        let good = Matrix::new(&z6, 1, 1, vec![z6.from_i64(4)]).unwrap();
        let x = solve_columns(&a, &good).unwrap().expect("2x = 4 mod 6");
        assert_eq!(a.mul(&x).unwrap(), good);
        let bad = Matrix::new(&z6, 1, 1, vec![z6.from_i64(3)]).unwrap();
        assert!(solve_columns(&a, &bad).unwrap().is_none(), "2x = 3 mod 6");
    }

    #[test]
    fn polynomial_koszul() {
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into(), "y".into()]).unwrap();
        let x = r.var(0).unwrap();
        let y = r.var(1).unwrap();
        let a = Matrix::new(&r, 1, 2, vec![x, y]).unwrap();
        let s = check_syzygies(&a);
        assert_eq!(s.cols(), 1, "koszul syzygy of (x, y)");
    }

    #[test]
    fn quotient_ring_syzygies() {
        let cover = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = cover.var(0).unwrap();
        let r = Ring::quotient(&cover, &[x.pow(2)]).unwrap();
        let xr = r.var(0).unwrap();
        let a = Matrix::new(&r, 1, 1, vec![xr.clone()]).unwrap();
        let s = check_syzygies(&a);
        assert_eq!(s.cols(), 1, "annihilator of x in QQ[x]/(x^2) is (x)");
        assert_eq!(s.entry(0, 0), &xr);
    }

    #[test]
    fn quotient_ring_solving() {
        let cover = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let x = cover.var(0).unwrap();
        let r = Ring::quotient(&cover, &[x.pow(2)]).unwrap();
        let xr = r.var(0).unwrap();
        let a = Matrix::new(&r, 1, 1, vec![xr.clone()]).unwrap();
        let t = Matrix::new(&r, 1, 1, vec![xr.clone()]).unwrap();
        let sol = solve_columns(&a, &t).unwrap().expect("x * 1 = x");
        assert_eq!(a.mul(&sol).unwrap(), t);
        let one = Matrix::new(&r, 1, 1, vec![r.one()]).unwrap();
        assert!(
            solve_columns(&a, &one).unwrap().is_none(),
            "1 is not a multiple of x in QQ[x]/(x^2)"
        );
    }

    #[test]
    fn zero_shape_edges() {
        let zz = Ring::integers();
        let a = Matrix::zero(&zz, 0, 3);
        let s = syzygies(&a).unwrap();
        assert_eq!((s.rows(), s.cols()), (3, 3), "everything maps to R^0");
        let b = Matrix::zero(&zz, 3, 0);
        let sb = syzygies(&b).unwrap();
        assert_eq!(sb.cols(), 0);
        let t = Matrix::zero(&zz, 3, 2);
        assert!(solve_columns(&b, &t).unwrap().is_some(), "zero target");
    }
}
