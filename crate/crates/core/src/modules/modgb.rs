//! Gröbner bases for submodules of free modules over polynomial rings with
//! field coefficients.
//!
//! Vectors are ordered position-over-term with position 0 highest, so a
//! basis of the "graph" of a matrix — columns `(A e_j ; e_j)` inside
//! `R^(m+s)` — simultaneously yields:
//!
//! * syzygies: basis elements whose lead sits past the first `m` positions
//!   have a zero first block, and their trailing blocks generate the syzygy
//!   module of the columns;
//! * membership with witness: reducing `(t ; 0)` using only first-block
//!   leads drives `t` to a normal form while accumulating the negated
//!   coefficient vector in the trailing block.
//!
//! Pairs are formed only between vectors sharing a lead position; the
//! coprime-lead shortcut valid for ideals is deliberately not applied (it is
//! unsound for modules), while the lcm chain criterion remains valid.

use crate::kernel::coeff::{BaseRing, Coeff};
use crate::kernel::poly::{Mono, MonoOrder, Poly};
use std::cmp::Ordering;
use std::collections::BTreeSet;

const ORD: MonoOrder = MonoOrder::Grevlex;

/// Compares module terms `(position, monomial)` position-over-term with
/// position 0 highest.
fn term_cmp(a: (usize, &Mono), b: (usize, &Mono)) -> Ordering {
    match a.0.cmp(&b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => ORD.cmp(a.1, b.1),
    }
}

/// Lead term of a vector: first nonzero position and its lead monomial.
fn lead(v: &[Poly]) -> Option<(usize, &Mono, &Coeff)> {
    for (pos, p) in v.iter().enumerate() {
        if let Some((m, c)) = p.lead() {
            return Some((pos, m, c));
        }
    }
    None
}

fn v_is_zero(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// `v - (c * x^m) * g`.
fn v_sub_scaled(v: &[Poly], g: &[Poly], m: &Mono, c: &Coeff, base: &BaseRing) -> Vec<Poly> {
    v.iter()
        .zip(g.iter())
        .map(|(a, b)| a.sub(&b.mul_term(m, c, ORD, base), ORD, base))
        .collect()
}

fn v_mul_term(v: &[Poly], m: &Mono, c: &Coeff, base: &BaseRing) -> Vec<Poly> {
    v.iter().map(|p| p.mul_term(m, c, ORD, base)).collect()
}

/// Scales the vector so its lead coefficient is 1.
fn v_monic(v: Vec<Poly>, base: &BaseRing) -> Vec<Poly> {
    match lead(&v) {
        None => v,
        Some((_, _, c)) => {
            let inv = base.inv(c).expect("field coefficient");
            v.iter().map(|p| p.scale(&inv, ORD, base)).collect()
        }
    }
}

/// Full normal form.  With `restrict = Some(r)` only terms at positions
/// `< r` are reduced (used for membership so the witness block is tracked,
/// never rewritten).
fn reduce(
    start: Vec<Poly>,
    basis: &[Vec<Poly>],
    restrict: Option<usize>,
    base: &BaseRing,
) -> Vec<Poly> {
    let mut cur = start;
    'outer: loop {
        let posbound = restrict.unwrap_or(cur.len());
        for pos in 0..cur.len().min(posbound) {
            let terms: Vec<(Mono, Coeff)> = cur[pos].terms.clone();
            for (mono, coeff) in terms {
                for g in basis {
                    if let Some((gp, gm, gc)) = lead(g) {
                        if gp == pos && gm.divides(&mono) {
                            let m = gm.div(&mono);
                            let c = base.div(&coeff, gc).expect("field coefficient");
                            cur = v_sub_scaled(&cur, g, &m, &c, base);
                            continue 'outer;
                        }
                    }
                }
            }
        }
        break;
    }
    cur
}

/// Buchberger's algorithm for module generators, returning an interreduced,
/// monic basis sorted by ascending lead term.
pub(crate) fn module_groebner(gens: Vec<Vec<Poly>>, base: &BaseRing) -> Vec<Vec<Poly>> {
    let mut basis: Vec<Vec<Poly>> = gens
        .into_iter()
        .filter(|v| !v_is_zero(v))
        .map(|v| v_monic(v, base))
        .collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if let (Some((pi, _, _)), Some((pj, _, _))) = (lead(&basis[i]), lead(&basis[j])) {
                if pi == pj {
                    pending.insert((i, j));
                }
            }
        }
    }

    while !pending.is_empty() {
        // Normal selection: smallest lcm of lead monomials, ties by index.
        let mut best: Option<((usize, Mono), (usize, usize))> = None;
        for &(i, j) in &pending {
            let (pi, mi, _) = lead(&basis[i]).unwrap();
            let (_, mj, _) = lead(&basis[j]).unwrap();
            let l = mi.lcm(mj);
            let key = (pi, l);
            let smaller = match &best {
                None => true,
                Some((bk, _)) => {
                    term_cmp((key.0, &key.1), (bk.0, &bk.1)) == Ordering::Less
                }
            };
            if smaller {
                best = Some((key, (i, j)));
            }
        }
        let ((lp, lm), (i, j)) = best.unwrap();
        pending.remove(&(i, j));

        // Chain criterion: an intermediate lead dividing the lcm with both
        // side pairs already handled makes this pair redundant.
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            if let Some((kp, km, _)) = lead(g) {
                if kp == lp && km.divides(&lm) {
                    let a = (i.min(k), i.max(k));
                    let b = (j.min(k), j.max(k));
                    if !pending.contains(&a) && !pending.contains(&b) {
                        skip = true;
                        break;
                    }
                }
            }
        }
        if skip {
            continue;
        }

        let (_, mi, _) = lead(&basis[i]).unwrap();
        let (_, mj, _) = lead(&basis[j]).unwrap();
        let (fi, fj) = (mi.div(&lm), mj.div(&lm));
        let one = base.one();
        let s = v_sub_scaled(
            &v_mul_term(&basis[i], &fi, &one, base),
            &basis[j],
            &fj,
            &one,
            base,
        );
        let nf = reduce(s, &basis, None, base);
        if !v_is_zero(&nf) {
            let nf = v_monic(nf, base);
            let (np, _, _) = lead(&nf).unwrap();
            let idx = basis.len();
            basis.push(nf);
            for k in 0..idx {
                if let Some((kp, _, _)) = lead(&basis[k]) {
                    if kp == np {
                        pending.insert((k, idx));
                    }
                }
            }
        }
    }

    interreduce(basis, base)
}

fn interreduce(mut basis: Vec<Vec<Poly>>, base: &BaseRing) -> Vec<Vec<Poly>> {
    // Minimalize: drop vectors whose lead is divisible by another lead.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (pi, mi) = {
            let (p, m, _) = lead(&basis[i]).unwrap();
            (p, m.clone())
        };
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (pj, mj, _) = lead(&basis[j]).unwrap();
            if pi == pj && mj.divides(&mi) && (mi != *mj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Vec<Poly>> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(v, k)| if k { Some(v) } else { None })
        .collect();

    // Tail-reduce to a fixpoint.
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Vec<Poly>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let red = reduce(minimal[i].clone(), &others, None, base);
            if red != minimal[i] {
                minimal[i] = v_monic(red, base);
                changed = true;
            }
        }
        minimal.retain(|v| !v_is_zero(v));
        if !changed {
            break;
        }
    }

    minimal.sort_by(|a, b| {
        let (pa, ma, _) = lead(a).unwrap();
        let (pb, mb, _) = lead(b).unwrap();
        term_cmp((pa, ma), (pb, mb))
    });
    minimal
}

/// A Gröbner basis of the graph `{(A v ; v)}` of a list of columns in
/// `R^m`, supporting syzygy extraction and membership solving.
pub(crate) struct GraphBasis {
    m: usize,
    s: usize,
    base: BaseRing,
    gb: Vec<Vec<Poly>>,
}

impl GraphBasis {
    /// `cols`: the columns of the matrix, each of length `m`.
    pub(crate) fn new(cols: &[Vec<Poly>], m: usize, nvars: usize, base: &BaseRing) -> Self {
        let s = cols.len();
        let mut graphs: Vec<Vec<Poly>> = Vec::with_capacity(s);
        for (j, col) in cols.iter().enumerate() {
            debug_assert_eq!(col.len(), m);
            let mut v = col.clone();
            for k in 0..s {
                if k == j {
                    v.push(Poly::constant(base.one(), nvars, base));
                } else {
                    v.push(Poly::zero());
                }
            }
            graphs.push(v);
        }
        let gb = module_groebner(graphs, base);
        GraphBasis {
            m,
            s,
            base: base.clone(),
            gb,
        }
    }

    /// Generators of the syzygy module `{v : A v = 0}` of the columns.
    pub(crate) fn syzygies(&self) -> Vec<Vec<Poly>> {
        let mut out = Vec::new();
        for g in &self.gb {
            match lead(g) {
                Some((p, _, _)) if p >= self.m => {
                    debug_assert!(g[..self.m].iter().all(|x| x.is_zero()));
                    out.push(g[self.m..].to_vec());
                }
                _ => {}
            }
        }
        out
    }

    /// A coefficient vector `x` with `A x = target`, if the target lies in
    /// the column span.
    pub(crate) fn solve(&self, target: &[Poly]) -> Option<Vec<Poly>> {
        debug_assert_eq!(target.len(), self.m);
        let mut aug = target.to_vec();
        aug.extend(std::iter::repeat(Poly::zero()).take(self.s));
        let red = reduce(aug, &self.gb, Some(self.m), &self.base);
        if red[..self.m].iter().all(|p| p.is_zero()) {
            Some(red[self.m..].iter().map(|p| p.neg(&self.base)).collect())
        } else {
            None
        }
    }
}
