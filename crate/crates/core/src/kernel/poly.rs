//! Raw multivariate polynomials: exponent vectors, monomial orders, and
//! order-aware arithmetic.
//!
//! A [`Poly`] is a list of `(monomial, coefficient)` terms kept sorted in
//! descending order under whichever [`MonoOrder`] the caller is working with.
//! Scalar rings (`ZZ`, `ZZ/n`) are the zero-variable case: every monomial is
//! the empty exponent vector and a polynomial is just a constant.
//!
//! The public ring layer always stores terms under graded reverse
//! lexicographic order with variables compared in declaration order;
//! elimination orders are used internally for ideal quotients, saturations
//! and intersections.

use super::coeff::{BaseRing, Coeff};
use std::cmp::Ordering;
use std::fmt::Write as _;

/// An exponent vector: one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Mono {
        Mono(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Mono {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }

    pub fn deg(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn div(&self, other: &Mono) -> Mono {
        debug_assert!(self.divides(other));
        Mono(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic comparison of exponent slices: higher total
/// degree wins; on equal degree the monomial with the smaller exponent in the
/// last position where they differ is the larger one.
fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// A monomial order on a ring with a fixed number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoOrder {
    /// Graded reverse lexicographic, variables in declaration order.
    Grevlex,
    /// Block order eliminating the last `aux` variables: compare the
    /// auxiliary block under grevlex first, then the main block.  Monomials
    /// free of the auxiliary variables are smaller than any that use them,
    /// so auxiliary variables can be eliminated by discarding basis elements
    /// that mention them.
    ElimLast { aux: usize },
}

impl MonoOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            MonoOrder::Grevlex => grevlex(&a.0, &b.0),
            MonoOrder::ElimLast { aux } => {
                let split = a.0.len() - aux;
                grevlex(&a.0[split..], &b.0[split..])
                    .then_with(|| grevlex(&a.0[..split], &b.0[..split]))
            }
        }
    }
}

/// A raw polynomial: terms sorted descending under the order the caller is
/// maintaining, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub terms: Vec<(Mono, Coeff)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Coeff, nvars: usize, base: &BaseRing) -> Poly {
        Poly::normalized(vec![(Mono::one(nvars), c)], MonoOrder::Grevlex, base)
    }

    pub fn var(i: usize, nvars: usize, base: &BaseRing) -> Poly {
        Poly {
            terms: vec![(Mono::var(i, nvars), base.one())],
        }
    }

    /// Sorts, merges duplicate monomials, normalizes coefficients, drops
    /// zeros.
    pub fn normalized(mut terms: Vec<(Mono, Coeff)>, ord: MonoOrder, base: &BaseRing) -> Poly {
        terms.sort_by(|x, y| ord.cmp(&y.0, &x.0));
        let mut out: Vec<(Mono, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = base.normalize(c);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = base.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| {
            let c = base.normalize(c.clone());
            !c.is_zero()
        });
        for (_, c) in out.iter_mut() {
            *c = base.normalize(c.clone());
        }
        Poly { terms: out }
    }

    /// Re-sorts an already-normalized polynomial under a different order.
    pub fn resorted(&self, ord: MonoOrder) -> Poly {
        let mut terms = self.terms.clone();
        terms.sort_by(|x, y| ord.cmp(&y.0, &x.0));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value of a constant polynomial (zero if no terms).
    pub fn constant_value(&self, base: &BaseRing) -> Option<Coeff> {
        if self.is_zero() {
            Some(base.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn lead(&self) -> Option<(&Mono, &Coeff)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.first().map(|(m, _)| m.0.len())
    }

    pub fn add(&self, other: &Poly, ord: MonoOrder, base: &BaseRing) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::normalized(terms, ord, base)
    }

    pub fn neg(&self, base: &BaseRing) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), base.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly, ord: MonoOrder, base: &BaseRing) -> Poly {
        self.add(&other.neg(base), ord, base)
    }

    pub fn mul(&self, other: &Poly, ord: MonoOrder, base: &BaseRing) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), base.mul(ca, cb)));
            }
        }
        Poly::normalized(terms, ord, base)
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Mono, c: &Coeff, ord: MonoOrder, base: &BaseRing) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(ma, ca)| (ma.mul(m), base.mul(ca, c)))
            .collect();
        Poly::normalized(terms, ord, base)
    }

    pub fn scale(&self, c: &Coeff, ord: MonoOrder, base: &BaseRing) -> Poly {
        self.mul_term(&Mono::one(self.nvars().unwrap_or(0)), c, ord, base)
    }

    pub fn pow(&self, e: u32, ord: MonoOrder, base: &BaseRing, nvars: usize) -> Poly {
        let mut acc = Poly::constant(base.one(), nvars, base);
        for _ in 0..e {
            acc = acc.mul(self, ord, base);
        }
        acc
    }

    /// Appends `extra` fresh trailing variables (exponent zero everywhere).
    pub fn extend_vars(&self, extra: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat(0).take(extra));
                    (Mono(e), c.clone())
                })
                .collect(),
        }
    }

    /// True when no term uses any of the last `aux` variables.
    pub fn free_of_last(&self, aux: usize) -> bool {
        self.terms.iter().all(|(m, _)| {
            let split = m.0.len() - aux;
            m.0[split..].iter().all(|&e| e == 0)
        })
    }

    /// Drops the last `aux` variables; requires `free_of_last(aux)`.
    pub fn restrict_vars(&self, aux: usize) -> Poly {
        debug_assert!(self.free_of_last(aux));
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let split = m.0.len() - aux;
                    (Mono(m.0[..split].to_vec()), c.clone())
                })
                .collect(),
        }
    }

    /// Renders with the given variable names, e.g. `x^2*y - 3*y + 1/2`.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let c_str = c.to_string();
            let (neg, mag) = match c_str.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c_str),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mono_str = {
                let mut parts = Vec::new();
                for (v, &e) in m.0.iter().enumerate() {
                    if e == 1 {
                        parts.push(names[v].clone());
                    } else if e > 1 {
                        parts.push(format!("{}^{}", names[v], e));
                    }
                }
                parts.join("*")
            };
            if mono_str.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono_str);
            } else {
                let _ = write!(s, "{mag}*{mono_str}");
            }
        }
        s
    }
}

/// One step of multivariate division: reduces the largest term of `f` that is
/// divisible by some leading monomial in `gens`.  Returns `None` when `f` is
/// fully reduced.  Requires a field base.
fn reduce_step(f: &Poly, gens: &[Poly], ord: MonoOrder, base: &BaseRing) -> Option<Poly> {
    for (m, c) in &f.terms {
        for g in gens {
            if let Some((gm, gc)) = g.lead() {
                if gm.divides(m) {
                    let factor = base
                        .div(c, gc)
                        .expect("field base required for polynomial reduction");
                    let sub = g.mul_term(&gm.div(m), &factor, ord, base);
                    return Some(f.sub(&sub, ord, base));
                }
            }
        }
    }
    None
}

/// Full normal form of `f` against `gens` under `ord` (field base).
pub fn normal_form(f: &Poly, gens: &[Poly], ord: MonoOrder, base: &BaseRing) -> Poly {
    let mut cur = f.clone();
    while let Some(next) = reduce_step(&cur, gens, ord, base) {
        cur = next;
    }
    cur
}
