//! Gröbner bases over field coefficients via Buchberger's algorithm.
//!
//! Pair selection follows the normal strategy (smallest lcm under the active
//! order, ties broken by generator indices) and applies the two classical
//! elimination criteria: coprime leading monomials, and the chain criterion
//! that discards a pair whose lcm is covered by an already-settled third
//! generator.  The final basis is fully interreduced, monic, and sorted by
//! leading monomial, so equal ideals always produce identical bases.

use super::coeff::BaseRing;
use super::poly::{normal_form, Mono, MonoOrder, Poly};
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
///
/// Requires a field base.  The zero ideal yields an empty basis; the unit
/// ideal yields `[1]`.
pub fn groebner_basis(gens: &[Poly], ord: MonoOrder, base: &BaseRing) -> Vec<Poly> {
    assert!(base.is_field(), "Groebner bases require field coefficients");
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let g = g.resorted(ord);
        if !g.is_zero() {
            basis.push(make_monic(&g, ord, base));
        }
    }
    // Pending S-pairs, deduplicated; the lcm is cached for selection.
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pending.insert((i, j));
        }
    }

    while !pending.is_empty() {
        // Normal strategy: smallest lcm under `ord`, ties by index pair.
        let (&(i, j), lcm) = pending
            .iter()
            .map(|p| {
                let l = lead_mono(&basis[p.0]).lcm(lead_mono(&basis[p.1]));
                (p, l)
            })
            .min_by(|(pa, la), (pb, lb)| match ord.cmp(la, lb) {
                Ordering::Equal => pa.cmp(pb),
                other => other,
            })
            .map(|(p, l)| (p, l))
            .unwrap();
        pending.remove(&(i, j));

        let lt_i = lead_mono(&basis[i]);
        let lt_j = lead_mono(&basis[j]);
        // Criterion 1: coprime leading monomials reduce to zero.
        if lt_i.coprime(lt_j) {
            continue;
        }
        // Criterion 2 (chain): a third generator dividing the lcm whose pairs
        // with both ends are already settled makes this pair redundant.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lead_mono(&basis[k]).divides(&lcm)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        let s = s_poly(&basis[i], &basis[j], &lcm, ord, base);
        let r = normal_form(&s, &basis, ord, base);
        if !r.is_zero() {
            let r = make_monic(&r, ord, base);
            basis.push(r);
            let new = basis.len() - 1;
            for t in 0..new {
                pending.insert((t, new));
            }
        }
    }

    interreduce(basis, ord, base)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn lead_mono(p: &Poly) -> &Mono {
    &p.lead().expect("nonzero basis element").0
}

fn make_monic(p: &Poly, ord: MonoOrder, base: &BaseRing) -> Poly {
    let lc = p.lead().expect("nonzero polynomial").1.clone();
    let inv = base.inv(&lc).expect("field base");
    p.scale(&inv, ord, base)
}

fn s_poly(f: &Poly, g: &Poly, lcm: &Mono, ord: MonoOrder, base: &BaseRing) -> Poly {
    let (ltf, lcf) = f.lead().unwrap();
    let (ltg, lcg) = g.lead().unwrap();
    let a = f.mul_term(
        &ltf.div(lcm),
        &base.inv(lcf).expect("field base"),
        ord,
        base,
    );
    let b = g.mul_term(
        &ltg.div(lcm),
        &base.inv(lcg).expect("field base"),
        ord,
        base,
    );
    a.sub(&b, ord, base)
}

/// Minimalizes and tail-reduces a basis; output is monic and sorted by
/// leading monomial (ascending), which makes reduced bases canonical.
fn interreduce(mut basis: Vec<Poly>, ord: MonoOrder, base: &BaseRing) -> Vec<Poly> {
    basis.retain(|p| !p.is_zero());
    // Minimal generating leads: drop any element whose lead is divisible by
    // another surviving element's lead.
    let mut keep: Vec<Poly> = Vec::new();
    'outer: for i in 0..basis.len() {
        let lt_i = lead_mono(&basis[i]);
        for (j, other) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let lt_j = lead_mono(other);
            if lt_j.divides(lt_i) && (lt_j != lt_i || j < i) {
                continue 'outer;
            }
        }
        keep.push(basis[i].clone());
    }
    // Tail reduction to a fixed point.
    loop {
        let mut changed = false;
        for i in 0..keep.len() {
            let others: Vec<Poly> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let r = normal_form(&keep[i], &others, ord, base);
            if r != keep[i] {
                keep[i] = make_monic(&r, ord, base);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    keep.sort_by(|a, b| ord.cmp(lead_mono(a), lead_mono(b)));
    keep
}

/// True when the basis generates the unit ideal.
pub fn basis_is_unit(basis: &[Poly]) -> bool {
    basis.iter().any(|p| p.is_constant() && !p.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::coeff::Coeff;
    use num_bigint::BigInt;

    fn qq() -> BaseRing {
        BaseRing::Rat
    }

    fn c(v: i64) -> Coeff {
        qq().normalize(Coeff::Int(BigInt::from(v)))
    }

    fn p(terms: Vec<(Vec<u32>, i64)>) -> Poly {
        Poly::normalized(
            terms
                .into_iter()
                .map(|(e, v)| (Mono(e), c(v)))
                .collect(),
            MonoOrder::Grevlex,
            &qq(),
        )
    }

    #[test]
    fn monomial_pair_is_already_reduced() {
        // {x^2, x*y} is its own reduced basis under grevlex.
        let gens = vec![p(vec![(vec![2, 0], 1)]), p(vec![(vec![1, 1], 1)])];
        let gb = groebner_basis(&gens, MonoOrder::Grevlex, &qq());
        assert_eq!(gb, vec![p(vec![(vec![1, 1], 1)]), p(vec![(vec![2, 0], 1)])]);
    }

    #[test]
    fn unit_ideal_detected() {
        // (x, x + 1) = (1).
        let gens = vec![p(vec![(vec![1], 1)]), p(vec![(vec![1], 1), (vec![0], 1)])];
        let gb = groebner_basis(&gens, MonoOrder::Grevlex, &qq());
        assert_eq!(gb, vec![p(vec![(vec![0], 1)])]);
        assert!(basis_is_unit(&gb));
    }

    #[test]
    fn univariate_reduces_to_gcd() {
        // (x^2 - 1, x^3 - 1) = (x - 1) in QQ[x].
        let gens = vec![
            p(vec![(vec![2], 1), (vec![0], -1)]),
            p(vec![(vec![3], 1), (vec![0], -1)]),
        ];
        let gb = groebner_basis(&gens, MonoOrder::Grevlex, &qq());
        assert_eq!(gb, vec![p(vec![(vec![1], 1), (vec![0], -1)])]);
    }

    #[test]
    fn twisted_cubic_basis_is_canonical() {
        // I = (y - x^2, z - x^3) in QQ[x,y,z]; the reduced grevlex basis is
        // {y^2 - x*z, x*y - z, x^2 - y}, listed by ascending leading monomial.
        let gens = vec![
            p(vec![(vec![0, 1, 0], 1), (vec![2, 0, 0], -1)]),
            p(vec![(vec![0, 0, 1], 1), (vec![3, 0, 0], -1)]),
        ];
        let gb = groebner_basis(&gens, MonoOrder::Grevlex, &qq());
        let expect = vec![
            p(vec![(vec![0, 2, 0], 1), (vec![1, 0, 1], -1)]),
            p(vec![(vec![1, 1, 0], 1), (vec![0, 0, 1], -1)]),
            p(vec![(vec![2, 0, 0], 1), (vec![0, 1, 0], -1)]),
        ];
        assert_eq!(gb, expect);
    }

    #[test]
    fn basis_independent_of_generator_order() {
        let a = vec![
            p(vec![(vec![2, 1], 1), (vec![0, 0], -1)]),
            p(vec![(vec![1, 2], 1), (vec![1, 0], -1)]),
        ];
        let b: Vec<Poly> = a.iter().rev().cloned().collect();
        let gb_a = groebner_basis(&a, MonoOrder::Grevlex, &qq());
        let gb_b = groebner_basis(&b, MonoOrder::Grevlex, &qq());
        assert_eq!(gb_a, gb_b);
    }
}
