//! Raw element-level arithmetic on explicit finite modules, used to verify
//! the fast multiset rules by exhaustion on small universes before those
//! rules are enabled.
//!
//! An explicit module is a direct sum of cyclic factors with every element
//! materialized as a tuple of encoded coordinates: integers mod `q` for
//! scalar rings, digit strings base `p` for truncated polynomial rings.
//! All searches (submodule lattices, quotient classification, essentiality)
//! work purely on these encodings.

use std::collections::BTreeSet;

/// Coordinate arithmetic for one cyclic factor.
#[derive(Debug, Clone)]
pub(crate) enum FactorKind {
    /// `Z/q` inside a scalar ring: elements are integers `0..q`.
    Scalar { q: u64 },
    /// `F_p[x]/(x^digits)`: elements are `digits` base-`p` digits encoded
    /// into one integer, least significant digit first.
    PowerSeries { p: u64, digits: u32 },
}

/// One cyclic factor together with the universe prime it belongs to.
#[derive(Debug, Clone)]
pub(crate) struct Factor {
    pub kind: FactorKind,
    pub card: u64,
    pub prime: usize,
    /// Power of the prime generator that annihilates this factor.
    pub power: u32,
}

/// An explicit finite module: a list of cyclic factors plus the scalar
/// value of each universe prime generator (used for cross-prime action
/// over scalar rings).
#[derive(Debug, Clone)]
pub(crate) struct Explicit {
    pub factors: Vec<Factor>,
    /// For scalar rings: the integer generator of each universe prime.
    /// For truncated polynomial rings this is unused (single prime `x`).
    pub prime_gens: Vec<u64>,
    /// Residue cardinality of each universe prime.
    pub residue_cards: Vec<u64>,
    /// Whether coordinates are scalar (`Z/n`-type) or power series.
    pub scalar_ring: bool,
}

pub(crate) type Elt = Vec<u64>;

impl Explicit {
    pub fn cardinality(&self) -> u64 {
        self.factors.iter().map(|f| f.card).product()
    }

    pub fn zero(&self) -> Elt {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (&x, &y))| match f.kind {
                FactorKind::Scalar { q } => (x + y) % q,
                FactorKind::PowerSeries { p, digits } => {
                    let mut out = 0u64;
                    let mut mult = 1u64;
                    let (mut xr, mut yr) = (x, y);
                    for _ in 0..digits {
                        out += ((xr + yr) % p) * mult;
                        xr /= p;
                        yr /= p;
                        mult *= p;
                    }
                    out
                }
            })
            .collect()
    }

    /// Multiplication by the generator of universe prime `idx`.
    pub fn times_gen(&self, idx: usize, a: &Elt) -> Elt {
        self.factors
            .iter()
            .zip(a)
            .map(|(f, &x)| match f.kind {
                FactorKind::Scalar { q } => (x * (self.prime_gens[idx] % q)) % q,
                FactorKind::PowerSeries { p, digits } => {
                    // The only prime generator is x: shift digits up.
                    let x_shifted = x * p;
                    x_shifted % p.pow(digits)
                }
            })
            .collect()
    }

    /// All elements in deterministic (odometer) order.
    pub fn all_elements(&self) -> Vec<Elt> {
        let mut out = vec![self.zero()];
        for (i, f) in self.factors.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * f.card as usize);
            for v in 0..f.card {
                for e in &out {
                    let mut e = e.clone();
                    e[i] = v;
                    next.push(e);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Additive (and, over polynomial rings, `x`-multiplicative) closure of
    /// a generating set: the submodule it spans.
    pub fn closure(&self, gens: &[Elt]) -> BTreeSet<Elt> {
        let mut set: BTreeSet<Elt> = BTreeSet::new();
        set.insert(self.zero());
        let mut frontier: Vec<Elt> = Vec::new();
        for g in gens {
            if set.insert(g.clone()) {
                frontier.push(g.clone());
            }
        }
        while let Some(e) = frontier.pop() {
            let mut reached: Vec<Elt> = set.iter().map(|s| self.add(s, &e)).collect();
            if !self.scalar_ring {
                reached.push(self.times_gen(0, &e));
            }
            for r in reached {
                if set.insert(r.clone()) {
                    frontier.push(r);
                }
            }
        }
        set
    }

    /// Every submodule, by breadth-first closure of element extensions;
    /// deterministic order.
    pub fn submodules(&self) -> Vec<BTreeSet<Elt>> {
        let elements = self.all_elements();
        let mut seen: BTreeSet<Vec<Elt>> = BTreeSet::new();
        let zero_only = self.closure(&[]);
        seen.insert(zero_only.iter().cloned().collect());
        let mut work: Vec<BTreeSet<Elt>> = vec![zero_only];
        let mut out = Vec::new();
        while let Some(s) = work.pop() {
            out.push(s.clone());
            for x in &elements {
                if s.contains(x) {
                    continue;
                }
                let mut gens: Vec<Elt> = s.iter().cloned().collect();
                gens.push(x.clone());
                let bigger = self.closure(&gens);
                let key: Vec<Elt> = bigger.iter().cloned().collect();
                if seen.insert(key) {
                    work.push(bigger);
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Isomorphism class of `S/T` (`T ⊆ S` submodules): the partition of
    /// prime-power exponents at each universe prime, sorted descending,
    /// recovered from the sizes of the kernels of powers of each prime
    /// generator.
    pub fn quotient_class(&self, s: &BTreeSet<Elt>, t: &BTreeSet<Elt>) -> Vec<Vec<u32>> {
        let nprimes = self.residue_cards.len();
        let mut out = Vec::with_capacity(nprimes);
        for idx in 0..nprimes {
            let rho = self.residue_cards[idx];
            // kernel_sizes[m] = #{x in S : g^m x in T}
            let mut kernel_sizes: Vec<u64> = Vec::new();
            let mut m = 0u32;
            loop {
                let mut count = 0u64;
                for x in s {
                    let mut y = x.clone();
                    for _ in 0..m {
                        y = self.times_gen(idx, &y);
                    }
                    if t.contains(&y) {
                        count += 1;
                    }
                }
                if let Some(&prev) = kernel_sizes.last() {
                    if count == prev {
                        break;
                    }
                }
                kernel_sizes.push(count);
                m += 1;
                if m > 64 {
                    panic!("prime-power filtration failed to stabilise");
                }
            }
            // parts_at_least[m] = number of partition parts >= m.
            let mut parts_at_least: Vec<u32> = Vec::new();
            for w in kernel_sizes.windows(2) {
                let ratio = w[1] / w[0];
                assert_eq!(w[1] % w[0], 0, "kernel tower sizes must divide");
                let mut c = 0u32;
                let mut r = ratio;
                while r > 1 {
                    assert_eq!(r % rho, 0, "kernel ratio must be a residue power");
                    r /= rho;
                    c += 1;
                }
                parts_at_least.push(c);
            }
            let total = parts_at_least.first().copied().unwrap_or(0);
            let mut partition = Vec::with_capacity(total as usize);
            for i in 1..=total {
                let part = parts_at_least.iter().filter(|&&c| c >= i).count() as u32;
                partition.push(part);
            }
            partition.sort_unstable_by(|a, b| b.cmp(a));
            out.push(partition);
        }
        out
    }

    /// Is `s` an essential submodule: every nonzero element generates a
    /// submodule meeting `s` nontrivially?
    pub fn is_essential(&self, s: &BTreeSet<Elt>) -> bool {
        let zero = self.zero();
        for x in self.all_elements() {
            if x == zero {
                continue;
            }
            let cyc = self.closure(std::slice::from_ref(&x));
            if !cyc.iter().any(|e| *e != zero && s.contains(e)) {
                return false;
            }
        }
        true
    }

    /// Elements killed by `g_idx^power` — the candidates for the image of
    /// a generator of that order under a module map.
    pub fn killed_by(&self, idx: usize, power: u32) -> Vec<Elt> {
        self.all_elements()
            .into_iter()
            .filter(|x| {
                let mut y = x.clone();
                for _ in 0..power {
                    y = self.times_gen(idx, &y);
                }
                y == self.zero()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_plus_z2() -> Explicit {
        Explicit {
            factors: vec![
                Factor {
                    kind: FactorKind::Scalar { q: 4 },
                    card: 4,
                    prime: 0,
                    power: 2,
                },
                Factor {
                    kind: FactorKind::Scalar { q: 2 },
                    card: 2,
                    prime: 0,
                    power: 1,
                },
            ],
            prime_gens: vec![2],
            residue_cards: vec![2],
            scalar_ring: true,
        }
    }

    #[test]
    fn element_arithmetic_and_counts() {
        let m = z4_plus_z2();
        assert_eq!(m.cardinality(), 8);
        assert_eq!(m.all_elements().len(), 8);
        assert_eq!(m.add(&vec![3, 1], &vec![2, 1]), vec![1, 0]);
        assert_eq!(m.times_gen(0, &vec![3, 1]), vec![2, 0]);
    }

    #[test]
    fn submodule_lattice_of_z4_plus_z2() {
        let m = z4_plus_z2();
        // Z/4 ⊕ Z/2 has 8 subgroups: 0, three of order 2, two of order 4
        // (one cyclic, one Klein), Z/4-diagonal of order 4, and the whole.
        let subs = m.submodules();
        assert_eq!(subs.len(), 8, "subgroup count of Z/4 ⊕ Z/2");
        let whole = subs.iter().filter(|s| s.len() == 8).count();
        assert_eq!(whole, 1);
        assert_eq!(subs.iter().filter(|s| s.len() == 4).count(), 3);
        assert_eq!(subs.iter().filter(|s| s.len() == 2).count(), 3);
    }

    #[test]
    fn quotient_classification_recovers_partitions() {
        let m = z4_plus_z2();
        let subs = m.submodules();
        let whole = subs.iter().find(|s| s.len() == 8).unwrap();
        let zero = subs.iter().find(|s| s.len() == 1).unwrap();
        assert_eq!(m.quotient_class(whole, zero), vec![vec![2, 1]]);
        // Quotient by the diagonal Z/2 inside Z/4: cyclic of order 4
        // remains Z/4? — quotient (Z/4 ⊕ Z/2)/<(2,1)> has an element of
        // order 4, so its partition is [2].
        let diag = m.closure(&[vec![2, 1]]);
        assert_eq!(m.quotient_class(whole, &diag), vec![vec![2]]);
    }

    #[test]
    fn essential_submodules_of_a_cyclic_power() {
        let m = Explicit {
            factors: vec![Factor {
                kind: FactorKind::Scalar { q: 4 },
                card: 4,
                prime: 0,
                power: 2,
            }],
            prime_gens: vec![2],
            residue_cards: vec![2],
            scalar_ring: true,
        };
        let subs = m.submodules();
        for s in &subs {
            let essential = m.is_essential(s);
            assert_eq!(
                essential,
                s.len() > 1,
                "in Z/4 every nonzero subgroup is essential"
            );
        }
    }

    #[test]
    fn power_series_coordinates_shift_under_x() {
        let m = Explicit {
            factors: vec![Factor {
                kind: FactorKind::PowerSeries { p: 2, digits: 3 },
                card: 8,
                prime: 0,
                power: 3,
            }],
            prime_gens: vec![0],
            residue_cards: vec![2],
            scalar_ring: false,
        };
        // 1 + x encoded as 0b011 = 3; times x: x + x^2 = 0b110 = 6.
        assert_eq!(m.times_gen(0, &vec![3]), vec![6]);
        assert_eq!(m.times_gen(0, &vec![6]), vec![4]);
        assert_eq!(m.times_gen(0, &vec![4]), vec![0]);
        // F_2[x]/(x^2) sits inside F_2[x]/(x^3) as (x): closure of {x}.
        let sub = m.closure(&[vec![2]]);
        assert_eq!(sub.len(), 4);
        assert!(m.is_essential(&sub));
        assert_eq!(m.quotient_class(&m.closure(&[vec![1]]), &sub), vec![vec![1]]);
    }
}
