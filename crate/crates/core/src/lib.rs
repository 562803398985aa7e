//! Exact commutative algebra for module classification over noetherian rings.
//!
//! The library computes with finitely presented modules over a fixed family of
//! ground rings — the integers, integers modulo `n`, and polynomial rings over
//! `QQ` or a prime field (optionally modulo an ideal) — and exposes the
//! spectrum-side invariants that classify subcategories of the module
//! category:
//!
//! * canonical ideal arithmetic (Gröbner bases over fields, gcd forms over
//!   `ZZ` and `ZZ/n`), quotients, saturations, radical membership
//!   ([`kernel`]);
//! * presentations, Smith normal forms, syzygies, `Hom`/`Ext`, free
//!   resolutions and torsion submodules ([`modules`]);
//! * supports, associated primes, prime filtrations and the subquotient
//!   preorder on spectral objects ([`spectrum`]);
//! * torsion pairs attached to specialization-closed sets, Bass-number
//!   criteria for cosyzygy data, and an independent divisible-group oracle
//!   over `ZZ` ([`localalg`]);
//! * membership tests for Serre, torsion, torsion-free, 1-resolving and
//!   cosyzygy-constrained families ([`classify`]);
//! * exhaustive verification of the classification bijections over finite
//!   universes of modules ([`finiverse`]);
//! * seeded, reproducible verification suites with serialisable reports
//!   ([`suites`]).
//!
//! All arithmetic is exact (big integers and rationals); every randomised
//! entry point takes an explicit seed and produces byte-stable reports.

pub mod classify;
pub mod error;
pub mod finiverse;
pub mod kernel;
pub mod localalg;
pub mod modules;
pub mod spectrum;
pub mod suites;

pub use classify::{GSequence, GeneratorWitness, PointSet, Provenance, ValidationReport, Verdict};
pub use error::{Error, Result};
pub use finiverse::{
    enumerate_universe, BijectionKind, BijectionReport, ClosedFamily, ClosureFlags,
    FiniteUniverse, ModuleClass, SensitivityReport,
};
pub use kernel::coeff::BaseRing;
pub use kernel::ideal::Ideal;
pub use kernel::ring::{Ring, RingElement};
pub use modules::matrix::Matrix;
pub use modules::presentation::{ModuleMap, ModulePresentation, ShortExactSequence};
pub use localalg::divisible::DivisibleGroup;
pub use localalg::{BassTable, TorsionDecomposition};
pub use modules::smith::SmithForm;
pub use spectrum::{Certification, PrimeFiltration, PrimeIdeal, SpecSet};
pub use suites::{run_suite, SuiteConfig, SuiteKind, SuiteReport};
