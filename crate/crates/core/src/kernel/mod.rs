//! Exact ring and ideal arithmetic: the computational substrate every other
//! layer builds on.

pub mod coeff;
pub mod factor;
pub mod groebner;
pub mod ideal;
pub mod poly;
pub mod ring;
