pub mod error;
pub mod exactla;
pub mod linsys;
pub mod admissible;
pub mod mbfaces;
pub mod exponent;
pub mod blift;
pub mod chartcalc;
pub mod scatprod;
pub mod io;
pub mod dot;
pub mod cli;
