#![allow(clippy::needless_range_loop)]

pub mod curve;
pub mod hull;
pub mod linear;
pub mod matrix;
pub mod phylo;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod subsets;

mod linalg;
