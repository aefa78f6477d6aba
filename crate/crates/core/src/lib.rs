//! Quantum LDPC codes from products of chain complexes over F2.
//!
//! Seed complexes come from [`complex`]; [`product`] forms tensor, balanced
//! and fiber-bundle products; [`css`] and [`distance`] turn a grade into a
//! code and bound its distance; [`architecture`] checks a product against a
//! modular layout. [`io`] reads and writes the JSON documents and matrix
//! formats used by the command-line tool.

pub mod architecture;
pub mod complex;
pub mod css;
pub mod distance;
pub mod gf2;
pub mod io;
pub mod product;
