//! Exact Kauffman bracket skein module calculator for links in `F x S^1`,
//! where `F` is a disk, an annulus or a disk with two holes.

pub mod ring;
pub mod words;
pub mod reduction;
pub mod diagram;
pub mod state_sum;
pub mod oracle;
