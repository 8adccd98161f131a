//! Runs the code blocks of the guide in `book/src` as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/gf2.md")]
pub mod gf2 {}

#[doc = include_str!("../../../book/src/encoding.md")]
pub mod encoding {}

#[doc = include_str!("../../../book/src/format.md")]
pub mod format {}

#[doc = include_str!("../../../book/src/ratio.md")]
pub mod ratio {}

#[doc = include_str!("../../../book/src/synthetic.md")]
pub mod synthetic {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
