pub mod duality;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod screen;
pub mod singular;
pub mod transport;
pub mod volume;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality_guide {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures_guide {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/screens.md")]
pub mod screens_guide {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/transport.md")]
pub mod transport_guide {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/singular.md")]
pub mod singular_guide {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_guide {}
