//! Spectra of normal subgroups of finite groups and their coarse lower
//! topologies.
//!
//! A [`lattice::NormalLattice`] holds every normal subgroup of a
//! [`group::Group`]. A [`spectra::Spectrum`] picks out a class of proper
//! members, and [`topology::build_space`] turns it into a finite space whose
//! closed sets are generated by the hulls `V(x)`. [`suite::run_suite`] checks
//! the structural statements about these spaces over a corpus of groups and
//! maps, and [`report`] renders the results.
//!
//! ```
//! use std::sync::Arc;
//! use normspec::{build_space, catalog, compute_spectrum, enumerate_normal_subgroups, Caps, SpectrumKind};
//!
//! let l = Arc::new(enumerate_normal_subgroups(catalog::group("A5xA5").unwrap()));
//! let spec = compute_spectrum(&l, SpectrumKind::Spec, &Default::default()).unwrap();
//! assert_eq!(spec.len(), 2);
//! assert!(build_space(&spec, &Caps::default()).t1().holds);
//! ```

pub mod bitset;
pub mod catalog;
pub mod config;
pub mod error;
pub mod gmodule;
pub mod group;
pub mod induced;
pub mod lattice;
pub mod report;
pub mod spectra;
pub mod suite;
pub mod topology;

pub use config::Caps;
pub use error::{Error, Result};
pub use group::{Group, GroupHom};
pub use lattice::{enumerate_normal_subgroups, MemberId, NormalLattice};
pub use spectra::{compute_spectrum, Spectrum, SpectrumKind};
pub use suite::{run_suite, TheoremVerdict, Verdict};
pub use topology::{build_space, FiniteSpace};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/groups.md")]
mod book_groups {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/lattice.md")]
mod book_lattice {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectra.md")]
mod book_spectra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/topology.md")]
mod book_topology {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/modules.md")]
mod book_modules {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/induced-maps.md")]
mod book_induced_maps {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/suite.md")]
mod book_suite {}
