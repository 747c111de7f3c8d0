//! Gibbs states of interacting spin-1/2 lattice systems, their
//! von Neumann entropy rates and typical subspaces, and block compression of
//! a thermal source into its typical subspace.
//!
//! The pipeline runs `lattice` → `interaction` → `hamiltonian` → `gibbs` →
//! `typicality` → `codec`; the `cli` module drives volume sweeps from a
//! config file and `oracle` holds slow reference implementations.

pub mod cli;
pub mod codec;
pub mod error;
pub mod gibbs;
pub mod hamiltonian;
pub mod interaction;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod typicality;

pub use error::{Error, Result};
pub use gibbs::{diagonalize, GibbsEnsemble, Spectrum, ThermoDensities};
pub use hamiltonian::{assemble_hamiltonian, HermitianOperator};
pub use interaction::{preset_tfim, GroundStateConfig, Interaction, LocalTerm};
pub use lattice::{Configuration, Site, Spin, Volume};
pub use typicality::{HRefPolicy, TypicalSubspace};
