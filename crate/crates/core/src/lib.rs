//! Linear-programming lower bounds for lattice-periodic pair energies.
//!
//! The library periodizes Gaussian pair potentials over a lattice, evaluates
//! the resulting energies of finite point configurations on the torus, and
//! constructs explicit interpolating functions whose conditional positive
//! semidefiniteness turns them into sharp linear-programming lower bounds for
//! the 4-point and 6-point hexagonal configurations.  A certificate suite
//! replays the supporting inequalities as finite numeric checks, and a
//! gradient-descent optimizer provides an independent sanity oracle.

pub mod energy;
pub mod interpolants;
pub mod lattice;
pub mod moments;
pub mod optimizer;
pub mod sympoly;
pub mod theta;
pub mod verify;
