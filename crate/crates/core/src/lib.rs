//! Space-time rescaling ("bulking") of one-dimensional cellular automata.
//!
//! The crate covers exact evaluation on spatially periodic configurations,
//! `<m, tau, T, s>` transforms, state-map morphisms between automata,
//! decision procedures for global properties, constructors for a zoo of
//! automata, and a bounded search for the simulation quasi-orders.

pub mod automaton;
pub mod config;
pub mod diagram;
pub mod error;
pub mod format;
pub mod morphism;
pub mod property;
pub mod simsearch;
pub mod tm;
pub mod transform;
pub mod zoo;

pub use automaton::{Automaton, Neighborhood, OrbitCycle, State};
pub use config::PeriodicConfig;
pub use error::{Error, Result};
pub use morphism::{MapRole, StateMap};
pub use property::Verdict;
pub use simsearch::{Relation, SearchBounds, SimulationWitness};
pub use tm::TuringMachine;
pub use transform::Transform;
