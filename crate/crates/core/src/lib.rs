//! Slot-offering policies for single-day appointment booking when customers
//! choose among the slot types they are shown.
//!
//! The crate covers the choice model ([`model`]), exact dynamic programs for
//! non-sequential, sequential and full-information offering ([`dp`]), the
//! fluid relaxation ([`fluid`]), heuristic policies ([`policies`]), Monte
//! Carlo simulation ([`sim`]) and the experiment runners ([`experiments`]).

pub mod dp;
pub mod error;
pub mod experiments;
pub mod fluid;
pub mod model;
pub mod policies;
pub mod sim;

pub use error::{Error, Result};
pub use model::{CanonicalModel, ChoiceMatrix, Instance, OfferAction, OfferSequence, SlotSet};
