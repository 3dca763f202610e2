pub mod comodule;
pub mod fixtures;
pub mod format;
pub mod graded;
pub mod harness;
pub mod homological;
pub mod hopf;
pub mod linalg;
pub mod par;
