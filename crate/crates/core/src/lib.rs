//! A BDI agent runtime with landmark-based social-practice meta-deliberation,
//! a metainterpreter for durative, joint and path-guided execution, and a
//! deterministic care-robot simulation.

pub mod env;
pub mod lang;
pub mod logic;
pub mod meta;
pub mod practice;
pub mod runtime;
pub mod sim;
