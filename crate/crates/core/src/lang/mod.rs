//! Agent language: terms, plans, practice declarations and plan patterns.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod term;

pub use ast::{
    AgentProgram, BodyStep, LandmarkDecl, Plan, PlanPattern, Rule, SocialPracticeDecl, StepKind,
    Trigger, TriggerKind,
};
pub use parser::{parse_body, parse_plan_pattern, parse_program, parse_term, ParseError};
pub use print::print_term;
pub use term::{Struct, Term};
