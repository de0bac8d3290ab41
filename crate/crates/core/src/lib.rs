pub mod arena;
pub mod board;
pub mod epd;
pub mod eval;
pub mod expert;
pub mod ga;
pub mod genome;
pub mod par;
pub mod search;
