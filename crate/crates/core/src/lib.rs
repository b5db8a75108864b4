pub mod braid;
pub mod document;
pub mod exec;
pub mod floer;
pub mod homalg;
pub mod invariants;
pub mod repvar;
