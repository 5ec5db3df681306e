pub mod closure;
pub mod generators;
pub mod graph;
pub mod oracle;
mod outcome;
pub mod recurrence;
pub mod reduction;
pub mod search;

pub use outcome::Outcome;

#[cfg(test)]
mod test_util;
