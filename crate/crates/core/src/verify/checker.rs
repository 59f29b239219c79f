use std::fmt::Display;

use super::Counterexample;
use crate::combinatorics::SectorBasis;
use crate::sparse::SparseMatrix;
use crate::scalar::Ring;

/// Counts comparisons and keeps the first failure. Once something has
/// failed, later comparisons are skipped.
#[derive(Debug, Default)]
pub struct Checker {
    count: usize,
    failure: Option<Counterexample>,
}

impl Checker {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn failure(&self) -> Option<&Counterexample> {
        self.failure.as_ref()
    }

    pub fn fail(&mut self, check: &str, location: String, expected: String, actual: String) {
        if self.failure.is_none() {
            self.failure = Some(Counterexample { check: check.to_string(), location, expected, actual });
        }
    }

    pub fn eq<T: PartialEq + Display>(&mut self, check: &str, location: impl FnOnce() -> String, expected: &T, actual: &T) -> bool {
        if !self.ok() {
            return false;
        }
        self.count += 1;
        if expected == actual {
            return true;
        }
        self.fail(check, location(), expected.to_string(), actual.to_string());
        false
    }

    pub fn holds(&mut self, check: &str, location: impl FnOnce() -> String, cond: bool, expected: &str, actual: impl FnOnce() -> String) -> bool {
        if !self.ok() {
            return false;
        }
        self.count += 1;
        if !cond {
            self.fail(check, location(), expected.to_string(), actual());
        }
        cond
    }

    /// Entrywise matrix comparison; the location names the first differing
    /// entry through `label`.
    pub fn matrices<R: Ring + Display>(
        &mut self,
        check: &str,
        context: &str,
        expected: &SparseMatrix<R>,
        actual: &SparseMatrix<R>,
        label: &dyn Fn(usize) -> String,
    ) -> bool {
        if !self.ok() {
            return false;
        }
        self.count += 1;
        if expected.nrows() != actual.nrows() || expected.ncols() != actual.ncols() {
            self.fail(
                check,
                context.to_string(),
                format!("{}x{}", expected.nrows(), expected.ncols()),
                format!("{}x{}", actual.nrows(), actual.ncols()),
            );
            return false;
        }
        let Some((r, c)) = expected.first_difference(actual) else {
            return true;
        };
        let mut location = format!("row {}, column {}", label(r), label(c));
        if !context.is_empty() {
            location = format!("{context}: {location}");
        }
        self.fail(check, location, expected.get(r, c).to_string(), actual.get(r, c).to_string());
        false
    }
}

/// Labels matrix indices by the states of a basis.
pub fn state_label(basis: &SectorBasis) -> impl Fn(usize) -> String + '_ {
    |i| basis.state(i).to_string()
}
