//! Seeded suite runner, field serialization, and report emission.
//!
//! Two suites exist. `kernel` exercises the equality of the kernels of `W^k`
//! and the moment stack on generated potential fields and on random
//! non-potential ones. `identities` evaluates every operator and transform
//! identity the crate implements. Each check yields one [`CheckRecord`];
//! records are sorted by suite and check id so reports are reproducible.

mod anchors;
mod field_io;
mod report;
mod suites;

pub use anchors::ANCHORS;
pub use field_io::{parse_field, serialize_field};
pub use report::{render_report, CheckRecord, Expectation, Format, SuiteResult};
pub use suites::{
    generate_potential, run_suites, separation_witness, suite_identities, suite_kernel,
    SeparationWitness, SuiteKind,
};

use crate::error::{arg_err, Result};
use crate::mutation::Mutation;
use crate::SymField;

/// Parameters shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    pub degree: u32,
    pub samples: usize,
    pub tol_float: f64,
    pub format: Format,
    /// Deliberate corruption of `W^k` or of the recovery formula.
    pub mutation: Option<Mutation>,
    /// Field to use instead of a random one.
    pub field: Option<SymField>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            m: 2,
            k: 1,
            seed: 0,
            degree: 2,
            samples: 20,
            tol_float: 1e-9,
            format: Format::Text,
            mutation: None,
            field: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return arg_err(format!("dimension n must be at least 2, got {}", self.n));
        }
        if self.k > self.m {
            return arg_err(format!("k = {} must not exceed m = {}", self.k, self.m));
        }
        if !(self.tol_float > 0.0 && self.tol_float.is_finite()) {
            return arg_err(format!(
                "tolerance must be positive, got {}",
                self.tol_float
            ));
        }
        if self.samples == 0 {
            return arg_err("samples must be at least 1");
        }
        if let Some(f) = &self.field {
            if f.n() != self.n || f.rank() != self.m {
                return arg_err(format!(
                    "field has n = {}, rank = {} but the configuration asks for n = {}, m = {}",
                    f.n(),
                    f.rank(),
                    self.n,
                    self.m
                ));
            }
        }
        Ok(())
    }

    /// The field under test: the loaded one or a seeded random field.
    pub fn field(&self) -> Result<SymField> {
        match &self.field {
            Some(f) => Ok(f.clone()),
            None => crate::polygauss::random_field(self.n, self.m, self.degree, self.seed),
        }
    }

    pub(crate) fn sub_seed(&self, tag: u64) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(tag.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}
