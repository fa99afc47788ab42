//! Executable invariant suites at a chosen problem size, shared by the
//! acceptance target and the command-line `selftest`.

mod suites;

use std::fmt;
use std::time::{Duration, Instant};

/// Problem size, seed and whether to add deliberately failing controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Grid size, and the sample count where a suite sweeps points.
    pub n: usize,
    pub seed: u64,
    pub inject_negative_controls: bool,
}

impl SuiteOptions {
    pub fn full(seed: u64) -> Self {
        SuiteOptions {
            n: 10_000,
            seed,
            inject_negative_controls: false,
        }
    }

    pub fn reduced(seed: u64) -> Self {
        SuiteOptions { n: 2000, ..Self::full(seed) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
    Holds,
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: Bound::AtMost(limit),
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: Bound::AtLeast(limit),
            passed: value >= limit,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: Bound::Within(lo, hi),
            passed: lo <= value && value <= hi,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: Bound::Holds,
            passed: ok,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bound {
            Bound::AtMost(l) => write!(f, "{} = {:.3e} (≤ {:e})", self.name, self.value, l),
            Bound::AtLeast(l) => write!(f, "{} = {:.3e} (≥ {:e})", self.name, self.value, l),
            Bound::Within(lo, hi) => write!(f, "{} = {:.4} (in [{lo}, {hi}])", self.name, self.value),
            Bound::Holds => write!(f, "{} = {}", self.name, self.passed),
        }
    }
}

type SuiteFn = fn(&SuiteOptions) -> crate::Result<Vec<Check>>;

/// A named invariant suite with its runtime budget.
#[derive(Clone, Copy)]
pub struct Suite {
    pub id: usize,
    pub name: &'static str,
    pub budget: Duration,
    run: SuiteFn,
}

impl fmt::Debug for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Suite").field("id", &self.id).field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub id: usize,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl SuiteOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.within_budget() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
        if let Some(e) = &self.error {
            out.push(format!("error: {e}"));
        }
        if !self.within_budget() {
            out.push(format!("runtime {:.2} s exceeds {:.0} s", self.elapsed.as_secs_f64(), self.budget.as_secs_f64()));
        }
        out
    }
}

pub fn suites() -> Vec<Suite> {
    let s = |id, name, secs, run| Suite {
        id,
        name,
        budget: Duration::from_secs(secs),
        run,
    };
    vec![
        s(1, "clock round trip", 1, suites::clock_round_trip as SuiteFn),
        s(2, "derivative representation", 5, suites::derivative_order),
        s(3, "change-of-variables integral", 10, suites::integral_identity),
        s(4, "isometry and unitarity", 10, suites::isometry),
        s(5, "alpha-semigroup law", 5, suites::semigroup_law),
        s(6, "generator equality", 5, suites::generator_equality),
        s(7, "mild-solution correspondence", 5, suites::mild_correspondence),
        s(8, "conjugacy", 10, suites::conjugacy),
        s(9, "hypercyclic candidate", 30, suites::hypercyclic),
        s(10, "spectral chaos hypotheses", 60, suites::dsw),
        s(11, "orbit invariance", 10, suites::orbit_invariance),
    ]
}

pub fn run_suite(suite: &Suite, options: &SuiteOptions) -> SuiteOutcome {
    let start = Instant::now();
    let (checks, error) = match (suite.run)(options) {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    SuiteOutcome {
        id: suite.id,
        name: suite.name,
        checks,
        error,
        elapsed: start.elapsed(),
        budget: suite.budget,
    }
}

pub fn run_all(options: &SuiteOptions) -> Vec<SuiteOutcome> {
    suites().iter().map(|s| run_suite(s, options)).collect()
}
