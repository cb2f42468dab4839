use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

/// Absolute-plus-relative tolerance applied to every gap inequality:
/// `tol = INEQUALITY_TOL * (1 + lambda_1)`.
pub const INEQUALITY_TOL: f64 = 1e-7;

/// Relative tolerance under which two gaps count as equal when checking
/// equality diagnostics.
pub const EQUALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Satisfied,
    NotSatisfied,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "inequality holds")]
    InequalityHolds,
    #[serde(rename = "inequality violated")]
    InequalityViolated,
    #[serde(rename = "hypothesis unmet - no claim")]
    NoClaim,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::InequalityHolds => "inequality holds",
            Verdict::InequalityViolated => "inequality violated",
            Verdict::NoClaim => "hypothesis unmet - no claim",
        }
    }
}

/// Direction claimed between the gap before and after the surgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `lambda1_before <= lambda1_after`
    NonDecreasing,
    /// `lambda1_before >= lambda1_after`
    NonIncreasing,
}

fn finite_or_text<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn quantities_map<S: Serializer>(
    q: &BTreeMap<String, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Wrapped(#[serde(serialize_with = "finite_or_text")] f64);
    s.collect_map(q.iter().map(|(k, v)| (k, Wrapped(*v))))
}

/// Outcome of checking one theorem on one concrete graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub graph_digest: String,
    pub surgery: String,
    #[serde(serialize_with = "finite_or_text")]
    pub lambda1_before: f64,
    #[serde(serialize_with = "finite_or_text")]
    pub lambda1_after: f64,
    pub multiplicity_before: usize,
    pub multiplicity_after: usize,
    pub claim: Claim,
    pub hypothesis: Hypothesis,
    /// Evaluated hypothesis quantities, e.g. criterion sides.
    #[serde(serialize_with = "quantities_map")]
    pub quantities: BTreeMap<String, f64>,
    pub equality_observed: bool,
    /// Whether the eigenspace condition tied to equality fires, when the
    /// theorem has one.
    pub equality_diagnostic: Option<bool>,
    /// `Some(false)` flags an observed equality that contradicts the
    /// diagnostic (only for "if and only if" statements).
    pub diagnostic_consistent: Option<bool>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Builds a report from the two gaps; fills in equality and verdict.
    pub fn new(
        theorem: &str,
        graph_digest: String,
        surgery: String,
        before: (f64, usize),
        after: (f64, usize),
        claim: Claim,
        hypothesis: Hypothesis,
    ) -> Self {
        let tolerance = INEQUALITY_TOL * (1.0 + before.0.abs());
        let holds = match claim {
            Claim::NonDecreasing => before.0 <= after.0 + tolerance,
            Claim::NonIncreasing => before.0 + tolerance >= after.0,
        };
        let verdict = match (hypothesis, holds) {
            (Hypothesis::Satisfied, true) => Verdict::InequalityHolds,
            (Hypothesis::Satisfied, false) => Verdict::InequalityViolated,
            _ => Verdict::NoClaim,
        };
        VerificationReport {
            theorem: theorem.to_string(),
            graph_digest,
            surgery,
            lambda1_before: before.0,
            lambda1_after: after.0,
            multiplicity_before: before.1,
            multiplicity_after: after.1,
            claim,
            hypothesis,
            quantities: BTreeMap::new(),
            equality_observed: gaps_equal(before.0, after.0),
            equality_diagnostic: None,
            diagnostic_consistent: None,
            verdict,
            tolerance,
            seed: None,
            notes: Vec::new(),
        }
    }

    /// Report for a surgery whose comparison is undefined (e.g. the result
    /// is disconnected).
    pub fn not_applicable(
        theorem: &str,
        graph_digest: String,
        surgery: String,
        before: (f64, usize),
        note: &str,
    ) -> Self {
        let mut r = VerificationReport::new(
            theorem,
            graph_digest,
            surgery,
            before,
            (f64::NAN, 0),
            Claim::NonIncreasing,
            Hypothesis::NotApplicable,
        );
        r.equality_observed = false;
        r.notes.push(note.to_string());
        r
    }

    pub fn with_quantity(mut self, name: &str, value: f64) -> Self {
        self.quantities.insert(name.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// One-line JSON record.
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn gaps_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUALITY_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Verdict counts for a batch of reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub violated: usize,
    pub no_claim: usize,
    pub inconsistent_diagnostics: usize,
}

impl Summary {
    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Self {
        let mut s = Summary::default();
        for r in reports {
            s.total += 1;
            match r.verdict {
                Verdict::InequalityHolds => s.holds += 1,
                Verdict::InequalityViolated => s.violated += 1,
                Verdict::NoClaim => s.no_claim += 1,
            }
            if r.diagnostic_consistent == Some(false) {
                s.inconsistent_diagnostics += 1;
            }
        }
        s
    }
}
