//! The record printed by the command-line tool, in a plain-text and a JSON
//! rendering.
//!
//! JSON field names are fixed: `input`, `class`, `factors`, `residual`,
//! `reason`, `trace`, `verdict`, `conjecture`. Absent parts are `null`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::gcm::Gcm;
use crate::k2::{conjecture_check, k2, ConjectureCheck, GenPresentation, K2Factor, K2Result,
    SlotKind, Trace, Verdict};
use crate::text::render_factors;

/// Class of one indecomposable block, columns counted from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockClass {
    pub columns: Vec<usize>,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    /// The matrix in the `2 -1; -1 2` text format.
    pub input: String,
    pub class: Vec<BlockClass>,
    pub factors: Option<Vec<K2Factor>>,
    pub residual: Option<GenPresentation>,
    pub reason: Option<String>,
    pub trace: Trace,
    pub verdict: Option<Verdict>,
    pub conjecture: Option<ConjectureCheck>,
}

impl ResultDocument {
    /// Classification only; the trace stays empty.
    pub fn classify(g: &Gcm) -> Self {
        ResultDocument {
            input: g.to_string(),
            class: classes(g),
            factors: None,
            residual: None,
            reason: None,
            trace: Trace::new(),
            verdict: None,
            conjecture: None,
        }
    }

    pub fn k2(g: &Gcm) -> Self {
        let mut doc = Self::classify(g);
        doc.set_result(k2(g));
        doc
    }

    /// The engine's answer together with the conjecture check.
    pub fn conjecture(g: &Gcm) -> Self {
        let mut doc = Self::k2(g);
        let check = conjecture_check(g);
        doc.verdict = Some(check.verdict);
        doc.conjecture = Some(check);
        doc
    }

    fn set_result(&mut self, r: K2Result) {
        match r {
            K2Result::Resolved { factors, trace } => {
                self.factors = Some(factors);
                self.trace = trace;
            }
            K2Result::Unresolved { residual, trace, reason } => {
                self.residual = Some(residual);
                self.reason = Some(reason);
                self.trace = trace;
            }
        }
    }

    pub fn is_unresolved(&self) -> bool {
        self.residual.is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Plain text. The trace is printed only when asked for.
    pub fn to_human(&self, with_trace: bool) -> String {
        let mut out = String::new();
        if self.factors.is_none() && self.residual.is_none() {
            for b in &self.class {
                let cols: Vec<String> = b.columns.iter().map(ToString::to_string).collect();
                writeln!(out, "{{{}}}: {}", cols.join(","), b.class).unwrap();
            }
        }
        if let Some(f) = &self.factors {
            writeln!(out, "{}", render_factors(f)).unwrap();
        }
        if let (Some(p), Some(reason)) = (&self.residual, &self.reason) {
            writeln!(out, "unresolved: {reason}").unwrap();
            writeln!(out, "residual: {p}").unwrap();
        }
        if let Some(c) = &self.conjecture {
            write_conjecture(&mut out, c);
        }
        if with_trace && !self.trace.is_empty() {
            write!(out, "{}", self.trace).unwrap();
        }
        out
    }
}

fn classes(g: &Gcm) -> Vec<BlockClass> {
    g.classify()
        .blocks
        .into_iter()
        .map(|(cols, class)| BlockClass {
            columns: cols.into_iter().map(|c| c + 1).collect(),
            class: class.label().to_string(),
        })
        .collect()
}

fn write_conjecture(out: &mut String, c: &ConjectureCheck) {
    let a = &c.analysis;
    let verdict = match c.verdict {
        Verdict::Agree => "agree",
        Verdict::Disagree => "disagree",
        Verdict::Unknown => "unknown",
    };
    writeln!(out, "conjecture: {verdict} ({})", c.reason).unwrap();
    if let Some(p) = &c.predicted {
        writeln!(out, "predicted: {}", render_factors(p)).unwrap();
    }
    let perm: Vec<String> = a.permutation.iter().map(|k| (k + 1).to_string()).collect();
    let orders: Vec<String> = a.orders.iter().map(ToString::to_string).collect();
    let slots: Vec<&str> = a
        .slots
        .iter()
        .map(|s| match s {
            SlotKind::Symbol => "K2(F)",
            SlotKind::Cocycle => "K2(2,F)",
        })
        .collect();
    writeln!(out, "column order: {} ({} odd)", perm.join(" "), a.odd_columns).unwrap();
    writeln!(out, "orders: {}", orders.join(" ")).unwrap();
    writeln!(out, "slots: {}", slots.join(" ")).unwrap();
    writeln!(out, "mu (row i = image of x_i): {}", rows(&a.mu.to_rows())).unwrap();
    writeln!(out, "nu (row i = image of y_i): {}", rows(&a.nu.to_rows())).unwrap();
    writeln!(out, "transforms consistent: {}", a.maps_consistent).unwrap();
}

fn rows(m: &[Vec<num_bigint::BigInt>]) -> String {
    m.iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_matrix;

    #[test]
    fn human_output() {
        let ex = parse_matrix("2 -1 -3; -3 2 -1; -1 -3 2").unwrap();
        assert_eq!(
            ResultDocument::k2(&ex).to_human(false),
            "K2(F)/2K2(F) x K2(F)/13K2(F)\n"
        );
        let a1 = parse_matrix("2 -2; -2 2").unwrap();
        assert_eq!(
            ResultDocument::k2(&a1).to_human(false),
            "K2(2,F) x K2(2,F)/<{u^2,v}>  (second factor ≅ I^2(F))\n"
        );
        let split = parse_matrix("2 0 0; 0 2 -1; 0 -1 2").unwrap();
        assert_eq!(
            ResultDocument::classify(&split).to_human(false),
            "{1}: finite\n{2,3}: finite\n"
        );
    }

    #[test]
    fn machine_round_trip() {
        for text in ["2 -1 -3; -3 2 -1; -1 -3 2", "2 -2; -2 2", "2 -1 0; -3 2 -2; 0 -1 2"] {
            let g = parse_matrix(text).unwrap();
            for doc in [ResultDocument::k2(&g), ResultDocument::conjecture(&g)] {
                let back = ResultDocument::from_json(&doc.to_json()).unwrap();
                assert_eq!(back, doc);
                assert_eq!(parse_matrix(&back.input).unwrap(), g);
            }
        }
    }

    #[test]
    fn fixed_field_names() {
        let g = parse_matrix("2 -1; -1 2").unwrap();
        let v: serde_json::Value = serde_json::from_str(&ResultDocument::k2(&g).to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            ["class", "conjecture", "factors", "input", "reason", "residual", "trace", "verdict"]
        );
        assert_eq!(v["factors"][0]["kind"], "symbol");
        assert_eq!(v["trace"][0]["rule"], "finite-affine");
    }
}
