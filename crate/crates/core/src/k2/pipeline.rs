use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{canonicalize, K2Factor};
use super::presentation::{build_presentation, reduce_delete_column, GenPresentation, SlotKind};
use super::rules::{
    finite_affine_closed_form, leaf_deletions, reduce_class_formulas, reduce_odd_columns,
    reduce_rank2,
};
use super::trace::{Rule, Trace};
use crate::gcm::Gcm;
use crate::intlat::invariant_factors;

/// Outcome of the reduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum K2Result {
    Resolved {
        factors: Vec<K2Factor>,
        trace: Trace,
    },
    /// No rule finished the computation; `residual` is the last
    /// presentation reached.
    Unresolved {
        residual: GenPresentation,
        trace: Trace,
        reason: String,
    },
}

impl K2Result {
    pub fn factors(&self) -> Option<&[K2Factor]> {
        match self {
            K2Result::Resolved { factors, .. } => Some(factors),
            K2Result::Unresolved { .. } => None,
        }
    }

    pub fn trace(&self) -> &Trace {
        match self {
            K2Result::Resolved { trace, .. } | K2Result::Unresolved { trace, .. } => trace,
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self, K2Result::Resolved { .. })
    }

    /// The rule that produced the factors, ignoring bookkeeping steps.
    pub fn deciding_rule(&self) -> Option<Rule> {
        self.trace()
            .rules()
            .filter(|r| !matches!(r, Rule::Components | Rule::DeleteLeaf | Rule::Unresolved))
            .last()
    }
}

/// Where column deletion sits in the rule order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deletion {
    /// After the rank-2 rule.
    #[default]
    Normal,
    /// Before every other rule except block splitting.
    Forced,
    /// Never.
    Disabled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub deletion: Deletion,
    /// Consult the tabulated values as a last resort.
    pub catalog: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            deletion: Deletion::Normal,
            catalog: true,
        }
    }
}

/// `K2(A,F)` with the default rule order.
pub fn k2(g: &Gcm) -> K2Result {
    k2_with(g, Options::default())
}

/// Rule order: blocks, finite/affine closed forms, simply-laced, odd
/// columns, rank 2, deletion, rank-3 classes, catalog.
pub fn k2_with(g: &Gcm, opts: Options) -> K2Result {
    if !g.is_indecomposable() {
        return split(g, opts);
    }
    let mut stuck = Stuck::default();
    if opts.deletion == Deletion::Forced {
        match deletion(g, opts) {
            Ok(r) => return r,
            Err(s) => stuck = s,
        }
    }
    let class = g.classify_indecomposable().expect("indecomposable");
    if class.is_finite_or_affine() {
        return finite_affine_closed_form(g, class).expect("finite or affine");
    }
    if Rule::SimplyLaced.admits(g) {
        let mut trace = Trace::new();
        trace.apply(Rule::SimplyLaced, g, format!("{class} simply-laced matrix"));
        return K2Result::Resolved {
            factors: vec![K2Factor::symbol(0)],
            trace,
        };
    }
    if let Ok(r) = reduce_odd_columns(g) {
        return r;
    }
    if g.n() == 2 {
        return reduce_rank2(&-g.entry(1, 0), &-g.entry(0, 1));
    }
    if opts.deletion == Deletion::Normal {
        match deletion(g, opts) {
            Ok(r) => return r,
            Err(s) => stuck = s,
        }
    }
    if let Ok(r) = reduce_class_formulas(g) {
        return r;
    }
    if opts.catalog {
        if let Some(entry) = crate::catalog::lookup(g) {
            let mut trace = Trace::new();
            trace.apply(Rule::Catalog, g, format!("entry {}", entry.id));
            return K2Result::Resolved {
                factors: entry.expected.clone(),
                trace,
            };
        }
    }
    let reason = format!("no rule resolves this {class} matrix");
    let mut trace = stuck.trace;
    trace.apply(Rule::Unresolved, g, reason.clone());
    K2Result::Unresolved {
        residual: stuck
            .residual
            .unwrap_or_else(|| build_presentation(g).normalize()),
        trace,
        reason,
    }
}

/// Where a failed deletion attempt got to.
#[derive(Default)]
struct Stuck {
    residual: Option<GenPresentation>,
    trace: Trace,
}

fn split(g: &Gcm, opts: Options) -> K2Result {
    let blocks = g.components();
    let mut trace = Trace::new();
    let names: Vec<String> = blocks.iter().map(|b| one_based(b)).collect();
    trace.apply(Rule::Components, g, format!("blocks {}", names.join(" ")));
    let mut factors = Vec::new();
    for block in &blocks {
        let sub = g.principal_submatrix(block).expect("nonempty block");
        match k2_with(&sub, opts) {
            K2Result::Resolved { factors: f, trace: t } => {
                factors.extend(f);
                trace.extend(t);
            }
            K2Result::Unresolved {
                mut residual,
                trace: t,
                reason,
            } => {
                trace.extend(t);
                for l in &mut residual.labels {
                    *l = block[*l];
                }
                return K2Result::Unresolved {
                    residual,
                    trace,
                    reason: format!("block {}: {reason}", one_based(block)),
                };
            }
        }
    }
    K2Result::Resolved {
        factors: canonicalize(factors),
        trace,
    }
}

fn one_based(xs: &[usize]) -> String {
    let v: Vec<String> = xs.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// Leaf deletion on the matrix, then elimination on the presentation.
fn deletion(g: &Gcm, opts: Options) -> Result<K2Result, Stuck> {
    let mut stuck = Stuck::default();
    if let Some(&(t, s)) = leaf_deletions(g).first() {
        let sub = g.delete(t).expect("n >= 2");
        let mut trace = Trace::new();
        trace.apply(
            Rule::DeleteLeaf,
            g,
            format!("delete column {} attached to column {}", t + 1, s + 1),
        );
        let keep: Vec<usize> = (0..g.n()).filter(|&i| i != t).collect();
        match k2_with(&sub, opts) {
            K2Result::Resolved { factors, trace: t } => {
                trace.extend(t);
                return Ok(K2Result::Resolved { factors, trace });
            }
            K2Result::Unresolved {
                residual: mut p,
                trace: t,
                ..
            } => {
                for l in &mut p.labels {
                    *l = keep[*l];
                }
                trace.extend(t);
                stuck = Stuck {
                    residual: Some(p),
                    trace,
                };
            }
        }
    }
    let p = build_presentation(g).normalize();
    if p.deletion_candidates().is_empty() {
        return Err(stuck);
    }
    let mut trace = Trace::new();
    match resolve_residual(&p, &mut trace) {
        Ok(factors) => Ok(K2Result::Resolved {
            factors: canonicalize(factors),
            trace,
        }),
        Err(p) if stuck.residual.is_none() => Err(Stuck {
            residual: Some(p),
            trace,
        }),
        Err(_) => Err(stuck),
    }
}

/// Reduces a presentation by eliminating slots and applying the closed
/// forms for residual shapes. Returns the stuck residual on failure.
pub fn resolve_residual(
    p: &GenPresentation,
    trace: &mut Trace,
) -> Result<Vec<K2Factor>, GenPresentation> {
    let p = p.normalize();
    let comps = p.link_components();
    if comps.len() > 1 {
        let mut out = Vec::new();
        for c in comps {
            out.extend(resolve_residual(&p.restrict(&c), trace)?);
        }
        return Ok(out);
    }
    let name = |k: usize| p.labels[k] + 1;
    if let Some(&(t, s)) = p.deletion_candidates().first() {
        trace.apply_residual(
            Rule::DeleteColumn,
            &p,
            format!("eliminate column {} through column {}", name(t), name(s)),
        );
        let q = reduce_delete_column(&p, t, s).expect("candidate is admissible");
        return resolve_residual(&q, trace);
    }
    if Rule::ResidualSymbols.admits_residual(&p) {
        let lattice = p.exponent_lattice().expect("symbol slots only");
        let group = invariant_factors(&lattice, p.len()).expect("slot count");
        trace.apply_residual(
            Rule::ResidualSymbols,
            &p,
            format!("{} K2(F) slots", p.len()),
        );
        return Ok(group.orders.into_iter().map(K2Factor::symbol).collect());
    }
    if Rule::ResidualCocycle.admits_residual(&p) {
        let h = p
            .torsions
            .iter()
            .map(|t| (&t.p * &t.m).abs() / 2)
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
        trace.apply_residual(
            Rule::ResidualCocycle,
            &p,
            format!("column {}, quotient {h}", name(0)),
        );
        return Ok(vec![K2Factor::cocycle(h)]);
    }
    if Rule::ResidualRank2.admits_residual(&p) {
        let l = &p.links[0];
        let factors = match (p.slots[l.i], p.slots[l.j]) {
            (SlotKind::Cocycle, SlotKind::Cocycle) => vec![
                K2Factor::cocycle(0),
                K2Factor::cocycle(BigInt::gcd(&(&l.p / 2), &(&l.q / 2))),
            ],
            _ => vec![K2Factor::symbol(l.p.gcd(&l.q)), K2Factor::cocycle(0)],
        };
        trace.apply_residual(
            Rule::ResidualRank2,
            &p,
            format!(
                "{{u^{},v}}_{} = {{u^{},v}}_{}",
                l.p,
                name(l.i),
                l.q,
                name(l.j)
            ),
        );
        return Ok(factors);
    }
    Err(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[i64]]) -> Gcm {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Gcm::from_rows(&rows).unwrap()
    }

    fn run(rows: &[&[i64]]) -> Vec<K2Factor> {
        k2(&g(rows)).factors().expect("resolved").to_vec()
    }

    fn s(r: i64) -> K2Factor {
        K2Factor::symbol(r)
    }
    fn c(r: i64) -> K2Factor {
        K2Factor::cocycle(r)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(run(&[&[2, -1, -3], &[-3, 2, -1], &[-1, -3, 2]]), vec![s(2), s(13)]);
        assert_eq!(run(&[&[2, -2], &[-2, 2]]), vec![c(0), c(1)]);
        assert_eq!(run(&[&[2, -1, 0], &[-3, 2, -2], &[0, -1, 2]]), vec![c(0)]);
    }

    #[test]
    fn blocks_multiply() {
        let m = g(&[
            &[2, -1, 0, 0],
            &[-1, 2, 0, 0],
            &[0, 0, 2, -2],
            &[0, 0, -2, 2],
        ]);
        let r = k2(&m);
        assert_eq!(r.factors().unwrap(), &[s(0), c(0), c(1)]);
        assert_eq!(r.trace().steps()[0].rule, Rule::Components);
        assert_eq!(run(&[&[2, 0], &[0, 2]]), vec![c(0), c(0)]);
    }

    #[test]
    fn entry_27_goes_through_deletion() {
        let r = k2(&g(&[&[2, -1, 0], &[-3, 2, -2], &[0, -1, 2]]));
        let rules: Vec<Rule> = r.trace().rules().collect();
        assert_eq!(rules, vec![Rule::DeleteColumn, Rule::ResidualRank2]);
    }

    #[test]
    fn catalog_is_last_resort() {
        let m = g(&[&[2, -1, -2], &[-1, 2, -2], &[-2, -2, 2]]);
        assert_eq!(k2(&m).deciding_rule(), Some(Rule::Catalog));
        let off = Options {
            catalog: false,
            ..Options::default()
        };
        let r = k2_with(&m, off);
        assert!(!r.is_resolved());
        if let K2Result::Unresolved { residual, .. } = r {
            assert_eq!(residual.len(), 3);
        }
    }

    #[test]
    fn trace_is_never_empty_when_resolved() {
        for rows in [
            &[&[2i64][..]][..],
            &[&[2, -1], &[-1, 2]],
            &[&[2, -5], &[-1, 2]],
        ] {
            assert!(!k2(&g(rows)).trace().is_empty());
        }
    }

    #[test]
    fn resolved_json_round_trip() {
        let r = k2(&g(&[&[2, -2], &[-2, 2]]));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"status":"resolved","factors":[{"kind":"cocycle","r":0}"#));
        assert_eq!(serde_json::from_str::<K2Result>(&text).unwrap(), r);
    }
}
