use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::presentation::{GenPresentation, SlotKind};
use super::rules;
use crate::gcm::{CartanClass, ColumnParity, Gcm};

/// Reduction steps the engine can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Components,
    FiniteAffine,
    SimplyLaced,
    OddColumns,
    Rank2,
    DeleteLeaf,
    DeleteColumn,
    ResidualSymbols,
    ResidualCocycle,
    ResidualRank2,
    Class1,
    Class2,
    Class3,
    Catalog,
    Conjecture,
    Unresolved,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Components => "components",
            Rule::FiniteAffine => "finite-affine",
            Rule::SimplyLaced => "simply-laced",
            Rule::OddColumns => "odd-columns",
            Rule::Rank2 => "rank-2",
            Rule::DeleteLeaf => "delete-leaf",
            Rule::DeleteColumn => "delete-column",
            Rule::ResidualSymbols => "residual-symbols",
            Rule::ResidualCocycle => "residual-cocycle",
            Rule::ResidualRank2 => "residual-rank-2",
            Rule::Class1 => "class-1",
            Rule::Class2 => "class-2",
            Rule::Class3 => "class-3",
            Rule::Catalog => "catalog",
            Rule::Conjecture => "conjecture",
            Rule::Unresolved => "unresolved",
        }
    }

    /// The result each step relies on.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::Components => {
                "K2 of a block-diagonal GCM is the product over its blocks ({u,1} = {1,u} = 1)"
            }
            Rule::FiniteAffine => {
                "Matsumoto: K2(F) for finite types except C_n, which give K2(2,F); affine closed forms by column deletion"
            }
            Rule::SimplyLaced => "an indecomposable simply-laced GCM gives K2(F)",
            Rule::OddColumns => {
                "every column has an odd entry: product of K2(F)/r_i K2(F) over the invariant factors of the exponent group"
            }
            Rule::Rank2 => {
                "rank 2 with entries a, b: K2(2,F) x K2(2,F)/h<{u^2,v}> (both even), K2(F)/h x K2(2,F) (one odd), K2(F)/h x K2(F) (both odd)"
            }
            Rule::DeleteLeaf => {
                "a column whose only off-diagonal entry is -1 can be deleted unless it holds the only odd entry of its neighbour's column"
            }
            Rule::DeleteColumn => {
                "a symbol slot linked with exponent -1 is eliminated by substituting {u,v}_t = {u^(-a_st),v}_s"
            }
            Rule::ResidualSymbols => {
                "only K2(F) slots remain: quotients by the invariant factors of the exponent group"
            }
            Rule::ResidualCocycle => {
                "one K2(2,F) slot with relations {u^p,v}^m = 1: quotient by gcd(|pm|/2)<{u^2,v}>"
            }
            Rule::ResidualRank2 => "two slots joined by one relation: the rank-2 formulas",
            Rule::Class1 => "rank-3 class 1: K2(2,F)/((ad-bc)/2)<{u^2,v}>",
            Rule::Class2 => "rank-3 class 2: K2(2,F)/((abd-c)/2)<{u^2,v}>",
            Rule::Class3 => "rank-3 class 3: K2(2,F) x I^2(F) x I^2(F)",
            Rule::Catalog => "tabulated value for a hyperbolic GCM, matched up to relabelling",
            Rule::Conjecture => {
                "conjectural splitting along the Smith normal form of the exponent group (unproven)"
            }
            Rule::Unresolved => "no applicable result; the reached presentation is returned",
        }
    }

    /// Whether the rule may be applied to `g` as a whole matrix.
    pub fn admits(self, g: &Gcm) -> bool {
        let single = g.is_indecomposable();
        match self {
            Rule::Components => !single,
            Rule::FiniteAffine => {
                single
                    && g.classify_indecomposable()
                        .is_ok_and(CartanClass::is_finite_or_affine)
            }
            // A_1 is C_1, which gives K2(2,F)
            Rule::SimplyLaced => single && g.n() >= 2 && g.is_simply_laced(),
            Rule::OddColumns => {
                single
                    && g.column_parity()
                        .iter()
                        .all(|&c| c == ColumnParity::OddPresent)
            }
            Rule::Rank2 => single && g.n() == 2,
            Rule::DeleteLeaf => single && !rules::leaf_deletions(g).is_empty(),
            Rule::DeleteColumn => {
                single
                    && !super::presentation::build_presentation(g)
                        .normalize()
                        .deletion_candidates()
                        .is_empty()
            }
            Rule::Class1 => rules::match_class1(g).is_some(),
            Rule::Class2 => rules::match_class2(g).is_some(),
            Rule::Class3 => rules::match_class3(g),
            Rule::Catalog => crate::catalog::lookup(g).is_some(),
            Rule::Conjecture | Rule::Unresolved => true,
            Rule::ResidualSymbols | Rule::ResidualCocycle | Rule::ResidualRank2 => false,
        }
    }

    /// Whether the rule may be applied to a single link-connected residual.
    pub fn admits_residual(self, p: &GenPresentation) -> bool {
        let connected = p.link_components().len() == 1;
        match self {
            Rule::DeleteColumn => !p.deletion_candidates().is_empty(),
            Rule::ResidualSymbols => connected && p.slots.iter().all(|&k| k == SlotKind::Symbol),
            Rule::ResidualCocycle => p.len() == 1 && p.slots[0] == SlotKind::Cocycle,
            Rule::ResidualRank2 => {
                connected
                    && p.len() == 2
                    && p.links.len() == 1
                    && p.torsions.is_empty()
                    && [0, 1].iter().all(|&k| {
                        p.slots[k] == SlotKind::Cocycle
                            || p.links[0].exponent_at(k).is_some_and(|e| e.is_odd())
                    })
            }
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub citation: String,
    pub detail: String,
}

/// Ordered record of the rules applied during one computation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.steps.iter().map(|s| s.rule)
    }

    /// Records a whole-matrix step after re-checking its precondition.
    pub(crate) fn apply(&mut self, rule: Rule, g: &Gcm, detail: impl Into<String>) {
        assert!(rule.admits(g), "{rule} applied to {g} without its precondition");
        self.push(rule, detail.into());
    }

    /// Records a residual step after re-checking its precondition.
    pub(crate) fn apply_residual(
        &mut self,
        rule: Rule,
        p: &GenPresentation,
        detail: impl Into<String>,
    ) {
        assert!(
            rule.admits_residual(p),
            "{rule} applied to residual {p} without its precondition"
        );
        self.push(rule, detail.into());
    }

    fn push(&mut self, rule: Rule, detail: String) {
        self.steps.push(TraceStep {
            rule,
            citation: rule.citation().to_string(),
            detail,
        });
    }

    pub(crate) fn extend(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {:<17} {}", k + 1, s.rule.name(), s.detail)?;
            writeln!(f, "     {:<17} [{}]", "", s.citation)?;
        }
        Ok(())
    }
}
