//! Predictor for the conjectured splitting of `K2(A,F)` along the Smith
//! normal form of the exponent group, and a checker comparing it with the
//! proven rules.
//!
//! With columns ordered odd-first (`k` odd columns), let
//! `G = <x_i | x_i^a[j][i] = x_j^a[i][j]>` and fix `phi: G -> prod Z/r_i` by
//! the Smith transforms, `phi(x_i) = prod y_k^mu[k][i]` and
//! `psi(y_i) = prod x_j^nu[j][i]`. Canonical generator `i` is a symbol slot
//! iff `nu[j][i]` is even for every even column `j` and `mu[i][j]` is odd
//! for some odd column `j`. The predicted factor is `K2(F)/r_i` for symbol
//! slots and `K2(2,F)/(r_i/2)<{u^2,v}>` otherwise. The parity conditions
//! depend on the chosen transforms, so the ones used are reported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{k2_equiv, K2Factor};
use super::pipeline::{k2, K2Result};
use super::presentation::{build_presentation, SlotKind};
use super::rules::exponent_relations;
use super::trace::{Rule, Trace};
use crate::gcm::{ColumnParity, Gcm};
use crate::intlat::{invariant_factors, IntMatrix};

/// The transforms and slot assignment behind one prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureAnalysis {
    /// `permutation[k]` is the original column placed at position `k`.
    pub permutation: Vec<usize>,
    pub odd_columns: usize,
    pub relations: IntMatrix,
    /// `r_i` for every canonical generator, including 1 and 0.
    #[serde(with = "crate::serde_int::vec")]
    pub orders: Vec<BigInt>,
    /// Row `i` is `phi(x_i)`: entry `[i][k]` is `mu[k][i]`.
    pub mu: IntMatrix,
    /// Row `i` is `psi(y_i)`: entry `[i][j]` is `nu[j][i]`.
    pub nu: IntMatrix,
    pub slots: Vec<SlotKind>,
    /// Exponent-level sanity checks on `phi` and `psi`.
    pub maps_consistent: bool,
}

pub fn conjecture_analysis(g: &Gcm) -> ConjectureAnalysis {
    let parity = g.column_parity();
    let mut permutation: Vec<usize> = (0..g.n())
        .filter(|&i| parity[i] == ColumnParity::OddPresent)
        .collect();
    let odd_columns = permutation.len();
    permutation.extend((0..g.n()).filter(|&i| parity[i] == ColumnParity::AllEven));
    let h = g.permute(&permutation);
    let n = h.n();

    let relations = exponent_relations(&h);
    let group = invariant_factors(&relations, n).expect("n columns");
    let mu = group.to_canonical.clone();
    let nu = group.from_canonical.clone();

    let slots = (0..n)
        .map(|i| {
            let even_ok = (odd_columns..n).all(|j| nu[(i, j)].is_even());
            let odd_hit = (0..odd_columns).any(|j| mu[(j, i)].is_odd());
            if even_ok && odd_hit {
                SlotKind::Symbol
            } else {
                SlotKind::Cocycle
            }
        })
        .collect();
    let maps_consistent = maps_consistent(&relations, &group.orders, &mu, &nu);
    ConjectureAnalysis {
        permutation,
        odd_columns,
        relations,
        orders: group.orders,
        mu,
        nu,
        slots,
        maps_consistent,
    }
}

/// `phi` sends every relator into the target relations, `psi` sends every
/// target relation into the relator lattice, and the two are inverse.
fn maps_consistent(relations: &IntMatrix, orders: &[BigInt], mu: &IntMatrix, nu: &IntMatrix) -> bool {
    let n = orders.len();
    let phi_ok = (0..relations.rows()).all(|r| {
        let y = mu.left_mul_vec(relations.row(r));
        y.iter().zip(orders).all(|(c, o)| {
            if o.is_zero() {
                c.is_zero()
            } else {
                c.is_multiple_of(o)
            }
        })
    });
    let lattice = invariant_factors(relations, n).expect("n columns");
    let psi_ok = (0..n).all(|k| {
        let image: Vec<BigInt> = nu.row(k).iter().map(|x| x * &orders[k]).collect();
        lattice.is_relation(&image)
    });
    let inverse_ok = mu * nu == IntMatrix::identity(n);
    phi_ok && psi_ok && inverse_ok
}

/// The conjectured factors, or `Unresolved` when a cocycle slot gets an
/// odd order above 1.
pub fn conjecture_predict(g: &Gcm) -> K2Result {
    let a = conjecture_analysis(g);
    let mut factors = Vec::new();
    let mut odd_cocycle = None;
    for (kind, r) in a.slots.iter().zip(&a.orders) {
        match kind {
            SlotKind::Symbol => factors.push(K2Factor::symbol(r.clone())),
            // r/2 <{u^2,v}> is <{u^r,v}>, the whole group when r = 1
            SlotKind::Cocycle if r.is_one() => {}
            SlotKind::Cocycle if r.is_even() => factors.push(K2Factor::cocycle(r / 2)),
            SlotKind::Cocycle => odd_cocycle = Some(r.clone()),
        }
    }
    let kinds: Vec<&str> = a
        .slots
        .iter()
        .map(|s| match s {
            SlotKind::Symbol => "K2(F)",
            SlotKind::Cocycle => "K2(2,F)",
        })
        .collect();
    let orders: Vec<String> = a.orders.iter().map(ToString::to_string).collect();
    let mut trace = Trace::new();
    trace.apply(
        Rule::Conjecture,
        g,
        format!("orders [{}], slots [{}]", orders.join(", "), kinds.join(", ")),
    );
    match odd_cocycle {
        None => K2Result::Resolved {
            factors: super::factor::canonicalize(factors),
            trace,
        },
        Some(r) => K2Result::Unresolved {
            residual: build_presentation(g).normalize(),
            trace,
            reason: format!("a K2(2,F) slot received the odd order {r}"),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Agree,
    Disagree,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCheck {
    pub verdict: Verdict,
    pub reason: String,
    pub engine: Option<Vec<K2Factor>>,
    pub predicted: Option<Vec<K2Factor>>,
    pub analysis: ConjectureAnalysis,
}

/// Compares the prediction with the engine. This only tests necessary
/// conditions and proves nothing about the conjecture.
pub fn conjecture_check(g: &Gcm) -> ConjectureCheck {
    let analysis = conjecture_analysis(g);
    let engine = k2(g);
    let predicted = conjecture_predict(g);
    let (verdict, reason) = match (engine.factors(), predicted.factors()) {
        (None, _) => (Verdict::Unknown, "the engine leaves K2 unresolved".to_string()),
        (_, None) => (
            Verdict::Unknown,
            match &predicted {
                K2Result::Unresolved { reason, .. } => reason.clone(),
                K2Result::Resolved { .. } => unreachable!(),
            },
        ),
        (Some(_), Some(_)) if !analysis.maps_consistent => (
            Verdict::Disagree,
            "the transforms fail the exponent-level checks".to_string(),
        ),
        (Some(e), Some(p)) if k2_equiv(e, p) => (Verdict::Agree, "factors match".to_string()),
        (Some(_), Some(_)) => (Verdict::Disagree, "factors differ".to_string()),
    };
    ConjectureCheck {
        verdict,
        reason,
        engine: engine.factors().map(<[K2Factor]>::to_vec),
        predicted: predicted.factors().map(<[K2Factor]>::to_vec),
        analysis,
    }
}
