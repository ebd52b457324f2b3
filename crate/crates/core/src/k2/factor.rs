use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// A quotient of `K2(F)`.
    Symbol,
    /// A quotient of `K2(2,F)` by a multiple of `<{u^2,v}>`.
    Cocycle,
}

/// One direct factor of `K2(A,F)`.
///
/// `Symbol` with `r = 0` is `K2(F)` and with `r >= 2` is `K2(F)/rK2(F)`;
/// `r = 1` is trivial. `Cocycle` with `r = 0` is `K2(2,F)` and otherwise
/// `K2(2,F)/r<{u^2,v}>`, which is nontrivial even for `r = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct K2Factor {
    pub kind: FactorKind,
    #[serde(with = "crate::serde_int")]
    pub r: BigInt,
}

impl K2Factor {
    pub fn symbol(r: impl Into<BigInt>) -> Self {
        K2Factor {
            kind: FactorKind::Symbol,
            r: r.into(),
        }
    }

    pub fn cocycle(r: impl Into<BigInt>) -> Self {
        K2Factor {
            kind: FactorKind::Cocycle,
            r: r.into(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == FactorKind::Symbol && self.r.abs().is_one()
    }
}

impl fmt::Display for K2Factor {
    /// Short notation used in data files: `S0`, `S4`, `C0`, `C1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            FactorKind::Symbol => 'S',
            FactorKind::Cocycle => 'C',
        };
        write!(f, "{tag}{}", self.r)
    }
}

/// Drops trivial factors, takes absolute values, splits every
/// `K2(F)/rK2(F)` into prime-power pieces and sorts by `(kind, r)`.
pub fn canonicalize(factors: impl IntoIterator<Item = K2Factor>) -> Vec<K2Factor> {
    let mut out = Vec::new();
    for f in factors {
        let r = f.r.abs();
        match f.kind {
            FactorKind::Symbol if !r.is_zero() => {
                out.extend(prime_powers(&r).into_iter().map(K2Factor::symbol));
            }
            kind => out.push(K2Factor { kind, r }),
        }
    }
    out.sort();
    out
}

/// Equality as abelian groups for the symbol parts; cocycle factors must
/// match exactly.
pub fn k2_equiv(x: &[K2Factor], y: &[K2Factor]) -> bool {
    canonicalize(x.iter().cloned()) == canonicalize(y.iter().cloned())
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime-power factorization by trial division. A cofactor with no prime
/// below `TRIAL_LIMIT` is kept whole, so huge orders may stay composite.
fn prime_powers(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n && p < BigInt::from(TRIAL_LIMIT) {
        if n.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                q *= &p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}
