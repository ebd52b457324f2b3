use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gcm::{ColumnParity, Gcm};
use crate::intlat::IntMatrix;

/// Which group a slot contributes before relations are imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    /// `K2(F)`: the column has an odd off-diagonal entry.
    Symbol,
    /// `K2(2,F)`: every entry of the column is even.
    Cocycle,
}

/// `{u^p,v}_i = {u^q,v}_j` for all `u, v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link {
    pub i: usize,
    #[serde(with = "crate::serde_int")]
    pub p: BigInt,
    pub j: usize,
    #[serde(with = "crate::serde_int")]
    pub q: BigInt,
}

impl Link {
    /// A zero exponent makes one side the identity.
    pub fn is_degenerate(&self) -> bool {
        self.p.is_zero() || self.q.is_zero()
    }

    /// Exponent on slot `k`'s side, if the link touches `k`.
    pub fn exponent_at(&self, k: usize) -> Option<&BigInt> {
        if self.i == k {
            Some(&self.p)
        } else if self.j == k {
            Some(&self.q)
        } else {
            None
        }
    }

    /// The slot on the other end from `k`.
    pub fn other(&self, k: usize) -> Option<(usize, &BigInt)> {
        if self.i == k {
            Some((self.j, &self.q))
        } else if self.j == k {
            Some((self.i, &self.p))
        } else {
            None
        }
    }
}

/// `{u^p,v}_i^m = 1` for all `u, v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Torsion {
    pub i: usize,
    #[serde(with = "crate::serde_int")]
    pub p: BigInt,
    #[serde(with = "crate::serde_int")]
    pub m: BigInt,
}

/// Product of slot groups modulo exponent-level relations.
///
/// Indices in links and torsions are positions in `slots`; `labels` keeps
/// the original column index of each surviving slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenPresentation {
    pub slots: Vec<SlotKind>,
    pub labels: Vec<usize>,
    pub links: Vec<Link>,
    pub torsions: Vec<Torsion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeletionError {
    #[error("slot {0} does not exist")]
    NoSuchSlot(usize),
    #[error("slot {0} is a cocycle slot")]
    NotSymbol(usize),
    #[error("no link from slot {t} to slot {s} has exponent -1 or 1 on the side of {t}")]
    NoMinusOne { t: usize, s: usize },
    #[error("deleting slot {t} would remove the only odd exponent at slot {s}")]
    ExceptionCase { t: usize, s: usize },
}

/// One slot per column, typed by column parity, and one link
/// `(i, a[j][i], j, a[i][j])` per pair `i < j`. Pairs with `a[i][j] = 0`
/// are kept as degenerate links.
pub fn build_presentation(g: &Gcm) -> GenPresentation {
    let n = g.n();
    let slots = g
        .column_parity()
        .into_iter()
        .map(|c| match c {
            ColumnParity::OddPresent => SlotKind::Symbol,
            ColumnParity::AllEven => SlotKind::Cocycle,
        })
        .collect();
    let mut links = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            links.push(Link {
                i,
                p: g.entry(j, i).clone(),
                j,
                q: g.entry(i, j).clone(),
            });
        }
    }
    GenPresentation {
        slots,
        labels: (0..n).collect(),
        links,
        torsions: Vec::new(),
    }
}

impl GenPresentation {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Drops trivial relations and turns links with one zero side into
    /// torsions on the other side.
    pub fn normalize(&self) -> GenPresentation {
        let mut links = Vec::new();
        let mut torsions = self.torsions.clone();
        for l in &self.links {
            match (l.p.is_zero(), l.q.is_zero()) {
                (true, true) => {}
                (true, false) => torsions.push(Torsion {
                    i: l.j,
                    p: l.q.clone(),
                    m: BigInt::one(),
                }),
                (false, true) => torsions.push(Torsion {
                    i: l.i,
                    p: l.p.clone(),
                    m: BigInt::one(),
                }),
                (false, false) => links.push(l.clone()),
            }
        }
        torsions.retain(|t| !(t.p.is_zero() || t.m.is_zero()));
        GenPresentation {
            slots: self.slots.clone(),
            labels: self.labels.clone(),
            links,
            torsions,
        }
    }

    /// Connected components of the link graph, ordered by smallest member.
    /// Degenerate links do not connect.
    pub fn link_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for l in self.links.iter().filter(|l| !l.is_degenerate()) {
            adj[l.i].push(l.j);
            adj[l.j].push(l.i);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The sub-presentation on `keep`; relations touching other slots are
    /// discarded.
    pub fn restrict(&self, keep: &[usize]) -> GenPresentation {
        let pos = |k: usize| keep.iter().position(|&x| x == k);
        let links = self
            .links
            .iter()
            .filter_map(|l| {
                Some(Link {
                    i: pos(l.i)?,
                    p: l.p.clone(),
                    j: pos(l.j)?,
                    q: l.q.clone(),
                })
            })
            .collect();
        let torsions = self
            .torsions
            .iter()
            .filter_map(|t| {
                Some(Torsion {
                    i: pos(t.i)?,
                    p: t.p.clone(),
                    m: t.m.clone(),
                })
            })
            .collect();
        GenPresentation {
            slots: keep.iter().map(|&k| self.slots[k]).collect(),
            labels: keep.iter().map(|&k| self.labels[k]).collect(),
            links,
            torsions,
        }
    }

    /// Relation lattice in slot coordinates, where an exponent `p` at a
    /// symbol slot is `p * {u,v}` and at a cocycle slot is `(p/2) * {u^2,v}`.
    ///
    /// Returns `None` if a cocycle slot carries an odd exponent, which never
    /// happens for presentations built from a GCM.
    pub fn exponent_lattice(&self) -> Option<IntMatrix> {
        let n = self.len();
        let mut rows = IntMatrix::empty(n);
        for l in &self.links {
            let mut row = vec![BigInt::zero(); n];
            row[l.i] += self.coordinate(l.i, &l.p)?;
            row[l.j] -= self.coordinate(l.j, &l.q)?;
            rows.push_row(row);
        }
        for t in &self.torsions {
            let mut row = vec![BigInt::zero(); n];
            row[t.i] += self.coordinate(t.i, &t.p)? * &t.m;
            rows.push_row(row);
        }
        Some(rows)
    }

    fn coordinate(&self, k: usize, p: &BigInt) -> Option<BigInt> {
        match self.slots[k] {
            SlotKind::Symbol => Some(p.clone()),
            SlotKind::Cocycle if p.is_even() => Some(p / 2),
            SlotKind::Cocycle => None,
        }
    }

    /// First link between `t` and `s` whose `t`-side exponent is a unit.
    fn unit_link(&self, t: usize, s: usize) -> Option<usize> {
        self.links.iter().position(|l| {
            matches!(l.other(t), Some((o, _)) if o == s)
                && l.exponent_at(t).is_some_and(|e| e.abs().is_one())
        })
    }

    /// Deleting `t` through `s` is blocked when `s` is a symbol slot whose
    /// only odd exponent sits on the chosen link.
    pub fn deletion_blocked(&self, t: usize, s: usize) -> bool {
        let Some(idx) = self.unit_link(t, s) else {
            return false;
        };
        let chosen = self.links[idx].exponent_at(s).expect("touches s");
        if self.slots[s] != SlotKind::Symbol || chosen.is_even() {
            return false;
        }
        self.links
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .filter_map(|(_, l)| l.exponent_at(s))
            .all(Integer::is_even)
    }

    /// All `(t, s)` pairs where deletion is allowed, in slot order.
    pub fn deletion_candidates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..self.len() {
            if self.slots[t] != SlotKind::Symbol {
                continue;
            }
            for l in &self.links {
                let Some((s, _)) = l.other(t) else { continue };
                if s == t || !l.exponent_at(t).is_some_and(|e| e.abs().is_one()) {
                    continue;
                }
                if !out.contains(&(t, s)) && !self.deletion_blocked(t, s) {
                    out.push((t, s));
                }
            }
        }
        out
    }
}

/// Eliminates symbol slot `t` using a link `e * x_t = q * x_s` with
/// `e = ±1`, so `x_t = (e*q) * x_s`, substituting into every other relation.
pub fn reduce_delete_column(
    p: &GenPresentation,
    t: usize,
    s: usize,
) -> Result<GenPresentation, DeletionError> {
    for k in [t, s] {
        if k >= p.len() {
            return Err(DeletionError::NoSuchSlot(k));
        }
    }
    if p.slots[t] != SlotKind::Symbol {
        return Err(DeletionError::NotSymbol(t));
    }
    let idx = p.unit_link(t, s).ok_or(DeletionError::NoMinusOne { t, s })?;
    if p.deletion_blocked(t, s) {
        return Err(DeletionError::ExceptionCase { t, s });
    }
    let chosen = &p.links[idx];
    let e = chosen.exponent_at(t).expect("touches t");
    let q = chosen.exponent_at(s).expect("touches s");
    let sub = e * q;

    // position after removing t
    let re = |k: usize| if k > t { k - 1 } else { k };
    let s_new = re(s);
    let mut links = Vec::new();
    let mut torsions = Vec::new();
    for (k, l) in p.links.iter().enumerate() {
        if k == idx {
            continue;
        }
        match (l.i == t, l.j == t) {
            (false, false) => links.push(Link {
                i: re(l.i),
                p: l.p.clone(),
                j: re(l.j),
                q: l.q.clone(),
            }),
            (true, true) => unreachable!("links join distinct slots"),
            _ => {
                let (a, o, b) = if l.i == t {
                    (&l.p, l.j, &l.q)
                } else {
                    (&l.q, l.i, &l.p)
                };
                if o == s {
                    // both sides now live on s
                    torsions.push(Torsion {
                        i: s_new,
                        p: a * &sub - b,
                        m: BigInt::one(),
                    });
                } else {
                    links.push(Link {
                        i: s_new,
                        p: a * &sub,
                        j: re(o),
                        q: b.clone(),
                    });
                }
            }
        }
    }
    for tor in &p.torsions {
        torsions.push(if tor.i == t {
            Torsion {
                i: s_new,
                p: &tor.p * &sub,
                m: tor.m.clone(),
            }
        } else {
            Torsion {
                i: re(tor.i),
                p: tor.p.clone(),
                m: tor.m.clone(),
            }
        });
    }
    let mut slots = p.slots.clone();
    slots.remove(t);
    let mut labels = p.labels.clone();
    labels.remove(t);
    Ok(GenPresentation {
        slots,
        labels,
        links,
        torsions,
    }
    .normalize())
}

impl fmt::Display for GenPresentation {
    /// Slots are shown by original column number, counting from 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |k: usize| self.labels[k] + 1;
        let slots: Vec<String> = self
            .slots
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let kind = match s {
                    SlotKind::Symbol => "K2(F)",
                    SlotKind::Cocycle => "K2(2,F)",
                };
                format!("{}:{kind}", name(k))
            })
            .collect();
        write!(f, "slots [{}]", slots.join(", "))?;
        for l in &self.links {
            write!(
                f,
                "; {{u^{},v}}_{} = {{u^{},v}}_{}",
                l.p,
                name(l.i),
                l.q,
                name(l.j)
            )?;
        }
        for t in &self.torsions {
            write!(f, "; {{u^{},v}}_{}^{} = 1", t.p, name(t.i), t.m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[&[i64]]) -> Gcm {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Gcm::from_rows(&rows).unwrap()
    }

    fn link(i: usize, p: i64, j: usize, q: i64) -> Link {
        Link {
            i,
            p: p.into(),
            j,
            q: q.into(),
        }
    }

    #[test]
    fn builds_links_per_pair() {
        let a2 = build_presentation(&g(&[&[2, -1], &[-1, 2]]));
        assert_eq!(a2.slots, vec![SlotKind::Symbol; 2]);
        assert_eq!(a2.links, vec![link(0, -1, 1, -1)]);

        let a1t = build_presentation(&g(&[&[2, -2], &[-2, 2]]));
        assert_eq!(a1t.slots, vec![SlotKind::Cocycle; 2]);
        assert_eq!(a1t.links, vec![link(0, -2, 1, -2)]);

        let split = build_presentation(&g(&[&[2, 0], &[0, 2]]));
        assert_eq!(split.slots, vec![SlotKind::Cocycle; 2]);
        assert!(split.links.iter().all(Link::is_degenerate));
        assert!(split.normalize().links.is_empty());
    }

    #[test]
    fn normalize_moves_one_sided_links_to_torsions() {
        let p = GenPresentation {
            slots: vec![SlotKind::Symbol; 2],
            labels: vec![0, 1],
            links: vec![link(0, 0, 1, 3), link(0, 0, 1, 0)],
            torsions: vec![Torsion {
                i: 0,
                p: 5.into(),
                m: 0.into(),
            }],
        };
        let n = p.normalize();
        assert!(n.links.is_empty());
        assert_eq!(
            n.torsions,
            vec![Torsion {
                i: 1,
                p: 3.into(),
                m: 1.into()
            }]
        );
    }

    #[test]
    fn deleting_a_chain_end() {
        // A3: deleting the first node leaves the A2 relation
        let p = build_presentation(&g(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]));
        let r = reduce_delete_column(&p, 0, 1).unwrap();
        assert_eq!(r.labels, vec![1, 2]);
        assert_eq!(r.links, vec![link(0, -1, 1, -1)]);
        assert!(r.torsions.is_empty());
    }

    #[test]
    fn deletion_errors() {
        let p = build_presentation(&g(&[&[2, -2], &[-2, 2]]));
        assert_eq!(reduce_delete_column(&p, 0, 1), Err(DeletionError::NotSymbol(0)));
        let p = build_presentation(&g(&[&[2, -3], &[-3, 2]]));
        assert_eq!(
            reduce_delete_column(&p, 0, 1),
            Err(DeletionError::NoMinusOne { t: 0, s: 1 })
        );
        // column 1 of [[2,-1],[-3,2]] holds a lone odd entry
        let p = build_presentation(&g(&[&[2, -1], &[-3, 2]]));
        assert_eq!(
            reduce_delete_column(&p, 1, 0),
            Err(DeletionError::ExceptionCase { t: 1, s: 0 })
        );
        assert_eq!(reduce_delete_column(&p, 0, 5), Err(DeletionError::NoSuchSlot(5)));
    }

    #[test]
    fn table_entry_27_reduces_to_two_slots() {
        let p = build_presentation(&g(&[&[2, -1, 0], &[-3, 2, -2], &[0, -1, 2]]));
        assert_eq!(
            p.slots,
            vec![SlotKind::Symbol, SlotKind::Symbol, SlotKind::Cocycle]
        );
        let r = reduce_delete_column(&p, 1, 2).unwrap();
        assert_eq!(r.labels, vec![0, 2]);
        assert_eq!(r.slots, vec![SlotKind::Symbol, SlotKind::Cocycle]);
        assert_eq!(r.links, vec![link(1, -2, 0, -3)]);
        assert!(r.torsions.is_empty());
    }

    #[test]
    fn deletion_keeps_the_exponent_lattice_index() {
        use crate::intlat::invariant_factors;
        let p = build_presentation(&g(&[&[2, -1, 0], &[-3, 2, -2], &[0, -1, 2]]));
        let r = reduce_delete_column(&p, 1, 2).unwrap();
        let before = invariant_factors(&p.exponent_lattice().unwrap(), 3).unwrap();
        let after = invariant_factors(&r.exponent_lattice().unwrap(), 2).unwrap();
        assert_eq!(before.torsion, after.torsion);
        assert_eq!(before.free_rank, after.free_rank);
    }

    #[test]
    fn display_uses_original_columns() {
        let p = build_presentation(&g(&[&[2, -1], &[-1, 2]]));
        assert_eq!(p.to_string(), "slots [1:K2(F), 2:K2(F)]; {u^-1,v}_1 = {u^-1,v}_2");
    }
}
