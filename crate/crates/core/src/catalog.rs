//! Tabulated hyperbolic GCMs with their known `K2`, plus exhaustive
//! enumeration of hyperbolic GCMs in ranks 2 and 3.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gcm::{ColumnParity, Gcm};
use crate::k2::{canonicalize, k2, k2_equiv, leaf_deletions, match_class1, match_class2,
    match_class3, K2Factor, K2Result, Rule, Trace};
use crate::text::{parse_factor_list, parse_matrix};

/// Which published list an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    /// The rank-3 list and the two class 3 matrices.
    Rank3,
    /// Ranks 4 to 6.
    Higher,
}

impl Table {
    pub fn name(self) -> &'static str {
        match self {
            Table::Rank3 => "rank3",
            Table::Higher => "higher",
        }
    }
}

impl std::str::FromStr for Table {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rank3" => Ok(Table::Rank3),
            "higher" => Ok(Table::Higher),
            _ => Err(format!("unknown table '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub table: Table,
    pub source: String,
    pub matrix: Gcm,
    pub expected: Vec<K2Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("catalog line {line}: {message}")]
pub struct CatalogError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    by_canonical: HashMap<Gcm, usize>,
}

impl Catalog {
    /// Reads `id | table | source | matrix | factors` records; `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::default();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CatalogError { line: k + 1, message };
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            let [id, table, source, matrix, factors] = fields[..] else {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            };
            let matrix = parse_matrix(matrix).map_err(|e| err(e.to_string()))?;
            if !matrix.is_hyperbolic() {
                return Err(err(format!("{matrix} is not hyperbolic")));
            }
            let entry = CatalogEntry {
                id: id.to_string(),
                table: table.parse().map_err(err)?,
                source: source.to_string(),
                expected: canonicalize(parse_factor_list(factors).map_err(err)?),
                matrix,
            };
            cat.push(entry).map_err(err)?;
        }
        Ok(cat)
    }

    fn push(&mut self, entry: CatalogEntry) -> Result<(), String> {
        let key = entry.matrix.canonical();
        if let Some(&old) = self.by_canonical.get(&key) {
            return Err(format!(
                "entry {} repeats entry {}",
                entry.id, self.entries[old].id
            ));
        }
        self.by_canonical.insert(key, self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry equal to `g` up to simultaneous permutation.
    pub fn lookup(&self, g: &Gcm) -> Option<&CatalogEntry> {
        self.by_canonical
            .get(&g.canonical())
            .map(|&k| &self.entries[k])
    }

    /// Runs the engine on every entry in `table` (all when `None`).
    pub fn verify(&self, table: Option<Table>) -> VerifyReport {
        let entries = self
            .entries
            .iter()
            .filter(|e| table.is_none_or(|t| e.table == t))
            .map(verify_entry)
            .collect();
        VerifyReport { entries }
    }
}

static BUILTIN: OnceLock<Catalog> = OnceLock::new();

/// The embedded catalog. A malformed data file is a startup error.
pub fn builtin() -> &'static Catalog {
    BUILTIN.get_or_init(|| {
        Catalog::parse(include_str!("../data/catalog.txt"))
            .unwrap_or_else(|e| panic!("embedded catalog: {e}"))
    })
}

pub fn lookup(g: &Gcm) -> Option<&'static CatalogEntry> {
    builtin().lookup(g)
}

pub fn verify_catalog(table: Option<Table>) -> VerifyReport {
    builtin().verify(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub table: Table,
    pub source: String,
    pub expected: Vec<K2Factor>,
    pub got: Option<Vec<K2Factor>>,
    pub pass: bool,
    /// Rule that produced the factors.
    pub decided_by: Option<Rule>,
    /// Kept for failures only.
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: Vec<EntryReport>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    /// Entries whose value came from the table itself rather than a rule.
    pub fn by_lookup(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.decided_by == Some(Rule::Catalog))
            .count()
    }
}

fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let result = k2(&e.matrix);
    let got = result.factors().map(<[K2Factor]>::to_vec);
    let pass = got.as_deref().is_some_and(|f| k2_equiv(f, &e.expected));
    EntryReport {
        id: e.id.clone(),
        table: e.table,
        source: e.source.clone(),
        expected: e.expected.clone(),
        got,
        pass,
        decided_by: match &result {
            K2Result::Resolved { .. } => result.deciding_rule(),
            K2Result::Unresolved { .. } => None,
        },
        trace: (!pass).then(|| result.trace().clone()),
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let got = match &e.got {
                Some(g) => factors_short(g),
                None => "unresolved".to_string(),
            };
            let by = e.decided_by.map_or("-", Rule::name);
            writeln!(
                f,
                "{} {:<16} {:<13} expected {:<10} got {:<10} via {by}",
                if e.pass { "PASS" } else { "FAIL" },
                e.id,
                e.source,
                factors_short(&e.expected),
                got,
            )?;
            if let Some(t) = &e.trace {
                write!(f, "{t}")?;
            }
        }
        write!(
            f,
            "{} entries, {} failed, {} taken from the table",
            self.entries.len(),
            self.failures(),
            self.by_lookup()
        )
    }
}

fn factors_short(fs: &[K2Factor]) -> String {
    if fs.is_empty() {
        return "1".to_string();
    }
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// `[[2,-b],[-a,2]]` with `1 <= a, b <= bound` and `ab > 4`, one per
/// permutation class, in canonical form.
pub fn enumerate_rank2_hyperbolic(bound: u32) -> Vec<Gcm> {
    let mut out = BTreeSet::new();
    for a in 1..=i64::from(bound) {
        for b in 1..=i64::from(bound) {
            if a * b > 4 {
                let g = Gcm::from_rows(&[[2, -b], [-a, 2]]).expect("valid");
                out.insert(canonical_rows(&g));
            }
        }
    }
    from_keys(out)
}

/// Indecomposable hyperbolic 3x3 GCMs with off-diagonal entries in
/// `[-4, 0]`, one per permutation class, in canonical form. Any rank-3
/// hyperbolic GCM has this shape because its 2x2 blocks are finite or
/// affine.
pub fn enumerate_rank3_hyperbolic() -> Vec<Gcm> {
    let pairs = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
    let mut out = BTreeSet::new();
    for code in 0..5usize.pow(6) {
        let mut m = [[2i64; 3]; 3];
        let mut c = code;
        for &(i, j) in &pairs {
            m[i][j] = -((c % 5) as i64);
            c /= 5;
        }
        if pairs.iter().any(|&(i, j)| (m[i][j] == 0) != (m[j][i] == 0)) {
            continue;
        }
        let g = Gcm::from_rows(&m).expect("valid");
        if g.is_hyperbolic() {
            out.insert(canonical_rows(&g));
        }
    }
    from_keys(out)
}

fn canonical_rows(g: &Gcm) -> Vec<Vec<BigInt>> {
    g.canonical().to_rows()
}

fn from_keys(keys: BTreeSet<Vec<Vec<BigInt>>>) -> Vec<Gcm> {
    keys.into_iter()
        .map(|rows| Gcm::from_rows(&rows).expect("valid"))
        .collect()
}

/// Counts of the rank-3 hyperbolics by the first rule family that applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub total: usize,
    pub all_odd: usize,
    pub leaf_deletion: usize,
    pub class1: usize,
    pub class2: usize,
    pub class3: usize,
    pub table: usize,
    pub uncovered: Vec<Gcm>,
    /// How the engine actually decides each matrix.
    pub engine: BTreeMap<String, usize>,
    pub discrepancies: Vec<String>,
}

/// Figures stated in the literature for the rank-3 count.
pub const CLAIMED_TOTAL: usize = 123;
pub const CLAIMED_ALL_ODD: usize = 67;
pub const CLAIMED_LEAF_DELETION: usize = 12;
pub const CLAIMED_REMAINING: usize = 46;

pub fn rank3_partition() -> PartitionReport {
    let all = enumerate_rank3_hyperbolic();
    let mut r = PartitionReport {
        total: all.len(),
        all_odd: 0,
        leaf_deletion: 0,
        class1: 0,
        class2: 0,
        class3: 0,
        table: 0,
        uncovered: Vec::new(),
        engine: BTreeMap::new(),
        discrepancies: Vec::new(),
    };
    for g in &all {
        if g.column_parity().iter().all(|&c| c == ColumnParity::OddPresent) {
            r.all_odd += 1;
        } else if !leaf_deletions(g).is_empty() {
            r.leaf_deletion += 1;
        } else if match_class1(g).is_some() {
            r.class1 += 1;
        } else if match_class2(g).is_some() {
            r.class2 += 1;
        } else if match_class3(g) {
            r.class3 += 1;
        } else if lookup(g).is_some() {
            r.table += 1;
        } else {
            r.uncovered.push(g.clone());
        }
        let rule = k2(g).deciding_rule().map_or("none", Rule::name);
        *r.engine.entry(rule.to_string()).or_default() += 1;
    }
    let mut note = |ok: bool, msg: String| {
        if !ok {
            r.discrepancies.push(msg);
        }
    };
    note(
        r.total == CLAIMED_TOTAL,
        format!("total: {} found, {CLAIMED_TOTAL} claimed", r.total),
    );
    note(
        r.all_odd == CLAIMED_ALL_ODD,
        format!("all columns odd: {} found, {CLAIMED_ALL_ODD} claimed", r.all_odd),
    );
    note(
        r.leaf_deletion == CLAIMED_LEAF_DELETION,
        format!(
            "leaf deletion: {} found, {CLAIMED_LEAF_DELETION} claimed",
            r.leaf_deletion
        ),
    );
    let remaining = CLAIMED_TOTAL - CLAIMED_ALL_ODD - CLAIMED_LEAF_DELETION;
    note(
        remaining == CLAIMED_REMAINING,
        format!(
            "claimed remainder {CLAIMED_REMAINING} disagrees with the claimed counts: \
             {CLAIMED_TOTAL} - {CLAIMED_ALL_ODD} - {CLAIMED_LEAF_DELETION} = {remaining}; \
             the enumerated remainder is {}",
            r.total - r.all_odd - r.leaf_deletion
        ),
    );
    note(
        r.uncovered.is_empty(),
        format!("{} matrices covered by no rule or table", r.uncovered.len()),
    );
    r
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank-3 hyperbolic GCMs: {}", self.total)?;
        writeln!(f, "  all columns odd   {:>4}", self.all_odd)?;
        writeln!(f, "  leaf deletion     {:>4}", self.leaf_deletion)?;
        writeln!(f, "  class 1           {:>4}", self.class1)?;
        writeln!(f, "  class 2           {:>4}", self.class2)?;
        writeln!(f, "  class 3           {:>4}", self.class3)?;
        writeln!(f, "  table only        {:>4}", self.table)?;
        writeln!(f, "  uncovered         {:>4}", self.uncovered.len())?;
        writeln!(f, "deciding rule in the engine:")?;
        for (rule, n) in &self.engine {
            writeln!(f, "  {rule:<17} {n:>4}")?;
        }
        for d in &self.discrepancies {
            writeln!(f, "note: {d}")?;
        }
        Ok(())
    }
}
