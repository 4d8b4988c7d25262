//! Executable checks for the double-point theorems, each producing a
//! structured pass/fail report, plus the counterexample-search harness for
//! the "non-free implies a double point" conjecture.
//!
//! Checks never silently skip: when a hypothesis fails the report carries
//! `applicable = false` together with the failed hypothesis, so suites can
//! distinguish vacuous from verified. Checks whose statements assume
//! characteristic zero report not-applicable on prime fields unless the
//! caller explicitly waives the hypothesis, which exists to demonstrate that
//! the assumption is necessary.
//!
//! The bound `n2 >= k(m-k+1)` for `k <= m` over the complex numbers is the
//! same inequality as the modular-bound check; no separate check is provided
//! for it. Likewise the ideal-membership reformulation of "no line off the
//! modular pencil is free of double points" is equivalent to the
//! off-modular-doubles check and has no separate implementation.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::combin::{
    is_divisionally_free, is_supersolvable, modular_points, n2, n2_on_line, restriction,
    restriction_size, ModularWitness,
};
use crate::derivation::{is_free, mdr_with_cap, default_mdr_cap, FreenessVerdict};
use crate::error::{Error, Result};
use crate::families::{self, FamilySpec};
use crate::fileio::ArrangementFile;
use crate::geom::{Arrangement, Line};

pub const THEOREM_IDS: &[&str] = &[
    "supersolvable-half",
    "modular-bound",
    "free-addition",
    "mdr-bounds",
    "divisional-double",
    "supersolvable-max",
    "supersolvable-deletion",
    "off-modular-doubles",
    "kawanoue",
];

/// Outcome record for one theorem check on one arrangement.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub id: String,
    pub applicable: bool,
    /// The failed hypothesis when not applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_failed: Option<String>,
    /// Meaningful only when `applicable` is true.
    pub holds: bool,
    pub quantities: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl TheoremReport {
    fn not_applicable(id: &str, hypothesis: &str) -> Self {
        TheoremReport {
            id: id.to_string(),
            applicable: false,
            hypothesis_failed: Some(hypothesis.to_string()),
            holds: false,
            quantities: BTreeMap::new(),
            witness: None,
        }
    }

    fn outcome(id: &str, holds: bool) -> Self {
        TheoremReport {
            id: id.to_string(),
            applicable: true,
            hypothesis_failed: None,
            holds,
            quantities: BTreeMap::new(),
            witness: None,
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.quantities.insert(key.to_string(), value);
        self
    }

    fn with_witness(mut self, value: Value) -> Self {
        self.witness = Some(value);
        self
    }

    /// True when the check either holds or did not apply.
    pub fn passed(&self) -> bool {
        !self.applicable || self.holds
    }
}

/// Options shared by the checks that need them.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Waive the characteristic-zero hypothesis (to demonstrate failures over
    /// prime fields).
    pub allow_positive_char: bool,
    /// Override for the minimal-degree scan cap (default |A| - 2).
    pub max_degree: Option<usize>,
}

fn char_zero_or_waived(a: &Arrangement, opts: CheckOptions, id: &str) -> Option<TheoremReport> {
    if a.field().characteristic() != 0 && !opts.allow_positive_char {
        Some(TheoremReport::not_applicable(id, "characteristic zero"))
    } else {
        None
    }
}

fn supersolvable_witness(
    a: &Arrangement,
    id: &str,
) -> Result<std::result::Result<ModularWitness, TheoremReport>> {
    if !a.is_essential() {
        return Ok(Err(TheoremReport::not_applicable(id, "essential")));
    }
    match is_supersolvable(a)? {
        Some(w) => Ok(Ok(w)),
        None => Ok(Err(TheoremReport::not_applicable(id, "supersolvable"))),
    }
}

/// Supersolvable arrangements have at least |A|/2 double points.
pub fn check_supersolvable_half(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "supersolvable-half";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    let w = match supersolvable_witness(a, id)? {
        Ok(w) => w,
        Err(r) => return Ok(r),
    };
    let doubles = n2(a)?;
    let holds = 2 * doubles >= a.len();
    Ok(TheoremReport::outcome(id, holds)
        .with("size", json!(a.len()))
        .with("n2", json!(doubles))
        .with("m", json!(w.m))
        .with("k", json!(w.k)))
}

/// With (m, k) from the maximal modular point: n2 >= k(m-k+1) when k <= m and
/// n2 >= k when k >= m (both when k = m). Also asserts that the double points
/// counted on distinct non-modular lines are pairwise distinct.
pub fn check_modular_bound(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "modular-bound";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    let w = match supersolvable_witness(a, id)? {
        Ok(w) => w,
        Err(r) => return Ok(r),
    };
    let (m, k) = (w.m, w.k);
    let doubles = n2(a)?;
    let mut holds = true;
    let mut bounds = Vec::new();
    if k <= m {
        let bound = k * (m - k + 1);
        bounds.push(("k(m-k+1)", bound));
        holds &= doubles >= bound;
    }
    if k >= m {
        bounds.push(("k", k));
        holds &= doubles >= k;
    }
    // double points on distinct lines outside the modular pencil are
    // distinct, i.e. no double point lies on two such lines
    let lat = a.lattice()?;
    let through: Vec<usize> = lat
        .get(&w.point)
        .map(<[usize]>::to_vec)
        .unwrap_or_default();
    let distinct = lat.points().iter().all(|(_, lines)| {
        lines.len() != 2 || lines.iter().filter(|l| !through.contains(l)).count() <= 1
    });
    holds &= distinct;
    Ok(TheoremReport::outcome(id, holds)
        .with("m", json!(m))
        .with("k", json!(k))
        .with("n2", json!(doubles))
        .with(
            "bounds",
            json!(bounds
                .iter()
                .map(|(name, v)| json!({ "bound": name, "value": v }))
                .collect::<Vec<_>>()),
        )
        .with("off_pencil_doubles_distinct", json!(distinct)))
}

/// Adding a line to a free arrangement puts at least one double point on it.
/// The strict comparison n2(A) > n2(H) is recorded separately and does not
/// gate the verdict.
pub fn check_free_addition(
    a_prime: &Arrangement,
    line: &Line,
    opts: CheckOptions,
) -> Result<TheoremReport> {
    let id = "free-addition";
    if a_prime.line_index(line).is_some() {
        return Err(Error::LineAlreadyPresent);
    }
    if let Some(r) = char_zero_or_waived(a_prime, opts, id) {
        return Ok(r);
    }
    let waived = a_prime.field().characteristic() != 0;
    if !a_prime.is_essential() {
        return Ok(TheoremReport::not_applicable(id, "deleted arrangement essential"));
    }
    if !waived {
        let verdict = is_free(a_prime)?;
        if !verdict.is_free() {
            return Ok(TheoremReport::not_applicable(id, "deleted arrangement free"));
        }
    }
    let a = a_prime.with_line(line.clone())?;
    let on_line = n2_on_line(&a, line)?;
    let total = n2(&a)?;
    let holds = on_line > 0;
    Ok(TheoremReport::outcome(id, holds)
        .with("n2_on_added_line", json!(on_line))
        .with("n2_total", json!(total))
        .with("strict_holds", json!(total > on_line))
        .with("char_zero_waived", json!(waived))
        .with_witness(json!(line.to_string())))
}

/// Member form of the addition theorem, used by `verify --all`: for every
/// member line H whose deletion is free (and essential), H must carry a
/// double point.
pub fn check_free_addition_members(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "free-addition";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    let waived = a.field().characteristic() != 0;
    let mut holds = true;
    let mut qualifying = 0usize;
    let mut per_line = Vec::new();
    let mut failing = None;
    for (idx, h) in a.lines().iter().enumerate() {
        let deleted = a.without_line(h)?;
        let qualifies = if !deleted.is_essential() {
            false
        } else if waived {
            true // freeness of the deletion is assumed, not verified
        } else {
            is_free(&deleted)?.is_free()
        };
        if !qualifies {
            continue;
        }
        qualifying += 1;
        let on_line = n2_on_line(a, h)?;
        per_line.push(json!({ "line": idx, "n2_on_line": on_line }));
        if on_line == 0 {
            holds = false;
            failing.get_or_insert(idx);
        }
    }
    if qualifying == 0 {
        return Ok(TheoremReport::not_applicable(
            id,
            "no member line has a free essential deletion",
        ));
    }
    let mut report = TheoremReport::outcome(id, holds)
        .with("qualifying_lines", json!(qualifying))
        .with("per_line", json!(per_line))
        .with("char_zero_waived", json!(waived));
    if let Some(idx) = failing {
        report = report.with_witness(json!({
            "line": idx,
            "n2_on_line": 0,
        }));
    }
    Ok(report)
}

/// The minimal-degree bounds: with r = mdr(A), every member line H with
/// |A^H| > r has n2(H) >= |A^H| - r; globally
/// 2*n2(A) >= sum over those lines of (|A^H| - r), and 2*n2(A) >= their count.
pub fn check_mdr_bounds(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "mdr-bounds";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    if !a.is_essential() {
        return Ok(TheoremReport::not_applicable(id, "essential"));
    }
    let cap = default_mdr_cap(a).max(opts.max_degree.unwrap_or(0));
    let r = mdr_with_cap(a, cap)?;
    let doubles = n2(a)?;
    let mut holds = true;
    let mut exceeding = 0usize;
    let mut margin_sum = 0usize;
    let mut per_line = Vec::new();
    for h in a.lines() {
        let size = restriction_size(a, h)?;
        if size <= r {
            continue;
        }
        exceeding += 1;
        margin_sum += size - r;
        let on_line = n2_on_line(a, h)?;
        per_line.push(json!({
            "restriction_size": size,
            "n2_on_line": on_line,
            "required": size - r,
        }));
        holds &= on_line >= size - r;
    }
    holds &= 2 * doubles >= margin_sum;
    holds &= 2 * doubles >= exceeding;
    Ok(TheoremReport::outcome(id, holds)
        .with("mdr", json!(r))
        .with("n2", json!(doubles))
        .with("lines_exceeding_mdr", json!(exceeding))
        .with("half_sum_bound", json!(margin_sum))
        .with("per_line", json!(per_line)))
}

/// Divisionally free arrangements contain a double point.
pub fn check_divisional_double(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "divisional-double";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    if !a.is_essential() {
        return Ok(TheoremReport::not_applicable(id, "essential"));
    }
    let (free, witness) = is_divisionally_free(a)?;
    if !free {
        return Ok(TheoremReport::not_applicable(id, "divisionally free"));
    }
    let doubles = n2(a)?;
    Ok(TheoremReport::outcome(id, doubles > 0)
        .with("n2", json!(doubles))
        .with("division_witness_line", json!(witness)))
}

/// Supersolvable arrangements with a line outside the modular pencil have at
/// least max(|A| - m, m) double points.
pub fn check_supersolvable_max(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "supersolvable-max";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    let w = match supersolvable_witness(a, id)? {
        Ok(w) => w,
        Err(r) => return Ok(r),
    };
    if w.k == 0 {
        return Ok(TheoremReport::not_applicable(id, "a line outside the modular pencil"));
    }
    let doubles = n2(a)?;
    let bound = (a.len() - w.m).max(w.m);
    Ok(TheoremReport::outcome(id, doubles >= bound)
        .with("m", json!(w.m))
        .with("k", json!(w.k))
        .with("bound", json!(bound))
        .with("n2", json!(doubles)))
}

/// Deleting one line from a supersolvable arrangement leaves a double point,
/// provided the deletion is not a pencil.
pub fn check_supersolvable_deletion(
    a: &Arrangement,
    h: &Line,
    opts: CheckOptions,
) -> Result<TheoremReport> {
    let id = "supersolvable-deletion";
    if a.line_index(h).is_none() {
        return Err(Error::LineNotInArrangement);
    }
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    if supersolvable_witness(a, id)?.is_err() {
        return Ok(TheoremReport::not_applicable(id, "supersolvable"));
    }
    let deleted = a.without_line(h)?;
    if deleted.len() < 2 || deleted.is_pencil()? {
        return Ok(TheoremReport::not_applicable(id, "deletion is not a pencil"));
    }
    let doubles = n2(&deleted)?;
    Ok(TheoremReport::outcome(id, doubles > 0)
        .with("n2_after_deletion", json!(doubles))
        .with_witness(json!(h.to_string())))
}

/// Member form over all deletions, used by `verify --all`.
pub fn check_supersolvable_deletion_members(
    a: &Arrangement,
    opts: CheckOptions,
) -> Result<TheoremReport> {
    let id = "supersolvable-deletion";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    if supersolvable_witness(a, id)?.is_err() {
        return Ok(TheoremReport::not_applicable(id, "supersolvable"));
    }
    let mut qualifying = 0usize;
    let mut holds = true;
    let mut witness = None;
    for h in a.lines() {
        let deleted = a.without_line(h)?;
        if deleted.len() < 2 || deleted.is_pencil()? {
            continue;
        }
        qualifying += 1;
        let doubles = n2(&deleted)?;
        if doubles == 0 {
            holds = false;
            witness.get_or_insert_with(|| json!(h.to_string()));
        }
    }
    if qualifying == 0 {
        return Ok(TheoremReport::not_applicable(id, "every deletion is a pencil"));
    }
    let mut report =
        TheoremReport::outcome(id, holds).with("qualifying_deletions", json!(qualifying));
    if let Some(w) = witness {
        report = report.with_witness(w);
    }
    Ok(report)
}

/// No supersolvable arrangement with a modular point of mu >= 2 has a line
/// outside the pencil free of double points: every modular point with
/// mu(p) >= 2 is checked.
pub fn check_off_modular_doubles(a: &Arrangement, opts: CheckOptions) -> Result<TheoremReport> {
    let id = "off-modular-doubles";
    if let Some(r) = char_zero_or_waived(a, opts, id) {
        return Ok(r);
    }
    if supersolvable_witness(a, id)?.is_err() {
        return Ok(TheoremReport::not_applicable(id, "supersolvable"));
    }
    let points = modular_points(a)?;
    let heavy: Vec<_> = points.iter().filter(|(_, m)| *m >= 3).collect();
    if heavy.is_empty() {
        return Ok(TheoremReport::not_applicable(id, "a modular point with mu >= 2"));
    }
    let lat = a.lattice()?;
    let mut holds = true;
    let mut witness = None;
    for (p, _) in &heavy {
        let through = lat.get(p).expect("modular point is in the lattice");
        for (idx, h) in a.lines().iter().enumerate() {
            if through.contains(&idx) {
                continue;
            }
            if n2_on_line(a, h)? == 0 {
                holds = false;
                witness.get_or_insert_with(|| {
                    json!({ "modular_point": p.to_string(), "line": idx })
                });
            }
        }
    }
    let mut report = TheoremReport::outcome(id, holds)
        .with("modular_points_checked", json!(heavy.len()));
    if let Some(w) = witness {
        report = report.with_witness(w);
    }
    Ok(report)
}

/// Self-contained certificate for the twelve-line monomial arrangement: it is
/// free with exponents (1, 5, 6); every restriction has five points with
/// multiplicities {3,2,2,2,2}; every single-line deletion is non-free with
/// exactly four double points, fewer than (|A|-1)/2.
pub fn kawanoue_certificate() -> Result<TheoremReport> {
    let id = "kawanoue";
    let a = families::monomial(4, false)?;
    let mut holds = true;
    let verdict = is_free(&a)?;
    holds &= verdict.exponents() == Some((1, 5, 6));
    let mut restriction_ok = true;
    for h in a.lines() {
        let r = restriction(&a, h)?;
        restriction_ok &= r.multiplicity_multiset() == vec![3, 2, 2, 2, 2];
    }
    holds &= restriction_ok;
    let mut deletions_nonfree = true;
    let mut deletion_n2_ok = true;
    for h in a.lines() {
        let deleted = a.without_line(h)?;
        deletions_nonfree &= !is_free(&deleted)?.is_free();
        let doubles = n2(&deleted)?;
        // 4 < 11/2
        deletion_n2_ok &= doubles == 4 && 2 * doubles < a.len() - 1;
    }
    holds &= deletions_nonfree && deletion_n2_ok;
    Ok(TheoremReport::outcome(id, holds)
        .with("size", json!(a.len()))
        .with(
            "exponents",
            json!(verdict.exponents().map(|e| vec![e.0, e.1, e.2])),
        )
        .with("restriction_multiset_ok", json!(restriction_ok))
        .with("all_deletions_nonfree", json!(deletions_nonfree))
        .with("n2_of_deletions", json!(4))
        .with("deletion_n2_below_half", json!(deletion_n2_ok)))
}

/// Runs every arrangement-level check (the member forms of the addition and
/// deletion theorems stand in for their single-line variants).
pub fn run_all(a: &Arrangement, opts: CheckOptions) -> Result<Vec<TheoremReport>> {
    Ok(vec![
        check_supersolvable_half(a, opts)?,
        check_modular_bound(a, opts)?,
        check_free_addition_members(a, opts)?,
        check_mdr_bounds(a, opts)?,
        check_divisional_double(a, opts)?,
        check_supersolvable_max(a, opts)?,
        check_supersolvable_deletion_members(a, opts)?,
        check_off_modular_doubles(a, opts)?,
    ])
}

/// Wraps reports into the versioned verification document.
pub fn to_document(reports: &[TheoremReport]) -> Value {
    json!({
        "report_version": crate::report::REPORT_VERSION,
        "reports": reports,
        "all_applicable_hold": reports.iter().all(TheoremReport::passed),
    })
}

/// Runs one check by id.
pub fn run_one(a: &Arrangement, id: &str, opts: CheckOptions) -> Result<TheoremReport> {
    match id {
        "supersolvable-half" => check_supersolvable_half(a, opts),
        "modular-bound" => check_modular_bound(a, opts),
        "free-addition" => check_free_addition_members(a, opts),
        "mdr-bounds" => check_mdr_bounds(a, opts),
        "divisional-double" => check_divisional_double(a, opts),
        "supersolvable-max" => check_supersolvable_max(a, opts),
        "supersolvable-deletion" => check_supersolvable_deletion_members(a, opts),
        "off-modular-doubles" => check_off_modular_doubles(a, opts),
        "kawanoue" => kawanoue_certificate(),
        _ => Err(Error::UnknownTheorem(id.to_string())),
    }
}

// ---------------------------------------------------------------------------
// conjecture scan

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CorpusKind {
    /// Named free arrangements first, then a rotation of seeded generic,
    /// supersolvable, grid, and near-pencil members.
    Mixed,
    /// Seeded generic arrangements with sizes cycling through lo..=hi.
    Generic { lo: usize, hi: usize },
    /// Seeded supersolvable arrangements of varying (m, k).
    Supersolvable,
    /// The named built-in arrangements over characteristic zero.
    Named,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub trials: usize,
    pub seed: u64,
}

impl CorpusSpec {
    pub fn parse(text: &str, trials: usize, seed: u64) -> Result<Self> {
        let kind = match text {
            "mixed" => CorpusKind::Mixed,
            "supersolvable" => CorpusKind::Supersolvable,
            "named" => CorpusKind::Named,
            other => {
                if let Some(range) = other.strip_prefix("generic:") {
                    let (lo, hi) = range
                        .split_once("..")
                        .ok_or_else(|| Error::FamilyParameter(format!(
                            "generic corpus wants generic:LO..HI, got {other:?}"
                        )))?;
                    let lo: usize = lo.parse().map_err(|_| {
                        Error::FamilyParameter(format!("bad corpus bound in {other:?}"))
                    })?;
                    let hi: usize = hi.parse().map_err(|_| {
                        Error::FamilyParameter(format!("bad corpus bound in {other:?}"))
                    })?;
                    if lo < 3 || hi < lo {
                        return Err(Error::FamilyParameter(format!(
                            "generic corpus needs 3 <= LO <= HI, got {other:?}"
                        )));
                    }
                    CorpusKind::Generic { lo, hi }
                } else {
                    return Err(Error::FamilyParameter(format!(
                        "unknown corpus {text:?} (expected mixed, named, supersolvable, generic:LO..HI)"
                    )));
                }
            }
        };
        Ok(CorpusSpec { kind, trials, seed })
    }

    fn named_specs() -> Vec<FamilySpec> {
        vec![
            FamilySpec::Monomial { n: 2, full: false },
            FamilySpec::Monomial { n: 2, full: true },
            FamilySpec::Monomial { n: 3, full: false },
            FamilySpec::Monomial { n: 3, full: true },
            FamilySpec::Monomial { n: 4, full: false },
            FamilySpec::NearPencil { n: 5 },
            FamilySpec::Grid { a: 2, b: 2 },
        ]
    }

    /// The family of the corpus member at an index; deterministic in
    /// (kind, seed, index).
    pub fn member(&self, index: usize) -> FamilySpec {
        let derived = self
            .seed
            .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match self.kind {
            CorpusKind::Named => {
                let specs = Self::named_specs();
                specs[index % specs.len()].clone()
            }
            CorpusKind::Generic { lo, hi } => FamilySpec::Generic {
                n: lo + index % (hi - lo + 1),
                seed: derived,
            },
            CorpusKind::Supersolvable => FamilySpec::RandomSupersolvable {
                m: 2 + index % 5,
                k: 1 + (index / 5) % 5,
                seed: derived,
            },
            CorpusKind::Mixed => {
                let specs = Self::named_specs();
                if index < specs.len() {
                    return specs[index].clone();
                }
                let i = index - specs.len();
                match i % 5 {
                    0 => FamilySpec::Generic {
                        n: 5 + i % 5,
                        seed: derived,
                    },
                    1 => FamilySpec::RandomSupersolvable {
                        m: 2 + i % 5,
                        k: 1 + (i / 5) % 5,
                        seed: derived,
                    },
                    2 => FamilySpec::Grid {
                        a: 1 + i % 4,
                        b: 1 + (i / 5) % 3,
                    },
                    3 => FamilySpec::Random {
                        n: 4 + i % 6,
                        seed: derived,
                    },
                    _ => FamilySpec::NearPencil { n: 3 + i % 7 },
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub index: usize,
    pub label: String,
    pub size: usize,
    pub n2: usize,
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<(usize, usize, usize)>,
    /// Non-free with no double point: a counterexample candidate.
    pub candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeStats {
    pub size: usize,
    pub count: usize,
    pub free: usize,
    pub nonfree: usize,
    pub n2_min: usize,
    pub n2_max: usize,
    /// Members with 2*n2 >= |A|.
    pub satisfies_half: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub report_version: u32,
    pub corpus: CorpusSpec,
    pub records: Vec<ScanRecord>,
    pub candidates: Vec<(ScanRecord, ArrangementFile)>,
    /// Empirical distribution of n2 against |A|/2, grouped by size.
    pub stats: Vec<SizeStats>,
}

impl ScanReport {
    pub fn has_candidates(&self) -> bool {
        !self.candidates.is_empty()
    }
}

/// Runs the scan with the real freeness decision.
pub fn conjecture_scan(corpus: &CorpusSpec) -> Result<ScanReport> {
    conjecture_scan_with(corpus, &is_free)
}

/// Scan with an injectable freeness judge (the test harness forces NonFree
/// verdicts through this to exercise the candidate path).
pub fn conjecture_scan_with(
    corpus: &CorpusSpec,
    judge: &(dyn Fn(&Arrangement) -> Result<FreenessVerdict> + Sync),
) -> Result<ScanReport> {
    use rayon::prelude::*;

    let results: Vec<Result<(ScanRecord, Option<ArrangementFile>)>> = (0..corpus.trials)
        .into_par_iter()
        .map(|index| {
            let spec = corpus.member(index);
            let a = spec.build()?;
            let verdict = judge(&a)?;
            let doubles = n2(&a)?;
            let candidate = !verdict.is_free() && doubles == 0;
            let record = ScanRecord {
                index,
                label: spec.label(),
                size: a.len(),
                n2: doubles,
                free: verdict.is_free(),
                exponents: verdict.exponents(),
                candidate,
            };
            let file = candidate.then(|| {
                ArrangementFile::from_arrangement(
                    &a,
                    Some(crate::fileio::FileMeta {
                        name: Some(record.label.clone()),
                        family: Some(record.label.clone()),
                        seed: None,
                    }),
                )
            });
            Ok((record, file))
        })
        .collect();

    let mut records = Vec::with_capacity(corpus.trials);
    let mut candidates = Vec::new();
    for r in results {
        let (record, file) = r?;
        if let Some(file) = file {
            candidates.push((record.clone(), file));
        }
        records.push(record);
    }
    // merge is deterministic: par_iter preserves index order on collect,
    // and records carry their index anyway
    records.sort_by_key(|r| r.index);
    candidates.sort_by_key(|(r, _)| r.index);

    let mut by_size: BTreeMap<usize, SizeStats> = BTreeMap::new();
    for r in &records {
        let s = by_size.entry(r.size).or_insert(SizeStats {
            size: r.size,
            count: 0,
            free: 0,
            nonfree: 0,
            n2_min: usize::MAX,
            n2_max: 0,
            satisfies_half: 0,
        });
        s.count += 1;
        if r.free {
            s.free += 1;
        } else {
            s.nonfree += 1;
        }
        s.n2_min = s.n2_min.min(r.n2);
        s.n2_max = s.n2_max.max(r.n2);
        if 2 * r.n2 >= r.size {
            s.satisfies_half += 1;
        }
    }

    Ok(ScanReport {
        report_version: 1,
        corpus: corpus.clone(),
        records,
        candidates,
        stats: by_size.into_values().collect(),
    })
}
