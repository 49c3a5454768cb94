//! Verification campaigns over parameter grids and the closed-form vs.
//! elimination benchmark.
//!
//! Cases are enumerated in a fixed order, evaluated (possibly in parallel),
//! and collected back in enumeration order, so a report depends only on the
//! grid and seed apart from its timing fields.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedforms::{
    carlitz_d, corollary8_det, corollary8_spec, corollary9_det, corollary9_spec, generalized_d,
    theorem5_with, theorem7_with,
};
use crate::error::{Error, Result};
use crate::identities::CatalanFamily;
use crate::matrices::{
    build_product_matrix, desnanot_jacobi_sides, det_bareiss, det_dodgson, max_entry_bits,
    power_matrix_from, product_matrix_from, ExactMatrix, PowerMatrixSpec, ProductMatrixSpec,
};
use crate::scalar::{format_scalar, int, Scalar};
use crate::sequences::{HoradamSequence, RecurrenceParams};
use crate::sympoly::{corollary4_sides, lemma3_sides, lemma6_bilinear_sides, lemma6_sides};

pub const SCHEMA_VERSION: u32 = 1;

/// Inclusive integer interval, written `[lo, hi]` in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn len(self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    fn clamp_to(self, lo: i64, hi: i64) -> Self {
        Self::new(self.lo.max(lo), self.hi.min(hi))
    }

    fn sample(self, rng: &mut impl Rng) -> i64 {
        rng.gen_range(self.lo..=self.hi)
    }
}

impl From<(i64, i64)> for IntRange {
    fn from((lo, hi): (i64, i64)) -> Self {
        Self { lo, hi }
    }
}

impl From<IntRange> for (i64, i64) {
    fn from(r: IntRange) -> Self {
        (r.lo, r.hi)
    }
}

/// Second sequence `Y` paired with `W` in the Catalan target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partner {
    /// `Y = W`.
    Same,
    /// `Y = W(a1, a0; c1, c2)`.
    Swapped,
    /// `Y = U`, the fundamental sequence.
    Fundamental,
}

impl Partner {
    fn params(self, w: &RecurrenceParams) -> RecurrenceParams {
        match self {
            Partner::Same => w.clone(),
            Partner::Swapped => RecurrenceParams::new(
                w.a1().clone(),
                w.a0().clone(),
                w.c1().clone(),
                w.c2().clone(),
            )
            .expect("c2 unchanged"),
            Partner::Fundamental => w.fundamental_of(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalanGrid {
    pub s: IntRange,
    pub i: IntRange,
    pub j: IntRange,
    pub partners: Vec<Partner>,
}

impl Default for CatalanGrid {
    fn default() -> Self {
        Self {
            s: IntRange::new(-2, 3),
            i: IntRange::new(-2, 3),
            j: IntRange::new(-2, 3),
            partners: vec![Partner::Same, Partner::Swapped],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingPolicy {
    pub count: usize,
    pub entry_range: IntRange,
    pub seed: u64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        Self {
            count: 500,
            entry_range: IntRange::new(-2, 3),
            seed: 0x5eed_f1b0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesnanotGrid {
    pub dims: IntRange,
    pub per_dim: usize,
    pub entry_range: IntRange,
    pub seed: u64,
}

impl Default for DesnanotGrid {
    fn default() -> Self {
        Self {
            dims: IntRange::new(3, 5),
            per_dim: 200,
            entry_range: IntRange::new(-9, 9),
            seed: 0xd0d6_5011,
        }
    }
}

/// Parameter grid for a verification campaign. Every field has a default, so
/// `{}` is a valid grid document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub a0: IntRange,
    pub a1: IntRange,
    pub c1: IntRange,
    /// Zero is skipped.
    pub c2: IntRange,
    pub r: IntRange,
    /// `r` range for the product-matrix targets (thm7, cor8, cor9).
    pub r_product: IntRange,
    pub s: IntRange,
    pub k: IntRange,
    pub n: IntRange,
    /// `n` range for cor9.
    pub n_product: IntRange,
    pub p: IntRange,
    pub catalan: CatalanGrid,
    /// Random `(d, e)` specs for thm7.
    pub sampling: SamplingPolicy,
    pub desnanot: DesnanotGrid,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            a0: IntRange::new(-2, 2),
            a1: IntRange::new(-2, 2),
            c1: IntRange::new(-2, 2),
            c2: IntRange::new(-2, 2),
            r: IntRange::new(0, 4),
            r_product: IntRange::new(0, 3),
            s: IntRange::new(-2, 3),
            k: IntRange::new(-2, 3),
            n: IntRange::new(-2, 3),
            n_product: IntRange::new(0, 0),
            p: IntRange::new(-2, 3),
            catalan: CatalanGrid::default(),
            sampling: SamplingPolicy::default(),
            desnanot: DesnanotGrid::default(),
        }
    }
}

impl GridSpec {
    /// Only the Fibonacci parameters `(0, 1; 1, 1)`.
    pub fn fibonacci_only() -> Self {
        Self {
            a0: IntRange::new(0, 0),
            a1: IntRange::new(1, 1),
            c1: IntRange::new(1, 1),
            c2: IntRange::new(1, 1),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let grid: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("grid: {e}")))?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("a0", self.a0),
            ("a1", self.a1),
            ("c1", self.c1),
            ("c2", self.c2),
            ("r", self.r),
            ("r_product", self.r_product),
            ("s", self.s),
            ("k", self.k),
            ("n", self.n),
            ("n_product", self.n_product),
            ("p", self.p),
            ("catalan.s", self.catalan.s),
            ("catalan.i", self.catalan.i),
            ("catalan.j", self.catalan.j),
            ("sampling.entry_range", self.sampling.entry_range),
            ("desnanot.dims", self.desnanot.dims),
            ("desnanot.entry_range", self.desnanot.entry_range),
        ];
        for (name, range) in named {
            if range.is_empty() {
                return Err(Error::Config(format!(
                    "range {name} = [{}, {}] is empty",
                    range.lo, range.hi
                )));
            }
        }
        if self.c2 == IntRange::new(0, 0) {
            return Err(Error::Config("c2 range contains only 0".into()));
        }
        if self.r.lo < 0 || self.r_product.lo < 0 {
            return Err(Error::Config("r ranges must be nonnegative".into()));
        }
        if self.desnanot.dims.lo < 3 {
            return Err(Error::Config("desnanot dims must be at least 3".into()));
        }
        if self.catalan.partners.is_empty() {
            return Err(Error::Config("catalan.partners is empty".into()));
        }
        Ok(())
    }

    /// Integer parameter quadruples in lexicographic order, `c2 = 0` skipped.
    pub fn params(&self) -> Vec<(i64, i64, i64, i64)> {
        let mut out = Vec::new();
        for a0 in self.a0.iter() {
            for a1 in self.a1.iter() {
                for c1 in self.c1.iter() {
                    for c2 in self.c2.iter().filter(|&c| c != 0) {
                        out.push((a0, a1, c1, c2));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Catalan,
    Eq1,
    Eq2,
    Thm5,
    Thm7,
    Cor8,
    Cor9,
    Lemma3,
    Lemma4,
    Lemma6,
    Desnanot,
}

impl Target {
    pub const ALL: [Target; 11] = [
        Target::Catalan,
        Target::Eq1,
        Target::Eq2,
        Target::Thm5,
        Target::Thm7,
        Target::Cor8,
        Target::Cor9,
        Target::Lemma3,
        Target::Lemma4,
        Target::Lemma6,
        Target::Desnanot,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Target::Catalan => "catalan",
            Target::Eq1 => "eq1",
            Target::Eq2 => "eq2",
            Target::Thm5 => "thm5",
            Target::Thm7 => "thm7",
            Target::Cor8 => "cor8",
            Target::Cor9 => "cor9",
            Target::Lemma3 => "lemma3",
            Target::Lemma4 => "lemma4",
            Target::Lemma6 => "lemma6",
            Target::Desnanot => "desnanot",
        }
    }

    /// Parses a comma-separated list, or `all`.
    pub fn parse_list(text: &str) -> Result<BTreeSet<Target>> {
        if text.trim() == "all" {
            return Ok(Self::ALL.into_iter().collect());
        }
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown target {s:?}")))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Everything needed to replay one case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<Partner>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<i64>>,
    /// Row-major matrix entries (desnanot cases).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<i64>>,
}

impl CaseInputs {
    fn with_params((a0, a1, c1, c2): (i64, i64, i64, i64)) -> Self {
        Self {
            a0: Some(a0),
            a1: Some(a1),
            c1: Some(c1),
            c2: Some(c2),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub target: String,
    pub inputs: CaseInputs,
    pub closed_form: String,
    pub oracle: String,
    /// A third independently computed value that must agree, when the target has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate: Option<String>,
    pub equal: bool,
    pub elapsed_closed_ns: u64,
    pub elapsed_oracle_ns: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub targets: Vec<String>,
    pub grid: GridSpec,
    pub summary: Summary,
    pub records: Vec<CaseRecord>,
}

impl VerificationReport {
    pub fn records_for(&self, target: Target) -> impl Iterator<Item = &CaseRecord> {
        self.records
            .iter()
            .filter(move |rec| rec.target == target.id())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with every timing field zeroed.
    pub fn without_timings(&self) -> Self {
        let mut copy = self.clone();
        for rec in &mut copy.records {
            rec.elapsed_closed_ns = 0;
            rec.elapsed_oracle_ns = 0;
        }
        copy
    }
}

#[derive(Clone, Debug)]
enum Case {
    Catalan {
        params: (i64, i64, i64, i64),
        partner: Partner,
        s: i64,
        i: i64,
        j: i64,
    },
    Eq1 {
        r: u32,
        n: i64,
    },
    Eq2 {
        r: u32,
        s: i64,
        k: i64,
        n: i64,
    },
    Thm5 {
        params: (i64, i64, i64, i64),
        r: u32,
        s: i64,
        k: i64,
        n: i64,
    },
    Thm7 {
        params: (i64, i64, i64, i64),
        s: i64,
        k: i64,
        n: i64,
        d: Vec<i64>,
        e: Vec<i64>,
    },
    Cor8 {
        r: u32,
        s: i64,
        k: i64,
    },
    Cor9 {
        params: (i64, i64, i64, i64),
        r: u32,
        s: i64,
        k: i64,
        n: i64,
        p: i64,
    },
    Lemma {
        target: Target,
        r: u32,
    },
    Desnanot {
        dim: usize,
        entries: Vec<i64>,
    },
}

fn to_params((a0, a1, c1, c2): (i64, i64, i64, i64)) -> RecurrenceParams {
    RecurrenceParams::from_ints(a0, a1, c1, c2).expect("grid skips c2 = 0")
}

fn u32_range(range: IntRange) -> impl Iterator<Item = u32> {
    range.iter().map(|r| r as u32)
}

fn enumerate(grid: &GridSpec, target: Target) -> Vec<Case> {
    let mut cases = Vec::new();
    let params = grid.params();
    match target {
        Target::Catalan => {
            for &pq in &params {
                for &partner in &grid.catalan.partners {
                    for s in grid.catalan.s.iter() {
                        for i in grid.catalan.i.iter() {
                            for j in grid.catalan.j.iter() {
                                cases.push(Case::Catalan {
                                    params: pq,
                                    partner,
                                    s,
                                    i,
                                    j,
                                });
                            }
                        }
                    }
                }
            }
        }
        Target::Eq1 => {
            for r in u32_range(grid.r) {
                for n in grid.n.iter() {
                    cases.push(Case::Eq1 { r, n });
                }
            }
        }
        Target::Eq2 => {
            for r in u32_range(grid.r) {
                for s in grid.s.iter() {
                    for k in grid.k.iter() {
                        for n in grid.n.iter() {
                            cases.push(Case::Eq2 { r, s, k, n });
                        }
                    }
                }
            }
        }
        Target::Thm5 => {
            for &pq in &params {
                for r in u32_range(grid.r) {
                    for s in grid.s.iter() {
                        for k in grid.k.iter() {
                            for n in grid.n.iter() {
                                cases.push(Case::Thm5 {
                                    params: pq,
                                    r,
                                    s,
                                    k,
                                    n,
                                });
                            }
                        }
                    }
                }
            }
        }
        Target::Thm7 => {
            let policy = &grid.sampling;
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
            for _ in 0..policy.count {
                let pq = params[rng.gen_range(0..params.len())];
                let r = grid.r_product.sample(&mut rng) as usize;
                let (s, k, n) = (
                    grid.s.sample(&mut rng),
                    grid.k.sample(&mut rng),
                    grid.n.sample(&mut rng),
                );
                let d = (0..r)
                    .map(|_| policy.entry_range.sample(&mut rng))
                    .collect();
                let e = (0..r)
                    .map(|_| policy.entry_range.sample(&mut rng))
                    .collect();
                cases.push(Case::Thm7 {
                    params: pq,
                    s,
                    k,
                    n,
                    d,
                    e,
                });
            }
        }
        Target::Cor8 => {
            for r in u32_range(grid.r_product) {
                for s in grid.s.iter() {
                    for k in grid.k.iter() {
                        cases.push(Case::Cor8 { r, s, k });
                    }
                }
            }
        }
        Target::Cor9 => {
            for &pq in &params {
                for r in u32_range(grid.r_product) {
                    for s in grid.s.iter() {
                        for k in grid.k.iter() {
                            for n in grid.n_product.iter() {
                                for p in grid.p.iter() {
                                    cases.push(Case::Cor9 {
                                        params: pq,
                                        r,
                                        s,
                                        k,
                                        n,
                                        p,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Target::Lemma3 | Target::Lemma4 | Target::Lemma6 => {
            let max = if target == Target::Lemma4 { 3 } else { 4 };
            for r in u32_range(grid.r.clamp_to(0, max)) {
                cases.push(Case::Lemma { target, r });
            }
        }
        Target::Desnanot => {
            let g = &grid.desnanot;
            for dim in g.dims.iter() {
                let dim = dim as usize;
                let mut rng = ChaCha8Rng::seed_from_u64(
                    g.seed ^ (dim as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                );
                for _ in 0..g.per_dim {
                    let entries = (0..dim * dim)
                        .map(|_| g.entry_range.sample(&mut rng))
                        .collect();
                    cases.push(Case::Desnanot { dim, entries });
                }
            }
        }
    }
    cases
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn record(
    target: Target,
    inputs: CaseInputs,
    closed: (Scalar, Duration),
    oracle: (Scalar, Duration),
    alternate: Option<Scalar>,
) -> CaseRecord {
    let equal = closed.0 == oracle.0 && alternate.as_ref().is_none_or(|a| *a == closed.0);
    CaseRecord {
        target: target.id().to_string(),
        inputs,
        closed_form: format_scalar(&closed.0),
        oracle: format_scalar(&oracle.0),
        alternate: alternate.as_ref().map(format_scalar),
        equal,
        elapsed_closed_ns: closed.1.as_nanos() as u64,
        elapsed_oracle_ns: oracle.1.as_nanos() as u64,
    }
}

fn evaluate(case: Case) -> CaseRecord {
    match case {
        Case::Catalan {
            params,
            partner,
            s,
            i,
            j,
        } => {
            let w = to_params(params);
            let family =
                CatalanFamily::new(&w, &partner.params(&w)).expect("partners share coefficients");
            let (inst, elapsed) = timed(|| family.general(s, i, j));
            let inputs = CaseInputs {
                partner: Some(partner),
                s: Some(s),
                i: Some(i),
                j: Some(j),
                ..CaseInputs::with_params(params)
            };
            // lhs and rhs come out of one evaluation; split the time evenly
            record(
                Target::Catalan,
                inputs,
                (inst.rhs, elapsed / 2),
                (inst.lhs, elapsed / 2),
                None,
            )
        }
        Case::Eq1 { r, n } => {
            let closed = timed(|| carlitz_d(r, n).value);
            let fib = HoradamSequence::fibonacci();
            let oracle = timed(|| det_bareiss(&power_matrix_from(&fib, r, 0, 1, n)));
            let inputs = CaseInputs {
                r: Some(r.into()),
                n: Some(n),
                ..Default::default()
            };
            record(Target::Eq1, inputs, closed, oracle, None)
        }
        Case::Eq2 { r, s, k, n } => {
            let closed = timed(|| generalized_d(r, s, k, n).value);
            let fib = HoradamSequence::fibonacci();
            let oracle = timed(|| det_bareiss(&power_matrix_from(&fib, r, s, k, n)));
            let inputs = CaseInputs {
                r: Some(r.into()),
                s: Some(s),
                k: Some(k),
                n: Some(n),
                ..Default::default()
            };
            record(Target::Eq2, inputs, closed, oracle, None)
        }
        Case::Thm5 { params, r, s, k, n } => {
            let p = to_params(params);
            let u = HoradamSequence::new(p.fundamental_of());
            let w = HoradamSequence::new(p.clone());
            let closed = timed(|| theorem5_with(&p, &u, r, s, k, n).value);
            let oracle = timed(|| det_bareiss(&power_matrix_from(&w, r, s, k, n)));
            let inputs = CaseInputs {
                r: Some(r.into()),
                s: Some(s),
                k: Some(k),
                n: Some(n),
                ..CaseInputs::with_params(params)
            };
            record(Target::Thm5, inputs, closed, oracle, None)
        }
        Case::Thm7 {
            params,
            s,
            k,
            n,
            d,
            e,
        } => {
            let p = to_params(params);
            let spec = ProductMatrixSpec::new(p.clone(), s, k, n, d.clone(), e.clone())
                .expect("equal lengths");
            let u = HoradamSequence::new(p.fundamental_of());
            let w = HoradamSequence::new(p.clone());
            let closed = timed(|| theorem7_with(&p, &u, &spec).value);
            let oracle = timed(|| det_bareiss(&product_matrix_from(&w, &spec)));
            let inputs = CaseInputs {
                r: Some(d.len() as i64),
                s: Some(s),
                k: Some(k),
                n: Some(n),
                d: Some(d),
                e: Some(e),
                ..CaseInputs::with_params(params)
            };
            record(Target::Thm7, inputs, closed, oracle, None)
        }
        Case::Cor8 { r, s, k } => {
            let spec = corollary8_spec(r, s, k);
            let closed = timed(|| corollary8_det(r, s, k).value);
            let oracle = timed(|| det_bareiss(&build_product_matrix(&spec)));
            let fib = HoradamSequence::fibonacci();
            let via_thm7 = theorem7_with(&spec.params, &fib, &spec).value;
            let inputs = CaseInputs {
                r: Some(r.into()),
                s: Some(s),
                k: Some(k),
                ..Default::default()
            };
            record(Target::Cor8, inputs, closed, oracle, Some(via_thm7))
        }
        Case::Cor9 {
            params,
            r,
            s,
            k,
            n,
            p: shift,
        } => {
            let p = to_params(params);
            let spec = corollary9_spec(&p, r, s, k, n, shift);
            let w = HoradamSequence::new(p.clone());
            let u = HoradamSequence::new(p.fundamental_of());
            let closed = timed(|| corollary9_det(&p, r, s, k, n, shift).value);
            let oracle = timed(|| det_bareiss(&product_matrix_from(&w, &spec)));
            let via_thm7 = theorem7_with(&p, &u, &spec).value;
            let inputs = CaseInputs {
                r: Some(r.into()),
                s: Some(s),
                k: Some(k),
                n: Some(n),
                p: Some(shift),
                ..CaseInputs::with_params(params)
            };
            record(Target::Cor9, inputs, closed, oracle, Some(via_thm7))
        }
        Case::Lemma { target, r } => {
            let (sides, elapsed) = timed(|| match target {
                Target::Lemma3 => lemma3_sides(r).map(|id| vec![id]),
                Target::Lemma4 => corollary4_sides(r).map(|id| vec![id]),
                _ if r <= 3 => lemma6_sides(r).and_then(|a| Ok(vec![a, lemma6_bilinear_sides(r)?])),
                _ => lemma6_sides(r).map(|id| vec![id]),
            });
            let sides = sides.expect("r clamped to the supported range");
            let describe = |terms: Vec<usize>| {
                terms
                    .iter()
                    .map(|t| format!("{t} terms"))
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            CaseRecord {
                target: target.id().to_string(),
                inputs: CaseInputs {
                    r: Some(r.into()),
                    ..Default::default()
                },
                closed_form: describe(sides.iter().map(|id| id.rhs.num_terms()).collect()),
                oracle: describe(sides.iter().map(|id| id.lhs.num_terms()).collect()),
                alternate: None,
                equal: sides.iter().all(|id| id.holds()),
                elapsed_closed_ns: elapsed.as_nanos() as u64 / 2,
                elapsed_oracle_ns: elapsed.as_nanos() as u64 / 2,
            }
        }
        Case::Desnanot { dim, entries } => {
            let m =
                ExactMatrix::new(dim, entries.iter().map(|&v| int(v)).collect()).expect("square");
            let ((lhs, rhs), elapsed) = timed(|| desnanot_jacobi_sides(&m).expect("dim >= 3"));
            let engines = timed(|| (det_bareiss(&m), det_dodgson(&m)));
            let engines_agree = (engines.0).0 == (engines.0).1;
            let mut rec = record(
                Target::Desnanot,
                CaseInputs {
                    matrix: Some(entries),
                    ..Default::default()
                },
                (lhs, elapsed),
                (rhs, engines.1),
                None,
            );
            rec.alternate = Some(format!(
                "bareiss={} dodgson={}",
                format_scalar(&(engines.0).0),
                format_scalar(&(engines.0).1)
            ));
            rec.equal &= engines_agree;
            rec
        }
    }
}

/// Number of cases `run_verification` would evaluate.
pub fn count_cases(grid: &GridSpec, targets: &BTreeSet<Target>) -> usize {
    targets.iter().map(|&t| enumerate(grid, t).len()).sum()
}

/// Runs every case of every target and collects a report in enumeration
/// order (targets in their canonical order).
pub fn run_verification(grid: &GridSpec, targets: &BTreeSet<Target>) -> Result<VerificationReport> {
    grid.validate()?;
    let mut records = Vec::new();
    for &target in targets {
        let cases = enumerate(grid, target);
        let batch: Vec<CaseRecord> = cases.into_par_iter().map(evaluate).collect();
        records.extend(batch);
    }
    let passed = records.iter().filter(|r| r.equal).count();
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        targets: targets.iter().map(|t| t.id().to_string()).collect(),
        grid: grid.clone(),
        summary: Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
        },
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchTimings {
    pub closed_form_ns: u64,
    pub bareiss_ns: u64,
    pub dodgson_ns: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub r: u32,
    pub max_entry_bits: u64,
    pub value: String,
    pub timings: BenchTimings,
    pub values_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub params: RecurrenceParams,
    pub s: i64,
    pub k: i64,
    pub n: i64,
    pub repetitions: usize,
    pub records: Vec<BenchRecord>,
}

pub const BENCH_REPETITIONS: usize = 5;

fn median_time<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut samples = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps.max(1) {
        let (out, d) = timed(&mut f);
        samples.push(d);
        last = Some(out);
    }
    samples.sort();
    (
        last.expect("at least one repetition"),
        samples[samples.len() / 2],
    )
}

/// Times the closed form against Bareiss and Dodgson on the power matrix for
/// `r = 1..=r_max`. Values are compared before any timing is kept.
pub fn run_bench(
    r_max: u32,
    params: &RecurrenceParams,
    s: i64,
    k: i64,
    n: i64,
) -> Vec<BenchRecord> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        let spec = PowerMatrixSpec {
            params: params.clone(),
            r,
            s,
            k,
            n,
        };
        let w = HoradamSequence::new(params.clone());
        let m = power_matrix_from(&w, r, s, k, n);
        let (closed, closed_t) = median_time(BENCH_REPETITIONS, || {
            let u = HoradamSequence::new(spec.params.fundamental_of());
            theorem5_with(&spec.params, &u, r, s, k, n).value
        });
        let (bareiss, bareiss_t) = median_time(BENCH_REPETITIONS, || det_bareiss(&m));
        let (dodgson, dodgson_t) = median_time(BENCH_REPETITIONS, || det_dodgson(&m));
        let values_equal = closed == bareiss && bareiss == dodgson;
        out.push(BenchRecord {
            r,
            max_entry_bits: max_entry_bits(&m),
            value: format_scalar(&closed),
            timings: BenchTimings {
                closed_form_ns: closed_t.as_nanos() as u64,
                bareiss_ns: bareiss_t.as_nanos() as u64,
                dodgson_ns: dodgson_t.as_nanos() as u64,
            },
            values_equal,
        });
    }
    out
}

pub fn bench_report(r_max: u32, params: &RecurrenceParams, s: i64, k: i64, n: i64) -> BenchReport {
    BenchReport {
        schema_version: SCHEMA_VERSION,
        params: params.clone(),
        s,
        k,
        n,
        repetitions: BENCH_REPETITIONS,
        records: run_bench(r_max, params, s, k, n),
    }
}
