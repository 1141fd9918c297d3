//! Identity families checked over parameter grids.
//!
//! Each family is an equation between two partition counts indexed by a few
//! integer parameters. [`run_grid`] evaluates every cell of a grid, in
//! parallel, and collects the cells where the two sides disagree.

mod checks;
mod expansion;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::CountingEngine;
use crate::BigCount;

pub use checks::{
    check_cor3, check_cor6, check_delta_increment, check_delta_table, check_durfee,
    check_generalized_m, check_iterated_expansion, check_prop1, check_prop2, check_prop4,
    check_prop5, check_rel39, check_shift_d, check_theorem_main, first_difference,
    generalized_weight, REFERENCE_DELTA_TABLE,
};
pub use expansion::{expand, Expansion, ExpansionError, Term};

/// Weight of the multiple-length identity `p(n) = p_{mn}^(d)(weight)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    /// `mn + n + d*C(n,2)`, as printed.
    Paper,
    /// `mn + n + d*C(mn,2)`, the staircase weight of `mn` parts.
    Corrected,
}

impl FromStr for Formula {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Formula::Paper),
            "corrected" => Ok(Formula::Corrected),
            _ => Err(UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::Paper => "paper",
            Formula::Corrected => "corrected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown name {0:?}")]
pub struct UnknownName(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityFamily {
    Prop1AltSum,
    Prop2Split,
    Cor3D1Sum,
    Prop4Shift,
    Prop5Split,
    Cor6GeneralSum,
    IteratedExpansion,
    ShiftDMinus1,
    DurfeeRr1,
    DurfeeRr2,
    Rel39Multiple,
    TheoremMain,
    GeneralizedM(Formula),
    DeltaTable,
}

/// Grid axes a family is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    N,
    K,
    D,
    M,
}

impl IdentityFamily {
    pub const ALL: [IdentityFamily; 15] = [
        IdentityFamily::Prop1AltSum,
        IdentityFamily::Prop2Split,
        IdentityFamily::Cor3D1Sum,
        IdentityFamily::Prop4Shift,
        IdentityFamily::Prop5Split,
        IdentityFamily::Cor6GeneralSum,
        IdentityFamily::IteratedExpansion,
        IdentityFamily::ShiftDMinus1,
        IdentityFamily::DurfeeRr1,
        IdentityFamily::DurfeeRr2,
        IdentityFamily::Rel39Multiple,
        IdentityFamily::TheoremMain,
        IdentityFamily::GeneralizedM(Formula::Paper),
        IdentityFamily::GeneralizedM(Formula::Corrected),
        IdentityFamily::DeltaTable,
    ];

    pub fn id(self) -> &'static str {
        match self {
            IdentityFamily::Prop1AltSum => "PROP1_ALTSUM",
            IdentityFamily::Prop2Split => "PROP2_SPLIT",
            IdentityFamily::Cor3D1Sum => "COR3_D1_SUM",
            IdentityFamily::Prop4Shift => "PROP4_SHIFT",
            IdentityFamily::Prop5Split => "PROP5_SPLIT",
            IdentityFamily::Cor6GeneralSum => "COR6_GENERAL_SUM",
            IdentityFamily::IteratedExpansion => "ITERATED_EXPANSION",
            IdentityFamily::ShiftDMinus1 => "SHIFT_D_MINUS1",
            IdentityFamily::DurfeeRr1 => "DURFEE_RR1",
            IdentityFamily::DurfeeRr2 => "DURFEE_RR2",
            IdentityFamily::Rel39Multiple => "REL39_MULTIPLE",
            IdentityFamily::TheoremMain => "THEOREM_MAIN",
            IdentityFamily::GeneralizedM(_) => "GENERALIZED_M",
            IdentityFamily::DeltaTable => "DELTA_TABLE",
        }
    }

    /// Parses a family id. `GENERALIZED_M` takes `formula`; other families ignore it.
    pub fn parse(name: &str, formula: Formula) -> Result<Self, UnknownName> {
        let upper = name.to_ascii_uppercase();
        let family = match upper.as_str() {
            "GENERALIZED_M" => IdentityFamily::GeneralizedM(formula),
            // Short aliases used in prose: PROP2, REL39, DURFEE_RR1, ...
            _ => *Self::ALL
                .iter()
                .find(|f| f.id() == upper || f.id().split('_').next() == Some(upper.as_str()))
                .ok_or_else(|| UnknownName(name.to_string()))?,
        };
        Ok(family)
    }

    fn axes(self) -> &'static [Axis] {
        use Axis::*;
        match self {
            IdentityFamily::Prop1AltSum
            | IdentityFamily::Prop2Split
            | IdentityFamily::Cor3D1Sum => &[N, K],
            IdentityFamily::Prop4Shift
            | IdentityFamily::Prop5Split
            | IdentityFamily::Cor6GeneralSum
            | IdentityFamily::IteratedExpansion
            | IdentityFamily::ShiftDMinus1 => &[N, K, D],
            IdentityFamily::DurfeeRr1 | IdentityFamily::DurfeeRr2 => &[N],
            IdentityFamily::Rel39Multiple => &[N, M],
            IdentityFamily::TheoremMain => &[N, D],
            IdentityFamily::GeneralizedM(_) => &[N, M, D],
            IdentityFamily::DeltaTable => &[K, D],
        }
    }

    /// Smallest admissible value on each axis.
    fn floor(self, axis: Axis) -> i64 {
        match (self, axis) {
            (
                IdentityFamily::Cor3D1Sum
                | IdentityFamily::Cor6GeneralSum
                | IdentityFamily::IteratedExpansion
                | IdentityFamily::DeltaTable,
                Axis::K,
            ) => 1,
            (IdentityFamily::ShiftDMinus1, Axis::D) => 1,
            (_, Axis::M) => 1,
            _ => 0,
        }
    }

    /// The grid each family is accepted on.
    pub fn default_ranges(self) -> Ranges {
        let span = Span::new;
        let mut ranges = Ranges::default();
        match self {
            IdentityFamily::Prop1AltSum | IdentityFamily::Prop2Split => {
                ranges.n = Some(span(0, 40));
                ranges.k = Some(span(0, 8));
            }
            IdentityFamily::Cor3D1Sum => {
                ranges.n = Some(span(0, 40));
                ranges.k = Some(span(1, 8));
            }
            IdentityFamily::Prop4Shift | IdentityFamily::Prop5Split => {
                ranges.n = Some(span(0, 40));
                ranges.k = Some(span(0, 8));
                ranges.d = Some(span(0, 3));
            }
            IdentityFamily::Cor6GeneralSum => {
                ranges.n = Some(span(0, 40));
                ranges.k = Some(span(1, 8));
                ranges.d = Some(span(0, 3));
            }
            IdentityFamily::IteratedExpansion => {
                ranges.n = Some(span(0, 30));
                ranges.k = Some(span(1, 5));
                ranges.d = Some(span(0, 3));
            }
            IdentityFamily::ShiftDMinus1 => {
                ranges.n = Some(span(0, 40));
                ranges.k = Some(span(0, 8));
                ranges.d = Some(span(1, 3));
            }
            IdentityFamily::DurfeeRr1 | IdentityFamily::DurfeeRr2 => {
                ranges.n = Some(span(0, 100));
            }
            IdentityFamily::Rel39Multiple => {
                ranges.n = Some(span(0, 12));
                ranges.m = Some(span(1, 3));
            }
            IdentityFamily::TheoremMain => {
                ranges.n = Some(span(0, 20));
                ranges.d = Some(span(0, 3));
            }
            IdentityFamily::GeneralizedM(_) => {
                ranges.n = Some(span(0, 8));
                ranges.m = Some(span(2, 3));
                ranges.d = Some(span(1, 2));
            }
            IdentityFamily::DeltaTable => {
                ranges.k = Some(span(1, 5));
                ranges.d = Some(span(0, 3));
            }
        }
        ranges
    }

    /// Cells of the grid, in deterministic order.
    fn cells(self, ranges: &Ranges) -> Vec<BTreeMap<&'static str, i64>> {
        let axes = self.axes();
        let mut out = vec![BTreeMap::new()];
        // Nested loops in the order n, k, d, m; the first axis varies slowest.
        for &axis in axes {
            let values: Vec<i64> = ranges
                .get(axis)
                .map_or_else(Vec::new, |s| s.values().collect());
            out = out
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |&v| {
                        let mut cell = cell.clone();
                        cell.insert(axis.name(), v);
                        cell
                    })
                })
                .collect();
        }
        out
    }

    /// Evaluates one grid point; some families produce several cells per point.
    fn check(
        self,
        engine: &CountingEngine<BigCount>,
        at: &BTreeMap<&'static str, i64>,
    ) -> Vec<Cell> {
        let get = |name: &str| at[name];
        let gap = || get("d") as u64;
        match self {
            IdentityFamily::Prop1AltSum => vec![check_prop1(engine, get("n"), get("k"))],
            IdentityFamily::Prop2Split => vec![check_prop2(engine, get("n"), get("k"))],
            IdentityFamily::Cor3D1Sum => vec![check_cor3(engine, get("n"), get("k"))],
            IdentityFamily::Prop4Shift => vec![check_prop4(engine, get("n"), get("k"), gap())],
            IdentityFamily::Prop5Split => vec![check_prop5(engine, get("n"), get("k"), gap())],
            IdentityFamily::Cor6GeneralSum => vec![check_cor6(engine, get("n"), get("k"), gap())],
            IdentityFamily::IteratedExpansion => {
                let k = get("k") as u64;
                (1..=k)
                    .map(|target| {
                        check_iterated_expansion(engine, get("n"), k, gap(), target)
                            .expect("target never exceeds k")
                    })
                    .collect()
            }
            IdentityFamily::ShiftDMinus1 => vec![check_shift_d(engine, get("n"), get("k"), gap())],
            IdentityFamily::DurfeeRr1 => vec![check_durfee(engine, get("n"), 1)],
            IdentityFamily::DurfeeRr2 => vec![check_durfee(engine, get("n"), 2)],
            IdentityFamily::Rel39Multiple => vec![check_rel39(engine, get("n"), get("m"))],
            IdentityFamily::TheoremMain => vec![check_theorem_main(engine, get("n"), gap())],
            IdentityFamily::GeneralizedM(formula) => vec![check_generalized_m(
                engine,
                get("n"),
                get("m"),
                gap(),
                formula,
            )],
            IdentityFamily::DeltaTable => {
                let k = get("k") as u64;
                let mut cells = vec![check_delta_table(k, gap())];
                if k >= 2 {
                    cells.push(check_delta_increment(k, gap()));
                }
                cells
            }
        }
    }
}

impl fmt::Display for IdentityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityFamily::GeneralizedM(formula) => write!(f, "{}({formula})", self.id()),
            _ => f.write_str(self.id()),
        }
    }
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::N => "n",
            Axis::K => "k",
            Axis::D => "d",
            Axis::M => "m",
        }
    }
}

/// Inclusive integer range, serialized as `[lo, hi]`. Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn new(lo: i64, hi: i64) -> Self {
        Span { lo, hi }
    }

    pub fn values(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }
}

impl From<[i64; 2]> for Span {
    fn from([lo, hi]: [i64; 2]) -> Self {
        Span { lo, hi }
    }
}

impl From<Span> for [i64; 2] {
    fn from(s: Span) -> Self {
        [s.lo, s.hi]
    }
}

/// Parameter ranges of a grid. Axes a family does not use are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranges {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<Span>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub formula: Option<Formula>,
}

impl Ranges {
    fn get(&self, axis: Axis) -> Option<Span> {
        match axis {
            Axis::N => self.n,
            Axis::K => self.k,
            Axis::D => self.d,
            Axis::M => self.m,
        }
    }

    fn slot(&mut self, axis: Axis) -> &mut Option<Span> {
        match axis {
            Axis::N => &mut self.n,
            Axis::K => &mut self.k,
            Axis::D => &mut self.d,
            Axis::M => &mut self.m,
        }
    }

    /// The ranges `family` actually iterates over: missing axes take the
    /// family default, lower bounds are raised to the family's floor, unused
    /// axes are dropped.
    pub fn effective(&self, family: IdentityFamily) -> Ranges {
        let defaults = family.default_ranges();
        let mut out = Ranges::default();
        for &axis in family.axes() {
            let span = self
                .get(axis)
                .or(defaults.get(axis))
                .expect("every axis has a default");
            let lo = span.lo.max(family.floor(axis));
            *out.slot(axis) = Some(Span::new(lo, span.hi));
        }
        if let IdentityFamily::GeneralizedM(formula) = family {
            out.formula = Some(formula);
        }
        out
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub params: BTreeMap<String, i64>,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl Cell {
    pub fn new<const N: usize>(params: [(&str, i64); N], lhs: BigInt, rhs: BigInt) -> Self {
        Cell {
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            lhs,
            rhs,
        }
    }

    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A failing cell as reported: both sides as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub params: BTreeMap<String, i64>,
    #[serde(with = "decimal")]
    pub lhs: BigInt,
    #[serde(with = "decimal")]
    pub rhs: BigInt,
}

impl From<Cell> for Failure {
    fn from(cell: Cell) -> Self {
        Failure {
            params: cell.params,
            lhs: cell.lhs,
            rhs: cell.rhs,
        }
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub ranges: Ranges,
    pub cells: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    /// The report without its timing, for byte-for-byte comparison.
    pub fn comparison_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports always serialize");
        value
            .as_object_mut()
            .expect("report is an object")
            .remove("elapsed_ms");
        value.to_string()
    }

    pub fn has_failure(&self, params: &[(&str, i64)]) -> bool {
        self.failures
            .iter()
            .any(|f| params.iter().all(|(k, v)| f.params.get(*k) == Some(v)))
    }
}

/// Evaluates every cell of `family` over `ranges` (see [`Ranges::effective`]).
pub fn run_grid(
    engine: &CountingEngine<BigCount>,
    family: IdentityFamily,
    ranges: &Ranges,
) -> VerificationReport {
    let started = Instant::now();
    let ranges = ranges.effective(family);
    let points = family.cells(&ranges);
    let cells: Vec<Cell> = points
        .par_iter()
        .flat_map_iter(|at| family.check(engine, at))
        .collect();
    let total = cells.len() as u64;
    let failures = cells
        .into_iter()
        .filter(|c| !c.passed())
        .map(Failure::from)
        .collect();
    VerificationReport {
        family: family.id().to_string(),
        ranges,
        cells: total,
        failures,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}
