//! The serialized forms of scenarios, witnesses, chains and reports: pretty
//! JSON with a schema tag, exact distances as decimal strings and points in
//! their canonical text form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FreeGroup, Group};
use crate::metric::{Block, CoverWitness, Distance, Extension, Family, IntVector, ScaleSequence};
use crate::sfdc::{Decomposition, DecompositionStep, MetricFamily, SfdcChain};

pub const SCENARIO_SCHEMA: &str = "coarse-cover/scenario/v1";
pub const WITNESS_SCHEMA: &str = "coarse-cover/witness/v1";
pub const CHAIN_SCHEMA: &str = "coarse-cover/chain/v1";
pub const REPORT_SCHEMA: &str = "coarse-cover/report/v1";

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Validation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: DeserializeOwned>(what: &'static str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(what, e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Validation(format!("schema `{found}` found where `{expected}` was expected")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Lattice { rank: usize },
    Free { rank: usize },
    Lamplighter,
    Heisenberg,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Lattice { rank } => write!(f, "lattice:{rank}"),
            GroupSpec::Free { rank } => write!(f, "free:{rank}"),
            GroupSpec::Lamplighter => write!(f, "lamplighter"),
            GroupSpec::Heisenberg => write!(f, "heisenberg"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::parse("group (lattice:K, free:K, lamplighter, heisenberg)", text);
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (text, None),
        };
        match (kind, arg) {
            ("lattice", Some(rank)) if rank >= 1 => Ok(GroupSpec::Lattice { rank }),
            ("free", Some(rank)) => FreeGroup::new(rank).map(|_| GroupSpec::Free { rank }),
            ("lamplighter", None) => Ok(GroupSpec::Lamplighter),
            ("heisenberg", None) => Ok(GroupSpec::Heisenberg),
            _ => Err(bad()),
        }
    }
}

/// Runs `$body` with `$g` bound to the concrete group named by `$spec`.
#[macro_export]
macro_rules! with_group {
    ($spec:expr, $g:ident => $body:expr) => {
        match $spec {
            $crate::format::GroupSpec::Lattice { rank } => {
                let $g = $crate::group::IntegerLattice::new(*rank);
                $body
            }
            $crate::format::GroupSpec::Free { rank } => {
                let $g = $crate::group::FreeGroup::new(*rank)?;
                $body
            }
            $crate::format::GroupSpec::Lamplighter => {
                let $g = $crate::group::Lamplighter;
                $body
            }
            $crate::format::GroupSpec::Heisenberg => {
                let $g = $crate::group::Heisenberg;
                $body
            }
        }
    };
}

impl GroupSpec {
    pub fn name(&self) -> Result<String> {
        Ok(with_group!(self, g => g.name()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionSpec {
    /// Z^rank on Z^space_rank through the first coordinates.
    CoordinateShift { space_rank: usize },
    /// Heisenberg group on Z^2.
    Abelianization,
    /// Lamplighter group on Z.
    CursorShift,
    /// Any group on itself.
    LeftMultiplication,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub prefix: Vec<Distance>,
    pub extension: Extension,
}

impl ScaleSpec {
    pub fn strict(&self) -> Result<ScaleSequence> {
        ScaleSequence::new(self.prefix.clone(), self.extension)
    }

    pub fn non_decreasing(&self) -> Result<ScaleSequence> {
        ScaleSequence::non_decreasing(self.prefix.clone(), self.extension)
    }

    pub fn from_sequence(seq: &ScaleSequence) -> Self {
        ScaleSpec {
            prefix: seq.prefix().to_vec(),
            extension: seq.extension(),
        }
    }
}

/// A named cover construction. A missing scale is filled in from the
/// transfer plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoverRecipe {
    Interval {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
    },
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
    },
    Brick {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
    },
    Strip {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
    },
    /// Layers of a height function (`center`, `cursor` or `axis:K`),
    /// with the period doubled until the layers separate.
    Layers {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
        key: String,
        max_period: i64,
    },
    Clusters {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Distance>,
    },
}

impl CoverRecipe {
    pub fn scale(&self) -> Option<Distance> {
        match self {
            CoverRecipe::Interval { scale }
            | CoverRecipe::Product { scale }
            | CoverRecipe::Brick { scale }
            | CoverRecipe::Strip { scale }
            | CoverRecipe::Layers { scale, .. }
            | CoverRecipe::Clusters { scale } => *scale,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoverRecipe::Interval { .. } => "interval",
            CoverRecipe::Product { .. } => "product",
            CoverRecipe::Brick { .. } => "brick",
            CoverRecipe::Strip { .. } => "strip",
            CoverRecipe::Layers { .. } => "layers",
            CoverRecipe::Clusters { .. } => "clusters",
        }
    }

    /// Number of families produced on a lattice of the given rank.
    pub fn family_count(&self, rank: usize) -> usize {
        match self {
            CoverRecipe::Interval { .. } | CoverRecipe::Strip { .. } | CoverRecipe::Layers { .. } => 2,
            CoverRecipe::Product { .. } => 1 << rank.min(16),
            CoverRecipe::Brick { .. } => rank + 1,
            CoverRecipe::Clusters { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    pub group: GroupSpec,
    pub action: ActionSpec,
    pub basepoint: String,
    /// Group window radius `N`.
    pub radius: u32,
    /// Radius of the word-length table; defaults to `2N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric_radius: Option<u32>,
    pub scales: ScaleSpec,
    /// Dimension bound for the quasi-stabilizer witnesses.
    pub n: usize,
    pub space_cover: CoverRecipe,
    pub qs_cover: CoverRecipe,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_margin: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let scenario: Scenario = from_json("scenario", text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Scenario::parse(&read_text(path)?)
    }

    /// Static checks that need no computation.
    pub fn validate(&self) -> Result<()> {
        check_schema(&self.schema, SCENARIO_SCHEMA)?;
        self.scales.strict()?;
        if let Some(mr) = self.metric_radius {
            if mr < self.radius {
                return Err(Error::Validation(format!(
                    "metric_radius {mr} is smaller than the window radius {}",
                    self.radius
                )));
            }
        }
        if let Some(margin) = self.core_margin {
            if margin > self.radius {
                return Err(Error::Validation(format!("core_margin {margin} exceeds the radius {}", self.radius)));
            }
        }
        match (&self.group, &self.action) {
            (GroupSpec::Lattice { rank }, ActionSpec::CoordinateShift { space_rank }) if *space_rank >= 1 && space_rank <= rank => {}
            (GroupSpec::Heisenberg, ActionSpec::Abelianization)
            | (GroupSpec::Lamplighter, ActionSpec::CursorShift)
            | (_, ActionSpec::LeftMultiplication) => {}
            (g, a) => {
                return Err(Error::Validation(format!("action {a:?} is not defined for group {g}")));
            }
        }
        Ok(())
    }

    pub fn metric_radius(&self) -> u32 {
        self.metric_radius.unwrap_or(2 * self.radius)
    }
}

/// A finite window: a lattice box or ball, or a ball in a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WindowSpec {
    LatticeBox {
        lower: String,
        upper: String,
    },
    LatticeBall {
        center: String,
        radius: u64,
    },
    GroupBall {
        group: GroupSpec,
        radius: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metric_radius: Option<u32>,
    },
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::LatticeBox { lower, upper } => write!(f, "box:{lower}:{upper}"),
            WindowSpec::LatticeBall { center, radius } => write!(f, "ball:{center}:{radius}"),
            WindowSpec::GroupBall { group, radius, .. } => write!(f, "group:{group}:{radius}"),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = Error;

    /// `box:LOWER:UPPER`, `ball:CENTER:RADIUS` or `group:GROUP:RADIUS`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::parse("window (box:LOWER:UPPER, ball:CENTER:R, group:GROUP:R)", text);
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        let (head, tail) = rest.rsplit_once(':').ok_or_else(bad)?;
        match kind {
            "box" => {
                let lower: IntVector = head.parse()?;
                let upper: IntVector = tail.parse()?;
                Ok(WindowSpec::LatticeBox {
                    lower: lower.to_string(),
                    upper: upper.to_string(),
                })
            }
            "ball" => {
                let center: IntVector = head.parse()?;
                Ok(WindowSpec::LatticeBall {
                    center: center.to_string(),
                    radius: tail.parse().map_err(|_| bad())?,
                })
            }
            "group" => Ok(WindowSpec::GroupBall {
                group: head.parse()?,
                radius: tail.parse().map_err(|_| bad())?,
                metric_radius: None,
            }),
            _ => Err(bad()),
        }
    }
}

fn block_strings<P: fmt::Display + Ord>(block: &Block<P>) -> Vec<String> {
    block.iter().map(|p| p.to_string()).collect()
}

fn parse_block<P: Ord>(points: &[String], parse: &impl Fn(&str) -> Result<P>) -> Result<Block<P>> {
    Block::new(points.iter().map(|p| parse(p)).collect::<Result<Vec<P>>>()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub scale: Distance,
    pub bound: Distance,
    pub blocks: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub schema: String,
    pub window: WindowSpec,
    /// The uniform bound checked by the verifier (strict).
    pub bound: Distance,
    pub families: Vec<FamilyDoc>,
}

impl WitnessDoc {
    pub fn from_witness<P: fmt::Display + Ord>(window: WindowSpec, witness: &CoverWitness<P>) -> Self {
        WitnessDoc {
            schema: WITNESS_SCHEMA.to_string(),
            window,
            bound: witness.bound,
            families: witness
                .families
                .iter()
                .map(|f| FamilyDoc {
                    scale: f.scale,
                    bound: f.bound,
                    blocks: f.blocks.iter().map(block_strings).collect(),
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        WitnessDoc::parse(&read_text(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: WitnessDoc = from_json("witness", text)?;
        check_schema(&doc.schema, WITNESS_SCHEMA)?;
        Ok(doc)
    }

    pub fn to_witness<P: Ord>(&self, parse: impl Fn(&str) -> Result<P>) -> Result<CoverWitness<P>> {
        let families = self
            .families
            .iter()
            .map(|f| {
                let blocks = f.blocks.iter().map(|b| parse_block(b, &parse)).collect::<Result<Vec<_>>>()?;
                Ok(Family::new(blocks, f.scale, f.bound))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut witness = CoverWitness::new(families);
        witness.bound = self.bound;
        Ok(witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub schema: String,
    pub window: WindowSpec,
    /// Step `i` (from one) uses the `i`-th listed scale.
    pub scales: ScaleSpec,
    pub bound: Distance,
    /// `X_0, ..., X_n`, each a list of blocks.
    pub families: Vec<Vec<Vec<String>>>,
    /// For each step, one decomposition per member of the previous family.
    pub steps: Vec<Vec<DecompositionDoc>>,
}

impl ChainDoc {
    pub fn from_chain<P: fmt::Display + Ord>(window: WindowSpec, chain: &SfdcChain<P>) -> Self {
        ChainDoc {
            schema: CHAIN_SCHEMA.to_string(),
            window,
            scales: ScaleSpec::from_sequence(&chain.scales),
            bound: chain.bound,
            families: chain
                .families
                .iter()
                .map(|f| f.members.iter().map(block_strings).collect())
                .collect(),
            steps: chain
                .steps
                .iter()
                .map(|s| {
                    s.pieces
                        .iter()
                        .map(|d| DecompositionDoc {
                            u: d.u.iter().map(block_strings).collect(),
                            v: d.v.iter().map(block_strings).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        ChainDoc::parse(&read_text(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: ChainDoc = from_json("chain", text)?;
        check_schema(&doc.schema, CHAIN_SCHEMA)?;
        Ok(doc)
    }

    pub fn to_chain<P: Ord + Clone>(&self, parse: impl Fn(&str) -> Result<P>) -> Result<SfdcChain<P>> {
        let blocks = |list: &Vec<Vec<String>>| list.iter().map(|b| parse_block(b, &parse)).collect::<Result<Vec<_>>>();
        let families = self
            .families
            .iter()
            .map(|f| Ok(MetricFamily::new(blocks(f)?)))
            .collect::<Result<Vec<_>>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let pieces = s
                    .iter()
                    .map(|d| {
                        Ok(Decomposition {
                            u: blocks(&d.u)?,
                            v: blocks(&d.v)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DecompositionStep { pieces })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SfdcChain {
            scales: self.scales.non_decreasing()?,
            bound: self.bound,
            families,
            steps,
        })
    }
}

/// Parses a group element of the named group (membership checked).
pub fn element_parser<G: Group>(group: &G) -> impl Fn(&str) -> Result<G::Element> + '_ {
    move |text| group.parse_element(text)
}

/// Parses a lattice point of the given rank.
pub fn lattice_parser(rank: usize) -> impl Fn(&str) -> Result<IntVector> {
    move |text| {
        let p: IntVector = text.parse()?;
        if p.rank() != rank {
            return Err(Error::Validation(format!("point {p} is not in Z^{rank}")));
        }
        Ok(p)
    }
}
