//! JSON fixture formats. Element labels are 1-based and rationals are
//! `"num/den"` strings.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sigma_refine::dynamics::{AtomicRefinement, RefinementChain};
use sigma_refine::endogenous::{build_domain, CompatibilityDomain};
use sigma_refine::measure::{PermGroup, Permutation, ProbMeasure};
use sigma_refine::rational::{format_rational, parse_rational};
use sigma_refine::{GroundSet, Partition};

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Invalid(#[from] sigma_refine::Error),
}

pub type FixtureResult<T> = std::result::Result<T, FixtureError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> FixtureResult<T> {
    let text = fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FixtureError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn to_zero_based(n: usize, labels: &[usize]) -> FixtureResult<Vec<usize>> {
    labels
        .iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(FixtureError::Schema(format!(
                    "element {x} outside 1..={n} (labels are 1-based)"
                )))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

fn to_one_based(block: &[usize]) -> Vec<usize> {
    block.iter().map(|x| x + 1).collect()
}

fn ground(n: usize) -> FixtureResult<GroundSet> {
    Ok(GroundSet::new(n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl PartitionJson {
    pub fn from_partition(p: &Partition) -> Self {
        PartitionJson {
            n: p.n(),
            blocks: p.atoms().iter().map(|a| to_one_based(a)).collect(),
        }
    }

    pub fn to_partition(&self) -> FixtureResult<Partition> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| to_zero_based(self.n, b))
            .collect::<FixtureResult<Vec<_>>>()?;
        Ok(Partition::from_blocks(ground(self.n)?, &blocks)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    pub partition: PartitionJson,
    pub weights: Vec<String>,
}

impl MeasureJson {
    pub fn from_measure(mu: &ProbMeasure) -> Self {
        MeasureJson {
            partition: PartitionJson::from_partition(mu.base()),
            weights: mu.weights().iter().map(format_rational).collect(),
        }
    }

    /// Weights are matched to blocks in the order given, then reordered
    /// along with the blocks into canonical form.
    pub fn to_measure(&self) -> FixtureResult<ProbMeasure> {
        let p = self.partition.to_partition()?;
        if self.weights.len() != self.partition.blocks.len() {
            return Err(FixtureError::Schema(format!(
                "{} blocks but {} weights",
                self.partition.blocks.len(),
                self.weights.len()
            )));
        }
        let parsed = self
            .weights
            .iter()
            .map(|w| parse_rational(w))
            .collect::<sigma_refine::Result<Vec<_>>>()?;
        let mut weights = vec![None; p.num_atoms()];
        for (block, w) in self.partition.blocks.iter().zip(parsed) {
            let x = to_zero_based(self.partition.n, &block[..1])?[0];
            weights[p.atom_of(x)] = Some(w);
        }
        Ok(ProbMeasure::new(
            p,
            weights
                .into_iter()
                .map(|w| w.expect("every atom listed"))
                .collect(),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    pub n: usize,
    pub members: Vec<PartitionJson>,
}

impl DomainJson {
    pub fn from_domain(d: &CompatibilityDomain) -> Self {
        DomainJson {
            n: d.ground().size(),
            members: d
                .members()
                .iter()
                .map(PartitionJson::from_partition)
                .collect(),
        }
    }

    /// Members are closed under coarsening before validation, so listing
    /// generators is enough.
    pub fn to_domain(&self) -> FixtureResult<CompatibilityDomain> {
        let members = self
            .members
            .iter()
            .map(|m| {
                if m.n != self.n {
                    return Err(FixtureError::Schema(format!(
                        "member over {} elements in a domain over {}",
                        m.n, self.n
                    )));
                }
                m.to_partition()
            })
            .collect::<FixtureResult<Vec<_>>>()?;
        Ok(build_domain(&members)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermsJson {
    pub n: usize,
    /// One-line notation: entry `i` is the image of element `i + 1`.
    pub generators: Vec<Vec<usize>>,
}

impl PermsJson {
    pub fn from_group(group: &PermGroup) -> Self {
        PermsJson {
            n: group.ground().size(),
            generators: group
                .generators()
                .iter()
                .map(|g| to_one_based(g.as_slice()))
                .collect(),
        }
    }

    pub fn to_group(&self) -> FixtureResult<PermGroup> {
        let g = ground(self.n)?;
        let gens = self
            .generators
            .iter()
            .map(|images| {
                if images.len() != self.n {
                    return Err(FixtureError::Schema(format!(
                        "permutation {images:?} has {} entries, expected {}",
                        images.len(),
                        self.n
                    )));
                }
                Ok(Permutation::new(g, to_zero_based(self.n, images)?)?)
            })
            .collect::<FixtureResult<Vec<_>>>()?;
        Ok(PermGroup::from_generators(g, gens)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub source: PartitionJson,
    pub split: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

impl StepJson {
    pub fn from_step(step: &AtomicRefinement) -> Self {
        StepJson {
            source: PartitionJson::from_partition(step.source()),
            split: to_one_based(step.atom()),
            parts: step.parts().iter().map(|p| to_one_based(p)).collect(),
        }
    }

    pub fn to_step(&self) -> FixtureResult<AtomicRefinement> {
        let source = self.source.to_partition()?;
        let n = self.source.n;
        let split = to_zero_based(n, &self.split)?;
        let parts = self
            .parts
            .iter()
            .map(|p| to_zero_based(n, p))
            .collect::<FixtureResult<Vec<_>>>()?;
        Ok(AtomicRefinement::splitting(&source, &split, &parts)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainsJson {
    pub chains: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<BTreeMap<String, StepJson>>,
}

impl ChainsJson {
    /// Concrete chains, when every label has a step. Each chain starts at
    /// its first step's source.
    pub fn to_refinement_chains(&self) -> FixtureResult<Option<Vec<RefinementChain>>> {
        let Some(steps) = &self.steps else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for chain in &self.chains {
            let mut resolved = Vec::new();
            for label in chain {
                let step = steps.get(label).ok_or_else(|| {
                    FixtureError::Schema(format!("label {label} has no step entry"))
                })?;
                resolved.push(step.to_step()?.with_label(label.clone()));
            }
            let Some(first) = resolved.first() else {
                continue;
            };
            let start = first.source().clone();
            out.push(RefinementChain::new(start, resolved)?);
        }
        Ok(Some(out))
    }
}

/// A fixture file of any kind, with its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub source_path: PathBuf,
    pub payload: FixturePayload,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixturePayload {
    Partition(PartitionJson),
    Measure(MeasureJson),
    Domain(DomainJson),
    Chains(ChainsJson),
    Perms(PermsJson),
}

impl Fixture {
    /// Reads a fixture and detects its kind from the top-level keys. The
    /// payload is validated before it is returned.
    pub fn load(path: &Path) -> FixtureResult<Fixture> {
        let value: serde_json::Value = read_json(path)?;
        let has = |k: &str| value.get(k).is_some();
        let json_err = |source| FixtureError::Json {
            path: path.to_path_buf(),
            source,
        };
        let payload = if has("blocks") {
            let p: PartitionJson = serde_json::from_value(value).map_err(json_err)?;
            p.to_partition()?;
            FixturePayload::Partition(p)
        } else if has("weights") {
            let m: MeasureJson = serde_json::from_value(value).map_err(json_err)?;
            m.to_measure()?;
            FixturePayload::Measure(m)
        } else if has("members") {
            let d: DomainJson = serde_json::from_value(value).map_err(json_err)?;
            d.to_domain()?;
            FixturePayload::Domain(d)
        } else if has("chains") {
            let c: ChainsJson = serde_json::from_value(value).map_err(json_err)?;
            c.to_refinement_chains()?;
            FixturePayload::Chains(c)
        } else if has("generators") {
            let g: PermsJson = serde_json::from_value(value).map_err(json_err)?;
            g.to_group()?;
            FixturePayload::Perms(g)
        } else {
            return Err(FixtureError::Schema(format!(
                "{}: not a partition, measure, domain, chains or perms fixture",
                path.display()
            )));
        };
        Ok(Fixture {
            source_path: path.to_path_buf(),
            payload,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            FixturePayload::Partition(_) => "partition",
            FixturePayload::Measure(_) => "measure",
            FixturePayload::Domain(_) => "domain",
            FixturePayload::Chains(_) => "chains",
            FixturePayload::Perms(_) => "perms",
        }
    }
}

pub fn load_partition(path: &Path) -> FixtureResult<Partition> {
    read_json::<PartitionJson>(path)?.to_partition()
}

pub fn load_measure(path: &Path) -> FixtureResult<ProbMeasure> {
    read_json::<MeasureJson>(path)?.to_measure()
}

pub fn load_domain(path: &Path) -> FixtureResult<CompatibilityDomain> {
    read_json::<DomainJson>(path)?.to_domain()
}

pub fn load_group(path: &Path) -> FixtureResult<PermGroup> {
    read_json::<PermsJson>(path)?.to_group()
}

pub fn load_chains(path: &Path) -> FixtureResult<ChainsJson> {
    read_json(path)
}
