use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gt::Su3ExampleProvider;
use crate::halfint::HalfInt;

use super::cg::{CgProvider, SequentialCgProvider};
use super::provider::CouplingProvider;
use super::sixj::SixJProvider;
use super::tree::{Child, CouplingTree, Leaf, Vertex};

/// Serializable name of a shipped provider. Labels are doubled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ProviderSpec {
    Cg,
    SixJ { b: i64 },
    SeqCg { intermediates: Vec<i64> },
    Su3Example,
}

impl ProviderSpec {
    pub fn build(&self) -> Result<Arc<dyn CouplingProvider>> {
        Ok(match self {
            ProviderSpec::Cg => Arc::new(CgProvider),
            ProviderSpec::SixJ { b } => {
                if *b < 0 {
                    return Err(Error::InvalidArgument("six-j parameter b must be nonnegative".into()));
                }
                Arc::new(SixJProvider::new(HalfInt::from_doubled(*b)))
            }
            ProviderSpec::SeqCg { intermediates } => {
                Arc::new(SequentialCgProvider::new(intermediates.iter().map(|&d| HalfInt::from_doubled(d)).collect()))
            }
            ProviderSpec::Su3Example => Arc::new(Su3ExampleProvider),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafSpec {
    /// Doubled j-label.
    pub j: i64,
    /// Doubled basis m-values; defaults to -j, ..., j.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub provider: ProviderSpec,
    /// Doubled output j-label; may be omitted on the root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    /// Negative entries name leaves (-1 is the first leaf), positive entries name vertices
    /// (1 is the first vertex).
    pub children: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSpec {
    pub j: i64,
    pub m: i64,
}

/// JSON description of a coupling tree. The last vertex is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub leaves: Vec<LeafSpec>,
    pub vertices: Vec<VertexSpec>,
    pub root: RootSpec,
}

impl TreeSpec {
    pub fn build(&self) -> Result<CouplingTree> {
        let bad = |m: String| Error::InvalidArgument(m);
        let leaves: Vec<Leaf> = self
            .leaves
            .iter()
            .map(|l| {
                let j = HalfInt::from_doubled(l.j);
                match &l.ms {
                    Some(ms) => Leaf { j, ms: ms.iter().map(|&d| HalfInt::from_doubled(d)).collect() },
                    None => Leaf::spin(j),
                }
            })
            .collect();
        let n_v = self.vertices.len();
        if n_v == 0 {
            return Err(bad("tree has no vertices".into()));
        }
        let mut vertices = Vec::with_capacity(n_v);
        for (i, v) in self.vertices.iter().enumerate() {
            let is_root = i + 1 == n_v;
            let j = match (v.j, is_root) {
                (Some(j), false) => j,
                (None, false) => return Err(bad(format!("vertex {} needs a j-label", i + 1))),
                (Some(j), true) if j != self.root.j => {
                    return Err(bad(format!("root vertex j = {j} disagrees with root J = {}", self.root.j)))
                }
                (_, true) => self.root.j,
            };
            let children = v
                .children
                .iter()
                .map(|&c| match c {
                    c if c < 0 => Ok(Child::Leaf((-c - 1) as usize)),
                    c if c > 0 => Ok(Child::Vertex((c - 1) as usize)),
                    _ => Err(bad("child tag 0 is not allowed".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            vertices.push(Vertex::new(v.provider.build()?, HalfInt::from_doubled(j), children));
        }
        CouplingTree::new(leaves, vertices, n_v - 1, HalfInt::from_doubled(self.root.m))
    }

    /// Describes a tree whose vertices all use shipped providers. The root must be the last vertex.
    pub fn from_tree(tree: &CouplingTree) -> Result<Self> {
        if tree.root() + 1 != tree.vertices().len() {
            return Err(Error::Unsupported("tree description needs the root listed last".into()));
        }
        let leaves = tree
            .leaves()
            .iter()
            .map(|l| {
                let default: Vec<HalfInt> = l.j.m_values().collect();
                LeafSpec { j: l.j.doubled(), ms: (l.ms != default).then(|| l.ms.iter().map(|m| m.doubled()).collect()) }
            })
            .collect();
        let vertices =
            tree.vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let provider = v.provider.spec().ok_or_else(|| {
                        Error::Unsupported(format!("provider {} has no description", v.provider.name()))
                    })?;
                    Ok(VertexSpec {
                        provider,
                        j: (i != tree.root()).then_some(v.j.doubled()),
                        children: v
                            .children
                            .iter()
                            .map(|&c| match c {
                                Child::Leaf(l) => -(l as i64) - 1,
                                Child::Vertex(w) => w as i64 + 1,
                            })
                            .collect(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        Ok(TreeSpec { leaves, vertices, root: RootSpec { j: tree.root_j().doubled(), m: tree.root_m().doubled() } })
    }
}
