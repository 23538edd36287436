//! Finite groups given by a multiplication table.
//!
//! Elements are indices `0..order` with `0` the identity. Every constructor
//! (tables, permutation generators, named families) funnels through
//! [`FiniteGroup::from_table`], so all groups in the crate carry a checked
//! multiplication table.

mod lattice;
mod named;
mod perm;
mod subgroup;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use lattice::{enumerate_subgroups, enumerate_subgroups_with, SubgroupLattice};
pub use named::{named_group, NamedGroup};
pub use perm::{group_from_permutations, parse_cycles, split_generators, Permutation};
pub use subgroup::{closure, double_coset_count, product_set, ProductSet, Subgroup};

/// Size limits for group construction and lattice enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_order: usize,
    pub max_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_order: 256, max_nodes: 20_000 }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// On-disk group format: `{"order": n, "table": [[...]]}`, entry `[a][b]`
/// is the index of `a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(order: usize, table: &[Vec<usize>]) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedTable("order must be positive".into()));
        }
        if table.len() != order {
            return Err(Error::MalformedTable(format!("expected {order} rows, found {}", table.len())));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (r, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {r} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::MalformedTable(format!("entry [{r}][{c}] = {v} out of range")));
                }
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat)
    }

    pub(crate) fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * order + b];
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::BadIdentity(g));
            }
        }
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == 0)
                    .filter(|&b| at(b, a) == 0)
                    .ok_or(Error::NoInverse(a))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, inverse, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.order {
            self.labels = Some(labels);
        }
        self
    }

    pub fn from_group_table(t: &GroupTable) -> Result<Self> {
        let g = Self::from_table(t.order, &t.table)?;
        Ok(match &t.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        })
    }

    pub fn to_group_table(&self) -> GroupTable {
        GroupTable {
            order: self.order,
            table: self.table.chunks(self.order).map(<[usize]>::to_vec).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Order of an element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.compose(x, g);
            k += 1;
        }
        k
    }

    /// Hex SHA-256 of the multiplication table; the lattice cache key.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for &v in &self.table {
            h.update((v as u32).to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish_non_exhaustive()
    }
}

/// `group_from_table` as a free function, mirroring the other constructors.
pub fn group_from_table(order: usize, table: &[Vec<usize>]) -> Result<FiniteGroup> {
    FiniteGroup::from_table(order, table)
}
