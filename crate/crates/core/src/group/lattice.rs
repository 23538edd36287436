use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::subgroup::extend;
use super::{Caps, FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// All subgroups between `base` and the whole group.
///
/// Nodes are sorted by `(order, members)`, so `nodes[0]` is the base and the
/// last node is the whole group. `atoms`/`coatoms` exclude both endpoints.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub parent: Arc<FiniteGroup>,
    pub base: Subgroup,
    pub nodes: Vec<Subgroup>,
    /// Covering pairs `(lower, upper)` as node indices.
    pub hasse_edges: Vec<(usize, usize)>,
    pub atoms: Vec<usize>,
    pub coatoms: Vec<usize>,
}

impl SubgroupLattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_endpoint(&self, i: usize) -> bool {
        i == self.bottom() || i == self.top()
    }

    /// Node indices strictly between base and the whole group.
    pub fn intermediates(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.is_endpoint(i)).collect()
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.nodes
            .binary_search_by(|n| (n.order(), n.members()).cmp(&(h.order(), h.members())))
            .ok()
    }

    /// Rebuilds a lattice from a known node set (e.g. a cache hit).
    pub fn from_nodes(parent: &Arc<FiniteGroup>, base: Subgroup, mut nodes: Vec<Subgroup>, exec: Execution) -> Self {
        nodes.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
        nodes.dedup();
        let hasse_edges = covering_pairs(&nodes, exec);
        let top = nodes.len() - 1;
        let atoms = hasse_edges
            .iter()
            .filter(|&&(lo, hi)| lo == 0 && hi != top)
            .map(|&(_, hi)| hi)
            .collect();
        let mut coatoms: Vec<usize> = hasse_edges
            .iter()
            .filter(|&&(lo, hi)| hi == top && lo != 0)
            .map(|&(lo, _)| lo)
            .collect();
        coatoms.sort_unstable();
        SubgroupLattice { parent: parent.clone(), base, nodes, hasse_edges, atoms, coatoms }
    }
}

fn covering_pairs(nodes: &[Subgroup], exec: Execution) -> Vec<(usize, usize)> {
    let uppers: Vec<usize> = (0..nodes.len()).collect();
    exec.flat_map(&uppers, |&hi| {
        let mut below: Vec<usize> = (0..hi)
            .filter(|&lo| nodes[lo].order() < nodes[hi].order() && nodes[lo].is_subgroup_of(&nodes[hi]))
            .collect();
        below.sort_by_key(|&lo| std::cmp::Reverse(nodes[lo].order()));
        let mut maximal: Vec<usize> = vec![];
        for lo in below {
            if !maximal.iter().any(|&m| nodes[lo].is_subgroup_of(&nodes[m])) {
                maximal.push(lo);
            }
        }
        maximal.sort_unstable();
        maximal.into_iter().map(|lo| (lo, hi)).collect()
    })
}

pub fn enumerate_subgroups(group: &Arc<FiniteGroup>, base: &Subgroup) -> Result<SubgroupLattice> {
    enumerate_subgroups_with(group, base, Caps::default(), Execution::default())
}

/// Layered closure: extend every node of the current layer by one element
/// outside it, close, dedupe. Each subgroup above `base` is reached along a
/// chain of one-element extensions, so the search is exhaustive.
pub fn enumerate_subgroups_with(
    group: &Arc<FiniteGroup>,
    base: &Subgroup,
    caps: Caps,
    exec: Execution,
) -> Result<SubgroupLattice> {
    if !(Arc::ptr_eq(group, base.parent()) || **group == **base.parent()) {
        return Err(Error::ParentMismatch);
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::from([base.members().to_vec()]);
    let mut nodes = vec![base.clone()];
    let mut frontier = vec![base.clone()];
    while !frontier.is_empty() {
        let mut candidates = exec.flat_map(&frontier, |h| one_step_extensions(group, h));
        candidates.sort_by(|a, b| a.members().cmp(b.members()));
        candidates.dedup_by(|a, b| a.members() == b.members());
        frontier = candidates
            .into_iter()
            .filter(|c| seen.insert(c.members().to_vec()))
            .collect();
        nodes.extend(frontier.iter().cloned());
        if nodes.len() > caps.max_nodes {
            return Err(Error::CapExceeded { cap: caps.max_nodes });
        }
    }
    Ok(SubgroupLattice::from_nodes(group, base.clone(), nodes, exec))
}

/// `⟨H, g⟩` for one `g` per right coset `Hg` outside `H`.
fn one_step_extensions(group: &FiniteGroup, h: &Subgroup) -> Vec<Subgroup> {
    let mut covered: FixedBitSet = h.mask().clone();
    let mut out = vec![];
    for g in group.elements() {
        if covered.contains(g) {
            continue;
        }
        for &x in h.members() {
            covered.insert(group.compose(x, g));
        }
        out.push(extend(h, &[g]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, NamedGroup};

    fn lattice(f: NamedGroup) -> SubgroupLattice {
        let g = named_group(&f, Caps::default()).unwrap().into_arc();
        enumerate_subgroups(&g, &Subgroup::trivial(&g)).unwrap()
    }

    #[test]
    fn s3_lattice() {
        let l = lattice(NamedGroup::Symmetric(3));
        assert_eq!(l.len(), 6);
        assert_eq!(l.atoms.len(), 4);
        assert_eq!(l.coatoms.len(), 4);
        assert_eq!(l.hasse_edges.len(), 8);
    }

    #[test]
    fn elementary_abelian_and_cyclic() {
        let l = lattice(NamedGroup::ElementaryAbelian { p: 2, k: 3 });
        assert_eq!(l.len(), 16);
        assert_eq!(l.atoms.len(), 7);
        assert_eq!(lattice(NamedGroup::Cyclic(30)).len(), 8);
        let p = lattice(NamedGroup::Cyclic(7));
        assert_eq!(p.len(), 2);
        assert!(p.atoms.is_empty() && p.coatoms.is_empty());
    }

    #[test]
    fn nontrivial_base_and_caps() {
        let g = named_group(&NamedGroup::Cyclic(30), Caps::default()).unwrap().into_arc();
        let base = crate::group::closure(&g, &[15]);
        let l = enumerate_subgroups(&g, &base).unwrap();
        // subgroups of Z30 containing the order-2 subgroup: orders 2, 6, 10, 30
        assert_eq!(l.len(), 4);
        assert!(l.nodes.iter().all(|n| base.is_subgroup_of(n)));
        let tight = Caps { max_order: 256, max_nodes: 5 };
        let e = enumerate_subgroups_with(&g, &Subgroup::trivial(&g), tight, Execution::Sequential);
        assert_eq!(e.unwrap_err(), Error::CapExceeded { cap: 5 });
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = named_group(&NamedGroup::Symmetric(4), Caps::default()).unwrap().into_arc();
        let t = Subgroup::trivial(&g);
        let a = enumerate_subgroups_with(&g, &t, Caps::default(), Execution::Sequential).unwrap();
        let b = enumerate_subgroups_with(&g, &t, Caps::default(), Execution::Parallel).unwrap();
        assert_eq!(a.len(), 30);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.hasse_edges, b.hasse_edges);
    }
}
