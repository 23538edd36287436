use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A subgroup, stored as its sorted member list plus a membership mask.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    mask: FixedBitSet,
    generators: Vec<usize>,
}

impl Subgroup {
    /// Checks closure and builds the subgroup from an arbitrary member list.
    pub fn new(parent: &Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = parent.order();
        let mut mask = FixedBitSet::with_capacity(n);
        for g in members {
            if g >= n {
                return Err(Error::NotASubgroup(format!("element {g} out of range")));
            }
            mask.insert(g);
        }
        if !mask.contains(0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        let list: Vec<usize> = mask.ones().collect();
        for &a in &list {
            if !mask.contains(parent.inverse(a)) {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &list {
                if !mask.contains(parent.compose(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a}·{b} missing")));
                }
            }
        }
        assert_eq!(n % list.len(), 0, "Lagrange violated");
        let generators = greedy_generators(parent, &list);
        Ok(Subgroup { parent: parent.clone(), members: list, mask, generators })
    }

    pub(crate) fn from_parts(parent: &Arc<FiniteGroup>, mask: FixedBitSet, generators: Vec<usize>) -> Self {
        let members: Vec<usize> = mask.ones().collect();
        debug_assert_eq!(parent.order() % members.len(), 0);
        Subgroup { parent: parent.clone(), members, mask, generators }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        let mut mask = FixedBitSet::with_capacity(parent.order());
        mask.insert(0);
        Self::from_parts(parent, mask, vec![])
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        let mut mask = FixedBitSet::with_capacity(parent.order());
        mask.insert_range(..);
        let gens = greedy_generators(parent, &(0..parent.order()).collect::<Vec<_>>());
        Self::from_parts(parent, mask, gens)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    /// A generating set (irredundant in the order it was built).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.contains(g)
    }

    pub fn same_parent(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// `[other : self]`, when `self ≤ other`.
    pub fn index_in(&self, other: &Subgroup) -> usize {
        other.order() / self.order()
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if !self.same_parent(other) {
            return Err(Error::ParentMismatch);
        }
        let mut mask = self.mask.clone();
        mask.intersect_with(&other.mask);
        let members: Vec<usize> = mask.ones().collect();
        let gens = greedy_generators(&self.parent, &members);
        Ok(Subgroup::from_parts(&self.parent, mask, gens))
    }

    /// `⟨self ∪ other⟩`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if !self.same_parent(other) {
            return Err(Error::ParentMismatch);
        }
        Ok(extend(self, other.generators()))
    }

    /// Generator labels, e.g. `⟨(1 2), (1 2 3)⟩`.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|&g| self.parent.label(g)).collect();
        format!("⟨{}⟩", gens.join(", "))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.same_parent(other)
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

fn greedy_generators(parent: &Arc<FiniteGroup>, members: &[usize]) -> Vec<usize> {
    let mut mask = FixedBitSet::with_capacity(parent.order());
    mask.insert(0);
    let mut gens = vec![];
    let mut list = vec![0];
    for &g in members {
        if !mask.contains(g) {
            gens.push(g);
            grow(parent, &mut mask, &mut list, &gens);
        }
    }
    gens
}

/// Extends the closed set `list` (as `mask`) by the last generator in `gens`.
fn grow(parent: &FiniteGroup, mask: &mut FixedBitSet, list: &mut Vec<usize>, gens: &[usize]) {
    let old = list.len();
    let new_gen = *gens.last().expect("grow needs a generator");
    // old elements only need the new generator; new ones need all of them
    for i in 0..old {
        let y = parent.compose(list[i], new_gen);
        if !mask.contains(y) {
            mask.insert(y);
            list.push(y);
        }
    }
    let mut i = old;
    while i < list.len() {
        for &g in gens {
            let y = parent.compose(list[i], g);
            if !mask.contains(y) {
                mask.insert(y);
                list.push(y);
            }
        }
        i += 1;
    }
}

/// `⟨H ∪ seed⟩`, reusing `H`'s members as an already-closed starting set.
pub(crate) fn extend(h: &Subgroup, seed: &[usize]) -> Subgroup {
    let parent = &h.parent;
    let mut mask = h.mask.clone();
    let mut list = h.members.clone();
    let mut gens = h.generators.clone();
    for &s in seed {
        if !mask.contains(s) {
            gens.push(s);
            grow(parent, &mut mask, &mut list, &gens);
        }
    }
    Subgroup::from_parts(parent, mask, gens)
}

/// The smallest subgroup containing `seed`.
pub fn closure(group: &Arc<FiniteGroup>, seed: &[usize]) -> Subgroup {
    extend(&Subgroup::trivial(group), seed)
}

/// `HK` with the multiplicity `m(g) = #{(h, k) : hk = g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSet {
    pub members: Vec<usize>,
    pub multiplicity: Vec<usize>,
}

pub fn product_set(h: &Subgroup, k: &Subgroup) -> Result<ProductSet> {
    if !h.same_parent(k) {
        return Err(Error::ParentMismatch);
    }
    let g = &h.parent;
    let mut multiplicity = vec![0usize; g.order()];
    for &a in h.members() {
        for &b in k.members() {
            multiplicity[g.compose(a, b)] += 1;
        }
    }
    let members: Vec<usize> = (0..g.order()).filter(|&x| multiplicity[x] > 0).collect();
    debug_assert!({
        let meet = h.intersection(k)?.order();
        members.iter().all(|&x| multiplicity[x] == meet)
    });
    Ok(ProductSet { members, multiplicity })
}

/// Number of `(H0, H0)` double cosets in `G`.
pub fn double_coset_count(group: &Arc<FiniteGroup>, h0: &Subgroup) -> Result<usize> {
    if !(Arc::ptr_eq(group, &h0.parent) || **group == *h0.parent) {
        return Err(Error::ParentMismatch);
    }
    let mut seen = FixedBitSet::with_capacity(group.order());
    let mut count = 0;
    for g in group.elements() {
        if seen.contains(g) {
            continue;
        }
        count += 1;
        for &a in h0.members() {
            let ag = group.compose(a, g);
            for &b in h0.members() {
                seen.insert(group.compose(ag, b));
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, Caps, NamedGroup};

    fn s3() -> Arc<FiniteGroup> {
        named_group(&NamedGroup::Symmetric(3), Caps::default()).unwrap().into_arc()
    }

    fn find(g: &FiniteGroup, label: &str) -> usize {
        g.elements().find(|&x| g.label(x) == label).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g = s3();
        assert_eq!(closure(&g, &[]).members(), &[0]);
        let all = closure(&g, &[find(&g, "(1 2)"), find(&g, "(1 3)")]);
        assert!(all.is_whole());
        let z30 = named_group(&NamedGroup::Cyclic(30), Caps::default()).unwrap().into_arc();
        assert_eq!(closure(&z30, &[15]).order(), 2);
    }

    #[test]
    fn new_rejects_non_subgroups() {
        let g = s3();
        assert!(Subgroup::new(&g, [1]).is_err());
        assert!(Subgroup::new(&g, [0, find(&g, "(1 2 3)")]).is_err());
        assert!(Subgroup::new(&g, [0, 99]).is_err());
        let rot = Subgroup::new(&g, [0, find(&g, "(1 2 3)"), find(&g, "(1 3 2)")]).unwrap();
        assert_eq!(rot.order(), 3);
    }

    #[test]
    fn product_set_examples() {
        let g = s3();
        let h = closure(&g, &[find(&g, "(1 2)")]);
        let k = closure(&g, &[find(&g, "(1 3)")]);
        let r = closure(&g, &[find(&g, "(1 2 3)")]);
        let hk = product_set(&h, &k).unwrap();
        assert_eq!(hk.members.len(), 4);
        assert!(hk.members.iter().all(|&x| hk.multiplicity[x] == 1));
        let hr = product_set(&h, &r).unwrap();
        assert_eq!(hr.members.len(), 6);
        let hh = product_set(&h, &h).unwrap();
        assert_eq!(hh.members, h.members());
        assert!(hh.members.iter().all(|&x| hh.multiplicity[x] == 2));
        let other = named_group(&NamedGroup::Cyclic(6), Caps::default()).unwrap().into_arc();
        assert_eq!(product_set(&h, &Subgroup::trivial(&other)), Err(Error::ParentMismatch));
    }

    #[test]
    fn double_cosets() {
        let g = s3();
        assert_eq!(double_coset_count(&g, &Subgroup::trivial(&g)).unwrap(), 6);
        assert_eq!(double_coset_count(&g, &Subgroup::whole(&g)).unwrap(), 1);
        let h = closure(&g, &[find(&g, "(1 2)")]);
        assert_eq!(double_coset_count(&g, &h).unwrap(), 2);
    }

    #[test]
    fn join_and_intersection() {
        let g = s3();
        let h = closure(&g, &[find(&g, "(1 2)")]);
        let k = closure(&g, &[find(&g, "(1 3)")]);
        assert!(h.join(&k).unwrap().is_whole());
        assert!(h.intersection(&k).unwrap().is_trivial());
    }
}
