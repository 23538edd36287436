//! Whole-lattice analysis: pairwise reports, Gram matrices, packing
//! certificates and the counting bounds.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{double_coset_count, enumerate_subgroups_with, Caps, FiniteGroup, Subgroup, SubgroupLattice};
use crate::quadruple::{classify, cos_alpha, Quadruple, QuadrupleReport, TraceData};
use crate::rational::{self, Rational};
use crate::surd::Surd;
use crate::twobox::CosetModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub p: usize,
    pub q: usize,
    pub trace: TraceData,
    pub report: QuadrupleReport,
}

/// A subgroup lattice with its commutant dimension and all pair reports.
#[derive(Debug, Clone)]
pub struct IntermediateLattice {
    pub lattice: SubgroupLattice,
    pub model: Arc<CosetModel>,
    /// `dim(N′∩M₁)`, the number of `(H₀, H₀)` double cosets.
    pub dim_commutant: usize,
    pub index: Rational,
    /// Unordered pairs `p ≤ q` of node indices, in lexicographic order.
    pub reports: Vec<PairReport>,
}

impl IntermediateLattice {
    pub fn report(&self, p: usize, q: usize) -> &PairReport {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        &self.reports[row_start(self.lattice.len(), a) + (b - a)]
    }

    pub fn quadruple(&self, p: usize, q: usize) -> Quadruple {
        let nodes = &self.lattice.nodes;
        Quadruple::new(&self.model, nodes[p].clone(), nodes[q].clone()).expect("lattice nodes contain the base")
    }

    pub fn stats(&self) -> LatticeStats {
        LatticeStats {
            nodes: self.lattice.len(),
            atoms: self.lattice.atoms.len(),
            coatoms: self.lattice.coatoms.len(),
            abelian_commutant: hecke_is_commutative(self.model.group(), self.model.base()),
        }
    }
}

fn row_start(n: usize, a: usize) -> usize {
    a * n - a * a.saturating_sub(1) / 2
}

/// Enumerates the lattice above `H₀` and classifies every pair of nodes.
pub fn census(group: &Arc<FiniteGroup>, base: &Subgroup, caps: Caps, exec: Execution) -> Result<IntermediateLattice> {
    census_of(enumerate_subgroups_with(group, base, caps, exec)?, exec)
}

/// Pair reports for an already enumerated lattice (e.g. a cache hit).
pub fn census_of(lattice: SubgroupLattice, exec: Execution) -> Result<IntermediateLattice> {
    let (group, base) = (&lattice.parent.clone(), &lattice.base.clone());
    let model = CosetModel::new(group, base)?;
    let n = lattice.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
    let g = group.order() as i64;
    let reports = exec.map(&pairs, |&(p, q)| {
        let (a, b) = (&lattice.nodes[p], &lattice.nodes[q]);
        let meet = a.intersection(b).expect("same parent");
        let r = |k: usize| rational::ratio(k as i64, g);
        let trace = TraceData {
            tau: r(base.order()),
            tau_p: r(a.order()),
            tau_q: r(b.order()),
            tr_pq: r(meet.order()),
            tau_meet: Some(r(meet.order())),
            minimal_pair: Some(p != q && lattice.atoms.contains(&p) && lattice.atoms.contains(&q)),
        };
        PairReport { p, q, report: classify(&trace), trace }
    });
    Ok(IntermediateLattice {
        dim_commutant: double_coset_count(group, base)?,
        index: rational::ratio(group.order() as i64, base.order() as i64),
        lattice,
        model,
        reports,
    })
}

/// Whether the Hecke algebra of `(G, H₀)`, i.e. `N′∩M₁`, is commutative.
pub fn hecke_is_commutative(group: &FiniteGroup, base: &Subgroup) -> bool {
    if base.is_trivial() {
        return group.elements().all(|a| group.elements().all(|b| group.compose(a, b) == group.compose(b, a)));
    }
    let dc = double_coset_labels(group, base);
    let n = dc.iter().copied().max().map_or(0, |m| m + 1);
    let mut reps = vec![usize::MAX; n];
    for g in group.elements().rev() {
        reps[dc[g]] = g;
    }
    reps.iter().all(|&g| {
        let mut c = vec![0usize; n * n];
        for a in group.elements() {
            c[dc[a] * n + dc[group.compose(group.inverse(a), g)]] += 1;
        }
        (0..n).all(|i| (i + 1..n).all(|j| c[i * n + j] == c[j * n + i]))
    })
}

fn double_coset_labels(group: &FiniteGroup, base: &Subgroup) -> Vec<usize> {
    let mut label = vec![usize::MAX; group.order()];
    let mut next = 0;
    for g in group.elements() {
        if label[g] != usize::MAX {
            continue;
        }
        for &h in base.members() {
            for &k in base.members() {
                label[group.compose(group.compose(h, g), k)] = next;
            }
        }
        next += 1;
    }
    label
}

/// `⟨v_P, v_Q⟩` over the given nodes, none of which may be the bottom.
pub fn gram_matrix(lat: &IntermediateLattice, nodes: &[usize]) -> Result<Vec<Vec<Surd>>> {
    if nodes.contains(&0) {
        return Err(Error::AngleUndefined("v_N is the zero vector"));
    }
    nodes
        .iter()
        .map(|&p| nodes.iter().map(|&q| cos_alpha(&lat.report(p, q).trace)).collect())
        .collect()
}

/// Gram matrix of the proper intermediates (endpoints excluded).
pub fn intermediate_gram(lat: &IntermediateLattice) -> Result<Vec<Vec<Surd>>> {
    gram_matrix(lat, &lat.lattice.intermediates())
}

/// `A_PQ = tr(e_Pe_Q) − τ`, congruent to the Gram matrix via
/// `diag(τ_P − τ)^{-1/2}`.
pub fn centered_trace_matrix(lat: &IntermediateLattice, nodes: &[usize]) -> Vec<Vec<Rational>> {
    nodes
        .iter()
        .map(|&p| {
            nodes
                .iter()
                .map(|&q| {
                    let t = &lat.report(p, q).trace;
                    &t.tr_pq - &t.tau
                })
                .collect()
        })
        .collect()
}

/// Exact positive semidefiniteness of a symmetric rational matrix by
/// symmetric elimination on positive pivots.
pub fn is_psd(matrix: &[Vec<Rational>]) -> bool {
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut live: Vec<usize> = (0..a.len()).collect();
    while !live.is_empty() {
        if live.iter().any(|&i| a[i][i] < Rational::zero()) {
            return false;
        }
        let Some(pos) = live.iter().position(|&i| a[i][i] > Rational::zero()) else {
            // all pivots zero: PSD only if the remaining block vanishes
            return live.iter().all(|&i| live.iter().all(|&j| a[i][j].is_zero()));
        };
        let k = live.swap_remove(pos);
        let pivot = a[k][k].clone();
        for &i in &live {
            let f = &a[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &j in &live {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    true
}

/// The Gram matrix is PSD, with unit diagonal, checked exactly.
pub fn gram_is_psd(lat: &IntermediateLattice, nodes: &[usize]) -> Result<bool> {
    let g = gram_matrix(lat, nodes)?;
    if g.iter().enumerate().any(|(i, row)| row[i] != Surd::one()) {
        return Ok(false);
    }
    Ok(is_psd(&centered_trace_matrix(lat, nodes)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub holds: bool,
    pub pairs_checked: usize,
    /// First pair with `cos α ≥ 1/2`, i.e. `‖2v_P − 2v_Q‖₂ ≤ 2`.
    pub witness: Option<(usize, usize)>,
    /// Largest off-diagonal cosine seen.
    pub max_cos: Option<Surd>,
}

/// `‖2v_P − 2v_Q‖₂² = 8 − 8cos α > 4` for every pair of distinct vectors,
/// given their cosine matrix.
pub fn packing_from_cosines(cosines: &[Vec<Surd>]) -> PackingCertificate {
    let half = Surd::rational(rational::ratio(1, 2));
    let mut cert = PackingCertificate { holds: true, pairs_checked: 0, witness: None, max_cos: None };
    for (i, row) in cosines.iter().enumerate() {
        for (j, c) in row.iter().enumerate().skip(i + 1) {
            cert.pairs_checked += 1;
            if cert.max_cos.as_ref().is_none_or(|m| c > m) {
                cert.max_cos = Some(c.clone());
            }
            if *c >= half && cert.witness.is_none() {
                cert.holds = false;
                cert.witness = Some((i, j));
            }
        }
    }
    cert
}

/// Packing check over the atoms; witnesses are node indices.
pub fn packing_certificate(lat: &IntermediateLattice) -> Result<PackingCertificate> {
    let atoms = &lat.lattice.atoms;
    let mut cert = packing_from_cosines(&gram_matrix(lat, atoms)?);
    cert.witness = cert.witness.map(|(i, j)| (atoms[i], atoms[j]));
    Ok(cert)
}

/// `‖2v_P − 2v_Q‖₂²` from the cosine.
pub fn packing_distance_squared(cos: &Surd) -> f64 {
    8.0 - 8.0 * cos.to_f64()
}

/// Published kissing numbers; reference data only.
const KISSING: [(usize, u64); 6] = [(1, 2), (2, 6), (3, 12), (4, 24), (8, 240), (24, 196_560)];

pub fn kissing_reference(n: usize) -> Option<u64> {
    KISSING.iter().find(|&&(d, _)| d == n).map(|&(_, k)| k)
}

/// Observed lattice counts fed into [`bound_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeStats {
    pub nodes: usize,
    pub atoms: usize,
    pub coatoms: usize,
    pub abelian_commutant: bool,
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub observed: usize,
    pub bound: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "rational::serde_str")]
    pub index: Rational,
    pub n: usize,
    /// `3ⁿ − 1`.
    #[serde(with = "biguint_str")]
    pub packing_bound: BigUint,
    pub kissing_reference: Option<u64>,
    /// `⌈3^{δ²}⌉`.
    #[serde(with = "biguint_str")]
    pub m_bound: BigUint,
    /// `B(δ²)`.
    #[serde(with = "biguint_str")]
    pub recursion_bound: BigUint,
    /// `⌈9^{δ²}⌉`.
    #[serde(with = "biguint_str")]
    pub whole_bound: BigUint,
    /// `(δ²/√2)^{log₂(δ²)/2}`.
    pub abelian_bound_statement: f64,
    /// `(δ²/√2)^{log₂(δ²/2)}`.
    pub abelian_bound_proof: f64,
    /// `Π_{j=0}^{k+1} δ²/2^j` with `2 ≤ δ²/2^{k+1} < 4`.
    #[serde(with = "rational::serde_str")]
    pub abelian_chain_product: Rational,
    pub abelian_tighter: String,
    pub stats: Option<LatticeStats>,
    pub checks: Vec<BoundCheck>,
    /// Closed forms that the observed counts exceed; reported, not asserted.
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `⌈b^{x}⌉` for rational `x ≥ 0`.
pub fn ceil_power(b: u32, x: &Rational) -> Result<BigUint> {
    let num = x.numer().to_u32().ok_or(Error::Overflow("exponent numerator"))?;
    let den = x.denom().to_u32().ok_or(Error::Overflow("exponent denominator"))?;
    if x < &Rational::zero() {
        return Err(Error::Overflow("negative exponent"));
    }
    let target = BigUint::from(b).pow(num);
    let root = target.nth_root(den);
    Ok(if root.pow(den) == target { root } else { root + 1u32 })
}

/// `B(x) = 2` for `x < 4`, else `⌈3^x⌉·B(x/2)`.
pub fn recursion_bound(x: &Rational) -> Result<BigUint> {
    let mut acc = BigUint::one();
    let mut x = x.clone();
    let four = rational::int(4);
    while x >= four {
        acc *= ceil_power(3, &x)?;
        x /= rational::int(2);
    }
    Ok(acc * 2u32)
}

/// `Π_{j=0}^{k+1} x/2^j`, `k` least with `2 ≤ x/2^{k+1} < 4`; for `x < 4`
/// the product is `x` itself.
pub fn abelian_chain_product(x: &Rational) -> Rational {
    let two = rational::int(2);
    let four = rational::int(4);
    let mut acc = x.clone();
    let mut y = x.clone();
    while y >= four {
        y /= two.clone();
        acc *= y.clone();
    }
    acc
}

pub fn bound_report(index: &Rational, n: usize, stats: Option<LatticeStats>) -> Result<BoundReport> {
    if *index < rational::int(2) {
        return Err(Error::IndexTooSmall(rational::format(index)));
    }
    let packing_bound = BigUint::from(3u32).pow(n as u32) - 1u32;
    let m_bound = ceil_power(3, index)?;
    let recursion_bound = recursion_bound(index)?;
    let whole_bound = ceil_power(9, index)?;
    let d = rational::to_f64(index);
    let base = d / std::f64::consts::SQRT_2;
    let abelian_bound_statement = base.powf(d.log2() / 2.0);
    let abelian_bound_proof = base.powf((d / 2.0).log2());
    let abelian_chain_product = abelian_chain_product(index);
    let abelian_tighter = if abelian_bound_statement < abelian_bound_proof { "statement" } else { "proof" }.to_string();
    let mut checks = vec![BoundCheck {
        name: "recursion_le_whole".into(),
        observed: 0,
        bound: "B(δ²) ≤ 9^δ²".into(),
        holds: recursion_bound <= whole_bound,
    }];
    let mut notes = vec![];
    if let Some(s) = stats {
        let mut check = |name: &str, observed: usize, bound: &BigUint| {
            checks.push(BoundCheck {
                name: name.into(),
                observed,
                bound: bound.to_string(),
                holds: BigUint::from(observed) <= *bound,
            })
        };
        check("atoms_le_packing", s.atoms, &packing_bound);
        check("atoms_le_dim", s.atoms, &BigUint::from(n));
        check("atoms_le_m", s.atoms, &m_bound);
        check("lat_le_recursion", s.nodes, &recursion_bound);
        check("lat_le_whole", s.nodes, &whole_bound);
        if let Some(k) = kissing_reference(n) {
            if s.atoms as u64 > k {
                notes.push(format!("{} atoms exceed the kissing reference {k} for n = {n}", s.atoms));
            }
        }
        if s.abelian_commutant {
            let chain_floor = abelian_chain_product.floor().to_integer();
            let chain_floor = chain_floor.to_biguint().unwrap_or_default();
            check("lat_le_abelian_chain", s.nodes, &chain_floor);
            // the closed forms come from the recursion, which starts at δ² = 4
            if *index >= rational::int(4) {
                for (name, v) in [("statement", abelian_bound_statement), ("proof", abelian_bound_proof)] {
                    if s.nodes as f64 > v {
                        notes.push(format!("|Lat| = {} exceeds the abelian {name} form {v:.6}", s.nodes));
                    }
                }
            }
        }
    }
    Ok(BoundReport {
        index: index.clone(),
        n,
        packing_bound,
        kissing_reference: kissing_reference(n),
        m_bound,
        recursion_bound,
        whole_bound,
        abelian_bound_statement,
        abelian_bound_proof,
        abelian_chain_product,
        abelian_tighter,
        stats,
        checks,
        notes,
    })
}

pub fn lattice_bounds(lat: &IntermediateLattice) -> Result<BoundReport> {
    bound_report(&lat.index, lat.dim_commutant, Some(lat.stats()))
}
