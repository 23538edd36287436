//! Pimsner–Popa bases in the group model.
//!
//! A basis for `P/N` is a list of coset representatives of `H₀` in `K`,
//! acting through the unitaries `u_λ`. Random representative choices are
//! drawn from a seeded ChaCha stream so every run is reproducible.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{product_set, Subgroup};
use crate::quadruple::{
    classify_quadruple, cocommuting_by_groups, commuting_by_groups, cos_alpha_by_vectors,
    cos_beta_by_dual_angle, trace_data, Quadruple,
};
use crate::rational::{self, Rational};
use crate::surd::Surd;
use crate::twobox::{biprojection_of, jones_projection, product_basis_sum, CosetFunction, CosetModel};

/// Coset representatives `{λ_i}` of `H₀` in `K`.
#[derive(Debug, Clone)]
pub struct PPBasis {
    model: Arc<CosetModel>,
    k: Subgroup,
    reps: Vec<usize>,
}

impl PPBasis {
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `Σ_i λ_i e₁ λ_i*`.
    pub fn expansion(&self) -> CosetFunction {
        product_basis_sum(&self.model, &self.reps, &[0])
    }

    /// `Σ_i λ_i e₁ λ_i* = e_K`.
    pub fn is_valid(&self) -> bool {
        biprojection_of(&self.model, &self.k).is_ok_and(|e| e == self.expansion())
    }

    /// Also a left basis: `Σ_i λ_i* e₁ λ_i = e_K`, i.e. the representatives
    /// hit every right coset `H₀g` of `K` once.
    pub fn is_two_sided(&self) -> bool {
        let inverses: Vec<usize> = self.reps.iter().map(|&r| self.model.group().inverse(r)).collect();
        is_basis_for(&self.model, &inverses, &self.k)
    }
}

/// Representatives of the `H₀`-cosets in `K`. `None` picks the minimal
/// element of each coset; `Some(seed)` picks uniformly inside each coset.
pub fn coset_basis(model: &Arc<CosetModel>, k: &Subgroup, seed: Option<u64>) -> Result<PPBasis> {
    let mut reps = model.representatives_in(k)?;
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h0 = model.base().members();
        let g = model.group();
        for r in &mut reps {
            *r = g.compose(*r, h0[rng.gen_range(0..h0.len())]);
        }
    }
    Ok(PPBasis { model: model.clone(), k: k.clone(), reps })
}

/// `Σ_i u_{x_i} e_L u_{x_i}* = e_U`: the list is a basis for `U/L`.
pub fn is_relative_basis(model: &Arc<CosetModel>, elements: &[usize], lower: &Subgroup, upper: &Subgroup) -> bool {
    if !elements.iter().all(|&x| upper.contains(x)) {
        return false;
    }
    let Ok(lower_reps) = model.representatives_in(lower) else {
        return false;
    };
    biprojection_of(model, upper).is_ok_and(|e| e == product_basis_sum(model, elements, &lower_reps))
}

/// The list is a basis for `K_target/N`: it meets every `H₀`-coset of
/// `K_target` exactly once.
pub fn is_basis_for(model: &Arc<CosetModel>, elements: &[usize], target: &Subgroup) -> bool {
    is_relative_basis(model, elements, model.base(), target)
}

/// `p` assembled from explicit bases `{λ_i}` of `P/N` and `{μ_j}` of `Q/N`.
pub fn p_from_bases(lambda: &PPBasis, mu: &PPBasis) -> CosetFunction {
    product_basis_sum(&lambda.model, &lambda.reps, &mu.reps)
}

/// `q` assembled from explicit bases.
pub fn q_from_bases(lambda: &PPBasis, mu: &PPBasis) -> CosetFunction {
    p_from_bases(mu, lambda)
}

/// `{λ_i μ_j}` as an element list.
pub fn product_list(a: &PPBasis, b: &PPBasis) -> Vec<usize> {
    let g = a.model.group();
    a.reps.iter().flat_map(|&x| b.reps.iter().map(move |&y| g.compose(x, y))).collect()
}

/// `#{(i, j) : E_N(λ_i* μ_j) ≠ 0}`, which equals `Σ tr(E_N(λ_i*μ_j)μ_j*λ_i)`
/// for group unitaries.
pub fn expansion_overlap(lambda: &PPBasis, mu: &PPBasis) -> usize {
    let g = lambda.model.group();
    let base = lambda.model.base();
    lambda
        .reps
        .iter()
        .map(|&x| mu.reps.iter().filter(|&&y| base.contains(g.compose(g.inverse(x), y))).count())
        .sum()
}

/// `cos α = (Σ tr(E_N(λ_i*μ_j)μ_j*λ_i) − 1)/√(([P:N] − 1)([Q:N] − 1))`.
pub fn cos_alpha_by_expansion(quad: &Quadruple, seed: Option<u64>) -> Result<Surd> {
    let lambda = coset_basis(quad.model(), quad.k1(), seed)?;
    let mu = coset_basis(quad.model(), quad.k2(), seed.map(|s| s.wrapping_add(1)))?;
    let (a, b) = (lambda.len() as i64 - 1, mu.len() as i64 - 1);
    if a == 0 || b == 0 {
        return Err(Error::AngleUndefined("alpha needs P, Q different from N"));
    }
    let numerator = rational::int(expansion_overlap(&lambda, &mu) as i64 - 1);
    Surd::rational(numerator).checked_mul(&Surd::sqrt(&rational::int(a * b))?.recip()?)
}

/// `tr(e_P e_Q)` with both projections expanded over bases.
pub fn tr_pq_by_expansion(quad: &Quadruple, seed: Option<u64>) -> Result<Rational> {
    let e_p = coset_basis(quad.model(), quad.k1(), seed)?.expansion();
    let e_q = coset_basis(quad.model(), quad.k2(), seed.map(|s| s.wrapping_add(1)))?.expansion();
    Ok(e_p.mul(&e_q)?.trace())
}

/// Conditions of the commuting and co-commuting square characterization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymBattery {
    pub commuting_and_cocommuting: bool,
    pub both_right_angles: bool,
    pub p_is_one: bool,
    pub lambda_mu_is_basis: bool,
    pub q_is_one: bool,
    pub mu_lambda_is_basis: bool,
    pub p_basis_is_basis_for_m_over_q: bool,
    pub q_basis_is_basis_for_m_over_p: bool,
    /// Randomized representative choices agree with the structural criterion.
    pub samples_agree: bool,
    pub verdict: bool,
}

impl SymBattery {
    pub fn conditions(&self) -> [bool; 8] {
        [
            self.commuting_and_cocommuting,
            self.both_right_angles,
            self.p_is_one,
            self.lambda_mu_is_basis,
            self.q_is_one,
            self.mu_lambda_is_basis,
            self.p_basis_is_basis_for_m_over_q,
            self.q_basis_is_basis_for_m_over_p,
        ]
    }
}

fn all_equal(flags: &[bool]) -> bool {
    flags.windows(2).all(|w| w[0] == w[1])
}

/// `K₁K₂ = G` and `K₁ ∩ K₂ = H₀`.
pub fn is_exact_factorization(quad: &Quadruple) -> bool {
    let hk = product_set(quad.k1(), quad.k2()).expect("same parent checked at construction");
    hk.members.len() == quad.group().order() && quad.meet() == *quad.base()
}

/// Whether bases of `lower/N` transfer to bases of `M/other` on two seeded
/// samples, with the structural answer alongside.
fn transfer(quad: &Quadruple, lower: &Subgroup, other: &Subgroup, seeds: [u64; 2]) -> Result<(bool, bool)> {
    let whole = Subgroup::whole(quad.group());
    let structural = is_exact_factorization(quad);
    let mut sampled = true;
    for s in seeds {
        let b = coset_basis(quad.model(), lower, Some(s))?;
        sampled &= is_relative_basis(quad.model(), b.representatives(), other, &whole) == structural;
    }
    Ok((structural, sampled))
}

fn right_angle_or_vanishing(cos: Result<Surd>, numerator_zero: bool) -> Result<bool> {
    match cos {
        Ok(c) => Ok(c.is_zero()),
        Err(Error::AngleUndefined(_)) => Ok(numerator_zero),
        Err(e) => Err(e),
    }
}

pub fn sym_battery(quad: &Quadruple, seed: u64) -> Result<SymBattery> {
    let model = quad.model();
    let td = trace_data(quad);
    // At endpoints an angle is undefined; the square condition then reads as
    // the vanishing of the corresponding numerator.
    let right_alpha = right_angle_or_vanishing(cos_alpha_by_vectors(quad), td.tr_pq == td.tau)?;
    let right_beta =
        right_angle_or_vanishing(cos_beta_by_dual_angle(quad), td.tr_pq == &td.tau_p * &td.tau_q)?;
    let one = CosetFunction::identity(model);
    let whole = Subgroup::whole(quad.group());
    let lambda = coset_basis(model, quad.k1(), None)?;
    let mu = coset_basis(model, quad.k2(), None)?;
    let (t7, s7) = transfer(quad, quad.k1(), quad.k2(), [seed, seed ^ 0x9e37_79b9])?;
    let (t8, s8) = transfer(quad, quad.k2(), quad.k1(), [seed.wrapping_add(7), seed ^ 0x7f4a_7c15])?;
    let mut battery = SymBattery {
        commuting_and_cocommuting: commuting_by_groups(quad) && cocommuting_by_groups(quad),
        both_right_angles: right_alpha && right_beta,
        p_is_one: p_from_bases(&lambda, &mu) == one,
        lambda_mu_is_basis: is_basis_for(model, &product_list(&lambda, &mu), &whole),
        q_is_one: q_from_bases(&lambda, &mu) == one,
        mu_lambda_is_basis: is_basis_for(model, &product_list(&mu, &lambda), &whole),
        p_basis_is_basis_for_m_over_q: t7,
        q_basis_is_basis_for_m_over_p: t8,
        samples_agree: s7 && s8,
        verdict: false,
    };
    battery.verdict = battery.samples_agree && all_equal(&battery.conditions());
    Ok(battery)
}

/// Conditions characterizing non-degenerate commuting squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Po2Battery {
    pub cocommuting: bool,
    pub p_join_is_one: bool,
    pub q_join_is_one: bool,
    pub p_basis_is_basis_for_m_over_q: bool,
    pub q_basis_is_basis_for_m_over_p: bool,
    pub pq_is_m: bool,
    pub qp_is_m: bool,
    pub samples_agree: bool,
    pub verdict: bool,
}

impl Po2Battery {
    pub fn conditions(&self) -> [bool; 7] {
        [
            self.cocommuting,
            self.p_join_is_one,
            self.q_join_is_one,
            self.p_basis_is_basis_for_m_over_q,
            self.q_basis_is_basis_for_m_over_p,
            self.pq_is_m,
            self.qp_is_m,
        ]
    }
}

pub fn po2_battery(quad: &Quadruple, seed: u64) -> Result<Po2Battery> {
    if quad.k1() == quad.base() || quad.k2() == quad.base() {
        return Err(Error::NotApplicable);
    }
    if !commuting_by_groups(quad) {
        return Err(Error::NotCommutingSquare);
    }
    let cocommuting = classify_quadruple(quad).cocommuting.ok_or(Error::NotApplicable)?;
    let model = quad.model();
    let one = CosetFunction::identity(model);
    let n = quad.group().order();
    let (t4, s4) = transfer(quad, quad.k1(), quad.k2(), [seed, seed ^ 0x5bd1_e995])?;
    let (t5, s5) = transfer(quad, quad.k2(), quad.k1(), [seed.wrapping_add(3), seed ^ 0x1b87_3593])?;
    let mut battery = Po2Battery {
        cocommuting,
        p_join_is_one: conjugation_join(model, quad.k1(), quad.k2())? == one,
        q_join_is_one: conjugation_join(model, quad.k2(), quad.k1())? == one,
        p_basis_is_basis_for_m_over_q: t4,
        q_basis_is_basis_for_m_over_p: t5,
        pq_is_m: product_set(quad.k1(), quad.k2())?.members.len() == n,
        qp_is_m: product_set(quad.k2(), quad.k1())?.members.len() == n,
        samples_agree: s4 && s5,
        verdict: false,
    };
    battery.verdict = battery.samples_agree && all_equal(&battery.conditions());
    Ok(battery)
}

/// `⋁{u_k e_T u_k* : k ∈ S}`, the indicator of `S·T`.
pub fn conjugation_join(model: &Arc<CosetModel>, sweep: &Subgroup, target: &Subgroup) -> Result<CosetFunction> {
    let e_t = biprojection_of(model, target)?;
    let g = model.group();
    let mut join = CosetFunction::zero(model);
    for &k in sweep.members() {
        let shifted = CosetFunction::indicator(model, target.members().iter().map(|&t| g.compose(k, t)));
        debug_assert_eq!(shifted.trace(), e_t.trace());
        join = join.add(&shifted)?.support();
    }
    Ok(join)
}

/// The joins of conjugated biprojections next to `p` and `q`.
#[derive(Debug, Clone)]
pub struct CentralSupport {
    /// `⋁{v e_Q v* : v ∈ P}`.
    pub p_join: CosetFunction,
    /// `⋁{u e_P u* : u ∈ Q}`.
    pub q_join: CosetFunction,
    pub p: CosetFunction,
    pub q: CosetFunction,
}

impl CentralSupport {
    /// `p` and `q` are projections equal to their joins.
    pub fn holds(&self) -> bool {
        self.p.is_projection() && self.q.is_projection() && self.p == self.p_join && self.q == self.q_join
    }
}

/// Raw joins and `p`, `q` for any quadruple; the equalities hold exactly for
/// commuting squares.
pub fn conjugation_sweep(quad: &Quadruple) -> Result<CentralSupport> {
    let model = quad.model();
    let lambda = coset_basis(model, quad.k1(), None)?;
    let mu = coset_basis(model, quad.k2(), None)?;
    Ok(CentralSupport {
        p_join: conjugation_join(model, quad.k1(), quad.k2())?,
        q_join: conjugation_join(model, quad.k2(), quad.k1())?,
        p: p_from_bases(&lambda, &mu),
        q: q_from_bases(&lambda, &mu),
    })
}

pub fn central_support(quad: &Quadruple) -> Result<CentralSupport> {
    if !commuting_by_groups(quad) {
        return Err(Error::NotCommutingSquare);
    }
    conjugation_sweep(quad)
}

/// `q` is a projection with `q ≥ e_P`, and `p` is a projection with `p ≥ e_Q`.
pub fn projection_conditions(quad: &Quadruple) -> Result<(bool, bool)> {
    let model = quad.model();
    let s = conjugation_sweep(quad)?;
    let e_p = biprojection_of(model, quad.k1())?;
    let e_q = biprojection_of(model, quad.k2())?;
    Ok((s.q.is_projection() && e_p.le(&s.q)?, s.p.is_projection() && e_q.le(&s.p)?))
}

/// `tr(r e₁)` for `r = Σ_j μ_j* e_P μ_j`.
pub fn r_element(quad: &Quadruple) -> Result<Rational> {
    let model = quad.model();
    let g = model.group();
    let mu = coset_basis(model, quad.k2(), None)?;
    let mut r = CosetFunction::zero(model);
    for &m in mu.representatives() {
        let inv = g.inverse(m);
        let term = CosetFunction::indicator(model, quad.k1().members().iter().map(|&k| g.compose(inv, k)));
        r = r.add(&term)?;
    }
    Ok(r.mul(&jones_projection(model))?.trace())
}

/// `tr(q) = tr(p)` from its closed form `|K₁||K₂|/(|H₀||G|)`.
pub fn trace_of_p_expected(quad: &Quadruple) -> Rational {
    let d = (quad.base().order() * quad.group().order()) as i64;
    rational::ratio((quad.k1().order() * quad.k2().order()) as i64, d)
}

/// Multiset equality of the spectra of `p` and `q`.
pub fn spectra_match(p: &CosetFunction, q: &CosetFunction) -> bool {
    p.spectrum() == q.spectrum()
}

/// `p = 1` exactly when the pair is an exact factorization.
pub fn p_is_one(p: &CosetFunction) -> bool {
    p.values().iter().all(Rational::is_one)
}

pub fn has_zero_entry(f: &CosetFunction) -> bool {
    f.values().iter().any(Rational::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{closure, named_group, Caps, FiniteGroup, NamedGroup};
    use crate::quadruple::cos_alpha;
    use crate::rational::ratio;

    fn model(f: NamedGroup, base: &[usize]) -> Arc<CosetModel> {
        let g = named_group(&f, Caps::default()).unwrap().into_arc();
        CosetModel::new(&g, &closure(&g, base)).unwrap()
    }

    fn find(g: &FiniteGroup, label: &str) -> usize {
        g.elements().find(|&x| g.label(x) == label).unwrap()
    }

    fn s3(a: &str, b: &str) -> Quadruple {
        let m = model(NamedGroup::Symmetric(3), &[]);
        let g = m.group().clone();
        Quadruple::new(&m, closure(&g, &[find(&g, a)]), closure(&g, &[find(&g, b)])).unwrap()
    }

    #[test]
    fn coset_bases() {
        let m = model(NamedGroup::Cyclic(30), &[15]);
        let g = m.group().clone();
        let k = closure(&g, &[3]);
        let b = coset_basis(&m, &k, None).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.is_valid());
        for seed in 0..10 {
            assert!(coset_basis(&m, &k, Some(seed)).unwrap().is_valid());
        }
        let base = coset_basis(&m, m.base(), Some(4)).unwrap();
        assert_eq!(base.len(), 1);
        assert!(base.is_valid());
    }

    #[test]
    fn basis_predicate() {
        let m = model(NamedGroup::Symmetric(3), &[]);
        let g = m.group().clone();
        let whole = Subgroup::whole(&g);
        let all: Vec<usize> = g.elements().collect();
        assert!(is_basis_for(&m, &all, &whole));
        let mut dup = all.clone();
        dup[1] = dup[2];
        assert!(!is_basis_for(&m, &dup, &whole));
        let q = s3("(1 2)", "(1 2 3)");
        let l = coset_basis(&m, q.k1(), None).unwrap();
        let mu = coset_basis(&m, q.k2(), None).unwrap();
        assert!(is_basis_for(&m, &product_list(&l, &mu), &whole));
    }

    #[test]
    fn sym_examples() {
        let b = sym_battery(&s3("(1 2)", "(1 2 3)"), 1).unwrap();
        assert!(b.conditions().iter().all(|&c| c) && b.verdict);
        let b = sym_battery(&s3("(1 2)", "(1 3)"), 1).unwrap();
        assert!(b.conditions().iter().all(|&c| !c) && b.verdict);
        let m = model(NamedGroup::ElementaryAbelian { p: 2, k: 2 }, &[]);
        let g = m.group().clone();
        let q = Quadruple::new(&m, closure(&g, &[1]), closure(&g, &[2])).unwrap();
        assert!(sym_battery(&q, 5).unwrap().conditions().iter().all(|&c| c));
    }

    #[test]
    fn po2_examples() {
        let b = po2_battery(&s3("(1 2)", "(1 2 3)"), 2).unwrap();
        assert!(b.conditions().iter().all(|&c| c) && b.verdict);
        let b = po2_battery(&s3("(1 2)", "(1 3)"), 2).unwrap();
        assert!(b.conditions().iter().all(|&c| !c) && b.verdict);
        let m = model(NamedGroup::Symmetric(3), &[]);
        let g = m.group().clone();
        let q = Quadruple::new(&m, m.base().clone(), closure(&g, &[1])).unwrap();
        assert_eq!(po2_battery(&q, 0).unwrap_err(), Error::NotApplicable);
        let m = model(NamedGroup::Cyclic(30), &[]);
        let g = m.group().clone();
        let q = Quadruple::new(&m, closure(&g, &[15]), closure(&g, &[3])).unwrap();
        assert_eq!(po2_battery(&q, 0).unwrap_err(), Error::NotCommutingSquare);
    }

    #[test]
    fn central_supports() {
        let c = central_support(&s3("(1 2)", "(1 3)")).unwrap();
        assert!(c.holds());
        assert_eq!(c.q_join.trace(), ratio(4, 6));
        let c = central_support(&s3("(1 2)", "(1 2 3)")).unwrap();
        assert!(c.holds());
        assert!(p_is_one(&c.p_join));
        let m = model(NamedGroup::Symmetric(3), &[]);
        let g = m.group().clone();
        let a3 = closure(&g, &[find(&g, "(1 2 3)")]);
        assert_eq!(conjugation_join(&m, &a3, &a3).unwrap(), biprojection_of(&m, &a3).unwrap());
        let m = model(NamedGroup::Cyclic(30), &[]);
        let g = m.group().clone();
        let q = Quadruple::new(&m, closure(&g, &[15]), closure(&g, &[3])).unwrap();
        assert!(matches!(central_support(&q), Err(Error::NotCommutingSquare)));
        assert!(!conjugation_sweep(&q).unwrap().holds());
    }

    #[test]
    fn r_values() {
        let q = s3("(1 2)", "(1 3)");
        assert_eq!(r_element(&q).unwrap(), ratio(1, 6));
        let m = model(NamedGroup::Cyclic(30), &[]);
        let g = m.group().clone();
        let whole = Subgroup::whole(&g);
        assert_eq!(r_element(&Quadruple::new(&m, whole.clone(), whole).unwrap()).unwrap(), ratio(1, 1));
        let chain = Quadruple::new(&m, closure(&g, &[15]), closure(&g, &[3])).unwrap();
        assert_eq!(r_element(&chain).unwrap(), ratio(2, 30));
    }

    #[test]
    fn expansion_path_matches_formula() {
        let m = model(NamedGroup::Dihedral(6), &[6]);
        let g = m.group().clone();
        let subs: Vec<Subgroup> = crate::group::enumerate_subgroups(&g, m.base()).unwrap().nodes;
        for a in &subs {
            for b in &subs {
                let q = Quadruple::new(&m, a.clone(), b.clone()).unwrap();
                let td = trace_data(&q);
                for seed in [None, Some(3), Some(11)] {
                    assert_eq!(tr_pq_by_expansion(&q, seed).unwrap(), td.tr_pq);
                    match cos_alpha(&td) {
                        Ok(c) => assert_eq!(cos_alpha_by_expansion(&q, seed).unwrap(), c),
                        Err(_) => assert!(cos_alpha_by_expansion(&q, seed).is_err()),
                    }
                }
            }
        }
    }

    #[test]
    fn two_sided_for_trivial_base() {
        let m = model(NamedGroup::Symmetric(4), &[]);
        let g = m.group().clone();
        let b = coset_basis(&m, &Subgroup::whole(&g), Some(9)).unwrap();
        assert!(b.is_two_sided());
    }
}
