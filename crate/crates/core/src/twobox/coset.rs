//! The abelian algebra spanned by the coset projections `u_g e₁ u_g*`.
//!
//! For `N = R⋊H₀ ⊂ M = R⋊G` the projection `u_g e₁ u_g*` is the indicator of
//! the left coset `gH₀`; these are orthogonal, sum to 1 and each has trace
//! `|H₀|/|G|`. Biprojections, the Jones projection `e₁`, the operators `p`
//! and `q`, and the unit vectors `v_P` all live in this algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::rational::{self, Rational};
use crate::surd::Surd;

/// Left cosets of `H₀` in `G`, indexed by ascending minimal representative.
#[derive(Debug)]
pub struct CosetModel {
    group: Arc<FiniteGroup>,
    base: Subgroup,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl CosetModel {
    pub fn new(group: &Arc<FiniteGroup>, base: &Subgroup) -> Result<Arc<Self>> {
        if !(Arc::ptr_eq(group, base.parent()) || **group == **base.parent()) {
            return Err(Error::ParentMismatch);
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut reps = vec![];
        for g in group.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &h in base.members() {
                coset_of[group.compose(g, h)] = reps.len();
            }
            reps.push(g);
        }
        Ok(Arc::new(CosetModel { group: group.clone(), base: base.clone(), coset_of, reps }))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    /// Number of cosets, `[M:N] = [G:H₀]`.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// `τ = tr(e₁) = |H₀|/|G|`.
    pub fn tau(&self) -> Rational {
        rational::ratio(self.base.order() as i64, self.group.order() as i64)
    }

    /// Canonical representatives of the `H₀`-cosets inside `K`.
    pub fn representatives_in(&self, k: &Subgroup) -> Result<Vec<usize>> {
        self.check_contains_base(k)?;
        Ok(self.reps.iter().copied().filter(|&r| k.contains(r)).collect())
    }

    fn check_contains_base(&self, k: &Subgroup) -> Result<()> {
        if !self.base.same_parent(k) {
            return Err(Error::ParentMismatch);
        }
        if !self.base.is_subgroup_of(k) {
            return Err(Error::BaseNotContained);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CosetFunction {
    model: Arc<CosetModel>,
    values: Vec<Rational>,
}

impl PartialEq for CosetFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model) && self.values == other.values
    }
}

impl Eq for CosetFunction {}

impl CosetFunction {
    pub fn from_values(model: &Arc<CosetModel>, values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), model.len());
        CosetFunction { model: model.clone(), values }
    }

    pub fn zero(model: &Arc<CosetModel>) -> Self {
        Self::from_values(model, vec![Rational::zero(); model.len()])
    }

    pub fn identity(model: &Arc<CosetModel>) -> Self {
        Self::from_values(model, vec![Rational::one(); model.len()])
    }

    /// `u_g e₁ u_g*`, the indicator of `gH₀`.
    pub fn coset_projection(model: &Arc<CosetModel>, g: usize) -> Self {
        let mut f = Self::zero(model);
        f.values[model.coset_of(g)] = Rational::one();
        f
    }

    /// Indicator of the union of the cosets meeting `elements`.
    pub fn indicator<I: IntoIterator<Item = usize>>(model: &Arc<CosetModel>, elements: I) -> Self {
        let mut f = Self::zero(model);
        for g in elements {
            f.values[model.coset_of(g)] = Rational::one();
        }
        f
    }

    pub fn model(&self) -> &Arc<CosetModel> {
        &self.model
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value on the coset of `g`.
    pub fn at(&self, g: usize) -> &Rational {
        &self.values[self.model.coset_of(g)]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(CosetFunction { model: self.model.clone(), values })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CosetFunction { model: self.model.clone(), values: self.values.iter().map(|v| v * q).collect() }
    }

    /// `tr(f) = (|H₀|/|G|)·Σ f`.
    pub fn trace(&self) -> Rational {
        let sum: Rational = self.values.iter().sum();
        sum * self.model.tau()
    }

    /// `⟨x, y⟩ = tr(y* x)`; everything here is real.
    pub fn inner(&self, other: &Self) -> Result<Rational> {
        Ok(self.mul(other)?.trace())
    }

    pub fn is_projection(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// Indicator of the nonzero cosets.
    pub fn support(&self) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| if v.is_zero() { Rational::zero() } else { Rational::one() })
            .collect();
        CosetFunction { model: self.model.clone(), values }
    }

    /// Eigenvalues with multiplicity; the algebra is abelian so these are the values.
    pub fn spectrum(&self) -> Vec<Rational> {
        let mut s = self.values.clone();
        s.sort();
        s
    }

    /// Coset-representative index → `"a/b"`.
    pub fn to_value_map(&self) -> BTreeMap<String, String> {
        self.model
            .reps
            .iter()
            .zip(&self.values)
            .map(|(r, v)| (r.to_string(), rational::format(v)))
            .collect()
    }

    pub fn from_value_map(model: &Arc<CosetModel>, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut f = Self::zero(model);
        for (k, v) in map {
            let g: usize = k.parse().map_err(|_| Error::Parse(format!("bad coset key {k:?}")))?;
            if g >= model.group.order() || model.reps[model.coset_of(g)] != g {
                return Err(Error::Parse(format!("{g} is not a canonical coset representative")));
            }
            f.values[model.coset_of(g)] = rational::parse(v)?;
        }
        Ok(f)
    }
}

/// The biprojection `e_P` for `P = R⋊K`: the indicator of the cosets in `K`.
pub fn biprojection_of(model: &Arc<CosetModel>, k: &Subgroup) -> Result<CosetFunction> {
    model.check_contains_base(k)?;
    Ok(CosetFunction::indicator(model, k.members().iter().copied()))
}

/// The Jones projection `e₁ = e_N`.
pub fn jones_projection(model: &Arc<CosetModel>) -> CosetFunction {
    CosetFunction::coset_projection(model, 0)
}

/// A vector `direction · scale` of unit 2-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    pub direction: CosetFunction,
    pub scale: Surd,
}

impl UnitVector {
    pub fn inner(&self, other: &UnitVector) -> Result<Surd> {
        let raw = self.direction.inner(&other.direction)?;
        Surd::rational(raw).checked_mul(&self.scale.checked_mul(&other.scale)?)
    }

    pub fn norm_squared(&self) -> Result<Surd> {
        self.inner(self)
    }
}

/// `v_P = (e_P − e₁)/‖e_P − e₁‖₂`.
pub fn v_vector(e_p: &CosetFunction) -> Result<UnitVector> {
    let direction = e_p.sub(&jones_projection(e_p.model()))?;
    let norm_sq = direction.inner(&direction)?;
    if norm_sq.is_zero() {
        return Err(Error::AngleUndefined("P = N gives the zero vector e_P − e₁"));
    }
    let scale = Surd::sqrt(&norm_sq)?.recip()?;
    Ok(UnitVector { direction, scale })
}

/// `Σ_{i,j} u_{a_i b_j} e₁ u_{a_i b_j}*` for representative lists `a`, `b`.
///
/// With `a` a basis for `P/N` and `b` for `Q/N` this is `p`; swapping the
/// lists gives `q`.
pub fn product_basis_sum(model: &Arc<CosetModel>, a: &[usize], b: &[usize]) -> CosetFunction {
    let g = model.group();
    let mut counts = vec![0i64; model.len()];
    for &x in a {
        for &y in b {
            counts[model.coset_of(g.compose(x, y))] += 1;
        }
    }
    CosetFunction::from_values(model, counts.into_iter().map(|c| Rational::from_integer(BigInt::from(c))).collect())
}

/// `p = Σ λ_i μ_j e₁ μ_j* λ_i*` with canonical coset representatives.
pub fn p_element(model: &Arc<CosetModel>, k1: &Subgroup, k2: &Subgroup) -> Result<CosetFunction> {
    let lambdas = model.representatives_in(k1)?;
    let mus = model.representatives_in(k2)?;
    Ok(product_basis_sum(model, &lambdas, &mus))
}

/// `q = Σ μ_j λ_i e₁ λ_i* μ_j*` with canonical coset representatives.
pub fn q_element(model: &Arc<CosetModel>, k1: &Subgroup, k2: &Subgroup) -> Result<CosetFunction> {
    p_element(model, k2, k1)
}

/// `tr(q) = [M:N]/([M:P][M:Q]) = |K₁||K₂|/(|H₀||G|)`.
pub fn trace_of_q_closed_form(model: &CosetModel, k1: &Subgroup, k2: &Subgroup) -> Rational {
    rational::ratio(
        (k1.order() * k2.order()) as i64,
        (model.base().order() * model.group().order()) as i64,
    )
}
