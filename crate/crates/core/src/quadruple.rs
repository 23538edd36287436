//! Angles and classification of a quadruple `(N, P, Q, M)`.
//!
//! Everything here is exact: cosines are [`Surd`]s, and radians appear only
//! as presentation floats in [`QuadrupleReport`]. The angle formulas need
//! nothing beyond [`TraceData`], so they also run on abstract (non-group)
//! inputs; the group model adds independent routes through the coset
//! vectors `v_P` and through the dual convolution algebra.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{closure, FiniteGroup, Subgroup};
use crate::rational::{self, Rational};
use crate::surd::Surd;
use crate::twobox::{
    biprojection_of, corr, projection_angle, v_vector, CosetModel, TwoBoxElement,
};

/// `N = R⋊H₀ ⊂ P = R⋊K₁, Q = R⋊K₂ ⊂ M = R⋊G`.
#[derive(Debug, Clone)]
pub struct Quadruple {
    model: Arc<CosetModel>,
    k1: Subgroup,
    k2: Subgroup,
}

impl Quadruple {
    pub fn new(model: &Arc<CosetModel>, k1: Subgroup, k2: Subgroup) -> Result<Self> {
        let base = model.base();
        for k in [&k1, &k2] {
            if !base.same_parent(k) {
                return Err(Error::ParentMismatch);
            }
            if !base.is_subgroup_of(k) {
                return Err(Error::BaseNotContained);
            }
        }
        Ok(Quadruple { model: model.clone(), k1, k2 })
    }

    pub fn model(&self) -> &Arc<CosetModel> {
        &self.model
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.model.group()
    }

    pub fn base(&self) -> &Subgroup {
        self.model.base()
    }

    pub fn k1(&self) -> &Subgroup {
        &self.k1
    }

    pub fn k2(&self) -> &Subgroup {
        &self.k2
    }

    pub fn swapped(&self) -> Quadruple {
        Quadruple { model: self.model.clone(), k1: self.k2.clone(), k2: self.k1.clone() }
    }

    pub fn meet(&self) -> Subgroup {
        self.k1.intersection(&self.k2).expect("same parent checked at construction")
    }

    /// `[M:N] = |G|/|H₀|`.
    pub fn index(&self) -> usize {
        self.group().order() / self.base().order()
    }

    pub fn p_is_endpoint(&self) -> bool {
        self.k1 == *self.base() || self.k1.is_whole()
    }

    pub fn q_is_endpoint(&self) -> bool {
        self.k2 == *self.base() || self.k2.is_whole()
    }

    /// Both intermediates are minimal over `N` and distinct.
    pub fn is_minimal_pair(&self) -> bool {
        self.k1 != self.k2 && is_minimal_over(&self.k1, self.base()) && is_minimal_over(&self.k2, self.base())
    }
}

/// `K` covers `H₀`: every element outside `H₀` generates all of `K` with it.
pub fn is_minimal_over(k: &Subgroup, base: &Subgroup) -> bool {
    if k.order() == base.order() {
        return false;
    }
    let mut seed = base.generators().to_vec();
    seed.push(0);
    k.members().iter().filter(|&&g| !base.contains(g)).all(|&g| {
        *seed.last_mut().unwrap() = g;
        closure(k.parent(), &seed).order() == k.order()
    })
}

/// The trace invariants of a quadruple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceData {
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau_p: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau_q: Rational,
    #[serde(with = "rational::serde_str")]
    pub tr_pq: Rational,
    #[serde(default, with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub tau_meet: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_pair: Option<bool>,
}

impl TraceData {
    /// Builds and validates abstract trace data.
    pub fn new(tau: Rational, tau_p: Rational, tau_q: Rational, tr_pq: Rational) -> Result<Self> {
        let td = TraceData { tau, tau_p, tau_q, tr_pq, tau_meet: None, minimal_pair: None };
        td.validate()?;
        Ok(td)
    }

    pub fn with_meet(mut self, tau_meet: Rational) -> Self {
        self.tau_meet = Some(tau_meet);
        self
    }

    pub fn with_minimal_pair(mut self, flag: bool) -> Self {
        self.minimal_pair = Some(flag);
        self
    }

    /// Trace data of a chain `N ⊂ P ⊂ Q ⊂ M` from its three step indices.
    pub fn chain(index_pn: Rational, index_qp: Rational, index_mq: Rational) -> Result<Self> {
        let one = Rational::one();
        if index_pn < one || index_qp < one || index_mq < one {
            return Err(Error::NotAChain);
        }
        let tau_q = index_mq.recip();
        let tau_p = (&index_mq * &index_qp).recip();
        let tau = (&index_mq * &index_qp * &index_pn).recip();
        let td = TraceData::new(tau, tau_p.clone(), tau_q, tau_p.clone())?;
        Ok(td.with_meet(tau_p))
    }

    /// The admission gate: `0 < τ ≤ τ_P, τ_Q ≤ 1` and
    /// `max(τ, τ_Pτ_Q) ≤ tr(e_Pe_Q) ≤ min(τ_P, τ_Q)`.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTraceData(m));
        let one = Rational::one();
        let f = rational::format;
        if self.tau <= Rational::zero() {
            return bad(format!("tau = {} must be positive", f(&self.tau)));
        }
        for (name, t) in [("tau_p", &self.tau_p), ("tau_q", &self.tau_q)] {
            if *t < self.tau {
                return bad(format!("{name} = {} < tau = {}", f(t), f(&self.tau)));
            }
            if *t > one {
                return bad(format!("{name} = {} exceeds 1", f(t)));
            }
        }
        if self.tr_pq < self.tau {
            return bad(format!(
                "tr_pq = {} < tau = {}: tr(e_P e_Q) is always at least tr(e_1)",
                f(&self.tr_pq),
                f(&self.tau)
            ));
        }
        let product = &self.tau_p * &self.tau_q;
        if self.tr_pq < product {
            return bad(format!(
                "tr_pq = {} < tau_p·tau_q = {}: tr(e_P e_Q) is always at least tr(e_P)tr(e_Q)",
                f(&self.tr_pq),
                f(&product)
            ));
        }
        let min = (&self.tau_p).min(&self.tau_q);
        if self.tr_pq > *min {
            return bad(format!("tr_pq = {} exceeds min(tau_p, tau_q) = {}", f(&self.tr_pq), f(min)));
        }
        if let Some(m) = &self.tau_meet {
            if *m < self.tau || *m > self.tr_pq {
                return bad(format!(
                    "tau_meet = {} must lie between tau and tr_pq (e_1 ≤ e_P∧e_Q and tr(e_P∧e_Q) ≤ tr(e_P e_Q))",
                    f(m)
                ));
            }
        }
        Ok(())
    }

    pub fn swapped(&self) -> TraceData {
        TraceData { tau_p: self.tau_q.clone(), tau_q: self.tau_p.clone(), ..self.clone() }
    }

    /// `[M:N]`.
    pub fn index(&self) -> Rational {
        self.tau.recip()
    }

    pub fn is_parallelogram(&self) -> bool {
        &self.tau_p * &self.tau_q == self.tau
    }
}

/// `τ = |H₀|/|G|`, `τ_P = |K₁|/|G|`, `τ_Q = |K₂|/|G|`, `tr(e_Pe_Q) = |K₁∩K₂|/|G|`.
pub fn trace_data(quad: &Quadruple) -> TraceData {
    let g = quad.group().order() as i64;
    let r = |n: usize| rational::ratio(n as i64, g);
    let meet = r(quad.meet().order());
    TraceData {
        tau: r(quad.base().order()),
        tau_p: r(quad.k1.order()),
        tau_q: r(quad.k2.order()),
        tr_pq: meet.clone(),
        tau_meet: Some(meet),
        minimal_pair: Some(quad.is_minimal_pair()),
    }
}

/// `(tr(e_Pe_Q) − τ)/√((τ_P − τ)(τ_Q − τ))`.
pub fn cos_alpha(td: &TraceData) -> Result<Surd> {
    let a = &td.tau_p - &td.tau;
    let b = &td.tau_q - &td.tau;
    if a.is_zero() || b.is_zero() {
        return Err(Error::AngleUndefined("alpha needs P, Q different from N"));
    }
    Surd::rational(&td.tr_pq - &td.tau).checked_mul(&Surd::sqrt(&(a * b))?.recip()?)
}

/// `(tr(e_Pe_Q) − τ_Pτ_Q)/√((τ_P − τ_P²)(τ_Q − τ_Q²))`, for extremal quadruples.
pub fn cos_beta(td: &TraceData) -> Result<Surd> {
    let one = Rational::one();
    for t in [&td.tau_p, &td.tau_q] {
        if *t == td.tau || *t == one {
            return Err(Error::AngleUndefined("beta needs P, Q different from N and M"));
        }
    }
    let a = &td.tau_p - &td.tau_p * &td.tau_p;
    let b = &td.tau_q - &td.tau_q * &td.tau_q;
    Surd::rational(&td.tr_pq - &td.tau_p * &td.tau_q).checked_mul(&Surd::sqrt(&(a * b))?.recip()?)
}

/// `cos α(P, Q) = √(([P:N] − 1)/([Q:N] − 1))` for a chain `N ⊂ P ⊂ Q`.
pub fn cos_alpha_nested(index_pn: &Rational, index_qn: &Rational) -> Result<Surd> {
    let one = Rational::one();
    if *index_pn <= one || index_pn > index_qn {
        return Err(Error::NotAChain);
    }
    Surd::sqrt(&((index_pn - &one) / (index_qn - &one)))
}

/// `cos β(P, Q) = √(([M:Q] − 1)/([M:P] − 1))` for a chain `P ⊂ Q ⊂ M`.
pub fn cos_beta_nested(index_mq: &Rational, index_mp: &Rational) -> Result<Surd> {
    let one = Rational::one();
    if *index_mq <= one || index_mq > index_mp {
        return Err(Error::NotAChain);
    }
    Surd::sqrt(&((index_mq - &one) / (index_mp - &one)))
}

/// Step indices of a nested pair, with the chain closed forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainData {
    /// `true` when `P ⊂ Q`; otherwise `Q ⊂ P` and the roles are swapped.
    pub p_below_q: bool,
    #[serde(with = "rational::serde_str")]
    pub index_lower_n: Rational,
    #[serde(with = "rational::serde_str")]
    pub index_upper_lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub index_m_upper: Rational,
    pub cos_alpha: Option<Surd>,
    pub cos_beta: Option<Surd>,
}

fn chain_data(td: &TraceData) -> Option<ChainData> {
    let p_below_q = td.tr_pq == td.tau_p;
    if !p_below_q && td.tr_pq != td.tau_q {
        return None;
    }
    let (lower, upper) = if p_below_q { (&td.tau_p, &td.tau_q) } else { (&td.tau_q, &td.tau_p) };
    let index_lower_n = lower / &td.tau;
    let index_upper_lower = upper / lower;
    let index_m_upper = upper.recip();
    let index_upper_n = &index_lower_n * &index_upper_lower;
    let index_m_lower = &index_m_upper * &index_upper_lower;
    Some(ChainData {
        p_below_q,
        cos_alpha: cos_alpha_nested(&index_lower_n, &index_upper_n).ok(),
        cos_beta: cos_beta_nested(&index_m_upper, &index_m_lower).ok(),
        index_lower_n,
        index_upper_lower,
        index_m_upper,
    })
}

/// Exact cosines, derived flags, and presentation-only radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleReport {
    pub cos_alpha: Option<Surd>,
    pub cos_beta: Option<Surd>,
    pub alpha_radians: Option<f64>,
    pub beta_radians: Option<f64>,
    pub commuting: Option<bool>,
    pub cocommuting: Option<bool>,
    pub parallelogram: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<ChainData>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

fn radians(c: &Surd) -> f64 {
    c.to_f64().clamp(-1.0, 1.0).acos()
}

pub fn classify(td: &TraceData) -> QuadrupleReport {
    let mut undefined = vec![];
    let mut keep = |r: Result<Surd>, name: &str| match r {
        Ok(s) => Some(s),
        Err(e) => {
            undefined.push(format!("{name}: {e}"));
            None
        }
    };
    let ca = keep(cos_alpha(td), "alpha");
    let cb = keep(cos_beta(td), "beta");
    let parallelogram = td.is_parallelogram();
    if parallelogram {
        if let (Some(a), Some(b)) = (&ca, &cb) {
            debug_assert_eq!(a, b, "parallelogram with unequal angles");
        }
    }
    QuadrupleReport {
        alpha_radians: ca.as_ref().map(radians),
        beta_radians: cb.as_ref().map(radians),
        commuting: ca.as_ref().map(Surd::is_zero),
        cocommuting: cb.as_ref().map(Surd::is_zero),
        cos_alpha: ca,
        cos_beta: cb,
        parallelogram,
        nested: chain_data(td),
        undefined,
    }
}

pub fn classify_quadruple(quad: &Quadruple) -> QuadrupleReport {
    classify(&trace_data(quad))
}

/// Group-model commuting criterion: `K₁ ∩ K₂ = H₀`.
pub fn commuting_by_groups(quad: &Quadruple) -> bool {
    quad.meet() == *quad.base()
}

/// Group-model co-commuting criterion: `|G||K₁∩K₂| = |K₁||K₂|`.
pub fn cocommuting_by_groups(quad: &Quadruple) -> bool {
    quad.group().order() * quad.meet().order() == quad.k1.order() * quad.k2.order()
}

/// Outcome of the minimal-pair inequality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiniCheck {
    /// `τ_Pτ_Q / tr(e_Pe_Q)`.
    #[serde(with = "rational::serde_str")]
    pub ratio: Rational,
    /// `τ_P + τ_Q − τ`.
    #[serde(with = "rational::serde_str")]
    pub lower_bound: Rational,
    pub tight: bool,
    pub cos_alpha: Surd,
    /// `cos α < 1/2`, i.e. `α > π/3`.
    pub below_half: bool,
}

/// Checks `τ_Pτ_Q/tr(e_Pe_Q) ≥ τ_P + τ_Q − τ` and its consequence `cos α < 1/2`
/// on data flagged as a minimal pair.
pub fn check_mini(td: &TraceData) -> Result<MiniCheck> {
    if td.minimal_pair != Some(true) {
        return Err(Error::NotMinimalPair("minimal_pair flag not set".into()));
    }
    let meet = td
        .tau_meet
        .as_ref()
        .ok_or_else(|| Error::NotMinimalPair("tau_meet is required for minimal pairs".into()))?;
    if *meet != td.tau {
        return Err(Error::NotMinimalPair(format!(
            "minimal pairs meet in N, but tau_meet = {} ≠ tau = {}",
            rational::format(meet),
            rational::format(&td.tau)
        )));
    }
    let ratio = &td.tau_p * &td.tau_q / &td.tr_pq;
    let lower_bound = &td.tau_p + &td.tau_q - &td.tau;
    if ratio < lower_bound {
        return Err(Error::NotMinimalPair(format!(
            "tau_p·tau_q/tr_pq = {} < tau_p + tau_q − tau = {}",
            rational::format(&ratio),
            rational::format(&lower_bound)
        )));
    }
    let cos_alpha = cos_alpha(td)?;
    let below_half = cos_alpha < Surd::rational(rational::ratio(1, 2));
    Ok(MiniCheck { tight: ratio == lower_bound, ratio, lower_bound, cos_alpha, below_half })
}

/// `cos α` as `⟨v_P, v_Q⟩` in the coset-projection algebra.
pub fn cos_alpha_by_vectors(quad: &Quadruple) -> Result<Surd> {
    let vp = v_vector(&biprojection_of(&quad.model, &quad.k1)?)?;
    let vq = v_vector(&biprojection_of(&quad.model, &quad.k2)?)?;
    vp.inner(&vq)
}

/// `cos α` as `corr(e_{P₁}, e_{Q₁})` in the dual convolution algebra.
pub fn cos_alpha_by_correlation(quad: &Quadruple) -> Result<Surd> {
    if quad.k1 == *quad.base() || quad.k2 == *quad.base() {
        return Err(Error::AngleUndefined("alpha needs P, Q different from N"));
    }
    let ep = TwoBoxElement::dual_biprojection(&quad.k1, quad.base())?;
    let eq = TwoBoxElement::dual_biprojection(&quad.k2, quad.base())?;
    corr(&ep, &eq)
}

/// `cos β(P, Q) = cos α(P₁, Q₁)` computed in the dual convolution algebra,
/// where the dual Jones projection is `1_G/|G|`.
pub fn cos_beta_by_dual_angle(quad: &Quadruple) -> Result<Surd> {
    if quad.p_is_endpoint() || quad.q_is_endpoint() {
        return Err(Error::AngleUndefined("beta needs P, Q different from N and M"));
    }
    let base = quad.base();
    let e2 = TwoBoxElement::dual_biprojection(&Subgroup::whole(quad.group()), base)?;
    let ep = TwoBoxElement::dual_biprojection(&quad.k1, base)?;
    let eq = TwoBoxElement::dual_biprojection(&quad.k2, base)?;
    projection_angle(&e2, &ep, &eq)
}
