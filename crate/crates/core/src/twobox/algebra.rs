//! The two 2-box algebras of `R ⊂ R⋊G` as functions on `G` with values in
//! ℚ(√|G|).
//!
//! - Pointwise side (`N′∩M₁`): product is pointwise, `tr(x) = Σx/|G|`,
//!   coproduct `x * y = δ⁻¹·(x ⋆ y)` with `⋆` group convolution.
//! - Convolution side (`M′∩M₂`): product is convolution, coproduct is
//!   `δ·(pointwise product)`, and the trace is read off at the identity.
//!
//! The Fourier transform `x ↦ δ⁻¹x` carries the pointwise side onto the
//! convolution side isometrically and swaps product with coproduct.
//!
//! The convolution side also accepts a nontrivial base `H₀`: then it is the
//! corner `e C[G] e` with unit `e = 1_{H₀}/|H₀|` and `tr(x) = |H₀|·x(1)`,
//! which is where the dual biprojections `1_K/|K|` of `R⋊H₀ ⊂ R⋊G` live.
//! Coproduct and Fourier need the trivial base.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::coset::CosetFunction;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::quadratic::QuadraticNumber;
use crate::rational::{self, Rational};
use crate::surd::Surd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Pointwise,
    Convolution,
}

#[derive(Debug, Clone)]
pub struct TwoBoxElement {
    group: Arc<FiniteGroup>,
    base: Subgroup,
    side: Side,
    values: Vec<QuadraticNumber>,
}

impl PartialEq for TwoBoxElement {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.base == other.base && self.values == other.values
    }
}

/// `δ = √|G|` inside ℚ(√|G|).
pub fn delta(group: &FiniteGroup) -> QuadraticNumber {
    QuadraticNumber::sqrt_of(group.order() as u64)
}

impl TwoBoxElement {
    fn field(group: &FiniteGroup) -> u64 {
        group.order() as u64
    }

    pub fn from_values(group: &Arc<FiniteGroup>, side: Side, values: Vec<QuadraticNumber>) -> Self {
        assert_eq!(values.len(), group.order());
        TwoBoxElement { group: group.clone(), base: Subgroup::trivial(group), side, values }
    }

    pub fn from_rationals(group: &Arc<FiniteGroup>, side: Side, values: Vec<Rational>) -> Self {
        let d = Self::field(group);
        Self::from_values(group, side, values.into_iter().map(|v| QuadraticNumber::from_rational(v, d)).collect())
    }

    /// Pointwise-side element from a coset function with trivial base.
    pub fn from_coset_function(f: &CosetFunction) -> Result<Self> {
        let model = f.model();
        if !model.base().is_trivial() {
            return Err(Error::ModelMismatch);
        }
        let group = model.group();
        let values = group.elements().map(|g| f.at(g).clone()).collect();
        Ok(Self::from_rationals(group, Side::Pointwise, values))
    }

    pub fn indicator(group: &Arc<FiniteGroup>, side: Side, elements: &[usize]) -> Self {
        let mut v = vec![Rational::zero(); group.order()];
        for &g in elements {
            v[g] = Rational::one();
        }
        Self::from_rationals(group, side, v)
    }

    /// The pointwise biprojection `e_K = 1_K`.
    pub fn biprojection(k: &Subgroup) -> Self {
        Self::indicator(k.parent(), Side::Pointwise, k.members())
    }

    /// The dual biprojection `e_{K₁} = 1_K/|K|` on the convolution side over `base`.
    pub fn dual_biprojection(k: &Subgroup, base: &Subgroup) -> Result<Self> {
        if !base.same_parent(k) {
            return Err(Error::ParentMismatch);
        }
        if !base.is_subgroup_of(k) {
            return Err(Error::BaseNotContained);
        }
        let group = k.parent();
        let w = rational::ratio(1, k.order() as i64);
        let mut v = vec![Rational::zero(); group.order()];
        for &g in k.members() {
            v[g] = w.clone();
        }
        let mut x = Self::from_rationals(group, Side::Convolution, v);
        x.base = base.clone();
        Ok(x)
    }

    pub fn identity(group: &Arc<FiniteGroup>, side: Side) -> Self {
        match side {
            Side::Pointwise => Self::indicator(group, side, &group.elements().collect::<Vec<_>>()),
            Side::Convolution => Self::indicator(group, side, &[0]),
        }
    }

    /// Identity of the convolution corner over `base`, i.e. `1_{H₀}/|H₀|`.
    pub fn corner_identity(base: &Subgroup) -> Self {
        Self::dual_biprojection(base, base).expect("base contains itself")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[QuadraticNumber] {
        &self.values
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if self.side == other.side && self.base == other.base && *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn map(&self, f: impl Fn(usize, &QuadraticNumber) -> QuadraticNumber) -> Self {
        TwoBoxElement {
            group: self.group.clone(),
            base: self.base.clone(),
            side: self.side,
            values: self.values.iter().enumerate().map(|(g, v)| f(g, v)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&QuadraticNumber, &QuadraticNumber) -> QuadraticNumber) -> Result<Self> {
        self.same_model(other)?;
        let mut out = self.clone();
        for (o, b) in out.values.iter_mut().zip(&other.values) {
            *o = f(o, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &QuadraticNumber) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|_, v| v.scale(q))
    }

    fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let g = &self.group;
        let mut out = vec![QuadraticNumber::zero(Self::field(g)); g.order()];
        for (h, xh) in self.values.iter().enumerate() {
            if xh.is_zero() {
                continue;
            }
            for (k, yk) in other.values.iter().enumerate() {
                if yk.is_zero() {
                    continue;
                }
                let hk = g.compose(h, k);
                out[hk] = &out[hk] + &(xh * yk);
            }
        }
        Ok(TwoBoxElement { group: g.clone(), base: self.base.clone(), side: self.side, values: out })
    }

    /// The algebra product of this side.
    pub fn product(&self, other: &Self) -> Result<Self> {
        match self.side {
            Side::Pointwise => self.pointwise_mul(other),
            Side::Convolution => self.convolve(other),
        }
    }

    /// The coproduct: `δ⁻¹(x ⋆ y)` on the pointwise side, `δ·xy` on the
    /// convolution side.
    pub fn coproduct(&self, other: &Self) -> Result<Self> {
        if !self.base.is_trivial() {
            return Err(Error::ModelMismatch);
        }
        let d = delta(&self.group);
        match self.side {
            Side::Pointwise => Ok(self.convolve(other)?.scale(&d.recip().expect("δ ≠ 0"))),
            Side::Convolution => Ok(self.pointwise_mul(other)?.scale(&d)),
        }
    }

    pub fn trace(&self) -> QuadraticNumber {
        match self.side {
            Side::Pointwise => {
                let d = Self::field(&self.group);
                let sum = self.values.iter().fold(QuadraticNumber::zero(d), |acc, v| &acc + v);
                sum.scale(&rational::ratio(1, self.group.order() as i64))
            }
            Side::Convolution => self.values[0].scale(&rational::int(self.base.order() as i64)),
        }
    }

    /// `x*`: identity on real pointwise functions, `g ↦ x(g⁻¹)` under convolution.
    pub fn adjoint(&self) -> Self {
        match self.side {
            Side::Pointwise => self.clone(),
            Side::Convolution => self.map(|g, _| self.values[self.group.inverse(g)].clone()),
        }
    }

    pub fn unit(&self) -> Self {
        match self.side {
            Side::Pointwise => Self::identity(&self.group, Side::Pointwise),
            Side::Convolution => Self::corner_identity(&self.base),
        }
    }

    /// `⟨x, y⟩ = tr(y* x)`; on both sides this is a weighted `Σ x(g)y(g)`.
    pub fn inner(&self, other: &Self) -> Result<QuadraticNumber> {
        self.same_model(other)?;
        let d = Self::field(&self.group);
        let sum = self.values.iter().zip(&other.values).fold(QuadraticNumber::zero(d), |acc, (a, b)| &acc + &(a * b));
        let w = match self.side {
            Side::Pointwise => rational::ratio(1, self.group.order() as i64),
            Side::Convolution => rational::int(self.base.order() as i64),
        };
        Ok(sum.scale(&w))
    }

    pub fn is_projection(&self) -> bool {
        self.adjoint() == *self && self.product(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// Elements where the value is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&g| !self.values[g].is_zero()).collect()
    }

    /// Every value lies in ℚ.
    pub fn rational_values(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(|v| v.as_rational().cloned()).collect()
    }

    fn require_pointwise_projection(&self) -> Result<()> {
        if self.side != Side::Pointwise || !self.is_projection() {
            return Err(Error::NotProjection);
        }
        Ok(())
    }
}

/// A pointwise-side projection whose support is a subgroup.
pub fn is_biprojection(x: &TwoBoxElement) -> bool {
    if x.side != Side::Pointwise || !x.is_projection() {
        return false;
    }
    let support = x.support();
    let g = &x.group;
    let inside = |h: usize| !x.values[h].is_zero();
    inside(0)
        && support.iter().all(|&a| inside(g.inverse(a)) && support.iter().all(|&b| inside(g.compose(a, b))))
}

pub fn coproduct(x: &TwoBoxElement, y: &TwoBoxElement) -> Result<TwoBoxElement> {
    x.coproduct(y)
}

/// `(e_P * e_Q)/(δ·tr(e_P e_Q))`, a projection by Landau's theorem.
pub fn landau_projection(e_p: &TwoBoxElement, e_q: &TwoBoxElement) -> Result<TwoBoxElement> {
    if !is_biprojection(e_p) || !is_biprojection(e_q) {
        return Err(Error::NotBiprojection);
    }
    let co = e_p.coproduct(e_q)?;
    let t = e_p.product(e_q)?.trace();
    let norm = (&delta(&e_p.group) * &t).recip().ok_or(Error::NotBiprojection)?;
    Ok(co.scale(&norm))
}

/// `e_P ∨ e_Q`: indicator of the union of supports.
pub fn join_projection(e_p: &TwoBoxElement, e_q: &TwoBoxElement) -> Result<TwoBoxElement> {
    e_p.require_pointwise_projection()?;
    e_q.require_pointwise_projection()?;
    // p + q − pq for commuting projections
    e_p.add(e_q)?.sub(&e_p.product(e_q)?)
}

/// `e_P ∧ e_Q`: indicator of the intersection of supports.
pub fn meet_projection(e_p: &TwoBoxElement, e_q: &TwoBoxElement) -> Result<TwoBoxElement> {
    e_p.require_pointwise_projection()?;
    e_q.require_pointwise_projection()?;
    e_p.product(e_q)
}

/// Pointwise `x ≤ y` for real-valued elements.
pub fn dominated_by(x: &TwoBoxElement, y: &TwoBoxElement) -> Result<bool> {
    x.same_model(y)?;
    let xs = x.rational_values().ok_or(Error::NotProjection)?;
    let ys = y.rational_values().ok_or(Error::NotProjection)?;
    Ok(xs.iter().zip(&ys).all(|(a, b)| a <= b))
}

/// `𝔉`: pointwise → convolution is `x ↦ δ⁻¹x`; convolution → pointwise is
/// the inverse map `x ↦ δx`.
pub fn fourier(x: &TwoBoxElement) -> Result<TwoBoxElement> {
    if !x.base.is_trivial() {
        return Err(Error::ModelMismatch);
    }
    let d = delta(&x.group);
    let (side, c) = match x.side {
        Side::Pointwise => (Side::Convolution, d.recip().expect("δ ≠ 0")),
        Side::Convolution => (Side::Pointwise, d),
    };
    let mut out = x.scale(&c);
    out.side = side;
    Ok(out)
}

fn rational_of(q: QuadraticNumber, what: &'static str) -> Result<Rational> {
    q.as_rational().cloned().ok_or(Error::Irrational(what))
}

/// `corr(x, y) = ⟨(x − tr x)/‖·‖, (y − tr y)/‖·‖⟩` with `tr x` meaning
/// `tr(x)·1`.
pub fn corr(x: &TwoBoxElement, y: &TwoBoxElement) -> Result<Surd> {
    x.same_model(y)?;
    let centre = |z: &TwoBoxElement| z.sub(&z.unit().scale(&z.trace()));
    let (cx, cy) = (centre(x)?, centre(y)?);
    let nx = rational_of(cx.inner(&cx)?, "correlation norm is irrational")?;
    let ny = rational_of(cy.inner(&cy)?, "correlation norm is irrational")?;
    if nx.is_zero() || ny.is_zero() {
        return Err(Error::ZeroVariance);
    }
    let num = rational_of(cx.inner(&cy)?, "correlation is irrational")?;
    Surd::rational(num).checked_mul(&Surd::sqrt(&(nx * ny))?.recip()?)
}

/// `⟨(p − b)/‖p − b‖, (q − b)/‖q − b‖⟩` for projections `p, q ≥ b`.
///
/// On the pointwise side with `b = e₁` this is `cos α(P, Q)`; on the
/// convolution side with `b` the dual Jones projection it is the angle of
/// the dual pair, i.e. `cos β(P, Q)`.
pub fn projection_angle(b: &TwoBoxElement, p: &TwoBoxElement, q: &TwoBoxElement) -> Result<Surd> {
    let (dp, dq) = (p.sub(b)?, q.sub(b)?);
    let np = rational_of(dp.inner(&dp)?, "projection norm is irrational")?;
    let nq = rational_of(dq.inner(&dq)?, "projection norm is irrational")?;
    if np.is_zero() || nq.is_zero() {
        return Err(Error::AngleUndefined("projection equals the base projection"));
    }
    let num = rational_of(dp.inner(&dq)?, "angle is irrational")?;
    Surd::rational(num).checked_mul(&Surd::sqrt(&(np * nq))?.recip()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{closure, named_group, Caps, NamedGroup};
    use crate::rational::ratio;

    fn group(f: NamedGroup) -> Arc<FiniteGroup> {
        named_group(&f, Caps::default()).unwrap().into_arc()
    }

    fn find(g: &FiniteGroup, label: &str) -> usize {
        g.elements().find(|&x| g.label(x) == label).unwrap()
    }

    #[test]
    fn biprojection_recognition() {
        let g = group(NamedGroup::Symmetric(3));
        let h = closure(&g, &[find(&g, "(1 2)")]);
        let e_h = TwoBoxElement::biprojection(&h);
        assert!(is_biprojection(&e_h));
        let not_closed = TwoBoxElement::indicator(&g, Side::Pointwise, &[0, find(&g, "(1 2 3)")]);
        assert!(!is_biprojection(&not_closed));
        assert!(!is_biprojection(&e_h.scale_rational(&ratio(1, 2))));
        let no_identity = TwoBoxElement::indicator(&g, Side::Pointwise, &[find(&g, "(1 2)")]);
        assert!(!is_biprojection(&no_identity));
    }

    #[test]
    fn coproduct_of_jones_projection() {
        let g = group(NamedGroup::Symmetric(3));
        let e1 = TwoBoxElement::biprojection(&Subgroup::trivial(&g));
        let c = coproduct(&e1, &e1).unwrap();
        assert_eq!(c, e1.scale(&delta(&g).recip().unwrap()));
    }

    #[test]
    fn landau_s3_transposition_pair() {
        let g = group(NamedGroup::Symmetric(3));
        let h = closure(&g, &[find(&g, "(1 2)")]);
        let k = closure(&g, &[find(&g, "(1 3)")]);
        let l = landau_projection(&TwoBoxElement::biprojection(&h), &TwoBoxElement::biprojection(&k)).unwrap();
        assert!(l.is_projection());
        assert_eq!(l.support().len(), 4);
        let same = landau_projection(&TwoBoxElement::biprojection(&h), &TwoBoxElement::biprojection(&h)).unwrap();
        assert_eq!(same, TwoBoxElement::biprojection(&h));
        let half = TwoBoxElement::biprojection(&h).scale_rational(&ratio(1, 2));
        assert_eq!(landau_projection(&half, &half).unwrap_err(), Error::NotBiprojection);
    }

    #[test]
    fn join_and_meet() {
        let g = group(NamedGroup::Symmetric(3));
        let e_h = TwoBoxElement::biprojection(&closure(&g, &[find(&g, "(1 2)")]));
        let e_k = TwoBoxElement::biprojection(&closure(&g, &[find(&g, "(1 3)")]));
        assert_eq!(join_projection(&e_h, &e_h).unwrap(), e_h);
        assert_eq!(join_projection(&e_h, &e_k).unwrap().trace().as_rational(), Some(&ratio(3, 6)));
        assert_eq!(meet_projection(&e_h, &e_k).unwrap().trace().as_rational(), Some(&ratio(1, 6)));
        let bad = e_h.scale_rational(&ratio(2, 1));
        assert_eq!(join_projection(&bad, &e_h).unwrap_err(), Error::NotProjection);
    }

    #[test]
    fn fourier_of_units() {
        let g = group(NamedGroup::Cyclic(6));
        let d = delta(&g);
        let one = TwoBoxElement::identity(&g, Side::Pointwise);
        let f = fourier(&one).unwrap();
        assert_eq!(f.side(), Side::Convolution);
        let dual_jones = TwoBoxElement::dual_biprojection(&Subgroup::whole(&g), &Subgroup::trivial(&g)).unwrap();
        assert_eq!(f, dual_jones.scale(&d));
        let e1 = TwoBoxElement::biprojection(&Subgroup::trivial(&g));
        assert_eq!(fourier(&e1).unwrap(), TwoBoxElement::identity(&g, Side::Convolution).scale(&d.recip().unwrap()));
        assert_eq!(fourier(&fourier(&e1).unwrap()).unwrap(), e1);
    }

    #[test]
    fn corr_basics() {
        let g = group(NamedGroup::Symmetric(3));
        let t = Subgroup::trivial(&g);
        let h = closure(&g, &[find(&g, "(1 2)")]);
        let k = closure(&g, &[find(&g, "(1 3)")]);
        let dh = TwoBoxElement::dual_biprojection(&h, &t).unwrap();
        let dk = TwoBoxElement::dual_biprojection(&k, &t).unwrap();
        assert_eq!(corr(&dh, &dh).unwrap(), Surd::one());
        assert_eq!(corr(&dh, &dk).unwrap(), Surd::zero());
        let unit = TwoBoxElement::identity(&g, Side::Convolution);
        assert_eq!(corr(&unit, &dh).unwrap_err(), Error::ZeroVariance);
    }
}
