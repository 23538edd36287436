//! Theorem batteries over a corpus of `(G, H₀)` pairs and over abstract
//! trace data.
//!
//! Each suite tallies named checks. A check records its first failing
//! instance as a witness string, so a failing run points at one concrete
//! quadruple.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{
    coset_basis, conjugation_sweep, cos_alpha_by_expansion, is_exact_factorization, p_from_bases,
    p_is_one, po2_battery, projection_conditions, q_from_bases, r_element, spectra_match, sym_battery,
    tr_pq_by_expansion,
};
use crate::census::{census, gram_is_psd, lattice_bounds, packing_certificate, packing_from_cosines, IntermediateLattice};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{closure, named_group, product_set, Caps, FiniteGroup, NamedGroup, Subgroup};
use crate::quadratic::QuadraticNumber;
use crate::quadruple::{
    check_mini, classify, commuting_by_groups, cos_alpha, cos_alpha_by_correlation, cos_alpha_by_vectors,
    cos_alpha_nested, cos_beta, cos_beta_by_dual_angle, cos_beta_nested, trace_data, Quadruple, TraceData,
};
use crate::rational::{self, ratio, Rational};
use crate::surd::Surd;
use crate::twobox::{
    biprojection_of, delta, dominated_by, fourier, is_biprojection, join_projection, landau_projection,
    meet_projection, trace_of_q_closed_form, CosetModel, Side, TwoBoxElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Angles,
    Landau,
    Sym,
    Po2,
    Bounds,
    Duality,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Angles, Suite::Landau, Suite::Sym, Suite::Po2, Suite::Bounds, Suite::Duality];

    /// `"all"` or a single suite name.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Angles => "angles",
            Suite::Landau => "landau",
            Suite::Sym => "sym",
            Suite::Po2 => "po2",
            Suite::Bounds => "bounds",
            Suite::Duality => "duality",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// A concrete model `R⋊H₀ ⊂ R⋊G`.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub base: Subgroup,
}

impl CorpusEntry {
    pub fn trivial_base(name: impl Into<String>, group: Arc<FiniteGroup>) -> Self {
        let base = Subgroup::trivial(&group);
        CorpusEntry { name: name.into(), group, base }
    }

    pub fn with_base(name: impl Into<String>, group: Arc<FiniteGroup>, base_gens: &[usize]) -> Self {
        let base = closure(&group, base_gens);
        CorpusEntry { name: name.into(), group, base }
    }
}

fn corpus_families() -> Vec<NamedGroup> {
    use NamedGroup::*;
    let c = |n| Box::new(Cyclic(n));
    let mut out: Vec<NamedGroup> = (2..=24).map(Cyclic).collect();
    out.extend((2..=12).map(Dihedral));
    out.extend([Symmetric(3), Symmetric(4)]);
    out.extend([(2, 2), (2, 3), (2, 4), (3, 2)].map(|(p, k)| ElementaryAbelian { p, k }));
    out.extend([8, 12, 16, 20, 24].map(Quaternion));
    out.extend([
        DirectProduct(c(2), Box::new(Symmetric(3))),
        DirectProduct(c(4), c(2)),
        DirectProduct(c(4), c(4)),
        DirectProduct(c(2), Box::new(Dihedral(4))),
        DirectProduct(c(2), Box::new(Quaternion(8))),
        DirectProduct(c(3), Box::new(Symmetric(3))),
        DirectProduct(c(2), c(10)),
        DirectProduct(c(2), Box::new(Dihedral(6))),
        DirectProduct(c(3), Box::new(Quaternion(8))),
    ]);
    out.extend([Dihedral(15), Cyclic(30)]);
    out
}

/// Named groups of order at most 24 plus `D₁₅` and `Z₃₀`, all over the
/// trivial base, followed by a few nontrivial bases.
pub fn standard_corpus(caps: Caps) -> Result<Vec<CorpusEntry>> {
    let mut out = vec![];
    for f in corpus_families() {
        let g = named_group(&f, caps)?.into_arc();
        out.push(CorpusEntry::trivial_base(f.to_string(), g));
    }
    out.extend(nontrivial_bases(caps)?);
    Ok(out)
}

fn find_label(g: &FiniteGroup, label: &str) -> usize {
    g.elements().find(|&x| g.label(x) == label).expect("corpus label exists")
}

fn nontrivial_bases(caps: Caps) -> Result<Vec<CorpusEntry>> {
    use NamedGroup::*;
    let build = |f: &NamedGroup| named_group(f, caps).map(FiniteGroup::into_arc);
    let s3 = build(&Symmetric(3))?;
    let s4 = build(&Symmetric(4))?;
    let t12 = find_label(&s4, "(1 2)");
    let t23 = find_label(&s4, "(2 3)");
    Ok(vec![
        CorpusEntry::with_base("symmetric(3) over <(1 2)>", s3.clone(), &[find_label(&s3, "(1 2)")]),
        CorpusEntry::with_base("symmetric(4) over <(1 2)>", s4.clone(), &[t12]),
        CorpusEntry::with_base("symmetric(4) over symmetric(3)", s4.clone(), &[t12, t23]),
        // reflection s is index n in dihedral(n)
        CorpusEntry::with_base("dihedral(6) over <s>", build(&Dihedral(6))?, &[6]),
        CorpusEntry::with_base("dihedral(15) over <s>", build(&Dihedral(15))?, &[15]),
        CorpusEntry::with_base("cyclic(30) over <a^15>", build(&Cyclic(30))?, &[15]),
        CorpusEntry::with_base("quaternion(8) over center", build(&Quaternion(8))?, &[2]),
        CorpusEntry::with_base("direct_product(cyclic(2),symmetric(3)) over cyclic(2)", build(&DirectProduct(Box::new(Cyclic(2)), Box::new(Symmetric(3))))?, &[1]),
    ])
}

/// Deliberate corruption of the closed-form trace data, used to exercise
/// the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Adds `1/|G|` to `tr(e_Pe_Q)` for proper, distinct pairs.
    InflatedMeet,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub exec: Execution,
    pub caps: Caps,
    pub seed: u64,
    /// Random representative choices per quadruple.
    pub rep_choices: usize,
    /// Random abstract parallelograms and minimal-pair instances.
    pub abstract_samples: usize,
    /// Random elements per group for the Fourier identities.
    pub fourier_samples: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exec: Execution::default(),
            caps: Caps::default(),
            seed: 0x5eed,
            rep_choices: 100,
            abstract_samples: 1000,
            fourier_samples: 20,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
    pub witness: Option<String>,
}

/// Named check counts; merging keeps the earliest witness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally(pub BTreeMap<String, CheckTally>);

impl Tally {
    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let t = self.0.entry(name.to_string()).or_default();
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if t.witness.is_none() {
                t.witness = Some(witness());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for (k, v) in other.0 {
            let t = self.0.entry(k).or_default();
            t.passed += v.passed;
            t.failed += v.failed;
            if t.witness.is_none() {
                t.witness = v.witness;
            }
        }
    }

    pub fn failures(&self) -> usize {
        self.0.values().map(|t| t.failed).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Tally,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.failures() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: Vec<String>,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("corpus: {} models\n", self.entries.len());
        for s in &self.suites {
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            out += &format!("[{verdict}] {}\n", s.suite);
            for (name, t) in &s.checks.0 {
                out += &format!("    {name}: {} passed, {} failed\n", t.passed, t.failed);
                if let Some(w) = &t.witness {
                    out += &format!("        witness: {w}\n");
                }
            }
            for n in &s.notes {
                out += &format!("    note: {n}\n");
            }
        }
        out += if self.passed() { "verdict: PASS\n" } else { "verdict: FAIL\n" };
        out
    }
}

struct Context<'a> {
    entry: &'a CorpusEntry,
    lat: IntermediateLattice,
    opts: &'a VerifyOptions,
}

impl Context<'_> {
    fn describe(&self, p: usize, q: usize) -> String {
        let nodes = &self.lat.lattice.nodes;
        format!("{}: P = {}, Q = {}", self.entry.name, nodes[p].describe(), nodes[q].describe())
    }

    fn trace(&self, p: usize, q: usize) -> TraceData {
        let mut td = self.lat.report(p, q).trace.clone();
        if self.opts.fault == Some(Fault::InflatedMeet) && p != q && !self.lat.lattice.is_endpoint(p) && !self.lat.lattice.is_endpoint(q) {
            td.tr_pq += ratio(1, self.entry.group.order() as i64);
        }
        td
    }

    fn unordered_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.lat.lattice.len();
        (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect()
    }

    fn ordered_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.lat.lattice.len();
        (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).collect()
    }

    fn over_pairs(&self, pairs: &[(usize, usize)], f: impl Fn(usize, usize, &mut Tally) + Sync + Send) -> Tally {
        let parts = self.opts.exec.map(pairs, |&(p, q)| {
            let mut t = Tally::default();
            f(p, q, &mut t);
            t
        });
        let mut out = Tally::default();
        for t in parts {
            out.merge(t);
        }
        out
    }
}

/// Agreement of two fallible cosine computations: equal values, or both
/// undefined.
fn agree(a: &Result<Surd>, b: &Result<Surd>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

fn show(r: &Result<Surd>) -> String {
    match r {
        Ok(s) => s.to_string(),
        Err(e) => format!("error({e})"),
    }
}

fn angle_pair(cx: &Context, p: usize, q: usize, t: &mut Tally) {
    let quad = cx.lat.quadruple(p, q);
    let td = cx.trace(p, q);
    let w = || cx.describe(p, q);
    let model_td = trace_data(&quad);
    t.check("trace_data.closed_form", model_td.tr_pq == td.tr_pq && model_td.tau_p == td.tau_p, w);
    let seed = cx.opts.seed ^ ((p as u64) << 20) ^ q as u64;
    t.check("trace_data.basis_expansion", tr_pq_by_expansion(&quad, Some(seed)).is_ok_and(|x| x == td.tr_pq), w);

    let a = cos_alpha(&td);
    let by_vec = cos_alpha_by_vectors(&quad);
    let by_exp = cos_alpha_by_expansion(&quad, Some(seed));
    let by_corr = cos_alpha_by_correlation(&quad);
    t.check("alpha.formula_eq_vectors", agree(&a, &by_vec), || format!("{}: formula {} vs vectors {}", w(), show(&a), show(&by_vec)));
    t.check("alpha.formula_eq_basis_expansion", agree(&a, &by_exp), || format!("{}: formula {} vs expansion {}", w(), show(&a), show(&by_exp)));
    t.check("alpha.formula_eq_dual_correlation", agree(&a, &by_corr), || format!("{}: formula {} vs correlation {}", w(), show(&a), show(&by_corr)));
    t.check("alpha.defined_iff_proper", a.is_ok() == (p != cx.lat.lattice.bottom() && q != cx.lat.lattice.bottom()), w);

    let commuting_groups = commuting_by_groups(&quad);
    let model = quad.model();
    let e_p = biprojection_of(model, quad.k1()).expect("node contains base");
    let e_q = biprojection_of(model, quad.k2()).expect("node contains base");
    let e_1 = crate::twobox::jones_projection(model);
    let product_is_e1 = e_p.mul(&e_q).is_ok_and(|x| x == e_1);
    if let Ok(c) = &a {
        t.check("alpha.in_unit_interval", *c >= Surd::zero() && *c <= Surd::one(), w);
        t.check("commuting.cos_zero_iff_meet_is_base", c.is_zero() == commuting_groups, || format!("{}: cos α = {c}", w()));
        t.check("commuting.cos_zero_iff_product_is_e1", c.is_zero() == product_is_e1, w);
        t.check("alpha.one_iff_equal", (*c == Surd::one()) == (p == q), w);
        let swapped = cos_alpha(&td.swapped());
        t.check("alpha.symmetric", agree(&a, &swapped), w);
        if let Some(true) = td.minimal_pair {
            t.check("rigidity.distinct_atoms_orthogonal", c.is_zero(), || format!("{}: cos α = {c}", w()));
            let mini = check_mini(&td);
            t.check("rigidity.minimal_pair_below_half", mini.is_ok_and(|m| m.below_half), w);
        }
    }
    t.check("commuting.meet_is_base_iff_product_is_e1", commuting_groups == product_is_e1, w);

    let prod = &td.tau_p * &td.tau_q;
    t.check("trace_bounds.tr_ge_tau", td.tr_pq >= td.tau, w);
    t.check("trace_bounds.tr_ge_product", td.tr_pq >= prod, w);
    if let Ok(b) = &cos_beta(&td) {
        t.check("trace_bounds.product_equality_iff_beta_zero", (td.tr_pq == prod) == b.is_zero(), w);
    }
    if commuting_groups {
        let idx = |k: &Subgroup| k.order() / quad.base().order();
        let co = |k: &Subgroup| quad.group().order() / k.order();
        t.check("commuting.index_inequalities", co(quad.k2()) >= idx(quad.k1()) && co(quad.k1()) >= idx(quad.k2()), w);
    }

    let report = classify(&td);
    t.check(
        "classify.flags_match_cosines",
        report.commuting == report.cos_alpha.as_ref().map(Surd::is_zero)
            && report.cocommuting == report.cos_beta.as_ref().map(Surd::is_zero),
        w,
    );
    if td.is_parallelogram() {
        if let (Some(x), Some(y)) = (&report.cos_alpha, &report.cos_beta) {
            t.check("parallelogram.alpha_eq_beta", x == y, || format!("{}: cos α = {x}, cos β = {y}", w()));
        }
    }
}

fn duality_pair(cx: &Context, p: usize, q: usize, t: &mut Tally) {
    let quad = cx.lat.quadruple(p, q);
    let td = cx.trace(p, q);
    let w = || cx.describe(p, q);
    let b = cos_beta(&td);
    let dual = cos_beta_by_dual_angle(&quad);
    t.check("beta.formula_eq_dual_alpha", agree(&b, &dual), || format!("{}: formula {} vs dual {}", w(), show(&b), show(&dual)));
    t.check("beta.symmetric", agree(&b, &cos_beta(&td.swapped())), w);
    if let Ok(c) = &b {
        t.check("beta.in_unit_interval", *c >= Surd::zero() && *c <= Surd::one(), w);
        t.check("cocommuting.cos_zero_iff_index_identity", c.is_zero() == crate::quadruple::cocommuting_by_groups(&quad), w);
    }
    let a = cos_alpha(&td);
    let corr = cos_alpha_by_correlation(&quad);
    t.check("alpha.formula_eq_dual_correlation", agree(&a, &corr), w);
    if cx.entry.base.is_trivial() {
        let k1 = quad.k1();
        let f = fourier(&TwoBoxElement::biprojection(k1)).expect("trivial base");
        let dual_bp = TwoBoxElement::dual_biprojection(k1, &cx.entry.base).expect("base is trivial");
        let c = delta(&cx.entry.group).recip().expect("δ ≠ 0").scale(&rational::int(k1.order() as i64));
        t.check("fourier.biprojection_to_dual", f == dual_bp.scale(&c), w);
        let x = TwoBoxElement::biprojection(k1);
        let y = TwoBoxElement::biprojection(quad.k2());
        let lhs = x.product(&y).and_then(|z| fourier(&z));
        let rhs = fourier(&x).and_then(|fx| fourier(&y).and_then(|fy| fx.coproduct(&fy)));
        t.check("fourier.product_to_coproduct", matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r), w);
    }
}

fn landau_pair(cx: &Context, p: usize, q: usize, t: &mut Tally) {
    let quad = cx.lat.quadruple(p, q);
    let w = || cx.describe(p, q);
    let (h, k) = (quad.k1(), quad.k2());
    let g = &cx.entry.group;
    let e_h = TwoBoxElement::biprojection(h);
    let e_k = TwoBoxElement::biprojection(k);
    t.check("biprojection.recognized", is_biprojection(&e_h), w);
    let hk = product_set(h, k).expect("same parent");
    let hk_ind = TwoBoxElement::indicator(g, Side::Pointwise, &hk.members);
    let meet = quad.meet();
    let d_inv = delta(g).recip().expect("δ ≠ 0");
    let Ok(co) = e_h.coproduct(&e_k) else {
        t.check("coproduct.defined", false, w);
        return;
    };
    t.check("coproduct.pair_counting", co == hk_ind.scale(&d_inv.scale(&rational::int(meet.order() as i64))), w);
    let n = g.order() as i64;
    let expected_tr = delta(g).scale(&ratio((h.order() * k.order()) as i64, n * n));
    t.check("coproduct.trace", co.trace() == expected_tr, w);
    t.check("product_set.multiplicity_constant", hk.multiplicity.iter().enumerate().all(|(x, &m)| m == if hk.members.binary_search(&x).is_ok() { meet.order() } else { 0 }), w);
    match landau_projection(&e_h, &e_k) {
        Ok(l) => {
            t.check("landau.is_projection", l.is_projection(), || format!("{}: normalized coproduct is not a projection", w()));
            t.check("landau.equals_product_set", l == hk_ind, w);
            let join = join_projection(&e_h, &e_k);
            t.check("landau.dominates_join", join.is_ok_and(|j| dominated_by(&j, &l).unwrap_or(false)), w);
        }
        Err(e) => t.check("landau.is_projection", false, || format!("{}: {e}", w())),
    }
    let meet_p = meet_projection(&e_h, &e_k);
    t.check("meet.is_intersection", meet_p.is_ok_and(|m| m == TwoBoxElement::biprojection(&meet)), w);
}

fn sym_pair(cx: &Context, p: usize, q: usize, t: &mut Tally) {
    let quad = cx.lat.quadruple(p, q);
    let w = || cx.describe(p, q);
    let model = quad.model();
    let opts = cx.opts;
    let (Ok(lambda), Ok(mu)) = (coset_basis(model, quad.k1(), None), coset_basis(model, quad.k2(), None)) else {
        t.check("basis.constructed", false, w);
        return;
    };
    let p_el = p_from_bases(&lambda, &mu);
    let q_el = q_from_bases(&lambda, &mu);
    let base_seed = opts.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((p as u64) << 32) ^ q as u64;
    let mut stable = true;
    let mut valid = true;
    // over the trivial base every coset is a single element
    let choices = if quad.base().is_trivial() { 1 } else { opts.rep_choices };
    for i in 0..choices as u64 {
        let s = base_seed.wrapping_add(2 * i);
        let (Ok(l2), Ok(m2)) = (coset_basis(model, quad.k1(), Some(s)), coset_basis(model, quad.k2(), Some(s + 1))) else {
            valid = false;
            break;
        };
        valid &= l2.is_valid() && m2.is_valid();
        stable &= p_from_bases(&l2, &m2) == p_el && q_from_bases(&l2, &m2) == q_el;
        if !stable {
            break;
        }
    }
    t.check("basis.random_choices_valid", valid, w);
    t.check("pq.basis_independent", stable, w);
    let expected = trace_of_q_closed_form(model, quad.k1(), quad.k2());
    t.check("pq.trace_formula", p_el.trace() == expected && q_el.trace() == expected, || format!("{}: tr p = {}, tr q = {}, expected {}", w(), rational::format(&p_el.trace()), rational::format(&q_el.trace()), rational::format(&expected)));
    t.check("pq.spectra_equal", spectra_match(&p_el, &q_el), w);
    let exact = is_exact_factorization(&quad);
    t.check("pq.one_iff_exact_factorization", p_is_one(&p_el) == exact && p_is_one(&q_el) == exact, w);
    match sym_battery(&quad, base_seed) {
        Ok(b) => t.check("sym.conditions_agree", b.verdict, || format!("{}: {:?}", w(), b)),
        Err(e) => t.check("sym.conditions_agree", false, || format!("{}: {e}", w())),
    }
    let commuting = commuting_by_groups(&quad);
    if let Ok(s) = conjugation_sweep(&quad) {
        t.check("central.p_eq_join_iff_commuting", (s.p == s.p_join) == commuting, w);
        t.check("central.q_eq_join_iff_commuting", (s.q == s.q_join) == commuting, w);
        if commuting {
            t.check("central.support_holds", s.holds(), w);
        }
        let upper = quad.k1().join(quad.k2()).expect("same parent");
        let e_join = biprojection_of(model, &upper).expect("contains base");
        t.check("pq.support_below_join_subgroup", s.p.support().le(&e_join).unwrap_or(false), w);
        if commuting {
            let e_p = biprojection_of(model, quad.k1()).expect("contains base");
            let e_q = biprojection_of(model, quad.k2()).expect("contains base");
            let lub = e_p.add(&e_q).map(|x| x.support());
            t.check("pq.join_below_support", lub.is_ok_and(|j| j.le(&s.p.support()).unwrap_or(false)), w);
        }
    }
    if let Ok((q_cond, p_cond)) = projection_conditions(&quad) {
        t.check("projection_conditions.iff_commuting", q_cond == commuting && p_cond == commuting, w);
    }
    let td = trace_data(&quad);
    match r_element(&quad) {
        Ok(r) => {
            t.check("r.trace_eq_tr_pq", r == td.tr_pq, w);
            if commuting {
                t.check("r.trace_eq_tau_when_commuting", r == td.tau, w);
            }
        }
        Err(e) => t.check("r.trace_eq_tr_pq", false, || format!("{}: {e}", w())),
    }
    if exact && is_normal(quad.base()) {
        let prod: Vec<usize> = crate::basis::product_list(&lambda, &mu);
        let inverses: Vec<usize> = prod.iter().map(|&x| quad.group().inverse(x)).collect();
        let whole = Subgroup::whole(quad.group());
        t.check("basis.product_two_sided", crate::basis::is_basis_for(model, &prod, &whole) && crate::basis::is_basis_for(model, &inverses, &whole), w);
    }
}

fn is_normal(h: &Subgroup) -> bool {
    let g = h.parent();
    g.elements().all(|x| h.members().iter().all(|&y| h.contains(g.compose(g.compose(x, y), g.inverse(x)))))
}

fn po2_pair(cx: &Context, p: usize, q: usize, t: &mut Tally) {
    let quad = cx.lat.quadruple(p, q);
    let w = || cx.describe(p, q);
    match po2_battery(&quad, cx.opts.seed ^ ((p * 131 + q) as u64)) {
        Ok(b) => t.check("po2.conditions_agree", b.verdict, || format!("{}: {:?}", w(), b)),
        Err(Error::NotCommutingSquare) => t.check("po2.gate_not_commuting", !commuting_by_groups(&quad), w),
        Err(Error::NotApplicable) => t.check("po2.gate_endpoint", quad.k1() == quad.base() || quad.k2() == quad.base(), w),
        Err(e) => t.check("po2.conditions_agree", false, || format!("{}: {e}", w())),
    }
}

/// `(1/|G|)·Σ_g |Fix(g on G/H₀)|²`.
pub fn double_cosets_by_characters(model: &CosetModel) -> Rational {
    let g = model.group();
    let base = model.base();
    let total: usize = g
        .elements()
        .map(|x| {
            let fix = model.representatives().iter().filter(|&&r| base.contains(g.compose(g.compose(g.inverse(r), x), r))).count();
            fix * fix
        })
        .sum();
    ratio(total as i64, g.order() as i64)
}

fn bounds_entry(cx: &Context, t: &mut Tally, notes: &mut Vec<String>) {
    let lat = &cx.lat;
    let name = &cx.entry.name;
    let w = || name.clone();
    let l = &lat.lattice;
    t.check("double_cosets.character_oracle", double_cosets_by_characters(&lat.model) == rational::int(lat.dim_commutant as i64), w);
    match lattice_bounds(lat) {
        Ok(r) => {
            for c in &r.checks {
                t.check(&format!("bounds.{}", c.name), c.holds, || format!("{name}: observed {} vs {}", c.observed, c.bound));
            }
            notes.extend(r.notes.iter().map(|n| format!("{name}: {n}")));
        }
        Err(e) => t.check("bounds.computed", false, || format!("{name}: {e}")),
    }
    let inter = l.intermediates();
    t.check("gram.psd", gram_is_psd(lat, &inter).unwrap_or(false), w);
    if let Ok(gm) = crate::census::gram_matrix(lat, &inter) {
        let zero_ok = inter.iter().enumerate().all(|(i, &a)| {
            inter.iter().enumerate().all(|(j, &b)| gm[i][j].is_zero() == (lat.report(a, b).report.commuting == Some(true)))
        });
        t.check("gram.zeros_at_commuting_pairs", zero_ok, w);
    }
    if l.atoms.len() >= 2 {
        match packing_certificate(lat) {
            Ok(c) => t.check("packing.atoms", c.holds, || format!("{name}: witness {:?}", c.witness)),
            Err(e) => t.check("packing.atoms", false, || format!("{name}: {e}")),
        }
    }
    let closed = (0..l.len()).all(|i| {
        (0..l.len()).all(|j| {
            let a = &l.nodes[i];
            let b = &l.nodes[j];
            l.index_of(&a.intersection(b).expect("same parent")).is_some() && l.index_of(&a.join(b).expect("same parent")).is_some()
        })
    });
    t.check("lattice.closed_under_meet_and_join", closed, w);
    let atoms_meet = l.atoms.iter().all(|&i| l.atoms.iter().all(|&j| i == j || l.nodes[i].intersection(&l.nodes[j]).is_ok_and(|m| m == l.base)));
    t.check("lattice.atoms_meet_in_base", atoms_meet, w);
    let hasse_ok = l.hasse_edges.iter().all(|&(a, b)| {
        l.nodes[a].is_subgroup_of(&l.nodes[b])
            && l.nodes[a] != l.nodes[b]
            && !(0..l.len()).any(|c| c != a && c != b && l.nodes[a].is_subgroup_of(&l.nodes[c]) && l.nodes[c].is_subgroup_of(&l.nodes[b]))
    });
    t.check("lattice.hasse_edges_are_covers", hasse_ok, w);
    let idx = cx.entry.group.order() / cx.entry.base.order();
    if is_prime(idx) {
        t.check("prime_index.two_node_lattice", l.len() == 2 && inter.is_empty(), w);
    }
    if cx.entry.base.is_trivial() && cx.entry.group.order() == 4 && is_elementary_abelian_2(&cx.entry.group) {
        notes.push(format!(
            "{name}: Z2 x Z2 has {} nontrivial proper subgroups (the recursion argument needs only two)",
            inter.len()
        ));
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn is_elementary_abelian_2(g: &FiniteGroup) -> bool {
    g.elements().all(|x| g.compose(x, x) == 0)
}

/// Parallelogram and minimal-pair checks on random abstract trace data.
pub fn abstract_checks(opts: &VerifyOptions, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let frac = |rng: &mut ChaCha8Rng| {
        let d: i64 = rng.gen_range(2..=60);
        ratio(rng.gen_range(1..d), d)
    };
    let mut produced = 0;
    while produced < opts.abstract_samples {
        let (tp, tq) = (frac(&mut rng), frac(&mut rng));
        let tau = &tp * &tq;
        let hi = (&tp).min(&tq).clone();
        let s = frac(&mut rng);
        let tr = &tau + &(&hi - &tau) * &s;
        let Ok(td) = TraceData::new(tau, tp, tq, tr) else { continue };
        produced += 1;
        let (a, b) = (cos_alpha(&td), cos_beta(&td));
        t.check("abstract.parallelogram_alpha_eq_beta", agree(&a, &b), || format!("{td:?}: {} vs {}", show(&a), show(&b)));
    }
    let mut produced = 0;
    let mut attempts = 0;
    while produced < opts.abstract_samples && attempts < 200 * opts.abstract_samples.max(1) {
        attempts += 1;
        let (tp, tq) = (frac(&mut rng), frac(&mut rng));
        let tau = &(&tp).min(&tq).clone() * &frac(&mut rng);
        let lo = (&tau).max(&(&tp * &tq)).clone();
        let denom = &tp + &tq - &tau;
        let key = &tp * &tq / &denom;
        let hi = (&tp).min(&tq).min(&key).clone();
        if hi < lo {
            continue;
        }
        let tr = &lo + &(&hi - &lo) * &frac(&mut rng);
        let Ok(td) = TraceData::new(tau.clone(), tp, tq, tr) else { continue };
        let td = td.with_meet(tau).with_minimal_pair(true);
        produced += 1;
        match check_mini(&td) {
            Ok(m) => {
                t.check("abstract.minimal_pair_below_half", m.below_half, || format!("{td:?}: cos α = {}", m.cos_alpha));
                let cert = packing_from_cosines(&[vec![Surd::one(), m.cos_alpha.clone()], vec![m.cos_alpha.clone(), Surd::one()]]);
                t.check("abstract.packing_certificate", cert.holds, || format!("{td:?}"));
            }
            Err(Error::AngleUndefined(_)) => {}
            Err(e) => t.check("abstract.minimal_pair_below_half", false, || format!("{td:?}: {e}")),
        }
    }
    for fx in minimal_pair_fixtures() {
        let m = check_mini(&fx);
        t.check("fixture.minimal_pair_below_half", m.as_ref().is_ok_and(|m| m.below_half), || format!("{fx:?}"));
        if let Ok(m) = m {
            let cert = packing_from_cosines(&[vec![Surd::one(), m.cos_alpha.clone()], vec![m.cos_alpha.clone(), Surd::one()]]);
            t.check("fixture.packing_certificate", cert.holds, || format!("{fx:?}"));
        }
    }
    let tight = &minimal_pair_fixtures()[0];
    let m = check_mini(tight);
    t.check("fixture.tight_cos_alpha_3_7", m.is_ok_and(|m| m.tight && m.cos_alpha == Surd::rational(ratio(3, 7))), || format!("{tight:?}"));
    let rejected = TraceData::new(ratio(1, 6), ratio(1, 3), ratio(1, 3), ratio(1, 12)).is_err()
        && check_mini(
            &TraceData::new(ratio(1, 16), ratio(1, 4), ratio(1, 4), ratio(1, 6)).expect("admissible").with_meet(ratio(1, 16)).with_minimal_pair(true),
        )
        .is_err();
    t.check("fixture.gates_reject", rejected, || "invalid data was admitted".into());
}

/// Minimal-pair trace data, the first saturating the key inequality.
pub fn minimal_pair_fixtures() -> Vec<TraceData> {
    let mk = |a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)| {
        TraceData::new(ratio(a.0, a.1), ratio(b.0, b.1), ratio(c.0, c.1), ratio(d.0, d.1))
            .expect("fixture is admissible")
            .with_meet(ratio(a.0, a.1))
            .with_minimal_pair(true)
    };
    vec![
        mk((1, 16), (1, 4), (1, 4), (1, 7)),
        mk((1, 16), (1, 4), (1, 4), (1, 16)),
        mk((1, 6), (1, 3), (1, 2), (1, 6)),
        mk((1, 12), (1, 4), (1, 3), (1, 10)),
        mk((1, 30), (1, 15), (1, 10), (1, 28)),
    ]
}

/// The inclusion `Z₃₀ ⊃ Z₁₀ ⊃ Z₂ ⊃ 1` in all three forms.
pub fn fact_checks(caps: Caps, t: &mut Tally) -> Result<()> {
    let g = named_group(&NamedGroup::Cyclic(30), caps)?.into_arc();
    let model = CosetModel::new(&g, &Subgroup::trivial(&g))?;
    let quad = Quadruple::new(&model, closure(&g, &[15]), closure(&g, &[3]))?;
    let third = Surd::rational(ratio(1, 3));
    let seventh = Surd::new(ratio(1, 7), 7);
    let td = trace_data(&quad);
    t.check("fact.z30_cos_alpha_one_third", cos_alpha(&td).is_ok_and(|c| c == third), || format!("{:?}", cos_alpha(&td)));
    t.check("fact.z30_cos_beta_one_over_sqrt7", cos_beta(&td).is_ok_and(|c| c == seventh), || format!("{:?}", cos_beta(&td)));
    let nested_a = cos_alpha_nested(&rational::int(2), &rational::int(10));
    let nested_b = cos_beta_nested(&rational::int(3), &rational::int(15));
    t.check("fact.nested_closed_forms", nested_a.is_ok_and(|c| c == third) && nested_b.is_ok_and(|c| c == seventh), || "closed forms disagree".into());
    let chain = TraceData::chain(rational::int(2), rational::int(5), rational::int(3))?;
    t.check("fact.chain_trace_data", chain.tr_pq == td.tr_pq && chain.tau == td.tau, || format!("{chain:?}"));
    Ok(())
}

fn fourier_checks(entry: &CorpusEntry, opts: &VerifyOptions, t: &mut Tally) {
    let g = &entry.group;
    let n = g.order() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ n.wrapping_mul(0x2545_f491));
    let random = |rng: &mut ChaCha8Rng| {
        let vals = g
            .elements()
            .map(|_| {
                let a = ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                let b = if rng.gen_bool(0.3) { ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)) } else { Rational::zero() };
                QuadraticNumber::new(a, b, n)
            })
            .collect();
        TwoBoxElement::from_values(g, Side::Pointwise, vals)
    };
    let w = || entry.name.clone();
    for _ in 0..opts.fourier_samples {
        let (x, y) = (random(&mut rng), random(&mut rng));
        let (Ok(fx), Ok(fy)) = (fourier(&x), fourier(&y)) else {
            t.check("fourier.defined", false, w);
            continue;
        };
        let iso = match (x.inner(&y), fx.inner(&fy)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        t.check("fourier.isometry", iso, w);
        let exch = match (x.product(&y).and_then(|z| fourier(&z)), fx.coproduct(&fy)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        t.check("fourier.product_to_coproduct", exch, w);
        let exch2 = match (x.coproduct(&y).and_then(|z| fourier(&z)), fx.product(&fy)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        t.check("fourier.coproduct_to_product", exch2, w);
        t.check("fourier.round_trip", fourier(&fx).is_ok_and(|z| z == x), w);
    }
    let id = TwoBoxElement::identity(g, Side::Pointwise);
    let all: Vec<usize> = g.elements().collect();
    let expected = TwoBoxElement::indicator(g, Side::Convolution, &all).scale(&delta(g).recip().expect("δ ≠ 0"));
    t.check("fourier.identity", fourier(&id).is_ok_and(|f| f == expected), w);
}

/// Runs the selected suites over `corpus`. Abstract data and the `Z₃₀`
/// inclusion run once, inside the angles suite.
pub fn run_suites(corpus: &[CorpusEntry], suites: &[Suite], opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut reports: Vec<SuiteReport> =
        suites.iter().map(|&s| SuiteReport { suite: s, checks: Tally::default(), notes: vec![] }).collect();
    for entry in corpus {
        let lat = census(&entry.group, &entry.base, opts.caps, opts.exec)?;
        let cx = Context { entry, lat, opts };
        for r in &mut reports {
            match r.suite {
                Suite::Angles => r.checks.merge(cx.over_pairs(&cx.unordered_pairs(), |p, q, t| angle_pair(&cx, p, q, t))),
                Suite::Duality => {
                    r.checks.merge(cx.over_pairs(&cx.unordered_pairs(), |p, q, t| duality_pair(&cx, p, q, t)));
                    if entry.base.is_trivial() {
                        fourier_checks(entry, opts, &mut r.checks);
                    }
                }
                Suite::Landau => {
                    if entry.base.is_trivial() {
                        r.checks.merge(cx.over_pairs(&cx.ordered_pairs(), |p, q, t| landau_pair(&cx, p, q, t)));
                    }
                }
                Suite::Sym => r.checks.merge(cx.over_pairs(&cx.unordered_pairs(), |p, q, t| sym_pair(&cx, p, q, t))),
                Suite::Po2 => r.checks.merge(cx.over_pairs(&cx.unordered_pairs(), |p, q, t| po2_pair(&cx, p, q, t))),
                Suite::Bounds => bounds_entry(&cx, &mut r.checks, &mut r.notes),
            }
        }
    }
    for r in &mut reports {
        if r.suite == Suite::Angles {
            fact_checks(opts.caps, &mut r.checks)?;
            abstract_checks(opts, &mut r.checks);
        }
    }
    Ok(VerifyReport { entries: corpus.iter().map(|e| e.name.clone()).collect(), suites: reports })
}
