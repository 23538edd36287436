//! Acceptance suite. Runs the ten criteria in order and prints one
//! `[PASS]`/`[FAIL]` line per criterion; exits nonzero if any failed.
//!
//! Built without the libtest harness so the lines always reach stdout:
//! `cargo test -p subfactor-angles --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use subfactor_angles::census::{census, intermediate_gram, packing_from_cosines};
use subfactor_angles::group::{named_group, Caps, NamedGroup, Subgroup};
use subfactor_angles::io::{angle_matrix, Angle};
use subfactor_angles::quadruple::{check_mini, cos_alpha, cos_beta, TraceData};
use subfactor_angles::rational::ratio;
use subfactor_angles::verify::{run_suites, standard_corpus, Suite, VerifyOptions, VerifyReport};
use subfactor_angles::{Execution, Surd};

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Named checks must all have run at least once without a failure.
fn clean(report: &VerifyReport, suite: Suite, names: &[&str]) -> (bool, String) {
    let Some(s) = report.suite(suite) else {
        return (false, format!("suite {suite} missing"));
    };
    let mut total = 0;
    for n in names {
        match s.checks.0.get(*n) {
            Some(t) if t.failed == 0 && t.passed > 0 => total += t.passed,
            Some(t) => {
                return (false, format!("{n}: {} failed, witness {}", t.failed, t.witness.clone().unwrap_or_default()))
            }
            None => return (false, format!("{n}: never ran")),
        }
    }
    (true, format!("{total} checks"))
}

fn count(report: &VerifyReport, suite: Suite, name: &str) -> usize {
    report.suite(suite).and_then(|s| s.checks.0.get(name)).map_or(0, |t| t.passed)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn z30_values() -> (bool, String) {
    let caps = Caps::default();
    let g = named_group(&NamedGroup::Cyclic(30), caps).unwrap().into_arc();
    let lat = census(&g, &Subgroup::trivial(&g), caps, Execution::Sequential).unwrap();
    let node = |o: usize| lat.lattice.nodes.iter().position(|k| k.order() == o).unwrap();
    let r = &lat.report(node(2), node(10)).report;
    let third = Surd::rational(ratio(1, 3));
    let inv_sqrt7 = Surd::sqrt(&ratio(1, 7)).unwrap();
    let chain = TraceData::chain(ratio(2, 1), ratio(5, 1), ratio(3, 1)).unwrap();
    let ok = r.cos_alpha.as_ref() == Some(&third)
        && r.cos_beta.as_ref() == Some(&inv_sqrt7)
        && cos_alpha(&chain).unwrap() == third
        && cos_beta(&chain).unwrap() == inv_sqrt7;
    let show = |s: &Option<Surd>| s.as_ref().map_or("undefined".into(), Surd::to_string);
    (ok, format!("cos α = {}, cos β = {}", show(&r.cos_alpha), show(&r.cos_beta)))
}

fn tight_fixture() -> (bool, String) {
    let td = TraceData::new(ratio(1, 16), ratio(1, 4), ratio(1, 4), ratio(1, 7))
        .unwrap()
        .with_meet(ratio(1, 16))
        .with_minimal_pair(true);
    // (tr − τ)/(τ_P − τ) = (1/7 − 1/16)/(3/16)
    let expected = Surd::rational(ratio(3, 7));
    let m = check_mini(&td).unwrap();
    let ok = m.cos_alpha == expected && m.below_half && m.tight;
    (ok, format!("tight fixture cos α = {}", m.cos_alpha))
}

fn z2_cubed_witness() -> (bool, String) {
    let caps = Caps::default();
    let g = named_group(&NamedGroup::ElementaryAbelian { p: 2, k: 3 }, caps).unwrap().into_arc();
    let lat = census(&g, &Subgroup::trivial(&g), caps, Execution::Sequential).unwrap();
    let atoms = lat.lattice.atoms.len();
    // seven lines in F_2^3 against eight double cosets
    (atoms == 7 && lat.dim_commutant == 8, format!("Z2^3: {atoms} atoms, n = {}", lat.dim_commutant))
}

fn prime_order_base_case() -> (bool, String) {
    let caps = Caps::default();
    let primes = [2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for p in primes {
        let g = named_group(&NamedGroup::Cyclic(p), caps).unwrap().into_arc();
        let lat = census(&g, &Subgroup::trivial(&g), caps, Execution::Sequential).unwrap();
        let inter = lat.lattice.intermediates();
        let matrix = angle_matrix(&lat, &inter, Angle::Alpha);
        let gram = intermediate_gram(&lat).unwrap();
        if lat.lattice.len() != 2 || !matrix.is_empty() || !gram.is_empty() {
            return (false, format!("Z{p}: {} nodes", lat.lattice.len()));
        }
    }
    (true, format!("{} prime orders", primes.len()))
}

fn fixture_packing() -> (bool, String) {
    // three pairwise minimal-pair directions at the tight fixture angle
    let c = Surd::rational(ratio(3, 7));
    let cos = vec![vec![Surd::one(), c.clone(), c.clone()], vec![c.clone(), Surd::one(), c.clone()], vec![c.clone(), c, Surd::one()]];
    let cert = packing_from_cosines(&cos);
    (cert.holds, format!("{} fixture pairs", cert.pairs_checked))
}

fn run() -> Vec<Line> {
    let caps = Caps::default();
    let corpus = standard_corpus(caps).unwrap();
    let opts = VerifyOptions { caps, ..VerifyOptions::default() };
    let suite = |s: Suite| timed(|| run_suites(&corpus, &[s], &opts).unwrap());
    let mut lines = vec![];
    let mut push = |id, title, (pass, detail): (bool, String), elapsed| lines.push(Line { id, title, pass, detail, elapsed });

    let (c1, t1) = timed(z30_values);
    push(1, "Z30 chain: cos α = 1/3, cos β = 1/√7", (c1.0 && t1 < Duration::from_secs(1), c1.1), t1);

    let (angles, t_angles) = suite(Suite::Angles);
    let (duality, t_duality) = suite(Suite::Duality);
    let t2 = t_angles + t_duality;
    let (a_ok, a_detail) = clean(
        &angles,
        Suite::Angles,
        &["alpha.formula_eq_basis_expansion", "alpha.formula_eq_dual_correlation", "alpha.formula_eq_vectors"],
    );
    let (b_ok, b_detail) = clean(&duality, Suite::Duality, &["beta.formula_eq_dual_alpha", "alpha.formula_eq_dual_correlation"]);
    push(2, "angle formula triple agreement", (a_ok && b_ok && t2 < Duration::from_secs(120), format!("{a_detail}; {b_detail}")), t2);

    let c3 = clean(
        &angles,
        Suite::Angles,
        &[
            "commuting.cos_zero_iff_meet_is_base",
            "commuting.cos_zero_iff_product_is_e1",
            "commuting.meet_is_base_iff_product_is_e1",
        ],
    );
    push(3, "commuting square characterization", c3, t_angles);

    let (landau, t4) = suite(Suite::Landau);
    let c4 = clean(&landau, Suite::Landau, &["landau.is_projection", "landau.dominates_join", "biprojection.recognized"]);
    push(4, "Landau projection dominates e_P ∨ e_Q", c4, t4);

    let (c5_ok, c5_detail) = clean(&angles, Suite::Angles, &["parallelogram.alpha_eq_beta", "abstract.parallelogram_alpha_eq_beta"]);
    let abstract_n = count(&angles, Suite::Angles, "abstract.parallelogram_alpha_eq_beta");
    push(5, "parallelograms have α = β", (c5_ok && abstract_n >= 1000, format!("{c5_detail}, {abstract_n} abstract")), t_angles);

    let (sym, t6) = suite(Suite::Sym);
    let c6 = clean(
        &sym,
        Suite::Sym,
        &[
            "pq.basis_independent",
            "pq.trace_formula",
            "pq.spectra_equal",
            "pq.one_iff_exact_factorization",
            "sym.conditions_agree",
        ],
    );
    push(6, "p/q battery and basis characterization", c6, t6);

    let (c7_ok, c7_detail) = clean(
        &angles,
        Suite::Angles,
        &[
            "rigidity.distinct_atoms_orthogonal",
            "fixture.minimal_pair_below_half",
            "fixture.tight_cos_alpha_3_7",
            "rigidity.minimal_pair_below_half",
            "abstract.minimal_pair_below_half",
        ],
    );
    let (tight_ok, tight_detail) = tight_fixture();
    push(7, "rigidity of minimal pairs", (c7_ok && tight_ok, format!("{c7_detail}; {tight_detail}")), t_angles);

    let (bounds, t8) = suite(Suite::Bounds);
    let (b8_ok, b8_detail) = clean(
        &bounds,
        Suite::Bounds,
        &[
            "bounds.atoms_le_packing",
            "bounds.atoms_le_dim",
            "bounds.lat_le_recursion",
            "bounds.recursion_le_whole",
            "bounds.lat_le_whole",
        ],
    );
    let (w_ok, w_detail) = z2_cubed_witness();
    push(8, "counting bounds", (b8_ok && w_ok && t8 < Duration::from_secs(60), format!("{b8_detail}; {w_detail}")), t8);

    let (p_ok, p_detail) = clean(&bounds, Suite::Bounds, &["packing.atoms"]);
    let (f_ok, f_detail) = clean(&angles, Suite::Angles, &["fixture.packing_certificate", "abstract.packing_certificate"]);
    let (x_ok, x_detail) = fixture_packing();
    push(9, "packing certificates", (p_ok && f_ok && x_ok, format!("{p_detail}; {f_detail}; {x_detail}")), t8);

    let ((c10_ok, c10_detail), t10) = timed(prime_order_base_case);
    let (pi_ok, _) = clean(&bounds, Suite::Bounds, &["prime_index.two_node_lattice"]);
    push(10, "prime index: two-node lattice, empty angle matrix", (c10_ok && pi_ok, c10_detail), t10);

    lines
}

fn main() -> ExitCode {
    let lines = run();
    for l in &lines {
        let verdict = if l.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {:>2}. {} ({}; {:.2?})", l.id, l.title, l.detail, l.elapsed);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!("acceptance: {}/{} criteria passed", lines.len() - failed.len(), lines.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
