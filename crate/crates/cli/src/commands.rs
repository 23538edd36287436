use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use subfactor_angles::census::{lattice_bounds, IntermediateLattice};
use subfactor_angles::group::{closure, group_from_permutations, named_group, FiniteGroup, Subgroup};
use subfactor_angles::io::{
    self, angle_csv, angle_rows, cached_census, census_doc, classification, format_f64, format_significant, hasse_dot,
    to_json, Angle, CacheOutcome, LatticeCache,
};
use subfactor_angles::quadruple::{check_mini, classify, MiniCheck, QuadrupleReport, TraceData};
use subfactor_angles::verify::{run_suites, standard_corpus, CorpusEntry, VerifyOptions};
use subfactor_angles::{rational, Error, Result, Surd};

use crate::config::{resolve_element, resolve_pairs, Format, GroupSource, RunConfig};

/// `println!`/`print!` that stop quietly when stdout is closed early.
macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}
macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

fn emit(args: std::fmt::Arguments) {
    use std::io::Write as _;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            std::process::exit(2);
        }
        std::process::exit(0);
    }
}

/// Process exit status: 0 pass, 1 theorem failure, 2 bad input, 3 cap exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    TheoremFailure,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::DegreeExceeded { .. } => 3,
        _ => 2,
    }
}

fn build_group(cfg: &RunConfig) -> Result<(String, Arc<FiniteGroup>)> {
    let Some(source) = &cfg.source else {
        return Err(Error::UnsupportedParams("no group given (use --family, --table or --perms)".into()));
    };
    let (name, g) = match source {
        GroupSource::Family(f) => (f.to_string(), named_group(f, cfg.caps)?),
        GroupSource::Table(path) => {
            let g = io::read_group_table(path)?;
            if g.order() > cfg.caps.max_order {
                return Err(Error::DegreeExceeded { cap: cfg.caps.max_order });
            }
            (path.display().to_string(), g)
        }
        GroupSource::Perms { generators, degree } => {
            (format!("⟨{}⟩", generators.join(", ")), group_from_permutations(generators, *degree, cfg.caps)?)
        }
    };
    Ok((name, g.into_arc()))
}

fn build_base(cfg: &RunConfig, g: &Arc<FiniteGroup>) -> Result<Subgroup> {
    let gens = cfg.base.iter().map(|t| resolve_element(g, t)).collect::<Result<Vec<_>>>()?;
    Ok(closure(g, &gens))
}

fn cache(cfg: &RunConfig) -> Option<LatticeCache> {
    LatticeCache::from_env().or_else(|| cfg.cache_dir.clone().map(LatticeCache::new))
}

fn load_census(cfg: &RunConfig) -> Result<(String, IntermediateLattice, CacheOutcome)> {
    let (name, g) = build_group(cfg)?;
    let base = build_base(cfg, &g)?;
    let (lat, outcome) = cached_census(&g, &base, cfg.caps, cfg.exec, cache(cfg).as_ref())?;
    Ok((name, lat, outcome))
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn float(s: &Surd, digits: usize) -> String {
    format_significant(s, digits)
}

pub fn lattice(cfg: &RunConfig) -> Result<Outcome> {
    let (name, lat, outcome) = load_census(cfg)?;
    let doc = census_doc(&lat);
    let json = to_json(&doc)?;
    let dot = hasse_dot(&lat.lattice);
    if let Some(dir) = &cfg.out {
        io::write_file(&dir.join("census.json"), &json)?;
        io::write_file(&dir.join("lattice.dot"), &dot)?;
    }
    match cfg.format {
        Format::Json => out!("{json}"),
        Format::Dot => out!("{dot}"),
        Format::Text | Format::Csv => {
            let s = lat.stats();
            outln!("group: {name} (order {})", lat.lattice.parent.order());
            outln!("base order: {}, index: {}", lat.lattice.base.order(), rational::format(&lat.index));
            outln!("nodes: {}, atoms: {}, coatoms: {}, double cosets: {}", s.nodes, s.atoms, s.coatoms, lat.dim_commutant);
            if outcome == CacheOutcome::Hit {
                outln!("lattice loaded from cache");
            }
            for n in &doc.nodes {
                outln!("  [{}] order {:>3}  ⟨{}⟩", n.id, n.order, n.generators.join(", "));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn angles(cfg: &RunConfig) -> Result<Outcome> {
    let (_, lat, _) = load_census(cfg)?;
    let orders: Vec<usize> = lat.lattice.nodes.iter().map(Subgroup::order).collect();
    let sel = resolve_pairs(&cfg.pairs, &orders)?;
    let dir = out_dir(cfg);
    for (angle, file) in [(Angle::Alpha, "alpha.csv"), (Angle::Beta, "beta.csv")] {
        let rows = angle_rows(&lat, &sel, angle)?;
        let text = angle_csv(&rows, angle, cfg.digits)?;
        io::write_file(&dir.join(file), &text)?;
        if cfg.format == Format::Csv {
            out!("{text}");
        } else {
            outln!("{}: {} rows", dir.join(file).display(), rows.len());
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct Classified<'a> {
    p: usize,
    q: usize,
    p_subgroup: String,
    q_subgroup: String,
    trace: &'a TraceData,
    report: &'a QuadrupleReport,
    classification: String,
}

fn describe_cos(c: &Option<Surd>, digits: usize) -> String {
    match c {
        Some(c) => format!("{c} ({})", float(c, digits)),
        None => io::NA_UNDEFINED.into(),
    }
}

pub fn classify_pairs(cfg: &RunConfig) -> Result<Outcome> {
    let (_, lat, _) = load_census(cfg)?;
    let nodes = &lat.lattice.nodes;
    let orders: Vec<usize> = nodes.iter().map(Subgroup::order).collect();
    let pairs = io::selected_pairs(&lat, &resolve_pairs(&cfg.pairs, &orders)?)?;
    let items: Vec<Classified> = pairs
        .iter()
        .map(|&(p, q)| {
            let r = lat.report(p, q);
            Classified {
                p,
                q,
                p_subgroup: nodes[p].describe(),
                q_subgroup: nodes[q].describe(),
                trace: &r.trace,
                report: &r.report,
                classification: classification(r),
            }
        })
        .collect();
    if cfg.format == Format::Json {
        out!("{}", to_json(&items)?);
        return Ok(Outcome::Pass);
    }
    for c in &items {
        outln!(
            "{} {} | cos α = {} | cos β = {} | {}",
            c.p_subgroup,
            c.q_subgroup,
            describe_cos(&c.report.cos_alpha, cfg.digits),
            describe_cos(&c.report.cos_beta, cfg.digits),
            c.classification
        );
    }
    Ok(Outcome::Pass)
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let corpus = match &cfg.source {
        Some(_) => {
            let (name, g) = build_group(cfg)?;
            let base = build_base(cfg, &g)?;
            vec![CorpusEntry { name, group: g, base }]
        }
        None => standard_corpus(cfg.caps)?,
    };
    let mut opts = VerifyOptions { exec: cfg.exec, caps: cfg.caps, fault: cfg.fault, ..Default::default() };
    if let Some(seed) = cfg.seed {
        opts.seed = seed;
    }
    let report = run_suites(&corpus, &cfg.suites, &opts)?;
    let json = to_json(&report)?;
    if let Some(dir) = &cfg.out {
        io::write_file(&dir.join("verify.json"), &json)?;
    }
    match cfg.format {
        Format::Json => out!("{json}"),
        _ => out!("{}", report.render_text()),
    }
    Ok(if report.passed() { Outcome::Pass } else { Outcome::TheoremFailure })
}

pub fn bounds(cfg: &RunConfig) -> Result<Outcome> {
    let (_, lat, _) = load_census(cfg)?;
    let report = lattice_bounds(&lat)?;
    if cfg.format == Format::Json {
        out!("{}", to_json(&report)?);
    } else {
        let mut s = format!("index {}, double cosets {}\n", rational::format(&report.index), report.n);
        for c in &report.checks {
            let v = if c.holds { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "[{v}] {}: {} <= {}", c.name, c.observed, c.bound);
        }
        for n in &report.notes {
            let _ = writeln!(s, "note: {n}");
        }
        out!("{s}");
    }
    Ok(if report.all_hold() { Outcome::Pass } else { Outcome::TheoremFailure })
}

#[derive(Serialize)]
struct AbstractReport<'a> {
    trace: &'a TraceData,
    report: QuadrupleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal_pair: Option<MiniCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal_pair_error: Option<String>,
}

/// Reads trace data as JSON, or as TOML when the file ends in `.toml`.
pub fn read_trace(path: &Path) -> Result<TraceData> {
    if path.extension().is_some_and(|e| e == "toml") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let td: TraceData = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
        td.validate()?;
        return Ok(td);
    }
    io::read_trace_data(path)
}

pub fn abstract_mode(cfg: &RunConfig, path: &Path) -> Result<Outcome> {
    let mut td = read_trace(path)?;
    // distinct atoms meet in N, so a flagged pair without tau_meet gets tau
    if td.minimal_pair == Some(true) && td.tau_meet.is_none() {
        td.tau_meet = Some(td.tau.clone());
    }
    let report = classify(&td);
    let (mini, mini_err) = match td.minimal_pair {
        Some(true) => match check_mini(&td) {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, None),
    };
    let failed = mini_err.is_some() || mini.as_ref().is_some_and(|m| !m.below_half);
    let out = AbstractReport { trace: &td, report, minimal_pair: mini, minimal_pair_error: mini_err };
    if cfg.format == Format::Json {
        out!("{}", to_json(&out)?);
    } else {
        let d = cfg.digits;
        let r = &out.report;
        outln!("cos_alpha: {}", describe_cos(&r.cos_alpha, d));
        outln!("cos_beta: {}", describe_cos(&r.cos_beta, d));
        let flag = |v: Option<bool>| v.map_or("undefined".to_string(), |b| b.to_string());
        outln!("commuting: {}", flag(r.commuting));
        outln!("cocommuting: {}", flag(r.cocommuting));
        outln!("parallelogram: {}", r.parallelogram);
        if let Some(rad) = r.alpha_radians {
            outln!("alpha_radians: {}", format_f64(rad, d));
        }
        if let Some(m) = &out.minimal_pair {
            outln!(
                "minimal pair: tau_p*tau_q/tr_pq = {} >= tau_p + tau_q - tau = {}; cos_alpha < 1/2: {}{}",
                rational::format(&m.ratio),
                rational::format(&m.lower_bound),
                m.below_half,
                if m.tight { " (tight)" } else { "" }
            );
        }
        if let Some(e) = &out.minimal_pair_error {
            outln!("minimal pair check failed: {e}");
        }
    }
    Ok(if failed { Outcome::TheoremFailure } else { Outcome::Pass })
}
