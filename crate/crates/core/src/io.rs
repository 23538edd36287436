//! File formats: census JSON, Hasse DOT, angle CSVs, group tables, trace
//! tables, and the on-disk lattice cache.
//!
//! Data files carry exact strings only; the float columns in the CSVs are
//! rendered from the exact values with round-half-even.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::census::{census_of, IntermediateLattice, LatticeStats, PairReport};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{enumerate_subgroups_with, Caps, FiniteGroup, GroupTable, Subgroup, SubgroupLattice};
use crate::quadruple::TraceData;
use crate::rational::{self, Rational};
use crate::surd::Surd;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "SUBANGLES_CACHE_DIR";
pub const NA_UNDEFINED: &str = "NA:angle-undefined";
pub const DEFAULT_DIGITS: usize = 12;

// ---------------------------------------------------------------------------
// JSON helpers

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses JSON, reporting syntax and shape errors with line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        Error::Syntax { line: e.line(), column: e.column(), message }
    })
}

pub fn parse_group_table(text: &str) -> Result<FiniteGroup> {
    FiniteGroup::from_group_table(&from_json::<GroupTable>(text)?)
}

/// Parses and validates abstract trace data.
pub fn parse_trace_data(text: &str) -> Result<TraceData> {
    let td: TraceData = from_json(text)?;
    td.validate()?;
    Ok(td)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_group_table(path: &Path) -> Result<FiniteGroup> {
    parse_group_table(&read(path)?)
}

pub fn read_trace_data(path: &Path) -> Result<TraceData> {
    parse_trace_data(&read(path)?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Census document

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub order: usize,
    pub generators: Vec<String>,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusDoc {
    pub format_version: u32,
    pub table_hash: String,
    pub group_order: usize,
    pub base_order: usize,
    #[serde(with = "rational::serde_str")]
    pub index: Rational,
    pub dim_commutant: usize,
    pub stats: LatticeStats,
    pub nodes: Vec<NodeDoc>,
    pub hasse_edges: Vec<(usize, usize)>,
    pub atoms: Vec<usize>,
    pub coatoms: Vec<usize>,
    pub pairs: Vec<PairReport>,
}

fn node_doc(id: usize, k: &Subgroup) -> NodeDoc {
    let g = k.parent();
    NodeDoc {
        id,
        order: k.order(),
        generators: k.generators().iter().map(|&x| g.label(x)).collect(),
        members: k.members().to_vec(),
    }
}

pub fn census_doc(lat: &IntermediateLattice) -> CensusDoc {
    let l = &lat.lattice;
    CensusDoc {
        format_version: FORMAT_VERSION,
        table_hash: l.parent.table_hash(),
        group_order: l.parent.order(),
        base_order: l.base.order(),
        index: lat.index.clone(),
        dim_commutant: lat.dim_commutant,
        stats: lat.stats(),
        nodes: l.nodes.iter().enumerate().map(|(i, k)| node_doc(i, k)).collect(),
        hasse_edges: l.hasse_edges.clone(),
        atoms: l.atoms.clone(),
        coatoms: l.coatoms.clone(),
        pairs: lat.reports.clone(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram, bottom to top; nodes show generators and order.
pub fn hasse_dot(lat: &SubgroupLattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, k) in lat.nodes.iter().enumerate() {
        let extra = if lat.is_endpoint(i) { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{i} [label=\"{}\\n|K| = {}\"{extra}];", dot_escape(&k.describe()), k.order());
    }
    for (a, b) in &lat.hasse_edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Decimal rendering

/// `x` to `digits` significant digits, round-half-even on the exact value.
pub fn format_significant(x: &Surd, digits: usize) -> String {
    assert!(digits > 0, "at least one significant digit");
    if x.is_zero() {
        return "0".into();
    }
    // q = x² = c²·r, so x·10^k = sqrt(q·10^{2k})
    let q = x.square();
    let ten = Rational::from_integer(BigInt::from(10));
    let lo = ten.pow(2 * (digits as i32 - 1));
    let hi = ten.pow(2 * digits as i32);
    let mut k = (digits as i32 - 1) - rational::to_f64(&q).sqrt().log10().floor() as i32;
    let scaled = |k: i32| &q * ten.pow(2 * k);
    while scaled(k) < lo {
        k += 1;
    }
    while scaled(k) >= hi {
        k -= 1;
    }
    let qk = scaled(k);
    let n = qk.numer().abs().to_biguint().expect("nonnegative") / qk.denom().to_biguint().expect("positive");
    let mut n = n.sqrt();
    // compare 4·qk with (2n+1)² to round the dropped tail
    let twice = BigInt::from(2u32 * &n + 1u32);
    let mid = Rational::from_integer(&twice * &twice);
    let four_q = &qk * Rational::from_integer(BigInt::from(4));
    if four_q > mid || (four_q == mid && n.is_odd()) {
        n += 1u32;
    }
    if n == BigUint::from(10u32).pow(digits as u32) {
        n /= 10u32;
        k -= 1;
    }
    let sign = if x.signum() < 0 { "-" } else { "" };
    format!("{sign}{}", place_point(&n.to_string(), k))
}

/// `digits · 10^{-k}` as a plain decimal without trailing zeros.
fn place_point(digits: &str, k: i32) -> String {
    if k <= 0 {
        return format!("{digits}{}", "0".repeat((-k) as usize));
    }
    let k = k as usize;
    let (int, frac) = if digits.len() > k {
        (digits[..digits.len() - k].to_string(), digits[digits.len() - k..].to_string())
    } else {
        ("0".to_string(), format!("{}{digits}", "0".repeat(k - digits.len())))
    };
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int
    } else {
        format!("{int}.{frac}")
    }
}

/// Renders an `f64` exactly (via its binary value) to `digits` significant digits.
pub fn format_f64(x: f64, digits: usize) -> String {
    match Rational::from_float(x) {
        Some(q) => format_significant(&Surd::rational(q), digits),
        None => format!("{x}"),
    }
}

// ---------------------------------------------------------------------------
// Angle tables

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Angle {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSelection {
    /// Every ordered pair of lattice nodes, endpoints included.
    All,
    /// Ordered pairs of atoms.
    Minimal,
    /// Explicit node-index pairs.
    Explicit(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleRow {
    pub p: usize,
    pub q: usize,
    pub p_subgroup: String,
    pub q_subgroup: String,
    pub cos: Option<Surd>,
    pub radians: Option<f64>,
    pub classification: String,
}

pub fn selected_pairs(lat: &IntermediateLattice, sel: &PairSelection) -> Result<Vec<(usize, usize)>> {
    let n = lat.lattice.len();
    let square = |ids: &[usize]| ids.iter().flat_map(|&p| ids.iter().map(move |&q| (p, q))).collect();
    Ok(match sel {
        PairSelection::All => square(&(0..n).collect::<Vec<_>>()),
        PairSelection::Minimal => square(&lat.lattice.atoms),
        PairSelection::Explicit(v) => {
            if let Some(&(p, q)) = v.iter().find(|&&(p, q)| p >= n || q >= n) {
                return Err(Error::UnsupportedParams(format!("pair ({p}, {q}) out of range; lattice has {n} nodes")));
            }
            v.clone()
        }
    })
}

/// `+`-joined flags: commuting, co-commuting, parallelogram, nested, minimal-pair.
pub fn classification(r: &PairReport) -> String {
    let flag = |v: Option<bool>, yes: &str, no: &str, na: &str| match v {
        Some(true) => yes.to_string(),
        Some(false) => no.to_string(),
        None => na.to_string(),
    };
    let mut parts = vec![
        flag(r.report.commuting, "commuting", "non-commuting", "alpha-undefined"),
        flag(r.report.cocommuting, "co-commuting", "non-co-commuting", "beta-undefined"),
    ];
    if r.report.parallelogram {
        parts.push("parallelogram".into());
    }
    if r.report.nested.is_some() {
        parts.push("nested".into());
    }
    if r.trace.minimal_pair == Some(true) {
        parts.push("minimal-pair".into());
    }
    parts.join("+")
}

pub fn angle_rows(lat: &IntermediateLattice, sel: &PairSelection, angle: Angle) -> Result<Vec<AngleRow>> {
    let nodes = &lat.lattice.nodes;
    Ok(selected_pairs(lat, sel)?
        .into_iter()
        .map(|(p, q)| {
            let r = lat.report(p, q);
            let (cos, radians) = match angle {
                Angle::Alpha => (r.report.cos_alpha.clone(), r.report.alpha_radians),
                Angle::Beta => (r.report.cos_beta.clone(), r.report.beta_radians),
            };
            AngleRow {
                p,
                q,
                p_subgroup: nodes[p].describe(),
                q_subgroup: nodes[q].describe(),
                cos,
                radians,
                classification: classification(r),
            }
        })
        .collect())
}

/// Square matrix of cosines over `ids`; `None` where the angle is undefined.
pub fn angle_matrix(lat: &IntermediateLattice, ids: &[usize], angle: Angle) -> Vec<Vec<Option<Surd>>> {
    ids.iter()
        .map(|&p| {
            ids.iter()
                .map(|&q| {
                    let r = &lat.report(p, q).report;
                    match angle {
                        Angle::Alpha => r.cos_alpha.clone(),
                        Angle::Beta => r.cos_beta.clone(),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn angle_csv(rows: &[AngleRow], angle: Angle, digits: usize) -> Result<String> {
    let name = match angle {
        Angle::Alpha => "alpha",
        Angle::Beta => "beta",
    };
    let mut w = csv::Writer::from_writer(vec![]);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["p", "q", "p_subgroup", "q_subgroup", &format!("cos_{name}"), &format!("cos_{name}_float"), &format!("{name}_radians"), "classification"])
        .map_err(io)?;
    for r in rows {
        let (exact, float, rad) = match &r.cos {
            Some(c) => (
                c.to_string(),
                format_significant(c, digits),
                r.radians.map_or_else(|| NA_UNDEFINED.to_string(), |x| format_f64(x, digits)),
            ),
            None => (NA_UNDEFINED.into(), NA_UNDEFINED.into(), NA_UNDEFINED.into()),
        };
        w.write_record([&r.p.to_string(), &r.q.to_string(), &r.p_subgroup, &r.q_subgroup, &exact, &float, &rad, &r.classification])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

// ---------------------------------------------------------------------------
// Lattice cache

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheEntry {
    format_version: u32,
    table_hash: String,
    base: Vec<usize>,
    nodes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    Disabled,
}

/// Subgroup lattices on disk, keyed by the multiplication-table hash and
/// the base subgroup. Unreadable or stale entries count as misses.
#[derive(Debug, Clone)]
pub struct LatticeCache {
    dir: PathBuf,
}

impl LatticeCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        LatticeCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(LatticeCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &FiniteGroup, base: &Subgroup) -> PathBuf {
        let base_key: Vec<String> = base.members().iter().map(usize::to_string).collect();
        let base_hash = hex::encode(Sha256::digest(base_key.join(",").as_bytes()));
        self.dir.join(format!("v{FORMAT_VERSION}-{}-{}.json", group.table_hash(), &base_hash[..16]))
    }

    pub fn load(&self, group: &Arc<FiniteGroup>, base: &Subgroup, exec: Execution) -> Option<SubgroupLattice> {
        let text = fs::read_to_string(self.path_for(group, base)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.format_version != FORMAT_VERSION || entry.table_hash != group.table_hash() || entry.base != base.members() {
            return None;
        }
        let nodes = entry.nodes.into_iter().map(|m| Subgroup::new(group, m)).collect::<Result<Vec<_>>>().ok()?;
        if nodes.iter().any(|k| !base.is_subgroup_of(k)) {
            return None;
        }
        Some(SubgroupLattice::from_nodes(group, base.clone(), nodes, exec))
    }

    pub fn store(&self, lat: &SubgroupLattice) -> Result<()> {
        let entry = CacheEntry {
            format_version: FORMAT_VERSION,
            table_hash: lat.parent.table_hash(),
            base: lat.base.members().to_vec(),
            nodes: lat.nodes.iter().map(|k| k.members().to_vec()).collect(),
        };
        let path = self.path_for(&lat.parent, &lat.base);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        write_file(&tmp, &serde_json::to_string(&entry).map_err(|e| Error::Io(e.to_string()))?)?;
        fs::rename(&tmp, &path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// Enumerates (or loads) the lattice, then classifies every pair. A cache
/// write failure is not an error.
pub fn cached_lattice(
    group: &Arc<FiniteGroup>,
    base: &Subgroup,
    caps: Caps,
    exec: Execution,
    cache: Option<&LatticeCache>,
) -> Result<(SubgroupLattice, CacheOutcome)> {
    let Some(cache) = cache else {
        return Ok((enumerate_subgroups_with(group, base, caps, exec)?, CacheOutcome::Disabled));
    };
    if let Some(lat) = cache.load(group, base, exec) {
        if lat.len() > caps.max_nodes {
            return Err(Error::CapExceeded { cap: caps.max_nodes });
        }
        return Ok((lat, CacheOutcome::Hit));
    }
    let lat = enumerate_subgroups_with(group, base, caps, exec)?;
    let _ = cache.store(&lat);
    Ok((lat, CacheOutcome::Miss))
}

pub fn cached_census(
    group: &Arc<FiniteGroup>,
    base: &Subgroup,
    caps: Caps,
    exec: Execution,
    cache: Option<&LatticeCache>,
) -> Result<(IntermediateLattice, CacheOutcome)> {
    let (lat, outcome) = cached_lattice(group, base, caps, exec, cache)?;
    Ok((census_of(lat, exec)?, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::census;
    use crate::group::{named_group, NamedGroup};
    use crate::rational::ratio;

    fn lat(g: NamedGroup) -> IntermediateLattice {
        let g = named_group(&g, Caps::default()).unwrap().into_arc();
        census(&g, &Subgroup::trivial(&g), Caps::default(), Execution::Sequential).unwrap()
    }

    #[test]
    fn significant_digits() {
        let s = |t: &str| format_significant(&t.parse::<Surd>().unwrap(), 12);
        assert_eq!(s("1/3"), "0.333333333333");
        assert_eq!(s("2/3"), "0.666666666667");
        assert_eq!(s("1/7√7"), "0.377964473009");
        assert_eq!(s("-1/2"), "-0.5");
        assert_eq!(s("√2"), "1.41421356237");
        assert_eq!(s("123456"), "123456");
        assert_eq!(s("1/1000000"), "0.000001");
        assert_eq!(s("0"), "0");
        // exact ties go to even
        assert_eq!(format_significant(&Surd::rational(ratio(25, 1000)), 1), "0.02");
        assert_eq!(format_significant(&Surd::rational(ratio(35, 1000)), 1), "0.04");
        assert_eq!(format_significant(&Surd::rational(ratio(999_999, 1_000_000)), 3), "1");
        assert_eq!(format_f64(0.5, 12), "0.5");
    }

    #[test]
    fn census_json_round_trips() {
        let l = lat(NamedGroup::Symmetric(3));
        let doc = census_doc(&l);
        assert_eq!(doc.nodes.len(), 6);
        let text = to_json(&doc).unwrap();
        let back: CensusDoc = from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn dot_has_every_node_and_edge() {
        let l = lat(NamedGroup::Cyclic(30));
        let dot = hasse_dot(&l.lattice);
        assert_eq!(dot.matches("[label=").count(), 8);
        assert_eq!(dot.matches(" -> ").count(), l.lattice.hasse_edges.len());
        assert!(dot.starts_with("digraph lattice {"));
    }

    #[test]
    fn csv_marks_endpoints_undefined() {
        let l = lat(NamedGroup::Symmetric(3));
        let rows = angle_rows(&l, &PairSelection::Explicit(vec![(0, 1)]), Angle::Alpha).unwrap();
        let csv = angle_csv(&rows, Angle::Alpha, DEFAULT_DIGITS).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains(NA_UNDEFINED), "{csv}");
        assert!(angle_rows(&l, &PairSelection::Explicit(vec![(0, 9)]), Angle::Alpha).is_err());
    }

    #[test]
    fn minimal_selection_is_atom_square() {
        let l = lat(NamedGroup::Symmetric(3));
        let m = angle_matrix(&l, &l.lattice.atoms, Angle::Alpha);
        assert_eq!(m.len(), 4);
        for (i, row) in m.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let c = c.as_ref().unwrap();
                assert_eq!(c.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_group_table("{\"order\": 2,\n \"table\": [[0, 1], [1 0]]}") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 23)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_group_table("{\"order\": 2, \"table\": [[0, 1], [1, 1]]}"), Err(Error::NoInverse(1))));
    }

    #[test]
    fn trace_json() {
        let td = parse_trace_data(r#"{"tau": "1/16", "tau_p": "1/4", "tau_q": "1/4", "tr_pq": "1/7", "minimal_pair": true}"#).unwrap();
        assert_eq!(td.tr_pq, ratio(1, 7));
        assert_eq!(from_json::<TraceData>(&to_json(&td).unwrap()).unwrap(), td);
        assert!(matches!(
            parse_trace_data(r#"{"tau": "1/4", "tau_p": "1/2", "tau_q": "1/2", "tr_pq": "1/8"}"#),
            Err(Error::InvalidTraceData(_))
        ));
    }

    #[test]
    fn cache_hit_matches_fresh() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LatticeCache::new(dir.path());
        let g = named_group(&NamedGroup::Dihedral(6), Caps::default()).unwrap().into_arc();
        let base = Subgroup::trivial(&g);
        let (a, o1) = cached_census(&g, &base, Caps::default(), Execution::Sequential, Some(&cache)).unwrap();
        let (b, o2) = cached_census(&g, &base, Caps::default(), Execution::Sequential, Some(&cache)).unwrap();
        assert_eq!((o1, o2), (CacheOutcome::Miss, CacheOutcome::Hit));
        assert_eq!(to_json(&census_doc(&a)).unwrap(), to_json(&census_doc(&b)).unwrap());
        // corrupt entries recompute
        fs::write(cache.path_for(&g, &base), "not json").unwrap();
        let (_, o3) = cached_census(&g, &base, Caps::default(), Execution::Sequential, Some(&cache)).unwrap();
        assert_eq!(o3, CacheOutcome::Miss);
    }
}
