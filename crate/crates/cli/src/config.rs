//! Flag/config-file merging into a validated [`RunConfig`].
//!
//! Precedence: command-line flags, then the TOML config file, then defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;
use subfactor_angles::group::{parse_cycles, split_generators, Caps, FiniteGroup, NamedGroup};
use subfactor_angles::io::{PairSelection, DEFAULT_DIGITS};
use subfactor_angles::verify::{Fault, Suite};
use subfactor_angles::{Error, Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    InflatedMeet,
}

/// Options shared by every subcommand. All optional so that unset flags
/// fall through to the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Named family (cyclic, dihedral, symmetric, elementary_abelian,
    /// quaternion) or a full spec such as `direct_product(cyclic(2),symmetric(3))`.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Family parameter: cyclic/symmetric degree, dihedral `n` (order 2n), quaternion order.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Prime for elementary_abelian.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Rank for elementary_abelian.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// JSON multiplication table `{"order": n, "table": [[...]]}`.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    /// Permutation generators in cycle notation, e.g. `(1 2 3),(1 2)`.
    #[arg(long, global = true)]
    pub perms: Option<String>,
    /// Permutation degree; inferred from the largest point when omitted
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Generators of the base subgroup H₀: element labels or indices.
    #[arg(long, global = true)]
    pub base: Option<String>,
    /// `all`, `minimal`, or a list like `1:2,o2:o10` (node ids or `o<order>`).
    #[arg(long, global = true)]
    pub pairs: Option<String>,
    /// `all` or a comma list of angles, landau, sym, po2, bounds, duality.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Output directory for written artifacts
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest accepted group order [default: 256]
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// Largest accepted lattice size [default: 20000]
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    /// Significant digits of the float columns.
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    /// Seed for random representative and sample choices
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Disable rayon fan-out.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// TOML file supplying defaults for any of these options
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, hide = true, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

/// The TOML config file; same keys as the long flags, with underscores.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub k: Option<usize>,
    pub table: Option<PathBuf>,
    pub perms: Option<String>,
    pub degree: Option<usize>,
    pub base: Option<String>,
    pub pairs: Option<String>,
    pub suite: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub max_order: Option<usize>,
    pub max_nodes: Option<usize>,
    pub digits: Option<usize>,
    pub seed: Option<u64>,
    pub sequential: Option<bool>,
    pub cache_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e.to_string().trim_end())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSource {
    Family(NamedGroup),
    Table(PathBuf),
    Perms { generators: Vec<String>, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairsSpec {
    All,
    Minimal,
    /// Each side is a node id or an order selector.
    Explicit(Vec<(NodeRef, NodeRef)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    Id(usize),
    Order(usize),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Option<GroupSource>,
    pub base: Vec<String>,
    pub pairs: PairsSpec,
    pub suites: Vec<Suite>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub caps: Caps,
    pub cache_dir: Option<PathBuf>,
    pub digits: usize,
    pub seed: Option<u64>,
    pub exec: Execution,
    pub fault: Option<Fault>,
}

fn family(name: &str, n: Option<usize>, p: Option<usize>, k: Option<usize>) -> Result<NamedGroup> {
    if name.contains('(') {
        return name.parse();
    }
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::UnsupportedParams(format!("family {name} needs --{flag}")))
    };
    Ok(match name.replace('-', "_").to_ascii_lowercase().as_str() {
        "cyclic" => NamedGroup::Cyclic(need(n, "n")?),
        "dihedral" => NamedGroup::Dihedral(need(n, "n")?),
        "symmetric" => NamedGroup::Symmetric(need(n, "n")?),
        "quaternion" | "dicyclic" => NamedGroup::Quaternion(need(n, "n")?),
        "elementary_abelian" => NamedGroup::ElementaryAbelian { p: need(p, "p")?, k: need(k, "k")? },
        _ => return Err(Error::UnsupportedParams(format!("unknown family {name:?}"))),
    })
}

fn parse_pairs(s: &str) -> Result<PairsSpec> {
    match s.trim().to_ascii_lowercase().as_str() {
        "all" => return Ok(PairsSpec::All),
        "minimal" => return Ok(PairsSpec::Minimal),
        _ => {}
    }
    let node = |t: &str| -> Result<NodeRef> {
        let t = t.trim();
        let bad = || Error::Parse(format!("bad pair endpoint {t:?}"));
        match t.strip_prefix('o') {
            Some(o) => o.parse().map(NodeRef::Order).map_err(|_| bad()),
            None => t.parse().map(NodeRef::Id).map_err(|_| bad()),
        }
    };
    let pairs = s
        .split(',')
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| Error::Parse(format!("pair {pair:?} needs the form P:Q")))?;
            Ok((node(a)?, node(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairsSpec::Explicit(pairs))
}

impl RunConfig {
    pub fn resolve(flags: &Options, file: &FileConfig) -> Result<Self> {
        macro_rules! pick {
            ($f:ident) => {
                flags.$f.clone().or_else(|| file.$f.clone())
            };
        }
        let (fam, table, perms) = (pick!(family), pick!(table), pick!(perms));
        // A flag-level source replaces any source from the config file.
        let flag_source = flags.family.is_some() || flags.table.is_some() || flags.perms.is_some();
        let (fam, table, perms) = if flag_source {
            (flags.family.clone(), flags.table.clone(), flags.perms.clone())
        } else {
            (fam, table, perms)
        };
        let given = [fam.is_some(), table.is_some(), perms.is_some()].iter().filter(|&&b| b).count();
        if given > 1 {
            return Err(Error::UnsupportedParams("give exactly one of --family, --table, --perms".into()));
        }
        let source = if let Some(f) = fam {
            Some(GroupSource::Family(family(&f, pick!(n), pick!(p), pick!(k))?))
        } else if let Some(t) = table {
            Some(GroupSource::Table(t))
        } else if let Some(s) = perms {
            let generators = split_generators(&s)?;
            let max_point = generators
                .iter()
                .flat_map(|g| g.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse::<usize>().ok()))
                .max()
                .unwrap_or(1);
            let degree = pick!(degree).unwrap_or(max_point);
            Some(GroupSource::Perms { generators, degree })
        } else {
            None
        };

        let defaults = Caps::default();
        let caps = Caps {
            max_order: pick!(max_order).unwrap_or(defaults.max_order),
            max_nodes: pick!(max_nodes).unwrap_or(defaults.max_nodes),
        };
        if caps.max_order == 0 || caps.max_nodes == 0 {
            return Err(Error::UnsupportedParams("caps must be positive".into()));
        }
        let digits = pick!(digits).unwrap_or(DEFAULT_DIGITS);
        if !(1..=60).contains(&digits) {
            return Err(Error::UnsupportedParams(format!("--digits {digits} outside 1..=60")));
        }
        let base = match pick!(base) {
            Some(b) => split_generators(&b)?,
            None => vec![],
        };
        let sequential = flags.sequential || file.sequential.unwrap_or(false);
        Ok(RunConfig {
            source,
            base,
            pairs: parse_pairs(&pick!(pairs).unwrap_or_else(|| "all".into()))?,
            suites: Suite::parse_selection(&pick!(suite).unwrap_or_else(|| "all".into()))?,
            out: pick!(out),
            format: pick!(format).unwrap_or(Format::Text),
            caps,
            cache_dir: file.cache_dir.clone(),
            digits,
            seed: pick!(seed),
            exec: if sequential { Execution::Sequential } else { Execution::Parallel },
            fault: flags.inject_fault.map(|FaultArg::InflatedMeet| Fault::InflatedMeet),
        })
    }
}

/// Looks up an element by label, by index, or (for permutation labels) by
/// its normalized cycle form.
pub fn resolve_element(group: &FiniteGroup, token: &str) -> Result<usize> {
    let token = token.trim();
    if let Some(labels) = group.labels() {
        if let Some(i) = labels.iter().position(|l| l == token) {
            return Ok(i);
        }
        if token.starts_with('(') {
            let degree = token.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse::<usize>().ok()).max();
            let canonical = degree.and_then(|d| parse_cycles(token, d).ok()).map(|p| p.cycle_string());
            if let Some(i) = canonical.and_then(|c| labels.iter().position(|l| *l == c)) {
                return Ok(i);
            }
        }
    }
    match usize::from_str(token) {
        Ok(i) if i < group.order() => Ok(i),
        _ => Err(Error::UnsupportedParams(format!("no element {token:?} in the group"))),
    }
}

pub fn resolve_pairs(spec: &PairsSpec, node_orders: &[usize]) -> Result<PairSelection> {
    let node = |r: NodeRef| -> Result<usize> {
        match r {
            NodeRef::Id(i) if i < node_orders.len() => Ok(i),
            NodeRef::Id(i) => Err(Error::UnsupportedParams(format!("node {i} out of range"))),
            NodeRef::Order(o) => {
                let hits: Vec<usize> = (0..node_orders.len()).filter(|&i| node_orders[i] == o).collect();
                match hits[..] {
                    [i] => Ok(i),
                    [] => Err(Error::UnsupportedParams(format!("no intermediate of order {o}"))),
                    _ => Err(Error::UnsupportedParams(format!("order {o} is ambiguous ({} nodes); use node ids", hits.len()))),
                }
            }
        }
    };
    Ok(match spec {
        PairsSpec::All => PairSelection::All,
        PairsSpec::Minimal => PairSelection::Minimal,
        PairsSpec::Explicit(v) => PairSelection::Explicit(v.iter().map(|&(a, b)| Ok((node(a)?, node(b)?))).collect::<Result<_>>()?),
    })
}
