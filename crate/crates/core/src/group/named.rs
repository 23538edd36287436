//! Named families with fixed element orderings.
//!
//! Canonical orderings (identity is always index 0):
//! - `cyclic(n)`: index `i` is `a^i`.
//! - `dihedral(n)` (order `2n`): index `i + n·j` is `r^i s^j`, with `s r s = r⁻¹`.
//! - `symmetric(n)`: permutations of `1..=n` in lexicographic order of their
//!   image lists; products apply the left factor first.
//! - `elementary_abelian(p, k)`: index `Σ v_i p^i` is the vector `(v_0, …, v_{k-1})`.
//! - `quaternion(4m)` (dicyclic, `quaternion(8)` = Q₈): index `i + 2m·j` is
//!   `a^i x^j`, with `a^{2m} = 1`, `x² = a^m`, `x a x⁻¹ = a⁻¹`.
//! - `direct_product(A, B)`: index `a + |A|·b` is `(a, b)`.

use std::fmt;
use std::str::FromStr;

use super::perm::Permutation;
use super::{Caps, FiniteGroup};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedGroup {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    ElementaryAbelian { p: usize, k: usize },
    Quaternion(usize),
    DirectProduct(Box<NamedGroup>, Box<NamedGroup>),
}

impl NamedGroup {
    pub fn order(&self) -> Option<usize> {
        Some(match self {
            NamedGroup::Cyclic(n) => *n,
            NamedGroup::Dihedral(n) => 2 * n,
            NamedGroup::Symmetric(n) => (1..=*n).product(),
            NamedGroup::ElementaryAbelian { p, k } => p.checked_pow(*k as u32)?,
            NamedGroup::Quaternion(n) => *n,
            NamedGroup::DirectProduct(a, b) => a.order()?.checked_mul(b.order()?)?,
        })
    }

    pub fn direct_product(a: NamedGroup, b: NamedGroup) -> NamedGroup {
        NamedGroup::DirectProduct(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGroup::Cyclic(n) => write!(f, "cyclic({n})"),
            NamedGroup::Dihedral(n) => write!(f, "dihedral({n})"),
            NamedGroup::Symmetric(n) => write!(f, "symmetric({n})"),
            NamedGroup::ElementaryAbelian { p, k } => write!(f, "elementary_abelian({p},{k})"),
            NamedGroup::Quaternion(n) => write!(f, "quaternion({n})"),
            NamedGroup::DirectProduct(a, b) => write!(f, "direct_product({a},{b})"),
        }
    }
}

impl FromStr for NamedGroup {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `direct_product(cyclic(2),symmetric(3))`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::UnsupportedParams(format!("cannot parse group {s:?}"));
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match &s[..open] {
            "cyclic" => Ok(NamedGroup::Cyclic(num(inner)?)),
            "dihedral" => Ok(NamedGroup::Dihedral(num(inner)?)),
            "symmetric" => Ok(NamedGroup::Symmetric(num(inner)?)),
            "quaternion" => Ok(NamedGroup::Quaternion(num(inner)?)),
            "elementary_abelian" => {
                let (p, k) = inner.split_once(',').ok_or_else(bad)?;
                Ok(NamedGroup::ElementaryAbelian { p: num(p)?, k: num(k)? })
            }
            "direct_product" => {
                // split at the comma where parenthesis depth is zero
                let mut depth = 0;
                let cut = inner
                    .char_indices()
                    .find(|&(_, c)| {
                        match c {
                            '(' => depth += 1,
                            ')' => depth -= 1,
                            _ => {}
                        }
                        c == ',' && depth == 0
                    })
                    .map(|(i, _)| i)
                    .ok_or_else(bad)?;
                Ok(NamedGroup::direct_product(inner[..cut].parse()?, inner[cut + 1..].parse()?))
            }
            _ => Err(bad()),
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn build(order: usize, f: impl Fn(usize, usize) -> usize, labels: Vec<String>) -> Result<FiniteGroup> {
    let table = (0..order * order).map(|i| f(i / order, i % order)).collect();
    Ok(FiniteGroup::from_flat(order, table)?.with_labels(labels))
}

fn power_label(sym: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{i}"),
    }
}

fn join_label(parts: &[String]) -> String {
    let s: Vec<&str> = parts.iter().map(String::as_str).filter(|p| !p.is_empty()).collect();
    if s.is_empty() {
        "e".into()
    } else {
        s.join(" ")
    }
}

pub fn named_group(family: &NamedGroup, caps: Caps) -> Result<FiniteGroup> {
    let unsupported = |why: String| Err(Error::UnsupportedParams(why));
    match family.order() {
        None => return unsupported(format!("{family}: order overflows")),
        Some(o) if o > caps.max_order => return Err(Error::DegreeExceeded { cap: caps.max_order }),
        Some(0) => return unsupported(format!("{family}: empty group")),
        _ => {}
    }
    match *family {
        NamedGroup::Cyclic(n) => {
            let labels = (0..n).map(|i| join_label(&[power_label("a", i)])).collect();
            build(n, |a, b| (a + b) % n, labels)
        }
        NamedGroup::Dihedral(n) => {
            let labels = (0..2 * n)
                .map(|g| join_label(&[power_label("r", g % n), power_label("s", g / n)]))
                .collect();
            build(
                2 * n,
                |x, y| {
                    let (i, j) = (x % n, x / n);
                    let (k, l) = (y % n, y / n);
                    let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                    rot + n * ((j + l) % 2)
                },
                labels,
            )
        }
        NamedGroup::Symmetric(n) => {
            if !(1..=6).contains(&n) {
                return unsupported(format!("symmetric({n}): need 1 <= n <= 6"));
            }
            let mut perms = vec![];
            let mut cur: Vec<usize> = (0..n).collect();
            loop {
                perms.push(Permutation(cur.clone()));
                if !next_permutation(&mut cur) {
                    break;
                }
            }
            let index: std::collections::HashMap<_, _> =
                perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
            let order = perms.len();
            let labels = perms.iter().map(Permutation::cycle_string).collect();
            build(order, |a, b| index[&perms[a].then(&perms[b])], labels)
        }
        NamedGroup::ElementaryAbelian { p, k } => {
            if !is_prime(p) || k == 0 {
                return unsupported(format!("elementary_abelian({p},{k}): need p prime, k >= 1"));
            }
            let order = p.pow(k as u32);
            let digits = |mut x: usize| -> Vec<usize> {
                (0..k)
                    .map(|_| {
                        let d = x % p;
                        x /= p;
                        d
                    })
                    .collect()
            };
            let labels = (0..order)
                .map(|g| format!("({})", digits(g).iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            build(
                order,
                |a, b| {
                    let (da, db) = (digits(a), digits(b));
                    (0..k).rev().fold(0, |acc, i| acc * p + (da[i] + db[i]) % p)
                },
                labels,
            )
        }
        NamedGroup::Quaternion(order) => {
            if order < 8 || order % 4 != 0 {
                return unsupported(format!("quaternion({order}): need order 4m with m >= 2"));
            }
            let h = order / 2; // |⟨a⟩| = 2m
            let m = order / 4;
            let labels = (0..order)
                .map(|g| join_label(&[power_label("a", g % h), power_label("x", g / h)]))
                .collect();
            build(
                order,
                |x, y| {
                    let (i, j) = (x % h, x / h);
                    let (k, l) = (y % h, y / h);
                    match (j, l) {
                        (0, _) => (i + k) % h + h * l,
                        (_, 0) => (i + h - k) % h + h,
                        _ => (i + h - k + m) % h,
                    }
                },
                labels,
            )
        }
        NamedGroup::DirectProduct(ref a, ref b) => {
            let ga = named_group(a, caps)?;
            let gb = named_group(b, caps)?;
            let (na, nb) = (ga.order(), gb.order());
            let labels = (0..na * nb)
                .map(|g| format!("({}, {})", ga.label(g % na), gb.label(g / na)))
                .collect();
            build(
                na * nb,
                |x, y| ga.compose(x % na, y % na) + na * gb.compose(x / na, y / na),
                labels,
            )
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
