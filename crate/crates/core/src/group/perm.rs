//! Permutation input: cycle notation, points 1-based.
//!
//! Products read left to right: `a·b` applies `a` first, then `b`.

use std::collections::HashMap;

use super::{Caps, FiniteGroup};
use crate::error::{Error, Result};

/// Images of points `0..degree` (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// Disjoint cycle notation with 1-based points; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![];
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.0[x];
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// Splits `"(1 2),(1 2 3)"` at top-level commas.
pub fn split_generators(s: &str) -> Result<Vec<String>> {
    let mut out = vec![];
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if !(0..=1).contains(&depth) {
            return Err(Error::BadCycleSyntax(format!("unbalanced parentheses in {s:?}")));
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::BadCycleSyntax(format!("unbalanced parentheses in {s:?}")));
    }
    out.push(cur);
    Ok(out.into_iter().map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect())
}

/// Parses one generator such as `"(1 2)(3 4)"` or `"(1,2,3)"`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
    let bad = |why: &str| Error::BadCycleSyntax(format!("{why} in {s:?}"));
    let mut images: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
        let points = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let p: usize = t.parse().map_err(|_| bad(&format!("bad point {t:?}")))?;
                if p == 0 || p > degree {
                    return Err(bad(&format!("point {p} outside 1..={degree}")));
                }
                Ok(p - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        for &p in &points {
            if used[p] {
                return Err(bad(&format!("point {} repeated", p + 1)));
            }
            used[p] = true;
        }
        for (i, &p) in points.iter().enumerate() {
            images[p] = points[(i + 1) % points.len()];
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(Permutation(images))
}

/// The group generated by the given permutations, elements indexed in
/// breadth-first discovery order with the identity at 0.
pub fn group_from_permutations(generators: &[String], degree: usize, caps: Caps) -> Result<FiniteGroup> {
    let gens = generators
        .iter()
        .map(|g| parse_cycles(g, degree))
        .collect::<Result<Vec<_>>>()?;
    group_from_permutation_list(&gens, degree, caps)
}

pub(crate) fn group_from_permutation_list(
    gens: &[Permutation],
    degree: usize,
    caps: Caps,
) -> Result<FiniteGroup> {
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let y = elements[i].then(g);
            if !index.contains_key(&y) {
                if elements.len() >= caps.max_order {
                    return Err(Error::DegreeExceeded { cap: caps.max_order });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        i += 1;
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.then(b)]);
        }
    }
    let labels = elements.iter().map(Permutation::cycle_string).collect();
    Ok(FiniteGroup::from_flat(n, table)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(s: &str) -> Vec<String> {
        split_generators(s).unwrap()
    }

    #[test]
    fn small_permutation_groups() {
        let caps = Caps::default();
        assert_eq!(group_from_permutations(&gens("(1 2)"), 2, caps).unwrap().order(), 2);
        assert_eq!(group_from_permutations(&gens("(1 2),(1 2 3)"), 3, caps).unwrap().order(), 6);
        let d4 = group_from_permutations(&gens("(1 2 3 4),(1 3)"), 4, caps).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.label(0), "()");
    }

    #[test]
    fn comma_separated_points_inside_cycles() {
        assert_eq!(split_generators("(1,2),(1,2,3)").unwrap(), vec!["(1,2)", "(1,2,3)"]);
        assert_eq!(parse_cycles("(1,2,3)", 3).unwrap(), Permutation(vec![1, 2, 0]));
        assert_eq!(parse_cycles("(1 2)(3 4)", 4).unwrap(), Permutation(vec![1, 0, 3, 2]));
        assert_eq!(parse_cycles("()", 3).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["(1 2", "1 2)", "(1 5)", "(0 1)", "(1 1)", "(a b)", "(1 2)x"] {
            assert!(matches!(parse_cycles(bad, 4), Err(Error::BadCycleSyntax(_))), "{bad}");
        }
        assert!(split_generators("((1 2))").is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps { max_order: 100, max_nodes: 10 };
        let s5 = gens("(1 2 3 4 5),(1 2)");
        assert_eq!(
            group_from_permutations(&s5, 5, caps).unwrap_err(),
            Error::DegreeExceeded { cap: 100 }
        );
    }
}
