//! Built-in instance families used by the verification suites and the
//! command-line frontend.

use crate::error::{Error, Result};
use crate::finalg::{make_cyclic, CModule, FiniteAbelianGroup, FiniteMonoid};

/// The two-element monoid `{e, a}` with `a * a = a`; the smallest monoid
/// whose action category has non-invertible vertical arrows between
/// reachable objects.
pub fn idempotent2() -> FiniteMonoid {
    FiniteMonoid::new(2, vec![vec![0, 1], vec![1, 1]], 0).expect("fixed table")
}

/// Abelian groups with carrier at most `max`, one per isomorphism class:
/// cyclic groups and, from 4 on, the Klein group.
pub fn abelian_groups(max: usize) -> Vec<(String, FiniteAbelianGroup)> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push((format!("Z{n}"), make_cyclic(n).expect("n >= 1")));
        if n == 4 {
            let klein = FiniteAbelianGroup::direct_product(
                &make_cyclic(2).unwrap(),
                &make_cyclic(2).unwrap(),
            );
            out.push(("Z2xZ2".to_string(), klein));
        }
    }
    out
}

/// The monoid grid: the abelian groups plus the idempotent two-element
/// monoid.
pub fn monoids(max: usize) -> Vec<(String, FiniteMonoid)> {
    let mut out: Vec<(String, FiniteMonoid)> = abelian_groups(max)
        .into_iter()
        .map(|(name, g)| (name, g.as_monoid().clone()))
        .collect();
    if max >= 2 {
        out.push(("E2".to_string(), idempotent2()));
    }
    out
}

/// Every module `(B, xi)` over `c` with kernel taken from the abelian
/// groups of carrier at most `max_b`.
pub fn modules_over(
    c: &FiniteAbelianGroup,
    max_b: usize,
    budget: u64,
) -> Result<Vec<(String, CModule)>> {
    let mut out = Vec::new();
    for (name, b) in abelian_groups(max_b) {
        let actions = CModule::enumerate_actions(c.as_group(), &b, budget)?;
        let many = actions.len() > 1;
        for (i, m) in actions.into_iter().enumerate() {
            let label = if many { format!("{name}#{i}") } else { name.clone() };
            out.push((label, m));
        }
    }
    Ok(out)
}

/// Parses the `Z<n>` / `Z<n>xZ<m>x...` mini-language. On failure, reports
/// the byte offset of the offending token.
pub fn parse_group_spec(spec: &str) -> Result<FiniteAbelianGroup> {
    let mut result: Option<FiniteAbelianGroup> = None;
    let mut offset = 0usize;
    for part in spec.split('x') {
        let n: usize = part
            .strip_prefix('Z')
            .and_then(|digits| digits.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "cannot parse group spec {spec:?} at byte {offset}: expected Z<n>"
                ))
            })?;
        let g = make_cyclic(n)?;
        result = Some(match result {
            None => g,
            Some(acc) => FiniteAbelianGroup::direct_product(&acc, &g),
        });
        offset += part.len() + 1;
    }
    result.ok_or_else(|| Error::invalid("empty group spec"))
}

/// Cyclic factor orders of a spec string, used to interpret the `inv`
/// action.
pub fn parse_factor_orders(spec: &str) -> Result<Vec<usize>> {
    parse_group_spec(spec)?; // validate first
    Ok(spec
        .split('x')
        .map(|part| part.strip_prefix('Z').unwrap().parse().unwrap())
        .collect())
}

// ---------------------------------------------------------------------------
