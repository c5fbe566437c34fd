//! Independent cocycle-based oracle for the extension fibration: direct
//! enumeration of normalized 2-cocycles, coboundaries, `H²` and `Z¹`.
//!
//! The group laws here are pointwise cochain arithmetic; nothing is shared
//! with the categorical route in [`crate::ext`] (tensor by
//! pullback-then-pushforward, classes by vertical-isomorphism transport),
//! so agreement between the two is a real cross-check.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ext::{Extension, FactorSet};
use crate::finalg::{CModule, FiniteAbelianGroup, FiniteGroup};

/// Iterates all maps `C -> B` with `g(e) = 0` in lexicographic order.
fn normalized_cochains(m: &CModule) -> Vec<Vec<usize>> {
    let c = m.c();
    let b = m.b();
    let free: Vec<usize> = c.elements().filter(|&x| x != c.identity()).collect();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; free.len()];
    loop {
        let mut g = vec![b.zero(); c.size()];
        for (slot, &ci) in free.iter().enumerate() {
            g[ci] = assignment[slot];
        }
        out.push(g);
        let mut i = free.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < b.size() {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// All normalized tables satisfying the 2-cocycle identity, in
/// lexicographic order of their free entries.
pub fn z2_enumerate(module: &CModule, budget: u64) -> Result<Vec<FactorSet>> {
    let c = module.c();
    let b = module.b();
    let free: Vec<(usize, usize)> = c
        .elements()
        .filter(|&x| x != c.identity())
        .flat_map(|x| c.elements().filter(|&y| y != c.identity()).map(move |y| (x, y)))
        .collect();
    match (b.size() as u128).checked_pow(free.len() as u32) {
        Some(n) if n <= budget as u128 => {}
        _ => {
            return Err(Error::budget(
                format!("enumerating 2-cochains needs |B|^{}", free.len()),
                budget,
            ))
        }
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; free.len()];
    loop {
        let mut t = vec![vec![b.zero(); c.size()]; c.size()];
        for (slot, &(x, y)) in free.iter().enumerate() {
            t[x][y] = assignment[slot];
        }
        if let Ok(fs) = FactorSet::new(module.clone(), t) {
            out.push(fs);
        }
        let mut i = free.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < b.size() {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// All coboundaries `delta g (c1, c2) = xi(c1, g(c2)) - g(c1 c2) + g(c1)`
/// of normalized 1-cochains, deduplicated, lexicographic.
pub fn b2_enumerate(module: &CModule) -> Result<Vec<FactorSet>> {
    let c = module.c();
    let b = module.b();
    let mut seen = BTreeSet::new();
    for g in normalized_cochains(module) {
        let t: Vec<Vec<usize>> = c
            .elements()
            .map(|c1| {
                c.elements()
                    .map(|c2| b.add(b.sub(module.act(c1, g[c2]), g[c.mul(c1, c2)]), g[c1]))
                    .collect()
            })
            .collect();
        seen.insert(t);
    }
    seen.into_iter()
        .map(|t| FactorSet::new(module.clone(), t))
        .collect()
}

/// `H²` of the module with explicit class representatives.
pub struct H2 {
    pub group: FiniteAbelianGroup,
    /// Lexicographically minimal cocycle in each class, indexed by group
    /// element.
    pub reps: Vec<FactorSet>,
    pub zero_index: usize,
    class_by_table: BTreeMap<Vec<Vec<usize>>, usize>,
}

impl H2 {
    pub fn class_of(&self, t: &FactorSet) -> Result<usize> {
        self.class_by_table
            .get(t.table())
            .copied()
            .ok_or_else(|| Error::invalid("table is not a cocycle of this module"))
    }
}

/// Quotient of cocycles by coboundaries under pointwise addition.
pub fn h2(module: &CModule, budget: u64) -> Result<H2> {
    let cocycles = z2_enumerate(module, budget)?;
    let coboundaries = b2_enumerate(module)?;
    // class key: lexicographically minimal member of t + B²
    let key = |t: &FactorSet| -> Result<Vec<Vec<usize>>> {
        let mut best: Option<Vec<Vec<usize>>> = None;
        for d in &coboundaries {
            let s = t.add(d)?;
            let tab = s.table().clone();
            if best.as_ref().map_or(true, |b| tab < *b) {
                best = Some(tab);
            }
        }
        Ok(best.expect("coboundaries contain the zero table"))
    };
    let mut reps_tables: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut class_by_table = BTreeMap::new();
    for t in &cocycles {
        let k = key(t)?;
        let idx = match reps_tables.iter().position(|r| *r == k) {
            Some(i) => i,
            None => {
                reps_tables.push(k.clone());
                reps_tables.len() - 1
            }
        };
        class_by_table.insert(t.table().clone(), idx);
    }
    let reps: Vec<FactorSet> = reps_tables
        .iter()
        .map(|t| FactorSet::new(module.clone(), t.clone()))
        .collect::<Result<_>>()?;
    let mut mul = vec![vec![0usize; reps.len()]; reps.len()];
    for (i, ti) in reps.iter().enumerate() {
        for (j, tj) in reps.iter().enumerate() {
            let sum = ti.add(tj)?;
            mul[i][j] = class_by_table[sum.table()];
        }
    }
    let zero_index = class_by_table[FactorSet::zero(module).table()];
    let group = FiniteAbelianGroup::new(FiniteGroup::from_parts(reps.len(), mul, zero_index)?)?;
    Ok(H2 { group, reps, zero_index, class_by_table })
}

/// Convenience accessor for just the group.
pub fn h2_group(module: &CModule, budget: u64) -> Result<FiniteAbelianGroup> {
    Ok(h2(module, budget)?.group)
}

/// `Z¹`: derivations with explicit cochain tables.
pub struct Z1 {
    pub group: FiniteAbelianGroup,
    /// The derivations realizing each element, sorted lexicographically.
    pub derivations: Vec<Vec<usize>>,
}

/// The group of derivations `g(c1 c2) = xi(c1, g(c2)) + g(c1)` under
/// pointwise addition.
pub fn z1(module: &CModule) -> Result<Z1> {
    let c = module.c();
    let b = module.b();
    let mut derivations = Vec::new();
    for g in normalized_cochains(module) {
        let ok = c.elements().all(|c1| {
            c.elements().all(|c2| g[c.mul(c1, c2)] == b.add(module.act(c1, g[c2]), g[c1]))
        });
        if ok {
            derivations.push(g);
        }
    }
    let index: BTreeMap<Vec<usize>, usize> =
        derivations.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mul = derivations
        .iter()
        .map(|g| {
            derivations
                .iter()
                .map(|h| {
                    let sum: Vec<usize> =
                        g.iter().zip(h).map(|(&x, &y)| b.add(x, y)).collect();
                    index[&sum]
                })
                .collect()
        })
        .collect();
    let identity = index[&vec![b.zero(); c.size()]];
    let group =
        FiniteAbelianGroup::new(FiniteGroup::from_parts(derivations.len(), mul, identity)?)?;
    Ok(Z1 { group, derivations })
}

pub fn z1_group(module: &CModule) -> Result<FiniteAbelianGroup> {
    Ok(z1(module)?.group)
}

/// Builds the extension with multiplication twisted by the cocycle; the
/// classical table-to-extension direction of the correspondence.
pub fn extension_from_cocycle(t: &FactorSet) -> Result<Extension> {
    Extension::from_normalized_table(t.module().clone(), t.table())
}

/// Reads the normalized cocycle back off an extension on the canonical
/// carrier.
pub fn cocycle_from_extension(e: &Extension) -> Result<FactorSet> {
    FactorSet::new(e.module().clone(), e.factor_set())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::{abelian_invariants, make_cyclic, DEFAULT_BUDGET};

    fn z(n: usize) -> FiniteAbelianGroup {
        make_cyclic(n).unwrap()
    }

    fn trivial_mod(c: usize, b: usize) -> CModule {
        CModule::trivial_action(z(c).as_group().clone(), z(b))
    }

    #[test]
    fn cocycle_counts() {
        assert_eq!(z2_enumerate(&trivial_mod(2, 2), DEFAULT_BUDGET).unwrap().len(), 2);
        assert_eq!(z2_enumerate(&trivial_mod(2, 4), DEFAULT_BUDGET).unwrap().len(), 4);
        let zero = CModule::zero(z(3).as_group().clone());
        assert_eq!(z2_enumerate(&zero, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn coboundary_counts() {
        let b2 = b2_enumerate(&trivial_mod(2, 2)).unwrap();
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].table(), FactorSet::zero(&trivial_mod(2, 2)).table());
        assert_eq!(b2_enumerate(&trivial_mod(2, 4)).unwrap().len(), 2);
    }

    #[test]
    fn coboundaries_are_cocycles() {
        for (c, b) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 4)] {
            let m = trivial_mod(c, b);
            let z2: BTreeSet<_> =
                z2_enumerate(&m, DEFAULT_BUDGET).unwrap().into_iter().map(|t| t.table().clone()).collect();
            for d in b2_enumerate(&m).unwrap() {
                assert!(z2.contains(d.table()));
            }
        }
    }

    #[test]
    fn h2_invariants() {
        assert_eq!(abelian_invariants(&h2_group(&trivial_mod(2, 2), DEFAULT_BUDGET).unwrap()), vec![2]);
        assert_eq!(
            abelian_invariants(&h2_group(&trivial_mod(3, 2), DEFAULT_BUDGET).unwrap()),
            Vec::<usize>::new()
        );
        assert_eq!(abelian_invariants(&h2_group(&trivial_mod(4, 2), DEFAULT_BUDGET).unwrap()), vec![2]);
        let zero = CModule::zero(z(5).as_group().clone());
        assert_eq!(abelian_invariants(&h2_group(&zero, DEFAULT_BUDGET).unwrap()), Vec::<usize>::new());
        // Klein group with Z2 coefficients: elementary abelian of rank 3
        let klein = FiniteAbelianGroup::direct_product(&z(2), &z(2));
        let m = CModule::trivial_action(klein.as_group().clone(), z(2));
        assert_eq!(abelian_invariants(&h2_group(&m, DEFAULT_BUDGET).unwrap()), vec![2, 2, 2]);
    }

    #[test]
    fn z1_counts() {
        // trivial action: derivations are homomorphisms
        assert_eq!(abelian_invariants(&z1_group(&trivial_mod(2, 2)).unwrap()), vec![2]);
        assert_eq!(
            abelian_invariants(&z1_group(&trivial_mod(2, 3)).unwrap()),
            Vec::<usize>::new()
        );
        assert_eq!(abelian_invariants(&z1_group(&trivial_mod(4, 4)).unwrap()), vec![4]);
    }

    #[test]
    fn cocycle_extension_bridge() {
        let m = trivial_mod(2, 2);
        // zero cocycle gives the split extension
        let split = extension_from_cocycle(&FactorSet::zero(&m)).unwrap();
        assert_eq!(split, Extension::split(&m));
        // the nonzero cocycle gives Z4
        let t = FactorSet::new(m.clone(), vec![vec![0, 0], vec![0, 1]]).unwrap();
        let e = extension_from_cocycle(&t).unwrap();
        assert_eq!(e.group().element_order(1), 4);
        // round trip on every enumerated cocycle
        for t in z2_enumerate(&m, DEFAULT_BUDGET).unwrap() {
            let e = extension_from_cocycle(&t).unwrap();
            assert_eq!(cocycle_from_extension(&e).unwrap(), t);
        }
    }
}
