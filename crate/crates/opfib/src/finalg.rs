//! Finite monoids, groups, abelian groups, homomorphisms and quotient
//! machinery on dense index carriers.
//!
//! Elements are indices `0..size`; all structure is stored as lookup
//! tables, so every law is checked exhaustively at construction time.
//! Product carriers use the row-major pair encoding `i * |H| + j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of candidate maps an enumeration may explore.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// FiniteMonoid
// ---------------------------------------------------------------------------

/// A finite monoid presented by its multiplication table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteMonoid {
    size: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid(n={}, e={}, mul={:?})", self.size, self.identity, self.mul)
    }
}

impl FiniteMonoid {
    /// Validates associativity, the two-sided identity and index bounds.
    pub fn new(size: usize, mul: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("monoid carrier must be nonempty"));
        }
        if mul.len() != size || mul.iter().any(|row| row.len() != size) {
            return Err(Error::invalid(format!(
                "multiplication table must be {size}x{size}"
            )));
        }
        if identity >= size {
            return Err(Error::invalid("identity index out of range"));
        }
        for row in &mul {
            for &v in row {
                if v >= size {
                    return Err(Error::invalid("table entry out of range"));
                }
            }
        }
        let m = FiniteMonoid { size, mul, identity };
        for x in 0..size {
            if m.mul(m.identity, x) != x || m.mul(x, m.identity) != x {
                return Err(Error::invalid(format!("{identity} is not a two-sided identity")));
            }
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::invalid(format!(
                            "multiplication not associative at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn trivial() -> Self {
        FiniteMonoid { size: 1, mul: vec![vec![0]], identity: 0 }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x][y]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.mul
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// The same carrier with reversed multiplication.
    pub fn opposite(&self) -> FiniteMonoid {
        let mul = (0..self.size)
            .map(|x| (0..self.size).map(|y| self.mul(y, x)).collect())
            .collect();
        FiniteMonoid { size: self.size, mul, identity: self.identity }
    }

    /// x^k by repeated multiplication (k = 0 gives the identity).
    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Least k >= 1 with x^k = identity, if any power reaches it.
    pub fn element_order(&self, x: usize) -> Option<usize> {
        let mut acc = x;
        for k in 1..=self.size {
            if acc == self.identity {
                return Some(k);
            }
            acc = self.mul(acc, x);
        }
        None
    }

    /// Two-sided inverses for every element, when they all exist.
    pub fn inverses(&self) -> Option<Vec<usize>> {
        let mut inv = vec![usize::MAX; self.size];
        for x in 0..self.size {
            let y = (0..self.size)
                .find(|&y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)?;
            inv[x] = y;
        }
        Some(inv)
    }

    /// The full transformation monoid on `n` points, maps composed as
    /// `(f * g)(x) = f(g(x))`. Map `t` is encoded as `sum t[x] * n^x`.
    pub fn endo_monoid(n: usize) -> FiniteMonoid {
        assert!(n >= 1 && n <= 4, "endo monoid only materialized for 1..=4 points");
        let count = n.pow(n as u32);
        let decode = |code: usize| -> Vec<usize> {
            let mut t = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                t.push(c % n);
                c /= n;
            }
            t
        };
        let encode = |t: &[usize]| -> usize {
            t.iter().rev().fold(0, |acc, &v| acc * n + v)
        };
        let maps: Vec<Vec<usize>> = (0..count).map(decode).collect();
        let mul = (0..count)
            .map(|f| {
                (0..count)
                    .map(|g| {
                        let comp: Vec<usize> = (0..n).map(|x| maps[f][maps[g][x]]).collect();
                        encode(&comp)
                    })
                    .collect()
            })
            .collect();
        let id: Vec<usize> = (0..n).collect();
        FiniteMonoid { size: count, mul, identity: encode(&id) }
    }

    /// Decodes an element of `endo_monoid(n)` back into a map table.
    pub fn endo_decode(n: usize, code: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            t.push(c % n);
            c /= n;
        }
        t
    }
}

/// Row-major product monoid on carrier `|G| * |H|` with pair encoding
/// `i * |H| + j`. The result is a group (an abelian group) exactly when
/// both inputs are.
pub fn direct_product(g: &FiniteMonoid, h: &FiniteMonoid) -> FiniteMonoid {
    let hs = h.size();
    let size = g.size() * hs;
    let mul = (0..size)
        .map(|x| {
            let (x1, x2) = (x / hs, x % hs);
            (0..size)
                .map(|y| {
                    let (y1, y2) = (y / hs, y % hs);
                    g.mul(x1, y1) * hs + h.mul(x2, y2)
                })
                .collect()
        })
        .collect();
    FiniteMonoid {
        size,
        mul,
        identity: g.identity() * hs + h.identity(),
    }
}

// ---------------------------------------------------------------------------
// FiniteGroup / FiniteAbelianGroup
// ---------------------------------------------------------------------------

/// A finite group: a monoid together with its inverse table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteGroup {
    monoid: FiniteMonoid,
    inv: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(n={}, e={}, mul={:?})", self.size(), self.identity(), self.monoid.mul)
    }
}

impl FiniteGroup {
    pub fn new(monoid: FiniteMonoid) -> Result<Self> {
        let inv = monoid
            .inverses()
            .ok_or_else(|| Error::invalid("monoid has non-invertible elements"))?;
        Ok(FiniteGroup { monoid, inv })
    }

    pub fn from_parts(size: usize, mul: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        FiniteGroup::new(FiniteMonoid::new(size, mul, identity)?)
    }

    pub fn trivial() -> Self {
        FiniteGroup { monoid: FiniteMonoid::trivial(), inv: vec![0] }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.monoid.size
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.monoid.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.monoid.mul(x, y)
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.monoid.elements()
    }

    pub fn as_monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn is_abelian(&self) -> bool {
        self.monoid.is_commutative()
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.monoid.element_order(x).expect("group elements have finite order")
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let monoid = direct_product(&g.monoid, &h.monoid);
        let hs = h.size();
        let inv = (0..monoid.size())
            .map(|x| g.inv(x / hs) * hs + h.inv(x % hs))
            .collect();
        FiniteGroup { monoid, inv }
    }

    /// Transport of the structure along a carrier bijection. Relabelling
    /// preserves all laws, so nothing is re-validated.
    pub(crate) fn relabel(&self, enc: &[usize]) -> FiniteGroup {
        let n = self.size();
        debug_assert_eq!(enc.len(), n);
        let mut dec = vec![0usize; n];
        for (x, &y) in enc.iter().enumerate() {
            dec[y] = x;
        }
        let mul = (0..n)
            .map(|u| (0..n).map(|v| enc[self.mul(dec[u], dec[v])]).collect())
            .collect();
        let mut inv = vec![0usize; n];
        for x in 0..n {
            inv[enc[x]] = enc[self.inv(x)];
        }
        FiniteGroup {
            monoid: FiniteMonoid { size: n, mul, identity: enc[self.identity()] },
            inv,
        }
    }

    /// For tables known associative by construction (restrictions of
    /// componentwise products of validated groups); only closure and the
    /// identity/inverse laws are checked.
    pub(crate) fn from_parts_semichecked(
        size: usize,
        mul: Vec<Vec<usize>>,
        identity: usize,
    ) -> Result<Self> {
        if size == 0 || identity >= size {
            return Err(Error::invalid("bad carrier or identity index"));
        }
        if mul.len() != size
            || mul.iter().any(|r| r.len() != size || r.iter().any(|&v| v >= size))
        {
            return Err(Error::invalid("table is not closed on the carrier"));
        }
        let monoid = FiniteMonoid { size, mul, identity };
        for x in 0..size {
            if monoid.mul(identity, x) != x || monoid.mul(x, identity) != x {
                return Err(Error::invalid("identity law fails"));
            }
        }
        let inv = monoid
            .inverses()
            .ok_or_else(|| Error::invalid("monoid has non-invertible elements"))?;
        Ok(FiniteGroup { monoid, inv })
    }

    /// Every bijective self-hom, as carrier maps in lexicographic order.
    pub fn automorphisms(&self, budget: u64) -> Result<Vec<Vec<usize>>> {
        let homs = enumerate_homs(&self.monoid, &self.monoid, budget)?;
        Ok(homs
            .into_iter()
            .filter(|h| h.is_bijective())
            .map(|h| h.map)
            .collect())
    }
}

/// A finite abelian group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteAbelianGroup {
    group: FiniteGroup,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ab(n={}, mul={:?})", self.size(), self.group.monoid.mul)
    }
}

impl FiniteAbelianGroup {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::invalid("group is not abelian"));
        }
        Ok(FiniteAbelianGroup { group })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { group: FiniteGroup::trivial() }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.group.size()
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.group.identity()
    }

    /// Additive alias for the group operation.
    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.group.mul(x, y)
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.group.inv(x)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.group.elements()
    }

    pub fn as_group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn as_monoid(&self) -> &FiniteMonoid {
        self.group.as_monoid()
    }

    pub fn direct_product(g: &FiniteAbelianGroup, h: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        FiniteAbelianGroup {
            group: FiniteGroup::direct_product(&g.group, &h.group),
        }
    }
}

/// The additive group of integers mod `n`, identity at index 0.
pub fn make_cyclic(n: usize) -> Result<FiniteAbelianGroup> {
    if n == 0 {
        return Err(Error::invalid("cyclic group order must be positive"));
    }
    let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let inv = (0..n).map(|i| (n - i) % n).collect();
    Ok(FiniteAbelianGroup {
        group: FiniteGroup {
            monoid: FiniteMonoid { size: n, mul, identity: 0 },
            inv,
        },
    })
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

/// A set map between monoid carriers; use [`check_hom`] or
/// [`Hom::checked`] to verify that it is a homomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hom {
    pub src: FiniteMonoid,
    pub dst: FiniteMonoid,
    pub map: Vec<usize>,
}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({} -> {}, {:?})", self.src.size(), self.dst.size(), self.map)
    }
}

impl Hom {
    pub fn new(src: FiniteMonoid, dst: FiniteMonoid, map: Vec<usize>) -> Self {
        Hom { src, dst, map }
    }

    /// Construct and verify the homomorphism laws in one step.
    pub fn checked(src: FiniteMonoid, dst: FiniteMonoid, map: Vec<usize>) -> Result<Self> {
        let h = Hom { src, dst, map };
        if !check_hom(&h)? {
            return Err(Error::invalid("map is not a monoid homomorphism"));
        }
        Ok(h)
    }

    pub fn identity(m: &FiniteMonoid) -> Self {
        Hom {
            src: m.clone(),
            dst: m.clone(),
            map: (0..m.size()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_bijective(&self) -> bool {
        if self.src.size() != self.dst.size() {
            return false;
        }
        let mut seen = vec![false; self.dst.size()];
        for &v in &self.map {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// `g.compose(f)` is `g ∘ f`.
    pub fn compose(&self, f: &Hom) -> Result<Hom> {
        if f.dst != self.src {
            return Err(Error::invalid("hom composition endpoint mismatch"));
        }
        Ok(Hom {
            src: f.src.clone(),
            dst: self.dst.clone(),
            map: f.map.iter().map(|&x| self.map[x]).collect(),
        })
    }
}

/// True iff `h` preserves identity and multiplication over all pairs.
pub fn check_hom(h: &Hom) -> Result<bool> {
    if h.map.len() != h.src.size() {
        return Err(Error::invalid("hom table size does not match source carrier"));
    }
    if h.map.iter().any(|&v| v >= h.dst.size()) {
        return Err(Error::invalid("hom table entry out of range"));
    }
    if h.map[h.src.identity()] != h.dst.identity() {
        return Ok(false);
    }
    for x in h.src.elements() {
        for y in h.src.elements() {
            if h.map[h.src.mul(x, y)] != h.dst.mul(h.map[x], h.map[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All homomorphisms `src -> dst` in lexicographic order of their map
/// tables, found by depth-first search with forced-product propagation.
/// The search explores at most `budget` candidate assignments.
pub fn enumerate_homs(src: &FiniteMonoid, dst: &FiniteMonoid, budget: u64) -> Result<Vec<Hom>> {
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; src.size()];
    map[src.identity()] = dst.identity();
    let mut work: u64 = 0;
    hom_dfs(src, dst, &mut map, &mut out, &mut work, budget, &|_| true)?;
    Ok(out
        .into_iter()
        .map(|map| Hom { src: src.clone(), dst: dst.clone(), map })
        .collect())
}

/// DFS core shared by hom enumeration and isomorphism search. Branches on
/// the smallest unassigned element, propagating products whose factors are
/// already assigned; emits completed maps (filtered by `accept`) in
/// lexicographic order.
fn hom_dfs(
    src: &FiniteMonoid,
    dst: &FiniteMonoid,
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    work: &mut u64,
    budget: u64,
    accept: &dyn Fn(&[usize]) -> bool,
) -> Result<()> {
    // Propagate: any product of assigned elements forces its own image.
    // Returns the positions assigned here so the caller can undo them,
    // or None on conflict.
    fn propagate(
        src: &FiniteMonoid,
        dst: &FiniteMonoid,
        map: &mut Vec<usize>,
        seed: usize,
    ) -> Option<Vec<usize>> {
        let mut forced = Vec::new();
        let mut queue = vec![seed];
        while let Some(x) = queue.pop() {
            for y in src.elements() {
                if map[y] == usize::MAX {
                    continue;
                }
                for (p, v) in [
                    (src.mul(x, y), dst.mul(map[x], map[y])),
                    (src.mul(y, x), dst.mul(map[y], map[x])),
                ] {
                    if map[p] == usize::MAX {
                        map[p] = v;
                        forced.push(p);
                        queue.push(p);
                    } else if map[p] != v {
                        for &q in &forced {
                            map[q] = usize::MAX;
                        }
                        return None;
                    }
                }
            }
        }
        Some(forced)
    }

    let next = match map.iter().position(|&v| v == usize::MAX) {
        Some(i) => i,
        None => {
            if accept(map) {
                out.push(map.clone());
            }
            return Ok(());
        }
    };
    for v in dst.elements() {
        *work += 1;
        if *work > budget {
            return Err(Error::budget("enumerating homomorphisms", budget));
        }
        map[next] = v;
        if let Some(forced) = propagate(src, dst, map, next) {
            hom_dfs(src, dst, map, out, work, budget, accept)?;
            for q in forced {
                map[q] = usize::MAX;
            }
        }
        map[next] = usize::MAX;
    }
    Ok(())
}

/// Brute-force isomorphism search between groups, pruned by element-order
/// profiles. Carriers above 12 are rejected.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>> {
    const CAP: usize = 12;
    if g.size() > CAP || h.size() > CAP {
        return Err(Error::budget(
            format!("isomorphism search capped at carrier size {CAP}"),
            CAP as u64,
        ));
    }
    if g.size() != h.size() {
        return Ok(None);
    }
    let mut g_orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let h_orders: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    {
        let mut a = g_orders.clone();
        let mut b = h_orders.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Ok(None);
        }
    }
    g_orders[g.identity()] = 1; // explicit: identity maps to identity via order 1

    let mut map = vec![usize::MAX; g.size()];
    map[g.identity()] = h.identity();
    let mut out = Vec::new();
    let mut work = 0u64;
    // order-profile pruning folded into the acceptance predicate is too
    // late; instead restrict candidate images during DFS by wrapping the
    // destination in a per-position filter via a custom search here.
    iso_dfs(g, h, &g_orders, &h_orders, &mut map, &mut out, &mut work)?;
    Ok(out.into_iter().next())
}

fn iso_dfs(
    g: &FiniteGroup,
    h: &FiniteGroup,
    g_orders: &[usize],
    h_orders: &[usize],
    map: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    work: &mut u64,
) -> Result<()> {
    if !out.is_empty() {
        return Ok(());
    }
    let next = match map.iter().position(|&v| v == usize::MAX) {
        Some(i) => i,
        None => {
            out.push(map.clone());
            return Ok(());
        }
    };
    'candidates: for v in h.elements() {
        if h_orders[v] != g_orders[next] || map.iter().any(|&m| m == v) {
            continue;
        }
        *work += 1;
        if *work > DEFAULT_BUDGET {
            return Err(Error::budget("isomorphism search", DEFAULT_BUDGET));
        }
        map[next] = v;
        // partial homomorphism check against everything assigned so far
        for a in g.elements() {
            if map[a] == usize::MAX {
                continue;
            }
            for (p, q) in [
                (g.mul(a, next), h.mul(map[a], v)),
                (g.mul(next, a), h.mul(v, map[a])),
            ] {
                if map[p] != usize::MAX && map[p] != q {
                    map[next] = usize::MAX;
                    continue 'candidates;
                }
                if map[p] == usize::MAX && map.iter().enumerate().any(|(i, &m)| m == q && i != p) {
                    // q already used by a different element
                    map[next] = usize::MAX;
                    continue 'candidates;
                }
            }
        }
        iso_dfs(g, h, g_orders, h_orders, map, out, work)?;
        map[next] = usize::MAX;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// C-modules
// ---------------------------------------------------------------------------

/// A finite abelian group `B` with an action `xi` of a finite group `C`
/// by automorphisms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CModule {
    c: FiniteGroup,
    b: FiniteAbelianGroup,
    xi: Vec<Vec<usize>>,
}

impl fmt::Debug for CModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CModule(|C|={}, |B|={}, xi={:?})", self.c.size(), self.b.size(), self.xi)
    }
}

impl CModule {
    pub fn new(c: FiniteGroup, b: FiniteAbelianGroup, xi: Vec<Vec<usize>>) -> Result<Self> {
        if xi.len() != c.size() || xi.iter().any(|row| row.len() != b.size()) {
            return Err(Error::invalid("action table must be |C| x |B|"));
        }
        if xi.iter().any(|row| row.iter().any(|&v| v >= b.size())) {
            return Err(Error::invalid("action table entry out of range"));
        }
        let m = CModule { c, b, xi };
        for x in m.b.elements() {
            if m.act(m.c.identity(), x) != x {
                return Err(Error::invalid("identity of C must act trivially"));
            }
        }
        for c1 in m.c.elements() {
            for c2 in m.c.elements() {
                for x in m.b.elements() {
                    if m.act(m.c.mul(c1, c2), x) != m.act(c1, m.act(c2, x)) {
                        return Err(Error::invalid("action is not multiplicative in C"));
                    }
                }
            }
        }
        for c1 in m.c.elements() {
            let mut seen = vec![false; m.b.size()];
            for x in m.b.elements() {
                seen[m.act(c1, x)] = true;
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::invalid("each group element must act bijectively"));
            }
            for x in m.b.elements() {
                for y in m.b.elements() {
                    if m.act(c1, m.b.add(x, y)) != m.b.add(m.act(c1, x), m.act(c1, y)) {
                        return Err(Error::invalid("each group element must act additively"));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn trivial_action(c: FiniteGroup, b: FiniteAbelianGroup) -> Self {
        let xi = (0..c.size()).map(|_| (0..b.size()).collect()).collect();
        CModule { c, b, xi }
    }

    /// The zero module over `C` (terminal object of the module category).
    pub fn zero(c: FiniteGroup) -> Self {
        CModule::trivial_action(c, FiniteAbelianGroup::trivial())
    }

    #[inline]
    pub fn act(&self, c: usize, b: usize) -> usize {
        self.xi[c][b]
    }

    pub fn c(&self) -> &FiniteGroup {
        &self.c
    }

    pub fn b(&self) -> &FiniteAbelianGroup {
        &self.b
    }

    pub fn xi(&self) -> &Vec<Vec<usize>> {
        &self.xi
    }

    /// Product module `B1 x B2` with the diagonal `C`-action; pair encoding
    /// `b1 * |B2| + b2`.
    pub fn product(&self, other: &CModule) -> Result<CModule> {
        if self.c != other.c {
            return Err(Error::invalid("module product requires the same acting group"));
        }
        let b = FiniteAbelianGroup::direct_product(&self.b, &other.b);
        let n2 = other.b.size();
        let xi = (0..self.c.size())
            .map(|c| {
                (0..b.size())
                    .map(|x| self.act(c, x / n2) * n2 + other.act(c, x % n2))
                    .collect()
            })
            .collect();
        Ok(CModule { c: self.c.clone(), b, xi })
    }

    /// Every action of `c` on `b`: homomorphisms from `c` into the
    /// automorphism group of `b`, materialized as action tables.
    pub fn enumerate_actions(
        c: &FiniteGroup,
        b: &FiniteAbelianGroup,
        budget: u64,
    ) -> Result<Vec<CModule>> {
        let autos = b.as_group().automorphisms(budget)?;
        // composition table of Aut(B): index into `autos`
        let n = autos.len();
        let mut index = std::collections::BTreeMap::new();
        for (i, a) in autos.iter().enumerate() {
            index.insert(a.clone(), i);
        }
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|f| {
                (0..n)
                    .map(|g| {
                        let comp: Vec<usize> =
                            (0..b.size()).map(|x| autos[f][autos[g][x]]).collect();
                        index[&comp]
                    })
                    .collect()
            })
            .collect();
        let id: Vec<usize> = (0..b.size()).collect();
        let aut_monoid = FiniteMonoid { size: n, mul, identity: index[&id] };
        let homs = enumerate_homs(c.as_monoid(), &aut_monoid, budget)?;
        homs.into_iter()
            .map(|h| {
                let xi = (0..c.size()).map(|ci| autos[h.apply(ci)].clone()).collect();
                CModule::new(c.clone(), b.clone(), xi)
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Semidirect products
// ---------------------------------------------------------------------------

/// `B x| C` with its kernel injection and quotient projection.
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// `b -> (b, e_C)`
    pub injection: Hom,
    /// `(b, c) -> c`
    pub projection: Hom,
}

/// The semidirect product `B x|_xi C` on carrier `|B| * |C|` with pair
/// encoding `b * |C| + c` and law `(b,c)(b',c') = (b + xi(c,b'), cc')`.
pub fn semidirect_product(module: &CModule) -> SemidirectProduct {
    let b = module.b();
    let c = module.c();
    let cs = c.size();
    let size = b.size() * cs;
    let mul: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            let (xb, xc) = (x / cs, x % cs);
            (0..size)
                .map(|y| {
                    let (yb, yc) = (y / cs, y % cs);
                    b.add(xb, module.act(xc, yb)) * cs + c.mul(xc, yc)
                })
                .collect()
        })
        .collect();
    let identity = b.zero() * cs + c.identity();
    let monoid = FiniteMonoid { size, mul, identity };
    let group = FiniteGroup::new(monoid).expect("semidirect product of groups is a group");
    let injection = Hom::new(
        b.as_monoid().clone(),
        group.as_monoid().clone(),
        (0..b.size()).map(|x| x * cs + c.identity()).collect(),
    );
    let projection = Hom::new(
        group.as_monoid().clone(),
        c.as_monoid().clone(),
        (0..size).map(|x| x % cs).collect(),
    );
    SemidirectProduct { group, injection, projection }
}

// ---------------------------------------------------------------------------
// Quotients by generated relations
// ---------------------------------------------------------------------------

/// A partition of `{0..n}` given by its class-representative table; the
/// representative of each class is its minimal member, so `class_of` is
/// idempotent.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({:?})", self.class_of)
    }
}

impl Partition {
    pub fn size(&self) -> usize {
        self.class_of.len()
    }

    #[inline]
    pub fn rep(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Representatives in increasing order.
    pub fn reps(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self
            .class_of
            .iter()
            .enumerate()
            .filter(|&(i, &c)| i == c)
            .map(|(i, _)| i)
            .collect();
        r.sort_unstable();
        r
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().enumerate().filter(|&(i, &c)| i == c).count()
    }

    /// Members of the class of `x`.
    pub fn class_members(&self, x: usize) -> Vec<usize> {
        let r = self.rep(x);
        (0..self.size()).filter(|&y| self.rep(y) == r).collect()
    }
}

/// The finest equivalence relation on `{0..n}` containing all given
/// pairs, computed by union-find with path compression; representatives
/// are minimal indices, so the result does not depend on pair order.
pub fn quotient_by_generated_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Partition> {
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::invalid(format!("pair ({a},{b}) out of range for carrier {n}")));
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        // keep the minimal index as root
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => parent[rb] = ra,
            std::cmp::Ordering::Greater => parent[ra] = rb,
            std::cmp::Ordering::Equal => {}
        }
    }
    let class_of = (0..n).map(|x| find(&mut parent, x)).collect();
    Ok(Partition { class_of })
}

// ---------------------------------------------------------------------------
// Abelian invariants
// ---------------------------------------------------------------------------

/// Invariant factors of a finite abelian group, ascending with each
/// dividing the next. A cyclic subgroup generated by an element of maximal
/// order splits off as a direct summand; recurse on the quotient.
pub fn abelian_invariants(g: &FiniteAbelianGroup) -> Vec<usize> {
    fn go(g: &FiniteAbelianGroup) -> Vec<usize> {
        if g.size() == 1 {
            return Vec::new();
        }
        let grp = g.as_group();
        let x = grp
            .elements()
            .max_by_key(|&x| grp.element_order(x))
            .expect("nonempty carrier");
        let d = grp.element_order(x);
        // cosets of <x>, labelled by minimal member
        let subgroup: Vec<usize> = (0..d).map(|k| grp.as_monoid().pow(x, k)).collect();
        let mut coset_rep = vec![usize::MAX; g.size()];
        for a in grp.elements() {
            let m = subgroup.iter().map(|&s| grp.mul(a, s)).min().unwrap();
            coset_rep[a] = m;
        }
        let mut reps: Vec<usize> = coset_rep.clone();
        reps.sort_unstable();
        reps.dedup();
        let idx_of = |r: usize| reps.binary_search(&r).unwrap();
        let mul = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| idx_of(coset_rep[grp.mul(a, b)])).collect())
            .collect();
        let quotient = FiniteAbelianGroup::new(
            FiniteGroup::from_parts(reps.len(), mul, idx_of(coset_rep[grp.identity()]))
                .expect("quotient of an abelian group is a group"),
        )
        .expect("quotient of an abelian group is abelian");
        let mut inv = go(&quotient);
        inv.push(d);
        inv
    }
    go(g)
}

// ---------------------------------------------------------------------------
// JSON presentation
// ---------------------------------------------------------------------------

/// Wire format shared by monoids and groups:
/// `{"size": n, "mul": [[...]], "identity": i}` with optional `"inv"`.
#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    size: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    inv: Option<Vec<usize>>,
}

impl Serialize for FiniteMonoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson {
            size: self.size,
            mul: self.mul.clone(),
            identity: self.identity,
            inv: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMonoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        FiniteMonoid::new(raw.size, raw.mul, raw.identity).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson {
            size: self.size(),
            mul: self.monoid.mul.clone(),
            identity: self.identity(),
            inv: Some(self.inv.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        // a stored inverse table is re-derived and checked either way
        let g = FiniteGroup::from_parts(raw.size, raw.mul, raw.identity)
            .map_err(serde::de::Error::custom)?;
        if let Some(inv) = raw.inv {
            if inv != g.inv {
                return Err(serde::de::Error::custom("inverse table does not match"));
            }
        }
        Ok(g)
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.group.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FiniteAbelianGroup::new(FiniteGroup::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct CModuleJson {
    #[serde(rename = "C")]
    c: FiniteGroup,
    #[serde(rename = "B")]
    b: FiniteAbelianGroup,
    xi: Vec<Vec<usize>>,
}

impl Serialize for CModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CModuleJson { c: self.c.clone(), b: self.b.clone(), xi: self.xi.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CModuleJson::deserialize(d)?;
        CModule::new(raw.c, raw.b, raw.xi).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
