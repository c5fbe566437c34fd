//! Abelian extensions of a fixed finite group `C`, fibred over the
//! category of `C`-modules.
//!
//! Every extension is kept on the canonical carrier `B x C` with pair
//! encoding `b * |C| + c`, kernel injection `b -> (b, e_C)` and projection
//! `(b, c) -> c`; arbitrary-carrier input is re-encoded through a chosen
//! set-section of the projection. Cocartesian liftings are pushforwards:
//! quotients of a semidirect product by the relation identifying the two
//! images of the kernel. The tensor of two extensions over the same module
//! is pushforward-of-addition after pullback-over-`C`, and `pi0` / `pi1`
//! of a fibre are computed from these categorical operations alone (the
//! cocycle arithmetic lives in [`crate::cohom`] as an independent oracle).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fib::FibrationOracle;
use crate::finalg::{
    check_hom, enumerate_homs, quotient_by_generated_relation, CModule, FiniteAbelianGroup,
    FiniteGroup, Hom,
};

// ---------------------------------------------------------------------------
// Extensions on the canonical carrier
// ---------------------------------------------------------------------------

/// A concrete abelian extension `B -> E -> C` inducing exactly the action
/// of its module, stored on the canonical carrier `B x C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Extension {
    module: CModule,
    e: FiniteGroup,
    k: Hom,
    f: Hom,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ext(|B|={}, |C|={}, cocycle={:?})",
            self.module.b().size(),
            self.module.c().size(),
            self.factor_set()
        )
    }
}

impl Extension {
    /// Core validated constructor: a multiplication table on the canonical
    /// carrier that makes the canonical injection and projection an exact
    /// sequence inducing exactly the module's action.
    pub fn from_canonical_table(module: CModule, mul: Vec<Vec<usize>>) -> Result<Extension> {
        let b = module.b();
        let c = module.c();
        let identity = b.zero() * c.size() + c.identity();
        let e = FiniteGroup::from_parts(b.size() * c.size(), mul, identity)?;
        Extension::assemble(module, e)
    }

    /// Assembly of a law-checked group on the canonical carrier into an
    /// extension: validates the canonical injection and projection and the
    /// induced action, without re-deriving the group laws.
    fn assemble(module: CModule, e: FiniteGroup) -> Result<Extension> {
        let b = module.b();
        let c = module.c();
        let cs = c.size();
        let size = b.size() * cs;
        if e.size() != size || e.identity() != b.zero() * cs + c.identity() {
            return Err(Error::invalid("group does not sit on the canonical carrier"));
        }
        let k = Hom::checked(
            b.as_monoid().clone(),
            e.as_monoid().clone(),
            (0..b.size()).map(|x| x * cs + c.identity()).collect(),
        )?;
        let f = Hom::checked(
            e.as_monoid().clone(),
            c.as_monoid().clone(),
            (0..size).map(|x| x % cs).collect(),
        )?;
        // exactness is structural here (ker f = im k = {(b, e_C)}); the
        // induced action still has to match the module
        for ci in c.elements() {
            for bx in b.elements() {
                for pre in 0..size {
                    if pre % cs != ci {
                        continue;
                    }
                    let conj = e.mul(e.mul(pre, k.apply(bx)), e.inv(pre));
                    if conj != k.apply(module.act(ci, bx)) {
                        return Err(Error::invalid(format!(
                            "conjugation by preimages of {ci} does not induce the module action at kernel element {bx}"
                        )));
                    }
                }
            }
        }
        Ok(Extension { module, e, k, f })
    }

    /// Builds the extension with multiplication
    /// `(b, c)(b', c') = (b + xi(c, b') + t(c, c'), cc')` from a normalized
    /// kernel-valued table `t`. Validation goes through the group laws, not
    /// the cocycle identity.
    pub fn from_normalized_table(module: CModule, t: &[Vec<usize>]) -> Result<Extension> {
        let b = module.b();
        let c = module.c();
        let cs = c.size();
        if t.len() != cs || t.iter().any(|row| row.len() != cs) {
            return Err(Error::invalid("factor table must be |C| x |C|"));
        }
        if t.iter().any(|row| row.iter().any(|&v| v >= b.size())) {
            return Err(Error::invalid("factor table entry out of range"));
        }
        for ci in c.elements() {
            if t[c.identity()][ci] != b.zero() || t[ci][c.identity()] != b.zero() {
                return Err(Error::invalid("factor table must be normalized"));
            }
        }
        let size = b.size() * cs;
        let mul = (0..size)
            .map(|x| {
                let (xb, xc) = (x / cs, x % cs);
                (0..size)
                    .map(|y| {
                        let (yb, yc) = (y / cs, y % cs);
                        let bpart = b.add(b.add(xb, module.act(xc, yb)), t[xc][yc]);
                        bpart * cs + c.mul(xc, yc)
                    })
                    .collect()
            })
            .collect();
        Extension::from_canonical_table(module, mul)
    }

    /// The split extension `B x| C` of the module.
    pub fn split(module: &CModule) -> Extension {
        let zero = vec![vec![module.b().zero(); module.c().size()]; module.c().size()];
        Extension::from_normalized_table(module.clone(), &zero)
            .expect("the split extension always exists")
    }

    /// Re-encodes an exact sequence on an arbitrary carrier onto the
    /// canonical one, returning the carrier bijection as well.
    pub fn from_raw(
        c: &FiniteGroup,
        b: &FiniteAbelianGroup,
        e_raw: &FiniteGroup,
        k: &Hom,
        f: &Hom,
    ) -> Result<(Extension, Vec<usize>)> {
        let module = induced_action(c, b, e_raw, k, f)?;
        let cs = c.size();
        // section of f: identity over e_C, minimal-index preimage elsewhere
        let mut section = vec![usize::MAX; cs];
        section[c.identity()] = e_raw.identity();
        for x in 0..e_raw.size() {
            let ci = f.apply(x);
            if ci != c.identity() && section[ci] == usize::MAX {
                section[ci] = x;
            }
        }
        let mut k_inv = vec![usize::MAX; e_raw.size()];
        for bx in b.elements() {
            k_inv[k.apply(bx)] = bx;
        }
        let mut enc = vec![usize::MAX; e_raw.size()];
        for x in 0..e_raw.size() {
            let ci = f.apply(x);
            let kb = e_raw.mul(x, e_raw.inv(section[ci]));
            let bx = k_inv[kb];
            if bx == usize::MAX {
                return Err(Error::invalid("element does not factor through the kernel section"));
            }
            enc[x] = bx * cs + ci;
        }
        let ext = Extension::assemble(module, e_raw.relabel(&enc))?;
        Ok((ext, enc))
    }

    pub fn module(&self) -> &CModule {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.e
    }

    pub fn kernel_hom(&self) -> &Hom {
        &self.k
    }

    pub fn projection_hom(&self) -> &Hom {
        &self.f
    }

    pub fn size(&self) -> usize {
        self.e.size()
    }

    /// Reads the normalized factor table back off the multiplication:
    /// `t(c, c')` is the kernel part of `(0, c)(0, c')`.
    pub fn factor_set(&self) -> Vec<Vec<usize>> {
        let cs = self.module.c().size();
        let zero = self.module.b().zero();
        (0..cs)
            .map(|c1| {
                (0..cs)
                    .map(|c2| self.e.mul(zero * cs + c1, zero * cs + c2) / cs)
                    .collect()
            })
            .collect()
    }
}

/// The `C`-module induced by an exact sequence: `xi(c, b)` is read off by
/// conjugating `k(b)` by any `f`-preimage of `c`; independence of the
/// choice of preimage is verified.
pub fn induced_action(
    c: &FiniteGroup,
    b: &FiniteAbelianGroup,
    e_raw: &FiniteGroup,
    k: &Hom,
    f: &Hom,
) -> Result<CModule> {
    if k.src != *b.as_monoid() || k.dst != *e_raw.as_monoid() {
        return Err(Error::invalid("kernel map must go from B to E"));
    }
    if f.src != *e_raw.as_monoid() || f.dst != *c.as_monoid() {
        return Err(Error::invalid("projection must go from E to C"));
    }
    if !check_hom(k)? || !check_hom(f)? {
        return Err(Error::invalid("kernel and projection must be homomorphisms"));
    }
    if !{
        let mut seen = vec![false; e_raw.size()];
        k.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    } {
        return Err(Error::invalid("kernel map must be injective"));
    }
    {
        let mut hit = vec![false; c.size()];
        for x in 0..e_raw.size() {
            hit[f.apply(x)] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(Error::invalid("projection must be surjective"));
        }
    }
    // exactness: image of k = kernel of f
    let mut in_image = vec![false; e_raw.size()];
    for bx in b.elements() {
        in_image[k.apply(bx)] = true;
    }
    for x in 0..e_raw.size() {
        if in_image[x] != (f.apply(x) == c.identity()) {
            return Err(Error::invalid("sequence is not exact: image of k differs from kernel of f"));
        }
    }
    let mut k_inv = vec![usize::MAX; e_raw.size()];
    for bx in b.elements() {
        k_inv[k.apply(bx)] = bx;
    }
    let mut xi = vec![vec![usize::MAX; b.size()]; c.size()];
    for x in 0..e_raw.size() {
        let ci = f.apply(x);
        for bx in b.elements() {
            let conj = e_raw.mul(e_raw.mul(x, k.apply(bx)), e_raw.inv(x));
            let img = k_inv[conj];
            if img == usize::MAX {
                return Err(Error::invalid("kernel is not closed under conjugation"));
            }
            if xi[ci][bx] == usize::MAX {
                xi[ci][bx] = img;
            } else if xi[ci][bx] != img {
                return Err(Error::invalid(
                    "induced action depends on the choice of preimage (malformed input)",
                ));
            }
        }
    }
    CModule::new(c.clone(), b.clone(), xi)
}

// ---------------------------------------------------------------------------
// Module morphisms (base arrows of the fibration)
// ---------------------------------------------------------------------------

/// An equivariant homomorphism between modules over the same group `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    src: CModule,
    dst: CModule,
    map: Vec<usize>,
}

impl fmt::Debug for ModuleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModMor({} -> {}, {:?})",
            self.src.b().size(),
            self.dst.b().size(),
            self.map
        )
    }
}

impl ModuleMorphism {
    pub fn new(src: CModule, dst: CModule, map: Vec<usize>) -> Result<Self> {
        if src.c() != dst.c() {
            return Err(Error::invalid("module morphism requires the same acting group"));
        }
        let h = Hom::new(src.b().as_monoid().clone(), dst.b().as_monoid().clone(), map);
        if !check_hom(&h)? {
            return Err(Error::invalid("module morphism must be a group homomorphism"));
        }
        let map = h.map;
        for c in src.c().elements() {
            for b in src.b().elements() {
                if map[src.act(c, b)] != dst.act(c, map[b]) {
                    return Err(Error::invalid("module morphism must be equivariant"));
                }
            }
        }
        Ok(ModuleMorphism { src, dst, map })
    }

    fn new_unchecked(src: CModule, dst: CModule, map: Vec<usize>) -> Self {
        ModuleMorphism { src, dst, map }
    }

    pub fn identity(m: &CModule) -> Self {
        ModuleMorphism::new_unchecked(m.clone(), m.clone(), (0..m.b().size()).collect())
    }

    pub fn src(&self) -> &CModule {
        &self.src
    }

    pub fn dst(&self) -> &CModule {
        &self.dst
    }

    #[inline]
    pub fn apply(&self, b: usize) -> usize {
        self.map[b]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn compose(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if other.dst != self.src {
            return Err(Error::invalid("module morphism composition endpoint mismatch"));
        }
        Ok(ModuleMorphism::new_unchecked(
            other.src.clone(),
            self.dst.clone(),
            other.map.iter().map(|&x| self.map[x]).collect(),
        ))
    }

    /// All equivariant homomorphisms `src -> dst`.
    pub fn enumerate(src: &CModule, dst: &CModule, budget: u64) -> Result<Vec<ModuleMorphism>> {
        if src.c() != dst.c() {
            return Err(Error::invalid("module homs require the same acting group"));
        }
        let homs = enumerate_homs(src.b().as_monoid(), dst.b().as_monoid(), budget)?;
        Ok(homs
            .into_iter()
            .filter(|h| {
                src.c().elements().all(|c| {
                    src.b()
                        .elements()
                        .all(|b| h.map[src.act(c, b)] == dst.act(c, h.map[b]))
                })
            })
            .map(|h| ModuleMorphism::new_unchecked(src.clone(), dst.clone(), h.map))
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Extension morphisms (total arrows)
// ---------------------------------------------------------------------------

/// A morphism of extensions: a kernel map `phi` and a carrier map `psi`
/// making both squares commute over the identity of `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtMorphism {
    src: Extension,
    dst: Extension,
    phi: Vec<usize>,
    psi: Vec<usize>,
}

impl fmt::Debug for ExtMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtMor(phi={:?}, psi={:?})", self.phi, self.psi)
    }
}

impl ExtMorphism {
    pub fn new(src: Extension, dst: Extension, phi: Vec<usize>, psi: Vec<usize>) -> Result<Self> {
        let phi_m = ModuleMorphism::new(src.module.clone(), dst.module.clone(), phi)?;
        let psi_h = Hom::new(src.e.as_monoid().clone(), dst.e.as_monoid().clone(), psi);
        if !check_hom(&psi_h)? {
            return Err(Error::invalid("psi must be a group homomorphism"));
        }
        let (phi, psi) = (phi_m.map, psi_h.map);
        for b in src.module.b().elements() {
            if psi[src.k.apply(b)] != dst.k.apply(phi[b]) {
                return Err(Error::invalid("kernel square does not commute"));
            }
        }
        for x in 0..src.e.size() {
            if dst.f.apply(psi[x]) != src.f.apply(x) {
                return Err(Error::invalid("projection square does not commute"));
            }
        }
        Ok(ExtMorphism { src, dst, phi, psi })
    }

    pub fn identity(e: &Extension) -> Self {
        ExtMorphism {
            src: e.clone(),
            dst: e.clone(),
            phi: (0..e.module.b().size()).collect(),
            psi: (0..e.e.size()).collect(),
        }
    }

    pub fn src(&self) -> &Extension {
        &self.src
    }

    pub fn dst(&self) -> &Extension {
        &self.dst
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn psi(&self) -> &[usize] {
        &self.psi
    }

    pub fn compose(&self, other: &ExtMorphism) -> Result<ExtMorphism> {
        if other.dst != self.src {
            return Err(Error::invalid("extension morphism composition endpoint mismatch"));
        }
        Ok(ExtMorphism {
            src: other.src.clone(),
            dst: self.dst.clone(),
            phi: other.phi.iter().map(|&x| self.phi[x]).collect(),
            psi: other.psi.iter().map(|&x| self.psi[x]).collect(),
        })
    }

    pub fn is_vertical(&self) -> bool {
        self.src.module == self.dst.module
            && self.phi.iter().enumerate().all(|(i, &v)| i == v)
    }
}

// ---------------------------------------------------------------------------
// Pushforward (the cocartesian lifting)
// ---------------------------------------------------------------------------

/// Pushforward of an extension along a module morphism: the quotient of
/// the semidirect-style product `B' x E` (with `E` acting on `B'` through
/// the projection) by the relation generated by
/// `(b' + phi(b), x) ~ (b', k(b) x)`, re-encoded onto the canonical
/// carrier. The returned morphism is the cocartesian lifting.
pub fn pushforward(phi: &ModuleMorphism, ext: &Extension) -> Result<(ExtMorphism, Extension)> {
    if ext.module != *phi.src() {
        return Err(Error::invalid("pushforward: extension does not lie over the morphism source"));
    }
    let bp = phi.dst().b();
    let e = &ext.e;
    let n = bp.size() * e.size();
    let idx = |b: usize, x: usize| b * e.size() + x;

    let mut pairs = Vec::new();
    for b in ext.module.b().elements() {
        for bp_el in bp.elements() {
            for x in 0..e.size() {
                pairs.push((idx(bp.add(bp_el, phi.apply(b)), x), idx(bp_el, e.mul(ext.k.apply(b), x))));
            }
        }
    }
    let partition = quotient_by_generated_relation(n, &pairs)?;

    // law on B' x E before quotienting: (b1, x1)(b2, x2) = (b1 + xi'(f(x1), b2), x1 x2)
    let raw_mul = |u: usize, v: usize| -> usize {
        let (b1, x1) = (u / e.size(), u % e.size());
        let (b2, x2) = (v / e.size(), v % e.size());
        idx(bp.add(b1, phi.dst().act(ext.f.apply(x1), b2)), e.mul(x1, x2))
    };

    let reps = partition.reps();
    let rep_index: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();

    // the induced law must not depend on class representatives
    for u in 0..n {
        for v in 0..n {
            if partition.rep(raw_mul(u, v))
                != partition.rep(raw_mul(partition.rep(u), partition.rep(v)))
            {
                return Err(Error::inconsistency(
                    "pushforward law is not well defined on classes",
                ));
            }
        }
    }

    let mul: Vec<Vec<usize>> = reps
        .iter()
        .map(|&u| reps.iter().map(|&v| rep_index[&partition.rep(raw_mul(u, v))]).collect())
        .collect();
    let identity = rep_index[&partition.rep(idx(bp.zero(), e.identity()))];
    let q_group = FiniteGroup::from_parts(reps.len(), mul, identity)?;

    let k_raw = Hom::new(
        bp.as_monoid().clone(),
        q_group.as_monoid().clone(),
        bp.elements().map(|b| rep_index[&partition.rep(idx(b, e.identity()))]).collect(),
    );
    // f factors through the quotient because the relation preserves fibres
    let f_raw = Hom::new(
        q_group.as_monoid().clone(),
        ext.module.c().as_monoid().clone(),
        reps.iter().map(|&r| ext.f.apply(r % e.size())).collect(),
    );
    for u in 0..n {
        if ext.f.apply(u % e.size()) != ext.f.apply(partition.rep(u) % e.size()) {
            return Err(Error::inconsistency("projection is not constant on classes"));
        }
    }

    let (result, enc) = Extension::from_raw(ext.module.c(), bp, &q_group, &k_raw, &f_raw)?;
    if result.module != *phi.dst() {
        return Err(Error::inconsistency(
            "pushforward induced a different action than the morphism target",
        ));
    }
    let psi: Vec<usize> = (0..e.size())
        .map(|x| enc[rep_index[&partition.rep(idx(bp.zero(), x))]])
        .collect();
    let morphism = ExtMorphism::new(ext.clone(), result.clone(), phi.map().to_vec(), psi)?;
    Ok((morphism, result))
}

// ---------------------------------------------------------------------------
// Pullback products
// ---------------------------------------------------------------------------

/// The product of two extensions of the same `C` in the total category:
/// the pullback `{(x, x') : f(x) = f'(x')}` with kernel `B x B'`, lying
/// over the product module. Returns the canonical projections and the
/// pair-encoding table `(x, x') -> canonical index` used to build
/// pairings.
pub struct PullbackProduct {
    pub product: Extension,
    pub proj1: ExtMorphism,
    pub proj2: ExtMorphism,
    pair_to_canonical: BTreeMap<(usize, usize), usize>,
}

impl PullbackProduct {
    pub fn encode_pair(&self, x1: usize, x2: usize) -> Result<usize> {
        self.pair_to_canonical
            .get(&(x1, x2))
            .copied()
            .ok_or_else(|| Error::inconsistency("pair is not in the pullback carrier"))
    }
}

pub fn product_over_c(e1: &Extension, e2: &Extension) -> Result<PullbackProduct> {
    if e1.module.c() != e2.module.c() {
        return Err(Error::invalid("pullback requires extensions of the same group"));
    }
    let module_p = e1.module.product(&e2.module)?;
    let carrier: Vec<(usize, usize)> = (0..e1.e.size())
        .flat_map(|x1| (0..e2.e.size()).map(move |x2| (x1, x2)))
        .filter(|&(x1, x2)| e1.f.apply(x1) == e2.f.apply(x2))
        .collect();
    let pos: BTreeMap<(usize, usize), usize> =
        carrier.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mul = carrier
        .iter()
        .map(|&(x1, x2)| {
            carrier
                .iter()
                .map(|&(y1, y2)| pos[&(e1.e.mul(x1, y1), e2.e.mul(x2, y2))])
                .collect()
        })
        .collect();
    let identity = pos[&(e1.e.identity(), e2.e.identity())];
    // componentwise multiplication on a closed subset of a product of
    // validated groups is associative by construction
    let p_group = FiniteGroup::from_parts_semichecked(carrier.len(), mul, identity)?;
    let b2s = e2.module.b().size();
    let k_raw = Hom::new(
        module_p.b().as_monoid().clone(),
        p_group.as_monoid().clone(),
        (0..module_p.b().size())
            .map(|b| pos[&(e1.k.apply(b / b2s), e2.k.apply(b % b2s))])
            .collect(),
    );
    let f_raw = Hom::new(
        p_group.as_monoid().clone(),
        e1.module.c().as_monoid().clone(),
        carrier.iter().map(|&(x1, _)| e1.f.apply(x1)).collect(),
    );
    let (product, enc) = Extension::from_raw(e1.module.c(), module_p.b(), &p_group, &k_raw, &f_raw)?;
    if product.module != module_p {
        return Err(Error::inconsistency("pullback induced an unexpected action"));
    }

    let pair_to_canonical: BTreeMap<(usize, usize), usize> =
        carrier.iter().enumerate().map(|(i, &p)| (p, enc[i])).collect();
    let mut dec = vec![(0usize, 0usize); carrier.len()];
    for (i, &p) in carrier.iter().enumerate() {
        dec[enc[i]] = p;
    }
    let proj1 = ExtMorphism::new(
        product.clone(),
        e1.clone(),
        (0..module_p.b().size()).map(|b| b / b2s).collect(),
        dec.iter().map(|&(x1, _)| x1).collect(),
    )?;
    let proj2 = ExtMorphism::new(
        product.clone(),
        e2.clone(),
        (0..module_p.b().size()).map(|b| b % b2s).collect(),
        dec.iter().map(|&(_, x2)| x2).collect(),
    )?;
    Ok(PullbackProduct { product, proj1, proj2, pair_to_canonical })
}

// ---------------------------------------------------------------------------
// Baer tensor
// ---------------------------------------------------------------------------

/// Tensor of two extensions over the same module: pullback over `C`
/// followed by pushforward along the addition of `B`. On isomorphism
/// classes this is the Baer sum.
pub fn baer_tensor(e1: &Extension, e2: &Extension) -> Result<Extension> {
    if e1.module != e2.module {
        return Err(Error::invalid("tensor requires extensions over the same module"));
    }
    let pb = product_over_c(e1, e2)?;
    let module = &e1.module;
    let prod_module = pb.product.module().clone();
    let bs = module.b().size();
    let add = ModuleMorphism::new(
        prod_module,
        module.clone(),
        (0..bs * bs).map(|p| module.b().add(p / bs, p % bs)).collect(),
    )?;
    Ok(pushforward(&add, &pb.product)?.1)
}

// ---------------------------------------------------------------------------
// Vertical isomorphism and fibre enumeration
// ---------------------------------------------------------------------------

/// Iterates all 1-cochains `g : C -> B` in lexicographic order.
fn cochains(c: &FiniteGroup, b: &FiniteAbelianGroup) -> impl Iterator<Item = Vec<usize>> {
    let cs = c.size();
    let bs = b.size();
    let total = (bs as u128).pow(cs as u32);
    (0..total).map(move |mut code| {
        let mut g = vec![0usize; cs];
        for slot in g.iter_mut().rev() {
            *slot = (code % bs as u128) as usize;
            code /= bs as u128;
        }
        g
    })
}

/// Searches vertical isomorphisms `psi(b, c) = (b + g(c), c)` over all
/// 1-cochains `g` in lexicographic order; any vertical morphism of
/// extensions on the canonical carrier has this shape, and the candidate
/// is validated in full before being returned.
pub fn vertical_isomorphic(e1: &Extension, e2: &Extension) -> Result<Option<ExtMorphism>> {
    if e1.module != e2.module {
        return Err(Error::invalid("vertical comparison requires the same module"));
    }
    let b = e1.module.b();
    let c = e1.module.c();
    let cs = c.size();
    for g in cochains(c, b) {
        let psi: Vec<usize> =
            (0..e1.e.size()).map(|x| b.add(x / cs, g[x % cs]) * cs + (x % cs)).collect();
        let phi: Vec<usize> = b.elements().collect();
        if let Ok(m) = ExtMorphism::new(e1.clone(), e2.clone(), phi, psi) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// All extensions of the module, one per normalized factor table whose
/// induced multiplication satisfies the group laws; tables are visited in
/// lexicographic order of their free entries.
pub fn fibre_enumerate(module: &CModule, budget: u64) -> Result<Vec<Extension>> {
    let c = module.c();
    let b = module.b();
    let free: Vec<(usize, usize)> = c
        .elements()
        .filter(|&x| x != c.identity())
        .flat_map(|x| {
            c.elements().filter(|&y| y != c.identity()).map(move |y| (x, y))
        })
        .collect();
    let count = (b.size() as u128).checked_pow(free.len() as u32);
    match count {
        Some(n) if n <= budget as u128 => {}
        _ => {
            return Err(Error::budget(
                format!(
                    "enumerating the fibre over |B|={} |C|={} needs |B|^{} tables",
                    b.size(),
                    c.size(),
                    free.len()
                ),
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
        if let Ok(e) = Extension::from_normalized_table(module.clone(), &t) {
            out.push(e);
        }
        // increment mixed-radix counter; most significant digit first so
        // tables come out in lexicographic order
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

// ---------------------------------------------------------------------------
// pi0 and pi1 of a fibre
// ---------------------------------------------------------------------------

/// Isomorphism classes of a fibre with the group structure induced by the
/// tensor product on class representatives.
pub struct Pi0 {
    pub group: FiniteAbelianGroup,
    /// One representative extension per class, indexed by group element;
    /// each representative carries the lexicographically minimal factor
    /// table of its class.
    pub reps: Vec<Extension>,
    /// Index of the class of the split extension (the group identity).
    pub split_index: usize,
    class_by_table: BTreeMap<Vec<Vec<usize>>, usize>,
}

impl Pi0 {
    pub fn class_of(&self, e: &Extension) -> Result<usize> {
        self.class_by_table
            .get(&e.factor_set())
            .copied()
            .ok_or_else(|| Error::invalid("extension is not in the enumerated fibre"))
    }
}

/// Connected components of the fibre: vertical-isomorphism classes of
/// [`fibre_enumerate`], with addition given by [`baer_tensor`] on
/// representatives and the split class as identity.
pub fn pi0(module: &CModule, budget: u64) -> Result<Pi0> {
    let fibre = fibre_enumerate(module, budget)?;
    let by_table: BTreeMap<Vec<Vec<usize>>, usize> = fibre
        .iter()
        .enumerate()
        .map(|(i, e)| (e.factor_set(), i))
        .collect();
    let b = module.b();
    let c = module.c();
    let cs = c.size();

    // transport each extension along every candidate vertical relabelling
    // psi_g and join it with the result
    let mut pairs = Vec::new();
    for (i, e) in fibre.iter().enumerate() {
        for g in cochains(c, b) {
            if g[c.identity()] != b.zero() {
                continue;
            }
            let psi: Vec<usize> =
                (0..e.e.size()).map(|x| b.add(x / cs, g[x % cs]) * cs + (x % cs)).collect();
            let transported = Extension::assemble(module.clone(), e.e.relabel(&psi))?;
            let j = *by_table.get(&transported.factor_set()).ok_or_else(|| {
                Error::inconsistency("transported extension missing from the fibre enumeration")
            })?;
            pairs.push((i, j));
        }
    }
    let partition = quotient_by_generated_relation(fibre.len(), &pairs)?;
    let reps_idx = partition.reps();
    let class_index: BTreeMap<usize, usize> =
        reps_idx.iter().enumerate().map(|(ci, &r)| (r, ci)).collect();
    let class_by_table: BTreeMap<Vec<Vec<usize>>, usize> = fibre
        .iter()
        .enumerate()
        .map(|(i, e)| (e.factor_set(), class_index[&partition.rep(i)]))
        .collect();

    let reps: Vec<Extension> = reps_idx.iter().map(|&r| fibre[r].clone()).collect();
    let mut mul = vec![vec![0usize; reps.len()]; reps.len()];
    for (i, ei) in reps.iter().enumerate() {
        for (j, ej) in reps.iter().enumerate() {
            let sum = baer_tensor(ei, ej)?;
            mul[i][j] = *class_by_table.get(&sum.factor_set()).ok_or_else(|| {
                Error::inconsistency("tensor left the enumerated fibre")
            })?;
        }
    }
    let split = Extension::split(module);
    let split_index = class_by_table[&split.factor_set()];
    let group = FiniteAbelianGroup::new(FiniteGroup::from_parts(reps.len(), mul, split_index)?)?;
    Ok(Pi0 { group, reps, split_index, class_by_table })
}

/// Automorphisms of the split extension over the identity of the module:
/// the 1-cochains `g` with `psi_g` a vertical automorphism, under
/// composition (pointwise addition of cochains).
pub struct Pi1 {
    pub group: FiniteAbelianGroup,
    /// The cochains `g : C -> B` realizing each element, sorted
    /// lexicographically.
    pub cochains: Vec<Vec<usize>>,
}

pub fn pi1(module: &CModule) -> Result<Pi1> {
    let split = Extension::split(module);
    let b = module.b();
    let c = module.c();
    let cs = c.size();
    let mut kept = Vec::new();
    for g in cochains(c, b) {
        let psi: Vec<usize> =
            (0..split.e.size()).map(|x| b.add(x / cs, g[x % cs]) * cs + (x % cs)).collect();
        let phi: Vec<usize> = b.elements().collect();
        if ExtMorphism::new(split.clone(), split.clone(), phi, psi).is_ok() {
            kept.push(g);
        }
    }
    let index: BTreeMap<Vec<usize>, usize> =
        kept.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mul = kept
        .iter()
        .map(|g| {
            kept.iter()
                .map(|h| {
                    let sum: Vec<usize> =
                        g.iter().zip(h.iter()).map(|(&x, &y)| b.add(x, y)).collect();
                    index[&sum]
                })
                .collect()
        })
        .collect();
    let identity = index[&vec![b.zero(); cs]];
    let group = FiniteAbelianGroup::new(FiniteGroup::from_parts(kept.len(), mul, identity)?)?;
    Ok(Pi1 { group, cochains: kept })
}

// ---------------------------------------------------------------------------
// Factor sets
// ---------------------------------------------------------------------------

/// A normalized kernel-valued 2-cocycle on `C`, the table form of an
/// extension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorSet {
    module: CModule,
    table: Vec<Vec<usize>>,
}

impl FactorSet {
    /// Validates normalization and the 2-cocycle identity
    /// `xi(c1, t(c2,c3)) - t(c1 c2, c3) + t(c1, c2 c3) - t(c1, c2) = 0`.
    pub fn new(module: CModule, table: Vec<Vec<usize>>) -> Result<Self> {
        let c = module.c();
        let b = module.b();
        if table.len() != c.size() || table.iter().any(|r| r.len() != c.size()) {
            return Err(Error::invalid("factor set must be |C| x |C|"));
        }
        if table.iter().any(|r| r.iter().any(|&v| v >= b.size())) {
            return Err(Error::invalid("factor set entry out of range"));
        }
        for ci in c.elements() {
            if table[c.identity()][ci] != b.zero() || table[ci][c.identity()] != b.zero() {
                return Err(Error::invalid("factor set must be normalized"));
            }
        }
        for c1 in c.elements() {
            for c2 in c.elements() {
                for c3 in c.elements() {
                    let lhs = b.add(
                        b.sub(module.act(c1, table[c2][c3]), table[c.mul(c1, c2)][c3]),
                        b.sub(table[c1][c.mul(c2, c3)], table[c1][c2]),
                    );
                    if lhs != b.zero() {
                        return Err(Error::invalid(format!(
                            "2-cocycle identity fails at ({c1},{c2},{c3})"
                        )));
                    }
                }
            }
        }
        Ok(FactorSet { module, table })
    }

    pub fn zero(module: &CModule) -> Self {
        let z = vec![vec![module.b().zero(); module.c().size()]; module.c().size()];
        FactorSet { module: module.clone(), table: z }
    }

    pub fn module(&self) -> &CModule {
        &self.module
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    /// Pointwise sum.
    pub fn add(&self, other: &FactorSet) -> Result<FactorSet> {
        if self.module != other.module {
            return Err(Error::invalid("factor set addition requires the same module"));
        }
        let b = self.module.b();
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(&x, &y)| b.add(x, y)).collect())
            .collect();
        Ok(FactorSet { module: self.module.clone(), table })
    }
}

#[derive(Serialize, Deserialize)]
struct ExtensionJson {
    module: CModule,
    cocycle: Vec<Vec<usize>>,
}

impl Serialize for Extension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExtensionJson { module: self.module.clone(), cocycle: self.factor_set() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Extension {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExtensionJson::deserialize(d)?;
        Extension::from_normalized_table(raw.module, &raw.cocycle).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FactorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExtensionJson { module: self.module.clone(), cocycle: self.table.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExtensionJson::deserialize(d)?;
        FactorSet::new(raw.module, raw.cocycle).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// The fibration oracle
// ---------------------------------------------------------------------------

/// Oracle for the opfibration of abelian extensions of a fixed group `C`
/// over its module category.
#[derive(Clone)]
pub struct ExtOracle {
    c: FiniteGroup,
    probes: Vec<CModule>,
    probe_fibres: Vec<Vec<Extension>>,
    budget: u64,
}

impl ExtOracle {
    pub fn new(c: FiniteGroup, probes: Vec<CModule>, budget: u64) -> Result<Self> {
        if probes.iter().any(|m| m.c() != &c) {
            return Err(Error::invalid("all probe modules must lie over the fixed group"));
        }
        let probe_fibres = probes
            .iter()
            .map(|m| fibre_enumerate(m, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtOracle { c, probes, probe_fibres, budget })
    }

    /// Probes every module `(B, xi)` with `B` in the given list of kernels.
    pub fn with_probe_kernels(
        c: FiniteGroup,
        kernels: &[FiniteAbelianGroup],
        budget: u64,
    ) -> Result<Self> {
        let mut probes = Vec::new();
        for b in kernels {
            probes.extend(CModule::enumerate_actions(&c, b, budget)?);
        }
        ExtOracle::new(c, probes, budget)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.c
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

impl FibrationOracle for ExtOracle {
    type BaseObj = CModule;
    type BaseArr = ModuleMorphism;
    type Obj = Extension;
    type Arr = ExtMorphism;

    fn base_of(&self, x: &Extension) -> CModule {
        x.module.clone()
    }

    fn project(&self, u: &ExtMorphism) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(u.src.module.clone(), u.dst.module.clone(), u.phi.clone())
    }

    fn dom(&self, u: &ExtMorphism) -> Extension {
        u.src.clone()
    }

    fn cod(&self, u: &ExtMorphism) -> Extension {
        u.dst.clone()
    }

    fn base_dom(&self, f: &ModuleMorphism) -> CModule {
        f.src.clone()
    }

    fn base_cod(&self, f: &ModuleMorphism) -> CModule {
        f.dst.clone()
    }

    fn identity(&self, x: &Extension) -> ExtMorphism {
        ExtMorphism::identity(x)
    }

    fn base_identity(&self, a: &CModule) -> ModuleMorphism {
        ModuleMorphism::identity(a)
    }

    fn compose(&self, g: &ExtMorphism, f: &ExtMorphism) -> Result<ExtMorphism> {
        g.compose(f)
    }

    fn base_compose(&self, g: &ModuleMorphism, f: &ModuleMorphism) -> Result<ModuleMorphism> {
        g.compose(f)
    }

    fn lift(&self, f: &ModuleMorphism, x: &Extension) -> Result<(ExtMorphism, Extension)> {
        if x.module != *f.src() {
            return Err(Error::invalid("lift requires an object over the arrow's source"));
        }
        // normalized cleavage: identities lift to identities
        if f.is_identity() {
            return Ok((ExtMorphism::identity(x), x.clone()));
        }
        pushforward(f, x)
    }

    fn base_terminal(&self) -> CModule {
        CModule::zero(self.c.clone())
    }

    fn base_terminal_arr(&self, a: &CModule) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(
            a.clone(),
            self.base_terminal(),
            vec![0; a.b().size()],
        )
    }

    fn base_product(&self, a: &CModule, b: &CModule) -> (CModule, ModuleMorphism, ModuleMorphism) {
        let p = a.product(b).expect("probe modules share the acting group");
        let n2 = b.b().size();
        let p1 = ModuleMorphism::new_unchecked(
            p.clone(),
            a.clone(),
            (0..p.b().size()).map(|x| x / n2).collect(),
        );
        let p2 = ModuleMorphism::new_unchecked(
            p.clone(),
            b.clone(),
            (0..p.b().size()).map(|x| x % n2).collect(),
        );
        (p, p1, p2)
    }

    fn base_pair(&self, f: &ModuleMorphism, g: &ModuleMorphism) -> Result<ModuleMorphism> {
        if f.src != g.src {
            return Err(Error::invalid("pairing requires a common source"));
        }
        let p = f.dst.product(&g.dst)?;
        let n2 = g.dst.b().size();
        Ok(ModuleMorphism::new_unchecked(
            f.src.clone(),
            p,
            f.map.iter().zip(&g.map).map(|(&x, &y)| x * n2 + y).collect(),
        ))
    }

    fn terminal(&self) -> Extension {
        Extension::split(&self.base_terminal())
    }

    fn terminal_arr(&self, x: &Extension) -> ExtMorphism {
        let t = self.terminal();
        let cs = self.c.size();
        ExtMorphism::new(
            x.clone(),
            t,
            vec![0; x.module.b().size()],
            (0..x.e.size()).map(|u| u % cs).collect(),
        )
        .expect("the terminal comparison is always a morphism")
    }

    fn product(&self, x: &Extension, y: &Extension) -> (Extension, ExtMorphism, ExtMorphism) {
        let pb = product_over_c(x, y).expect("extensions of the oracle share the group");
        (pb.product, pb.proj1, pb.proj2)
    }

    fn pair(&self, u: &ExtMorphism, v: &ExtMorphism) -> Result<ExtMorphism> {
        if u.src != v.src {
            return Err(Error::invalid("pairing requires a common source"));
        }
        let pb = product_over_c(&u.dst, &v.dst)?;
        let n2 = v.dst.module.b().size();
        let phi: Vec<usize> =
            u.phi.iter().zip(&v.phi).map(|(&x, &y)| x * n2 + y).collect();
        let psi = u
            .psi
            .iter()
            .zip(&v.psi)
            .map(|(&x, &y)| pb.encode_pair(x, y))
            .collect::<Result<Vec<usize>>>()?;
        ExtMorphism::new(u.src.clone(), pb.product, phi, psi)
    }

    fn homs_over(
        &self,
        f: &ModuleMorphism,
        x: &Extension,
        y: &Extension,
    ) -> Result<Vec<ExtMorphism>> {
        if x.module != *f.src() || y.module != *f.dst() {
            return Ok(Vec::new());
        }
        let b2 = y.module.b();
        let c = &self.c;
        let cs = c.size();
        let candidates = (b2.size() as u128).pow(cs.saturating_sub(1) as u32);
        if candidates > self.budget as u128 {
            return Err(Error::budget("enumerating extension morphisms", self.budget));
        }
        let mut out = Vec::new();
        // any morphism over f has shape psi(b, c) = (f(b) + g(c), c)
        for g in cochains(c, b2) {
            if g[c.identity()] != b2.zero() {
                continue;
            }
            let psi: Vec<usize> = (0..x.e.size())
                .map(|u| b2.add(f.apply(u / cs), g[u % cs]) * cs + (u % cs))
                .collect();
            if let Ok(m) = ExtMorphism::new(x.clone(), y.clone(), f.map().to_vec(), psi) {
                out.push(m);
            }
        }
        Ok(out)
    }

    fn base_homs(&self, a: &CModule, b: &CModule) -> Result<Vec<ModuleMorphism>> {
        ModuleMorphism::enumerate(a, b, self.budget)
    }

    fn fibre_objects(&self, a: &CModule) -> Result<Vec<Extension>> {
        if let Some(i) = self.probes.iter().position(|m| m == a) {
            return Ok(self.probe_fibres[i].clone());
        }
        fibre_enumerate(a, self.budget)
    }

    fn probe_objects(&self) -> Vec<CModule> {
        self.probes.clone()
    }

    fn factorizations(
        &self,
        through: &ExtMorphism,
        g: &ExtMorphism,
        h: &ModuleMorphism,
    ) -> Result<Vec<ExtMorphism>> {
        if through.src != g.src {
            return Err(Error::invalid("factorization requires a common source"));
        }
        let (t_cod, g_cod) = (&through.dst, &g.dst);
        if *h.src() != t_cod.module || *h.dst() != g_cod.module {
            return Ok(Vec::new());
        }
        // base compatibility: h ∘ phi(through) = phi(g)
        if through.phi.iter().zip(&g.phi).any(|(&tb, &gb)| h.apply(tb) != gb) {
            return Ok(Vec::new());
        }
        // a candidate v has psi(b, c) = (h(b) + g'(c), c); the projection of
        // the source hits every c, so the pins determine g' completely
        let b2 = g_cod.module.b();
        let cs = self.c.size();
        let mut gprime = vec![usize::MAX; cs];
        for x in 0..through.src.e.size() {
            let t = through.psi[x];
            let w = g.psi[x];
            if w % cs != t % cs {
                return Ok(Vec::new());
            }
            let needed = b2.sub(w / cs, h.apply(t / cs));
            if gprime[t % cs] == usize::MAX {
                gprime[t % cs] = needed;
            } else if gprime[t % cs] != needed {
                return Ok(Vec::new());
            }
        }
        if gprime.iter().any(|&v| v == usize::MAX) {
            return Err(Error::inconsistency("source does not project onto the whole base group"));
        }
        let psi: Vec<usize> = (0..t_cod.e.size())
            .map(|u| b2.add(h.apply(u / cs), gprime[u % cs]) * cs + (u % cs))
            .collect();
        match ExtMorphism::new(t_cod.clone(), g_cod.clone(), h.map().to_vec(), psi) {
            Ok(v) => Ok(vec![v]),
            Err(_) => Ok(Vec::new()),
        }
    }

    fn is_iso(&self, u: &ExtMorphism) -> Result<bool> {
        // a vertical extension morphism is invertible iff its carrier map
        // is bijective; the inverse squares commute automatically
        if !u.is_vertical() {
            return Ok(false);
        }
        let mut seen = vec![false; u.psi.len()];
        Ok(u.psi.len() == u.dst.e.size()
            && u.psi.iter().all(|&v| !std::mem::replace(&mut seen[v], true)))
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::{make_cyclic, semidirect_product, DEFAULT_BUDGET};

    fn z(n: usize) -> FiniteAbelianGroup {
        make_cyclic(n).unwrap()
    }

    fn mod_z2_z2() -> CModule {
        CModule::trivial_action(z(2).as_group().clone(), z(2))
    }

    /// The nontrivial extension of Z2 by Z2.
    fn z4_extension() -> Extension {
        let t = vec![vec![0, 0], vec![0, 1]];
        Extension::from_normalized_table(mod_z2_z2(), &t).unwrap()
    }

    #[test]
    fn split_and_nontrivial_extensions() {
        let m = mod_z2_z2();
        let split = Extension::split(&m);
        // the split extension of (Z2, Z2, trivial) is the Klein group
        assert!(split.group().is_abelian());
        for x in split.group().elements() {
            assert!(split.group().element_order(x) <= 2);
        }
        // the nontrivial cocycle gives Z4: the element (0, 1) has order 4
        let e = z4_extension();
        assert_eq!(e.group().element_order(1), 4);
        assert_eq!(e.factor_set(), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn induced_actions() {
        // split extension induces its own action back
        let z3 = z(3);
        let c2 = z(2);
        let inv_action =
            CModule::new(c2.as_group().clone(), z3.clone(), vec![vec![0, 1, 2], vec![0, 2, 1]])
                .unwrap();
        let sd = semidirect_product(&inv_action);
        let got = induced_action(c2.as_group(), &z3, &sd.group, &sd.injection, &sd.projection)
            .unwrap();
        assert_eq!(got, inv_action);

        // Z4 as an extension of Z2 by Z2 induces the trivial action
        let e = z4_extension();
        let got = induced_action(
            e.module().c(),
            e.module().b(),
            e.group(),
            e.kernel_hom(),
            e.projection_hom(),
        )
        .unwrap();
        assert_eq!(&got, e.module());
    }

    #[test]
    fn pushforward_along_identity_is_vertical_iso() {
        let e = z4_extension();
        let id = ModuleMorphism::identity(e.module());
        let (mor, result) = pushforward(&id, &e).unwrap();
        assert!(mor.is_vertical());
        assert!(vertical_isomorphic(&e, &result).unwrap().is_some());
        // and the result is again a Z4
        assert!(crate::finalg::find_isomorphism(result.group(), z(4).as_group())
            .unwrap()
            .is_some());
    }

    #[test]
    fn pushforward_to_zero_module_is_terminal() {
        let e = z4_extension();
        let zero = CModule::zero(e.module().c().clone());
        let to_zero = ModuleMorphism::new(e.module().clone(), zero.clone(), vec![0, 0]).unwrap();
        let (_, result) = pushforward(&to_zero, &e).unwrap();
        assert_eq!(result, Extension::split(&zero));
        assert_eq!(result.size(), 2);
    }

    #[test]
    fn pullback_carrier_count() {
        let e = z4_extension();
        let pb = product_over_c(&e, &e).unwrap();
        // carrier count 2 * 4 = 8 over the kernel Z2 x Z2
        assert_eq!(pb.product.size(), 8);
        assert_eq!(pb.product.module().b().size(), 4);
    }

    #[test]
    fn baer_tensor_laws() {
        let m = mod_z2_z2();
        let split = Extension::split(&m);
        let e = z4_extension();
        // unit law
        let u = baer_tensor(&e, &split).unwrap();
        assert!(vertical_isomorphic(&e, &u).unwrap().is_some());
        let u2 = baer_tensor(&split, &e).unwrap();
        assert!(vertical_isomorphic(&e, &u2).unwrap().is_some());
        // the Z4 class squares to the split class
        let sq = baer_tensor(&e, &e).unwrap();
        assert!(vertical_isomorphic(&split, &sq).unwrap().is_some());
    }

    #[test]
    fn vertical_iso_search() {
        let m = mod_z2_z2();
        let split = Extension::split(&m);
        let e = z4_extension();
        assert!(vertical_isomorphic(&e, &e).unwrap().is_some());
        let found = vertical_isomorphic(&e, &e).unwrap().unwrap();
        // the first lexicographic cochain is zero, giving the identity
        assert_eq!(found, ExtMorphism::identity(&e));
        assert!(vertical_isomorphic(&e, &split).unwrap().is_none());
    }

    #[test]
    fn fibre_enumeration_counts() {
        let m = mod_z2_z2();
        assert_eq!(fibre_enumerate(&m, DEFAULT_BUDGET).unwrap().len(), 2);

        // (C = Z2, B = Z3): three tables, all in one class
        let m = CModule::trivial_action(z(2).as_group().clone(), z(3));
        let fibre = fibre_enumerate(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(fibre.len(), 3);
        let p = pi0(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(p.group.size(), 1);

        // zero kernel: only the split extension
        let m = CModule::zero(z(4).as_group().clone());
        assert_eq!(fibre_enumerate(&m, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn pi0_of_z2_z2() {
        let p = pi0(&mod_z2_z2(), DEFAULT_BUDGET).unwrap();
        assert_eq!(p.group.size(), 2);
        assert_eq!(crate::finalg::abelian_invariants(&p.group), vec![2]);
        // the two classes are the Klein group and Z4
        let klein = &p.reps[p.split_index];
        let other = &p.reps[1 - p.split_index];
        assert!(crate::finalg::find_isomorphism(
            klein.group(),
            FiniteAbelianGroup::direct_product(&z(2), &z(2)).as_group()
        )
        .unwrap()
        .is_some());
        assert!(crate::finalg::find_isomorphism(other.group(), z(4).as_group())
            .unwrap()
            .is_some());
    }

    #[test]
    fn pi1_of_small_modules() {
        // trivial action: pi1 = Hom(C, B)
        let p = pi1(&mod_z2_z2()).unwrap();
        assert_eq!(p.group.size(), 2);
        let m = CModule::zero(z(3).as_group().clone());
        assert_eq!(pi1(&m).unwrap().group.size(), 1);
    }

    #[test]
    fn extension_json_roundtrip() {
        let e = z4_extension();
        let s = serde_json::to_string(&e).unwrap();
        let back: Extension = serde_json::from_str(&s).unwrap();
        assert_eq!(e, back);
        assert_eq!(s, serde_json::to_string(&back).unwrap());
        assert!(s.contains("\"cocycle\""));
    }
}
