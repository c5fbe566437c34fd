//! Generic verification layer for cloven opfibrations with cartesian
//! structure.
//!
//! Everything here is written against the [`FibrationOracle`] interface
//! and quantifies exhaustively over whatever the oracle can enumerate.
//! Structural 2-cells (cleavage comparisons, counits, mates, associators,
//! unitors, braidings) are never stored; each component is computed on
//! demand as the unique vertical comparison between two arrows out of a
//! cocartesian lifting.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Oracle interface
// ---------------------------------------------------------------------------

/// A uniform interface onto a cloven opfibration `P : X -> B` where both
/// categories have finite products strictly preserved by `P`.
///
/// Implementations must be pure: equal inputs give equal outputs, and all
/// enumerators use fixed deterministic orders. Cleavages are normalized
/// (lifting an identity returns an identity).
pub trait FibrationOracle {
    /// Base objects.
    type BaseObj: Clone + PartialEq + Debug;
    /// Base arrows.
    type BaseArr: Clone + PartialEq + Debug;
    /// Total-category objects; each knows the base object it lies over.
    type Obj: Clone + PartialEq + Debug;
    /// Total-category arrows; each knows the base arrow it lies over.
    type Arr: Clone + PartialEq + Debug;

    fn base_of(&self, x: &Self::Obj) -> Self::BaseObj;
    fn project(&self, u: &Self::Arr) -> Self::BaseArr;
    fn dom(&self, u: &Self::Arr) -> Self::Obj;
    fn cod(&self, u: &Self::Arr) -> Self::Obj;
    fn base_dom(&self, f: &Self::BaseArr) -> Self::BaseObj;
    fn base_cod(&self, f: &Self::BaseArr) -> Self::BaseObj;

    fn identity(&self, x: &Self::Obj) -> Self::Arr;
    fn base_identity(&self, a: &Self::BaseObj) -> Self::BaseArr;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Arr, f: &Self::Arr) -> Result<Self::Arr>;
    /// `g ∘ f` in the base.
    fn base_compose(&self, g: &Self::BaseArr, f: &Self::BaseArr) -> Result<Self::BaseArr>;

    /// Chosen cocartesian lifting of `f` at `x`: the lifting arrow together
    /// with its codomain `f_*(x)`.
    fn lift(&self, f: &Self::BaseArr, x: &Self::Obj) -> Result<(Self::Arr, Self::Obj)>;

    fn base_terminal(&self) -> Self::BaseObj;
    fn base_terminal_arr(&self, a: &Self::BaseObj) -> Self::BaseArr;
    /// Canonical product `(a x b, pi1, pi2)` in the base.
    fn base_product(
        &self,
        a: &Self::BaseObj,
        b: &Self::BaseObj,
    ) -> (Self::BaseObj, Self::BaseArr, Self::BaseArr);
    /// Pairing `<f, g>` into the canonical product of the codomains.
    fn base_pair(&self, f: &Self::BaseArr, g: &Self::BaseArr) -> Result<Self::BaseArr>;

    /// Terminal object of the total category (lies over the base terminal).
    fn terminal(&self) -> Self::Obj;
    fn terminal_arr(&self, x: &Self::Obj) -> Self::Arr;
    /// Canonical product in the total category, lying over the base product.
    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> (Self::Obj, Self::Arr, Self::Arr);
    fn pair(&self, u: &Self::Arr, v: &Self::Arr) -> Result<Self::Arr>;

    /// All total arrows `x -> y` lying over exactly `f`. Exhaustive within
    /// the configured budget.
    fn homs_over(&self, f: &Self::BaseArr, x: &Self::Obj, y: &Self::Obj)
        -> Result<Vec<Self::Arr>>;
    /// All base arrows `a -> b`.
    fn base_homs(&self, a: &Self::BaseObj, b: &Self::BaseObj) -> Result<Vec<Self::BaseArr>>;
    /// Canonical enumeration of the fibre over `a`.
    fn fibre_objects(&self, a: &Self::BaseObj) -> Result<Vec<Self::Obj>>;
    /// The base objects used as codomain probes by the universal-property
    /// checks.
    fn probe_objects(&self) -> Vec<Self::BaseObj>;

    /// All arrows `v` over `h` with `v ∘ through = g`. A factorization is
    /// pinned on the image of `through`, so oracles override the filtered
    /// full enumeration below with a constraint-aware search.
    fn factorizations(
        &self,
        through: &Self::Arr,
        g: &Self::Arr,
        h: &Self::BaseArr,
    ) -> Result<Vec<Self::Arr>> {
        let mut found = Vec::new();
        for v in self.homs_over(h, &self.cod(through), &self.cod(g))? {
            if self.compose(&v, through)? == *g {
                found.push(v);
            }
        }
        Ok(found)
    }

    /// Invertibility of a vertical arrow. The default searches the reverse
    /// vertical hom-set for a two-sided inverse; oracles override it when
    /// invertibility is decidable structurally.
    fn is_iso(&self, u: &Self::Arr) -> Result<bool> {
        let (x, y) = (self.dom(u), self.cod(u));
        if self.base_of(&x) != self.base_of(&y) {
            return Ok(false);
        }
        for v in self.homs_over(&self.base_identity(&self.base_of(&x)), &y, &x)? {
            if self.compose(&v, u)? == self.identity(&x)
                && self.compose(u, &v)? == self.identity(&y)
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Arrows over the identity of the base object of `x`.
pub fn vertical_homs<O: FibrationOracle>(o: &O, x: &O::Obj, y: &O::Obj) -> Result<Vec<O::Arr>> {
    if o.base_of(x) != o.base_of(y) {
        return Ok(Vec::new());
    }
    o.homs_over(&o.base_identity(&o.base_of(x)), x, y)
}

/// A vertical arrow is an isomorphism iff a vertical arrow back is a
/// two-sided inverse.
pub fn is_vertical_iso<O: FibrationOracle>(o: &O, u: &O::Arr) -> Result<bool> {
    if o.project(u) != o.base_identity(&o.base_of(&o.dom(u))) {
        return Ok(false);
    }
    o.is_iso(u)
}

/// All arrows `v` over `h` with `v ∘ through = g`.
pub fn factor_through<O: FibrationOracle>(
    o: &O,
    through: &O::Arr,
    g: &O::Arr,
    h: &O::BaseArr,
) -> Result<Vec<O::Arr>> {
    o.factorizations(through, g, h)
}

/// The unique arrow `v` over `h` with `v ∘ through = g`, where `through`
/// is expected to be cocartesian. Zero or multiple candidates mean the
/// instantiating oracle is broken (or `through` is not cocartesian).
pub fn unique_factor_through<O: FibrationOracle>(
    o: &O,
    through: &O::Arr,
    g: &O::Arr,
    h: &O::BaseArr,
) -> Result<O::Arr> {
    let candidates = factor_through(o, through, g, h)?;
    match candidates.len() {
        1 => Ok(candidates.into_iter().next().unwrap()),
        n => Err(Error::inconsistency(format!(
            "expected exactly one factorization over {h:?}, found {n}"
        ))),
    }
}

/// Vertical factorization through a cocartesian arrow.
pub fn vertical_factor<O: FibrationOracle>(o: &O, through: &O::Arr, g: &O::Arr) -> Result<O::Arr> {
    let h = o.base_identity(&o.base_of(&o.cod(g)));
    unique_factor_through(o, through, g, &h)
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

/// Outcome of a structural check: either a pass, or a failure carrying a
/// rendered counterexample. `sampled` records that the quantification was
/// deterministically subsampled instead of exhaustive.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pass: bool,
    witness: Option<String>,
    sampled: bool,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { pass: true, witness: None, sampled: false }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict { pass: false, witness: Some(witness.into()), sampled: false }
    }

    pub fn with_sampled(mut self, sampled: bool) -> Self {
        self.sampled = sampled;
        self
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn witness(&self) -> Option<&str> {
        self.witness.as_deref()
    }

    pub fn sampled(&self) -> bool {
        self.sampled
    }
}

/// Deterministic subsample: up to `cap` evenly spaced indices of `0..len`.
fn stride_select(len: usize, cap: usize) -> (Vec<usize>, bool) {
    if len <= cap {
        ((0..len).collect(), false)
    } else {
        let mut picked: Vec<usize> = (0..cap).map(|i| i * len / cap).collect();
        picked.dedup();
        (picked, true)
    }
}

// ---------------------------------------------------------------------------
// Cocartesianness
// ---------------------------------------------------------------------------

/// Checks the universal property of a cocartesian arrow `u : X -> Y` over
/// `f : A -> B` by exhaustive quantification: for every probe base object
/// `K`, every `h : B -> K`, every fibre object `W` over `K` and every
/// `g : X -> W` over `h ∘ f`, exactly one `v : Y -> W` over `h` satisfies
/// `v ∘ u = g`.
pub fn is_cocartesian<O: FibrationOracle>(o: &O, u: &O::Arr) -> Result<Verdict> {
    is_cocartesian_capped(o, u, None)
}

/// Like [`is_cocartesian`], but probing at most `cap` fibre objects per
/// probe base object (evenly spaced); the verdict is flagged as sampled
/// whenever truncation happened.
pub fn is_cocartesian_capped<O: FibrationOracle>(
    o: &O,
    u: &O::Arr,
    cap: Option<usize>,
) -> Result<Verdict> {
    let x = o.dom(u);
    let y = o.cod(u);
    let f = o.project(u);
    let b = o.base_cod(&f);

    let mut probes = o.probe_objects();
    if !probes.contains(&b) {
        probes.push(b.clone());
    }
    let mut sampled = false;
    for k in &probes {
        let fibre = o.fibre_objects(k)?;
        let (picked, was_sampled) = match cap {
            Some(c) => stride_select(fibre.len(), c),
            None => ((0..fibre.len()).collect(), false),
        };
        sampled |= was_sampled;
        for h in o.base_homs(&b, k)? {
            let hf = o.base_compose(&h, &f)?;
            for &wi in &picked {
                let w = &fibre[wi];
                let composites = o
                    .homs_over(&h, &y, w)?
                    .iter()
                    .map(|v| o.compose(v, u))
                    .collect::<Result<Vec<_>>>()?;
                for g in o.homs_over(&hf, &x, w)? {
                    let matches = composites.iter().filter(|&c| *c == g).count();
                    if matches != 1 {
                        return Ok(Verdict::fail(format!(
                            "arrow {g:?} over {hf:?} admits {matches} factorizations through {u:?} (expected exactly 1)"
                        ))
                        .with_sampled(sampled));
                    }
                }
            }
        }
    }
    Ok(Verdict::pass().with_sampled(sampled))
}

// ---------------------------------------------------------------------------
// Oplax structure L
// ---------------------------------------------------------------------------

/// `L^{A,B}` on a fibre object `z` over the canonical product `a x b`:
/// the pair of pushforwards along the product projections.
pub fn oplax_l<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    b: &O::BaseObj,
    z: &O::Obj,
) -> Result<(O::Obj, O::Obj)> {
    let (ab, p1, p2) = o.base_product(a, b);
    if o.base_of(z) != ab {
        return Err(Error::invalid(
            "oplax L requires an object over the designated base product",
        ));
    }
    let (_, za) = o.lift(&p1, z)?;
    let (_, zb) = o.lift(&p2, z)?;
    Ok((za, zb))
}

/// `L^{A,B}` on a vertical arrow `u` over `a x b`: each component is the
/// unique vertical comparison `pi_i*(u)` with
/// `pi_i*(u) ∘ lift_i(dom u) = lift_i(cod u) ∘ u`.
pub fn oplax_l_arr<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    b: &O::BaseObj,
    u: &O::Arr,
) -> Result<(O::Arr, O::Arr)> {
    let (ab, p1, p2) = o.base_product(a, b);
    let (x, y) = (o.dom(u), o.cod(u));
    if o.base_of(&x) != ab || o.project(u) != o.base_identity(&ab) {
        return Err(Error::invalid(
            "oplax L on arrows requires a vertical arrow over the base product",
        ));
    }
    let mut out = Vec::with_capacity(2);
    for p in [&p1, &p2] {
        let (lx, _) = o.lift(p, &x)?;
        let (ly, _) = o.lift(p, &y)?;
        let g = o.compose(&ly, u)?;
        out.push(vertical_factor(o, &lx, &g)?);
    }
    let second = out.pop().unwrap();
    Ok((out.pop().unwrap(), second))
}

/// `R^{A,B}`: the total-category product, supplied by the oracle.
pub fn right_adjoint_r<O: FibrationOracle>(o: &O, x: &O::Obj, y: &O::Obj) -> O::Obj {
    o.product(x, y).0
}

/// Unit of `L^{A,B} -| R^{A,B}` at `z`: the vertical pairing of the two
/// cleavage liftings, `<lift(pi1), lift(pi2)> : z -> pi1_*(z) x pi2_*(z)`.
pub fn unit_eta<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    b: &O::BaseObj,
    z: &O::Obj,
) -> Result<O::Arr> {
    let (ab, p1, p2) = o.base_product(a, b);
    if o.base_of(z) != ab {
        return Err(Error::invalid("unit requires an object over the designated base product"));
    }
    let (l1, _) = o.lift(&p1, z)?;
    let (l2, _) = o.lift(&p2, z)?;
    o.pair(&l1, &l2)
}

/// Counit of `L^{A,B} -| R^{A,B}` at `(x, y)`: the unique vertical arrows
/// `eps_i` with `eps_i ∘ lift(pi_i) = pi_i` out of the total product.
pub fn counit_epsilon<O: FibrationOracle>(
    o: &O,
    x: &O::Obj,
    y: &O::Obj,
) -> Result<(O::Arr, O::Arr)> {
    let (p, q1, q2) = o.product(x, y);
    let (_, b1, b2) = o.base_product(&o.base_of(x), &o.base_of(y));
    let (l1, _) = o.lift(&b1, &p)?;
    let (l2, _) = o.lift(&b2, &p)?;
    let e1 = vertical_factor(o, &l1, &q1)?;
    let e2 = vertical_factor(o, &l2, &q2)?;
    Ok((e1, e2))
}

// ---------------------------------------------------------------------------
// Mates and Beck–Chevalley
// ---------------------------------------------------------------------------

/// The mate component `R^{(a,b)}_{(x,y)}`: the unique vertical arrow with
/// `R^{(a,b)} ∘ lift(a x b) = lift(a) x lift(b)` out of the total product
/// `x x y`.
pub fn mate_component<O: FibrationOracle>(
    o: &O,
    a: &O::BaseArr,
    b: &O::BaseArr,
    x: &O::Obj,
    y: &O::Obj,
) -> Result<O::Arr> {
    if o.base_dom(a) != o.base_of(x) || o.base_dom(b) != o.base_of(y) {
        return Err(Error::invalid("mate component: arrows must start at the bases of the objects"));
    }
    let (p, p1, p2) = o.product(x, y);
    let (_, pi1, pi2) = o.base_product(&o.base_dom(a), &o.base_dom(b));
    let ab = o.base_pair(&o.base_compose(a, &pi1)?, &o.base_compose(b, &pi2)?)?;
    let (lift_ab, _) = o.lift(&ab, &p)?;
    let (la, _) = o.lift(a, x)?;
    let (lb, _) = o.lift(b, y)?;
    let la_x_lb = o.pair(&o.compose(&la, &p1)?, &o.compose(&lb, &p2)?)?;
    vertical_factor(o, &lift_ab, &la_x_lb)
}

/// Beck–Chevalley: passes iff the mate component is a vertical
/// isomorphism.
pub fn check_beck_chevalley<O: FibrationOracle>(
    o: &O,
    a: &O::BaseArr,
    b: &O::BaseArr,
    x: &O::Obj,
    y: &O::Obj,
) -> Result<Verdict> {
    let mate = mate_component(o, a, b, x, y)?;
    if is_vertical_iso(o, &mate)? {
        Ok(Verdict::pass())
    } else {
        Ok(Verdict::fail(format!("mate component is not invertible: {mate:?}")))
    }
}

// ---------------------------------------------------------------------------
// Internal monoids and groups in the base
// ---------------------------------------------------------------------------

/// Associativity and unit laws for `(a, m, e)` expressed as base-arrow
/// equations built from the cartesian structure.
pub fn is_internal_monoid<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
    e: &O::BaseArr,
) -> Result<bool> {
    let (a2, p1, p2) = o.base_product(a, a);
    if o.base_dom(m) != a2 || o.base_cod(m) != *a {
        return Ok(false);
    }
    if o.base_dom(e) != o.base_terminal() || o.base_cod(e) != *a {
        return Ok(false);
    }
    // associativity: m ∘ (m x 1) = m ∘ (1 x m) ∘ assoc on (A x A) x A
    let (_, q1, q2) = o.base_product(&a2, a);
    let m_x_1 = o.base_pair(&o.base_compose(m, &q1)?, &q2)?;
    let left = o.base_compose(m, &m_x_1)?;
    let assoc = o.base_pair(
        &o.base_compose(&p1, &q1)?,
        &o.base_pair(&o.base_compose(&p2, &q1)?, &q2)?,
    )?;
    let (_, r1, r2) = o.base_product(a, &a2);
    let one_x_m = o.base_pair(&r1, &o.base_compose(m, &r2)?)?;
    let right = o.base_compose(&o.base_compose(m, &one_x_m)?, &assoc)?;
    if left != right {
        return Ok(false);
    }
    // unit laws: m ∘ <e ∘ tau, 1> = 1 = m ∘ <1, e ∘ tau>
    let tau = o.base_terminal_arr(a);
    let e_tau = o.base_compose(e, &tau)?;
    let ida = o.base_identity(a);
    let lu = o.base_compose(m, &o.base_pair(&e_tau, &ida)?)?;
    let ru = o.base_compose(m, &o.base_pair(&ida, &e_tau)?)?;
    Ok(lu == ida && ru == ida)
}

pub fn is_commutative_monoid<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
) -> Result<bool> {
    let (_, p1, p2) = o.base_product(a, a);
    let swap = o.base_pair(&p2, &p1)?;
    Ok(o.base_compose(m, &swap)? == *m)
}

/// Group axiom `m ∘ <1, i> = e ∘ tau` (and symmetrically) on top of the
/// monoid laws.
pub fn is_internal_group<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
    e: &O::BaseArr,
    i: &O::BaseArr,
) -> Result<bool> {
    if !is_internal_monoid(o, a, m, e)? {
        return Ok(false);
    }
    if o.base_dom(i) != *a || o.base_cod(i) != *a {
        return Ok(false);
    }
    let ida = o.base_identity(a);
    let e_tau = o.base_compose(e, &o.base_terminal_arr(a))?;
    let left = o.base_compose(m, &o.base_pair(&ida, i)?)?;
    let right = o.base_compose(m, &o.base_pair(i, &ida)?)?;
    Ok(left == e_tau && right == e_tau)
}

// ---------------------------------------------------------------------------
// Monoidal structure on a fibre
// ---------------------------------------------------------------------------

/// Tensor product on the fibre over an internal monoid `(a, m, e)`:
/// `x ⊗ y = m_*(x x y)`, the codomain of the cleavage lifting of `m` at
/// the total product.
pub fn tensor_on_fibre<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
    e: &O::BaseArr,
    x: &O::Obj,
    y: &O::Obj,
) -> Result<O::Obj> {
    if !is_internal_monoid(o, a, m, e)? {
        return Err(Error::invalid("tensor requires an internal monoid structure on the base object"));
    }
    if o.base_of(x) != *a || o.base_of(y) != *a {
        return Err(Error::invalid("tensor factors must lie over the monoid object"));
    }
    let (p, _, _) = o.product(x, y);
    Ok(o.lift(m, &p)?.1)
}

/// Tensor of vertical arrows over `a`: `u ⊗ v = m_*(u x v)`, computed by
/// factoring through the lifting of `m` at the domain product.
pub fn tensor_arr<O: FibrationOracle>(
    o: &O,
    m: &O::BaseArr,
    u: &O::Arr,
    v: &O::Arr,
) -> Result<O::Arr> {
    let (pd, d1, d2) = o.product(&o.dom(u), &o.dom(v));
    let (pc, _, _) = o.product(&o.cod(u), &o.cod(v));
    let u_x_v = o.pair(&o.compose(u, &d1)?, &o.compose(v, &d2)?)?;
    let (lift_d, _) = o.lift(m, &pd)?;
    let (lift_c, _) = o.lift(m, &pc)?;
    let g = o.compose(&lift_c, &u_x_v)?;
    vertical_factor(o, &lift_d, &g)
}

/// Unit object of the fibre over `(a, m, e)`: `e_*(I_X)`, the lifting of
/// `e` at the total terminal object.
pub fn unit_object<O: FibrationOracle>(o: &O, e: &O::BaseArr) -> Result<O::Obj> {
    let t = o.terminal();
    if o.base_dom(e) != o.base_of(&t) {
        return Err(Error::invalid("unit arrow must start at the base terminal object"));
    }
    Ok(o.lift(e, &t)?.1)
}

/// Braiding `tau_{x,y} : x ⊗ y -> y ⊗ x` over a commutative monoid: the
/// unique vertical arrow with
/// `tau ∘ lift(m)@(x x y) = lift(m)@(y x x) ∘ <pi2, pi1>`,
/// which is well posed because `m ∘ swap = m`.
pub fn braiding<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
    e: &O::BaseArr,
    x: &O::Obj,
    y: &O::Obj,
) -> Result<O::Arr> {
    if !is_internal_monoid(o, a, m, e)? || !is_commutative_monoid(o, a, m)? {
        return Err(Error::invalid("braiding requires a commutative internal monoid"));
    }
    let (pxy, p1, p2) = o.product(x, y);
    let (pyx, _, _) = o.product(y, x);
    let swap_total = o.pair(&p2, &p1)?;
    let (lift_xy, _) = o.lift(m, &pxy)?;
    let (lift_yx, _) = o.lift(m, &pyx)?;
    let g = o.compose(&lift_yx, &swap_total)?;
    vertical_factor(o, &lift_xy, &g)
}

// ---------------------------------------------------------------------------
// Terminal / diagonal cocartesianness
// ---------------------------------------------------------------------------

/// Is the terminal map `x -> I_X` cocartesian?
pub fn check_terminal_cocartesian<O: FibrationOracle>(o: &O, x: &O::Obj) -> Result<Verdict> {
    is_cocartesian(o, &o.terminal_arr(x))
}

/// Is the diagonal `x -> x x x` cocartesian?
pub fn check_diagonal_cocartesian<O: FibrationOracle>(o: &O, x: &O::Obj) -> Result<Verdict> {
    let id = o.identity(x);
    let diag = o.pair(&id, &id)?;
    is_cocartesian(o, &diag)
}

// ---------------------------------------------------------------------------
// Cleavage comparison and pseudonaturality
// ---------------------------------------------------------------------------

/// For composable `f, g`, the lifting of `g ∘ f` at `x` and the composite
/// of liftings differ by a unique vertical iso.
pub fn check_cleavage_comparison<O: FibrationOracle>(
    o: &O,
    f: &O::BaseArr,
    g: &O::BaseArr,
    x: &O::Obj,
) -> Result<Verdict> {
    let (lf, xf) = o.lift(f, x)?;
    let (lg, _) = o.lift(g, &xf)?;
    let gf = o.base_compose(g, f)?;
    let (lgf, _) = o.lift(&gf, x)?;
    let two_step = o.compose(&lg, &lf)?;
    let matches = factor_through(o, &lgf, &two_step, &o.base_identity(&o.base_cod(&gf)))?;
    if matches.len() != 1 {
        return Ok(Verdict::fail(format!(
            "cleavage comparison for {f:?};{g:?} at {x:?}: {} candidates",
            matches.len()
        )));
    }
    if is_vertical_iso(o, &matches[0])? {
        Ok(Verdict::pass())
    } else {
        Ok(Verdict::fail(format!("cleavage comparison not invertible at {x:?}")))
    }
}

/// Pseudonaturality comparisons `L^{(a,b)}_{z,i}` for `i = 1, 2`: the two
/// composite liftings of `a ∘ pi1 = pi1 ∘ (a x b)` at `z` (and likewise
/// for the second projection) must differ by unique vertical isos.
pub fn check_pseudonaturality<O: FibrationOracle>(
    o: &O,
    a: &O::BaseArr,
    b: &O::BaseArr,
    z: &O::Obj,
) -> Result<Verdict> {
    let (ab_dom, p1, p2) = o.base_product(&o.base_dom(a), &o.base_dom(b));
    if o.base_of(z) != ab_dom {
        return Err(Error::invalid("pseudonaturality check requires z over the domain product"));
    }
    let (_, p1c, p2c) = o.base_product(&o.base_cod(a), &o.base_cod(b));
    let a_x_b = o.base_pair(&o.base_compose(a, &p1)?, &o.base_compose(b, &p2)?)?;
    for (arrow, pd, pc) in [(a, &p1, &p1c), (b, &p2, &p2c)] {
        // route 1: project, then push along `arrow`
        let (lp, zp) = o.lift(pd, z)?;
        let (la, _) = o.lift(arrow, &zp)?;
        let route1 = o.compose(&la, &lp)?;
        // route 2: push along a x b, then project
        let (lab, zab) = o.lift(&a_x_b, z)?;
        let (lpc, _) = o.lift(pc, &zab)?;
        let route2 = o.compose(&lpc, &lab)?;
        let comp = factor_through(o, &route1, &route2, &o.base_identity(&o.base_cod(arrow)))?;
        if comp.len() != 1 {
            return Ok(Verdict::fail(format!(
                "pseudonaturality comparison at {z:?}: {} candidates",
                comp.len()
            )));
        }
        if !is_vertical_iso(o, &comp[0])? {
            return Ok(Verdict::fail(format!(
                "pseudonaturality comparison not invertible at {z:?}"
            )));
        }
    }
    Ok(Verdict::pass())
}

// ---------------------------------------------------------------------------
// Adjunction triangle identities
// ---------------------------------------------------------------------------

/// Caps for fibre-level suites. Quantifications stay exhaustive when the
/// fibre fits under the cap and are deterministically strided (and flagged
/// as sampled) otherwise.
#[derive(Clone, Copy, Debug)]
pub struct SuiteCaps {
    pub max_objects: usize,
    pub max_tuples: usize,
}

impl Default for SuiteCaps {
    fn default() -> Self {
        SuiteCaps { max_objects: 8, max_tuples: 1500 }
    }
}

/// Triangle identities for `L^{A,B} -| R^{A,B}` over all enumerated
/// objects (capped), plus the unit-level identity `eta^1_{I_X} = id`.
pub fn check_adjunction_triangles<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    b: &O::BaseObj,
    caps: &SuiteCaps,
) -> Result<Verdict> {
    // unit-level adjunction L^1 -| R^1: the terminal map of the total
    // terminal object must be its identity.
    let t = o.terminal();
    if o.terminal_arr(&t) != o.identity(&t) {
        return Ok(Verdict::fail("terminal map at the terminal object is not the identity"));
    }

    let (ab, _, _) = o.base_product(a, b);
    let fz = o.fibre_objects(&ab)?;
    let (zs, s1) = stride_select(fz.len(), caps.max_objects);
    let mut sampled = s1;

    // triangle 1: eps_{L z} ∘ L(eta_z) = id on both components
    for &zi in &zs {
        let z = &fz[zi];
        let eta = unit_eta(o, a, b, z)?;
        let (l_eta_1, l_eta_2) = oplax_l_arr(o, a, b, &eta)?;
        let (za, zb) = oplax_l(o, a, b, z)?;
        let (e1, e2) = counit_epsilon(o, &za, &zb)?;
        if o.compose(&e1, &l_eta_1)? != o.identity(&za)
            || o.compose(&e2, &l_eta_2)? != o.identity(&zb)
        {
            return Ok(
                Verdict::fail(format!("triangle eps∘L(eta) != id at {z:?}")).with_sampled(sampled)
            );
        }
    }

    // triangle 2: R(eps) ∘ eta_{x x y} = id
    let fa = o.fibre_objects(a)?;
    let fb = o.fibre_objects(b)?;
    let (xs, s2) = stride_select(fa.len(), caps.max_objects);
    let (ys, s3) = stride_select(fb.len(), caps.max_objects);
    sampled |= s2 | s3;
    for &xi in &xs {
        for &yi in &ys {
            let (x, y) = (&fa[xi], &fb[yi]);
            let (p, _, _) = o.product(x, y);
            let eta = unit_eta(o, a, b, &p)?;
            let (e1, e2) = counit_epsilon(o, x, y)?;
            let (za, zb) = oplax_l(o, a, b, &p)?;
            let (_, pa1, pa2) = o.product(&za, &zb);
            let r_eps = o.pair(&o.compose(&e1, &pa1)?, &o.compose(&e2, &pa2)?)?;
            if o.compose(&r_eps, &eta)? != o.identity(&p) {
                return Ok(Verdict::fail(format!("triangle R(eps)∘eta != id at ({x:?}, {y:?})"))
                    .with_sampled(sampled));
            }
        }
    }
    Ok(Verdict::pass().with_sampled(sampled))
}

// ---------------------------------------------------------------------------
// Groupoid check and 2-group suite
// ---------------------------------------------------------------------------

/// Every vertical arrow between enumerated fibre objects over `a` must be
/// invertible.
pub fn groupoid_check<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    caps: &SuiteCaps,
) -> Result<Verdict> {
    let fibre = o.fibre_objects(a)?;
    let (picked, sampled) = stride_select(fibre.len(), caps.max_objects);
    for &xi in &picked {
        for &yi in &picked {
            let (x, y) = (&fibre[xi], &fibre[yi]);
            for u in vertical_homs(o, x, y)? {
                if !is_vertical_iso(o, &u)? {
                    return Ok(Verdict::fail(format!("non-invertible vertical arrow {u:?}"))
                        .with_sampled(sampled));
                }
            }
        }
    }
    Ok(Verdict::pass().with_sampled(sampled))
}

/// Associator `(x ⊗ y) ⊗ z -> x ⊗ (y ⊗ z)`: the unique vertical comparison
/// between the two composite cocartesian routes out of `(x x y) x z`.
pub fn associator<O: FibrationOracle>(
    o: &O,
    m: &O::BaseArr,
    x: &O::Obj,
    y: &O::Obj,
    z: &O::Obj,
) -> Result<O::Arr> {
    // route 1: (x x y) x z -> (x ⊗ y) x z -> (x ⊗ y) ⊗ z
    let (pxy, p1, p2) = o.product(x, y);
    let (lift_xy, txy) = o.lift(m, &pxy)?;
    let (_, q1, q2) = o.product(&pxy, z);
    let (pl, _, _) = o.product(&txy, z);
    let step1 = o.pair(&o.compose(&lift_xy, &q1)?, &q2)?;
    let (lift_l, _) = o.lift(m, &pl)?;
    let route1 = o.compose(&lift_l, &step1)?;
    // route 2: (x x y) x z -> x x (y x z) -> x x (y ⊗ z) -> x ⊗ (y ⊗ z)
    let (pyz, _, _) = o.product(y, z);
    let (lift_yz, tyz) = o.lift(m, &pyz)?;
    let assoc_total = o.pair(&o.compose(&p1, &q1)?, &o.pair(&o.compose(&p2, &q1)?, &q2)?)?;
    let (_, r1, r2) = o.product(x, &pyz);
    let (pr, _, _) = o.product(x, &tyz);
    let step2 = o.pair(&r1, &o.compose(&lift_yz, &r2)?)?;
    let (lift_r, _) = o.lift(m, &pr)?;
    let route2 = o.compose(&o.compose(&lift_r, &step2)?, &assoc_total)?;
    vertical_factor(o, &route1, &route2)
}

/// Left unitor `E ⊗ x -> x`: the unique vertical arrow with
/// `lambda ∘ (lift(m) ∘ (lift(e) x 1)) = pi2` out of `I_X x x`.
fn left_unitor<O: FibrationOracle>(
    o: &O,
    m: &O::BaseArr,
    e: &O::BaseArr,
    unit: &O::Obj,
    x: &O::Obj,
) -> Result<O::Arr> {
    let t = o.terminal();
    let (le, _) = o.lift(e, &t)?;
    let (_, s1, s2) = o.product(&t, x);
    let (pex, _, _) = o.product(unit, x);
    let step = o.pair(&o.compose(&le, &s1)?, &s2)?;
    let (lift_m, _) = o.lift(m, &pex)?;
    let route = o.compose(&lift_m, &step)?;
    vertical_factor(o, &route, &s2)
}

/// Right unitor `x ⊗ E -> x`.
fn right_unitor<O: FibrationOracle>(
    o: &O,
    m: &O::BaseArr,
    e: &O::BaseArr,
    unit: &O::Obj,
    x: &O::Obj,
) -> Result<O::Arr> {
    let t = o.terminal();
    let (le, _) = o.lift(e, &t)?;
    let (_, s1, s2) = o.product(x, &t);
    let (pxe, _, _) = o.product(x, unit);
    let step = o.pair(&s1, &o.compose(&le, &s2)?)?;
    let (lift_m, _) = o.lift(m, &pxe)?;
    let route = o.compose(&lift_m, &step)?;
    vertical_factor(o, &route, &s1)
}

/// Runs the 2-group axiom suite on the fibre over `a`, where `(a, m, e)`
/// is an internal monoid and `i`, when given, makes it an internal group:
///
/// 1. pentagon and triangle coherence of the computed associators and
///    unitors,
/// 2. `gamma_x : E -> x ⊗ x*` exists canonically and is invertible
///    (`x* = i_*(x)`; only checked when `i` is supplied),
/// 3. every vertical arrow of the fibre is invertible,
/// 4. braiding symmetry and hexagon coherence when `m` is commutative.
pub fn two_group_suite<O: FibrationOracle>(
    o: &O,
    a: &O::BaseObj,
    m: &O::BaseArr,
    e: &O::BaseArr,
    i: Option<&O::BaseArr>,
    caps: &SuiteCaps,
) -> Result<Verdict> {
    if !is_internal_monoid(o, a, m, e)? {
        return Err(Error::invalid("two-group suite requires an internal monoid structure"));
    }
    if let Some(i) = i {
        if !is_internal_group(o, a, m, e, i)? {
            return Err(Error::invalid("supplied inverse arrow does not satisfy the group axioms"));
        }
    }
    let fibre = o.fibre_objects(a)?;
    let (picked, mut sampled) = stride_select(fibre.len(), caps.max_objects);
    let objs: Vec<&O::Obj> = picked.iter().map(|&i| &fibre[i]).collect();
    let n = objs.len();
    let unit = unit_object(o, e)?;

    // (3) all vertical arrows between the selected objects invertible.
    // This runs first: it is the cheapest gate, and in a non-groupoidal
    // fibre the coherence machinery below may not even be well posed.
    for &x in &objs {
        for &y in &objs {
            for u in vertical_homs(o, x, y)? {
                if !is_vertical_iso(o, &u)? {
                    return Ok(Verdict::fail(format!(
                        "fibre is not a groupoid: non-invertible {u:?}"
                    ))
                    .with_sampled(sampled));
                }
            }
        }
    }

    // (1a) triangle: (1_x ⊗ lambda_y) ∘ assoc_{x,E,y} = rho_x ⊗ 1_y
    for &x in &objs {
        for &y in &objs {
            let lam = left_unitor(o, m, e, &unit, y)?;
            let rho = right_unitor(o, m, e, &unit, x)?;
            let assoc = associator(o, m, x, &unit, y)?;
            let lhs = o.compose(&tensor_arr(o, m, &o.identity(x), &lam)?, &assoc)?;
            let rhs = tensor_arr(o, m, &rho, &o.identity(y))?;
            if lhs != rhs {
                return Ok(Verdict::fail(format!("triangle coherence fails at ({x:?}, {y:?})"))
                    .with_sampled(sampled));
            }
        }
    }

    // (1b) pentagon over quadruples, strided under the tuple cap
    if n > 0 {
        let quads = n * n * n * n;
        let (qs, s) = stride_select(quads, caps.max_tuples);
        sampled |= s;
        for q in qs {
            let w = objs[q / (n * n * n)];
            let x = objs[(q / (n * n)) % n];
            let y = objs[(q / n) % n];
            let z = objs[q % n];
            let wx = tensor_on_fibre(o, a, m, e, w, x)?;
            let xy = tensor_on_fibre(o, a, m, e, x, y)?;
            let yz = tensor_on_fibre(o, a, m, e, y, z)?;
            let a_wxy = associator(o, m, w, x, y)?;
            let a_outer = associator(o, m, &wx, y, z)?;
            let a_xyz = associator(o, m, x, y, z)?;
            let a_w_xy_z = associator(o, m, w, &xy, z)?;
            let a_wx_yz = associator(o, m, w, x, &yz)?;
            let lhs = o.compose(
                &tensor_arr(o, m, &o.identity(w), &a_xyz)?,
                &o.compose(&a_w_xy_z, &tensor_arr(o, m, &a_wxy, &o.identity(z))?)?,
            )?;
            let rhs = o.compose(&a_wx_yz, &a_outer)?;
            if lhs != rhs {
                return Ok(Verdict::fail(format!(
                    "pentagon coherence fails at ({w:?}, {x:?}, {y:?}, {z:?})"
                ))
                .with_sampled(sampled));
            }
        }
    }

    // (2) gamma_x : E -> x ⊗ x* for x* = i_*(x); both routes out of x lie
    // over the same base arrow e ∘ tau = m ∘ (1 x i) ∘ diag, so gamma is
    // the unique vertical comparison whenever the terminal route is
    // cocartesian. Zero or multiple candidates are a failure, not an
    // oracle error: they witness that the fibre is not groupal.
    if let Some(i) = i {
        let t = o.terminal();
        let (le, _) = o.lift(e, &t)?;
        for &x in &objs {
            let (lx, x_star) = o.lift(i, x)?;
            let idx = o.identity(x);
            let diag = o.pair(&idx, &idx)?;
            let (_, u1, u2) = o.product(x, x);
            let one_x_i = o.pair(&u1, &o.compose(&lx, &u2)?)?;
            let (pxs, _, _) = o.product(x, &x_star);
            let (lift_m, _) = o.lift(m, &pxs)?;
            let route2 = o.compose(&lift_m, &o.compose(&one_x_i, &diag)?)?;
            let route1 = o.compose(&le, &o.terminal_arr(x))?;
            let gammas = factor_through(o, &route1, &route2, &o.base_identity(a))?;
            if gammas.len() != 1 {
                return Ok(Verdict::fail(format!(
                    "gamma at {x:?} is not canonically defined ({} candidates)",
                    gammas.len()
                ))
                .with_sampled(sampled));
            }
            if !is_vertical_iso(o, &gammas[0])? {
                return Ok(
                    Verdict::fail(format!("gamma at {x:?} is not invertible")).with_sampled(sampled)
                );
            }
        }
    }

    // (4) braiding symmetry and hexagon when the monoid is commutative
    if is_commutative_monoid(o, a, m)? {
        for &x in &objs {
            for &y in &objs {
                let txy = braiding(o, a, m, e, x, y)?;
                let tyx = braiding(o, a, m, e, y, x)?;
                let xy = tensor_on_fibre(o, a, m, e, x, y)?;
                if o.compose(&tyx, &txy)? != o.identity(&xy) {
                    return Ok(Verdict::fail(format!("braiding not symmetric at ({x:?}, {y:?})"))
                        .with_sampled(sampled));
                }
            }
        }
        if n > 0 {
            let triples = n * n * n;
            let (ts, s) = stride_select(triples, caps.max_tuples);
            sampled |= s;
            for t in ts {
                let x = objs[t / (n * n)];
                let y = objs[(t / n) % n];
                let z = objs[t % n];
                // hexagon: a_{y,z,x} ∘ tau_{x, y⊗z} ∘ a_{x,y,z}
                //        = (1_y ⊗ tau_{x,z}) ∘ a_{y,x,z} ∘ (tau_{x,y} ⊗ 1_z)
                let yz = tensor_on_fibre(o, a, m, e, y, z)?;
                let lhs = o.compose(
                    &associator(o, m, y, z, x)?,
                    &o.compose(&braiding(o, a, m, e, x, &yz)?, &associator(o, m, x, y, z)?)?,
                )?;
                let rhs = o.compose(
                    &tensor_arr(o, m, &o.identity(y), &braiding(o, a, m, e, x, z)?)?,
                    &o.compose(
                        &associator(o, m, y, x, z)?,
                        &tensor_arr(o, m, &braiding(o, a, m, e, x, y)?, &o.identity(z))?,
                    )?,
                )?;
                if lhs != rhs {
                    return Ok(Verdict::fail(format!(
                        "hexagon coherence fails at ({x:?}, {y:?}, {z:?})"
                    ))
                    .with_sampled(sampled));
                }
            }
        }
    }

    Ok(Verdict::pass().with_sampled(sampled))
}
