//! Characteristic-rank computations over a fixed algebra.
//!
//! Everything here is a pure function of immutable inputs. The central
//! object is an [`SWProfile`]: a formal total Stiefel-Whitney class, one
//! homogeneous component per positive degree. "Formal" because nothing
//! forces such a profile to come from an actual bundle; realizability
//! enters only through [`Constraint`]s fed to the enumeration.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, ConstraintFlag, Element};
use crate::algebra::RingMap;
use crate::f2::{BitVector, RowSpace};

/// Default cap on the number of profiles an enumeration may traverse.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("space {space} is not flagged poincare")]
    NotPoincare { space: String },
    #[error("space {space} is not flagged null_cobordant")]
    NotNullCobordant { space: String },
    #[error("z out of range: z = {z}, need 0 <= z < {dim} - 1")]
    ZOutOfRange { z: usize, dim: usize },
    #[error("k = {k} exceeds the profile's characteristic rank {charrank}")]
    KExceedsCharrank { k: usize, charrank: usize },
    #[error("restricted monomial w_{indices:?} of degree {degree} is nonzero")]
    NonzeroRestrictedMonomial { indices: Vec<usize>, degree: usize },
    #[error("parity hypothesis fails: {reason}")]
    ParityHypothesis { reason: String },
    #[error("enumeration universe needs {bits} bits, over the limit of {limit} profiles")]
    CapacityExceeded { bits: usize, limit: u64 },
    #[error("space {space} carries no sq1 metadata")]
    MissingSq1 { space: String },
    #[error("space {space} declares no spherical classes")]
    NoSphericalMetadata { space: String },
    #[error("bad constraint: {0}")]
    BadConstraint(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

/// A formal total Stiefel-Whitney class over a fixed algebra.
///
/// `w_0 = 1` is implicit; `classes[i - 1]` holds the degree-`i` component
/// as coordinates over the degree-`i` basis, for `1 <= i <= dim`.
#[derive(Clone)]
pub struct SWProfile {
    algebra: Algebra,
    classes: Vec<BitVector>,
}

impl PartialEq for SWProfile {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.id() == other.algebra.id() && self.classes == other.classes
    }
}

impl Eq for SWProfile {}

impl std::fmt::Debug for SWProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SWProfile({})", self.render())
    }
}

impl SWProfile {
    /// The profile of a trivial bundle: `w = 1`.
    pub fn trivial(algebra: &Algebra) -> Self {
        let classes = (1..=algebra.dim())
            .map(|i| BitVector::zeros(algebra.betti(i)).expect("capacity"))
            .collect();
        Self {
            algebra: Algebra::clone(algebra),
            classes,
        }
    }

    /// Builds a profile from `(index, class)` assignments; unassigned
    /// indices are zero. Every class must be homogeneous of its index.
    pub fn from_classes(
        algebra: &Algebra,
        assignments: impl IntoIterator<Item = (usize, Element)>,
    ) -> Result<Self, AlgebraError> {
        let mut profile = Self::trivial(algebra);
        for (i, class) in assignments {
            if i == 0 || i > algebra.dim() {
                return Err(AlgebraError::DegreeOutOfRange {
                    degree: i,
                    dim: algebra.dim(),
                });
            }
            if class.algebra().id() != algebra.id() {
                return Err(AlgebraError::AlgebraMismatch {
                    left: class.algebra().name().to_string(),
                    right: algebra.name().to_string(),
                });
            }
            if class.degrees().any(|d| d != i) {
                return Err(AlgebraError::Malformed(format!(
                    "w_{i} assignment {} is not homogeneous of degree {i}",
                    class.render()
                )));
            }
            profile.classes[i - 1] = class.component(i);
        }
        Ok(profile)
    }

    /// Splits an inhomogeneous total class `1 + w_1 + ...` into a profile.
    pub fn from_total_class(total: &Element) -> Result<Self, AlgebraError> {
        let algebra = total.algebra();
        if total.component(0) != BitVector::unit(1, 0).expect("width 1") {
            return Err(AlgebraError::Malformed(
                "total class must have unit part 1".into(),
            ));
        }
        let mut profile = Self::trivial(algebra);
        for deg in total.degrees().filter(|&d| d > 0) {
            profile.classes[deg - 1] = total.component(deg);
        }
        Ok(profile)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Coordinates of `w_i`; requires `1 <= i <= dim`.
    pub fn class(&self, i: usize) -> &BitVector {
        &self.classes[i - 1]
    }

    pub fn element(&self, i: usize) -> Element {
        Element::homogeneous(&self.algebra, i, self.classes[i - 1].clone())
            .expect("classes are well formed")
    }

    /// The total class `1 + w_1 + ... + w_dim`.
    pub fn total_class(&self) -> Element {
        let mut acc = Element::unit(&self.algebra);
        for i in 1..=self.algebra.dim() {
            acc = acc.add(&self.element(i)).expect("same algebra");
        }
        acc
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(BitVector::is_zero)
    }

    /// Smallest index with `w_i` nonzero.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| !c.is_zero())
            .map(|p| p + 1)
    }

    /// Renders as `w = 1` or `w1 = a; w2 = d`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = (1..=self.algebra.dim())
            .filter(|&i| !self.classes[i - 1].is_zero())
            .map(|i| format!("w{i} = {}", self.element(i).render()))
            .collect();
        if parts.is_empty() {
            "w = 1".to_string()
        } else {
            parts.join("; ")
        }
    }
}

// ---------------------------------------------------------------------------
// Space analysis
// ---------------------------------------------------------------------------

/// Degreewise summary of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceAnalysis {
    /// Smallest positive degree with nonzero cohomology; `dim + 1` when all
    /// reduced cohomology vanishes.
    pub r_x: usize,
    /// Largest `k` such that every degree up to `k` has at most one basis
    /// class.
    pub k_x: usize,
    pub dim: usize,
    /// Result of the Poincare pairing check (computed, not the metadata flag).
    pub poincare: bool,
    pub betti: Vec<usize>,
}

pub fn analyze(alg: &Algebra) -> SpaceAnalysis {
    let dim = alg.dim();
    let r_x = (1..=dim).find(|&j| alg.betti(j) > 0).unwrap_or(dim + 1);
    let mut k_x = 0;
    while k_x < dim && alg.betti(k_x + 1) <= 1 {
        k_x += 1;
    }
    SpaceAnalysis {
        r_x,
        k_x,
        dim,
        poincare: poincare_pairing_check(alg),
        betti: alg.betti_vector(),
    }
}

/// True iff the top degree is one-dimensional and every cup-product pairing
/// into it is a nondegenerate square pairing.
pub fn poincare_pairing_check(alg: &Algebra) -> bool {
    let d = alg.dim();
    if alg.betti(d) != 1 {
        return false;
    }
    for j in 0..=d {
        let rows = alg.betti(j);
        let cols = alg.betti(d - j);
        if rows != cols {
            return false;
        }
        if rows == 0 {
            continue;
        }
        let mut span = RowSpace::new(cols).expect("capacity");
        for u in 0..rows {
            let mut row = BitVector::zeros(cols).expect("capacity");
            for v in 0..cols {
                // Coefficient of the top class in the product.
                let prod = alg.basis_product(j, u, d - j, v);
                row.set(v, prod.get(0)).expect("in range");
            }
            span.insert(&row).expect("widths agree");
        }
        if !span.is_full() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Spans of polynomials in the profile classes
// ---------------------------------------------------------------------------

/// For each degree `j`, the subspace of classes expressible as polynomials
/// of total degree `j` in the profile classes.
pub struct DegreeSpans {
    algebra: Algebra,
    spans: Vec<RowSpace>,
}

impl DegreeSpans {
    pub fn rank(&self, degree: usize) -> usize {
        self.spans[degree].rank()
    }

    pub fn space(&self, degree: usize) -> &RowSpace {
        &self.spans[degree]
    }

    /// True when the span equals all of the degree's cohomology.
    pub fn covered(&self, degree: usize) -> bool {
        self.spans[degree].rank() == self.algebra.betti(degree)
    }
}

fn spans_with_max_index(p: &SWProfile, max_index: usize) -> DegreeSpans {
    let alg = p.algebra();
    let dim = alg.dim();
    let mut spans: Vec<RowSpace> = Vec::with_capacity(dim + 1);
    let mut unit_span = RowSpace::new(1).expect("width 1");
    unit_span
        .insert(&BitVector::unit(1, 0).expect("width 1"))
        .expect("widths agree");
    spans.push(unit_span);
    for j in 1..=dim {
        let mut span = RowSpace::new(alg.betti(j)).expect("capacity");
        for i in 1..=j.min(max_index) {
            let w_i = p.class(i);
            if w_i.is_zero() {
                continue;
            }
            if i == j {
                span.insert(w_i).expect("widths agree");
                continue;
            }
            for row in spans[j - i].rows() {
                let prod = alg.mul_homogeneous(i, w_i, j - i, row);
                span.insert(&prod).expect("widths agree");
            }
        }
        spans.push(span);
    }
    DegreeSpans {
        algebra: Algebra::clone(alg),
        spans,
    }
}

/// Degreewise spans of all monomials in the profile classes. Computed by
/// increasing degree; no fixpoint iteration is needed since every profile
/// class has positive degree.
pub fn sw_spans(p: &SWProfile) -> DegreeSpans {
    spans_with_max_index(p, p.algebra().dim())
}

/// Spans of monomials using only `w_1 ..= w_k`.
pub fn sw_spans_restricted(p: &SWProfile, k: usize) -> DegreeSpans {
    spans_with_max_index(p, k)
}

/// Largest `k <= dim` such that every degree up to `k` is covered by
/// polynomials in the profile classes. Degrees with no cohomology are
/// vacuously covered.
pub fn charrank(p: &SWProfile) -> usize {
    let spans = sw_spans(p);
    for j in 0..=p.algebra().dim() {
        if !spans.covered(j) {
            return j - 1;
        }
    }
    p.algebra().dim()
}

// ---------------------------------------------------------------------------
// Cup length and monomial length
// ---------------------------------------------------------------------------

fn positive_classes(alg: &Algebra) -> Vec<(usize, usize)> {
    (1..=alg.dim())
        .flat_map(|deg| (0..alg.betti(deg)).map(move |idx| (deg, idx)))
        .collect()
}

/// Length of the longest nonzero product of positive-degree classes.
///
/// Dynamic programming on spans: products are multilinear, so products of
/// basis classes span all products of a given length.
pub fn cup_length(alg: &Algebra) -> usize {
    let dim = alg.dim();
    let mut cur: Vec<RowSpace> = (0..=dim)
        .map(|j| {
            let mut s = RowSpace::new(alg.betti(j)).expect("capacity");
            if j > 0 {
                for idx in 0..alg.betti(j) {
                    s.insert(&BitVector::unit(alg.betti(j), idx).expect("valid"))
                        .expect("widths agree");
                }
            }
            s
        })
        .collect();
    if cur.iter().all(|s| s.rank() == 0) {
        return 0;
    }
    let mut t = 1;
    loop {
        let mut next: Vec<RowSpace> = (0..=dim)
            .map(|j| RowSpace::new(alg.betti(j)).expect("capacity"))
            .collect();
        let mut any = false;
        for j in 1..=dim {
            for row in cur[j].rows() {
                for i in 1..=(dim - j) {
                    for idx in 0..alg.betti(i) {
                        let e = BitVector::unit(alg.betti(i), idx).expect("valid");
                        let prod = alg.mul_homogeneous(j, row, i, &e);
                        if !prod.is_zero() && next[j + i].insert(&prod).expect("widths agree") {
                            any = true;
                        }
                    }
                }
            }
        }
        if !any {
            return t;
        }
        cur = next;
        t += 1;
    }
}

/// One maximal-length list of basis classes with nonzero product, as
/// `(degree, name)` pairs; empty when the cup length is zero.
pub fn cup_witness(alg: &Algebra) -> Vec<(usize, String)> {
    let target = cup_length(alg);
    let classes = positive_classes(alg);
    let mut path: Vec<(usize, usize)> = Vec::new();

    fn dfs(
        alg: &Algebra,
        classes: &[(usize, usize)],
        cur: Option<(usize, BitVector)>,
        remaining: usize,
        min_class: usize,
        path: &mut Vec<(usize, usize)>,
    ) -> bool {
        if remaining == 0 {
            return true;
        }
        for (ci, &(deg, idx)) in classes.iter().enumerate().skip(min_class) {
            let next = match &cur {
                None => Some((deg, BitVector::unit(alg.betti(deg), idx).expect("valid"))),
                Some((cd, bits)) => {
                    // Each remaining factor has degree at least one.
                    if cd + deg + (remaining - 1) > alg.dim() {
                        continue;
                    }
                    let e = BitVector::unit(alg.betti(deg), idx).expect("valid");
                    let prod = alg.mul_homogeneous(*cd, bits, deg, &e);
                    if prod.is_zero() {
                        continue;
                    }
                    Some((cd + deg, prod))
                }
            };
            path.push((deg, idx));
            if dfs(alg, classes, next, remaining - 1, ci, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    if target > 0 {
        let found = dfs(alg, &classes, None, target, 0, &mut path);
        debug_assert!(found, "cup length witness must exist");
    }
    path.into_iter()
        .map(|(deg, idx)| (deg, alg.basis_name(deg, idx).to_string()))
        .collect()
}

/// Longest `t` with some product of `t` (not necessarily distinct) nonzero
/// profile classes nonzero; zero for the trivial profile.
pub fn max_sw_monomial_length(p: &SWProfile) -> usize {
    let alg = p.algebra();
    let dim = alg.dim();
    let factors: Vec<(usize, &BitVector)> = (1..=dim)
        .map(|i| (i, p.class(i)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    if factors.is_empty() {
        return 0;
    }
    let mut cur: Vec<RowSpace> = (0..=dim)
        .map(|j| RowSpace::new(alg.betti(j)).expect("capacity"))
        .collect();
    for &(i, c) in &factors {
        cur[i].insert(c).expect("widths agree");
    }
    let mut t = 1;
    loop {
        let mut next: Vec<RowSpace> = (0..=dim)
            .map(|j| RowSpace::new(alg.betti(j)).expect("capacity"))
            .collect();
        let mut any = false;
        for j in 1..=dim {
            for row in cur[j].rows() {
                for &(i, c) in &factors {
                    if j + i > dim {
                        continue;
                    }
                    let prod = alg.mul_homogeneous(j, row, i, c);
                    if !prod.is_zero() && next[j + i].insert(&prod).expect("widths agree") {
                        any = true;
                    }
                }
            }
        }
        if !any {
            return t;
        }
        cur = next;
        t += 1;
    }
}

// ---------------------------------------------------------------------------
// Cup-length bounds
// ---------------------------------------------------------------------------

/// An upper bound for the cup length, kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupBound {
    pub exact: Ratio<i64>,
    pub floor: i64,
}

fn bound_value(dim: usize, cutoff: usize, r_x: usize) -> CupBound {
    let exact = Ratio::from_integer(1)
        + Ratio::new(dim as i64 - cutoff as i64 - 1, r_x as i64);
    let floor = exact.floor().to_integer().to_i64().expect("small");
    CupBound { exact, floor }
}

/// Searches for a nonzero monomial `w_{i_1} ... w_{i_r}` with all indices
/// at most `k` and total degree exactly `degree`.
fn find_restricted_monomial(p: &SWProfile, k: usize, degree: usize) -> Option<Vec<usize>> {
    let alg = p.algebra();
    let indices: Vec<usize> = (1..=k.min(alg.dim()))
        .filter(|&i| !p.class(i).is_zero())
        .collect();

    fn dfs(
        p: &SWProfile,
        indices: &[usize],
        cur: Option<(usize, BitVector)>,
        degree: usize,
        min_pos: usize,
        path: &mut Vec<usize>,
    ) -> bool {
        if let Some((d, _)) = &cur {
            if *d == degree {
                return true;
            }
        }
        let cur_deg = cur.as_ref().map_or(0, |(d, _)| *d);
        for (pos, &i) in indices.iter().enumerate().skip(min_pos) {
            if cur_deg + i > degree {
                continue;
            }
            let next = match &cur {
                None => (i, p.class(i).clone()),
                Some((d, bits)) => {
                    let prod = p.algebra().mul_homogeneous(*d, bits, i, p.class(i));
                    if prod.is_zero() {
                        continue;
                    }
                    (d + i, prod)
                }
            };
            path.push(i);
            if dfs(p, indices, Some(next), degree, pos, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    let mut path = Vec::new();
    if dfs(p, &indices, None, degree, 0, &mut path) {
        Some(path)
    } else {
        None
    }
}

/// Cup-length bound from a bundle whose monomials in `w_1 ..= w_k` all
/// vanish in the top degree: `1 + (d - k - 1) / r_X`.
///
/// Preconditions are enforced, not assumed: the space must be flagged
/// poincare, `k` may not exceed the profile's characteristic rank, and the
/// vanishing hypothesis is checked via the restricted spans.
pub fn cup_bound_from_profile(p: &SWProfile, k: usize) -> Result<CupBound, EngineError> {
    let alg = p.algebra();
    if !alg.meta().poincare {
        return Err(EngineError::NotPoincare {
            space: alg.name().to_string(),
        });
    }
    let cr = charrank(p);
    if k > cr {
        return Err(EngineError::KExceedsCharrank { k, charrank: cr });
    }
    let dim = alg.dim();
    let restricted = sw_spans_restricted(p, k);
    if restricted.rank(dim) > 0 {
        let indices = find_restricted_monomial(p, k, dim)
            .expect("nonzero restricted span is spanned by monomials");
        return Err(EngineError::NonzeroRestrictedMonomial {
            indices,
            degree: dim,
        });
    }
    Ok(bound_value(dim, k, analyze(alg).r_x))
}

/// Cup-length bound for null-cobordant closed manifolds: `1 + (d - z - 1) / r_X`
/// for any `z < d - 1` below which every class is polynomial in the
/// manifold's own Stiefel-Whitney classes (an input here, not a computation).
pub fn cup_bound_null_cobordant(alg: &Algebra, z: usize) -> Result<CupBound, EngineError> {
    let dim = alg.dim();
    if dim < 2 || z >= dim - 1 {
        return Err(EngineError::ZOutOfRange { z, dim });
    }
    if !alg.meta().poincare {
        return Err(EngineError::NotPoincare {
            space: alg.name().to_string(),
        });
    }
    if !alg.meta().null_cobordant {
        return Err(EngineError::NotNullCobordant {
            space: alg.name().to_string(),
        });
    }
    Ok(bound_value(dim, z, analyze(alg).r_x))
}

// ---------------------------------------------------------------------------
// Whitney sums, inverses, pullbacks
// ---------------------------------------------------------------------------

/// Profile of a Whitney sum: the cup product of the total classes.
pub fn whitney_sum(p: &SWProfile, q: &SWProfile) -> Result<SWProfile, AlgebraError> {
    let total = p.total_class().mul(&q.total_class())?;
    SWProfile::from_total_class(&total)
}

/// The unique profile `v` with `v * w(p) = 1` after truncation.
pub fn sw_inverse(p: &SWProfile) -> SWProfile {
    let alg = p.algebra();
    let dim = alg.dim();
    let mut inv: Vec<BitVector> = Vec::with_capacity(dim);
    for j in 1..=dim {
        let mut acc = BitVector::zeros(alg.betti(j)).expect("capacity");
        for i in 1..=j {
            let w_i = p.class(i);
            if w_i.is_zero() {
                continue;
            }
            if i == j {
                acc.xor_assign(w_i).expect("widths agree");
            } else {
                let prod = alg.mul_homogeneous(i, w_i, j - i, &inv[j - i - 1]);
                acc.xor_assign(&prod).expect("widths agree");
            }
        }
        inv.push(acc);
    }
    SWProfile {
        algebra: Algebra::clone(alg),
        classes: inv,
    }
}

/// Transports a profile on the map's source to the map's target by
/// applying the map to every component.
pub fn pullback(h: &RingMap, p: &SWProfile) -> Result<SWProfile, AlgebraError> {
    if p.algebra().id() != h.source().id() {
        return Err(AlgebraError::AlgebraMismatch {
            left: p.algebra().name().to_string(),
            right: h.source().name().to_string(),
        });
    }
    let target = h.target();
    let mut assignments = Vec::new();
    for i in 1..=target.dim().min(h.source().dim()) {
        let img = h.apply(&p.element(i))?;
        assignments.push((i, img));
    }
    SWProfile::from_classes(target, assignments)
}

// ---------------------------------------------------------------------------
// Parity
// ---------------------------------------------------------------------------

/// `charrank mod 2`, defined only on spaces where it is additive under
/// Whitney sums: `r_X` must be one and every profile in the formal universe
/// must have characteristic rank zero or odd.
pub fn charrank_parity(p: &SWProfile) -> Result<u8, EngineError> {
    let alg = p.algebra();
    let analysis = analyze(alg);
    if analysis.r_x != 1 {
        return Err(EngineError::ParityHypothesis {
            reason: format!("r_X = {} (must be 1)", analysis.r_x),
        });
    }
    for q in enumerate_profiles(alg, &[], DEFAULT_ENUMERATION_LIMIT)? {
        let cr = charrank(&q);
        if cr != 0 && cr.is_multiple_of(2) {
            return Err(EngineError::ParityHypothesis {
                reason: format!(
                    "profile {} has even positive characteristic rank {cr}",
                    q.render()
                ),
            });
        }
    }
    Ok((charrank(p) % 2) as u8)
}

// ---------------------------------------------------------------------------
// Constrained enumeration
// ---------------------------------------------------------------------------

/// A realizability filter on formal profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// The first nonzero Stiefel-Whitney class of a real bundle sits in a
    /// power-of-two degree.
    Power2FirstNonzero,
    /// `functional(w_degree)` must vanish when `degree` is not 1, 2, 4
    /// or 8: no bundle restricts to a sphere of such a degree with a top
    /// class.
    Spherical { degree: usize, functional: BitVector },
    /// Only the trivial profile is realizable.
    TrivialOnly,
    /// Wu relation at index two: `Sq1(w_2) = w_1 w_2 + w_3`.
    WuSq1,
    /// The listed `(degree, coordinate)` pairs must vanish.
    ForcedZero { coords: Vec<(usize, usize)> },
}

impl Constraint {
    pub fn describe(&self) -> String {
        match self {
            Constraint::Power2FirstNonzero => "power2".into(),
            Constraint::Spherical { degree, .. } => format!("spherical({degree})"),
            Constraint::TrivialOnly => "trivial-only".into(),
            Constraint::WuSq1 => "wu-sq1".into(),
            Constraint::ForcedZero { coords } => format!("forced-zero({coords:?})"),
        }
    }
}

/// Expands declared constraint flags into engine constraints using the
/// space's metadata (spherical classes become dual-basis functionals).
pub fn resolve_constraints(
    alg: &Algebra,
    flags: &[ConstraintFlag],
) -> Result<Vec<Constraint>, EngineError> {
    let mut out = Vec::new();
    for flag in flags {
        match flag {
            ConstraintFlag::Power2 => out.push(Constraint::Power2FirstNonzero),
            ConstraintFlag::TrivialOnly => out.push(Constraint::TrivialOnly),
            ConstraintFlag::WuSq1 => {
                if alg.sq1().is_none() {
                    return Err(EngineError::MissingSq1 {
                        space: alg.name().to_string(),
                    });
                }
                out.push(Constraint::WuSq1);
            }
            ConstraintFlag::Spherical => {
                if alg.meta().spherical.is_empty() {
                    return Err(EngineError::NoSphericalMetadata {
                        space: alg.name().to_string(),
                    });
                }
                for &(degree, index) in &alg.meta().spherical {
                    let functional = BitVector::unit(alg.betti(degree), index)
                        .map_err(AlgebraError::from)?;
                    out.push(Constraint::Spherical { degree, functional });
                }
            }
        }
    }
    Ok(out)
}

fn validate_constraints(alg: &Algebra, constraints: &[Constraint]) -> Result<(), EngineError> {
    for c in constraints {
        match c {
            Constraint::Spherical { degree, functional } => {
                if *degree == 0 || *degree > alg.dim() {
                    return Err(EngineError::BadConstraint(format!(
                        "spherical degree {degree} out of range"
                    )));
                }
                if functional.width() != alg.betti(*degree) {
                    return Err(EngineError::BadConstraint(format!(
                        "spherical functional width {} does not match degree {degree}",
                        functional.width()
                    )));
                }
                if functional.is_zero() {
                    return Err(EngineError::BadConstraint(
                        "spherical functional must be nonzero".into(),
                    ));
                }
            }
            Constraint::WuSq1 => {
                if alg.sq1().is_none() {
                    return Err(EngineError::MissingSq1 {
                        space: alg.name().to_string(),
                    });
                }
            }
            Constraint::ForcedZero { coords } => {
                for &(deg, idx) in coords {
                    if deg == 0 || deg > alg.dim() || idx >= alg.betti(deg) {
                        return Err(EngineError::BadConstraint(format!(
                            "forced-zero coordinate ({deg}, {idx}) out of range"
                        )));
                    }
                }
            }
            Constraint::Power2FirstNonzero | Constraint::TrivialOnly => {}
        }
    }
    Ok(())
}

const SPHERE_BUNDLE_DEGREES: [usize; 4] = [1, 2, 4, 8];

fn passes(alg: &Algebra, profile: &SWProfile, constraints: &[Constraint]) -> bool {
    constraints.iter().all(|c| match c {
        Constraint::Power2FirstNonzero => profile
            .first_nonzero()
            .is_none_or(|i| i.is_power_of_two()),
        Constraint::Spherical { degree, functional } => {
            SPHERE_BUNDLE_DEGREES.contains(degree)
                || !functional.dot(profile.class(*degree)).expect("widths agree")
        }
        Constraint::TrivialOnly => profile.is_trivial(),
        Constraint::WuSq1 => {
            let dim = alg.dim();
            if dim < 2 {
                return true;
            }
            let sq1 = alg.sq1().expect("validated");
            let lhs = sq1.apply_homogeneous(alg, 2, profile.class(2));
            if dim < 3 {
                return lhs.is_zero();
            }
            let mut rhs = alg.mul_homogeneous(1, profile.class(1), 2, profile.class(2));
            rhs.xor_assign(profile.class(3)).expect("widths agree");
            lhs == rhs
        }
        Constraint::ForcedZero { coords } => coords
            .iter()
            .all(|&(deg, idx)| !profile.class(deg).get(idx)),
    })
}

struct EnumerationLayout {
    /// Degrees with nonzero cohomology, with their coordinate counts.
    degrees: Vec<(usize, usize)>,
    total_bits: u32,
}

impl EnumerationLayout {
    fn of(alg: &Algebra) -> Self {
        let degrees: Vec<(usize, usize)> = (1..=alg.dim())
            .map(|j| (j, alg.betti(j)))
            .filter(|&(_, b)| b > 0)
            .collect();
        let total_bits = degrees.iter().map(|&(_, b)| b as u32).sum();
        Self {
            degrees,
            total_bits,
        }
    }

    /// Profiles are ordered lexicographically over the degree-major
    /// coordinate bitstring; the counter's most significant bit is the
    /// first coordinate of the lowest degree.
    fn profile_at(&self, alg: &Algebra, counter: u64) -> SWProfile {
        let mut profile = SWProfile::trivial(alg);
        let mut pos = 0u32;
        for &(deg, betti) in &self.degrees {
            let mut bits = BitVector::zeros(betti).expect("capacity");
            for idx in 0..betti {
                if counter >> (self.total_bits - 1 - pos) & 1 == 1 {
                    bits.set(idx, true).expect("in range");
                }
                pos += 1;
            }
            profile.classes[deg - 1] = bits;
        }
        profile
    }
}

/// Deterministic stream over all constrained profiles, in lexicographic
/// order over degree-major coordinate bitstrings.
pub struct ProfileEnumeration {
    algebra: Algebra,
    constraints: Vec<Constraint>,
    layout: EnumerationLayout,
    next: u64,
    universe: u64,
}

impl ProfileEnumeration {
    /// Total size of the unconstrained universe being traversed.
    pub fn universe(&self) -> u64 {
        self.universe
    }
}

impl Iterator for ProfileEnumeration {
    type Item = SWProfile;

    fn next(&mut self) -> Option<SWProfile> {
        while self.next < self.universe {
            let profile = self.layout.profile_at(&self.algebra, self.next);
            self.next += 1;
            if passes(&self.algebra, &profile, &self.constraints) {
                return Some(profile);
            }
        }
        None
    }
}

fn enumeration_layout(
    alg: &Algebra,
    constraints: &[Constraint],
    limit: u64,
) -> Result<(EnumerationLayout, u64), EngineError> {
    validate_constraints(alg, constraints)?;
    let layout = EnumerationLayout::of(alg);
    if constraints.contains(&Constraint::TrivialOnly) {
        // The trivial profile is counter zero; nothing else can pass, so
        // the traversal is a single probe and needs no capacity check.
        return Ok((layout, 1));
    }
    if layout.total_bits >= 63 || 1u64 << layout.total_bits > limit {
        return Err(EngineError::CapacityExceeded {
            bits: layout.total_bits as usize,
            limit,
        });
    }
    let universe = 1u64 << layout.total_bits;
    Ok((layout, universe))
}

/// Streams every assignment of `w_j` over the positive degrees that
/// survives all constraints.
pub fn enumerate_profiles(
    alg: &Algebra,
    constraints: &[Constraint],
    limit: u64,
) -> Result<ProfileEnumeration, EngineError> {
    let (layout, universe) = enumeration_layout(alg, constraints, limit)?;
    Ok(ProfileEnumeration {
        algebra: Algebra::clone(alg),
        constraints: constraints.to_vec(),
        layout,
        next: 0,
        universe,
    })
}

/// Result of maximizing the characteristic rank over a constrained universe.
#[derive(Debug, Clone)]
pub struct UcharrankResult {
    pub value: usize,
    /// First maximizer in enumeration order.
    pub witness: SWProfile,
    /// Size of the traversed universe.
    pub universe: u64,
    /// Number of profiles surviving the constraints.
    pub surviving: u64,
}

/// Maximum characteristic rank over the constrained formal universe.
///
/// This is an upper bound for the true upper characteristic rank whenever
/// the constraints are sound for the space. Chunks are evaluated in
/// parallel and merged by maximum with lexicographic tie-break, so the
/// witness is deterministic.
pub fn ucharrank_formal(
    alg: &Algebra,
    constraints: &[Constraint],
    limit: u64,
) -> Result<UcharrankResult, EngineError> {
    let (layout, universe) = enumeration_layout(alg, constraints, limit)?;
    let (best, surviving) = (0..universe)
        .into_par_iter()
        .fold(
            || (None::<(usize, u64)>, 0u64),
            |(best, surviving), counter| {
                let profile = layout.profile_at(alg, counter);
                if !passes(alg, &profile, constraints) {
                    return (best, surviving);
                }
                let rank = charrank(&profile);
                let better = match best {
                    None => true,
                    Some((r, c)) => rank > r || (rank == r && counter < c),
                };
                (
                    if better { Some((rank, counter)) } else { best },
                    surviving + 1,
                )
            },
        )
        .reduce(
            || (None, 0),
            |(a, sa), (b, sb)| {
                let best = match (a, b) {
                    (None, b) => b,
                    (a, None) => a,
                    (Some((ra, ca)), Some((rb, cb))) => {
                        if rb > ra || (rb == ra && cb < ca) {
                            Some((rb, cb))
                        } else {
                            Some((ra, ca))
                        }
                    }
                };
                (best, sa + sb)
            },
        );
    let (value, counter) = best.expect("the trivial profile survives every constraint");
    Ok(UcharrankResult {
        value,
        witness: layout.profile_at(alg, counter),
        universe,
        surviving,
    })
}

// ---------------------------------------------------------------------------
// Sq^1 validation and report lints
// ---------------------------------------------------------------------------

/// Checks the Sq^1 data attached to the algebra: `Sq1(Sq1(x)) = 0`, the
/// derivation rule on all basis pairs, and `Sq1(x) = x^2` in degree one.
/// Degree raising and linearity hold by construction. Violations are data,
/// not errors.
pub fn sq1_validate(alg: &Algebra) -> Result<Vec<String>, EngineError> {
    let sq1 = alg.sq1().ok_or_else(|| EngineError::MissingSq1 {
        space: alg.name().to_string(),
    })?;
    let dim = alg.dim();
    let mut violations = Vec::new();

    for deg in 0..=dim {
        for idx in 0..alg.betti(deg) {
            let img = sq1.basis_image(deg, idx);
            let twice = sq1.apply_homogeneous(alg, deg + 1, img);
            if !twice.is_zero() {
                violations.push(format!(
                    "Sq1(Sq1({})) is nonzero",
                    alg.basis_name(deg, idx)
                ));
            }
        }
    }

    for idx in 0..alg.betti(1) {
        let img = sq1.basis_image(1, idx);
        let expect = if dim >= 2 {
            let e = BitVector::unit(alg.betti(1), idx).expect("valid");
            alg.mul_homogeneous(1, &e, 1, &e)
        } else {
            BitVector::zeros(0).expect("capacity")
        };
        if *img != expect {
            violations.push(format!(
                "Sq1({0}) differs from {0}^2 in degree 1",
                alg.basis_name(1, idx)
            ));
        }
    }

    for i in 1..=dim {
        for j in i..=dim {
            if i + j + 1 > dim {
                continue;
            }
            for u in 0..alg.betti(i) {
                for v in 0..alg.betti(j) {
                    let prod = alg.basis_product(i, u, j, v);
                    let lhs = sq1.apply_homogeneous(alg, i + j, &prod);
                    let eu = BitVector::unit(alg.betti(i), u).expect("valid");
                    let ev = BitVector::unit(alg.betti(j), v).expect("valid");
                    let mut rhs = alg.mul_homogeneous(i + 1, sq1.basis_image(i, u), j, &ev);
                    rhs.xor_assign(&alg.mul_homogeneous(i, &eu, j + 1, sq1.basis_image(j, v)))
                        .expect("widths agree");
                    if lhs != rhs {
                        violations.push(format!(
                            "derivation rule fails on {} * {}",
                            alg.basis_name(i, u),
                            alg.basis_name(j, v)
                        ));
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// Report-level observations: a profile whose characteristic rank reaches a
/// spherical degree in {1, 2, 4, 8} must have `w_k` nonzero against that
/// spherical class to be realizable by a bundle.
pub fn spherical_lints(p: &SWProfile) -> Vec<String> {
    let alg = p.algebra();
    let cr = charrank(p);
    let mut lints = Vec::new();
    for &(k, idx) in &alg.meta().spherical {
        if SPHERE_BUNDLE_DEGREES.contains(&k) && cr >= k && !p.class(k).get(idx) {
            lints.push(format!(
                "charrank {cr} reaches spherical degree {k}, but w_{k} vanishes on the \
                 spherical class {}; no bundle realizes this profile",
                alg.basis_name(k, idx)
            ));
        }
    }
    lints
}
