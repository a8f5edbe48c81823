//! Finite graded-commutative F2-algebras with explicit bases.
//!
//! A [`GradedAlgebra`] stores a named basis for each degree `0..=dim` and the
//! full table of structure constants for cup products of basis classes.
//! Products landing above the top degree are silently truncated to zero,
//! matching the cohomology of a `dim`-dimensional complex. Rings here are
//! tiny, so the table is stored exhaustively per basis pair.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::f2::{BitVector, F2Error, RowSpace};

/// Shared handle to an immutable algebra.
pub type Algebra = Arc<GradedAlgebra>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },
    #[error("degree {degree} out of range (top degree {dim})")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("no basis class {index} in degree {degree}")]
    NoSuchBasisClass { degree: usize, index: usize },
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("ring map rejected: {0}")]
    MapValidation(String),
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// Engine constraint selectors a presentation can declare as its defaults.
///
/// These are only names; the engine resolves them against the space's
/// metadata (spherical classes, Sq^1 data) when enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintFlag {
    /// First nonzero Stiefel-Whitney index must be a power of two.
    Power2,
    /// Evaluation of w_k against each declared spherical class must vanish
    /// when k is not 1, 2, 4 or 8.
    Spherical,
    /// Only the trivial profile is realizable.
    TrivialOnly,
    /// Wu relation at index two: Sq^1(w_2) = w_1 w_2 + w_3.
    WuSq1,
}

impl ConstraintFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintFlag::Power2 => "power2",
            ConstraintFlag::Spherical => "spherical",
            ConstraintFlag::TrivialOnly => "trivial-only",
            ConstraintFlag::WuSq1 => "wu-sq1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "power2" => Some(ConstraintFlag::Power2),
            "spherical" => Some(ConstraintFlag::Spherical),
            "trivial-only" | "trivial_only" => Some(ConstraintFlag::TrivialOnly),
            "wu-sq1" | "wu_sq1" => Some(ConstraintFlag::WuSq1),
            _ => None,
        }
    }
}

/// Realizability metadata carried by a space presentation.
///
/// The engine consumes these as trusted inputs; none of them are derivable
/// from the ring structure alone.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpaceMeta {
    /// Asserted to satisfy Poincare duality (closed-manifold input).
    pub poincare: bool,
    /// Asserted to bound (unoriented boundary input).
    pub null_cobordant: bool,
    /// All positive-degree cup products vanish for suspension reasons.
    pub suspension: bool,
    /// Spherical classes as (degree, basis index) pairs.
    pub spherical: Vec<(usize, usize)>,
    /// Constraint set the space declares as its enumeration default.
    pub constraint_flags: Vec<ConstraintFlag>,
}

/// The first Steenrod square on basis classes, extended linearly.
///
/// `images[deg][idx]` is the degree `deg + 1` coordinate vector of Sq^1 of
/// basis class `idx` in degree `deg`; top-degree classes map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sq1Map {
    images: Vec<Vec<BitVector>>,
}

impl Sq1Map {
    pub(crate) fn new(images: Vec<Vec<BitVector>>) -> Self {
        Self { images }
    }

    pub fn basis_image(&self, degree: usize, index: usize) -> &BitVector {
        &self.images[degree][index]
    }

    /// Linear extension to homogeneous coordinates of the given degree.
    pub fn apply_homogeneous(&self, alg: &GradedAlgebra, degree: usize, bits: &BitVector) -> BitVector {
        let out_width = alg.betti(degree + 1);
        let mut acc = BitVector::zeros(out_width).expect("capacity");
        for idx in bits.iter_ones() {
            acc.xor_assign(&self.images[degree][idx]).expect("widths agree");
        }
        acc
    }
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A finite graded-commutative algebra over F2 with chosen bases.
pub struct GradedAlgebra {
    id: u64,
    name: String,
    dim: usize,
    basis: Vec<Vec<String>>,
    /// `table[i][u][j][v]`, populated for `i, j >= 1` with `i + j <= dim`,
    /// is the coordinate vector of the product in degree `i + j`.
    table: Vec<Vec<Vec<Vec<BitVector>>>>,
    meta: SpaceMeta,
    sq1: Option<Sq1Map>,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("betti", &self.betti_vector())
            .finish()
    }
}

impl GradedAlgebra {
    /// Builds an algebra from a basis and a product callback.
    ///
    /// `basis` must have one entry per degree `0..=dim` with exactly one
    /// class (the unit) in degree zero. `mul(i, u, j, v)` must return the
    /// product coordinates in degree `i + j`; it is queried once per pair
    /// with `i, j >= 1` and `i + j <= dim`. Unit products and truncation
    /// above the top degree are handled structurally.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        basis: Vec<Vec<String>>,
        meta: SpaceMeta,
        mut mul: impl FnMut(usize, usize, usize, usize) -> Result<BitVector, AlgebraError>,
    ) -> Result<Algebra, AlgebraError> {
        let name = name.into();
        if basis.len() != dim + 1 {
            return Err(AlgebraError::Malformed(format!(
                "expected {} basis degrees, got {}",
                dim + 1,
                basis.len()
            )));
        }
        if basis[0].len() != 1 {
            return Err(AlgebraError::Malformed(
                "degree 0 must hold exactly the unit class".into(),
            ));
        }
        for (deg, names) in basis.iter().enumerate() {
            // Exercises the width cap.
            BitVector::zeros(names.len())?;
            let mut seen = names.to_vec();
            seen.sort();
            seen.dedup();
            if seen.len() != names.len() {
                return Err(AlgebraError::Malformed(format!(
                    "duplicate basis name in degree {deg}"
                )));
            }
        }

        let mut table = vec![Vec::new(); dim + 1];
        for i in 1..=dim {
            let mut per_u = Vec::with_capacity(basis[i].len());
            for u in 0..basis[i].len() {
                let mut per_j = vec![Vec::new(); dim + 1];
                for j in 1..=(dim - i) {
                    let mut per_v = Vec::with_capacity(basis[j].len());
                    for v in 0..basis[j].len() {
                        let prod = mul(i, u, j, v)?;
                        if prod.width() != basis[i + j].len() {
                            return Err(AlgebraError::Malformed(format!(
                                "product of degree-{i} class {u} and degree-{j} class {v} \
                                 has width {} but degree {} has {} classes",
                                prod.width(),
                                i + j,
                                basis[i + j].len()
                            )));
                        }
                        per_v.push(prod);
                    }
                    per_j[j] = per_v;
                }
                per_u.push(per_j);
            }
            table[i] = per_u;
        }

        Ok(Arc::new(Self {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            name,
            dim,
            basis,
            table,
            meta,
            sq1: None,
        }))
    }

    /// Attaches Sq^1 data. Only possible before the algebra is shared.
    pub(crate) fn attach_sq1(mut alg: Algebra, sq1: Sq1Map) -> Algebra {
        Arc::get_mut(&mut alg)
            .expect("sq1 attached before sharing")
            .sq1 = Some(sq1);
        alg
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn meta(&self) -> &SpaceMeta {
        &self.meta
    }

    pub fn sq1(&self) -> Option<&Sq1Map> {
        self.sq1.as_ref()
    }

    /// Number of basis classes in the given degree; zero above `dim`.
    pub fn betti(&self, degree: usize) -> usize {
        if degree <= self.dim {
            self.basis[degree].len()
        } else {
            0
        }
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis_names(&self, degree: usize) -> &[String] {
        &self.basis[degree]
    }

    pub fn basis_name(&self, degree: usize, index: usize) -> &str {
        &self.basis[degree][index]
    }

    pub fn basis_index(&self, degree: usize, name: &str) -> Option<usize> {
        if degree > self.dim {
            return None;
        }
        self.basis[degree].iter().position(|n| n == name)
    }

    /// Locates a basis class by name across all degrees.
    pub fn find_basis_class(&self, name: &str) -> Option<(usize, usize)> {
        (0..=self.dim).find_map(|deg| self.basis_index(deg, name).map(|idx| (deg, idx)))
    }

    /// Total number of positive-degree basis classes.
    pub fn positive_bits(&self) -> usize {
        (1..=self.dim).map(|j| self.betti(j)).sum()
    }

    /// Product of two basis classes as coordinates in degree `i + j`.
    ///
    /// Requires `i + j <= dim`; callers truncate higher products themselves.
    pub fn basis_product(&self, i: usize, u: usize, j: usize, v: usize) -> BitVector {
        assert!(i + j <= self.dim, "product degree above top degree");
        if i == 0 {
            return BitVector::unit(self.betti(j), v).expect("valid index");
        }
        if j == 0 {
            return BitVector::unit(self.betti(i), u).expect("valid index");
        }
        self.table[i][u][j][v].clone()
    }

    /// Product of homogeneous coordinate vectors; requires `i + j <= dim`.
    pub fn mul_homogeneous(&self, i: usize, a: &BitVector, j: usize, b: &BitVector) -> BitVector {
        assert!(i + j <= self.dim, "product degree above top degree");
        let mut acc = BitVector::zeros(self.betti(i + j)).expect("capacity checked");
        for u in a.iter_ones() {
            for v in b.iter_ones() {
                acc.xor_assign(&self.basis_product(i, u, j, v))
                    .expect("widths agree");
            }
        }
        acc
    }

    /// Checks the algebra laws on the stored table and returns the list of
    /// violations; empty means valid.
    ///
    /// The unit law and truncation consistency hold structurally (the table
    /// never stores unit rows, and the constructor rejects products of the
    /// wrong width), so the real content is commutativity on all basis
    /// pairs and associativity on all basis triples of total degree at most
    /// `dim`.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for i in 1..=self.dim {
            for j in i..=self.dim {
                if i + j > self.dim {
                    continue;
                }
                for u in 0..self.betti(i) {
                    for v in 0..self.betti(j) {
                        if self.basis_product(i, u, j, v) != self.basis_product(j, v, i, u) {
                            violations.push(format!(
                                "commutativity fails on {} * {}",
                                self.basis_name(i, u),
                                self.basis_name(j, v)
                            ));
                        }
                    }
                }
            }
        }
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                for k in 1..=self.dim {
                    if i + j + k > self.dim {
                        continue;
                    }
                    for u in 0..self.betti(i) {
                        let eu = BitVector::unit(self.betti(i), u).expect("valid");
                        for v in 0..self.betti(j) {
                            for w in 0..self.betti(k) {
                                let ew = BitVector::unit(self.betti(k), w).expect("valid");
                                let uv = self.basis_product(i, u, j, v);
                                let vw = self.basis_product(j, v, k, w);
                                let left = self.mul_homogeneous(i + j, &uv, k, &ew);
                                let right = self.mul_homogeneous(i, &eu, j + k, &vw);
                                if left != right {
                                    violations.push(format!(
                                        "associativity fails on ({} * {}) * {}",
                                        self.basis_name(i, u),
                                        self.basis_name(j, v),
                                        self.basis_name(k, w)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        violations
    }
}

/// A cohomology class, possibly inhomogeneous, as degreewise coordinates.
///
/// Zero components are never stored, so equality is structural.
#[derive(Clone)]
pub struct Element {
    algebra: Algebra,
    comps: BTreeMap<usize, BitVector>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.id == other.algebra.id && self.comps == other.comps
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({} in {})", self.render(), self.algebra.name)
    }
}

impl Element {
    pub fn zero(algebra: &Algebra) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            comps: BTreeMap::new(),
        }
    }

    pub fn unit(algebra: &Algebra) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            comps: BTreeMap::from([(0, BitVector::unit(1, 0).expect("width 1"))]),
        }
    }

    pub fn basis_class(
        algebra: &Algebra,
        degree: usize,
        index: usize,
    ) -> Result<Self, AlgebraError> {
        if degree > algebra.dim() {
            return Err(AlgebraError::DegreeOutOfRange {
                degree,
                dim: algebra.dim(),
            });
        }
        if index >= algebra.betti(degree) {
            return Err(AlgebraError::NoSuchBasisClass { degree, index });
        }
        let bits = BitVector::unit(algebra.betti(degree), index)?;
        Self::homogeneous(algebra, degree, bits)
    }

    /// Wraps homogeneous coordinates as an element of the given degree.
    pub fn homogeneous(
        algebra: &Algebra,
        degree: usize,
        bits: BitVector,
    ) -> Result<Self, AlgebraError> {
        if degree > algebra.dim() {
            return Err(AlgebraError::DegreeOutOfRange {
                degree,
                dim: algebra.dim(),
            });
        }
        if bits.width() != algebra.betti(degree) {
            return Err(F2Error::WidthMismatch {
                left: bits.width(),
                right: algebra.betti(degree),
            }
            .into());
        }
        let mut comps = BTreeMap::new();
        if !bits.is_zero() {
            comps.insert(degree, bits);
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            comps,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Degrees carrying a nonzero component, in increasing order.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.keys().copied()
    }

    /// True when at most one degree carries a nonzero component.
    pub fn is_homogeneous(&self) -> bool {
        self.comps.len() <= 1
    }

    /// Coordinates in the given degree (zeros when absent).
    pub fn component(&self, degree: usize) -> BitVector {
        self.comps
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| BitVector::zeros(self.algebra.betti(degree)).expect("capacity"))
    }

    fn check_same_algebra(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.algebra.id != other.algebra.id {
            return Err(AlgebraError::AlgebraMismatch {
                left: self.algebra.name.clone(),
                right: other.algebra.name.clone(),
            });
        }
        Ok(())
    }

    fn insert_xor(comps: &mut BTreeMap<usize, BitVector>, degree: usize, bits: &BitVector) {
        if bits.is_zero() {
            return;
        }
        match comps.entry(degree) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(bits.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().xor_assign(bits).expect("widths agree");
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Degreewise XOR.
    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_algebra(other)?;
        let mut comps = self.comps.clone();
        for (&deg, bits) in &other.comps {
            Self::insert_xor(&mut comps, deg, bits);
        }
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            comps,
        })
    }

    /// Cup product, truncated above the top degree.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_algebra(other)?;
        let alg = self.algebra.as_ref();
        let mut comps: BTreeMap<usize, BitVector> = BTreeMap::new();
        for (&i, a) in &self.comps {
            for (&j, b) in &other.comps {
                if i + j > alg.dim {
                    continue;
                }
                let prod = alg.mul_homogeneous(i, a, j, b);
                Self::insert_xor(&mut comps, i + j, &prod);
            }
        }
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            comps,
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Element::unit(&self.algebra);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }

    /// Renders as a sum of basis class names; "0" when zero.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&deg, bits) in &self.comps {
            for idx in bits.iter_ones() {
                parts.push(self.algebra.basis_name(deg, idx).to_string());
            }
        }
        parts.join(" + ")
    }
}

/// A degree-preserving ring homomorphism between algebras, validated to be
/// multiplicative on basis pairs and to send the unit to the unit.
pub struct RingMap {
    name: String,
    source: Algebra,
    target: Algebra,
    /// `images[deg][idx]` is homogeneous of degree `deg` in the target.
    images: Vec<Vec<Element>>,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RingMap({}: {} -> {})",
            self.name, self.source.name, self.target.name
        )
    }
}

impl RingMap {
    /// Builds and validates a map from basis-class images.
    ///
    /// `images[deg][idx]` must be an element of the target, homogeneous of
    /// degree `deg` (zero counts); source degrees above the target's top
    /// degree therefore force zero images.
    pub fn new(
        name: impl Into<String>,
        source: &Algebra,
        target: &Algebra,
        images: Vec<Vec<Element>>,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        if images.len() != source.dim() + 1 {
            return Err(AlgebraError::MapValidation(format!(
                "expected images for {} degrees, got {}",
                source.dim() + 1,
                images.len()
            )));
        }
        for (deg, per_deg) in images.iter().enumerate() {
            if per_deg.len() != source.betti(deg) {
                return Err(AlgebraError::MapValidation(format!(
                    "degree {deg}: expected {} images, got {}",
                    source.betti(deg),
                    per_deg.len()
                )));
            }
            for (idx, img) in per_deg.iter().enumerate() {
                if img.algebra.id != target.id() {
                    return Err(AlgebraError::MapValidation(format!(
                        "image of {} lives in the wrong algebra",
                        source.basis_name(deg, idx)
                    )));
                }
                if !img.is_zero() && img.degrees().any(|d| d != deg) {
                    return Err(AlgebraError::MapValidation(format!(
                        "image of {} (degree {deg}) is not homogeneous of degree {deg}",
                        source.basis_name(deg, idx)
                    )));
                }
            }
        }
        if images[0][0] != Element::unit(target) {
            return Err(AlgebraError::MapValidation("unit must map to unit".into()));
        }

        let map = Self {
            name,
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        };
        let top = map.source.dim().max(map.target.dim());
        for i in 1..=map.source.dim() {
            for j in i..=map.source.dim() {
                if i + j > top {
                    continue;
                }
                for u in 0..map.source.betti(i) {
                    for v in 0..map.source.betti(j) {
                        let lhs = if i + j <= map.source.dim() {
                            let prod = map.source.basis_product(i, u, j, v);
                            map.apply_homogeneous(i + j, &prod)
                        } else {
                            Element::zero(&map.target)
                        };
                        let rhs = map.images[i][u].mul(&map.images[j][v])?;
                        if lhs != rhs {
                            return Err(AlgebraError::MapValidation(format!(
                                "not multiplicative on {} * {}: image of the product is {} \
                                 but the product of images is {}",
                                map.source.basis_name(i, u),
                                map.source.basis_name(j, v),
                                lhs.render(),
                                rhs.render()
                            )));
                        }
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn basis_image(&self, degree: usize, index: usize) -> &Element {
        &self.images[degree][index]
    }

    fn apply_homogeneous(&self, degree: usize, bits: &BitVector) -> Element {
        let mut acc = Element::zero(&self.target);
        for idx in bits.iter_ones() {
            acc = acc.add(&self.images[degree][idx]).expect("same algebra");
        }
        acc
    }

    /// Linear extension of the basis images.
    pub fn apply(&self, a: &Element) -> Result<Element, AlgebraError> {
        if a.algebra.id != self.source.id() {
            return Err(AlgebraError::AlgebraMismatch {
                left: a.algebra.name.clone(),
                right: self.source.name().to_string(),
            });
        }
        let mut acc = Element::zero(&self.target);
        for (&deg, bits) in &a.comps {
            acc = acc.add(&self.apply_homogeneous(deg, bits))?;
        }
        Ok(acc)
    }

    /// True when the map is degreewise onto the target.
    pub fn is_surjective(&self) -> bool {
        for j in 0..=self.target.dim() {
            let want = self.target.betti(j);
            if want == 0 {
                continue;
            }
            if j > self.source.dim() {
                return false;
            }
            let mut span = RowSpace::new(want).expect("capacity");
            for idx in 0..self.source.betti(j) {
                span.insert(&self.images[j][idx].component(j))
                    .expect("widths agree");
            }
            if !span.is_full() {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z2[a]/(a^{n+1}) with basis names 1, a, a2, ...
    fn truncated_poly(n: usize) -> Algebra {
        let mut basis = vec![vec!["1".to_string()]];
        basis.push(vec!["a".to_string()]);
        for k in 2..=n {
            basis.push(vec![format!("a{k}")]);
        }
        GradedAlgebra::new(
            format!("RP{n}"),
            n,
            basis,
            SpaceMeta::default(),
            |_i, _u, _j, _v| Ok(BitVector::unit(1, 0).unwrap()),
        )
        .unwrap()
    }

    fn power(alg: &Algebra, k: usize) -> Element {
        Element::basis_class(alg, 1, 0).unwrap().pow(k as u32)
    }

    #[test]
    fn characteristic_two_addition() {
        let alg = truncated_poly(3);
        let a = power(&alg, 1);
        assert!(a.add(&a).unwrap().is_zero());
        assert_eq!(a.add(&Element::zero(&alg)).unwrap(), a);
    }

    #[test]
    fn addition_is_xor_on_components() {
        // In RP^3: a + (a + a^2) = a^2.
        let alg = truncated_poly(3);
        let a = power(&alg, 1);
        let a2 = power(&alg, 2);
        let sum = a.add(&a.add(&a2).unwrap()).unwrap();
        assert_eq!(sum, a2);
    }

    #[test]
    fn truncated_poly_products() {
        let alg = truncated_poly(5);
        assert_eq!(power(&alg, 2).mul(&power(&alg, 3)).unwrap(), power(&alg, 5));
        assert!(power(&alg, 3).mul(&power(&alg, 3)).unwrap().is_zero());
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a3 = truncated_poly(3);
        let a5 = truncated_poly(5);
        let x = power(&a3, 1);
        let y = power(&a5, 1);
        assert!(matches!(
            x.add(&y),
            Err(AlgebraError::AlgebraMismatch { .. })
        ));
        assert!(matches!(
            x.mul(&y),
            Err(AlgebraError::AlgebraMismatch { .. })
        ));
    }

    #[test]
    fn validate_accepts_truncated_poly() {
        assert!(truncated_poly(5).validate().is_empty());
    }

    #[test]
    fn validate_reports_broken_commutativity() {
        // Two degree-1 classes with x*y = top but y*x = 0.
        let basis = vec![
            vec!["1".into()],
            vec!["x".into(), "y".into()],
            vec!["top".into()],
        ];
        let alg = GradedAlgebra::new("bad", 2, basis, SpaceMeta::default(), |_i, u, _j, v| {
            Ok(if u == 0 && v == 1 {
                BitVector::unit(1, 0).unwrap()
            } else {
                BitVector::zeros(1).unwrap()
            })
        })
        .unwrap();
        let violations = alg.validate();
        assert!(violations.iter().any(|v| v.contains("commutativity")));
    }

    #[test]
    fn constructor_rejects_wrong_width_products() {
        let basis = vec![vec!["1".into()], vec!["x".into()], vec!["top".into()]];
        let err = GradedAlgebra::new("bad", 2, basis, SpaceMeta::default(), |_, _, _, _| {
            Ok(BitVector::zeros(5).unwrap())
        })
        .unwrap_err();
        assert!(matches!(err, AlgebraError::Malformed(_)));
    }

    #[test]
    fn ring_map_applies_linearly_and_sends_unit_to_unit() {
        // Sphere S2 mapping into RP2-like target is not a ring map; use the
        // identity on RP3 instead plus the fold map RP3 -> RP3.
        let alg = truncated_poly(3);
        let mut images = vec![vec![Element::unit(&alg)]];
        for deg in 1..=3 {
            images.push(vec![power(&alg, deg)]);
        }
        let id = RingMap::new("id", &alg, &alg, images).unwrap();
        assert_eq!(id.apply(&power(&alg, 2)).unwrap(), power(&alg, 2));
        assert_eq!(id.apply(&Element::unit(&alg)).unwrap(), Element::unit(&alg));
        assert!(id
            .apply(&Element::zero(&alg))
            .unwrap()
            .is_zero());
        assert!(id.is_surjective());
    }

    #[test]
    fn ring_map_rejects_non_multiplicative_images() {
        // a -> a on RP3 -> RP5 is not multiplicative: a^4 = 0 in the source
        // but the image product a^4 is nonzero in the target.
        let rp3 = truncated_poly(3);
        let rp5 = truncated_poly(5);
        let mut images = vec![vec![Element::unit(&rp5)]];
        for deg in 1..=3 {
            images.push(vec![power(&rp5, deg)]);
        }
        let err = RingMap::new("bad", &rp3, &rp5, images).unwrap_err();
        assert!(matches!(err, AlgebraError::MapValidation(_)));
    }
}
