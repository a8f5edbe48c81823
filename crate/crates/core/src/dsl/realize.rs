//! Turning parsed presentations into validated algebra values.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::algebra::{Algebra, Element, GradedAlgebra, RingMap, SpaceMeta, Sq1Map};
use crate::engine::SWProfile;
use crate::f2::BitVector;

use super::ast::*;
use super::RealizeError;

/// Cap on the total number of normal-form monomials a polynomial
/// presentation may generate.
const MAX_BASIS: usize = 1 << 17;

// ---------------------------------------------------------------------------
// Polynomial-mode basis enumeration
// ---------------------------------------------------------------------------

/// Normal-form monomial basis of a polynomial quotient: all exponent
/// vectors of degree at most `dim` not divisible by any relation monomial.
pub(super) struct PolyBasis {
    /// Exponent vectors per degree, aligned with the realized basis order.
    pub exponents: Vec<Vec<Vec<u32>>>,
    pub names: Vec<Vec<String>>,
    index: HashMap<Vec<u32>, (usize, usize)>,
    rels: Vec<Vec<u32>>,
}

fn monomial_name(gens: &[(String, usize)], exps: &[u32]) -> String {
    if exps.iter().all(|&e| e == 0) {
        return "1".to_string();
    }
    let mut s = String::new();
    for ((name, _), &e) in gens.iter().zip(exps) {
        if e == 0 {
            continue;
        }
        s.push_str(name);
        if e > 1 {
            s.push_str(&e.to_string());
        }
    }
    s
}

fn divisible(exps: &[u32], rel: &[u32]) -> bool {
    exps.iter().zip(rel).all(|(e, r)| e >= r)
}

pub(super) fn poly_basis(p: &Presentation) -> Result<PolyBasis, RealizeError> {
    let Body::Poly { gens, rels } = &p.body else {
        return Err(RealizeError::Invalid(format!(
            "space {:?} is not a polynomial presentation",
            p.name
        )));
    };
    let gens: Vec<(String, usize)> = gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
    let mut rel_vecs = Vec::new();
    for rel in rels {
        let mut v = vec![0u32; gens.len()];
        for (name, exp) in &rel.factors {
            let idx = gens
                .iter()
                .position(|(n, _)| n == name)
                .expect("checked at parse");
            v[idx] += exp;
        }
        rel_vecs.push(v);
    }

    let dim = p.dim;
    let mut per_degree: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dim + 1];
    let mut total = 0usize;
    let mut current = vec![0u32; gens.len()];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        gens: &[(String, usize)],
        rels: &[Vec<u32>],
        dim: usize,
        at: usize,
        degree: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<Vec<u32>>>,
        total: &mut usize,
    ) -> Result<(), RealizeError> {
        if rels.iter().any(|r| divisible(current, r)) {
            return Ok(());
        }
        if at == gens.len() {
            out[degree].push(current.clone());
            *total += 1;
            if *total > MAX_BASIS {
                return Err(RealizeError::Invalid(format!(
                    "presentation generates more than {MAX_BASIS} monomials"
                )));
            }
            return Ok(());
        }
        let gen_degree = gens[at].1;
        let mut e = 0u32;
        loop {
            let extra = e as usize * gen_degree;
            if degree + extra > dim {
                break;
            }
            current[at] = e;
            rec(gens, rels, dim, at + 1, degree + extra, current, out, total)?;
            e += 1;
        }
        current[at] = 0;
        Ok(())
    }

    rec(
        &gens,
        &rel_vecs,
        dim,
        0,
        0,
        &mut current,
        &mut per_degree,
        &mut total,
    )?;

    let mut names: Vec<Vec<String>> = Vec::with_capacity(dim + 1);
    let mut index = HashMap::new();
    let mut seen = HashSet::new();
    for (deg, monos) in per_degree.iter_mut().enumerate() {
        // Pure powers of earlier generators sort first.
        monos.sort_by(|a, b| b.cmp(a));
        let mut deg_names = Vec::with_capacity(monos.len());
        for (idx, exps) in monos.iter().enumerate() {
            let name = monomial_name(&gens, exps);
            if !seen.insert(name.clone()) {
                return Err(RealizeError::Invalid(format!(
                    "basis name collision on `{name}`; rename the generators"
                )));
            }
            index.insert(exps.clone(), (deg, idx));
            deg_names.push(name);
        }
        names.push(deg_names);
    }

    Ok(PolyBasis {
        exponents: per_degree,
        names,
        index,
        rels: rel_vecs,
    })
}

impl PolyBasis {
    /// Product of two normal-form monomials: exponent addition, then zero
    /// if divisible by a relation (degree truncation is the caller's).
    fn product(&self, i: usize, u: usize, j: usize, v: usize) -> BitVector {
        let width = self.names[i + j].len();
        let sum: Vec<u32> = self.exponents[i][u]
            .iter()
            .zip(&self.exponents[j][v])
            .map(|(a, b)| a + b)
            .collect();
        if self.rels.iter().any(|r| divisible(&sum, r)) {
            return BitVector::zeros(width).expect("capacity");
        }
        let &(deg, idx) = self.index.get(&sum).expect("normal form of right degree");
        debug_assert_eq!(deg, i + j);
        BitVector::unit(width, idx).expect("valid index")
    }
}

// ---------------------------------------------------------------------------
// Realization
// ---------------------------------------------------------------------------

fn build_meta(
    p: &Presentation,
    basis_index: &impl Fn(usize, &str) -> Option<usize>,
) -> Result<SpaceMeta, RealizeError> {
    let mut spherical = Vec::new();
    for (deg, name, pos) in &p.meta.spherical {
        let idx = basis_index(*deg, name).ok_or_else(|| {
            RealizeError::Invalid(format!(
                "{pos}: spherical class `{name}` does not survive in degree {deg}"
            ))
        })?;
        spherical.push((*deg, idx));
    }
    Ok(SpaceMeta {
        poincare: p.meta.poincare,
        null_cobordant: p.meta.null_cobordant,
        suspension: p.meta.suspension,
        spherical,
        constraint_flags: p.meta.constraints.clone(),
    })
}

fn attach_sq1(p: &Presentation, alg: Algebra) -> Result<Algebra, RealizeError> {
    if p.meta.sq1.is_empty() {
        return Ok(alg);
    }
    let images = {
        let mut images: Vec<Vec<BitVector>> = (0..=alg.dim())
            .map(|deg| {
                let next = alg.betti(deg + 1);
                (0..alg.betti(deg))
                    .map(|_| BitVector::zeros(next).expect("capacity"))
                    .collect()
            })
            .collect();
        for (name, poly, pos) in &p.meta.sq1 {
            let (deg, idx) = alg.find_basis_class(name).ok_or_else(|| {
                RealizeError::Invalid(format!("{pos}: unknown basis class `{name}` in sq1"))
            })?;
            let value = eval_poly(&alg, poly)?;
            if value.degrees().any(|d| d != deg + 1) {
                return Err(RealizeError::Invalid(format!(
                    "{pos}: sq1 image of `{name}` is not homogeneous of degree {}",
                    deg + 1
                )));
            }
            images[deg][idx] = value.component(deg + 1);
        }
        images
    };
    Ok(GradedAlgebra::attach_sq1(alg, Sq1Map::new(images)))
}

/// Realizes a presentation into a validated algebra.
///
/// Polynomial mode takes the monomials outside the relation ideal as the
/// basis, with products by exponent addition. Table mode takes the basis
/// and products as written, unspecified products being zero. Either way
/// the result must pass the algebra validator.
pub fn realize(p: &Presentation) -> Result<Algebra, RealizeError> {
    let alg = match &p.body {
        Body::Poly { .. } => {
            let pb = poly_basis(p)?;
            let meta = build_meta(p, &|deg, name| {
                pb.names
                    .get(deg)
                    .and_then(|names| names.iter().position(|n| n == name))
            })?;
            GradedAlgebra::new(p.name.clone(), p.dim, pb.names.clone(), meta, |i, u, j, v| {
                Ok(pb.product(i, u, j, v))
            })?
        }
        Body::Table { basis, prods } => {
            let mut names: Vec<Vec<String>> = vec![Vec::new(); p.dim + 1];
            names[0].push("1".to_string());
            let mut lookup: HashMap<String, (usize, usize)> = HashMap::new();
            lookup.insert("1".to_string(), (0, 0));
            for b in basis {
                let idx = names[b.degree].len();
                if lookup.insert(b.name.clone(), (b.degree, idx)).is_some() {
                    return Err(RealizeError::Invalid(format!(
                        "{}: duplicate basis class `{}`",
                        b.pos, b.name
                    )));
                }
                names[b.degree].push(b.name.clone());
            }

            let mut table: HashMap<(usize, usize, usize, usize), BitVector> = HashMap::new();
            for prod in prods {
                let &(dl, il) = lookup.get(&prod.left).expect("checked at parse");
                let &(dr, ir) = lookup.get(&prod.right).expect("checked at parse");
                let key = if (dl, il) <= (dr, ir) {
                    (dl, il, dr, ir)
                } else {
                    (dr, ir, dl, il)
                };
                let mut bits = BitVector::zeros(names.get(dl + dr).map_or(0, Vec::len))
                    .expect("capacity");
                for term in &prod.value.terms {
                    let Atom::Var { name, pos } = &term.factors[0].base else {
                        unreachable!("checked at parse");
                    };
                    let &(d, i) = lookup.get(name).ok_or_else(|| {
                        RealizeError::Invalid(format!("{pos}: unknown basis class `{name}`"))
                    })?;
                    debug_assert_eq!(d, dl + dr);
                    let mut unit = BitVector::unit(bits.width(), i).expect("valid");
                    std::mem::swap(&mut bits, &mut unit);
                    bits.xor_assign(&unit).expect("widths agree");
                }
                if table.insert(key, bits).is_some() {
                    return Err(RealizeError::Invalid(format!(
                        "{}: product of `{}` and `{}` declared twice",
                        prod.pos, prod.left, prod.right
                    )));
                }
            }

            let meta = build_meta(p, &|deg, name| {
                lookup
                    .get(name)
                    .and_then(|&(d, i)| (d == deg).then_some(i))
            })?;
            let widths: Vec<usize> = names.iter().map(Vec::len).collect();
            GradedAlgebra::new(p.name.clone(), p.dim, names, meta, |i, u, j, v| {
                let key = if (i, u) <= (j, v) {
                    (i, u, j, v)
                } else {
                    (j, v, i, u)
                };
                Ok(table
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| BitVector::zeros(widths[i + j]).expect("capacity")))
            })?
        }
    };

    let violations = alg.validate();
    if !violations.is_empty() {
        return Err(RealizeError::Validation(violations));
    }
    attach_sq1(p, alg)
}

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

/// Evaluates a polynomial expression in the algebra. Variables denote basis
/// classes; in polynomial mode the generators are exactly the degree-one
/// exponent monomials, so generator names resolve directly.
pub(super) fn eval_poly(alg: &Algebra, poly: &Poly) -> Result<Element, RealizeError> {
    let mut acc = Element::zero(alg);
    for term in &poly.terms {
        let mut prod = Element::unit(alg);
        for factor in &term.factors {
            let base = match &factor.base {
                Atom::Const(true) => Element::unit(alg),
                Atom::Const(false) => Element::zero(alg),
                Atom::Var { name, pos } => {
                    let (deg, idx) = alg.find_basis_class(name).ok_or_else(|| {
                        RealizeError::Invalid(format!(
                            "{pos}: `{name}` is not a basis class of {} \
                             (it may have been killed by a relation)",
                            alg.name()
                        ))
                    })?;
                    Element::basis_class(alg, deg, idx)?
                }
                Atom::Group(inner) => eval_poly(alg, inner)?,
            };
            prod = prod.mul(&base.pow(factor.exp))?;
        }
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

/// Realizes a bundle's Stiefel-Whitney assignments against its space.
///
/// `w_0 = 1` is implicit; each assigned `w_i` must evaluate to a
/// homogeneous element of degree `i` (or zero).
pub fn realize_profile(src: &SWProfileSource, alg: &Algebra) -> Result<SWProfile, RealizeError> {
    let mut assignments = Vec::new();
    for (index, poly) in &src.assignments {
        let value = eval_poly(alg, poly)?;
        if value.degrees().any(|d| d != *index) {
            return Err(RealizeError::Invalid(format!(
                "w{index} of bundle {:?} evaluates to {}, which is not homogeneous of degree {index}",
                src.name,
                value.render()
            )));
        }
        assignments.push((*index, value));
    }
    Ok(SWProfile::from_classes(alg, assignments)?)
}

/// Realizes a ring map. The source presentation supplies the monomial
/// structure needed to extend generator images multiplicatively; for table
/// sources every basis class is assigned directly. Unassigned generators
/// map to zero. The result is validated for multiplicativity.
pub fn realize_map(
    src: &RingMapSource,
    source_pres: &Presentation,
    source: &Algebra,
    target: &Algebra,
) -> Result<RingMap, RealizeError> {
    if source_pres.name != src.source || source.name() != src.source {
        return Err(RealizeError::Invalid(format!(
            "map {:?} source mismatch: presentation {:?} vs algebra {:?}",
            src.name,
            source_pres.name,
            source.name()
        )));
    }

    let mut assigned: BTreeMap<&str, Element> = BTreeMap::new();
    for (gen, poly) in &src.images {
        assigned.insert(gen.as_str(), eval_poly(target, poly)?);
    }

    let mut images: Vec<Vec<Element>> = vec![vec![Element::unit(target)]];
    match &source_pres.body {
        Body::Poly { gens, .. } => {
            let pb = poly_basis(source_pres)?;
            if pb.names != *(0..=source.dim())
                .map(|d| source.basis_names(d).to_vec())
                .collect::<Vec<_>>()
            {
                return Err(RealizeError::Invalid(format!(
                    "algebra {:?} was not realized from the given presentation",
                    source.name()
                )));
            }
            let mut gen_images = Vec::new();
            for g in gens {
                let img = assigned
                    .get(g.name.as_str())
                    .cloned()
                    .unwrap_or_else(|| Element::zero(target));
                if img.degrees().any(|d| d != g.degree) {
                    return Err(RealizeError::Invalid(format!(
                        "image of generator `{}` is not homogeneous of degree {}",
                        g.name, g.degree
                    )));
                }
                gen_images.push(img);
            }
            for deg in 1..=source.dim() {
                let mut per_deg = Vec::new();
                for exps in &pb.exponents[deg] {
                    let mut img = Element::unit(target);
                    for (gi, &e) in exps.iter().enumerate() {
                        if e > 0 {
                            img = img.mul(&gen_images[gi].pow(e))?;
                        }
                    }
                    per_deg.push(img);
                }
                images.push(per_deg);
            }
        }
        Body::Table { .. } => {
            for deg in 1..=source.dim() {
                let mut per_deg = Vec::new();
                for idx in 0..source.betti(deg) {
                    let name = source.basis_name(deg, idx);
                    let img = assigned
                        .get(name)
                        .cloned()
                        .unwrap_or_else(|| Element::zero(target));
                    if img.degrees().any(|d| d != deg) {
                        return Err(RealizeError::Invalid(format!(
                            "image of `{name}` is not homogeneous of degree {deg}"
                        )));
                    }
                    per_deg.push(img);
                }
                images.push(per_deg);
            }
        }
    }

    Ok(RingMap::new(src.name.clone(), source, target, images)?)
}

/// A fully realized document.
pub struct Realized {
    pub algebras: BTreeMap<String, Algebra>,
    /// Keyed by `(space, bundle)` name.
    pub profiles: BTreeMap<(String, String), SWProfile>,
    pub maps: BTreeMap<String, RingMap>,
}

/// Realizes every space, bundle and map of a parsed document.
pub fn realize_document(doc: &Document) -> Result<Realized, RealizeError> {
    let mut algebras = BTreeMap::new();
    for space in &doc.spaces {
        algebras.insert(space.name.clone(), realize(space)?);
    }
    let mut profiles = BTreeMap::new();
    for bundle in &doc.bundles {
        let alg = &algebras[&bundle.space];
        profiles.insert(
            (bundle.space.clone(), bundle.name.clone()),
            realize_profile(bundle, alg)?,
        );
    }
    let mut maps = BTreeMap::new();
    for map in &doc.maps {
        let source_pres = doc.space(&map.source).expect("checked at parse");
        let source = &algebras[&map.source];
        let target = &algebras[&map.target];
        maps.insert(
            map.name.clone(),
            realize_map(map, source_pres, source, target)?,
        );
    }
    Ok(Realized {
        algebras,
        profiles,
        maps,
    })
}
