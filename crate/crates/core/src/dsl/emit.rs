//! Rendering source forms back to canonical text, and re-presenting a
//! realized algebra as a table. Rendered text round-trips through `parse`.

use std::fmt::Write;

use crate::algebra::Algebra;

use super::ast::*;

fn render_poly(p: &Poly) -> String {
    if p.terms.is_empty() {
        return "0".to_string();
    }
    p.terms
        .iter()
        .map(render_term)
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_term(t: &Term) -> String {
    if t.factors.is_empty() {
        return "1".to_string();
    }
    t.factors
        .iter()
        .map(|f| {
            let base = match &f.base {
                Atom::Var { name, .. } => name.clone(),
                Atom::Const(true) => "1".to_string(),
                Atom::Const(false) => "0".to_string(),
                Atom::Group(inner) => format!("({})", render_poly(inner)),
            };
            if f.exp == 1 {
                base
            } else {
                format!("{base}^{}", f.exp)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_monomial(m: &Monomial) -> String {
    m.factors
        .iter()
        .map(|(name, exp)| {
            if *exp == 1 {
                name.clone()
            } else {
                format!("{name}^{exp}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_meta(meta: &MetaBlock, out: &mut String) {
    if meta.poincare {
        out.push_str("  meta poincare true\n");
    }
    if meta.null_cobordant {
        out.push_str("  meta null_cobordant true\n");
    }
    if meta.suspension {
        out.push_str("  meta suspension true\n");
    }
    if !meta.spherical.is_empty() {
        out.push_str("  meta spherical");
        for (deg, name, _) in &meta.spherical {
            let _ = write!(out, " {deg}:{name}");
        }
        out.push('\n');
    }
    if !meta.constraints.is_empty() {
        out.push_str("  meta constraint");
        for flag in &meta.constraints {
            let _ = write!(out, " {}", flag.as_str());
        }
        out.push('\n');
    }
    for (name, poly, _) in &meta.sq1 {
        let _ = writeln!(out, "  meta sq1 {name} = {}", render_poly(poly));
    }
}

pub fn render_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space \"{}\" {{", p.name);
    let _ = writeln!(out, "  dim {}", p.dim);
    match &p.body {
        Body::Poly { gens, rels } => {
            for g in gens {
                let _ = writeln!(out, "  gen {}:{}", g.name, g.degree);
            }
            for r in rels {
                let _ = writeln!(out, "  rel {}", render_monomial(r));
            }
        }
        Body::Table { basis, prods } => {
            for b in basis {
                let _ = writeln!(out, "  basis {}:{}", b.name, b.degree);
            }
            for prod in prods {
                let _ = writeln!(
                    out,
                    "  prod {}*{} = {}",
                    prod.left,
                    prod.right,
                    render_poly(&prod.value)
                );
            }
        }
    }
    render_meta(&p.meta, &mut out);
    out.push_str("}\n");
    out
}

pub fn render_bundle(b: &SWProfileSource) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bundle \"{}\" on \"{}\" {{", b.name, b.space);
    for (index, poly) in &b.assignments {
        let _ = writeln!(out, "  w{index} = {};", render_poly(poly));
    }
    out.push_str("}\n");
    out
}

pub fn render_map(m: &RingMapSource) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "map \"{}\" from \"{}\" to \"{}\" {{",
        m.name, m.source, m.target
    );
    for (gen, poly) in &m.images {
        let _ = writeln!(out, "  {gen} -> {};", render_poly(poly));
    }
    out.push_str("}\n");
    out
}

pub fn render_document(doc: &Document) -> String {
    let mut parts = Vec::new();
    for s in &doc.spaces {
        parts.push(render_presentation(s));
    }
    for b in &doc.bundles {
        parts.push(render_bundle(b));
    }
    for m in &doc.maps {
        parts.push(render_map(m));
    }
    parts.join("\n")
}

/// Re-presents a realized algebra as an explicit table, carrying over the
/// metadata. Realizing the result reproduces the algebra with identical
/// basis names and products.
pub fn table_presentation(alg: &Algebra) -> Presentation {
    let mut basis = Vec::new();
    for deg in 1..=alg.dim() {
        for idx in 0..alg.betti(deg) {
            basis.push(BasisDecl {
                name: alg.basis_name(deg, idx).to_string(),
                degree: deg,
                pos: Pos::default(),
            });
        }
    }

    let mut prods = Vec::new();
    for i in 1..=alg.dim() {
        for u in 0..alg.betti(i) {
            for j in i..=alg.dim() {
                if i + j > alg.dim() {
                    continue;
                }
                for v in 0..alg.betti(j) {
                    if i == j && v < u {
                        continue;
                    }
                    let prod = alg.basis_product(i, u, j, v);
                    if prod.is_zero() {
                        continue;
                    }
                    let value = Poly::sum(
                        prod.iter_ones()
                            .map(|idx| Poly::var(alg.basis_name(i + j, idx))),
                    );
                    prods.push(ProdDecl {
                        left: alg.basis_name(i, u).to_string(),
                        right: alg.basis_name(j, v).to_string(),
                        value,
                        pos: Pos::default(),
                    });
                }
            }
        }
    }

    let meta_src = alg.meta();
    let mut meta = MetaBlock {
        poincare: meta_src.poincare,
        null_cobordant: meta_src.null_cobordant,
        suspension: meta_src.suspension,
        spherical: meta_src
            .spherical
            .iter()
            .map(|&(deg, idx)| (deg, alg.basis_name(deg, idx).to_string(), Pos::default()))
            .collect(),
        constraints: meta_src.constraint_flags.clone(),
        sq1: Vec::new(),
    };
    if let Some(sq1) = alg.sq1() {
        for deg in 0..=alg.dim() {
            for idx in 0..alg.betti(deg) {
                let img = sq1.basis_image(deg, idx);
                if img.is_zero() {
                    continue;
                }
                let poly = Poly::sum(
                    img.iter_ones()
                        .map(|i| Poly::var(alg.basis_name(deg + 1, i))),
                );
                meta.sq1
                    .push((alg.basis_name(deg, idx).to_string(), poly, Pos::default()));
            }
        }
    }

    Presentation {
        name: alg.name().to_string(),
        dim: alg.dim(),
        body: Body::Table { basis, prods },
        meta,
        pos: Pos::default(),
    }
}
