//! Generators for the spaces shipped with the tool.
//!
//! Each [`SpaceRecord`] bundles a presentation, its realized algebra, named
//! bundles, the default constraint set, and the expected values replayed by
//! `crk verify`. Expected values are data: every claim carries a citation
//! string so reports can print "expected (citation) vs computed".

use thiserror::Error;

use crate::algebra::Algebra;
use crate::dsl::{
    self, BasisDecl, Body, Generator, MetaBlock, Monomial, Poly, Pos, Presentation, ProdDecl,
    RealizeError, SWProfileSource,
};
use crate::engine::{self, Constraint, EngineError, SWProfile};

/// Degrees admitting a sphere bundle with nonzero top class.
const HOPF_DEGREES: [usize; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{family}: parameter out of range: {reason}")]
    ParamOutOfRange { family: String, reason: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family {0} takes {1} parameters")]
    WrongParamCount(String, usize),
    #[error("no tangent data for family {0}")]
    UnsupportedTangent(String),
    #[error(transparent)]
    Realize(#[from] RealizeError),
}

/// A catalog family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Sphere { d: usize },
    ProductSpheres { d: usize, m: usize },
    Rp { n: usize },
    Cp { n: usize },
    S1xCp { n: usize },
    Dold { m: usize, n: usize },
    Moore { n: usize },
    Stunted { n: usize, m: usize },
    Lens { m: usize, n: usize },
}

/// `(cli name, parameters, description)` rows for `catalog list`.
pub const FAMILY_HELP: &[(&str, &str, &str)] = &[
    ("sphere", "D", "the sphere S^d"),
    ("product-spheres", "D M", "the product S^d x S^m"),
    ("rp", "N", "real projective space RP^n"),
    ("cp", "N", "complex projective space CP^n"),
    ("s1-x-cp", "N", "the product S^1 x CP^n"),
    ("dold", "M N", "the Dold manifold P(m,n)"),
    ("moore", "N", "the Moore space M(Z2,n), n >= 2"),
    ("stunted", "N M", "the stunted projective space RP^n/RP^m, 1 <= m <= n-2"),
    ("lens", "M N", "a (2n-1)-dimensional lens space with odd m >= 3 sheets"),
];

impl Family {
    pub fn cli_name(&self) -> &'static str {
        match self {
            Family::Sphere { .. } => "sphere",
            Family::ProductSpheres { .. } => "product-spheres",
            Family::Rp { .. } => "rp",
            Family::Cp { .. } => "cp",
            Family::S1xCp { .. } => "s1-x-cp",
            Family::Dold { .. } => "dold",
            Family::Moore { .. } => "moore",
            Family::Stunted { .. } => "stunted",
            Family::Lens { .. } => "lens",
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match *self {
            Family::Sphere { d } => vec![d],
            Family::ProductSpheres { d, m } => vec![d, m],
            Family::Rp { n } | Family::Cp { n } | Family::S1xCp { n } | Family::Moore { n } => {
                vec![n]
            }
            Family::Dold { m, n } => vec![m, n],
            Family::Stunted { n, m } => vec![n, m],
            Family::Lens { m, n } => vec![m, n],
        }
    }

    pub fn from_cli(name: &str, params: &[usize]) -> Result<Family, CatalogError> {
        let want = |n: usize| -> Result<(), CatalogError> {
            if params.len() == n {
                Ok(())
            } else {
                Err(CatalogError::WrongParamCount(name.to_string(), n))
            }
        };
        match name {
            "sphere" => {
                want(1)?;
                Ok(Family::Sphere { d: params[0] })
            }
            "product-spheres" => {
                want(2)?;
                Ok(Family::ProductSpheres {
                    d: params[0],
                    m: params[1],
                })
            }
            "rp" => {
                want(1)?;
                Ok(Family::Rp { n: params[0] })
            }
            "cp" => {
                want(1)?;
                Ok(Family::Cp { n: params[0] })
            }
            "s1-x-cp" => {
                want(1)?;
                Ok(Family::S1xCp { n: params[0] })
            }
            "dold" => {
                want(2)?;
                Ok(Family::Dold {
                    m: params[0],
                    n: params[1],
                })
            }
            "moore" => {
                want(1)?;
                Ok(Family::Moore { n: params[0] })
            }
            "stunted" => {
                want(2)?;
                Ok(Family::Stunted {
                    n: params[0],
                    m: params[1],
                })
            }
            "lens" => {
                want(2)?;
                Ok(Family::Lens {
                    m: params[0],
                    n: params[1],
                })
            }
            other => Err(CatalogError::UnknownFamily(other.to_string())),
        }
    }

    /// Canonical space name used in presentations and reports.
    pub fn space_name(&self) -> String {
        match *self {
            Family::Sphere { d } => format!("S{d}"),
            Family::ProductSpheres { d, m } => format!("S{d}xS{m}"),
            Family::Rp { n } => format!("RP{n}"),
            Family::Cp { n } => format!("CP{n}"),
            Family::S1xCp { n } => format!("S1xCP{n}"),
            Family::Dold { m, n } => format!("Dold P({m},{n})"),
            Family::Moore { n } => format!("M(Z2,{n})"),
            Family::Stunted { n, m } => format!("RP{n}/RP{m}"),
            Family::Lens { m, n } => format!("L({m},{n})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Records and claims
// ---------------------------------------------------------------------------

/// An expected value with its citation.
#[derive(Debug, Clone)]
pub struct Claim {
    pub label: String,
    pub citation: String,
    pub kind: ClaimKind,
}

#[derive(Debug, Clone)]
pub enum ClaimKind {
    /// Formal upper characteristic rank under the record's constraints.
    Ucharrank { expected: usize },
    /// Exact set of characteristic ranks over the constrained universe.
    CharrankSet { expected: Vec<usize> },
    /// Characteristic rank of a named bundle.
    BundleCharrank { bundle: String, expected: usize },
    CupLength { expected: usize },
    /// Floor of the null-cobordant cup-length bound at the given `z`.
    NullCobordantBound { z: usize, expected_floor: i64 },
    /// Floor of the bundle cup-length bound at the given `k`.
    BundleBound {
        bundle: String,
        k: usize,
        expected_floor: i64,
    },
}

#[derive(Debug, Clone)]
pub struct NamedBundle {
    pub name: String,
    pub source: SWProfileSource,
    pub profile: SWProfile,
}

/// A catalog entry: presentation, realized algebra, bundles, default
/// constraints and expected values.
pub struct SpaceRecord {
    pub family: Family,
    pub presentation: Presentation,
    pub algebra: Algebra,
    pub bundles: Vec<NamedBundle>,
    pub constraints: Vec<Constraint>,
    pub claims: Vec<Claim>,
}

impl SpaceRecord {
    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    pub fn bundle(&self, name: &str) -> Option<&NamedBundle> {
        self.bundles.iter().find(|b| b.name == name)
    }
}

// ---------------------------------------------------------------------------
// Presentation builders
// ---------------------------------------------------------------------------

fn gen(name: &str, degree: usize) -> Generator {
    Generator {
        name: name.to_string(),
        degree,
        pos: Pos::default(),
    }
}

fn single_var_rel(name: &str, exp: u32) -> Monomial {
    Monomial {
        factors: vec![(name.to_string(), exp)],
        pos: Pos::default(),
    }
}

fn basis_decl(name: String, degree: usize) -> BasisDecl {
    BasisDecl {
        name,
        degree,
        pos: Pos::default(),
    }
}

fn spherical_meta(entries: &[(usize, &str)]) -> Vec<(usize, String, Pos)> {
    entries
        .iter()
        .map(|&(deg, name)| (deg, name.to_string(), Pos::default()))
        .collect()
}

fn bundle_src(name: &str, space: &str, assignments: Vec<(usize, Poly)>) -> SWProfileSource {
    SWProfileSource {
        name: name.to_string(),
        space: space.to_string(),
        assignments,
        pos: Pos::default(),
    }
}

fn claim(label: &str, citation: &str, kind: ClaimKind) -> Claim {
    Claim {
        label: label.to_string(),
        citation: citation.to_string(),
        kind,
    }
}

struct RecordParts {
    presentation: Presentation,
    bundle_sources: Vec<SWProfileSource>,
    claims: Vec<Claim>,
}

fn finish(family: Family, parts: RecordParts) -> Result<SpaceRecord, CatalogError> {
    let algebra = dsl::realize(&parts.presentation)?;
    let constraints = engine::resolve_constraints(&algebra, &algebra.meta().constraint_flags)
        .map_err(|e| CatalogError::ParamOutOfRange {
            family: family.cli_name().to_string(),
            reason: e.to_string(),
        })?;
    let mut bundles = Vec::new();
    for source in parts.bundle_sources {
        let profile = dsl::realize_profile(&source, &algebra)?;
        bundles.push(NamedBundle {
            name: source.name.clone(),
            source,
            profile,
        });
    }
    Ok(SpaceRecord {
        family,
        presentation: parts.presentation,
        algebra,
        bundles,
        constraints,
        claims: parts.claims,
    })
}

fn err(family: &Family, reason: &str) -> CatalogError {
    CatalogError::ParamOutOfRange {
        family: family.cli_name().to_string(),
        reason: reason.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

fn sphere_parts(d: usize) -> RecordParts {
    let name = Family::Sphere { d }.space_name();
    let class = format!("x{d}");
    let hopf = HOPF_DEGREES.contains(&d);
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: true,
        suspension: true,
        spherical: spherical_meta(&[(d, &class)]),
        constraints: if hopf {
            vec![]
        } else {
            vec![crate::algebra::ConstraintFlag::Spherical]
        },
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: d,
        body: Body::Table {
            basis: vec![basis_decl(class.clone(), d)],
            prods: Vec::new(),
        },
        meta,
        pos: Pos::default(),
    };
    let mut bundle_sources = Vec::new();
    let mut claims = vec![
        claim(
            "ucharrank",
            "ucharrank(S^d) is d for d in {1,2,4,8} and d-1 otherwise",
            ClaimKind::Ucharrank {
                expected: if hopf { d } else { d - 1 },
            },
        ),
        claim(
            "cup",
            "a sphere has cup-length 1",
            ClaimKind::CupLength { expected: 1 },
        ),
        claim(
            "charrank set",
            "charrank over S^d is d-1, plus d when a Hopf bundle exists",
            ClaimKind::CharrankSet {
                expected: if hopf { vec![d - 1, d] } else { vec![d - 1] },
            },
        ),
    ];
    if hopf {
        bundle_sources.push(bundle_src("nu", &name, vec![(d, Poly::var(&class))]));
        claims.push(claim(
            "charrank(nu)",
            "the Hopf bundle over S^d has nonzero top class",
            ClaimKind::BundleCharrank {
                bundle: "nu".into(),
                expected: d,
            },
        ));
    }
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn product_spheres_parts(d: usize, m: usize) -> RecordParts {
    let name = Family::ProductSpheres { d, m }.space_name();
    let mut spherical = vec![(d, "x")];
    spherical.push((m, "y"));
    let needs_flag = !HOPF_DEGREES.contains(&d) || !HOPF_DEGREES.contains(&m);
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: true,
        suspension: false,
        spherical: spherical_meta(&spherical),
        constraints: if needs_flag {
            vec![crate::algebra::ConstraintFlag::Spherical]
        } else {
            vec![]
        },
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: d + m,
        body: Body::Poly {
            gens: vec![gen("x", d), gen("y", m)],
            rels: vec![single_var_rel("x", 2), single_var_rel("y", 2)],
        },
        meta,
        pos: Pos::default(),
    };

    let expected_ucharrank = if d == m || !HOPF_DEGREES.contains(&d) {
        d - 1
    } else if !HOPF_DEGREES.contains(&m) {
        m - 1
    } else {
        d + m
    };

    let mut bundle_sources = vec![tangent_profile(&Family::ProductSpheres { d, m })
        .expect("tangent defined for sphere products")];
    let mut claims = vec![
        claim(
            "ucharrank",
            "ucharrank(S^d x S^m) is d-1, m-1 or d+m depending on which factors carry Hopf bundles",
            ClaimKind::Ucharrank {
                expected: expected_ucharrank,
            },
        ),
        claim(
            "charrank(tangent)",
            "the tangent bundle of a sphere product is stably trivial",
            ClaimKind::BundleCharrank {
                bundle: "tangent".into(),
                expected: d.min(m) - 1,
            },
        ),
        claim(
            "cup",
            "cup(S^d x S^m) = 2, witnessed by the product of the factor classes",
            ClaimKind::CupLength { expected: 2 },
        ),
    ];

    if d < m && HOPF_DEGREES.contains(&d) {
        let mut assignments = vec![(d, Poly::var("x"))];
        if HOPF_DEGREES.contains(&m) {
            assignments.push((m, Poly::var("y")));
            assignments.push((d + m, Poly::product(["x", "y"])));
        }
        bundle_sources.push(bundle_src("xi", &name, assignments));
        claims.push(claim(
            "charrank(xi)",
            "pulled-back Hopf bundles realize the maximal charrank over S^d x S^m",
            ClaimKind::BundleCharrank {
                bundle: "xi".into(),
                expected: if HOPF_DEGREES.contains(&m) { d + m } else { m - 1 },
            },
        ));
    }

    if (d, m) == (2, 6) {
        claims.push(claim(
            "null-cobordant bound (z=1)",
            "the null-cobordant cup-length bound at z = charrank(TX) = 1 gives 4",
            ClaimKind::NullCobordantBound {
                z: 1,
                expected_floor: 4,
            },
        ));
        claims.push(claim(
            "bundle bound (xi, k=5)",
            "the bundle cup-length bound at k = 5 sharpens the estimate to 2",
            ClaimKind::BundleBound {
                bundle: "xi".into(),
                k: 5,
                expected_floor: 2,
            },
        ));
    }
    if (d, m) == (4, 8) {
        claims.push(claim(
            "null-cobordant bound (z=3)",
            "the null-cobordant cup-length bound at z = charrank(TX) = 3 gives 3",
            ClaimKind::NullCobordantBound {
                z: 3,
                expected_floor: 3,
            },
        ));
        claims.push(claim(
            "bundle bound (xi, k=7)",
            "the bundle cup-length bound at k = 7 sharpens the estimate to 2",
            ClaimKind::BundleBound {
                bundle: "xi".into(),
                k: 7,
                expected_floor: 2,
            },
        ));
    }

    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn rp_parts(n: usize) -> RecordParts {
    let name = Family::Rp { n }.space_name();
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: n % 2 == 1,
        suspension: false,
        spherical: spherical_meta(&[(1, "a")]),
        constraints: vec![],
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: n,
        body: Body::Poly {
            gens: vec![gen("a", 1)],
            rels: vec![single_var_rel("a", n as u32 + 1)],
        },
        meta,
        pos: Pos::default(),
    };
    let tangent = tangent_profile(&Family::Rp { n }).expect("tangent defined for RP^n");
    let tangent_charrank = if n.is_multiple_of(2) { n } else { 0 };
    let bundle_sources = vec![bundle_src("gamma", &name, vec![(1, Poly::var("a"))]), tangent];
    let claims = vec![
        claim(
            "ucharrank",
            "ucharrank(RP^n) = n",
            ClaimKind::Ucharrank { expected: n },
        ),
        claim(
            "charrank set",
            "every bundle over RP^n has charrank 0 or n",
            ClaimKind::CharrankSet {
                expected: if n == 0 { vec![0] } else { vec![0, n] },
            },
        ),
        claim(
            "charrank(gamma)",
            "the canonical line bundle generates the cohomology of RP^n",
            ClaimKind::BundleCharrank {
                bundle: "gamma".into(),
                expected: n,
            },
        ),
        claim(
            "charrank(tangent)",
            "derived: w(T RP^n) = (1+a)^{n+1}, so w_1 vanishes exactly for odd n",
            ClaimKind::BundleCharrank {
                bundle: "tangent".into(),
                expected: tangent_charrank,
            },
        ),
        claim(
            "cup",
            "cup(RP^n) = n, witnessed by a^n",
            ClaimKind::CupLength { expected: n },
        ),
    ];
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn cp_parts(n: usize) -> RecordParts {
    let name = Family::Cp { n }.space_name();
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: n % 2 == 1,
        suspension: false,
        spherical: spherical_meta(&[(2, "b")]),
        constraints: vec![],
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: 2 * n,
        body: Body::Poly {
            gens: vec![gen("b", 2)],
            rels: vec![single_var_rel("b", n as u32 + 1)],
        },
        meta,
        pos: Pos::default(),
    };
    let bundle_sources = vec![bundle_src("gamma", &name, vec![(2, Poly::var("b"))])];
    let claims = vec![
        claim(
            "ucharrank",
            "ucharrank(CP^n) = 2n",
            ClaimKind::Ucharrank { expected: 2 * n },
        ),
        claim(
            "charrank set",
            "charrank over CP^n is 1 when w_2 = 0 and 2n otherwise",
            ClaimKind::CharrankSet {
                expected: vec![1, 2 * n],
            },
        ),
        claim(
            "charrank(gamma)",
            "the canonical complex line bundle has w_2 = b and charrank 2n",
            ClaimKind::BundleCharrank {
                bundle: "gamma".into(),
                expected: 2 * n,
            },
        ),
        claim(
            "cup",
            "cup(CP^n) = n, witnessed by b^n",
            ClaimKind::CupLength { expected: n },
        ),
    ];
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn s1_x_cp_parts(n: usize) -> RecordParts {
    let name = Family::S1xCp { n }.space_name();
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: true,
        suspension: false,
        spherical: spherical_meta(&[(1, "a"), (2, "b")]),
        constraints: vec![],
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: 2 * n + 1,
        body: Body::Poly {
            gens: vec![gen("a", 1), gen("b", 2)],
            rels: vec![single_var_rel("a", 2), single_var_rel("b", n as u32 + 1)],
        },
        meta,
        pos: Pos::default(),
    };
    let bundle_sources = vec![
        bundle_src("gamma", &name, vec![(1, Poly::var("a"))]),
        bundle_src("eta", &name, vec![(2, Poly::var("b"))]),
        bundle_src(
            "gamma_plus_eta",
            &name,
            vec![(1, Poly::var("a")), (2, Poly::var("b")), (3, Poly::product(["a", "b"]))],
        ),
    ];
    let claims = vec![
        claim(
            "ucharrank",
            "ucharrank(S^1 x CP^n) = 2n+1",
            ClaimKind::Ucharrank { expected: 2 * n + 1 },
        ),
        claim(
            "charrank set",
            "charrank over S^1 x CP^n is 0, 1 or 2n+1",
            ClaimKind::CharrankSet {
                expected: vec![0, 1, 2 * n + 1],
            },
        ),
        claim(
            "charrank(gamma)",
            "a line bundle with w_1 = a stops at degree 1 since w_2 = 0",
            ClaimKind::BundleCharrank {
                bundle: "gamma".into(),
                expected: 1,
            },
        ),
        claim(
            "charrank(eta)",
            "an orientable 2-plane bundle has charrank 0 as r_X = 1",
            ClaimKind::BundleCharrank {
                bundle: "eta".into(),
                expected: 0,
            },
        ),
        claim(
            "charrank(gamma+eta)",
            "the Whitney sum realizes all of H^*(S^1 x CP^n)",
            ClaimKind::BundleCharrank {
                bundle: "gamma_plus_eta".into(),
                expected: 2 * n + 1,
            },
        ),
        claim(
            "cup",
            "cup(S^1 x CP^n) = n+1, witnessed by a*b^n",
            ClaimKind::CupLength { expected: n + 1 },
        ),
    ];
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn dold_parts(m: usize, n: usize) -> RecordParts {
    let name = Family::Dold { m, n }.space_name();
    let meta = MetaBlock {
        poincare: true,
        // Not certified for this family; the null-cobordant bound stays
        // unavailable rather than risking an unsound input flag.
        null_cobordant: false,
        suspension: false,
        spherical: Vec::new(),
        constraints: vec![],
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: m + 2 * n,
        body: Body::Poly {
            gens: vec![gen("c", 1), gen("d", 2)],
            rels: vec![
                single_var_rel("c", m as u32 + 1),
                single_var_rel("d", n as u32 + 1),
            ],
        },
        meta,
        pos: Pos::default(),
    };
    let bundle_sources = vec![
        bundle_src("xi", &name, vec![(1, Poly::var("c"))]),
        bundle_src("eta", &name, vec![(1, Poly::var("c")), (2, Poly::var("d"))]),
    ];
    let claims = vec![
        claim(
            "ucharrank",
            "ucharrank(P(m,n)) = 2n+m",
            ClaimKind::Ucharrank {
                expected: 2 * n + m,
            },
        ),
        claim(
            "charrank set",
            "charrank over P(m,n) is 0, 1 or 2n+m",
            ClaimKind::CharrankSet {
                expected: vec![0, 1, 2 * n + m],
            },
        ),
        claim(
            "charrank(xi)",
            "the line bundle with w = 1+c has charrank 1 since c^2 covers only part of H^2",
            ClaimKind::BundleCharrank {
                bundle: "xi".into(),
                expected: 1,
            },
        ),
        claim(
            "charrank(eta)",
            "the 2-plane bundle with w = 1+c+d generates H^*(P(m,n))",
            ClaimKind::BundleCharrank {
                bundle: "eta".into(),
                expected: 2 * n + m,
            },
        ),
        claim(
            "cup",
            "derived: cup(P(m,n)) = m+n, witnessed by c^m d^n",
            ClaimKind::CupLength { expected: m + n },
        ),
    ];
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn moore_parts(n: usize) -> RecordParts {
    let name = Family::Moore { n }.space_name();
    let lower = format!("x{n}");
    let upper = format!("x{}", n + 1);
    let constraints = if n == 2 {
        vec![crate::algebra::ConstraintFlag::WuSq1]
    } else if n == 4 || n == 8 {
        vec![crate::algebra::ConstraintFlag::TrivialOnly]
    } else {
        vec![crate::algebra::ConstraintFlag::Spherical]
    };
    let meta = MetaBlock {
        poincare: false,
        null_cobordant: false,
        suspension: true,
        spherical: spherical_meta(&[(n, &lower)]),
        constraints,
        sq1: vec![(lower.clone(), Poly::var(&upper), Pos::default())],
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: n + 1,
        body: Body::Table {
            basis: vec![basis_decl(lower.clone(), n), basis_decl(upper.clone(), n + 1)],
            prods: Vec::new(),
        },
        meta,
        pos: Pos::default(),
    };
    let expected = if n == 2 { 3 } else { n - 1 };
    let mut bundle_sources = Vec::new();
    let mut claims = vec![
        claim(
            "ucharrank",
            if n == 2 {
                "ucharrank(M(Z2,2)) = 3: the Wu relation forces w_3 alongside w_2"
            } else {
                "ucharrank(M(Z2,n)) = n-1 for n != 2, by sphericality or KO-triviality"
            },
            ClaimKind::Ucharrank { expected },
        ),
        claim(
            "charrank set",
            "constrained charranks over the Moore space",
            ClaimKind::CharrankSet {
                expected: if n == 2 { vec![1, 3] } else { vec![n - 1] },
            },
        ),
        claim(
            "cup",
            "a suspension has cup-length 1",
            ClaimKind::CupLength { expected: 1 },
        ),
    ];
    if n == 2 {
        bundle_sources.push(bundle_src(
            "xi",
            &name,
            vec![(2, Poly::var(&lower)), (3, Poly::var(&upper))],
        ));
        claims.push(claim(
            "charrank(xi)",
            "a bundle with w_2 != 0 over M(Z2,2) has w_3 != 0 and charrank 3",
            ClaimKind::BundleCharrank {
                bundle: "xi".into(),
                expected: 3,
            },
        ));
    }
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn stunted_parts(n: usize, m: usize) -> RecordParts {
    let name = Family::Stunted { n, m }.space_name();
    let class = |i: usize| format!("e{i}");
    let hopf = HOPF_DEGREES.contains(&(m + 1));
    let mut spherical = vec![(m + 1, class(m + 1))];
    if hopf {
        spherical.push((m + 2, class(m + 2)));
    }
    let meta = MetaBlock {
        poincare: false,
        null_cobordant: false,
        suspension: false,
        spherical: spherical
            .iter()
            .map(|(deg, name)| (*deg, name.clone(), Pos::default()))
            .collect(),
        constraints: vec![crate::algebra::ConstraintFlag::Spherical],
        sq1: Vec::new(),
    };
    let basis = (m + 1..=n).map(|i| basis_decl(class(i), i)).collect();
    let mut prods = Vec::new();
    for i in m + 1..=n {
        for j in i..=n {
            if i + j <= n {
                prods.push(ProdDecl {
                    left: class(i),
                    right: class(j),
                    value: Poly::var(class(i + j)),
                    pos: Pos::default(),
                });
            }
        }
    }
    let presentation = Presentation {
        name: name.clone(),
        dim: n,
        body: Body::Table { basis, prods },
        meta,
        pos: Pos::default(),
    };
    let expected = if hopf { m + 1 } else { m };
    let mut bundle_sources = Vec::new();
    let mut claims = vec![
        claim(
            "ucharrank",
            "ucharrank(RP^n/RP^m) is m+1 when m+1 is a Hopf degree and m otherwise",
            ClaimKind::Ucharrank { expected },
        ),
        claim(
            "charrank set",
            "constrained charranks over the stunted projective space",
            ClaimKind::CharrankSet {
                expected: if hopf { vec![m, m + 1] } else { vec![m] },
            },
        ),
        claim(
            "cup",
            "derived: cup(RP^n/RP^m) = floor(n/(m+1)) from the inherited products",
            ClaimKind::CupLength {
                expected: n / (m + 1),
            },
        ),
    ];
    if hopf {
        bundle_sources.push(bundle_src(
            "xi",
            &name,
            vec![(m + 1, Poly::var(class(m + 1)))],
        ));
        claims.push(claim(
            "charrank(xi)",
            "the Hopf bundle extends over the stunted space with w_{m+1} != 0",
            ClaimKind::BundleCharrank {
                bundle: "xi".into(),
                expected: m + 1,
            },
        ));
    }
    RecordParts {
        presentation,
        bundle_sources,
        claims,
    }
}

fn lens_parts(m: usize, n: usize) -> RecordParts {
    let name = Family::Lens { m, n }.space_name();
    let top = format!("t{}", 2 * n - 1);
    let meta = MetaBlock {
        poincare: true,
        null_cobordant: true,
        suspension: false,
        spherical: Vec::new(),
        constraints: vec![crate::algebra::ConstraintFlag::TrivialOnly],
        sq1: Vec::new(),
    };
    let presentation = Presentation {
        name: name.clone(),
        dim: 2 * n - 1,
        body: Body::Table {
            basis: vec![basis_decl(top, 2 * n - 1)],
            prods: Vec::new(),
        },
        meta,
        pos: Pos::default(),
    };
    let claims = vec![
        claim(
            "ucharrank",
            "bundles over an odd-sheeted lens space are SW-trivial, so ucharrank = 2n-2",
            ClaimKind::Ucharrank { expected: 2 * n - 2 },
        ),
        claim(
            "charrank set",
            "only the trivial profile survives",
            ClaimKind::CharrankSet {
                expected: vec![2 * n - 2],
            },
        ),
        claim(
            "cup",
            "a mod-2 homology sphere has cup-length 1",
            ClaimKind::CupLength { expected: 1 },
        ),
    ];
    RecordParts {
        presentation,
        bundle_sources: Vec::new(),
        claims,
    }
}

/// Builds the record for a family instance, realized and validated.
pub fn build(family: Family) -> Result<SpaceRecord, CatalogError> {
    let parts = match family {
        Family::Sphere { d } => {
            if d < 1 {
                return Err(err(&family, "d must be at least 1"));
            }
            sphere_parts(d)
        }
        Family::ProductSpheres { d, m } => {
            if d < 1 || m < 1 {
                return Err(err(&family, "both factors must have dimension at least 1"));
            }
            let (d, m) = (d.min(m), d.max(m));
            product_spheres_parts(d, m)
        }
        Family::Rp { n } => {
            if n < 1 {
                return Err(err(&family, "n must be at least 1"));
            }
            rp_parts(n)
        }
        Family::Cp { n } => {
            if n < 1 {
                return Err(err(&family, "n must be at least 1"));
            }
            cp_parts(n)
        }
        Family::S1xCp { n } => {
            if n < 1 {
                return Err(err(&family, "n must be at least 1"));
            }
            s1_x_cp_parts(n)
        }
        Family::Dold { m, n } => {
            if m < 1 || n < 1 {
                return Err(err(&family, "m and n must be at least 1"));
            }
            dold_parts(m, n)
        }
        Family::Moore { n } => {
            if n < 2 {
                return Err(err(&family, "n must be at least 2"));
            }
            moore_parts(n)
        }
        Family::Stunted { n, m } => {
            if m < 1 || m + 2 > n {
                return Err(err(&family, "need 1 <= m <= n-2"));
            }
            stunted_parts(n, m)
        }
        Family::Lens { m, n } => {
            if m < 3 || m % 2 == 0 {
                return Err(err(&family, "m must be odd and at least 3"));
            }
            if n < 2 {
                return Err(err(&family, "n must be at least 2"));
            }
            lens_parts(m, n)
        }
    };
    finish(family, parts)
}

/// The tangent-bundle profile, for the families where it is determined:
/// trivial for sphere products, `(1+a)^{n+1}` truncated for RP^n.
pub fn tangent_profile(family: &Family) -> Result<SWProfileSource, CatalogError> {
    match *family {
        Family::ProductSpheres { .. } => Ok(bundle_src(
            "tangent",
            &family.space_name(),
            Vec::new(),
        )),
        Family::Rp { n } => {
            // Binomial coefficients mod 2: (n+1 choose i) is odd iff i is a
            // submask of n+1.
            let assignments = (1..=n)
                .filter(|&i| i & (n + 1) == i)
                .map(|i| (i, Poly::power("a", i as u32)))
                .collect();
            Ok(bundle_src("tangent", &family.space_name(), assignments))
        }
        _ => Err(CatalogError::UnsupportedTangent(
            family.cli_name().to_string(),
        )),
    }
}

/// Renders a record (presentation plus bundles) in the presentation
/// language; parsing the output reproduces the record's algebra and
/// profiles.
pub fn emit(record: &SpaceRecord) -> String {
    let mut parts = vec![dsl::render_presentation(&record.presentation)];
    for bundle in &record.bundles {
        parts.push(dsl::render_bundle(&bundle.source));
    }
    parts.join("\n")
}

/// The instances replayed by `crk verify`.
pub fn default_records() -> Vec<SpaceRecord> {
    let mut families = Vec::new();
    for d in [1, 2, 3, 4, 6, 8] {
        families.push(Family::Sphere { d });
    }
    for (d, m) in [(3, 5), (2, 6), (4, 8), (1, 2), (2, 2), (3, 3)] {
        families.push(Family::ProductSpheres { d, m });
    }
    for n in 2..=8 {
        families.push(Family::Rp { n });
    }
    for n in 1..=4 {
        families.push(Family::Cp { n });
    }
    for n in 1..=3 {
        families.push(Family::S1xCp { n });
    }
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
        families.push(Family::Dold { m, n });
    }
    for n in [2, 3, 4, 5, 8] {
        families.push(Family::Moore { n });
    }
    for (n, m) in [(5, 1), (6, 3), (7, 2), (9, 3), (10, 7)] {
        families.push(Family::Stunted { n, m });
    }
    for (m, n) in [(3, 2), (5, 3)] {
        families.push(Family::Lens { m, n });
    }
    families
        .into_iter()
        .map(|f| build(f).expect("default catalog instances are in range"))
        .collect()
}

// ---------------------------------------------------------------------------
// Claim verification
// ---------------------------------------------------------------------------

/// Outcome of replaying one expected value.
#[derive(Debug, Clone)]
pub struct ClaimOutcome {
    pub space: String,
    pub label: String,
    pub citation: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

fn outcome(record: &SpaceRecord, c: &Claim, expected: String, computed: String) -> ClaimOutcome {
    ClaimOutcome {
        space: record.name().to_string(),
        label: c.label.clone(),
        citation: c.citation.clone(),
        pass: expected == computed,
        expected,
        computed,
    }
}

/// Recomputes every claim of the record with the engine.
pub fn verify_record(record: &SpaceRecord, limit: u64) -> Vec<ClaimOutcome> {
    record
        .claims
        .iter()
        .map(|c| match &c.kind {
            ClaimKind::Ucharrank { expected } => {
                let computed = engine::ucharrank_formal(&record.algebra, &record.constraints, limit)
                    .map(|r| r.value.to_string())
                    .unwrap_or_else(|e| format!("error: {e}"));
                outcome(record, c, expected.to_string(), computed)
            }
            ClaimKind::CharrankSet { expected } => {
                let computed = match engine::enumerate_profiles(
                    &record.algebra,
                    &record.constraints,
                    limit,
                ) {
                    Ok(iter) => {
                        let mut set: Vec<usize> =
                            iter.map(|p| engine::charrank(&p)).collect();
                        set.sort_unstable();
                        set.dedup();
                        format!("{set:?}")
                    }
                    Err(e) => format!("error: {e}"),
                };
                outcome(record, c, format!("{expected:?}"), computed)
            }
            ClaimKind::BundleCharrank { bundle, expected } => {
                let computed = match record.bundle(bundle) {
                    Some(b) => engine::charrank(&b.profile).to_string(),
                    None => format!("error: no bundle {bundle}"),
                };
                outcome(record, c, expected.to_string(), computed)
            }
            ClaimKind::CupLength { expected } => outcome(
                record,
                c,
                expected.to_string(),
                engine::cup_length(&record.algebra).to_string(),
            ),
            ClaimKind::NullCobordantBound { z, expected_floor } => {
                let computed = engine::cup_bound_null_cobordant(&record.algebra, *z)
                    .map(|b| b.floor.to_string())
                    .unwrap_or_else(|e| format!("error: {e}"));
                outcome(record, c, expected_floor.to_string(), computed)
            }
            ClaimKind::BundleBound {
                bundle,
                k,
                expected_floor,
            } => {
                let computed = match record.bundle(bundle) {
                    Some(b) => engine::cup_bound_from_profile(&b.profile, *k)
                        .map(|r| r.floor.to_string())
                        .unwrap_or_else(|e: EngineError| format!("error: {e}")),
                    None => format!("error: no bundle {bundle}"),
                };
                outcome(record, c, expected_floor.to_string(), computed)
            }
        })
        .collect()
}
