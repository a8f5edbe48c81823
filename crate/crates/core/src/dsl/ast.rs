//! Source forms produced by the parser.

use crate::algebra::ConstraintFlag;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A polynomial expression over generators or basis classes, F2
/// coefficients. An empty term list is the zero polynomial; a term with no
/// factors is the constant one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub terms: Vec<Term>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub base: Atom,
    pub exp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Var { name: String, pos: Pos },
    /// `Const(false)` is 0, `Const(true)` is 1.
    Const(bool),
    Group(Box<Poly>),
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: Vec::new(),
            pos: Pos::default(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Poly {
            terms: vec![Term {
                factors: vec![Factor {
                    base: Atom::Var {
                        name: name.into(),
                        pos: Pos::default(),
                    },
                    exp: 1,
                }],
            }],
            pos: Pos::default(),
        }
    }

    pub fn power(name: impl Into<String>, exp: u32) -> Self {
        Poly {
            terms: vec![Term {
                factors: vec![Factor {
                    base: Atom::Var {
                        name: name.into(),
                        pos: Pos::default(),
                    },
                    exp,
                }],
            }],
            pos: Pos::default(),
        }
    }

    /// Product of single variables, e.g. `x*y`.
    pub fn product<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        Poly {
            terms: vec![Term {
                factors: names
                    .into_iter()
                    .map(|n| Factor {
                        base: Atom::Var {
                            name: n.into(),
                            pos: Pos::default(),
                        },
                        exp: 1,
                    })
                    .collect(),
            }],
            pos: Pos::default(),
        }
    }

    /// Sum of polynomials.
    pub fn sum(polys: impl IntoIterator<Item = Poly>) -> Self {
        let mut terms = Vec::new();
        for p in polys {
            terms.extend(p.terms);
        }
        Poly {
            terms,
            pos: Pos::default(),
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A single monomial in the generators, e.g. `c^3` or `c*d^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub factors: Vec<(String, u32)>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisDecl {
    pub name: String,
    pub degree: usize,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProdDecl {
    pub left: String,
    pub right: String,
    pub value: Poly,
    pub pos: Pos,
}

/// Body of a space block: a polynomial quotient by a monomial ideal, or an
/// explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Poly {
        gens: Vec<Generator>,
        rels: Vec<Monomial>,
    },
    Table {
        basis: Vec<BasisDecl>,
        prods: Vec<ProdDecl>,
    },
}

/// Parsed metadata of a space block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetaBlock {
    pub poincare: bool,
    pub null_cobordant: bool,
    pub suspension: bool,
    /// `(degree, class name)` pairs declared spherical.
    pub spherical: Vec<(usize, String, Pos)>,
    pub constraints: Vec<ConstraintFlag>,
    /// Declared Sq^1 images of named classes.
    pub sq1: Vec<(String, Poly, Pos)>,
}

/// Parsed source form of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub dim: usize,
    pub body: Body,
    pub meta: MetaBlock,
    pub pos: Pos,
}

/// Parsed source form of a bundle's Stiefel-Whitney assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SWProfileSource {
    pub name: String,
    pub space: String,
    /// `w_i = poly` assignments; unassigned indices are zero.
    pub assignments: Vec<(usize, Poly)>,
    pub pos: Pos,
}

/// Parsed source form of a ring map; unassigned generators map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMapSource {
    pub name: String,
    pub source: String,
    pub target: String,
    pub images: Vec<(String, Poly)>,
    pub pos: Pos,
}

/// A parsed, cross-reference-checked document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub spaces: Vec<Presentation>,
    pub bundles: Vec<SWProfileSource>,
    pub maps: Vec<RingMapSource>,
}

impl Document {
    pub fn space(&self, name: &str) -> Option<&Presentation> {
        self.spaces.iter().find(|s| s.name == name)
    }

    pub fn bundle(&self, space: &str, name: &str) -> Option<&SWProfileSource> {
        self.bundles
            .iter()
            .find(|b| b.space == space && b.name == name)
    }

    pub fn map(&self, name: &str) -> Option<&RingMapSource> {
        self.maps.iter().find(|m| m.name == name)
    }
}
